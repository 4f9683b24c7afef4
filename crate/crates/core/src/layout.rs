//! Straight-line planar embeddings of angled trees.
//!
//! The layout assigns each subtree an open angular cone and places children
//! on disjoint subcones of their parent's cone, so edges of different
//! branches can never meet. Directions are parametrized by the boundary of a
//! square instead of the unit circle, which keeps every coordinate an exact
//! rational.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::angle::reduce_mod_1;
use crate::tree::{AngledTree, VertexId};

/// An exact planar position.
pub type Point = (BigRational, BigRational);

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The point of the square `[-1, 1]^2` boundary at parameter `t` turns,
/// counterclockwise from `(1, 0)`. Antipodes work exactly: `dir(t + 1/2)`
/// is `-dir(t)`, and the cyclic order of directions is the cyclic order of
/// parameters.
fn dir(t: &BigRational) -> Point {
    let s = reduce_mod_1(t.clone()) * rat(8, 1);
    if s < rat(1, 1) {
        (rat(1, 1), s)
    } else if s < rat(3, 1) {
        (rat(2, 1) - &s, rat(1, 1))
    } else if s < rat(5, 1) {
        (rat(-1, 1), rat(4, 1) - &s)
    } else if s < rat(7, 1) {
        (&s - rat(6, 1), rat(-1, 1))
    } else {
        (rat(1, 1), &s - rat(8, 1))
    }
}

/// A straight-line embedding of a valid tree: at every vertex the
/// counterclockwise order of the incident edges agrees with its ring, and no
/// two edges cross. Coordinates are exact rationals, translated and
/// uniformly scaled so the bounding box is the unit square; a single vertex
/// sits at the origin.
pub fn planar_layout(t: &AngledTree) -> BTreeMap<VertexId, Point> {
    let mut out: BTreeMap<VertexId, Point> = BTreeMap::new();
    let root = match t.vertices().next() {
        Some(v) => v.clone(),
        None => return out,
    };
    out.insert(root.clone(), (BigRational::zero(), BigRational::zero()));

    // Each pending vertex owns the open parameter interval (lo, lo + width):
    // its whole subtree is drawn inside the cone it spans from the vertex.
    struct Frame {
        v: VertexId,
        parent: Option<VertexId>,
        lo: BigRational,
        width: BigRational,
        depth: u32,
    }
    let mut stack = vec![Frame {
        v: root,
        parent: None,
        lo: BigRational::zero(),
        width: BigRational::one(),
        depth: 0,
    }];
    let quarter = rat(1, 4);
    while let Some(frame) = stack.pop() {
        let ring = t.ring(&frame.v);
        // Children in ring order starting after the parent spoke; at the
        // root the whole ring in its stored rotation.
        let children: Vec<&VertexId> = match &frame.parent {
            None => ring.iter().map(|s| &s.to).collect(),
            Some(p) => {
                let at = ring
                    .iter()
                    .position(|s| &s.to == p)
                    .expect("parent spoke is in the ring");
                (1..ring.len())
                    .map(|i| &ring[(at + i) % ring.len()].to)
                    .collect()
            }
        };
        if children.is_empty() {
            continue;
        }
        let here = out[&frame.v].clone();
        let slot = &frame.width / rat(children.len() as i64, 1);
        // Keep every cone pointed: a child interval never exceeds a quarter
        // turn, so its antipodal back edge stays outside it.
        let width = if slot > quarter {
            quarter.clone()
        } else {
            slot.clone()
        };
        let radius = BigRational::new(BigInt::one(), BigInt::from(2).pow(frame.depth + 1));
        for (i, c) in children.into_iter().enumerate() {
            let lo = &frame.lo + &slot * rat(i as i64, 1);
            let center = &lo + &width / rat(2, 1);
            let d = dir(&center);
            let pos = (&here.0 + &radius * &d.0, &here.1 + &radius * &d.1);
            out.insert(c.clone(), pos);
            stack.push(Frame {
                v: c.clone(),
                parent: Some(frame.v.clone()),
                lo,
                width: width.clone(),
                depth: frame.depth + 1,
            });
        }
    }

    normalize(out)
}

/// Translates to the origin and scales the longer side to 1.
fn normalize(pts: BTreeMap<VertexId, Point>) -> BTreeMap<VertexId, Point> {
    if pts.len() < 2 {
        return pts;
    }
    let min_x = pts.values().map(|p| &p.0).min().unwrap().clone();
    let min_y = pts.values().map(|p| &p.1).min().unwrap().clone();
    let max_x = pts.values().map(|p| &p.0).max().unwrap().clone();
    let max_y = pts.values().map(|p| &p.1).max().unwrap().clone();
    let side = std::cmp::max(&max_x - &min_x, &max_y - &min_y);
    pts.into_iter()
        .map(|(v, (x, y))| (v, ((x - &min_x) / &side, (y - &min_y) / &side)))
        .collect()
}

fn sub(a: &Point, b: &Point) -> Point {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn cross(a: &Point, b: &Point) -> BigRational {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn dot(a: &Point, b: &Point) -> BigRational {
    &a.0 * &b.0 + &a.1 * &b.1
}

/// Which half turn `u` falls in, measured counterclockwise from `base`:
/// 0 for [0, 1/2), 1 for [1/2, 1).
fn half(base: &Point, u: &Point) -> u8 {
    let c = cross(base, u);
    if c.is_positive() || (c.is_zero() && dot(base, u).is_positive()) {
        0
    } else {
        1
    }
}

/// Strict counterclockwise order of `u` before `v`, angles measured from
/// `base`.
fn angular_less(base: &Point, u: &Point, v: &Point) -> bool {
    let (hu, hv) = (half(base, u), half(base, v));
    if hu != hv {
        hu < hv
    } else {
        cross(u, v).is_positive()
    }
}

/// Whether the counterclockwise order of edge directions at every vertex of
/// degree at least 3 matches its ring. Degree 1 and 2 rings are always
/// consistent.
pub fn respects_ring_orientation(t: &AngledTree, pts: &BTreeMap<VertexId, Point>) -> bool {
    for v in t.vertices() {
        let ring = t.ring(v);
        if ring.len() < 3 {
            continue;
        }
        let here = &pts[v];
        let dirs: Vec<Point> = ring.iter().map(|s| sub(&pts[&s.to], here)).collect();
        if dirs.iter().any(|d| d.0.is_zero() && d.1.is_zero()) {
            return false;
        }
        let base = &dirs[0];
        let mut prev = base;
        for d in &dirs[1..] {
            if !angular_less(base, prev, d) {
                return false;
            }
            prev = d;
        }
    }
    true
}

fn sgn(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn within_box(p: &Point, q: &Point, r: &Point) -> bool {
    let (lo_x, hi_x) = if p.0 <= q.0 { (&p.0, &q.0) } else { (&q.0, &p.0) };
    let (lo_y, hi_y) = if p.1 <= q.1 { (&p.1, &q.1) } else { (&q.1, &p.1) };
    lo_x <= &r.0 && &r.0 <= hi_x && lo_y <= &r.1 && &r.1 <= hi_y
}

fn segments_touch(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let d1 = sgn(&cross(&sub(b, a), &sub(c, a)));
    let d2 = sgn(&cross(&sub(b, a), &sub(d, a)));
    let d3 = sgn(&cross(&sub(d, c), &sub(a, c)));
    let d4 = sgn(&cross(&sub(d, c), &sub(b, c)));
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && within_box(a, b, c))
        || (d2 == 0 && within_box(a, b, d))
        || (d3 == 0 && within_box(c, d, a))
        || (d4 == 0 && within_box(c, d, b))
}

/// Whether any two edges of the drawing cross: disjoint edges may not touch
/// at all, edges sharing a vertex may not overlap along a common ray.
pub fn has_edge_crossings(t: &AngledTree, pts: &BTreeMap<VertexId, Point>) -> bool {
    let edges = t.edges();
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            let (a, b) = e.ends();
            let (c, d) = f.ends();
            let shared = [a, b]
                .into_iter()
                .find(|v| *v == c || *v == d);
            if let Some(s) = shared {
                let u = sub(&pts[e.other(s)], &pts[s]);
                let w = sub(&pts[f.other(s)], &pts[s]);
                if cross(&u, &w).is_zero() && dot(&u, &w).is_positive() {
                    return true;
                }
            } else if segments_touch(&pts[a], &pts[b], &pts[c], &pts[d]) {
                return true;
            }
        }
    }
    false
}
