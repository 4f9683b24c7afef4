//! Regulated hulls: the minimal sub-forest spanning a forward-invariant
//! marked set that contains every critical vertex.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::forest::HubbardForest;
use crate::schema::MappingSchema;
use crate::tree::{Spoke, VertexId};

/// Reasons a marked set is inadmissible for hull extraction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HullError {
    #[error("marked vertex {0} is not a forest vertex")]
    UnknownMarkedVertex(VertexId),
    #[error("marked set is not forward invariant: {vertex} maps to unmarked {image}")]
    NotForwardInvariant { vertex: VertexId, image: VertexId },
    #[error("critical vertex {0} is not marked")]
    MissingCriticalVertex(VertexId),
}

/// One retained direction at a hull vertex while gaps are being reworked.
struct HullSpoke {
    /// First ambient edge of the merged edge.
    first: VertexId,
    /// The retained vertex at the far end.
    to: VertexId,
    /// Gap to the next retained direction, counterclockwise.
    gap: BigRational,
}

/// Extracts the regulated hull of `marked`: per tree, the union of paths
/// between marked vertices, with only marked vertices and branch points
/// (three or more union directions) retained, chains of dropped degree-2
/// vertices merged into single edges, and the dynamics restricted.
///
/// Angles between retained directions start as the ambient angles; gaps at
/// periodic Julia vertices are then renormalized to the uniform value the
/// reduced valence demands, and gaps at preperiodic Julia vertices are
/// recomputed from their images through the angle equation, preserving the
/// ambient winding. Fatou vertices keep the ambient sums. Trees containing
/// no marked vertex are dropped together with their schema vertices.
///
/// The forest itself must be valid; admissibility of `marked` is checked.
pub fn hull(
    h: &HubbardForest,
    marked: &BTreeSet<VertexId>,
) -> Result<HubbardForest, HullError> {
    for m in marked {
        if !h.contains_vertex(m) {
            return Err(HullError::UnknownMarkedVertex(m.clone()));
        }
    }
    for m in marked {
        let image = h.vertex_image(m);
        if !marked.contains(image) {
            return Err(HullError::NotForwardInvariant {
                vertex: m.clone(),
                image: image.clone(),
            });
        }
    }
    for v in h.global_vertices() {
        if h.is_critical(v) && !marked.contains(v) {
            return Err(HullError::MissingCriticalVertex(v.clone()));
        }
    }

    // Union of paths, retained vertices, and merged rings with ambient gaps.
    let mut rings: BTreeMap<VertexId, Vec<HullSpoke>> = BTreeMap::new();
    let mut kept_schema = BTreeSet::new();
    for (u, tree) in h.trees() {
        let mu: Vec<&VertexId> = tree.vertices().filter(|v| marked.contains(*v)).collect();
        if mu.is_empty() {
            continue;
        }
        kept_schema.insert(u.clone());
        let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for m in &mu {
            adjacency.entry((*m).clone()).or_default();
        }
        for (i, a) in mu.iter().enumerate() {
            for b in &mu[i + 1..] {
                let path = tree.path(a, b).expect("hull input trees are connected");
                for step in path.windows(2) {
                    adjacency
                        .entry(step[0].clone())
                        .or_default()
                        .insert(step[1].clone());
                    adjacency
                        .entry(step[1].clone())
                        .or_default()
                        .insert(step[0].clone());
                }
            }
        }
        let kept: BTreeSet<&VertexId> = adjacency
            .iter()
            .filter(|(v, nb)| marked.contains(*v) || nb.len() >= 3)
            .map(|(v, _)| v)
            .collect();
        for &v in &kept {
            let nb = &adjacency[v];
            let dirs: Vec<&VertexId> = tree
                .ring(v)
                .iter()
                .filter(|s| nb.contains(&s.to))
                .map(|s| &s.to)
                .collect();
            let mut spokes = Vec::with_capacity(dirs.len());
            for (i, &first) in dirs.iter().enumerate() {
                // Walk the union chain to the next retained vertex.
                let mut prev = v.clone();
                let mut cur = first.clone();
                while !kept.contains(&cur) {
                    let next = adjacency[&cur]
                        .iter()
                        .find(|n| **n != prev)
                        .expect("chain interiors have exactly two union neighbors")
                        .clone();
                    prev = cur;
                    cur = next;
                }
                let gap = if dirs.len() == 1 {
                    BigRational::one()
                } else {
                    tree.angle_between(v, first, dirs[(i + 1) % dirs.len()])
                        .expect("retained directions share the ring")
                };
                spokes.push(HullSpoke {
                    first: first.clone(),
                    to: cur,
                    gap,
                });
            }
            rings.insert(v.clone(), spokes);
        }
    }

    let classes = h.classify_vertices();

    // A periodic Julia vertex with m' retained directions must have every
    // gap a multiple of 1/m'; positivity and sum 1 force exactly 1/m'.
    for (v, spokes) in rings.iter_mut() {
        let class = &classes[v];
        if class.julia && class.is_periodic() && !spokes.is_empty() {
            let m = BigInt::from(spokes.len());
            for s in spokes.iter_mut() {
                s.gap = BigRational::new(BigInt::one(), m.clone());
            }
        }
    }

    // Preperiodic Julia vertices, in increasing preperiod order, pull their
    // gaps back from the image through the angle equation. The integer part
    // of each equation (the winding) is read off the ambient angles, so the
    // new gaps stay positive and sum to 1.
    let mut preperiodic: Vec<VertexId> = rings
        .keys()
        .filter(|v| {
            let c = &classes[*v];
            c.julia && c.preperiod > 0
        })
        .cloned()
        .collect();
    preperiodic.sort_by_key(|v| classes[v].preperiod);
    for v in preperiodic {
        let n = rings[&v].len();
        if n == 0 {
            continue;
        }
        let w = h.vertex_image(&v).clone();
        let delta = BigRational::from(BigInt::from(u64::from(h.vertex_degree(&v))));
        let image_tree = h.tree(h.home_of(&w));
        let image_dirs: Vec<VertexId> = rings[&v]
            .iter()
            .map(|s| {
                let fa = h.vertex_image(&s.first);
                let path = image_tree
                    .path(&w, fa)
                    .expect("valid forests keep images connected");
                assert!(path.len() >= 2, "valid forests do not collapse edges");
                path[1].clone()
            })
            .collect();
        let w_firsts: Vec<VertexId> = rings[&w].iter().map(|s| s.first.clone()).collect();
        let w_gaps: Vec<BigRational> = rings[&w].iter().map(|s| s.gap.clone()).collect();
        let mut new_gaps = Vec::with_capacity(n);
        for i in 0..n {
            let a = &image_dirs[i];
            let b = &image_dirs[(i + 1) % n];
            let ambient = image_tree
                .angle_between(&w, a, b)
                .expect("image directions exist in the ambient tree");
            let winding = &delta * &rings[&v][i].gap - ambient;
            assert!(winding.is_integer(), "hull requires a valid forest");
            let pa = w_firsts
                .iter()
                .position(|f| f == a)
                .expect("images of retained directions are retained");
            let pb = w_firsts
                .iter()
                .position(|f| f == b)
                .expect("images of retained directions are retained");
            let mut new_angle = BigRational::zero();
            let mut t = pa;
            while t != pb {
                new_angle += &w_gaps[t];
                t = (t + 1) % w_gaps.len();
            }
            new_gaps.push((new_angle + winding) / &delta);
        }
        for (s, g) in rings.get_mut(&v).unwrap().iter_mut().zip(new_gaps) {
            s.gap = g;
        }
    }

    // Reassemble: restricted schema, merged trees, restricted dynamics.
    let mut new_trees = BTreeMap::new();
    let mut new_maps = BTreeMap::new();
    let mut new_degrees = BTreeMap::new();
    for u in &kept_schema {
        let mut tree_rings = BTreeMap::new();
        let mut map_u = BTreeMap::new();
        let mut deg_u = BTreeMap::new();
        for v in h.tree(u).vertices() {
            let Some(spokes) = rings.get(v) else {
                continue;
            };
            tree_rings.insert(
                v.clone(),
                spokes
                    .iter()
                    .map(|s| Spoke::new(s.to.clone(), s.gap.clone()))
                    .collect(),
            );
            map_u.insert(v.clone(), h.vertex_image(v).clone());
            deg_u.insert(v.clone(), h.vertex_degree(v));
        }
        new_trees.insert(
            u.clone(),
            crate::tree::AngledTree::new(tree_rings).expect("hull rings are structurally sound"),
        );
        new_maps.insert(u.clone(), map_u);
        new_degrees.insert(u.clone(), deg_u);
    }
    let f = h
        .schema()
        .map()
        .iter()
        .filter(|(a, _)| kept_schema.contains(*a))
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    let w = h
        .schema()
        .weights()
        .iter()
        .filter(|(a, _)| kept_schema.contains(*a))
        .map(|(a, b)| (a.clone(), *b))
        .collect();
    let schema =
        MappingSchema::new(f, w).expect("retained schema vertices are forward closed");
    Ok(HubbardForest::new(schema, new_trees, new_maps, new_degrees)
        .expect("hull output is structurally sound"))
}
