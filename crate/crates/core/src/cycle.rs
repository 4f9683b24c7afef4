//! Dynamics around a schema cycle: simultaneous homogenization of the step
//! coverings, first-return trees, anchor enumeration, and external arguments
//! at the Julia accesses of the return tree.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::angle::{reduce_mod_1, Angle};
use crate::covering::{
    access_dynamics, compose, homogenize, ComposeError, Covering, HomogenizeError,
};
use crate::forest::HubbardForest;
use crate::schema::{MappingSchema, SchemaVertexId};
use crate::tree::{PseudoAccess, VertexId};

/// Why a cycle operation failed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleError {
    /// The forest does not pass validation; cycle dynamics are only defined
    /// on valid forests.
    #[error("forest fails validation with {0} violation(s)")]
    InvalidForest(usize),
    /// The schema is not a single cycle covering every schema vertex.
    #[error("schema is not a single cycle")]
    NotACycle,
    /// The base index does not name a cycle position.
    #[error("cycle position {index} is out of range for a cycle of length {len}")]
    BadBase { index: usize, len: usize },
    /// The anchor index does not name an anchor choice.
    #[error("anchor index {index} is out of range: only {count} anchor choice(s)")]
    BadAnchor { index: usize, count: usize },
    #[error(transparent)]
    Extension(#[from] HomogenizeError),
    #[error(transparent)]
    Composition(#[from] ComposeError),
    /// The boundary dynamics admit no argument assignment with the required
    /// functional equation and cyclic order.
    #[error("no consistent argument assignment: {0}")]
    NoConsistentAssignment(&'static str),
    #[error("internal invariant failed: {0}")]
    Internal(&'static str),
}

/// A schema cycle together with its simultaneously homogenized step
/// coverings, produced by [`homogenize_cycle`].
#[derive(Clone, Debug)]
pub struct CycleContext {
    forest: HubbardForest,
    cycle: Vec<SchemaVertexId>,
    steps: Vec<Covering>,
    m: u64,
}

impl CycleContext {
    /// The validated input forest.
    pub fn forest(&self) -> &HubbardForest {
        &self.forest
    }

    /// The schema cycle, in dynamical order starting at its smallest vertex.
    pub fn cycle(&self) -> &[SchemaVertexId] {
        &self.cycle
    }

    /// Homogenized step coverings anchored at cycle position 0: the chain
    /// composes from index 0 upward and ends on the original tree there.
    pub fn steps(&self) -> &[Covering] {
        &self.steps
    }

    /// Degree of the return dynamics, the product of the step degrees.
    pub fn m(&self) -> u64 {
        self.m
    }
}

/// Restricts a forest to the single cycle of its schema, dropping the trees
/// at strictly preperiodic schema vertices.
pub fn restrict_to_cycle(h: &HubbardForest) -> Result<HubbardForest, CycleError> {
    let cycles = h.schema().cycles();
    if cycles.len() != 1 {
        return Err(CycleError::NotACycle);
    }
    let keep: BTreeSet<&SchemaVertexId> = cycles[0].iter().collect();
    let f = h
        .schema()
        .map()
        .iter()
        .filter(|(u, _)| keep.contains(u))
        .map(|(u, x)| (u.clone(), x.clone()))
        .collect();
    let w = h
        .schema()
        .weights()
        .iter()
        .filter(|(u, _)| keep.contains(u))
        .map(|(u, x)| (u.clone(), *x))
        .collect();
    let schema = MappingSchema::new(f, w)
        .map_err(|_| CycleError::Internal("cycle restriction broke the schema"))?;
    let trees = h
        .trees()
        .iter()
        .filter(|(u, _)| keep.contains(u))
        .map(|(u, t)| (u.clone(), t.clone()))
        .collect();
    let maps = cycles[0]
        .iter()
        .map(|u| (u.clone(), h.map_at(u).clone()))
        .collect();
    let degrees = cycles[0]
        .iter()
        .map(|u| (u.clone(), h.degrees_at(u).clone()))
        .collect();
    HubbardForest::new(schema, trees, maps, degrees)
        .map_err(|_| CycleError::Internal("cycle restriction broke the forest"))
}

/// Homogenizes the step coverings of a single-cycle forest simultaneously.
///
/// The forest must be valid and its schema must consist of one cycle through
/// all schema vertices; use [`restrict_to_cycle`] first to drop preperiodic
/// trees. Extends the trees around the cycle, last step first, so that every
/// step covering becomes homogeneous while the codomain of the final step
/// stays the original tree at cycle position 0.
pub fn homogenize_cycle(h: &HubbardForest) -> Result<CycleContext, CycleError> {
    let report = h.validate(false);
    if !report.is_valid() {
        return Err(CycleError::InvalidForest(report.violations.len()));
    }
    let cycles = h.schema().cycles();
    if cycles.len() != 1 || cycles[0].len() != h.schema().vertex_count() {
        return Err(CycleError::NotACycle);
    }
    let cycle = cycles[0].clone();
    let steps = ladder(h, &cycle, 0)?;
    let m = steps.iter().map(Covering::covering_degree).product();
    Ok(CycleContext {
        forest: h.clone(),
        cycle,
        steps,
        m,
    })
}

/// Builds the homogenized step chain for the rotation of the cycle starting
/// at `base`. Working backward from the last step keeps each codomain equal
/// to the domain of the next covering in the chain: an extension only
/// subdivides edges of the previous tree and grafts new branches, so the
/// untouched step covering into it stays valid and is homogenized in turn.
fn ladder(
    h: &HubbardForest,
    cycle: &[SchemaVertexId],
    base: usize,
) -> Result<Vec<Covering>, CycleError> {
    let r = cycle.len();
    let mut codomain = h.tree(&cycle[base]).clone();
    let mut steps = Vec::with_capacity(r);
    for j in (0..r).rev() {
        let u = &cycle[(base + j) % r];
        let covering = Covering::new(
            h.tree(u).clone(),
            codomain,
            h.map_at(u).clone(),
            h.degrees_at(u).clone(),
        )
        .map_err(|_| CycleError::Internal("step covering lost its structure"))?;
        let ext = homogenize(&covering)?;
        codomain = ext.extended.domain().clone();
        steps.push(ext.extended);
    }
    steps.reverse();
    Ok(steps)
}

/// The composite of the homogenized chain at `base`: a homogeneous covering
/// of the original base tree by its extension, of degree `m`.
fn composite_covering(ctx: &CycleContext, base: usize) -> Result<Covering, CycleError> {
    if base >= ctx.cycle.len() {
        return Err(CycleError::BadBase {
            index: base,
            len: ctx.cycle.len(),
        });
    }
    let rebuilt;
    let steps: &[Covering] = if base == 0 {
        &ctx.steps
    } else {
        rebuilt = ladder(&ctx.forest, &ctx.cycle, base)?;
        &rebuilt
    };
    let mut f = steps[0].clone();
    for step in &steps[1..] {
        f = compose(step, &f)?;
    }
    if f.covering_degree() != ctx.m {
        return Err(CycleError::Internal(
            "return degree disagrees with the step product",
        ));
    }
    Ok(f)
}

/// The first-return self-covering of the extended tree at cycle position
/// `base`: the composite of the homogenized steps, viewed as a map of the
/// extended tree to itself through the inclusion of the original tree.
pub fn return_tree(ctx: &CycleContext, base: usize) -> Result<Covering, CycleError> {
    let f = composite_covering(ctx, base)?;
    self_covering(&f)
}

/// The return dynamics as a single-tree forest over a self-loop schema at
/// the base's schema vertex, with weight `m - 1`.
pub fn return_forest(ctx: &CycleContext, base: usize) -> Result<HubbardForest, CycleError> {
    let f = composite_covering(ctx, base)?;
    forest_of(ctx, base, &f)
}

fn self_covering(f: &Covering) -> Result<Covering, CycleError> {
    Covering::new(
        f.domain().clone(),
        f.domain().clone(),
        f.map().clone(),
        f.degrees().clone(),
    )
    .map_err(|_| CycleError::Internal("return tree lost its structure"))
}

fn forest_of(ctx: &CycleContext, base: usize, f: &Covering) -> Result<HubbardForest, CycleError> {
    let u = ctx.cycle[base].clone();
    let schema = MappingSchema::new(
        [(u.clone(), u.clone())].into_iter().collect(),
        [(u.clone(), ctx.m - 1)].into_iter().collect(),
    )
    .map_err(|_| CycleError::Internal("return schema lost its structure"))?;
    HubbardForest::new(
        schema,
        [(u.clone(), f.domain().clone())].into_iter().collect(),
        [(u.clone(), f.map().clone())].into_iter().collect(),
        [(u, f.degrees().clone())].into_iter().collect(),
    )
    .map_err(|_| CycleError::Internal("return forest lost its structure"))
}

/// Boundary data of the return dynamics at a base: the access cycle of the
/// extended tree, the induced access map, its monotone integer lift, and the
/// Julia vertices of the return forest.
struct ReturnData {
    accesses: Vec<PseudoAccess>,
    sigma: Vec<usize>,
    /// lift[k] for k in 0..=M interpolates to the degree-m circle map
    /// covering sigma; lift[M] = lift[0] + m * M.
    lift: Vec<i64>,
    julia: BTreeSet<VertexId>,
}

fn return_data(ctx: &CycleContext, base: usize) -> Result<ReturnData, CycleError> {
    let composite = composite_covering(ctx, base)?;
    let tree = composite.domain().clone();
    let forest = forest_of(ctx, base, &composite)?;
    let julia = forest
        .classify_vertices()
        .into_iter()
        .filter(|(_, c)| c.julia)
        .map(|(v, _)| v)
        .collect();
    let accesses = tree.pseudoaccess_cycle();
    if accesses.is_empty() {
        return Ok(ReturnData {
            accesses,
            sigma: Vec::new(),
            lift: Vec::new(),
            julia,
        });
    }
    let index: BTreeMap<&PseudoAccess, usize> =
        accesses.iter().enumerate().map(|(k, a)| (a, k)).collect();
    let rho = access_dynamics(&composite)
        .map_err(|_| CycleError::Internal("return access dynamics unavailable"))?;
    let mut sigma = Vec::with_capacity(accesses.len());
    for a in &accesses {
        // The image access lands in the original base tree; its edge may be
        // subdivided in the extension, so reattach along the path.
        let im = &rho[a];
        let path = tree
            .path(&im.vertex, &im.from)
            .filter(|p| p.len() >= 2)
            .ok_or(CycleError::Internal("image access escaped the tree"))?;
        let lifted = PseudoAccess::new(im.vertex.clone(), path[1].clone());
        let k = *index
            .get(&lifted)
            .ok_or(CycleError::Internal("image access is not on the boundary"))?;
        sigma.push(k);
    }
    // Monotone lift: the boundary map moves every access forward by at least
    // one position, and one full turn of the boundary winds m times around.
    let mm = accesses.len() as i64;
    let m_i = i64::try_from(ctx.m).map_err(|_| CycleError::Internal("return degree overflows"))?;
    let mut lift = Vec::with_capacity(accesses.len() + 1);
    lift.push(sigma[0] as i64);
    for k in 0..accesses.len() {
        let step = (sigma[(k + 1) % accesses.len()] as i64 - sigma[k] as i64 - 1).rem_euclid(mm) + 1;
        lift.push(lift[k] + step);
    }
    if lift[accesses.len()] - lift[0] != m_i * mm {
        return Err(CycleError::NoConsistentAssignment(
            "the boundary dynamics do not wind degree-many times around",
        ));
    }
    Ok(ReturnData {
        accesses,
        sigma,
        lift,
        julia,
    })
}

/// Where an anchor sits on the boundary of the return tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnchorSite {
    /// A fixed access of a Julia vertex.
    JuliaAccess(PseudoAccess),
    /// A fixed access of a Fatou vertex.
    FatouAccess(PseudoAccess),
    /// A fixed boundary point strictly inside the gap following this access.
    Gap { after: PseudoAccess },
    /// No accesses exist at all (single-vertex return tree).
    Interior,
}

/// One admissible zero of the argument dynamics: a fixed boundary point of
/// the return map, by increasing position along the access cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorChoice {
    pub index: usize,
    pub site: AnchorSite,
    /// Position in access-cycle coordinates, in `[0, M)` where `M` is the
    /// number of accesses; integer exactly at an access. `None` when the
    /// boundary is empty.
    pub cut: Option<BigRational>,
}

/// Enumerates the `m - 1` fixed boundary points of the return map at `base`,
/// each a possible zero for the external arguments.
pub fn anchor_choices(ctx: &CycleContext, base: usize) -> Result<Vec<AnchorChoice>, CycleError> {
    let data = return_data(ctx, base)?;
    anchors_from(&data, ctx.m)
}

fn anchors_from(data: &ReturnData, m: u64) -> Result<Vec<AnchorChoice>, CycleError> {
    let m_i = i64::try_from(m).map_err(|_| CycleError::Internal("return degree overflows"))?;
    let count = (m_i - 1) as usize;
    if data.accesses.is_empty() {
        return Ok((0..count)
            .map(|index| AnchorChoice {
                index,
                site: AnchorSite::Interior,
                cut: None,
            })
            .collect());
    }
    let mm = data.accesses.len() as i64;
    // Displacement g(k) = lift[k] - k is non-decreasing; a fixed boundary
    // point sits wherever g crosses a multiple of the cycle length. One turn
    // raises g by (m - 1) M, giving exactly m - 1 crossings.
    let g = |k: usize| data.lift[k] - k as i64;
    let top = g(0) + (m_i - 1) * mm;
    let mut level = (g(0).div_euclid(mm) + 1) * mm;
    let mut out = Vec::with_capacity(count);
    while level <= top {
        let mut k = 0usize;
        while g(k) < level {
            k += 1;
        }
        let (site, cut) = if g(k) == level {
            let access = data.accesses[k % data.accesses.len()].clone();
            let cut = BigRational::from(BigInt::from((k as i64).rem_euclid(mm)));
            let site = if data.julia.contains(&access.vertex) {
                AnchorSite::JuliaAccess(access)
            } else {
                AnchorSite::FatouAccess(access)
            };
            (site, cut)
        } else {
            // g is affine between consecutive integers, so the crossing has
            // an exact rational position inside the preceding gap.
            let run = BigRational::new(BigInt::from(level - g(k - 1)), BigInt::from(g(k) - g(k - 1)));
            let cut = BigRational::from(BigInt::from(k as i64 - 1)) + run;
            let site = AnchorSite::Gap {
                after: data.accesses[k - 1].clone(),
            };
            (site, cut)
        };
        out.push(AnchorChoice {
            index: out.len(),
            site,
            cut: Some(cut),
        });
        level += mm;
    }
    if out.len() != count {
        return Err(CycleError::Internal("anchor count missed the degree"));
    }
    Ok(out)
}

/// External arguments for the Julia accesses of a return tree, relative to
/// one anchor choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgumentAssignment {
    pub anchor: AnchorChoice,
    /// Degree of the return dynamics: arguments multiply by `m` under it.
    pub m: u64,
    pub arguments: BTreeMap<PseudoAccess, Angle>,
}

/// Assigns an external argument to every Julia access of the return tree at
/// `base`, taking the chosen anchor as argument zero.
///
/// Arguments satisfy the functional equation (the return map multiplies them
/// by `m` modulo 1), are pairwise distinct, and increase strictly along the
/// boundary walk from the anchor. Fatou accesses carry no argument.
pub fn external_arguments(
    ctx: &CycleContext,
    base: usize,
    anchor: usize,
) -> Result<ArgumentAssignment, CycleError> {
    let data = return_data(ctx, base)?;
    let anchors = anchors_from(&data, ctx.m)?;
    let choice = anchors
        .get(anchor)
        .ok_or(CycleError::BadAnchor {
            index: anchor,
            count: anchors.len(),
        })?
        .clone();
    if data.accesses.is_empty() {
        return Ok(ArgumentAssignment {
            anchor: choice,
            m: ctx.m,
            arguments: BTreeMap::new(),
        });
    }

    let mm = data.accesses.len();
    let m_int = BigInt::from(ctx.m);
    let m_rat = BigRational::from(m_int.clone());
    let mm_rat = BigRational::from(BigInt::from(mm as i64));
    let period = &m_rat * &mm_rat;
    let lift: Vec<BigRational> = data
        .lift
        .iter()
        .map(|&v| BigRational::from(BigInt::from(v)))
        .collect();
    let cut = choice
        .cut
        .clone()
        .ok_or(CycleError::Internal("boundary anchor lacks a position"))?;

    let at = |x: &BigRational| -> Result<BigRational, CycleError> {
        let k = x
            .floor()
            .to_integer()
            .to_usize()
            .filter(|k| *k <= mm)
            .ok_or(CycleError::Internal("lift evaluated outside one turn"))?;
        if k == mm {
            return Ok(lift[mm].clone());
        }
        let frac = x - BigRational::from(BigInt::from(k as i64));
        Ok(&lift[k] + (&lift[k + 1] - &lift[k]) * frac)
    };
    let invert = |t: &BigRational| -> Result<BigRational, CycleError> {
        let (tt, shift) = if *t > lift[mm] {
            (t - &period, mm_rat.clone())
        } else {
            (t.clone(), BigRational::zero())
        };
        for k in 0..mm {
            if lift[k] <= tt && tt <= lift[k + 1] {
                let run = (&tt - &lift[k]) / (&lift[k + 1] - &lift[k]);
                return Ok(BigRational::from(BigInt::from(k as i64)) + run + shift);
            }
        }
        Err(CycleError::Internal("lift inverse target out of range"))
    };

    // The anchor is fixed, so its image sits a whole number of turns ahead;
    // successive preimages of that ray cut one turn into the m digit arcs.
    let image = at(&cut)?;
    let whole_turns = (&image - &cut) / &mm_rat;
    if !whole_turns.is_integer() {
        return Err(CycleError::Internal("anchor is not a fixed boundary point"));
    }
    let mut arcs = Vec::with_capacity(ctx.m as usize + 1);
    for d in 0..ctx.m {
        let target = &cut + (&whole_turns + BigRational::from(BigInt::from(d))) * &mm_rat;
        arcs.push(invert(&target)?);
    }
    arcs.push(&cut + &mm_rat);
    if arcs[0] != cut {
        return Err(CycleError::Internal("digit arcs do not start at the anchor"));
    }

    let julia_positions: Vec<usize> = (0..mm)
        .filter(|k| data.julia.contains(&data.accesses[*k].vertex))
        .collect();
    let ahead = |k: usize| -> BigRational {
        let pos = BigRational::from(BigInt::from(k as i64));
        if pos >= cut {
            pos
        } else {
            pos + &mm_rat
        }
    };
    let digit = |k: usize| -> u64 {
        let pos = ahead(k);
        for d in (0..ctx.m as usize).rev() {
            if arcs[d] <= pos {
                return d as u64;
            }
        }
        0
    };

    // Resolve arguments along sigma orbits: periodic digit words close to a
    // base-m geometric sum, preperiodic ones pull back one digit at a time.
    let mut theta: BTreeMap<usize, BigRational> = BTreeMap::new();
    for &start in &julia_positions {
        if theta.contains_key(&start) {
            continue;
        }
        let mut orbit: Vec<usize> = Vec::new();
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut k = start;
        let tail = loop {
            if let Some(v) = theta.get(&k) {
                break v.clone();
            }
            if let Some(&entry) = seen.get(&k) {
                let q = orbit.len() - entry;
                let mut word = BigInt::zero();
                for &pos in &orbit[entry..] {
                    word = word * &m_int + BigInt::from(digit(pos));
                }
                let den = m_int.pow(q as u32) - BigInt::one();
                let closed = reduce_mod_1(BigRational::new(word, den));
                theta.insert(orbit[entry], closed.clone());
                break closed;
            }
            seen.insert(k, orbit.len());
            orbit.push(k);
            k = data.sigma[k];
        };
        let mut next = tail;
        for &pos in orbit.iter().rev() {
            if let Some(v) = theta.get(&pos) {
                next = v.clone();
                continue;
            }
            let v = (BigRational::from(BigInt::from(digit(pos))) + &next) / &m_rat;
            theta.insert(pos, v.clone());
            next = v;
        }
    }

    // The assignment must commute with the dynamics and respect the cyclic
    // order of the boundary with the anchor at zero.
    for &k in &julia_positions {
        let functional = &m_rat * &theta[&k] - &theta[&data.sigma[k]];
        if !functional.is_integer() {
            return Err(CycleError::NoConsistentAssignment(
                "arguments break the functional equation",
            ));
        }
    }
    let mut walk = julia_positions.clone();
    walk.sort_by_key(|&k| ahead(k).to_integer());
    for pair in walk.windows(2) {
        if theta[&pair[0]] >= theta[&pair[1]] {
            return Err(CycleError::NoConsistentAssignment(
                "arguments are not in boundary order",
            ));
        }
    }

    let arguments = julia_positions
        .iter()
        .map(|&k| (data.accesses[k].clone(), Angle::new(theta[&k].clone())))
        .collect();
    Ok(ArgumentAssignment {
        anchor: choice,
        m: ctx.m,
        arguments,
    })
}
