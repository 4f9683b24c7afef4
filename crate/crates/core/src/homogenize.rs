//! The canonical homogeneous extension of a valid covering.
//!
//! The algorithm subdivides domain edges until every edge maps to a single
//! codomain edge, then walks the pseudoaccess cycle of the growing domain.
//! At each corner it compares the corner's gap with the image corner's gap
//! divided by the local degree; when the domain corner is wider, a copy of
//! the missing codomain branch is glued in at exactly the required angle.
//! The walk re-runs until a full pass glues nothing; two passes suffice.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::covering::{Covering, ExtensionResult};
use crate::tree::{AngledTree, EdgeId, PseudoAccess, Spoke, VertexId};

/// Why a covering could not be homogenized.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomogenizeError {
    #[error("the domain is not a valid angled tree")]
    InvalidDomain,
    #[error("the codomain is not a valid angled tree")]
    InvalidCodomain,
    #[error("the covering fails validation and cannot be extended")]
    InvalidCovering,
    #[error("extension invariant broke: {0}")]
    Internal(&'static str),
}

/// Extends a valid covering to the unique homogeneous covering on a larger
/// domain tree. Original vertices keep their names, map images, and local
/// degrees; new vertices have local degree 1 and deterministic names formed
/// from the codomain vertex they map to.
pub fn homogenize(c: &Covering) -> Result<ExtensionResult, HomogenizeError> {
    if !c.domain().is_valid() {
        return Err(HomogenizeError::InvalidDomain);
    }
    if !c.codomain().is_valid() {
        return Err(HomogenizeError::InvalidCodomain);
    }
    if !c.is_valid() {
        return Err(HomogenizeError::InvalidCovering);
    }

    let mut b = Builder {
        codomain: c.codomain(),
        rings: c.domain().rings.clone(),
        map: c.map().clone(),
        degrees: c.degrees().clone(),
        counters: BTreeMap::new(),
        subdivisions: BTreeMap::new(),
    };

    b.subdivide_long_edges()?;
    b.bootstrap_single_vertex();

    // Glue until a full pass over the boundary adds nothing. The first pass
    // does all the work; the second pass verifies it.
    let mut pass = 0;
    loop {
        pass += 1;
        if b.walk_pass()? == 0 {
            break;
        }
        if pass >= 2 {
            return Err(HomogenizeError::Internal(
                "a second walk pass still glued branches",
            ));
        }
    }

    let embedding: BTreeMap<VertexId, VertexId> = c
        .domain()
        .vertices()
        .map(|v| (v.clone(), v.clone()))
        .collect();
    let tree = AngledTree::new(b.rings)
        .map_err(|_| HomogenizeError::Internal("extension produced a broken ring map"))?;
    if !tree.is_valid() {
        return Err(HomogenizeError::Internal(
            "extension produced an invalid angled tree",
        ));
    }
    let n = c.covering_degree();
    let extended = Covering::new(tree, c.codomain().clone(), b.map, b.degrees)
        .map_err(|_| HomogenizeError::Internal("extension produced a broken covering"))?;
    if !extended.is_valid() {
        return Err(HomogenizeError::Internal(
            "extension violates the angle equation",
        ));
    }
    if !extended.is_homogeneous() {
        return Err(HomogenizeError::Internal("extension is not homogeneous"));
    }
    let v1 = extended.domain().vertex_count() as u64;
    let v2 = extended.codomain().vertex_count() as u64;
    if v1 + n - 1 != n * v2 {
        return Err(HomogenizeError::Internal("vertex counting identity failed"));
    }
    Ok(ExtensionResult {
        extended,
        embedding,
        subdivisions: b.subdivisions,
    })
}

struct Builder<'a> {
    codomain: &'a AngledTree,
    rings: BTreeMap<VertexId, Vec<Spoke>>,
    map: BTreeMap<VertexId, VertexId>,
    degrees: BTreeMap<VertexId, u32>,
    counters: BTreeMap<String, u64>,
    subdivisions: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl Builder<'_> {
    /// Next free name "{base}.{n}" with a per-base counter. Every allocated
    /// vertex enters `map` immediately, so membership in `map` is the
    /// collision check.
    fn fresh(&mut self, base: &VertexId, image: &VertexId) -> VertexId {
        let counter = self.counters.entry(base.0.clone()).or_insert(0);
        loop {
            *counter += 1;
            let candidate = VertexId(format!("{}.{}", base.0, counter));
            if !self.map.contains_key(&candidate) {
                self.map.insert(candidate.clone(), image.clone());
                self.degrees.insert(candidate.clone(), 1);
                return candidate;
            }
        }
    }

    fn spoke_index(&self, v: &VertexId, toward: &VertexId) -> Option<usize> {
        self.rings[v].iter().position(|s| &s.to == toward)
    }

    /// Replaces every edge whose image is a longer path by a chain of new
    /// degree-1 vertices over the intermediate codomain vertices. After this,
    /// every edge maps to a single codomain edge.
    fn subdivide_long_edges(&mut self) -> Result<(), HomogenizeError> {
        let edges: Vec<EdgeId> = {
            let mut out = Vec::new();
            for (v, ring) in &self.rings {
                for s in ring {
                    if v < &s.to {
                        out.push(EdgeId::new(v.clone(), s.to.clone()));
                    }
                }
            }
            out.sort();
            out
        };
        for edge in edges {
            let (a, b) = edge.ends();
            let (a, b) = (a.clone(), b.clone());
            let path = self
                .codomain
                .path(&self.map[&a], &self.map[&b])
                .ok_or(HomogenizeError::Internal("edge image has no codomain path"))?;
            let k = path.len() - 1;
            if k <= 1 {
                continue;
            }
            let mut chain = vec![a.clone()];
            for stop in &path[1..k] {
                chain.push(self.fresh(stop, stop));
            }
            chain.push(b.clone());
            // Interior rings pull their gaps back from the codomain: the gap
            // toward the previous chain vertex is the image angle between
            // the two path directions, which keeps the angle equation exact.
            for i in 1..k {
                let g_prev = self
                    .codomain
                    .angle_between(&path[i], &path[i - 1], &path[i + 1])
                    .ok_or(HomogenizeError::Internal("image path is not a path"))?;
                let g_next = BigRational::one() - &g_prev;
                self.rings.insert(
                    chain[i].clone(),
                    vec![
                        Spoke {
                            to: chain[i - 1].clone(),
                            gap: g_prev,
                        },
                        Spoke {
                            to: chain[i + 1].clone(),
                            gap: g_next,
                        },
                    ],
                );
            }
            let ia = self
                .spoke_index(&a, &b)
                .ok_or(HomogenizeError::Internal("edge lost its spoke"))?;
            self.rings.get_mut(&a).unwrap()[ia].to = chain[1].clone();
            let ib = self
                .spoke_index(&b, &a)
                .ok_or(HomogenizeError::Internal("edge lost its spoke"))?;
            self.rings.get_mut(&b).unwrap()[ib].to = chain[k - 1].clone();
            let pieces = (0..k)
                .map(|i| EdgeId::new(chain[i].clone(), chain[i + 1].clone()))
                .collect();
            self.subdivisions.insert(edge, pieces);
        }
        Ok(())
    }

    /// A single-vertex domain has no pseudoaccesses to walk. Seed it by
    /// gluing the codomain branch behind the canonical first spoke of the
    /// image vertex; the subsequent walk distributes the rest.
    fn bootstrap_single_vertex(&mut self) {
        if self.rings.len() != 1 || self.codomain.edge_count() == 0 {
            return;
        }
        let v = self.rings.keys().next().unwrap().clone();
        let fv = self.map[&v].clone();
        let first = self.codomain.ring(&fv)[0].to.clone();
        let root_copy = self.glue_copy(&v, &fv, &first);
        self.rings.insert(
            v,
            vec![Spoke {
                to: root_copy,
                gap: BigRational::one(),
            }],
        );
    }

    /// Copies the component of the codomain minus `removed` that contains
    /// `branch_root`, rerooting the copy's boundary spoke onto `at`. Returns
    /// the copy of `branch_root`. The caller installs the spoke from `at`.
    fn glue_copy(&mut self, at: &VertexId, removed: &VertexId, branch_root: &VertexId) -> VertexId {
        let comp = self.codomain.component_without(removed, branch_root);
        let mut names: BTreeMap<&VertexId, VertexId> = BTreeMap::new();
        for x in &comp {
            let name = self.fresh(x, x);
            names.insert(x, name);
        }
        for x in &comp {
            let ring = self
                .codomain
                .ring(x)
                .iter()
                .map(|s| Spoke {
                    to: if &s.to == removed {
                        at.clone()
                    } else {
                        names[&s.to].clone()
                    },
                    gap: s.gap.clone(),
                })
                .collect();
            self.rings.insert(names[x].clone(), ring);
        }
        names[branch_root].clone()
    }

    /// One full boundary walk. Returns how many branches were glued.
    fn walk_pass(&mut self) -> Result<usize, HomogenizeError> {
        let start = match self.first_access() {
            Some(a) => a,
            None => return Ok(0),
        };
        let mut glued = 0usize;
        let mut steps = 0u64;
        let degree: u64 = 1 + self
            .degrees
            .values()
            .map(|&d| u64::from(d) - 1)
            .sum::<u64>();
        let budget = 2 * degree
            .saturating_mul(self.codomain.vertex_count() as u64)
            .saturating_add(4);
        let mut cur = start.clone();
        loop {
            steps += 1;
            if steps > budget {
                return Err(HomogenizeError::Internal("boundary walk did not close"));
            }
            let v = cur.vertex.clone();
            let u = cur.from.clone();
            let fv = self.map[&v].clone();
            let fu = self.map[&u].clone();
            let theta = self
                .codomain
                .gap(&fv, &fu)
                .ok_or(HomogenizeError::Internal("edge image is not an edge"))?
                .clone();
            let delta = BigRational::from(BigInt::from(self.degrees[&v]));
            let target = theta / delta;
            let i = self
                .spoke_index(&v, &u)
                .ok_or(HomogenizeError::Internal("walk lost its spoke"))?;
            let gap = self.rings[&v][i].gap.clone();
            if gap > target {
                // The image corner ends at the successor spoke E of the
                // image edge; its branch is missing here. Glue a copy at
                // angle target after the current spoke.
                let e = self
                    .codomain
                    .ring_successor(&fv, &fu)
                    .ok_or(HomogenizeError::Internal("image vertex lost its ring"))?
                    .to
                    .clone();
                let copy_root = self.glue_copy(&v, &fv, &e);
                let ring = self.rings.get_mut(&v).unwrap();
                ring[i].gap = target.clone();
                ring.insert(
                    i + 1,
                    Spoke {
                        to: copy_root,
                        gap: gap - target,
                    },
                );
                glued += 1;
            } else if gap < target {
                return Err(HomogenizeError::Internal(
                    "corner narrower than its image requires",
                ));
            }
            // Advance along the boundary; a fresh glue sends the walk into
            // the new branch.
            let ring = &self.rings[&v];
            let out = &ring[(i + 1) % ring.len()];
            cur = PseudoAccess {
                vertex: out.to.clone(),
                from: v.clone(),
            };
            if cur == start {
                return Ok(glued);
            }
        }
    }

    fn first_access(&self) -> Option<PseudoAccess> {
        for (v, ring) in &self.rings {
            if let Some(from) = ring.iter().map(|s| &s.to).min() {
                return Some(PseudoAccess {
                    vertex: v.clone(),
                    from: from.clone(),
                });
            }
        }
        None
    }
}
