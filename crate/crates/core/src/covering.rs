//! Coverings of angled trees: vertex maps with local degrees satisfying the
//! angle equation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::angle::Angle;
use crate::tree::{AngledTree, EdgeId, PseudoAccess, VertexId};

/// Structural defects that prevent the data from describing a covering at all.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoveringStructureError {
    #[error("vertex {missing} of the domain has no image")]
    MapNotTotal { missing: VertexId },
    #[error("map entry for {at} does not name a domain vertex")]
    UnknownMapVertex { at: VertexId },
    #[error("image {image} of {at} is not a codomain vertex")]
    ImageNotInCodomain { at: VertexId, image: VertexId },
    #[error("vertex {missing} of the domain has no local degree")]
    DegreesNotTotal { missing: VertexId },
    #[error("degree entry for {at} does not name a domain vertex")]
    UnknownDegreeVertex { at: VertexId },
    #[error("local degree at {at} must be at least 1")]
    ZeroDegree { at: VertexId },
}

/// Semantic defects of a structurally sound covering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoveringViolation {
    /// Both endpoints of a domain edge map to the same codomain vertex.
    EdgeCollapsed { edge: EdgeId },
    /// The images of a domain edge's endpoints lie in different codomain
    /// components, so the edge has no image path.
    EdgeImageDisconnected { edge: EdgeId },
    /// The angle equation fails at `at` for the consecutive spoke pair
    /// starting at the spoke toward `toward`.
    AngleEquation { at: VertexId, toward: VertexId },
}

impl fmt::Display for CoveringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoveringViolation::EdgeCollapsed { edge } => {
                write!(f, "edge {edge} is collapsed to a single vertex")
            }
            CoveringViolation::EdgeImageDisconnected { edge } => {
                write!(f, "edge {edge} has no image path in the codomain")
            }
            CoveringViolation::AngleEquation { at, toward } => {
                write!(
                    f,
                    "angle equation fails at {at} for the gap starting toward {toward}"
                )
            }
        }
    }
}

/// Why composing two coverings failed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("codomain of the inner covering differs from the domain of the outer one")]
    DomainMismatch,
    #[error("the inner covering must be homogeneous to compose")]
    InnerNotHomogeneous,
}

/// Why the pseudoaccess dynamics of a covering is unavailable.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AccessDynamicsError {
    #[error("access dynamics requires a homogeneous covering")]
    NotHomogeneous,
    #[error("access dynamics requires a domain with at least one edge")]
    NoEdges,
    #[error("a domain edge does not map to a codomain edge")]
    EdgeImageNotEdge,
}

/// A covering of angled trees: a vertex map `f` from the domain tree to the
/// codomain tree together with a local degree at every domain vertex,
/// subject to the angle equation
///
/// ```text
/// delta(v) * gap_v(e_i, e_{i+1})  ==  angle_{f(v)}(f(e_i), f(e_{i+1}))   (mod 1)
/// ```
///
/// for every pair of consecutive spokes at every domain vertex, where the
/// image of an edge at `f(v)` is the first edge of the codomain path toward
/// the image of its far endpoint.
#[derive(Clone, PartialEq, Eq)]
pub struct Covering {
    domain: AngledTree,
    codomain: AngledTree,
    map: BTreeMap<VertexId, VertexId>,
    degrees: BTreeMap<VertexId, u32>,
}

impl Covering {
    /// Builds a covering after checking that `map` and `degrees` are total on
    /// the domain, hit the codomain, and have positive degrees. The angle
    /// equation is checked separately by [`validate`].
    ///
    /// [`validate`]: Covering::validate
    pub fn new(
        domain: AngledTree,
        codomain: AngledTree,
        map: BTreeMap<VertexId, VertexId>,
        degrees: BTreeMap<VertexId, u32>,
    ) -> Result<Self, CoveringStructureError> {
        for v in map.keys() {
            if !domain.contains_vertex(v) {
                return Err(CoveringStructureError::UnknownMapVertex { at: v.clone() });
            }
        }
        for v in degrees.keys() {
            if !domain.contains_vertex(v) {
                return Err(CoveringStructureError::UnknownDegreeVertex { at: v.clone() });
            }
        }
        for v in domain.vertices() {
            match map.get(v) {
                None => return Err(CoveringStructureError::MapNotTotal { missing: v.clone() }),
                Some(image) => {
                    if !codomain.contains_vertex(image) {
                        return Err(CoveringStructureError::ImageNotInCodomain {
                            at: v.clone(),
                            image: image.clone(),
                        });
                    }
                }
            }
            match degrees.get(v) {
                None => {
                    return Err(CoveringStructureError::DegreesNotTotal { missing: v.clone() })
                }
                Some(0) => return Err(CoveringStructureError::ZeroDegree { at: v.clone() }),
                Some(_) => {}
            }
        }
        Ok(Covering {
            domain,
            codomain,
            map,
            degrees,
        })
    }

    pub fn domain(&self) -> &AngledTree {
        &self.domain
    }

    pub fn codomain(&self) -> &AngledTree {
        &self.codomain
    }

    pub fn map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.map
    }

    pub fn degrees(&self) -> &BTreeMap<VertexId, u32> {
        &self.degrees
    }

    /// Image of a domain vertex. Panics on unknown vertex.
    pub fn image(&self, v: &VertexId) -> &VertexId {
        &self.map[v]
    }

    /// Local degree at a domain vertex. Panics on unknown vertex.
    pub fn local_degree(&self, v: &VertexId) -> u32 {
        self.degrees[v]
    }

    /// Global degree of the covering: `1 + sum over v of (delta(v) - 1)`.
    pub fn covering_degree(&self) -> u64 {
        let extra: u64 = self
            .degrees
            .values()
            .map(|&d| u64::from(d) - 1)
            .sum();
        1 + extra
    }

    /// Weighted preimage count of a codomain vertex: the sum of the local
    /// degrees over its preimages. At most the covering degree in a valid
    /// covering, with equality everywhere exactly when homogeneous.
    /// Panics on an unknown codomain vertex.
    pub fn preimage_count(&self, w: &VertexId) -> u64 {
        assert!(
            self.codomain.contains_vertex(w),
            "unknown codomain vertex {w}"
        );
        self.map
            .iter()
            .filter(|(_, image)| *image == w)
            .map(|(v, _)| u64::from(self.degrees[v]))
            .sum()
    }

    /// True when every codomain vertex has weighted preimage count equal to
    /// the covering degree.
    pub fn is_homogeneous(&self) -> bool {
        let d = self.covering_degree();
        self.codomain.vertices().all(|w| self.preimage_count(w) == d)
    }

    /// The direction at `f(v)` of the image of the domain edge `{v, u}`: the
    /// neighbor of `f(v)` on the codomain path toward `f(u)`.
    pub fn image_direction(
        &self,
        v: &VertexId,
        u: &VertexId,
    ) -> Result<VertexId, CoveringViolation> {
        let edge = || EdgeId::new(v.clone(), u.clone());
        let fv = &self.map[v];
        let fu = &self.map[u];
        if fv == fu {
            return Err(CoveringViolation::EdgeCollapsed { edge: edge() });
        }
        match self.codomain.path(fv, fu) {
            Some(p) => Ok(p[1].clone()),
            None => Err(CoveringViolation::EdgeImageDisconnected { edge: edge() }),
        }
    }

    /// Checks the angle equation at every domain vertex and returns all
    /// violations in canonical order. Collapsed and disconnected edges are
    /// reported once each; angle checks that would need their images are
    /// skipped.
    pub fn validate(&self) -> Vec<CoveringViolation> {
        let mut edge_problems: BTreeMap<EdgeId, CoveringViolation> = BTreeMap::new();
        let mut angle_problems = Vec::new();
        for v in self.domain.vertices() {
            let ring = self.domain.ring(v);
            let k = ring.len();
            let directions: Vec<Option<VertexId>> = ring
                .iter()
                .map(|s| match self.image_direction(v, &s.to) {
                    Ok(dir) => Some(dir),
                    Err(problem) => {
                        let edge = EdgeId::new(v.clone(), s.to.clone());
                        edge_problems.entry(edge).or_insert(problem);
                        None
                    }
                })
                .collect();
            for i in 0..k {
                let (Some(a), Some(b)) = (&directions[i], &directions[(i + 1) % k]) else {
                    continue;
                };
                let fv = &self.map[v];
                let image_angle = self
                    .codomain
                    .angle_between(fv, a, b)
                    .expect("image directions are spokes at the image vertex");
                let delta = BigRational::from(BigInt::from(self.degrees[v]));
                let lifted = &ring[i].gap * delta;
                if Angle::new(lifted) != Angle::new(image_angle) {
                    angle_problems.push(CoveringViolation::AngleEquation {
                        at: v.clone(),
                        toward: ring[i].to.clone(),
                    });
                }
            }
        }
        let mut out: Vec<CoveringViolation> = edge_problems.into_values().collect();
        out.append(&mut angle_problems);
        out
    }

    /// True when the angle equation holds everywhere.
    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Image of a pseudoaccess under a homogeneous covering, where edges map
    /// to edges. Panics if the image edge does not exist.
    pub fn access_image(&self, a: &PseudoAccess) -> PseudoAccess {
        let fv = &self.map[&a.vertex];
        let ff = &self.map[&a.from];
        assert!(
            self.codomain.has_edge(fv, ff),
            "access image requires an edge-to-edge covering"
        );
        PseudoAccess {
            vertex: fv.clone(),
            from: ff.clone(),
        }
    }
}

impl fmt::Debug for Covering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Covering {{")?;
        for (v, image) in &self.map {
            writeln!(f, "  {v} -> {image} (degree {})", self.degrees[v])?;
        }
        writeln!(f, "  domain: {:?}", self.domain)?;
        writeln!(f, "  codomain: {:?}", self.codomain)?;
        write!(f, "}}")
    }
}

/// Composes two coverings as functions: `outer . inner`, applying `inner`
/// first. The inner covering must be homogeneous (so its edges map to edges
/// and local degrees chain) and its codomain must equal the outer covering's
/// domain.
///
/// The composite has map `v -> outer(inner(v))` and local degrees
/// `delta(v) = delta_inner(v) * delta_outer(inner(v))`; its degree is the
/// product of the two degrees.
pub fn compose(outer: &Covering, inner: &Covering) -> Result<Covering, ComposeError> {
    if inner.codomain != outer.domain {
        return Err(ComposeError::DomainMismatch);
    }
    if !inner.is_homogeneous() {
        return Err(ComposeError::InnerNotHomogeneous);
    }
    let map = inner
        .map
        .iter()
        .map(|(v, mid)| (v.clone(), outer.map[mid].clone()))
        .collect();
    let degrees = inner
        .map
        .iter()
        .map(|(v, mid)| (v.clone(), inner.degrees[v] * outer.degrees[mid]))
        .collect();
    Ok(Covering {
        domain: inner.domain.clone(),
        codomain: outer.codomain.clone(),
        map,
        degrees,
    })
}

/// The induced map between the pseudoaccess cycles of a homogeneous
/// covering, keyed by domain pseudoaccess. One traversal of the domain cycle
/// winds around the codomain cycle exactly `covering_degree` times; every
/// codomain pseudoaccess has exactly that many preimages.
pub fn access_dynamics(
    c: &Covering,
) -> Result<BTreeMap<PseudoAccess, PseudoAccess>, AccessDynamicsError> {
    if !c.is_homogeneous() {
        return Err(AccessDynamicsError::NotHomogeneous);
    }
    if c.domain.edge_count() == 0 {
        return Err(AccessDynamicsError::NoEdges);
    }
    let mut out = BTreeMap::new();
    for a in c.domain.pseudoaccess_cycle() {
        let fv = &c.map[&a.vertex];
        let ff = &c.map[&a.from];
        if !c.codomain.has_edge(fv, ff) {
            return Err(AccessDynamicsError::EdgeImageNotEdge);
        }
        out.insert(
            a.clone(),
            PseudoAccess {
                vertex: fv.clone(),
                from: ff.clone(),
            },
        );
    }
    Ok(out)
}

/// An extension of a covering to a homogeneous one, produced by
/// [`homogenize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionResult {
    /// The homogeneous covering on the extended domain.
    pub extended: Covering,
    /// Injection of the original domain vertices into the extended domain.
    /// The extension never renames, so this is the identity on the original
    /// vertex set.
    pub embedding: BTreeMap<VertexId, VertexId>,
    /// For each original domain edge whose image was a longer path, the
    /// chain of edges replacing it, ordered from the edge's smaller endpoint.
    pub subdivisions: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl ExtensionResult {
    /// Domain vertices created by the extension.
    pub fn added(&self) -> std::collections::BTreeSet<VertexId> {
        self.extended
            .domain()
            .vertices()
            .filter(|v| !self.embedding.contains_key(v))
            .cloned()
            .collect()
    }
}

pub use crate::homogenize::{homogenize, HomogenizeError};
