//! Angled trees: finite trees with a cyclic order and exact angle gaps at
//! every vertex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Name of a vertex. Ordered lexicographically; the ordering fixes every
/// canonical choice in the crate (ring rotations, walk starts, tie breaks).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Self {
        VertexId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v\"{}\"", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

/// An undirected edge, stored with its endpoints in sorted order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    a: VertexId,
    b: VertexId,
}

impl EdgeId {
    /// Normalizes the endpoint order. Panics on a self-loop: edges of a tree
    /// always join distinct vertices.
    pub fn new(x: VertexId, y: VertexId) -> Self {
        assert!(x != y, "self-loop edge {x}");
        if x < y {
            EdgeId { a: x, b: y }
        } else {
            EdgeId { a: y, b: x }
        }
    }

    pub fn ends(&self) -> (&VertexId, &VertexId) {
        (&self.a, &self.b)
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(&self, v: &VertexId) -> &VertexId {
        if &self.a == v {
            &self.b
        } else {
            assert!(&self.b == v, "vertex {v} is not an endpoint of {self:?}");
            &self.a
        }
    }

    pub fn touches(&self, v: &VertexId) -> bool {
        &self.a == v || &self.b == v
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}, {})", self.a, self.b)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

/// One slot of a vertex ring: the neighbor this spoke points to, and the
/// counterclockwise gap from this spoke to the next spoke of the ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spoke {
    pub to: VertexId,
    pub gap: BigRational,
}

impl Spoke {
    pub fn new(to: impl Into<VertexId>, gap: BigRational) -> Self {
        Spoke { to: to.into(), gap }
    }
}

/// A pseudoaccess: the corner of the tree boundary swept at `vertex` between
/// the spoke pointing back to `from` and its ring successor.
///
/// Pseudoaccesses are in bijection with directed edges (`from` → `vertex`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PseudoAccess {
    pub vertex: VertexId,
    pub from: VertexId,
}

impl PseudoAccess {
    pub fn new(vertex: impl Into<VertexId>, from: impl Into<VertexId>) -> Self {
        PseudoAccess {
            vertex: vertex.into(),
            from: from.into(),
        }
    }
}

impl fmt::Display for PseudoAccess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} from {})", self.vertex, self.from)
    }
}

/// Structural defects that prevent a ring map from being a graph at all.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeStructureError {
    #[error("an angled tree needs at least one vertex")]
    Empty,
    #[error("vertex {at} has a spoke to itself")]
    SelfLoop { at: VertexId },
    #[error("vertex {at} has two spokes to {to}")]
    DuplicateSpoke { at: VertexId, to: VertexId },
    #[error("vertex {at} has a spoke to unknown vertex {to}")]
    DanglingSpoke { at: VertexId, to: VertexId },
    #[error("vertex {at} has a spoke to {to} but {to} has none back")]
    AsymmetricSpoke { at: VertexId, to: VertexId },
}

/// Semantic defects of a structurally sound ring map: failures of tree shape
/// or of the angle axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    /// The graph has more than one connected component.
    Disconnected,
    /// The graph contains a cycle.
    NotAcyclic,
    /// A gap is zero or negative.
    NonPositiveGap { at: VertexId, toward: VertexId },
    /// The gaps around a vertex do not sum to one full turn.
    GapSumNotOne { at: VertexId },
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::Disconnected => write!(f, "the tree is not connected"),
            TreeViolation::NotAcyclic => write!(f, "the tree contains a cycle"),
            TreeViolation::NonPositiveGap { at, toward } => {
                write!(f, "gap at {at} toward {toward} is not positive")
            }
            TreeViolation::GapSumNotOne { at } => {
                write!(f, "gaps at {at} do not sum to a full turn")
            }
        }
    }
}

/// A finite angled tree.
///
/// Every vertex carries a ring: its spokes in counterclockwise order, each
/// with the gap to the next spoke. Rings are kept in a canonical rotation
/// (smallest neighbor first) so that equality and serialization are stable.
#[derive(Clone, PartialEq, Eq)]
pub struct AngledTree {
    pub(crate) rings: BTreeMap<VertexId, Vec<Spoke>>,
}

impl AngledTree {
    /// Builds a tree from a ring map, checking structural soundness and
    /// canonicalizing ring rotations. Semantic axioms (tree shape, gap
    /// positivity, gap sums) are checked separately by [`validate`].
    ///
    /// [`validate`]: AngledTree::validate
    pub fn new(rings: BTreeMap<VertexId, Vec<Spoke>>) -> Result<Self, TreeStructureError> {
        if rings.is_empty() {
            return Err(TreeStructureError::Empty);
        }
        for (v, ring) in &rings {
            let mut seen = BTreeSet::new();
            for spoke in ring {
                if &spoke.to == v {
                    return Err(TreeStructureError::SelfLoop { at: v.clone() });
                }
                if !seen.insert(&spoke.to) {
                    return Err(TreeStructureError::DuplicateSpoke {
                        at: v.clone(),
                        to: spoke.to.clone(),
                    });
                }
                let back = match rings.get(&spoke.to) {
                    None => {
                        return Err(TreeStructureError::DanglingSpoke {
                            at: v.clone(),
                            to: spoke.to.clone(),
                        })
                    }
                    Some(r) => r,
                };
                if !back.iter().any(|s| &s.to == v) {
                    return Err(TreeStructureError::AsymmetricSpoke {
                        at: v.clone(),
                        to: spoke.to.clone(),
                    });
                }
            }
        }
        let mut tree = AngledTree { rings };
        tree.recanonicalize();
        Ok(tree)
    }

    /// Convenience constructor for a single-vertex tree.
    pub fn single(v: impl Into<VertexId>) -> Self {
        let mut rings = BTreeMap::new();
        rings.insert(v.into(), Vec::new());
        AngledTree { rings }
    }

    /// Rotates every ring so its smallest neighbor comes first.
    pub(crate) fn recanonicalize(&mut self) {
        for ring in self.rings.values_mut() {
            if let Some(first) = ring
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a.to.cmp(&b.to))
                .map(|(i, _)| i)
            {
                ring.rotate_left(first);
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rings.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.rings.keys()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.rings.contains_key(v)
    }

    /// The ring of `v` in canonical rotation. Panics on unknown vertex.
    pub fn ring(&self, v: &VertexId) -> &[Spoke] {
        &self.rings[v]
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.rings[v].len()
    }

    pub fn is_leaf(&self, v: &VertexId) -> bool {
        self.degree(v) == 1
    }

    pub fn neighbors<'a>(&'a self, v: &VertexId) -> impl Iterator<Item = &'a VertexId> {
        self.rings[v].iter().map(|s| &s.to)
    }

    pub fn edge_count(&self) -> usize {
        self.rings.values().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges, sorted.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = Vec::new();
        for (v, ring) in &self.rings {
            for spoke in ring {
                if v < &spoke.to {
                    out.push(EdgeId::new(v.clone(), spoke.to.clone()));
                }
            }
        }
        out.sort();
        out
    }

    pub fn has_edge(&self, x: &VertexId, y: &VertexId) -> bool {
        self.rings
            .get(x)
            .map(|ring| ring.iter().any(|s| &s.to == y))
            .unwrap_or(false)
    }

    /// The gap of the spoke at `v` pointing toward `toward`, which is the
    /// counterclockwise angle from that spoke to its ring successor. For the
    /// only spoke of a leaf this is a full turn in a valid tree.
    pub fn gap(&self, v: &VertexId, toward: &VertexId) -> Option<&BigRational> {
        self.rings
            .get(v)?
            .iter()
            .find(|s| &s.to == toward)
            .map(|s| &s.gap)
    }

    /// The ring successor of the spoke at `v` pointing toward `toward`.
    pub fn ring_successor<'a>(&'a self, v: &VertexId, toward: &VertexId) -> Option<&'a Spoke> {
        let ring = self.rings.get(v)?;
        let i = ring.iter().position(|s| &s.to == toward)?;
        Some(&ring[(i + 1) % ring.len()])
    }

    /// Checks the semantic axioms and returns every violation found.
    pub fn validate(&self) -> Vec<TreeViolation> {
        let mut out = Vec::new();
        let components = self.component_count();
        if components > 1 {
            out.push(TreeViolation::Disconnected);
        }
        if self.edge_count() + components > self.vertex_count() {
            out.push(TreeViolation::NotAcyclic);
        }
        for (v, ring) in &self.rings {
            let mut sum = BigRational::zero();
            for spoke in ring {
                if !spoke.gap.is_positive() {
                    out.push(TreeViolation::NonPositiveGap {
                        at: v.clone(),
                        toward: spoke.to.clone(),
                    });
                }
                sum += &spoke.gap;
            }
            if !ring.is_empty() && !sum.is_one() {
                out.push(TreeViolation::GapSumNotOne { at: v.clone() });
            }
        }
        out
    }

    /// True when all semantic axioms hold.
    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn component_count(&self) -> usize {
        let mut unseen: BTreeSet<&VertexId> = self.rings.keys().collect();
        let mut components = 0;
        while let Some(start) = unseen.iter().next().cloned() {
            components += 1;
            let mut queue = VecDeque::from([start]);
            unseen.remove(start);
            while let Some(v) = queue.pop_front() {
                for spoke in &self.rings[v] {
                    if unseen.remove(&spoke.to) {
                        queue.push_back(&spoke.to);
                    }
                }
            }
        }
        components
    }

    /// The unique simple path from `a` to `b`, both endpoints included.
    /// `None` when the vertices are unknown or in different components.
    pub fn path(&self, a: &VertexId, b: &VertexId) -> Option<Vec<VertexId>> {
        if !self.contains_vertex(a) || !self.contains_vertex(b) {
            return None;
        }
        if a == b {
            return Some(vec![a.clone()]);
        }
        let mut parent: BTreeMap<&VertexId, &VertexId> = BTreeMap::new();
        let mut queue = VecDeque::from([a]);
        parent.insert(a, a);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for spoke in &self.rings[v] {
                if !parent.contains_key(&spoke.to) {
                    parent.insert(&spoke.to, v);
                    queue.push_back(&spoke.to);
                }
            }
        }
        if !parent.contains_key(b) {
            return None;
        }
        let mut rev = vec![b.clone()];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            rev.push(cur.clone());
        }
        rev.reverse();
        Some(rev)
    }

    /// Number of edges on the path between `a` and `b`.
    pub fn distance(&self, a: &VertexId, b: &VertexId) -> Option<usize> {
        self.path(a, b).map(|p| p.len() - 1)
    }

    /// Counterclockwise angle at `v` from the spoke toward `a` to the spoke
    /// toward `b`: the sum of the gaps swept in between. Zero when `a == b`.
    /// `None` when either spoke is missing.
    pub fn angle_between(
        &self,
        v: &VertexId,
        a: &VertexId,
        b: &VertexId,
    ) -> Option<BigRational> {
        let ring = self.rings.get(v)?;
        let start = ring.iter().position(|s| &s.to == a)?;
        ring.iter().position(|s| &s.to == b)?;
        let mut sum = BigRational::zero();
        let mut i = start;
        while &ring[i].to != b {
            sum += &ring[i].gap;
            i = (i + 1) % ring.len();
        }
        Some(sum)
    }

    /// The successor of a pseudoaccess in the counterclockwise boundary walk:
    /// leave through the ring successor of the incoming spoke, arrive at its
    /// far end.
    pub fn access_successor(&self, access: &PseudoAccess) -> PseudoAccess {
        let out = self
            .ring_successor(&access.vertex, &access.from)
            .expect("pseudoaccess refers to a missing spoke");
        PseudoAccess {
            vertex: out.to.clone(),
            from: access.vertex.clone(),
        }
    }

    /// The gap swept at this pseudoaccess: the gap of the incoming spoke.
    pub fn access_gap(&self, access: &PseudoAccess) -> &BigRational {
        self.gap(&access.vertex, &access.from)
            .expect("pseudoaccess refers to a missing spoke")
    }

    /// The canonical first pseudoaccess: smallest `(vertex, from)` pair.
    /// `None` for an edgeless tree.
    pub fn first_access(&self) -> Option<PseudoAccess> {
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

    /// The full boundary walk starting from the canonical pseudoaccess.
    ///
    /// On a valid tree this visits every pseudoaccess exactly once, so its
    /// length is the sum of all vertex degrees, `2 (|V| - 1)`. Empty for a
    /// single vertex.
    pub fn pseudoaccess_cycle(&self) -> Vec<PseudoAccess> {
        let start = match self.first_access() {
            Some(a) => a,
            None => return Vec::new(),
        };
        let mut out = vec![start.clone()];
        let mut cur = self.access_successor(&start);
        while cur != start {
            out.push(cur.clone());
            cur = self.access_successor(&cur);
        }
        out
    }

    /// Vertices of the component of `self` minus `removed` that contains
    /// `start`. Empty if `start` is `removed` or unknown.
    pub fn component_without(&self, removed: &VertexId, start: &VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        if start == removed || !self.contains_vertex(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(v) = queue.pop_front() {
            for spoke in &self.rings[&v] {
                if &spoke.to != removed && seen.insert(spoke.to.clone()) {
                    queue.push_back(spoke.to.clone());
                }
            }
        }
        seen
    }
}

impl fmt::Debug for AngledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AngledTree {{")?;
        for (v, ring) in &self.rings {
            write!(f, "  {v}: [")?;
            for (i, spoke) in ring.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{} ({})", spoke.to, spoke.gap)?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "}}")
    }
}

/// Builds a tree from `(vertex, [(neighbor, gap)...])` pairs. Test and
/// fixture helper; panics on structural errors.
pub fn tree_from_rings<V, N>(rings: &[(V, &[(N, BigRational)])]) -> AngledTree
where
    V: AsRef<str>,
    N: AsRef<str>,
{
    let mut map = BTreeMap::new();
    for (v, spokes) in rings {
        map.insert(
            VertexId::new(v.as_ref()),
            spokes
                .iter()
                .map(|(n, gap)| Spoke::new(n.as_ref(), gap.clone()))
                .collect(),
        );
    }
    AngledTree::new(map).expect("structurally sound ring map")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn vid(s: &str) -> VertexId {
        VertexId::new(s)
    }

    /// Three-spoke star with center c and leaves x, y, z at thirds.
    fn star() -> AngledTree {
        tree_from_rings(&[
            ("c", &[("x", rat(1, 3)), ("y", rat(1, 3)), ("z", rat(1, 3))][..]),
            ("x", &[("c", rat(1, 1))][..]),
            ("y", &[("c", rat(1, 1))][..]),
            ("z", &[("c", rat(1, 1))][..]),
        ])
    }

    #[test]
    fn structural_errors() {
        let mut rings: BTreeMap<VertexId, Vec<Spoke>> = BTreeMap::new();
        assert_eq!(AngledTree::new(rings.clone()), Err(TreeStructureError::Empty));

        rings.insert(vid("a"), vec![Spoke::new("a", rat(1, 1))]);
        assert_eq!(
            AngledTree::new(rings.clone()),
            Err(TreeStructureError::SelfLoop { at: vid("a") })
        );

        rings.insert(vid("a"), vec![Spoke::new("b", rat(1, 2)), Spoke::new("b", rat(1, 2))]);
        rings.insert(vid("b"), vec![Spoke::new("a", rat(1, 1))]);
        assert_eq!(
            AngledTree::new(rings.clone()),
            Err(TreeStructureError::DuplicateSpoke {
                at: vid("a"),
                to: vid("b")
            })
        );

        rings.insert(vid("a"), vec![Spoke::new("ghost", rat(1, 1))]);
        assert_eq!(
            AngledTree::new(rings.clone()),
            Err(TreeStructureError::DanglingSpoke {
                at: vid("a"),
                to: vid("ghost")
            })
        );

        rings.insert(vid("a"), vec![Spoke::new("b", rat(1, 1))]);
        rings.insert(vid("b"), vec![]);
        assert_eq!(
            AngledTree::new(rings),
            Err(TreeStructureError::AsymmetricSpoke {
                at: vid("a"),
                to: vid("b")
            })
        );
    }

    #[test]
    fn canonical_rotation_makes_equal_rings_equal() {
        // Same cyclic ring written with two different rotations.
        let t1 = tree_from_rings(&[
            ("c", &[("x", rat(1, 3)), ("y", rat(1, 3)), ("z", rat(1, 3))][..]),
            ("x", &[("c", rat(1, 1))][..]),
            ("y", &[("c", rat(1, 1))][..]),
            ("z", &[("c", rat(1, 1))][..]),
        ]);
        let t2 = tree_from_rings(&[
            ("c", &[("y", rat(1, 3)), ("z", rat(1, 3)), ("x", rat(1, 3))][..]),
            ("x", &[("c", rat(1, 1))][..]),
            ("y", &[("c", rat(1, 1))][..]),
            ("z", &[("c", rat(1, 1))][..]),
        ]);
        assert_eq!(t1, t2);
        assert_eq!(t1.ring(&vid("c"))[0].to, vid("x"));
    }

    #[test]
    fn validate_flags_semantic_defects() {
        assert!(star().is_valid());
        assert!(AngledTree::single("a").is_valid());

        // Two components: a-b edge plus isolated vertex q.
        let mut rings = BTreeMap::new();
        rings.insert(vid("a"), vec![Spoke::new("b", rat(1, 1))]);
        rings.insert(vid("b"), vec![Spoke::new("a", rat(1, 1))]);
        rings.insert(vid("q"), vec![]);
        let t = AngledTree::new(rings).unwrap();
        assert_eq!(t.validate(), vec![TreeViolation::Disconnected]);

        // Triangle: connected but cyclic.
        let t = tree_from_rings(&[
            ("a", &[("b", rat(1, 2)), ("c", rat(1, 2))][..]),
            ("b", &[("a", rat(1, 2)), ("c", rat(1, 2))][..]),
            ("c", &[("a", rat(1, 2)), ("b", rat(1, 2))][..]),
        ]);
        assert_eq!(t.validate(), vec![TreeViolation::NotAcyclic]);

        // Bad gaps.
        let t = tree_from_rings(&[
            ("a", &[("b", rat(0, 1))][..]),
            ("b", &[("a", rat(1, 2))][..]),
        ]);
        let violations = t.validate();
        assert!(violations.contains(&TreeViolation::NonPositiveGap {
            at: vid("a"),
            toward: vid("b")
        }));
        assert!(violations.contains(&TreeViolation::GapSumNotOne { at: vid("a") }));
        assert!(violations.contains(&TreeViolation::GapSumNotOne { at: vid("b") }));
    }

    #[test]
    fn paths_and_distances() {
        let t = star();
        assert_eq!(
            t.path(&vid("x"), &vid("y")),
            Some(vec![vid("x"), vid("c"), vid("y")])
        );
        assert_eq!(t.path(&vid("x"), &vid("x")), Some(vec![vid("x")]));
        assert_eq!(t.distance(&vid("x"), &vid("z")), Some(2));
        assert_eq!(t.distance(&vid("c"), &vid("z")), Some(1));
        assert_eq!(t.path(&vid("x"), &vid("nope")), None);
    }

    #[test]
    fn angles_between_spokes() {
        let t = star();
        let c = vid("c");
        assert_eq!(t.angle_between(&c, &vid("x"), &vid("y")), Some(rat(1, 3)));
        assert_eq!(t.angle_between(&c, &vid("x"), &vid("z")), Some(rat(2, 3)));
        assert_eq!(t.angle_between(&c, &vid("z"), &vid("x")), Some(rat(1, 3)));
        assert_eq!(t.angle_between(&c, &vid("x"), &vid("x")), Some(rat(0, 1)));
        assert_eq!(t.angle_between(&c, &vid("x"), &vid("nope")), None);
    }

    #[test]
    fn pseudoaccess_cycle_covers_every_directed_edge() {
        let t = star();
        let cycle = t.pseudoaccess_cycle();
        assert_eq!(cycle.len(), 2 * (t.vertex_count() - 1));
        let distinct: BTreeSet<_> = cycle.iter().collect();
        assert_eq!(distinct.len(), cycle.len());
        // Canonical start: smallest (vertex, from) pair.
        assert_eq!(cycle[0], PseudoAccess::new("c", "x"));
        // Walk order on the star: sweep each corner of c, bouncing off leaves.
        let expected = [
            ("c", "x"),
            ("y", "c"),
            ("c", "y"),
            ("z", "c"),
            ("c", "z"),
            ("x", "c"),
        ];
        let got: Vec<_> = cycle
            .iter()
            .map(|a| (a.vertex.as_str(), a.from.as_str()))
            .collect();
        assert_eq!(got, expected);
        // Total gap around the boundary: one full turn per vertex.
        let total: BigRational = cycle.iter().map(|a| t.access_gap(a).clone()).sum();
        assert_eq!(total, rat(4, 1));
    }

    #[test]
    fn pseudoaccess_cycle_on_a_path() {
        let t = tree_from_rings(&[
            ("a", &[("b", rat(1, 1))][..]),
            ("b", &[("a", rat(1, 2)), ("c", rat(1, 2))][..]),
            ("c", &[("b", rat(1, 1))][..]),
        ]);
        let cycle = t.pseudoaccess_cycle();
        assert_eq!(cycle.len(), 4);
        assert_eq!(cycle[0], PseudoAccess::new("a", "b"));
        assert_eq!(cycle[1], PseudoAccess::new("b", "a"));
        assert_eq!(cycle[2], PseudoAccess::new("c", "b"));
        assert_eq!(cycle[3], PseudoAccess::new("b", "c"));
    }

    #[test]
    fn single_vertex_has_empty_cycle() {
        let t = AngledTree::single("a");
        assert!(t.pseudoaccess_cycle().is_empty());
        assert_eq!(t.first_access(), None);
    }

    #[test]
    fn component_without_splits_at_vertex() {
        let t = star();
        let side = t.component_without(&vid("c"), &vid("x"));
        assert_eq!(side, BTreeSet::from([vid("x")]));
        let all_but = t.component_without(&vid("x"), &vid("c"));
        assert_eq!(all_but, BTreeSet::from([vid("c"), vid("y"), vid("z")]));
        assert!(t.component_without(&vid("c"), &vid("c")).is_empty());
    }
}
