//! Mapping schemata: finite vertex sets with a self-map and critical weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Name of a schema vertex. Schema vertices index the trees of a forest and
/// live in a different namespace than tree vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemaVertexId(pub String);

impl SchemaVertexId {
    pub fn new(name: impl Into<String>) -> Self {
        SchemaVertexId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SchemaVertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for SchemaVertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s\"{}\"", self.0)
    }
}

impl From<&str> for SchemaVertexId {
    fn from(s: &str) -> Self {
        SchemaVertexId(s.to_string())
    }
}

impl From<String> for SchemaVertexId {
    fn from(s: String) -> Self {
        SchemaVertexId(s)
    }
}

/// Structural defects in schema data.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemaStructureError {
    #[error("vertex {0} has a map entry but no weight")]
    MissingWeight(SchemaVertexId),
    #[error("vertex {0} has a weight but no map entry")]
    MissingImage(SchemaVertexId),
    #[error("vertex {at} maps to unknown vertex {image}")]
    UnknownImage {
        at: SchemaVertexId,
        image: SchemaVertexId,
    },
}

/// Semantic defect: a cycle with no critical vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaViolation {
    /// An F-cycle all of whose vertices have weight zero, listed in cycle
    /// order starting from its smallest vertex.
    AllZeroWeightCycle { cycle: Vec<SchemaVertexId> },
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let SchemaViolation::AllZeroWeightCycle { cycle } = self;
        write!(f, "cycle without a critical vertex:")?;
        for v in cycle {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

/// Why reduction failed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("reduction does not terminate: the schema has an all-zero-weight cycle")]
    InvalidSchema,
}

/// A mapping schema: vertices with a total self-map `F` and a weight `w` per
/// vertex. The derived degree is `d(v) = w(v) + 1`; a vertex is critical
/// when `w(v) > 0`. A schema is valid when every F-cycle contains a critical
/// vertex, and reduced when every vertex is critical.
#[derive(Clone, PartialEq, Eq)]
pub struct MappingSchema {
    f: BTreeMap<SchemaVertexId, SchemaVertexId>,
    w: BTreeMap<SchemaVertexId, u64>,
}

impl MappingSchema {
    /// Builds a schema from its map and weights, which must share a key set,
    /// with images inside it.
    pub fn new(
        f: BTreeMap<SchemaVertexId, SchemaVertexId>,
        w: BTreeMap<SchemaVertexId, u64>,
    ) -> Result<Self, SchemaStructureError> {
        for v in f.keys() {
            if !w.contains_key(v) {
                return Err(SchemaStructureError::MissingWeight(v.clone()));
            }
        }
        for v in w.keys() {
            if !f.contains_key(v) {
                return Err(SchemaStructureError::MissingImage(v.clone()));
            }
        }
        for (v, image) in &f {
            if !f.contains_key(image) {
                return Err(SchemaStructureError::UnknownImage {
                    at: v.clone(),
                    image: image.clone(),
                });
            }
        }
        Ok(MappingSchema { f, w })
    }

    /// The empty schema.
    pub fn empty() -> Self {
        MappingSchema {
            f: BTreeMap::new(),
            w: BTreeMap::new(),
        }
    }

    /// Test and fixture helper; panics on structural errors.
    pub fn from_pairs(entries: &[(&str, &str, u64)]) -> Self {
        let f = entries
            .iter()
            .map(|(v, fv, _)| (SchemaVertexId::new(*v), SchemaVertexId::new(*fv)))
            .collect();
        let w = entries
            .iter()
            .map(|(v, _, wv)| (SchemaVertexId::new(*v), *wv))
            .collect();
        MappingSchema::new(f, w).expect("structurally sound schema")
    }

    pub fn vertices(&self) -> impl Iterator<Item = &SchemaVertexId> {
        self.f.keys()
    }

    pub fn vertex_count(&self) -> usize {
        self.f.len()
    }

    pub fn contains(&self, v: &SchemaVertexId) -> bool {
        self.f.contains_key(v)
    }

    pub fn map(&self) -> &BTreeMap<SchemaVertexId, SchemaVertexId> {
        &self.f
    }

    pub fn weights(&self) -> &BTreeMap<SchemaVertexId, u64> {
        &self.w
    }

    /// Image under F. Panics on unknown vertex.
    pub fn image(&self, v: &SchemaVertexId) -> &SchemaVertexId {
        &self.f[v]
    }

    /// Weight of a vertex. Panics on unknown vertex.
    pub fn weight(&self, v: &SchemaVertexId) -> u64 {
        self.w[v]
    }

    /// Degree `d(v) = w(v) + 1`.
    pub fn degree(&self, v: &SchemaVertexId) -> u64 {
        self.w[v] + 1
    }

    /// Sum of all weights.
    pub fn total_weight(&self) -> u64 {
        self.w.values().sum()
    }

    /// All F-cycles, each rotated to start at its smallest vertex and sorted
    /// by that vertex.
    pub fn cycles(&self) -> Vec<Vec<SchemaVertexId>> {
        let mut state: BTreeMap<&SchemaVertexId, u8> = BTreeMap::new(); // 1 in progress, 2 done
        let mut cycles = Vec::new();
        for start in self.f.keys() {
            if state.contains_key(start) {
                continue;
            }
            let mut trail = Vec::new();
            let mut cur = start;
            while !state.contains_key(cur) {
                state.insert(cur, 1);
                trail.push(cur);
                cur = &self.f[cur];
            }
            if state[cur] == 1 {
                // Found a new cycle: the tail of the trail from `cur`.
                let pos = trail.iter().position(|v| *v == cur).unwrap();
                let mut cycle: Vec<SchemaVertexId> =
                    trail[pos..].iter().map(|v| (*v).clone()).collect();
                let min = cycle
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| a.cmp(b))
                    .map(|(i, _)| i)
                    .unwrap();
                cycle.rotate_left(min);
                cycles.push(cycle);
            }
            for v in trail {
                state.insert(v, 2);
            }
        }
        cycles.sort();
        cycles
    }

    /// Orbit data of a vertex: (preperiod, period) under F.
    pub fn orbit(&self, v: &SchemaVertexId) -> (usize, usize) {
        let mut seen: BTreeMap<&SchemaVertexId, usize> = BTreeMap::new();
        let mut cur = v;
        let mut i = 0;
        loop {
            if let Some(&first) = seen.get(cur) {
                return (first, i - first);
            }
            seen.insert(cur, i);
            cur = &self.f[cur];
            i += 1;
        }
    }

    /// Lists every all-zero-weight cycle.
    pub fn validate(&self) -> Vec<SchemaViolation> {
        self.cycles()
            .into_iter()
            .filter(|cycle| cycle.iter().all(|v| self.w[v] == 0))
            .map(|cycle| SchemaViolation::AllZeroWeightCycle { cycle })
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// True when every vertex is critical.
    pub fn is_reduced(&self) -> bool {
        self.w.values().all(|&wv| wv > 0)
    }

    /// Discards weight-zero vertices, redirecting F past them. Preserves the
    /// total weight; the result is reduced. Fails on an invalid schema,
    /// where redirection around an all-zero cycle would not terminate.
    pub fn reduce(&self) -> Result<MappingSchema, ReduceError> {
        if !self.is_valid() {
            return Err(ReduceError::InvalidSchema);
        }
        fn skip_to<'a>(s: &'a MappingSchema, mut v: &'a SchemaVertexId) -> &'a SchemaVertexId {
            while s.w[v] == 0 {
                v = &s.f[v];
            }
            v
        }
        let mut f = BTreeMap::new();
        let mut w = BTreeMap::new();
        for (v, &wv) in &self.w {
            if wv == 0 {
                continue;
            }
            f.insert(v.clone(), skip_to(self, &self.f[v]).clone());
            w.insert(v.clone(), wv);
        }
        Ok(MappingSchema { f, w })
    }
}

impl fmt::Debug for MappingSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MappingSchema {{")?;
        for (v, image) in &self.f {
            write!(f, " {v}->{image} (w={})", self.w[v])?;
        }
        write!(f, " }}")
    }
}

/// A weight-preserving conjugacy between two schemata.
pub type SchemaBijection = BTreeMap<SchemaVertexId, SchemaVertexId>;

/// Conjugacy invariants used to prune the bijection search.
fn signature(s: &MappingSchema, v: &SchemaVertexId) -> (u64, usize, usize) {
    let (preperiod, period) = s.orbit(v);
    (s.w[v], preperiod, period)
}

fn search(
    s1: &MappingSchema,
    s2: &MappingSchema,
    all: bool,
) -> Vec<SchemaBijection> {
    let mut results = Vec::new();
    if s1.vertex_count() != s2.vertex_count() {
        return results;
    }
    let left: Vec<&SchemaVertexId> = s1.vertices().collect();
    let sig2: BTreeMap<&SchemaVertexId, (u64, usize, usize)> =
        s2.vertices().map(|v| (v, signature(s2, v))).collect();

    #[allow(clippy::too_many_arguments)]
    fn extend<'a>(
        s1: &MappingSchema,
        s2: &'a MappingSchema,
        left: &[&SchemaVertexId],
        sig2: &BTreeMap<&'a SchemaVertexId, (u64, usize, usize)>,
        phi: &mut SchemaBijection,
        used: &mut BTreeSet<&'a SchemaVertexId>,
        all: bool,
        results: &mut Vec<SchemaBijection>,
    ) -> bool {
        let Some(v) = left.get(phi.len()).copied() else {
            results.push(phi.clone());
            return !all;
        };
        let sig = signature(s1, v);
        for u in s2.vertices() {
            if used.contains(u) || sig2[u] != sig {
                continue;
            }
            phi.insert(v.clone(), u.clone());
            used.insert(u);
            // Conjugacy on every fully assigned pair: phi(F(x)) == F'(phi(x)).
            let consistent = phi.iter().all(|(x, x2)| {
                let fx = s1.image(x);
                match phi.get(fx) {
                    Some(fx2) => s2.image(x2) == fx2,
                    None => true,
                }
            }) && phi.iter().all(|(x, x2)| {
                // Reverse direction: if F'(x2) is hit, its preimage must map.
                let fx2 = s2.image(x2);
                let fx = s1.image(x);
                !phi.values().any(|y2| y2 == fx2) || phi.get(fx) == Some(fx2)
            });
            if consistent
                && extend(s1, s2, left, sig2, phi, used, all, results)
            {
                return true;
            }
            used.remove(u);
            phi.remove(v);
        }
        false
    }

    let mut phi = SchemaBijection::new();
    let mut used = BTreeSet::new();
    extend(s1, s2, &left, &sig2, &mut phi, &mut used, all, &mut results);
    results
}

/// Finds a weight-preserving bijection conjugating the two schemata, if one
/// exists.
pub fn schema_equivalent(s1: &MappingSchema, s2: &MappingSchema) -> Option<SchemaBijection> {
    search(s1, s2, false).into_iter().next()
}

/// All weight-preserving conjugating bijections between two schemata.
pub fn equivalences(s1: &MappingSchema, s2: &MappingSchema) -> Vec<SchemaBijection> {
    search(s1, s2, true)
}

/// All self-equivalences of a schema. Always contains the identity; closed
/// under composition and inverse.
pub fn automorphisms(s: &MappingSchema) -> Vec<SchemaBijection> {
    search(s, s, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sid(s: &str) -> SchemaVertexId {
        SchemaVertexId::new(s)
    }

    #[test]
    fn structural_checks() {
        let f: BTreeMap<_, _> = [(sid("a"), sid("b"))].into_iter().collect();
        let w: BTreeMap<_, _> = [(sid("a"), 1)].into_iter().collect();
        assert_eq!(
            MappingSchema::new(f, w),
            Err(SchemaStructureError::UnknownImage {
                at: sid("a"),
                image: sid("b")
            })
        );
        let f: BTreeMap<_, _> = [(sid("a"), sid("a"))].into_iter().collect();
        assert_eq!(
            MappingSchema::new(f, BTreeMap::new()),
            Err(SchemaStructureError::MissingWeight(sid("a")))
        );
    }

    #[test]
    fn validity_needs_a_critical_vertex_per_cycle() {
        assert!(MappingSchema::from_pairs(&[("v", "v", 1)]).is_valid());
        let bad = MappingSchema::from_pairs(&[("v", "v", 0)]);
        assert_eq!(
            bad.validate(),
            vec![SchemaViolation::AllZeroWeightCycle {
                cycle: vec![sid("v")]
            }]
        );
        // Chain v0(w=1) -> v1(w=0) -> v0 is fine: the cycle contains v0.
        assert!(MappingSchema::from_pairs(&[("v0", "v1", 1), ("v1", "v0", 0)]).is_valid());
        // A zero tail into a zero cycle reports only the cycle.
        let bad = MappingSchema::from_pairs(&[("a", "b", 0), ("b", "b", 0), ("c", "a", 7)]);
        assert_eq!(
            bad.validate(),
            vec![SchemaViolation::AllZeroWeightCycle {
                cycle: vec![sid("b")]
            }]
        );
        assert!(MappingSchema::empty().is_valid());
    }

    #[test]
    fn total_weight_sums() {
        assert_eq!(MappingSchema::empty().total_weight(), 0);
        assert_eq!(
            MappingSchema::from_pairs(&[("a", "b", 1), ("b", "a", 0)]).total_weight(),
            1
        );
        assert_eq!(
            MappingSchema::from_pairs(&[("a", "a", 2), ("b", "a", 3)]).total_weight(),
            5
        );
    }

    #[test]
    fn reduce_collapses_zero_weight_vertices() {
        let s = MappingSchema::from_pairs(&[("v0", "v1", 1), ("v1", "v0", 0)]);
        let r = s.reduce().unwrap();
        assert_eq!(r, MappingSchema::from_pairs(&[("v0", "v0", 1)]));
        assert_eq!(r.total_weight(), s.total_weight());
        assert!(r.is_reduced());

        let s = MappingSchema::from_pairs(&[("v0", "v1", 2), ("v1", "v2", 0), ("v2", "v0", 0)]);
        let r = s.reduce().unwrap();
        assert_eq!(r, MappingSchema::from_pairs(&[("v0", "v0", 2)]));

        // Idempotent.
        assert_eq!(r.reduce().unwrap(), r);

        let bad = MappingSchema::from_pairs(&[("v", "v", 0)]);
        assert_eq!(bad.reduce(), Err(ReduceError::InvalidSchema));
    }

    #[test]
    fn orbit_data() {
        let s = MappingSchema::from_pairs(&[("a", "b", 1), ("b", "c", 0), ("c", "b", 0)]);
        assert_eq!(s.orbit(&sid("a")), (1, 2));
        assert_eq!(s.orbit(&sid("b")), (0, 2));
    }

    #[test]
    fn equivalence_finds_witness() {
        let s = MappingSchema::from_pairs(&[("a", "b", 1), ("b", "a", 2)]);
        // Identity on itself.
        let id = schema_equivalent(&s, &s).unwrap();
        assert!(id.iter().all(|(v, u)| v == u));
        // Relabeled copy.
        let t = MappingSchema::from_pairs(&[("x", "y", 2), ("y", "x", 1)]);
        let phi = schema_equivalent(&s, &t).unwrap();
        assert_eq!(phi[&sid("a")], sid("y"));
        assert_eq!(phi[&sid("b")], sid("x"));
        // Weight mismatch.
        let u1 = MappingSchema::from_pairs(&[("v", "v", 1)]);
        let u2 = MappingSchema::from_pairs(&[("v", "v", 2)]);
        assert_eq!(schema_equivalent(&u1, &u2), None);
    }

    #[test]
    fn automorphism_groups() {
        let single = MappingSchema::from_pairs(&[("v", "v", 1)]);
        assert_eq!(automorphisms(&single).len(), 1);

        let pair = MappingSchema::from_pairs(&[("a", "a", 1), ("b", "b", 1)]);
        let auts = automorphisms(&pair);
        assert_eq!(auts.len(), 2);

        let weighted = MappingSchema::from_pairs(&[("u0", "u1", 1), ("u1", "u0", 2)]);
        assert_eq!(automorphisms(&weighted).len(), 1);

        // Group closure: composing any two automorphisms gives another.
        let square = MappingSchema::from_pairs(&[
            ("a", "b", 1),
            ("b", "a", 1),
            ("c", "d", 1),
            ("d", "c", 1),
        ]);
        let auts = automorphisms(&square);
        for g in &auts {
            for h in &auts {
                let composed: SchemaBijection = g
                    .iter()
                    .map(|(v, u)| (v.clone(), h[u].clone()))
                    .collect();
                assert!(auts.contains(&composed));
            }
        }
        // The 2-cycles can swap and each can reverse phase: order 8? No:
        // conjugacy must commute with F, so each 2-cycle admits its rotation
        // (order 2) and the two cycles can swap: |Aut| = 2 * 2 * 2 = 8.
        assert_eq!(auts.len(), 8);
    }
}
