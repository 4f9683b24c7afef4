//! Shared generators for the integration suites: seeded random trees,
//! connected restrictions, small valid coverings, and weighted schemata.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hubbard_forest::tree::tree_from_rings;
use hubbard_forest::{
    parse_document, AngledTree, Covering, Document, MappingSchema, Spoke, VertexId,
};

pub fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> Document {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.forest"));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("fixture {} unreadable: {e}", path.display()));
    parse_document(&text).unwrap_or_else(|e| panic!("fixture {name} must parse: {e}"))
}

/// Random angled tree on `n` vertices: vertex `i` attaches to a random
/// earlier vertex, rings are shuffled, gaps are random positive rationals
/// normalized to sum to one.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> AngledTree {
    let names: Vec<VertexId> = (0..n).map(|i| VertexId::new(format!("v{i}"))).collect();
    let mut neighbors: BTreeMap<VertexId, Vec<VertexId>> =
        names.iter().map(|v| (v.clone(), Vec::new())).collect();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        neighbors.get_mut(&names[i]).unwrap().push(names[j].clone());
        neighbors.get_mut(&names[j]).unwrap().push(names[i].clone());
    }
    let mut rings = BTreeMap::new();
    for (v, mut around) in neighbors {
        around.shuffle(rng);
        let weights: Vec<u64> = around.iter().map(|_| rng.gen_range(1..=6)).collect();
        let total: u64 = weights.iter().sum();
        let spokes = around
            .into_iter()
            .zip(&weights)
            .map(|(to, &w)| Spoke::new(to, r(w as i64, total as i64)))
            .collect();
        rings.insert(v, spokes);
    }
    let tree = AngledTree::new(rings).expect("random tree is structurally sound");
    assert!(tree.validate().is_empty(), "random tree must satisfy the tree axioms");
    tree
}

/// Connected random vertex subset of size at most `target`.
pub fn random_subtree(rng: &mut ChaCha8Rng, tree: &AngledTree, target: usize) -> BTreeSet<VertexId> {
    let verts: Vec<&VertexId> = tree.vertices().collect();
    let mut keep = BTreeSet::from([verts[rng.gen_range(0..verts.len())].clone()]);
    while keep.len() < target {
        let frontier: Vec<VertexId> = keep
            .iter()
            .flat_map(|v| tree.ring(v).iter().map(|s| s.to.clone()))
            .filter(|v| !keep.contains(v))
            .collect();
        if frontier.is_empty() {
            break;
        }
        keep.insert(frontier[rng.gen_range(0..frontier.len())].clone());
    }
    keep
}

/// Subtree induced by a connected vertex subset. The gap after a kept spoke
/// is the sum of the ambient gaps up to the next kept spoke, so every ring
/// still sums to one full turn.
pub fn induced_subtree(tree: &AngledTree, keep: &BTreeSet<VertexId>) -> AngledTree {
    let mut rings = BTreeMap::new();
    for v in keep {
        let full = tree.ring(v);
        let kept: Vec<usize> = (0..full.len())
            .filter(|&i| keep.contains(&full[i].to))
            .collect();
        let mut spokes = Vec::new();
        for (pos, &i) in kept.iter().enumerate() {
            let next = kept[(pos + 1) % kept.len()];
            let mut gap = BigRational::zero();
            let mut k = i;
            loop {
                gap += full[k].gap.clone();
                k = (k + 1) % full.len();
                if k == next {
                    break;
                }
            }
            spokes.push(Spoke::new(full[i].to.clone(), gap));
        }
        rings.insert(v.clone(), spokes);
    }
    AngledTree::new(rings).expect("induced subtree is structurally sound")
}

/// Restriction of a covering to a connected subset of its domain. Both sides
/// of the angle equation add up over skipped spokes, so the restriction of a
/// valid covering is again valid.
pub fn restrict_covering(c: &Covering, keep: &BTreeSet<VertexId>) -> Covering {
    let domain = induced_subtree(c.domain(), keep);
    let map = c
        .map()
        .iter()
        .filter(|(v, _)| keep.contains(*v))
        .map(|(v, w)| (v.clone(), w.clone()))
        .collect();
    let degrees = c
        .degrees()
        .iter()
        .filter(|(v, _)| keep.contains(*v))
        .map(|(v, d)| (v.clone(), *d))
        .collect();
    Covering::new(domain, c.codomain().clone(), map, degrees)
        .expect("restriction is structurally sound")
}

/// Small valid covering into `codomain`: either a critical point over a
/// single-vertex codomain, or an edge stretched over the path between two
/// distinct codomain vertices. Leaf rings make the angle equation vacuous,
/// so any local degrees give a valid covering.
pub fn seed_covering(rng: &mut ChaCha8Rng, codomain: &AngledTree) -> Covering {
    let verts: Vec<VertexId> = codomain.vertices().cloned().collect();
    if verts.len() == 1 {
        let domain = AngledTree::single("d0");
        let map = BTreeMap::from([(VertexId::new("d0"), verts[0].clone())]);
        let degrees = BTreeMap::from([(VertexId::new("d0"), rng.gen_range(1..=4u32))]);
        return Covering::new(domain, codomain.clone(), map, degrees).unwrap();
    }
    let a = verts[rng.gen_range(0..verts.len())].clone();
    let mut b = verts[rng.gen_range(0..verts.len())].clone();
    while b == a {
        b = verts[rng.gen_range(0..verts.len())].clone();
    }
    let one = BigRational::one();
    let domain = tree_from_rings(&[
        ("d0", &[("d1", one.clone())][..]),
        ("d1", &[("d0", one)][..]),
    ]);
    let map = BTreeMap::from([(VertexId::new("d0"), a), (VertexId::new("d1"), b)]);
    let degrees = BTreeMap::from([
        (VertexId::new("d0"), rng.gen_range(1..=2u32)),
        (VertexId::new("d1"), rng.gen_range(1..=3u32)),
    ]);
    let c = Covering::new(domain, codomain.clone(), map, degrees).unwrap();
    assert!(c.validate().is_empty(), "seed covering must be valid");
    c
}

fn build_schema(entries: &[(String, String, u64)]) -> MappingSchema {
    let refs: Vec<(&str, &str, u64)> = entries
        .iter()
        .map(|(v, fv, w)| (v.as_str(), fv.as_str(), *w))
        .collect();
    MappingSchema::from_pairs(&refs)
}

/// Random valid schema on up to `max_k` vertices: random functional graph,
/// random weights in 0..=3, with one weight bumped on any all-zero cycle.
pub fn random_schema(rng: &mut ChaCha8Rng, max_k: usize) -> MappingSchema {
    let k = rng.gen_range(1..=max_k);
    let names: Vec<String> = (0..k).map(|i| format!("s{i}")).collect();
    let mut entries: Vec<(String, String, u64)> = names
        .iter()
        .map(|n| {
            (
                n.clone(),
                names[rng.gen_range(0..k)].clone(),
                rng.gen_range(0..=3u64),
            )
        })
        .collect();
    loop {
        let schema = build_schema(&entries);
        let dead = schema
            .cycles()
            .into_iter()
            .find(|cyc| cyc.iter().all(|v| schema.weights()[v] == 0));
        match dead {
            None => return schema,
            Some(cyc) => {
                let name = cyc[0].as_str().to_owned();
                let slot = entries.iter_mut().find(|(v, _, _)| *v == name).unwrap();
                slot.2 = 1;
            }
        }
    }
}
