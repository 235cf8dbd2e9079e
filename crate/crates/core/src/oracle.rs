//! Brute-force reference checks straight from the definitions. Quadratic or
//! exponential; meant for tests and one-off verification only.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::approx::{Strength, ViolationGraph};
use crate::json_model::{enumerate_paths, evaluate_path, Atomic, Document, DocumentCollection, Path, ValueSet};

fn collection_values(collection: &DocumentCollection, path: &Path) -> BTreeSet<Atomic> {
    collection
        .documents()
        .iter()
        .flat_map(|d| evaluate_path(d, path).iter().cloned().collect::<Vec<_>>())
        .collect()
}

/// Every value of `doc` at `p1` occurs at `p2` in some document.
pub fn fully_included(collection: &DocumentCollection, doc: &Document, p1: &Path, p2: &Path) -> bool {
    let lhs = evaluate_path(doc, p1);
    lhs.iter()
        .all(|v| collection.documents().iter().any(|d| evaluate_path(d, p2).contains(v)))
}

/// Validity over all documents, and the fraction of distinct `p1` values
/// found at `p2`. An empty `p1` is vacuously included with strength 1.
pub fn validate_nind(collection: &DocumentCollection, p1: &Path, p2: &Path) -> (bool, Strength) {
    let valid = collection
        .documents()
        .iter()
        .all(|d| fully_included(collection, d, p1, p2));
    let lhs = collection_values(collection, p1);
    if lhs.is_empty() {
        return (valid, Ratio::from_integer(1));
    }
    let rhs = collection_values(collection, p2);
    let hit = lhs.iter().filter(|v| rhs.contains(v)).count();
    (valid, Ratio::new(hit as u64, lhs.len() as u64))
}

fn pair_violates(a: &Document, b: &Document, lhs: &[Path], rhs: &[Path]) -> bool {
    let meets = |p: &Path| evaluate_path(a, p).intersects(&evaluate_path(b, p));
    lhs.iter().all(meets) && !rhs.iter().all(meets)
}

/// Every unordered pair of distinct documents whose values meet on all of
/// `lhs` but not on all of `rhs`.
pub fn nfd_violation_graph(collection: &DocumentCollection, lhs: &[Path], rhs: &[Path]) -> ViolationGraph {
    let docs = collection.documents();
    let mut graph = ViolationGraph::new();
    for (i, a) in docs.iter().enumerate() {
        for b in &docs[i + 1..] {
            if pair_violates(a, b, lhs, rhs) {
                graph.add(a.id.0, b.id.0);
            }
        }
    }
    graph
}

pub fn validate_nfd(collection: &DocumentCollection, lhs: &[Path], rhs: &[Path]) -> bool {
    nfd_violation_graph(collection, lhs, rhs).is_empty()
}

/// Exact minimum vertex cover by branching on an uncovered edge.
pub fn exact_min_vertex_cover(graph: &ViolationGraph) -> usize {
    let edges: Vec<(u32, u32)> = graph.edges().map(|e| e.endpoints()).collect();
    let mut chosen = BTreeSet::new();
    let mut best = graph.vertices().len();
    branch(&edges, &mut chosen, &mut best);
    best
}

fn branch(edges: &[(u32, u32)], chosen: &mut BTreeSet<u32>, best: &mut usize) {
    if chosen.len() >= *best {
        return;
    }
    let Some(&(a, b)) = edges.iter().find(|(a, b)| !chosen.contains(a) && !chosen.contains(b)) else {
        *best = chosen.len();
        return;
    };
    for v in [a, b] {
        chosen.insert(v);
        branch(edges, chosen, best);
        chosen.remove(&v);
    }
}

/// All ordered pairs of distinct paths whose inclusion holds exactly.
pub fn exact_ninds(collection: &DocumentCollection) -> BTreeSet<(Path, Path)> {
    let paths = enumerate_paths(collection);
    let mut out = BTreeSet::new();
    for p1 in &paths {
        for p2 in &paths {
            if p1 != p2 && validate_nind(collection, p1, p2).0 {
                out.insert((p1.clone(), p2.clone()));
            }
        }
    }
    out
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..n).map(|i| alloc::vec![i]).collect();
    let mut level = out.clone();
    for _ in 1..k {
        let mut next = Vec::new();
        for s in &level {
            for b in s[s.len() - 1] + 1..n {
                let mut t = s.clone();
                t.push(b);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Exactly valid `lhs -> rhs` with `|lhs| <= max_lhs`, `rhs ∉ lhs`, and no
/// valid proper subset of `lhs`. Lhs paths are sorted.
pub fn minimal_nfds(collection: &DocumentCollection, max_lhs: usize) -> BTreeSet<(Vec<Path>, Path)> {
    let paths: Vec<Path> = enumerate_paths(collection).into_iter().collect();
    let docs = collection.documents();
    // Per-path agreement matrix, computed once.
    let n = docs.len();
    let agree: Vec<Vec<bool>> = paths
        .iter()
        .map(|p| {
            let sets: Vec<ValueSet> = docs.iter().map(|d| evaluate_path(d, p)).collect();
            let mut m = alloc::vec![false; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    m[i * n + j] = sets[i].intersects(&sets[j]);
                }
            }
            m
        })
        .collect();
    let valid = |lhs: &[usize], rhs: usize| {
        (0..n).all(|i| (i + 1..n).all(|j| !lhs.iter().all(|&p| agree[p][i * n + j]) || agree[rhs][i * n + j]))
    };
    let mut found: Vec<(Vec<usize>, usize)> = Vec::new();
    for lhs in subsets_up_to(paths.len(), max_lhs) {
        for rhs in 0..paths.len() {
            if lhs.contains(&rhs) {
                continue;
            }
            let covered = found
                .iter()
                .any(|(l, r)| *r == rhs && l.iter().all(|x| lhs.contains(x)));
            if !covered && valid(&lhs, rhs) {
                found.push((lhs.clone(), rhs));
            }
        }
    }
    found
        .into_iter()
        .map(|(l, r)| (l.into_iter().map(|i| paths[i].clone()).collect(), paths[r].clone()))
        .collect()
}
