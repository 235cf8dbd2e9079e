use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_rational::Ratio;

use super::lattice::{search, Found, LatticeOracle};
use super::pathset::PathSet;
use super::{check_preconditions, to_nfds, unit_doc, Nfd};
use crate::approx::{greedy_vertex_cover, strength_from_cover, Edge, Strength, Threshold, ViolationGraph};
use crate::error::MineError;
use crate::json_model::{Atomic, DocId, DocumentCollection, Path, ValueSet};
use crate::unroll::{dynamic_unroll, Merge, MetadataSink, StaticTable};

/// Every unit flattened to a path → value-set map.
#[derive(Clone, Debug, Default)]
pub struct FdepMeta {
    paths: BTreeSet<Path>,
    docs: BTreeMap<u32, BTreeMap<Path, ValueSet>>,
    unit_docs: Option<Vec<DocId>>,
}

impl FdepMeta {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, unit: u32, path: &Path, value: &Atomic) {
        if !self.paths.contains(path) {
            self.paths.insert(path.clone());
        }
        let doc = self.docs.entry(unit).or_default();
        match doc.get_mut(path) {
            Some(values) => {
                if !values.contains(value) {
                    values.insert(value.clone());
                }
            }
            None => {
                doc.insert(path.clone(), [value.clone()].into_iter().collect());
            }
        }
    }

    /// Metadata over statically unrolled rows; each row is its own unit.
    pub fn from_table(table: &StaticTable) -> Self {
        let mut meta = FdepMeta::new();
        table.feed_rows(0..table.rows().len(), |unit, path, value| meta.record(unit, path, value));
        meta.with_unit_docs(table.row_docs())
    }

    pub fn with_unit_docs(mut self, unit_docs: Vec<DocId>) -> Self {
        self.unit_docs = Some(unit_docs);
        self
    }

    pub fn paths(&self) -> &BTreeSet<Path> {
        &self.paths
    }

    pub fn doc(&self, unit: u32) -> Option<&BTreeMap<Path, ValueSet>> {
        self.docs.get(&unit)
    }

    pub fn approx_bytes(&self) -> usize {
        self.docs
            .values()
            .flat_map(|d| d.values())
            .map(|v| 96 + v.len() * 48)
            .sum::<usize>()
            + self.paths.len() * 64
    }
}

impl MetadataSink for FdepMeta {
    fn update(&mut self, id: DocId, path: &Path, value: &Atomic) {
        self.record(id.0, path, value);
    }
}

impl Merge for FdepMeta {
    fn merge(&mut self, other: Self) {
        self.paths.extend(other.paths);
        for (unit, paths) in other.docs {
            let mine = self.docs.entry(unit).or_default();
            for (path, values) in paths {
                mine.entry(path).or_default().extend(values);
            }
        }
    }
}

pub fn fdep_collect(collection: &DocumentCollection) -> FdepMeta {
    dynamic_unroll(collection, FdepMeta::new())
}

/// Distinct agree sets observed over unit pairs, each with the document
/// pairs that produced it. An agree set `S` refutes `S -> A` for every path
/// `A` outside it.
struct NegativeCover {
    agree_sets: Vec<(PathSet, Vec<Edge>)>,
}

fn negative_cover(meta: &FdepMeta, paths: &[Path], n_docs: usize) -> NegativeCover {
    let n_units = meta.unit_docs.as_ref().map_or(n_docs, Vec::len) as u32;
    let rows: Vec<Vec<Option<&ValueSet>>> = (1..=n_units)
        .map(|u| {
            let doc = meta.docs.get(&u);
            paths.iter().map(|p| doc.and_then(|d| d.get(p))).collect()
        })
        .collect();
    let n_paths = paths.len();
    let mut sets: BTreeMap<PathSet, Vec<Edge>> = BTreeMap::new();
    for i in 1..=n_units {
        let di = unit_doc(&meta.unit_docs, i);
        let row_i = &rows[i as usize - 1];
        for j in i + 1..=n_units {
            let dj = unit_doc(&meta.unit_docs, j);
            if di == dj {
                continue;
            }
            let row_j = &rows[j as usize - 1];
            let mut agree = PathSet::with_capacity(n_paths);
            for p in 0..n_paths {
                if let (Some(a), Some(b)) = (row_i[p], row_j[p]) {
                    if a.intersects(b) {
                        agree.insert(p);
                    }
                }
            }
            // Empty agree sets refute no dependency with a non-empty lhs, and
            // full ones refute nothing at all.
            if agree.is_empty() || agree.len() == n_paths {
                continue;
            }
            let edge = Edge::new(di, dj).expect("distinct documents");
            sets.entry(agree).or_default().push(edge);
        }
    }
    NegativeCover {
        agree_sets: sets.into_iter().collect(),
    }
}

/// Keeps only sets with no proper subset in the collection (and no duplicates).
fn minimize(mut sets: Vec<PathSet>) -> Vec<PathSet> {
    sets.sort_by_key(|s| s.len());
    let mut out: Vec<PathSet> = Vec::new();
    for s in sets {
        if !out.iter().any(|m| m.is_subset(&s)) {
            out.push(s);
        }
    }
    out
}

/// Exact positive cover by specializing candidate left-hand sides against
/// the maximal negative dependencies.
fn induce_exact(cover: &NegativeCover, n_paths: usize, max_lhs: usize) -> Vec<Found> {
    let mut out = Vec::new();
    for rhs in 0..n_paths {
        let negatives: Vec<PathSet> = cover
            .agree_sets
            .iter()
            .filter(|(s, _)| !s.contains(rhs))
            .map(|(s, _)| s.clone())
            .collect();
        // Maximal negative dependencies only.
        let mut maximal: Vec<PathSet> = Vec::new();
        for s in &negatives {
            if !negatives.iter().any(|t| t != s && s.is_subset(t)) {
                maximal.push(s.clone());
            }
        }
        let mut candidates: Vec<PathSet> = (0..n_paths)
            .filter(|&b| b != rhs)
            .map(|b| core::iter::once(b).collect())
            .collect();
        for agree in &maximal {
            let (refuted, kept): (Vec<PathSet>, Vec<PathSet>) = candidates.into_iter().partition(|x| x.is_subset(agree));
            let mut next = kept;
            for x in refuted {
                if x.len() >= max_lhs {
                    continue;
                }
                for b in (0..n_paths).filter(|&b| b != rhs && !agree.contains(b)) {
                    let mut y = x.clone();
                    y.insert(b);
                    next.push(y);
                }
            }
            candidates = minimize(next);
        }
        for x in candidates {
            out.push((x.iter().collect(), rhs, Ratio::from_integer(1)));
        }
    }
    out.sort();
    out
}

struct CoverOracle<'a> {
    cover: &'a NegativeCover,
    n_docs: usize,
    threshold: Threshold,
}

impl LatticeOracle for CoverOracle<'_> {
    /// Indices of agree sets containing the node's lhs.
    type Node = Vec<usize>;

    fn singleton(&mut self, path: usize) -> Vec<usize> {
        (0..self.cover.agree_sets.len())
            .filter(|&i| self.cover.agree_sets[i].0.contains(path))
            .collect()
    }

    fn extend(&mut self, parent: &Vec<usize>, path: usize) -> Vec<usize> {
        parent
            .iter()
            .copied()
            .filter(|&i| self.cover.agree_sets[i].0.contains(path))
            .collect()
    }

    fn check(&mut self, node: &Vec<usize>, _: &[usize], rhs: usize) -> Option<Strength> {
        let mut graph = ViolationGraph::new();
        for &i in node {
            let (agree, edges) = &self.cover.agree_sets[i];
            if !agree.contains(rhs) {
                for e in edges {
                    let (a, b) = e.endpoints();
                    graph.add(a, b);
                }
            }
        }
        if graph.is_empty() {
            return Some(Ratio::from_integer(1));
        }
        if self.threshold.is_exact() {
            return None;
        }
        let strength = strength_from_cover(greedy_vertex_cover(&graph), self.n_docs).ok()?;
        self.threshold.satisfied(strength).then_some(strength)
    }
}

/// Builds the negative cover from all unit pairs (agreement is value-set
/// intersection), then derives the minimal dependencies with lhs size at most
/// `max_lhs`. In exact mode the positive cover comes from specializing
/// against maximal negative dependencies; in approximate mode candidates are
/// scored by greedily covering the document pairs of every refuting agree set.
pub fn fdep_mine(meta: &FdepMeta, n_docs: usize, threshold: Threshold, max_lhs: usize) -> Result<Vec<Nfd>, MineError> {
    check_preconditions(n_docs, max_lhs)?;
    let paths: Vec<Path> = meta.paths.iter().cloned().collect();
    let cover = negative_cover(meta, &paths, n_docs);
    let found = if threshold.is_exact() {
        induce_exact(&cover, paths.len(), max_lhs)
    } else {
        let mut oracle = CoverOracle {
            cover: &cover,
            n_docs,
            threshold,
        };
        search(&mut oracle, paths.len(), max_lhs)
    };
    Ok(to_nfds(&paths, found))
}

/// Exact mode through the scoring path, for cross-checking the induction.
#[cfg(test)]
pub(crate) fn fdep_mine_by_search(meta: &FdepMeta, n_docs: usize, max_lhs: usize) -> Vec<Nfd> {
    let paths: Vec<Path> = meta.paths.iter().cloned().collect();
    let cover = negative_cover(meta, &paths, n_docs);
    let mut oracle = CoverOracle {
        cover: &cover,
        n_docs,
        threshold: Threshold::EXACT,
    };
    to_nfds(&paths, search(&mut oracle, paths.len(), max_lhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn record_builds_value_sets() {
        let mut meta = FdepMeta::new();
        meta.record(2, &p("$.a[*]"), &"X".into());
        meta.record(2, &p("$.a[*]"), &"Y".into());
        meta.record(2, &p("$.a[*]"), &"X".into());
        assert_eq!(meta.doc(2).unwrap()[&p("$.a[*]")].len(), 2);
        assert!(meta.doc(1).is_none());
    }

    #[test]
    fn minimize_drops_supersets() {
        let a: PathSet = [1].into_iter().collect();
        let b: PathSet = [1, 2].into_iter().collect();
        let c: PathSet = [3].into_iter().collect();
        assert_eq!(minimize(vec![b, a.clone(), c.clone(), a.clone()]), vec![a, c]);
    }

    #[test]
    fn constant_rhs_is_determined_by_every_single_path() {
        let mut meta = FdepMeta::new();
        for (u, k) in [(1, 1), (2, 2), (3, 3)] {
            meta.record(u, &p("$.c"), &0.into());
            meta.record(u, &p("$.k"), &k.into());
        }
        let out = fdep_mine(&meta, 3, Threshold::EXACT, 2).unwrap();
        let got: Vec<(Vec<Path>, Path)> = out.into_iter().map(|n| (n.lhs, n.rhs)).collect();
        assert_eq!(got, vec![(vec![p("$.k")], p("$.c"))]);
    }

    #[test]
    fn induction_matches_exact_search() {
        for seed in 0..60 {
            let c = crate::datagen::random_small_collection(seed, 12, 5);
            let meta = fdep_collect(&c);
            let induced = fdep_mine(&meta, c.len().max(2), Threshold::EXACT, 2).unwrap();
            assert_eq!(induced, fdep_mine_by_search(&meta, c.len().max(2), 2), "seed {seed}");
        }
    }
}
