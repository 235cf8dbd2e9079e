use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::Ratio;
use roaring::RoaringBitmap;

use super::bitmap::{pair_index, PairBitmap, MAX_UNITS};
use super::lattice::{search, LatticeOracle};
use super::{check_preconditions, to_nfds, unit_doc, Nfd};
use crate::approx::{greedy_vertex_cover, strength_from_cover, Strength, Threshold, ViolationGraph};
use crate::error::MineError;
use crate::json_model::{Atomic, DocId, DocumentCollection, Path};
use crate::unroll::{dynamic_unroll, Merge, MetadataSink, StaticTable};

/// Value indexes plus, per path, the units holding each value.
#[derive(Clone, Debug, Default)]
pub struct TaneMeta {
    value_indexes: BTreeMap<Atomic, u32>,
    load_partitions: BTreeMap<Path, BTreeMap<u32, RoaringBitmap>>,
    unit_docs: Option<Vec<DocId>>,
}

impl TaneMeta {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records that `unit` holds `value` at `path`. Idempotent.
    pub fn record(&mut self, unit: u32, path: &Path, value: &Atomic) {
        let next = self.value_indexes.len() as u32;
        let index = match self.value_indexes.get(value) {
            Some(&i) => i,
            None => {
                self.value_indexes.insert(value.clone(), next);
                next
            }
        };
        let partitions = match self.load_partitions.get_mut(path) {
            Some(p) => p,
            None => self.load_partitions.entry(path.clone()).or_default(),
        };
        partitions.entry(index).or_default().insert(unit);
    }

    /// Metadata over statically unrolled rows; each row is its own unit.
    pub fn from_table(table: &StaticTable) -> Self {
        let mut meta = TaneMeta::new();
        table.feed_rows(0..table.rows().len(), |unit, path, value| meta.record(unit, path, value));
        meta.with_unit_docs(table.row_docs())
    }

    pub fn with_unit_docs(mut self, unit_docs: Vec<DocId>) -> Self {
        self.unit_docs = Some(unit_docs);
        self
    }

    pub fn value_index(&self, value: &Atomic) -> Option<u32> {
        self.value_indexes.get(value).copied()
    }

    /// Units holding `value` at `path`, ascending.
    pub fn partition(&self, path: &Path, value: &Atomic) -> Option<Vec<u32>> {
        let index = self.value_index(value)?;
        Some(self.load_partitions.get(path)?.get(&index)?.iter().collect())
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.load_partitions.keys()
    }

    pub fn approx_bytes(&self) -> usize {
        let parts: usize = self
            .load_partitions
            .values()
            .flat_map(|m| m.values())
            .map(|b| 64 + 2 * b.len() as usize)
            .sum();
        parts + self.value_indexes.len() * 64
    }
}

impl MetadataSink for TaneMeta {
    fn update(&mut self, id: DocId, path: &Path, value: &Atomic) {
        self.record(id.0, path, value);
    }
}

impl Merge for TaneMeta {
    fn merge(&mut self, other: Self) {
        let mut remap = BTreeMap::new();
        for (value, old) in other.value_indexes {
            let next = self.value_indexes.len() as u32;
            let new = *self.value_indexes.entry(value).or_insert(next);
            remap.insert(old, new);
        }
        for (path, partitions) in other.load_partitions {
            let mine = self.load_partitions.entry(path).or_default();
            for (old, units) in partitions {
                *mine.entry(remap[&old]).or_default() |= units;
            }
        }
    }
}

pub fn tane_collect(collection: &DocumentCollection) -> TaneMeta {
    dynamic_unroll(collection, TaneMeta::new())
}

/// Per-path adjacency: the unit pairs whose value sets intersect.
#[derive(Clone, Debug)]
pub struct Adjacency {
    bitmaps: BTreeMap<Path, PairBitmap>,
    n_units: usize,
    unit_docs: Option<Vec<DocId>>,
}

impl Adjacency {
    pub fn bitmaps(&self) -> &BTreeMap<Path, PairBitmap> {
        &self.bitmaps
    }

    pub fn get(&self, path: &Path) -> Option<&PairBitmap> {
        self.bitmaps.get(path)
    }

    pub fn n_units(&self) -> usize {
        self.n_units
    }

    pub fn approx_bytes(&self) -> usize {
        // Roaring containers hold at most 2 bytes per set bit.
        self.bitmaps.values().map(|b| 64 + 2 * b.len() as usize).sum()
    }
}

/// Unions, over each path's partitions, every within-partition pair of units
/// from different documents.
pub fn build_adjacency(meta: &TaneMeta, n_docs: usize) -> Result<Adjacency, MineError> {
    if n_docs < 2 {
        return Err(MineError::InsufficientDocuments { found: n_docs });
    }
    let n_units = meta.unit_docs.as_ref().map_or(n_docs, Vec::len);
    if n_units > MAX_UNITS {
        return Err(MineError::TooManyUnits {
            units: n_units,
            max: MAX_UNITS,
        });
    }
    let mut bitmaps = BTreeMap::new();
    for (path, partitions) in &meta.load_partitions {
        let mut indices = Vec::new();
        for units in partitions.values() {
            let units: Vec<u32> = units.iter().collect();
            for (a, &i) in units.iter().enumerate() {
                let doc_i = unit_doc(&meta.unit_docs, i);
                for &j in &units[a + 1..] {
                    if doc_i != unit_doc(&meta.unit_docs, j) {
                        indices.push(pair_index(i, j));
                    }
                }
            }
        }
        bitmaps.insert(path.clone(), PairBitmap::from_indices(indices));
    }
    Ok(Adjacency {
        bitmaps,
        n_units,
        unit_docs: meta.unit_docs.clone(),
    })
}

struct BitmapOracle<'a> {
    rhs: Vec<&'a PairBitmap>,
    unit_docs: &'a Option<Vec<DocId>>,
    n_docs: usize,
    threshold: Threshold,
}

impl LatticeOracle for BitmapOracle<'_> {
    type Node = PairBitmap;

    fn singleton(&mut self, path: usize) -> PairBitmap {
        self.rhs[path].clone()
    }

    fn extend(&mut self, parent: &PairBitmap, path: usize) -> PairBitmap {
        parent.intersection(self.rhs[path])
    }

    fn check(&mut self, lhs: &PairBitmap, _: &[usize], rhs: usize) -> Option<Strength> {
        let rhs = self.rhs[rhs];
        if lhs.is_subset(rhs) {
            return Some(Ratio::from_integer(1));
        }
        if self.threshold.is_exact() {
            return None;
        }
        let graph: ViolationGraph = lhs
            .difference(rhs)
            .pairs()
            .map(|(i, j)| (unit_doc(self.unit_docs, i), unit_doc(self.unit_docs, j)))
            .collect();
        let strength = strength_from_cover(greedy_vertex_cover(&graph), self.n_docs).ok()?;
        self.threshold.satisfied(strength).then_some(strength)
    }
}

/// Levelwise search over left-hand sides up to `max_lhs` paths. A set's
/// bitmap is the intersection of its members' bitmaps; `X -> A` holds exactly
/// when `bitmap(X) ⊆ bitmap(A)`, and otherwise the pairs in the difference
/// form the violation graph that sizes its strength.
pub fn tane_mine(adjacency: &Adjacency, n_docs: usize, threshold: Threshold, max_lhs: usize) -> Result<Vec<Nfd>, MineError> {
    check_preconditions(n_docs, max_lhs)?;
    let paths: Vec<Path> = adjacency.bitmaps.keys().cloned().collect();
    let mut oracle = BitmapOracle {
        rhs: adjacency.bitmaps.values().collect(),
        unit_docs: &adjacency.unit_docs,
        n_docs,
        threshold,
    };
    let found = search(&mut oracle, paths.len(), max_lhs);
    Ok(to_nfds(&paths, found))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn record_is_idempotent_and_indexes_are_dense() {
        let mut meta = TaneMeta::new();
        meta.record(1, &p("$.a"), &"x".into());
        meta.record(1, &p("$.a"), &"x".into());
        meta.record(2, &p("$.b"), &"y".into());
        meta.record(3, &p("$.a"), &"y".into());
        assert_eq!(meta.value_index(&"x".into()), Some(0));
        assert_eq!(meta.value_index(&"y".into()), Some(1));
        assert_eq!(meta.partition(&p("$.a"), &"x".into()), Some(alloc::vec![1]));
        assert_eq!(meta.partition(&p("$.a"), &"y".into()), Some(alloc::vec![3]));
        assert_eq!(meta.partition(&p("$.b"), &"x".into()), None);
    }

    #[test]
    fn single_holder_gives_empty_bitmap() {
        let mut meta = TaneMeta::new();
        meta.record(1, &p("$.a"), &1.into());
        let adj = build_adjacency(&meta, 3).unwrap();
        assert!(adj.get(&p("$.a")).unwrap().is_empty());
    }

    #[test]
    fn too_few_documents() {
        let meta = TaneMeta::new();
        assert_eq!(
            build_adjacency(&meta, 1).unwrap_err(),
            MineError::InsufficientDocuments { found: 1 }
        );
    }

    #[test]
    fn same_document_rows_are_not_paired() {
        let mut meta = TaneMeta::new();
        meta.record(1, &p("$.a"), &1.into());
        meta.record(2, &p("$.a"), &1.into());
        meta.record(3, &p("$.a"), &1.into());
        let meta = meta.with_unit_docs(alloc::vec![DocId(1), DocId(1), DocId(2)]);
        let adj = build_adjacency(&meta, 2).unwrap();
        let pairs: Vec<_> = adj.get(&p("$.a")).unwrap().pairs().collect();
        assert_eq!(pairs, [(1, 3), (2, 3)]);
    }

    #[test]
    fn merge_remaps_value_indexes() {
        let mut a = TaneMeta::new();
        a.record(1, &p("$.a"), &"x".into());
        let mut b = TaneMeta::new();
        b.record(2, &p("$.a"), &"y".into());
        b.record(2, &p("$.a"), &"x".into());
        a.merge(b);
        assert_eq!(a.partition(&p("$.a"), &"x".into()), Some(alloc::vec![1, 2]));
        assert_eq!(a.partition(&p("$.a"), &"y".into()), Some(alloc::vec![2]));
    }
}
