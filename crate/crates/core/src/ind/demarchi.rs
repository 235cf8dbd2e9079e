use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use super::Nind;
use crate::approx::Threshold;
use crate::error::MineError;
use crate::json_model::{Atomic, DocId, DocumentCollection, Path};
use crate::unroll::{dynamic_unroll, Merge, MetadataSink};

/// For every value, the set of paths where it occurs. Paths are interned.
#[derive(Clone, Debug, Default)]
pub struct DeMarchiMeta {
    paths: Vec<Path>,
    path_ids: BTreeMap<Path, usize>,
    values: BTreeMap<Atomic, BTreeSet<usize>>,
}

impl DeMarchiMeta {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, path: &Path) -> usize {
        if let Some(&id) = self.path_ids.get(path) {
            return id;
        }
        let id = self.paths.len();
        self.paths.push(path.clone());
        self.path_ids.insert(path.clone(), id);
        id
    }

    /// Paths at which `value` occurs, sorted.
    pub fn paths_of(&self, value: &Atomic) -> Option<BTreeSet<&Path>> {
        self.values
            .get(value)
            .map(|ids| ids.iter().map(|&i| &self.paths[i]).collect())
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.path_ids.keys()
    }

    pub fn n_values(&self) -> usize {
        self.values.len()
    }

    pub fn approx_bytes(&self) -> usize {
        self.values.values().map(|s| 80 + s.len() * 16).sum::<usize>() + self.paths.len() * 96
    }
}

impl MetadataSink for DeMarchiMeta {
    fn update(&mut self, _id: DocId, path: &Path, value: &Atomic) {
        let pid = self.intern(path);
        match self.values.get_mut(value) {
            Some(set) => {
                set.insert(pid);
            }
            None => {
                self.values.insert(value.clone(), BTreeSet::from([pid]));
            }
        }
    }
}

impl Merge for DeMarchiMeta {
    fn merge(&mut self, other: Self) {
        let remap: Vec<usize> = other.paths.iter().map(|p| self.intern(p)).collect();
        for (value, ids) in other.values {
            self.values
                .entry(value)
                .or_default()
                .extend(ids.into_iter().map(|i| remap[i]));
        }
    }
}

pub fn demarchi_collect(collection: &DocumentCollection) -> DeMarchiMeta {
    dynamic_unroll(collection, DeMarchiMeta::new())
}

/// Every value narrows the candidate right-hand sides of each path holding it
/// to the paths that also hold it; counting instead of discarding gives the
/// strength. Output is sorted by `(lhs, rhs)` and matches `spider_mine`.
pub fn demarchi_mine(meta: &DeMarchiMeta, threshold: Threshold) -> Result<Vec<Nind>, MineError> {
    let n = meta.paths.len();
    if n == 0 {
        return Err(MineError::NoPaths);
    }
    let mut total = vec![0u64; n];
    let mut included = vec![0u64; n * n];
    for ids in meta.values.values() {
        for &p in ids {
            total[p] += 1;
            for &q in ids {
                included[p * n + q] += 1;
            }
        }
    }
    let order: Vec<usize> = meta.path_ids.values().copied().collect();
    let mut out = Vec::with_capacity(n * (n - 1));
    for &p in &order {
        for &q in &order {
            if p == q {
                continue;
            }
            let strength = Ratio::new(included[p * n + q], total[p]);
            out.push(Nind {
                lhs: meta.paths[p].clone(),
                rhs: meta.paths[q].clone(),
                strength,
                satisfied: threshold.satisfied(strength),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn single_value_single_path() {
        let mut meta = DeMarchiMeta::new();
        meta.update(DocId(1), &p("$.k"), &1.into());
        assert_eq!(meta.paths_of(&1.into()).unwrap(), BTreeSet::from([&p("$.k")]));
        assert!(demarchi_mine(&meta, Threshold::EXACT).unwrap().is_empty());
    }

    #[test]
    fn merge_remaps_interned_paths() {
        let mut a = DeMarchiMeta::new();
        a.update(DocId(1), &p("$.a"), &1.into());
        let mut b = DeMarchiMeta::new();
        b.update(DocId(2), &p("$.b"), &1.into());
        b.update(DocId(2), &p("$.a"), &2.into());
        a.merge(b);
        assert_eq!(a.paths_of(&1.into()).unwrap(), BTreeSet::from([&p("$.a"), &p("$.b")]));
        assert_eq!(a.paths_of(&2.into()).unwrap(), BTreeSet::from([&p("$.a")]));
    }

    #[test]
    fn no_paths_is_an_error() {
        assert_eq!(demarchi_mine(&DeMarchiMeta::new(), Threshold::EXACT).unwrap_err(), MineError::NoPaths);
    }
}
