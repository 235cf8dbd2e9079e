use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::Ratio;

use super::Nind;
use crate::approx::{Strength, Threshold};
use crate::error::MineError;
use crate::json_model::{Atomic, DocId, DocumentCollection, Path};
use crate::unroll::{dynamic_unroll, Merge, MetadataSink};

/// Sorted distinct values per path.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpiderMeta {
    values: BTreeMap<Path, BTreeSet<Atomic>>,
}

impl SpiderMeta {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn values(&self, path: &Path) -> Option<&BTreeSet<Atomic>> {
        self.values.get(path)
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.values.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Strength of `lhs ⊆ rhs`, including the reflexive case.
    pub fn strength(&self, lhs: &Path, rhs: &Path) -> Option<Strength> {
        let a = self.values.get(lhs)?;
        let b = self.values.get(rhs)?;
        Some(Ratio::new(intersection_size(a, b), a.len() as u64))
    }

    /// Rough heap footprint in bytes.
    pub fn approx_bytes(&self) -> usize {
        self.values.values().map(|s| 48 + s.len() * 48).sum::<usize>() + self.values.len() * 64
    }
}

impl MetadataSink for SpiderMeta {
    fn update(&mut self, _id: DocId, path: &Path, value: &Atomic) {
        match self.values.get_mut(path) {
            Some(set) => {
                if !set.contains(value) {
                    set.insert(value.clone());
                }
            }
            None => {
                self.values.insert(path.clone(), BTreeSet::from([value.clone()]));
            }
        }
    }
}

impl Merge for SpiderMeta {
    fn merge(&mut self, other: Self) {
        for (path, set) in other.values {
            self.values.entry(path).or_default().extend(set);
        }
    }
}

pub fn spider_collect(collection: &DocumentCollection) -> SpiderMeta {
    dynamic_unroll(collection, SpiderMeta::new())
}

fn intersection_size(a: &BTreeSet<Atomic>, b: &BTreeSet<Atomic>) -> u64 {
    let mut left = a.iter();
    let mut right = b.iter();
    let (mut x, mut y) = (left.next(), right.next());
    let mut n = 0;
    while let (Some(u), Some(v)) = (x, y) {
        match u.cmp(v) {
            Ordering::Less => x = left.next(),
            Ordering::Greater => y = right.next(),
            Ordering::Equal => {
                n += 1;
                x = left.next();
                y = right.next();
            }
        }
    }
    n
}

/// Scores every ordered pair of distinct paths by merge-scanning their sorted
/// value sets. Output is sorted by `(lhs, rhs)`.
pub fn spider_mine(meta: &SpiderMeta, threshold: Threshold) -> Result<Vec<Nind>, MineError> {
    if meta.values.is_empty() {
        return Err(MineError::NoPaths);
    }
    let mut out = Vec::new();
    for (lhs, lhs_values) in &meta.values {
        for (rhs, rhs_values) in &meta.values {
            if lhs == rhs {
                continue;
            }
            let strength = Ratio::new(intersection_size(lhs_values, rhs_values), lhs_values.len() as u64);
            out.push(Nind {
                lhs: lhs.clone(),
                rhs: rhs.clone(),
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
    fn counts_distinct_shared_values() {
        let mut meta = SpiderMeta::new();
        for v in ["X", "Y", "X"] {
            meta.update(DocId(1), &p("$.a"), &v.into());
        }
        for v in ["X", "Z"] {
            meta.update(DocId(2), &p("$.b"), &v.into());
        }
        assert_eq!(meta.values(&p("$.a")).unwrap().len(), 2);
        assert_eq!(meta.strength(&p("$.a"), &p("$.b")), Some(Ratio::new(1, 2)));
        assert_eq!(meta.strength(&p("$.a"), &p("$.a")), Some(Ratio::from_integer(1)));
        let out = spider_mine(&meta, Threshold::new(Ratio::new(1, 2)).unwrap()).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|n| n.satisfied));
    }

    #[test]
    fn empty_metadata_is_an_error() {
        assert_eq!(spider_mine(&SpiderMeta::new(), Threshold::EXACT), Err(MineError::NoPaths));
    }

    #[test]
    fn merge_is_union() {
        let mut a = SpiderMeta::new();
        a.update(DocId(1), &p("$.a"), &1.into());
        let mut b = SpiderMeta::new();
        b.update(DocId(2), &p("$.a"), &2.into());
        b.update(DocId(2), &p("$.b"), &1.into());
        a.merge(b);
        assert_eq!(a.values(&p("$.a")).unwrap().len(), 2);
        assert!(a.values(&p("$.b")).is_some());
    }
}
