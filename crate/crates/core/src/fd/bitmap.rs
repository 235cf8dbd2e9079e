use alloc::vec::Vec;

use roaring::RoaringBitmap;

/// Largest unit count whose pair indices fit in `u32`.
pub const MAX_UNITS: usize = 92_681;

/// Index of the unordered pair `{i, j}`, `1 <= i < j`: `(j-1)(j-2)/2 + (i-1)`.
pub fn pair_index(i: u32, j: u32) -> u32 {
    debug_assert!(1 <= i && i < j);
    let (i, j) = (i as u64, j as u64);
    ((j - 1) * (j - 2) / 2 + (i - 1)) as u32
}

/// Inverse of [`pair_index`].
pub fn pair_of(index: u32) -> (u32, u32) {
    let idx = index as u64;
    // k = j - 1 is the largest k with k(k-1)/2 <= idx.
    let mut k = (1 + (1 + 8 * idx).isqrt()) / 2;
    while k * (k - 1) / 2 > idx {
        k -= 1;
    }
    while (k + 1) * k / 2 <= idx {
        k += 1;
    }
    let i = idx - k * (k - 1) / 2 + 1;
    (i as u32, (k + 1) as u32)
}

/// Compressed set of unordered pairs of distinct units. Self-pairs cannot be
/// represented.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PairBitmap(RoaringBitmap);

impl PairBitmap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from unsorted pair indices (duplicates allowed).
    pub fn from_indices(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        PairBitmap(RoaringBitmap::from_sorted_iter(indices).expect("indices are sorted"))
    }

    /// Returns false for self-pairs and pairs already present.
    pub fn insert(&mut self, a: u32, b: u32) -> bool {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if i == j || i == 0 {
            return false;
        }
        self.0.insert(pair_index(i, j))
    }

    pub fn contains(&self, a: u32, b: u32) -> bool {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        i != j && i != 0 && self.0.contains(pair_index(i, j))
    }

    pub fn len(&self) -> u64 {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn intersection(&self, other: &PairBitmap) -> PairBitmap {
        PairBitmap(&self.0 & &other.0)
    }

    pub fn difference(&self, other: &PairBitmap) -> PairBitmap {
        PairBitmap(&self.0 - &other.0)
    }

    pub fn union_with(&mut self, other: &PairBitmap) {
        self.0 |= &other.0;
    }

    pub fn is_subset(&self, other: &PairBitmap) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Pairs `(i, j)` with `i < j`, in ascending pair index order.
    pub fn pairs(&self) -> impl DoubleEndedIterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(pair_of)
    }
}
