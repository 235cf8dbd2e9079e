//! Approximation bookkeeping shared by the miners: strength thresholds and
//! the greedy estimate of how many documents violate a dependency.

use alloc::collections::btree_set::{self, BTreeSet};
use alloc::vec;
use core::fmt;
use core::iter::Rev;
use core::str::FromStr;

use num_rational::Ratio;

/// Fraction in `[0, 1]`, kept exact.
pub type Strength = Ratio<u64>;

/// An unordered pair of distinct document ids.
///
/// Ordered by `(larger, smaller)`, which is the same as ordering by the pair
/// index `(j-1)(j-2)/2 + (i-1)` used by pair bitmaps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    hi: u32,
    lo: u32,
}

impl Edge {
    /// `None` for self-loops.
    pub fn new(a: u32, b: u32) -> Option<Edge> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Some(Edge { hi: b, lo: a }),
            core::cmp::Ordering::Greater => Some(Edge { hi: a, lo: b }),
            core::cmp::Ordering::Equal => None,
        }
    }

    pub fn endpoints(&self) -> (u32, u32) {
        (self.lo, self.hi)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Documents connected when, as a pair, they violate a dependency.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViolationGraph {
    edges: BTreeSet<Edge>,
}

impl ViolationGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false for self-loops and duplicates.
    pub fn add(&mut self, a: u32, b: u32) -> bool {
        match Edge::new(a, b) {
            Some(e) => self.edges.insert(e),
            None => false,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> btree_set::Iter<'_, Edge> {
        self.edges.iter()
    }

    /// Order in which the greedy cover consumes edges: descending pair index.
    pub fn canonical_order(&self) -> Rev<btree_set::Iter<'_, Edge>> {
        self.edges.iter().rev()
    }

    /// Distinct endpoint ids, ascending.
    pub fn vertices(&self) -> BTreeSet<u32> {
        self.edges.iter().flat_map(|e| [e.lo, e.hi]).collect()
    }

    pub fn extend(&mut self, other: &ViolationGraph) {
        self.edges.extend(other.edges.iter().copied());
    }
}

impl FromIterator<(u32, u32)> for ViolationGraph {
    fn from_iter<T: IntoIterator<Item = (u32, u32)>>(iter: T) -> Self {
        let mut g = ViolationGraph::new();
        for (a, b) in iter {
            g.add(a, b);
        }
        g
    }
}

/// Maximal-matching cover size: walk edges in canonical order and count both
/// endpoints of every edge whose endpoints are both still unmarked. At most
/// twice the minimum vertex cover.
pub fn greedy_vertex_cover(graph: &ViolationGraph) -> usize {
    let Some(max) = graph.edges.iter().map(|e| e.hi).max() else {
        return 0;
    };
    let mut marked = vec![false; max as usize + 1];
    let mut count = 0;
    for e in graph.canonical_order() {
        let (lo, hi) = (e.lo as usize, e.hi as usize);
        if !marked[lo] && !marked[hi] {
            marked[lo] = true;
            marked[hi] = true;
            count += 2;
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ApproxError {
    #[error("strength needs at least one document")]
    NoDocuments,
    #[error("cover of {cover} documents exceeds collection size {n_docs}")]
    CoverTooLarge { cover: usize, n_docs: usize },
    #[error("threshold must be in (0, 1], got {0}")]
    ThresholdOutOfRange(Strength),
    #[error("cannot parse threshold `{0}`")]
    BadThreshold(alloc::string::String),
}

/// `1 - cover_size / n_docs`.
pub fn strength_from_cover(cover_size: usize, n_docs: usize) -> Result<Strength, ApproxError> {
    if n_docs == 0 {
        return Err(ApproxError::NoDocuments);
    }
    if cover_size > n_docs {
        return Err(ApproxError::CoverTooLarge {
            cover: cover_size,
            n_docs,
        });
    }
    Ok(Ratio::new((n_docs - cover_size) as u64, n_docs as u64))
}

/// Minimum strength for a dependency to be reported as satisfied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Threshold(Strength);

impl Threshold {
    pub const EXACT: Threshold = Threshold(Ratio::new_raw(1, 1));

    pub fn new(value: Strength) -> Result<Self, ApproxError> {
        if *value.numer() == 0 || value > Ratio::from_integer(1) {
            return Err(ApproxError::ThresholdOutOfRange(value));
        }
        Ok(Threshold(value))
    }

    pub fn value(&self) -> Strength {
        self.0
    }

    pub fn is_exact(&self) -> bool {
        self.0 == Ratio::from_integer(1)
    }

    pub fn satisfied(&self, strength: Strength) -> bool {
        strength >= self.0
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold(Ratio::new(99, 100))
    }
}

/// Accepts decimals (`0.99`, `1`) and fractions (`2/3`).
impl FromStr for Threshold {
    type Err = ApproxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ApproxError::BadThreshold(s.into());
        let s = s.trim();
        let value = if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ratio::new(n, d)
        } else {
            let (int, frac) = s.split_once('.').unwrap_or((s, ""));
            if int.is_empty() && frac.is_empty() || frac.len() > 18 {
                return Err(bad());
            }
            let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
            if !all_digits(int) || !all_digits(frac) {
                return Err(bad());
            }
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let scale = 10u64.pow(frac.len() as u32);
            let frac_n: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            let numer = int
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac_n))
                .ok_or_else(bad)?;
            Ratio::new(numer, scale)
        };
        Threshold::new(value)
    }
}
