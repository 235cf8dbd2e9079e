use alloc::vec;
use alloc::vec::Vec;

/// Dense bit set over interned path indices.
#[derive(Clone, Debug, Default)]
pub struct PathSet {
    words: Vec<u64>,
}

impl PartialEq for PathSet {
    fn eq(&self, other: &Self) -> bool {
        self.significant() == other.significant()
    }
}

impl Eq for PathSet {}

impl PartialOrd for PathSet {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PathSet {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.significant().cmp(other.significant())
    }
}

impl PathSet {
    /// Words without trailing zeros, so capacity never affects equality.
    fn significant(&self) -> &[u64] {
        let end = self.words.iter().rposition(|&w| w != 0).map_or(0, |i| i + 1);
        &self.words[..end]
    }

    pub fn with_capacity(n_paths: usize) -> Self {
        PathSet {
            words: vec![0; n_paths.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &PathSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| wi * 64 + b))
    }
}

impl FromIterator<usize> for PathSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = PathSet::default();
        for i in iter {
            s.insert(i);
        }
        s
    }
}
