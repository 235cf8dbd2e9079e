//! Levelwise search for minimal satisfied left-hand sides.
//!
//! `X -> A` is reported iff it is satisfied and no non-empty proper subset of
//! `X` determines `A` at the same threshold. Because approximate strength is
//! not monotone in `X`, the check is against every subset found so far rather
//! than relying on inference rules.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::approx::Strength;

pub(crate) trait LatticeOracle {
    type Node;

    fn singleton(&mut self, path: usize) -> Self::Node;

    fn extend(&mut self, parent: &Self::Node, path: usize) -> Self::Node;

    /// `Some(strength)` when `lhs -> rhs` meets the threshold.
    fn check(&mut self, node: &Self::Node, lhs: &[usize], rhs: usize) -> Option<Strength>;
}

pub(crate) type Found = (Vec<usize>, usize, Strength);

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

pub(crate) fn search<O: LatticeOracle>(oracle: &mut O, n_paths: usize, max_lhs: usize) -> Vec<Found> {
    let mut found_lhs: Vec<Vec<Vec<usize>>> = (0..n_paths).map(|_| Vec::new()).collect();
    let mut out = Vec::new();
    let mut level: BTreeMap<Vec<usize>, O::Node> = (0..n_paths).map(|p| (alloc::vec![p], oracle.singleton(p))).collect();
    let mut size = 1;
    while !level.is_empty() && size <= max_lhs {
        let mut alive: BTreeMap<Vec<usize>, O::Node> = BTreeMap::new();
        for (lhs, node) in level {
            let mut open = false;
            for rhs in 0..n_paths {
                if lhs.contains(&rhs) || found_lhs[rhs].iter().any(|f| is_subset(f, &lhs)) {
                    continue;
                }
                match oracle.check(&node, &lhs, rhs) {
                    Some(strength) => {
                        found_lhs[rhs].push(lhs.clone());
                        out.push((lhs.clone(), rhs, strength));
                    }
                    None => open = true,
                }
            }
            if open {
                alive.insert(lhs, node);
            }
        }
        size += 1;
        if size > max_lhs {
            break;
        }
        // Extend each alive set by a larger path, keeping only candidates
        // whose every immediate subset is alive.
        let mut next = BTreeMap::new();
        for (lhs, node) in &alive {
            let last = *lhs.last().expect("non-empty");
            for b in last + 1..n_paths {
                let mut cand = lhs.clone();
                cand.push(b);
                let all_alive = (0..cand.len() - 1).all(|skip| {
                    let sub: Vec<usize> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &p)| p)
                        .collect();
                    alive.contains_key(&sub)
                });
                if all_alive {
                    let child = oracle.extend(node, b);
                    next.insert(cand, child);
                }
            }
        }
        level = next;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_rational::Ratio;

    /// Satisfied iff the lhs contains one of the listed sets for that rhs.
    struct Table(Vec<(Vec<usize>, usize)>);

    impl LatticeOracle for Table {
        type Node = ();
        fn singleton(&mut self, _: usize) {}
        fn extend(&mut self, _: &(), _: usize) {}
        fn check(&mut self, _: &(), lhs: &[usize], rhs: usize) -> Option<Strength> {
            self.0
                .iter()
                .any(|(l, r)| *r == rhs && is_subset(l, lhs))
                .then(|| Ratio::from_integer(1))
        }
    }

    #[test]
    fn reports_only_minimal_sets() {
        let mut t = Table(vec![(vec![0, 1], 2), (vec![1], 2), (vec![0, 2], 3)]);
        let got: Vec<(Vec<usize>, usize)> = search(&mut t, 4, 3).into_iter().map(|(l, r, _)| (l, r)).collect();
        assert_eq!(got, vec![(vec![0, 2], 3), (vec![1], 2)]);
    }

    #[test]
    fn respects_max_lhs() {
        let mut t = Table(vec![(vec![0, 1], 2)]);
        assert!(search(&mut t, 3, 1).is_empty());
    }
}
