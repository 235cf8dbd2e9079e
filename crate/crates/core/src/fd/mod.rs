//! Nested functional dependency mining.
//!
//! `lhs -> rhs` holds when every unordered pair of distinct documents either
//! has disjoint value sets at some `lhs` path or intersecting value sets at
//! `rhs`. Both miners work on *units*: documents under dynamic unrolling, or
//! statically unrolled rows (each mapped back to its document). Pairs of
//! units from the same document are never compared, and violations are
//! always counted in documents.

mod bitmap;
mod fdep;
mod lattice;
mod pathset;
mod tane;

pub use bitmap::{pair_index, pair_of, PairBitmap, MAX_UNITS};
pub use fdep::{fdep_collect, fdep_mine, FdepMeta};
pub use pathset::PathSet;
pub use tane::{build_adjacency, tane_collect, tane_mine, Adjacency, TaneMeta};

use alloc::vec::Vec;

use crate::approx::Strength;
use crate::error::MineError;
use crate::json_model::{DocId, Path};

/// Default lattice depth.
pub const DEFAULT_MAX_LHS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfd {
    /// Sorted, non-empty.
    pub lhs: Vec<Path>,
    pub rhs: Path,
    pub strength: Strength,
    pub satisfied: bool,
}

fn check_preconditions(n_docs: usize, max_lhs: usize) -> Result<(), MineError> {
    if n_docs < 2 {
        return Err(MineError::InsufficientDocuments { found: n_docs });
    }
    if max_lhs == 0 {
        return Err(MineError::ZeroMaxLhs);
    }
    Ok(())
}

/// Maps 1-based unit numbers to documents; `None` means units are documents.
fn unit_doc(unit_docs: &Option<Vec<DocId>>, unit: u32) -> u32 {
    match unit_docs {
        Some(docs) => docs[unit as usize - 1].0,
        None => unit,
    }
}

fn to_nfds(paths: &[Path], found: Vec<lattice::Found>) -> Vec<Nfd> {
    found
        .into_iter()
        .map(|(lhs, rhs, strength)| Nfd {
            lhs: lhs.into_iter().map(|i| paths[i].clone()).collect(),
            rhs: paths[rhs].clone(),
            strength,
            satisfied: true,
        })
        .collect()
}
