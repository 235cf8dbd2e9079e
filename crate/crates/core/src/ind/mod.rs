//! Unary nested inclusion dependency mining.
//!
//! Strength of `lhs ⊆ rhs` is the fraction of distinct `lhs` values that also
//! occur at `rhs` anywhere in the collection. Both miners report every
//! ordered pair of distinct paths, flagging the ones that meet the threshold.

mod demarchi;
mod spider;

pub use demarchi::{demarchi_collect, demarchi_mine, DeMarchiMeta};
pub use spider::{spider_collect, spider_mine, SpiderMeta};

use crate::approx::Strength;
use crate::json_model::Path;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nind {
    pub lhs: Path,
    pub rhs: Path,
    pub strength: Strength,
    pub satisfied: bool,
}
