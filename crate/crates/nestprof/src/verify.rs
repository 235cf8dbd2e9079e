//! Checking one user-supplied dependency against a collection.

use nestprof_core::approx::{greedy_vertex_cover, strength_from_cover, Threshold};
use nestprof_core::json_model::{DocumentCollection, Path, PathError};
use nestprof_core::oracle::{nfd_violation_graph, validate_nind};

use crate::record::{Record, RecordKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dependency {
    /// `P1 < P2`
    Inclusion(Path, Path),
    /// `P1, P2 -> P3`
    Functional(Vec<Path>, Path),
}

#[derive(Debug, thiserror::Error)]
pub enum DependencyError {
    #[error("expected `LHS < RHS` or `LHS1, LHS2 -> RHS`")]
    Syntax,
    #[error("bad path `{path}`: {source}")]
    Path { path: String, source: PathError },
}

fn path(s: &str) -> Result<Path, DependencyError> {
    let s = s.trim();
    s.parse().map_err(|source| DependencyError::Path {
        path: s.to_string(),
        source,
    })
}

/// Splits on the operator outside bracket-quoted key names.
fn split_operator<'a>(s: &'a str, op: &str) -> Option<(&'a str, &'a str)> {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if quoted {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '\'') => quoted = false,
                _ => {}
            }
            continue;
        }
        if c == '\'' {
            quoted = true;
        } else if s[i..].starts_with(op) {
            return Some((&s[..i], &s[i + op.len()..]));
        }
    }
    None
}

fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some((head, tail)) = split_operator(rest, ",") {
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    out
}

impl std::str::FromStr for Dependency {
    type Err = DependencyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((lhs, rhs)) = split_operator(s, "->") {
            let mut lhs = split_list(lhs).into_iter().map(path).collect::<Result<Vec<_>, _>>()?;
            lhs.sort();
            lhs.dedup();
            return Ok(Dependency::Functional(lhs, path(rhs)?));
        }
        if let Some((lhs, rhs)) = split_operator(s, "<") {
            return Ok(Dependency::Inclusion(path(lhs)?, path(rhs)?));
        }
        Err(DependencyError::Syntax)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub record: Record,
    /// Holds with no exceptions at all.
    pub valid: bool,
}

/// Inclusion strength is the exact fraction of distinct lhs values found at
/// the rhs. Functional strength is sized with the same greedy cover the
/// miners use, so it is directly comparable to `mine` output.
pub fn verify(collection: &DocumentCollection, dep: &Dependency, threshold: Threshold) -> Verdict {
    match dep {
        Dependency::Inclusion(lhs, rhs) => {
            let (valid, strength) = validate_nind(collection, lhs, rhs);
            Verdict {
                record: Record {
                    kind: RecordKind::Nind,
                    lhs: vec![lhs.to_string()],
                    rhs: rhs.to_string(),
                    strength,
                    satisfied: threshold.satisfied(strength),
                },
                valid,
            }
        }
        Dependency::Functional(lhs, rhs) => {
            let graph = nfd_violation_graph(collection, lhs, std::slice::from_ref(rhs));
            let n = collection.len().max(1);
            let strength = strength_from_cover(greedy_vertex_cover(&graph), n).expect("cover never exceeds the collection");
            Verdict {
                record: Record {
                    kind: RecordKind::Nfd,
                    lhs: lhs.iter().map(ToString::to_string).collect(),
                    rhs: rhs.to_string(),
                    strength,
                    satisfied: threshold.satisfied(strength),
                },
                valid: graph.is_empty(),
            }
        }
    }
}

impl Verdict {
    pub fn to_json(&self) -> String {
        let mut s = self.record.to_json();
        s.pop();
        format!("{s},\"valid\":{}}}", self.valid)
    }
}
