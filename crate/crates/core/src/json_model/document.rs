use alloc::collections::btree_set::{self, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use super::path::{Path, Step};
use super::value::{Atomic, JsonValue, Object};
use crate::unroll::{dynamic_unroll, MetadataSink};

/// 1-based document identifier, assigned in input order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocId(pub u32);

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub id: DocId,
    pub root: Object,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("document {index} is not a JSON object")]
pub struct NotAnObject {
    /// 1-based position in the input.
    pub index: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DocumentCollection {
    documents: Vec<Document>,
}

impl DocumentCollection {
    /// Assigns ids `1..=n` in order; every root must be an object.
    pub fn from_values<I>(values: I) -> Result<Self, NotAnObject>
    where
        I: IntoIterator<Item = JsonValue>,
    {
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| match v {
                JsonValue::Object(root) => Ok(root),
                _ => Err(NotAnObject { index: i + 1 }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_objects)
    }

    pub fn from_objects<I: IntoIterator<Item = Object>>(roots: I) -> Self {
        let documents = roots
            .into_iter()
            .enumerate()
            .map(|(i, root)| Document {
                id: DocId(i as u32 + 1),
                root,
            })
            .collect();
        DocumentCollection { documents }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: DocId) -> Option<&Document> {
        self.documents.get((id.0 as usize).checked_sub(1)?)
    }
}

/// The atomic values a document holds at one path.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ValueSet(BTreeSet<Atomic>);

impl ValueSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, value: Atomic) -> bool {
        self.0.insert(value)
    }

    pub fn contains(&self, value: &Atomic) -> bool {
        self.0.contains(value)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Atomic> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &ValueSet) -> bool {
        // Merge scan over both sorted sets.
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        let (mut x, mut y) = (a.next(), b.next());
        while let (Some(u), Some(v)) = (x, y) {
            match u.cmp(v) {
                core::cmp::Ordering::Less => x = a.next(),
                core::cmp::Ordering::Greater => y = b.next(),
                core::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn extend(&mut self, other: ValueSet) {
        self.0.extend(other.0);
    }
}

impl FromIterator<Atomic> for ValueSet {
    fn from_iter<T: IntoIterator<Item = Atomic>>(iter: T) -> Self {
        ValueSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a ValueSet {
    type Item = &'a Atomic;
    type IntoIter = btree_set::Iter<'a, Atomic>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Every atomic value reachable from the document root by following `path`.
/// Missing keys, out-of-range indices, nulls and non-atomic endpoints
/// contribute nothing.
pub fn evaluate_path(doc: &Document, path: &Path) -> ValueSet {
    let mut out = ValueSet::new();
    let steps = path.steps();
    match steps.split_first() {
        None => {}
        Some((Step::Key(k), rest)) => {
            if let Some(v) = doc.root.get(k) {
                walk(v, rest, &mut out);
            }
        }
        Some(_) => {}
    }
    out
}

fn walk(value: &JsonValue, steps: &[Step], out: &mut ValueSet) {
    let Some((step, rest)) = steps.split_first() else {
        if let JsonValue::Atomic(a) = value {
            out.insert(a.clone());
        }
        return;
    };
    match (step, value) {
        (Step::Key(k), JsonValue::Object(obj)) => {
            if let Some(v) = obj.get(k) {
                walk(v, rest, out);
            }
        }
        (Step::Wildcard, JsonValue::Array(items)) => {
            for item in items {
                walk(item, rest, out);
            }
        }
        (Step::Index(n), JsonValue::Array(items)) => {
            if let Some(item) = items.get(*n) {
                walk(item, rest, out);
            }
        }
        _ => {}
    }
}

#[derive(Default)]
struct PathCollector(BTreeSet<Path>);

impl MetadataSink for PathCollector {
    fn update(&mut self, _id: DocId, path: &Path, _value: &Atomic) {
        if !self.0.contains(path) {
            self.0.insert(path.clone());
        }
    }
}

/// The candidate attribute universe: every key/wildcard path at which some
/// document holds a non-null atomic value.
pub fn enumerate_paths(collection: &DocumentCollection) -> BTreeSet<Path> {
    dynamic_unroll(collection, PathCollector::default()).0
}
