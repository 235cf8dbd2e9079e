use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::json_model::{Atomic, DocId, Document, DocumentCollection, JsonValue, Path, Step};

use super::MetadataSink;

/// One partial row: the cells contributed by a sub-tree. `None` marks the
/// placeholder produced for an empty value.
pub type Fragment = Vec<(Path, Option<Atomic>)>;

/// Flattens `value` (found at `path`) into row fragments.
///
/// Objects take the cross product of their keys' fragments; cells stay in
/// key order and earlier keys vary fastest. Arrays concatenate their elements' fragments under a
/// `[*]` step. An array sitting directly inside another array is unrolled
/// positionally, as a tuple with `[0]`, `[1]`, ... columns, so
/// `[["a","b"],["c","d"]]` yields two rows rather than four.
pub fn flatten(path: &Path, value: &JsonValue) -> Vec<Fragment> {
    flatten_at(path, value, false)
}

fn flatten_at(path: &Path, value: &JsonValue, inside_array: bool) -> Vec<Fragment> {
    if value.is_empty() {
        if path.steps().is_empty() {
            return vec![Vec::new()];
        }
        return vec![vec![(path.clone(), None)]];
    }
    match value {
        JsonValue::Object(obj) => cross_product(obj.iter().map(|(k, v)| flatten_at(&path.key(k), v, false))),
        JsonValue::Array(items) if inside_array => cross_product(
            items
                .iter()
                .enumerate()
                .map(|(i, v)| flatten_at(&path.child(Step::Index(i)), v, true)),
        ),
        JsonValue::Array(items) => {
            let elem_path = path.wildcard();
            items.iter().flat_map(|v| flatten_at(&elem_path, v, true)).collect()
        }
        JsonValue::Atomic(a) => vec![vec![(path.clone(), Some(a.clone()))]],
        JsonValue::Null => unreachable!("null is empty"),
    }
}

fn cross_product(parts: impl Iterator<Item = Vec<Fragment>>) -> Vec<Fragment> {
    let mut acc: Vec<Fragment> = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for right in &part {
            for left in &acc {
                let mut row = left.clone();
                row.extend(right.iter().cloned());
                next.push(row);
            }
        }
        acc = next;
    }
    acc
}

/// Number of rows `flatten` would produce, without materializing them.
/// Saturates at `u128::MAX`.
pub fn flatten_row_count(value: &JsonValue) -> u128 {
    count_at(value, false)
}

/// Rows a whole document unrolls to.
pub fn document_row_count(doc: &Document) -> u128 {
    doc.root.iter().fold(1u128, |n, (_, v)| n.saturating_mul(count_at(v, false)))
}

fn count_at(value: &JsonValue, inside_array: bool) -> u128 {
    if value.is_empty() {
        return 1;
    }
    match value {
        JsonValue::Object(obj) => obj.iter().fold(1u128, |n, (_, v)| n.saturating_mul(count_at(v, false))),
        JsonValue::Array(items) if inside_array => items.iter().fold(1u128, |n, v| n.saturating_mul(count_at(v, true))),
        JsonValue::Array(items) => items.iter().fold(0u128, |n, v| n.saturating_add(count_at(v, true))),
        _ => 1,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatRow {
    /// The document the row was unrolled from.
    pub doc: DocId,
    /// One cell per table column; `None` is null.
    pub cells: Vec<Option<Atomic>>,
}

/// Statically unrolled collection: nesting-free rows over one shared column
/// universe.
#[derive(Clone, Debug)]
pub struct StaticTable {
    columns: Vec<Path>,
    canonical: Vec<Path>,
    rows: Vec<FlatRow>,
    n_docs: usize,
}

pub fn static_unroll(collection: &DocumentCollection) -> StaticTable {
    let mut column_ids: BTreeMap<Path, usize> = BTreeMap::new();
    let mut columns: Vec<Path> = Vec::new();
    let mut sparse: Vec<(DocId, Vec<(usize, Atomic)>)> = Vec::new();
    for doc in collection.documents() {
        let root = JsonValue::Object(doc.root.clone());
        for fragment in flatten(&Path::root(), &root) {
            let mut cells = Vec::with_capacity(fragment.len());
            for (path, value) in fragment {
                let col = match column_ids.get(&path) {
                    Some(&c) => c,
                    None => {
                        let c = columns.len();
                        columns.push(path.clone());
                        column_ids.insert(path, c);
                        c
                    }
                };
                if let Some(v) = value {
                    cells.push((col, v));
                }
            }
            sparse.push((doc.id, cells));
        }
    }
    let width = columns.len();
    let rows = sparse
        .into_iter()
        .map(|(doc, cells)| {
            let mut dense = vec![None; width];
            for (col, v) in cells {
                dense[col] = Some(v);
            }
            FlatRow { doc, cells: dense }
        })
        .collect();
    let canonical = columns.iter().map(Path::canonical).collect();
    StaticTable {
        columns,
        canonical,
        rows,
        n_docs: collection.len(),
    }
}

impl StaticTable {
    pub fn columns(&self) -> &[Path] {
        &self.columns
    }

    pub fn rows(&self) -> &[FlatRow] {
        &self.rows
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    /// Rows per document.
    pub fn expansion_factor(&self) -> f64 {
        if self.n_docs == 0 {
            return 0.0;
        }
        self.rows.len() as f64 / self.n_docs as f64
    }

    /// Feeds every non-null cell of the given rows to `sink`, attributed to
    /// the row's document. Positional columns are reported under their
    /// wildcard form so the value universe matches dynamic unrolling.
    pub fn feed<S: MetadataSink + ?Sized>(&self, rows: Range<usize>, sink: &mut S) {
        for row in &self.rows[rows] {
            for (col, cell) in row.cells.iter().enumerate() {
                if let Some(v) = cell {
                    sink.update(row.doc, &self.canonical[col], v);
                }
            }
        }
    }

    /// Like [`feed`](Self::feed) but attributes each cell to its 1-based row
    /// number instead of its document.
    pub fn feed_rows<F>(&self, rows: Range<usize>, mut f: F)
    where
        F: FnMut(u32, &Path, &Atomic),
    {
        let start = rows.start;
        for (offset, row) in self.rows[rows].iter().enumerate() {
            let unit = (start + offset + 1) as u32;
            for (col, cell) in row.cells.iter().enumerate() {
                if let Some(v) = cell {
                    f(unit, &self.canonical[col], v);
                }
            }
        }
    }

    /// Row-to-document map, indexed by `row number - 1`.
    pub fn row_docs(&self) -> Vec<DocId> {
        self.rows.iter().map(|r| r.doc).collect()
    }
}
