//! The two ingestion strategies.
//!
//! Dynamic unrolling walks each document depth-first and hands every
//! non-null leaf to a [`MetadataSink`] as an `(id, path, value)` triple.
//! Static unrolling ([`static_unroll`]) materializes the cross product of
//! nested fragments as flat rows, the way a relational miner would see the
//! data.

mod flatten;

pub use flatten::{document_row_count, flatten, flatten_row_count, static_unroll, FlatRow, Fragment, StaticTable};

use crate::json_model::{Atomic, DocId, Document, DocumentCollection, JsonValue, Path, Step};

/// Metadata callback for dynamic unrolling. Construction plays the role of
/// initialization; `update` is called once per leaf occurrence, so a value
/// repeated inside one document is reported repeatedly.
pub trait MetadataSink {
    fn update(&mut self, id: DocId, path: &Path, value: &Atomic);
}

impl<S: MetadataSink + ?Sized> MetadataSink for &mut S {
    fn update(&mut self, id: DocId, path: &Path, value: &Atomic) {
        (**self).update(id, path, value)
    }
}

/// Sinks whose per-worker partial states can be combined. Merging must be
/// insensitive to how documents were split across workers.
pub trait Merge {
    fn merge(&mut self, other: Self);
}

pub fn dynamic_unroll<S: MetadataSink>(collection: &DocumentCollection, mut sink: S) -> S {
    for doc in collection.documents() {
        collect_document(doc, &mut sink);
    }
    sink
}

/// Unrolls one document into `sink`.
pub fn collect_document<S: MetadataSink + ?Sized>(doc: &Document, sink: &mut S) {
    let mut path = Path::root();
    for (key, value) in doc.root.iter() {
        path.push(Step::Key(key.into()));
        collect(doc.id, value, &mut path, sink);
        path.pop();
    }
}

fn collect<S: MetadataSink + ?Sized>(id: DocId, value: &JsonValue, path: &mut Path, sink: &mut S) {
    match value {
        JsonValue::Object(obj) => {
            for (key, child) in obj.iter() {
                path.push(Step::Key(key.into()));
                collect(id, child, path, sink);
                path.pop();
            }
        }
        JsonValue::Array(items) => {
            path.push(Step::Wildcard);
            for item in items {
                collect(id, item, path, sink);
            }
            path.pop();
        }
        JsonValue::Atomic(a) => sink.update(id, path, a),
        JsonValue::Null => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json_model::Object;
    use alloc::string::{String, ToString};
    use alloc::vec;
    use alloc::vec::Vec;

    #[derive(Default)]
    struct Recorder(Vec<(u32, String, Atomic)>);

    impl MetadataSink for Recorder {
        fn update(&mut self, id: DocId, path: &Path, value: &Atomic) {
            self.0.push((id.0, path.to_string(), value.clone()));
        }
    }

    #[test]
    fn visits_leaves_depth_first() {
        let root = Object::from_entries([
            ("a", JsonValue::Object(Object::from_entries([("b", 1.into())]).unwrap())),
            ("c", JsonValue::Array(vec![2.into(), 3.into()])),
        ])
        .unwrap();
        let coll = DocumentCollection::from_objects([root]);
        let rec = dynamic_unroll(&coll, Recorder::default());
        assert_eq!(
            rec.0,
            vec![
                (1, "$.a.b".into(), 1.into()),
                (1, "$.c[*]".into(), 2.into()),
                (1, "$.c[*]".into(), 3.into()),
            ]
        );
    }

    #[test]
    fn skips_nulls_and_empty_containers() {
        let root = Object::from_entries([("a", JsonValue::Null), ("b", JsonValue::Array(vec![]))]).unwrap();
        let coll = DocumentCollection::from_objects([root]);
        assert!(dynamic_unroll(&coll, Recorder::default()).0.is_empty());
    }

    #[test]
    fn repeated_values_are_reported_each_time() {
        let root = Object::from_entries([("a", JsonValue::Array(vec![7.into(), 7.into()]))]).unwrap();
        let coll = DocumentCollection::from_objects([root]);
        assert_eq!(dynamic_unroll(&coll, Recorder::default()).0.len(), 2);
    }
}
