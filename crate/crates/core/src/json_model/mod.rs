//! Documents, atomic values and the restricted JSONPath used to address them.

mod document;
mod path;
#[cfg(feature = "serde")]
mod serde_impl;
mod value;

pub use document::{enumerate_paths, evaluate_path, DocId, Document, DocumentCollection, NotAnObject, ValueSet};
pub use path::{Path, PathError, Step};
pub use value::{Atomic, DuplicateKey, JsonValue, Number, Object};
