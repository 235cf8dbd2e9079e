use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A JSON number normalized so that numerically equal integers compare equal
/// regardless of their lexical form (`1` and `1.0` are the same value).
#[derive(Clone, Copy, Debug)]
pub enum Number {
    Int(i64),
    /// Only used for integers above `i64::MAX`.
    UInt(u64),
    /// Non-integral, or integral but outside the 64-bit integer range.
    Float(f64),
}

impl Number {
    pub fn from_i64(n: i64) -> Self {
        Number::Int(n)
    }

    pub fn from_u64(n: u64) -> Self {
        match i64::try_from(n) {
            Ok(i) => Number::Int(i),
            Err(_) => Number::UInt(n),
        }
    }

    /// Returns `None` for NaN and infinities, which JSON cannot carry.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        // 2^63 and 2^64 are exact in f64.
        const I64_BOUND: f64 = 9_223_372_036_854_775_808.0;
        const U64_BOUND: f64 = 18_446_744_073_709_551_616.0;
        if (-I64_BOUND..I64_BOUND).contains(&x) {
            let i = x as i64;
            if i as f64 == x {
                return Some(Number::Int(i));
            }
        } else if (0.0..U64_BOUND).contains(&x) {
            let u = x as u64;
            if u as f64 == x {
                return Some(Number::UInt(u));
            }
        }
        Some(Number::Float(x))
    }

    fn rank(&self) -> u8 {
        match self {
            Number::Int(_) => 0,
            Number::UInt(_) => 1,
            Number::Float(_) => 2,
        }
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Number {}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// A total order consistent with the canonical equality; not numeric order
// across variants.
impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => a.cmp(b),
            (Number::UInt(a), Number::UInt(b)) => a.cmp(b),
            (Number::Float(a), Number::Float(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Int(n) => write!(f, "{n}"),
            Number::UInt(n) => write!(f, "{n}"),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A non-null scalar. Equality is typed: strings never equal numbers and
/// booleans only equal booleans.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atomic {
    Bool(bool),
    Number(Number),
    String(String),
}

impl fmt::Display for Atomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atomic::Bool(b) => write!(f, "{b}"),
            Atomic::Number(n) => write!(f, "{n}"),
            Atomic::String(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Atomic {
    fn from(s: &str) -> Self {
        Atomic::String(s.into())
    }
}

impl From<String> for Atomic {
    fn from(s: String) -> Self {
        Atomic::String(s)
    }
}

impl From<i64> for Atomic {
    fn from(n: i64) -> Self {
        Atomic::Number(Number::from_i64(n))
    }
}

impl From<bool> for Atomic {
    fn from(b: bool) -> Self {
        Atomic::Bool(b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum JsonValue {
    Null,
    Atomic(Atomic),
    Array(Vec<JsonValue>),
    Object(Object),
}

impl JsonValue {
    /// Null and empty containers carry no atomic values.
    pub fn is_empty(&self) -> bool {
        match self {
            JsonValue::Null => true,
            JsonValue::Atomic(_) => false,
            JsonValue::Array(items) => items.is_empty(),
            JsonValue::Object(obj) => obj.is_empty(),
        }
    }

    pub fn as_object(&self) -> Option<&Object> {
        match self {
            JsonValue::Object(obj) => Some(obj),
            _ => None,
        }
    }
}

impl<T: Into<Atomic>> From<T> for JsonValue {
    fn from(v: T) -> Self {
        JsonValue::Atomic(v.into())
    }
}

/// Key/value entries in input order. Keys are unique.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Object {
    entries: Vec<(String, JsonValue)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("duplicate key `{0}` in object")]
pub struct DuplicateKey(pub String);

impl Object {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I, K>(entries: I) -> Result<Self, DuplicateKey>
    where
        I: IntoIterator<Item = (K, JsonValue)>,
        K: Into<String>,
    {
        let mut obj = Object::new();
        for (k, v) in entries {
            obj.insert(k, v)?;
        }
        Ok(obj)
    }

    pub fn insert(&mut self, key: impl Into<String>, value: JsonValue) -> Result<(), DuplicateKey> {
        let key = key.into();
        if self.get(&key).is_some() {
            return Err(DuplicateKey(key));
        }
        self.entries.push((key, value));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&JsonValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &JsonValue)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_floats_equal_integers() {
        assert_eq!(Number::from_f64(1.0).unwrap(), Number::from_i64(1));
        assert_eq!(Number::from_f64(-0.0).unwrap(), Number::from_i64(0));
        assert_ne!(Number::from_f64(1.5).unwrap(), Number::from_i64(1));
        assert_eq!(Number::from_u64(u64::MAX), Number::UInt(u64::MAX));
        assert_eq!(Number::from_u64(7), Number::Int(7));
        assert!(Number::from_f64(f64::NAN).is_none());
    }

    #[test]
    fn typed_atomic_equality() {
        assert_ne!(Atomic::from("1"), Atomic::from(1));
        assert_ne!(Atomic::from(true), Atomic::from(1));
        assert_eq!(Atomic::from(1), Atomic::Number(Number::from_f64(1.0).unwrap()));
    }

    #[test]
    fn objects_reject_duplicate_keys() {
        let err = Object::from_entries([("a", JsonValue::from(1)), ("a", JsonValue::from(2))]).unwrap_err();
        assert_eq!(err, DuplicateKey("a".into()));
    }

    #[test]
    fn emptiness() {
        assert!(JsonValue::Null.is_empty());
        assert!(JsonValue::Array(Vec::new()).is_empty());
        assert!(JsonValue::Object(Object::new()).is_empty());
        assert!(!JsonValue::from("").is_empty());
        assert!(!JsonValue::from(0).is_empty());
    }
}
