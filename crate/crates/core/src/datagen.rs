//! Seeded synthetic collections with planted dependencies.
//!
//! Fields are named `s0, s1, ...` (scalars) and `a0, a1, ...` (arrays of
//! `array_len` integers). Field `k` in that combined order sits at depth
//! `1 + k % nesting_depth`, under objects `l1`, `l1.l2`, and so on, so the
//! statically unrolled row count per document is `array_len ^ n_array_keys`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::json_model::{Atomic, DocumentCollection, JsonValue, Number, Object, Path};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields))]
pub enum Plant {
    /// Every value of field `lhs` occurs at field `rhs`.
    Inclusion { lhs: String, rhs: String },
    /// Scalar field `lhs` determines scalar field `rhs`.
    Functional { lhs: String, rhs: String },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GenSpec {
    pub seed: u64,
    pub n_docs: usize,
    pub n_scalar_keys: usize,
    pub n_array_keys: usize,
    pub array_len: usize,
    pub nesting_depth: usize,
    /// Unplanted fields draw from `0..domain_size`.
    pub domain_size: u64,
    pub planted: Vec<Plant>,
    /// Fraction of documents perturbed per planted dependency, in `[0, 1)`.
    pub violation_rate: f64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            seed: 0,
            n_docs: 100,
            n_scalar_keys: 3,
            n_array_keys: 1,
            array_len: 3,
            nesting_depth: 1,
            domain_size: 50,
            planted: Vec::new(),
            violation_rate: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("{0} must be at least 1")]
    BadParameter(&'static str),
    #[error("domain_size must not exceed {PLANTED}")]
    DomainTooLarge,
    #[error("violation rate must be in [0, 1)")]
    BadRate,
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("field `{0}` is constrained by more than one planted dependency")]
    Conflicting(String),
    #[error("functional plants need scalar fields, `{0}` is an array")]
    ShapeMismatch(String),
    #[error("cannot fit the planted dependency {0}")]
    Capacity(String),
}

/// Number of documents a planted dependency perturbs.
pub fn violator_count(rate: f64, n_docs: usize) -> usize {
    let exact = rate * n_docs as f64;
    let floor = exact as usize;
    if exact - floor as f64 > 1e-9 {
        floor + 1
    } else {
        floor
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Field {
    index: usize,
    array: bool,
}

impl Field {
    /// Values private to this field start here.
    fn namespace(self) -> i64 {
        (self.index as i64 + 1) << 32
    }
}

struct Layout {
    n_scalar: usize,
    n_array: usize,
    depth: usize,
}

impl Layout {
    fn field(&self, name: &str) -> Option<Field> {
        let (kind, num) = name.split_at_checked(1)?;
        let n: usize = num.parse().ok()?;
        match kind {
            "s" if n < self.n_scalar => Some(Field { index: n, array: false }),
            "a" if n < self.n_array => Some(Field {
                index: self.n_scalar + n,
                array: true,
            }),
            _ => None,
        }
    }

    fn name(&self, index: usize) -> String {
        if index < self.n_scalar {
            format!("s{index}")
        } else {
            format!("a{}", index - self.n_scalar)
        }
    }

    fn parents(&self, index: usize) -> usize {
        index % self.depth
    }

    fn path(&self, name: &str) -> Option<Path> {
        let f = self.field(name)?;
        let mut path = Path::root();
        for level in 1..=self.parents(f.index) {
            path = path.key(&format!("l{level}"));
        }
        path = path.key(name);
        Some(if f.array { path.wildcard() } else { path })
    }
}

impl GenSpec {
    fn layout(&self) -> Layout {
        Layout {
            n_scalar: self.n_scalar_keys,
            n_array: self.n_array_keys,
            depth: self.nesting_depth,
        }
    }

    /// Where a named field ends up, e.g. `a0` at depth 2 is `$.l1.a0[*]`.
    pub fn field_path(&self, name: &str) -> Option<Path> {
        self.layout().path(name)
    }

    pub fn expected_expansion_factor(&self) -> f64 {
        (0..self.n_array_keys).fold(1.0, |acc, _| acc * self.array_len as f64)
    }
}

/// Per-document slot values for every field.
type Grid = Vec<Vec<Vec<i64>>>;

pub fn generate(spec: &GenSpec) -> Result<DocumentCollection, GenError> {
    for (name, v) in [
        ("n_docs", spec.n_docs as u64),
        ("array_len", spec.array_len as u64),
        ("nesting_depth", spec.nesting_depth as u64),
        ("domain_size", spec.domain_size),
    ] {
        if v == 0 {
            return Err(GenError::BadParameter(name));
        }
    }
    if spec.domain_size > PLANTED as u64 {
        return Err(GenError::DomainTooLarge);
    }
    if !(0.0..1.0).contains(&spec.violation_rate) {
        return Err(GenError::BadRate);
    }
    let layout = spec.layout();
    let n_fields = spec.n_scalar_keys + spec.n_array_keys;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let slots = |f: usize| if f < spec.n_scalar_keys { 1 } else { spec.array_len };
    let mut grid: Grid = (0..spec.n_docs)
        .map(|_| {
            (0..n_fields)
                .map(|f| (0..slots(f)).map(|_| rng.random_range(0..spec.domain_size) as i64).collect())
                .collect()
        })
        .collect();

    let mut used = BTreeSet::new();
    let resolve = |name: &String, used: &mut BTreeSet<String>| {
        let f = layout.field(name).ok_or_else(|| GenError::UnknownField(name.clone()))?;
        if !used.insert(name.clone()) {
            return Err(GenError::Conflicting(name.clone()));
        }
        Ok(f)
    };
    let violators = violator_count(spec.violation_rate, spec.n_docs);
    for plant in &spec.planted {
        match plant {
            Plant::Inclusion { lhs, rhs } => {
                let l = resolve(lhs, &mut used)?;
                let r = resolve(rhs, &mut used)?;
                plant_inclusion(&mut grid, l, r, violators, &mut rng)
                    .map_err(|()| GenError::Capacity(format!("{lhs} < {rhs}")))?;
            }
            Plant::Functional { lhs, rhs } => {
                let l = resolve(lhs, &mut used)?;
                let r = resolve(rhs, &mut used)?;
                for f in [(l, lhs), (r, rhs)] {
                    if f.0.array {
                        return Err(GenError::ShapeMismatch(f.1.clone()));
                    }
                }
                plant_functional(&mut grid, l, r, violators, spec.domain_size, &mut rng)
                    .map_err(|()| GenError::Capacity(format!("{lhs} -> {rhs}")))?;
            }
        }
    }

    let roots = grid.into_iter().map(|fields| build_document(&layout, fields));
    Ok(DocumentCollection::from_objects(roots))
}

fn int(v: i64) -> JsonValue {
    JsonValue::Atomic(Atomic::Number(Number::from_i64(v)))
}

fn build_document(layout: &Layout, fields: Vec<Vec<i64>>) -> Object {
    // Innermost first, so every level can be closed into its parent.
    let mut levels: Vec<Object> = (0..layout.depth).map(|_| Object::new()).collect();
    for (index, values) in fields.into_iter().enumerate() {
        let value = if index >= layout.n_scalar {
            JsonValue::Array(values.into_iter().map(int).collect())
        } else {
            int(values[0])
        };
        let level = layout.parents(index);
        levels[level]
            .insert(layout.name(index), value)
            .expect("field names are unique");
    }
    while levels.len() > 1 {
        let inner = levels.pop().expect("non-empty");
        let depth = levels.len();
        if !inner.is_empty() {
            levels[depth - 1]
                .insert(format!("l{depth}"), JsonValue::Object(inner))
                .expect("level names are unique");
        }
    }
    levels.pop().expect("one level left")
}

const FRESH: i64 = 1 << 31;
const PLANTED: i64 = 1 << 20;

/// Lhs slots get values unique to their document; every non-violating lhs
/// value is scattered into the rhs slots, and violators get values that occur
/// nowhere else.
fn plant_inclusion(grid: &mut Grid, l: Field, r: Field, violators: usize, rng: &mut ChaCha8Rng) -> Result<(), ()> {
    let n = grid.len();
    let mut docs: Vec<usize> = (0..n).collect();
    docs.shuffle(rng);
    let bad: BTreeSet<usize> = docs[..violators].iter().copied().collect();
    let ns = r.namespace();
    let mut wanted = Vec::new();
    let mut fresh = 0;
    for (d, fields) in grid.iter_mut().enumerate() {
        let width = fields[l.index].len();
        for (e, slot) in fields[l.index].iter_mut().enumerate() {
            if bad.contains(&d) {
                *slot = ns + FRESH + fresh;
                fresh += 1;
            } else {
                *slot = ns + PLANTED + (d * width + e) as i64;
                wanted.push(*slot);
            }
        }
    }
    let mut rhs_slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|d| (0..grid[d][r.index].len()).map(move |e| (d, e)))
        .collect();
    if wanted.len() > rhs_slots.len() {
        return Err(());
    }
    rhs_slots.shuffle(rng);
    for values in grid.iter_mut() {
        for v in values[r.index].iter_mut() {
            *v += ns;
        }
    }
    for (&(d, e), v) in rhs_slots.iter().zip(wanted) {
        grid[d][r.index][e] = v;
    }
    Ok(())
}

/// Documents are dealt into groups sharing an lhs value; the rhs is a
/// function of the group, except for violators, which get a private rhs
/// value. Each group keeps at least one conforming document so every
/// violator is refuted.
fn plant_functional(
    grid: &mut Grid,
    l: Field,
    r: Field,
    violators: usize,
    domain: u64,
    rng: &mut ChaCha8Rng,
) -> Result<(), ()> {
    let n = grid.len();
    let groups = (domain as usize).min(n / 2).max(1);
    if violators > n - groups {
        return Err(());
    }
    let mut docs: Vec<usize> = (0..n).collect();
    docs.shuffle(rng);
    // docs[k] joins group k % groups; the first `groups` documents anchor
    // their group and never violate.
    let mut candidates: Vec<usize> = docs[groups..].to_vec();
    candidates.shuffle(rng);
    let bad: BTreeSet<usize> = candidates[..violators].iter().copied().collect();
    for (k, &d) in docs.iter().enumerate() {
        let g = (k % groups) as i64;
        grid[d][l.index][0] = l.namespace() + g;
        grid[d][r.index][0] = if bad.contains(&d) {
            r.namespace() + FRESH + d as i64
        } else {
            r.namespace() + g
        };
    }
    Ok(())
}

/// A small random collection for differential testing: at most `max_docs`
/// documents over at most `max_paths` leaf paths, mixing scalars, arrays,
/// nested objects, arrays of objects, nulls and missing keys, with values
/// from a tiny domain so dependencies both hold and fail.
pub fn random_small_collection(seed: u64, max_docs: usize, max_paths: usize) -> DocumentCollection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_docs = rng.random_range(1..=max_docs.max(1));
    let n_keys = rng.random_range(1..=max_paths.max(1));
    let shapes: Vec<u8> = (0..n_keys).map(|_| rng.random_range(0..4)).collect();
    let domain = rng.random_range(1..=4u32);
    let missing = rng.random_range(0..4u32);
    let roots: Vec<Object> = (0..n_docs)
        .map(|_| {
            let mut root = Object::new();
            for (k, &shape) in shapes.iter().enumerate() {
                if rng.random_range(0..10) < missing {
                    continue;
                }
                let value = match shape {
                    0 => small_atomic(&mut rng, domain),
                    1 => JsonValue::Array(small_list(&mut rng, domain, |r, d| small_atomic(r, d))),
                    2 => single("x", small_atomic(&mut rng, domain)),
                    _ => JsonValue::Array(small_list(&mut rng, domain, |r, d| single("x", small_atomic(r, d)))),
                };
                root.insert(format!("k{k}"), value).expect("unique keys");
            }
            root
        })
        .collect();
    DocumentCollection::from_objects(roots)
}

fn single(key: &str, value: JsonValue) -> JsonValue {
    let mut obj = Object::new();
    obj.insert(key, value).expect("one key");
    JsonValue::Object(obj)
}

fn small_list(
    rng: &mut ChaCha8Rng,
    domain: u32,
    mut item: impl FnMut(&mut ChaCha8Rng, u32) -> JsonValue,
) -> Vec<JsonValue> {
    let len = rng.random_range(0..=3);
    (0..len).map(|_| item(rng, domain)).collect()
}

fn small_atomic(rng: &mut ChaCha8Rng, domain: u32) -> JsonValue {
    let v = rng.random_range(0..domain);
    match rng.random_range(0..12) {
        0 => JsonValue::Null,
        1 => JsonValue::Atomic(Atomic::String(format!("{v}"))),
        2 => JsonValue::Atomic(Atomic::Number(Number::from_f64(v as f64).expect("finite"))),
        3 => JsonValue::Atomic(Atomic::Bool(v % 2 == 0)),
        _ => int(v as i64),
    }
}
