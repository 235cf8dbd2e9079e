//! Dependency records as emitted on the command line, one JSON object per line.

use std::fmt::Write as _;

use nestprof_core::approx::Strength;
use nestprof_core::fd::Nfd;
use nestprof_core::ind::Nind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RecordKind {
    Nind,
    Nfd,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Nind => "nind",
            RecordKind::Nfd => "nfd",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub kind: RecordKind,
    pub lhs: Vec<String>,
    pub rhs: String,
    pub strength: Strength,
    pub satisfied: bool,
}

impl From<&Nind> for Record {
    fn from(n: &Nind) -> Self {
        Record {
            kind: RecordKind::Nind,
            lhs: vec![n.lhs.to_string()],
            rhs: n.rhs.to_string(),
            strength: n.strength,
            satisfied: n.satisfied,
        }
    }
}

impl From<&Nfd> for Record {
    fn from(n: &Nfd) -> Self {
        Record {
            kind: RecordKind::Nfd,
            lhs: n.lhs.iter().map(ToString::to_string).collect(),
            rhs: n.rhs.to_string(),
            strength: n.strength,
            satisfied: n.satisfied,
        }
    }
}

/// Decimal with exactly six fractional digits, rounded half up.
pub fn format_strength(s: Strength) -> String {
    let (n, d) = (*s.numer() as u128, *s.denom() as u128);
    let scaled = (n * 2_000_000 + d) / (2 * d);
    format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

impl Record {
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let lhs: Vec<String> = self.lhs.iter().map(|p| json_string(p)).collect();
        write!(
            out,
            "{{\"kind\":\"{}\",\"lhs\":[{}],\"rhs\":{},\"strength\":{},\"satisfied\":{}}}",
            self.kind.as_str(),
            lhs.join(","),
            json_string(&self.rhs),
            format_strength(self.strength),
            self.satisfied
        )
        .expect("writing to a string");
        out
    }
}

/// Canonical output order: by serialized lhs, then rhs.
pub fn sort_records(records: &mut [Record]) {
    records.sort_by(|a, b| (&a.lhs, &a.rhs, a.kind).cmp(&(&b.lhs, &b.rhs, b.kind)));
}
