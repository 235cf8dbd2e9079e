//! Collect and mine phases, with optional worker threads and a soft memory cap.

use std::ops::Range;
use std::thread;
use std::time::{Duration, Instant};

use nestprof_core::approx::Threshold;
use nestprof_core::fd::{build_adjacency, fdep_mine, tane_mine, FdepMeta, TaneMeta, DEFAULT_MAX_LHS};
use nestprof_core::ind::{demarchi_mine, spider_mine, DeMarchiMeta, SpiderMeta};
use nestprof_core::json_model::{Atomic, DocumentCollection, Path};
use nestprof_core::unroll::{collect_document, document_row_count, static_unroll, Merge, MetadataSink, StaticTable};
use nestprof_core::MineError;

use crate::record::{sort_records, Record};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Ind,
    Fd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Algorithm {
    Spider,
    Demarchi,
    Tane,
    Fdep,
}

impl Algorithm {
    pub fn kind(self) -> Kind {
        match self {
            Algorithm::Spider | Algorithm::Demarchi => Kind::Ind,
            Algorithm::Tane | Algorithm::Fdep => Kind::Fd,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Spider => "spider",
            Algorithm::Demarchi => "demarchi",
            Algorithm::Tane => "tane",
            Algorithm::Fdep => "fdep",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Unroll {
    Static,
    Dynamic,
}

#[derive(Clone, Debug)]
pub struct MineConfig {
    pub algorithm: Algorithm,
    pub unroll: Unroll,
    pub threshold: Threshold,
    pub max_lhs: usize,
    pub threads: usize,
    /// Also report inclusion candidates below the threshold.
    pub include_unsatisfied: bool,
    /// Soft cap on unrolled rows plus metadata, in bytes.
    pub mem_limit: Option<usize>,
}

impl MineConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        MineConfig {
            algorithm,
            unroll: Unroll::Dynamic,
            threshold: Threshold::default(),
            max_lhs: DEFAULT_MAX_LHS,
            threads: 1,
            include_unsatisfied: false,
            mem_limit: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Timing {
    pub collect: Duration,
    pub mine: Duration,
    pub rows_processed: usize,
    pub expansion_factor: f64,
}

impl Timing {
    pub fn to_json(&self) -> String {
        format!(
            "{{\"phase_collect_s\":{:.6},\"phase_mine_s\":{:.6},\"rows_processed\":{},\"expansion_factor\":{:.6}}}",
            self.collect.as_secs_f64(),
            self.mine.as_secs_f64(),
            self.rows_processed,
            self.expansion_factor
        )
    }
}

#[derive(Clone, Debug)]
pub struct MineReport {
    pub records: Vec<Record>,
    pub timing: Timing,
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Mine(#[from] MineError),
    #[error("estimated memory {needed_mb} MB exceeds the limit of {limit_mb} MB")]
    MemoryLimit { needed_mb: usize, limit_mb: usize },
}

const MB: usize = 1 << 20;

fn check_memory(needed: usize, limit: Option<usize>) -> Result<(), PipelineError> {
    match limit {
        Some(limit) if needed > limit => Err(PipelineError::MemoryLimit {
            needed_mb: needed.div_ceil(MB),
            limit_mb: limit / MB,
        }),
        _ => Ok(()),
    }
}

/// Splits `0..n` into at most `parts` contiguous non-empty ranges.
fn chunks(n: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.clamp(1, n.max(1));
    let size = n.div_ceil(parts).max(1);
    (0..n).step_by(size).map(|s| s..(s + size).min(n)).collect()
}

/// Runs `work` on each chunk (in parallel when there is more than one) and
/// merges the partial results in chunk order.
fn collect_chunked<S, F>(n: usize, threads: usize, work: F) -> S
where
    S: Merge + Default + Send,
    F: Fn(Range<usize>) -> S + Sync,
{
    let ranges = chunks(n, threads);
    if ranges.len() <= 1 {
        return work(0..n);
    }
    let parts: Vec<S> = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let work = &work;
                scope.spawn(move || work(r))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut acc = S::default();
    for part in parts {
        acc.merge(part);
    }
    acc
}

/// Metadata keyed by document, from either unrolling strategy.
fn collect_by_doc<S>(collection: &DocumentCollection, table: Option<&StaticTable>, threads: usize) -> S
where
    S: MetadataSink + Merge + Default + Send,
{
    match table {
        Some(t) => collect_chunked(t.rows().len(), threads, |r| {
            let mut s = S::default();
            t.feed(r, &mut s);
            s
        }),
        None => {
            let docs = collection.documents();
            collect_chunked(docs.len(), threads, |r| {
                let mut s = S::default();
                for d in &docs[r] {
                    collect_document(d, &mut s);
                }
                s
            })
        }
    }
}

/// Static rows become their own units, mapped back to documents.
fn collect_by_row<S, F>(table: &StaticTable, threads: usize, record: F) -> S
where
    S: Merge + Default + Send,
    F: Fn(&mut S, u32, &Path, &Atomic) + Sync,
{
    collect_chunked(table.rows().len(), threads, |r| {
        let mut s = S::default();
        table.feed_rows(r, |u, p, v| record(&mut s, u, p, v));
        s
    })
}

/// Rows static unrolling would produce, without producing them.
pub fn estimated_rows(collection: &DocumentCollection) -> u128 {
    collection
        .documents()
        .iter()
        .map(document_row_count)
        .fold(0u128, |a, b| a.saturating_add(b))
}

fn estimated_table_bytes(collection: &DocumentCollection, rows: u128) -> usize {
    let cols = nestprof_core::json_model::enumerate_paths(collection).len().max(1) as u128;
    rows.saturating_mul(cols * 32 + 48).min(usize::MAX as u128) as usize
}

pub fn run_mine(collection: &DocumentCollection, config: &MineConfig) -> Result<MineReport, PipelineError> {
    let n_docs = collection.len();
    let threads = config.threads.max(1);
    let is_static = config.unroll == Unroll::Static;
    let rows = estimated_rows(collection);
    if is_static {
        check_memory(estimated_table_bytes(collection, rows), config.mem_limit)?;
    }

    let started = Instant::now();
    let table = is_static.then(|| static_unroll(collection));
    let rows_processed = table.as_ref().map_or(n_docs, |t| t.rows().len());
    let table_bytes = if is_static { estimated_table_bytes(collection, rows) } else { 0 };

    enum Collected {
        Spider(SpiderMeta),
        Demarchi(DeMarchiMeta),
        Tane(TaneMeta),
        Fdep(FdepMeta),
    }
    let collected = match config.algorithm {
        Algorithm::Spider => Collected::Spider(collect_by_doc(collection, table.as_ref(), threads)),
        Algorithm::Demarchi => Collected::Demarchi(collect_by_doc(collection, table.as_ref(), threads)),
        Algorithm::Tane => Collected::Tane(match &table {
            Some(t) => collect_by_row(t, threads, |m: &mut TaneMeta, u, p, v| m.record(u, p, v)).with_unit_docs(t.row_docs()),
            None => collect_by_doc(collection, None, threads),
        }),
        Algorithm::Fdep => Collected::Fdep(match &table {
            Some(t) => collect_by_row(t, threads, |m: &mut FdepMeta, u, p, v| m.record(u, p, v)).with_unit_docs(t.row_docs()),
            None => collect_by_doc(collection, None, threads),
        }),
    };
    let meta_bytes = match &collected {
        Collected::Spider(m) => m.approx_bytes(),
        Collected::Demarchi(m) => m.approx_bytes(),
        Collected::Tane(m) => m.approx_bytes(),
        Collected::Fdep(m) => m.approx_bytes(),
    };
    check_memory(table_bytes + meta_bytes, config.mem_limit)?;
    let collect = started.elapsed();

    let started = Instant::now();
    let t = config.threshold;
    let mut records: Vec<Record> = match &collected {
        Collected::Spider(m) => spider_mine(m, t)?.iter().filter(|n| n.satisfied || config.include_unsatisfied).map(Record::from).collect(),
        Collected::Demarchi(m) => demarchi_mine(m, t)?.iter().filter(|n| n.satisfied || config.include_unsatisfied).map(Record::from).collect(),
        Collected::Tane(m) => {
            let adjacency = build_adjacency(m, n_docs)?;
            check_memory(table_bytes + meta_bytes + adjacency.approx_bytes(), config.mem_limit)?;
            tane_mine(&adjacency, n_docs, t, config.max_lhs)?.iter().map(Record::from).collect()
        }
        Collected::Fdep(m) => fdep_mine(m, n_docs, t, config.max_lhs)?.iter().map(Record::from).collect(),
    };
    sort_records(&mut records);
    let mine = started.elapsed();

    let expansion_factor = match &table {
        Some(t) => t.expansion_factor(),
        None if n_docs > 0 => rows as f64 / n_docs as f64,
        None => 0.0,
    };
    Ok(MineReport {
        records,
        timing: Timing {
            collect,
            mine,
            rows_processed,
            expansion_factor,
        },
    })
}
