//! Static vs dynamic timing over generated collections of growing size.

use std::time::Duration;

use nestprof_core::datagen::{generate, GenError, GenSpec};

use crate::pipeline::{estimated_rows, run_mine, Algorithm, MineConfig, PipelineError, Unroll};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub base: GenSpec,
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub threads: usize,
    /// Functional runs whose unit count (rows or documents) exceeds this are skipped.
    pub fd_unit_limit: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub docs: usize,
    pub algorithm: Algorithm,
    pub expansion_factor: f64,
    /// `None` when skipped.
    pub static_time: Option<Duration>,
    pub dynamic_time: Option<Duration>,
}

impl BenchRow {
    pub fn improvement(&self) -> Option<f64> {
        let (s, d) = (self.static_time?, self.dynamic_time?);
        Some(s.as_secs_f64() / d.as_secs_f64().max(1e-9))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let mut out = Vec::new();
    for &docs in &config.sizes {
        let spec = GenSpec {
            n_docs: docs,
            ..config.base.clone()
        };
        let collection = generate(&spec)?;
        let rows = estimated_rows(&collection);
        for &algorithm in &config.algorithms {
            let timed = |unroll: Unroll| -> Result<Option<Duration>, BenchError> {
                let units = if unroll == Unroll::Static { rows } else { docs as u128 };
                let is_fd = algorithm.kind() == crate::pipeline::Kind::Fd;
                if is_fd && (units > config.fd_unit_limit as u128 || docs < 2) {
                    return Ok(None);
                }
                let cfg = MineConfig {
                    unroll,
                    threads: config.threads,
                    ..MineConfig::new(algorithm)
                };
                let report = run_mine(&collection, &cfg)?;
                Ok(Some(report.timing.collect + report.timing.mine))
            };
            let static_time = timed(Unroll::Static)?;
            let dynamic_time = timed(Unroll::Dynamic)?;
            out.push(BenchRow {
                docs,
                algorithm,
                expansion_factor: rows as f64 / docs.max(1) as f64,
                static_time,
                dynamic_time,
            });
        }
    }
    Ok(out)
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let secs = |d: Option<Duration>| d.map_or("skipped".to_string(), |d| format!("{:.4}", d.as_secs_f64()));
    let mut out = format!(
        "{:>10}  {:<9}  {:>9}  {:>10}  {:>10}  {:>11}\n",
        "docs", "algorithm", "expansion", "static_s", "dynamic_s", "improvement"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>10}  {:<9}  {:>9.1}  {:>10}  {:>10}  {:>11}\n",
            r.docs,
            r.algorithm.name(),
            r.expansion_factor,
            secs(r.static_time),
            secs(r.dynamic_time),
            r.improvement().map_or("-".to_string(), |x| format!("{x:.1}x")),
        ));
    }
    out
}
