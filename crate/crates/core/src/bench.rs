//! Batch benchmarking over a grid of rates and backends.
//!
//! Queries are lanes sampled without replacement from a seeded RNG and are
//! shared by every grid cell, so backends are compared on identical inputs.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{Algorithm, MileageCap, Query};
use crate::error::{Error, Result};
use crate::lanes::{LaneIndex, LaneIx};
use crate::metric::MetricSpace;
use crate::output::Format;

/// Default rate grid: 0.75 to 0.95 in steps of 0.05.
pub const DEFAULT_ELLS: [f64; 5] = [0.75, 0.80, 0.85, 0.90, 0.95];

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ells: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub queries: usize,
    pub seed: u64,
    pub cap: MileageCap,
    /// Used by [`Algorithm::TopK`] only.
    pub k: usize,
    pub deterministic: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ells: DEFAULT_ELLS.to_vec(),
            algorithms: vec![Algorithm::Pruned, Algorithm::TopK],
            queries: 1000,
            seed: 0,
            cap: MileageCap::default(),
            k: 20,
            deterministic: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub query: usize,
    pub lane: String,
    pub ell: f64,
    pub algorithm: String,
    pub wall_ms: f64,
    pub visits_s: u64,
    pub visits_t2: u64,
    pub visits_s2: u64,
    pub visits_t3: u64,
    pub candidates: u64,
    pub results: usize,
    pub ell_star: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub ell: f64,
    pub algorithm: String,
    pub queries: usize,
    pub total_ms: f64,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub p95_ms: f64,
    pub max_ms: f64,
    pub mean_candidates: f64,
    pub mean_ell_star: f64,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub build_ms: f64,
    pub rows: Vec<BenchRow>,
    pub cells: Vec<CellSummary>,
}

/// Samples `n` distinct client lanes.
pub fn sample_queries(index: &LaneIndex, n: usize, seed: u64) -> Result<Vec<LaneIx>> {
    if n > index.len() {
        return Err(Error::InvalidQuery(format!(
            "{n} queries requested but only {} lanes exist",
            index.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rand::seq::index::sample(&mut rng, index.len(), n)
        .into_iter()
        .map(|i| LaneIx(i as u32))
        .collect())
}

/// Nearest-rank percentile of an ascending slice.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Aggregates rows per `(ell, algorithm)` cell, in first-seen order.
pub fn summarize(rows: &[BenchRow]) -> Vec<CellSummary> {
    let mut keys: Vec<(f64, String)> = Vec::new();
    for r in rows {
        if !keys.iter().any(|(e, a)| *e == r.ell && *a == r.algorithm) {
            keys.push((r.ell, r.algorithm.clone()));
        }
    }
    keys.into_iter()
        .map(|(ell, algorithm)| {
            let cell: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| r.ell == ell && r.algorithm == algorithm)
                .collect();
            let n = cell.len();
            let mut times: Vec<f64> = cell.iter().map(|r| r.wall_ms).collect();
            times.sort_by(f64::total_cmp);
            let total: f64 = times.iter().sum();
            let median = if n % 2 == 1 {
                times[n / 2]
            } else {
                (times[n / 2 - 1] + times[n / 2]) / 2.0
            };
            CellSummary {
                ell,
                algorithm,
                queries: n,
                total_ms: total,
                mean_ms: total / n as f64,
                median_ms: median,
                p95_ms: percentile(&times, 0.95),
                max_ms: *times.last().expect("non-empty cell"),
                mean_candidates: cell.iter().map(|r| r.candidates as f64).sum::<f64>() / n as f64,
                mean_ell_star: cell.iter().map(|r| r.ell_star).sum::<f64>() / n as f64,
            }
        })
        .collect()
}

/// Runs every `(ell, algorithm)` cell over the same sampled queries.
///
/// Queries run sequentially on the calling thread; wall time covers the
/// search only, not index construction.
pub fn run_bench(index: &LaneIndex, space: &MetricSpace, cfg: &BenchConfig) -> Result<BenchReport> {
    let picks = sample_queries(index, cfg.queries, cfg.seed)?;
    let mut rows = Vec::with_capacity(picks.len() * cfg.ells.len() * cfg.algorithms.len());
    for &ell in &cfg.ells {
        for &alg in &cfg.algorithms {
            for (qi, &lane) in picks.iter().enumerate() {
                let id = &index.lane(lane).id;
                let mut q = Query::for_lane(index, id, ell, cfg.cap)?.deterministic(cfg.deterministic);
                if alg == Algorithm::TopK {
                    q = q.with_k(cfg.k)?;
                }
                let rs = alg.run(index, space, &q)?;
                let v = rs.stats.visits;
                rows.push(BenchRow {
                    query: qi,
                    lane: id.clone(),
                    ell,
                    algorithm: alg.name().to_owned(),
                    wall_ms: rs.stats.elapsed.as_secs_f64() * 1e3,
                    visits_s: v[0],
                    visits_t2: v[1],
                    visits_s2: v[2],
                    visits_t3: v[3],
                    candidates: rs.stats.candidates(),
                    results: rs.triangles.len(),
                    ell_star: rs.ell_star,
                });
            }
        }
    }
    let cells = summarize(&rows);
    Ok(BenchReport {
        build_ms: 0.0,
        rows,
        cells,
    })
}

impl BenchReport {
    pub fn write_rows<W: Write>(&self, out: W, format: Format) -> Result<()> {
        match format {
            Format::Jsonl => {
                let mut out = out;
                for r in &self.rows {
                    serde_json::to_writer(&mut out, r)?;
                    writeln!(out)?;
                }
                out.flush()?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for r in &self.rows {
                    w.serialize(r).map_err(|source| Error::Csv {
                        path: "<bench>".into(),
                        source,
                    })?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }

    /// Console table of the per-cell aggregates.
    pub fn summary_table(&self) -> String {
        let mut s = format!("index build: {:.1} ms\n", self.build_ms);
        s.push_str(&format!(
            "{:>5} {:>7} {:>6} {:>11} {:>9} {:>9} {:>9} {:>9} {:>12} {:>7}\n",
            "ell", "algo", "n", "total_ms", "mean_ms", "median", "p95", "max", "mean_cand", "ell*"
        ));
        for c in &self.cells {
            s.push_str(&format!(
                "{:>5.2} {:>7} {:>6} {:>11.2} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>12.1} {:>7.4}\n",
                c.ell,
                c.algorithm,
                c.queries,
                c.total_ms,
                c.mean_ms,
                c.median_ms,
                c.p95_ms,
                c.max_ms,
                c.mean_candidates,
                c.mean_ell_star
            ));
        }
        s
    }
}
