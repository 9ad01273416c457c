//! Random-trial experiments: path changes, degree bound, solver timings.

use std::io::{Read, Write};
use std::time::Instant;

use num_rational::BigRational;

use crate::balance::min_balance;
use crate::cycles::{add_artificial_source, min_mean_cycle_karp};
use crate::error::{Error, Result};
use crate::graph::{random_graph, random_strongly_connected, Graph};
use crate::oracle::certify_solution;
use crate::parametric::solve;

pub const CSV_HEADER: [&str; 10] = [
    "n",
    "m",
    "seed",
    "trial",
    "path_changes",
    "max_degree",
    "pivots",
    "contractions",
    "time_parametric_ns",
    "time_karp_ns",
];

/// Default cost range for generated graphs. Costs are uniform integers.
pub const DEFAULT_COSTS: (i64, i64) = (1, 1_000_000);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Mmc,
    Balance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub points: Vec<(usize, usize)>,
    /// Trials per point; `None` means `max(n / 2, 50)`.
    pub trials: Option<usize>,
    pub seed: u64,
    pub cost_lo: i64,
    pub cost_hi: i64,
    pub mode: Mode,
    /// Certify every parametric solution (mmc mode) or cross-check the
    /// balance trace against Karp (balance mode); untimed.
    pub certify: bool,
}

impl BenchConfig {
    pub fn new(mode: Mode, points: Vec<(usize, usize)>) -> Self {
        BenchConfig {
            points,
            trials: None,
            seed: 0,
            cost_lo: DEFAULT_COSTS.0,
            cost_hi: DEFAULT_COSTS.1,
            mode,
            certify: false,
        }
    }

    pub fn trials_for(&self, n: usize) -> usize {
        self.trials.unwrap_or((n / 2).max(50))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub trial: usize,
    pub path_changes: u64,
    pub max_degree: usize,
    pub pivots: u64,
    pub contractions: Option<usize>,
    pub time_parametric_ns: u64,
    pub time_karp_ns: Option<u64>,
}

impl TrialRecord {
    /// The record with timing fields cleared, for comparing runs.
    pub fn without_timing(&self) -> TrialRecord {
        TrialRecord {
            time_parametric_ns: 0,
            time_karp_ns: self.time_karp_ns.map(|_| 0),
            ..self.clone()
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of one trial, independent of the order trials are run in.
pub fn trial_seed(base: u64, n: usize, m: usize, trial: usize) -> u64 {
    base ^ splitmix(splitmix(splitmix(n as u64) ^ m as u64) ^ trial as u64)
}

fn elapsed_ns(start: Instant) -> u64 {
    start.elapsed().as_nanos().min(u64::MAX as u128) as u64
}

fn mmc_trial(cfg: &BenchConfig, n: usize, m: usize, trial: usize) -> Result<TrialRecord> {
    let seed = trial_seed(cfg.seed, n, m, trial);
    let g = random_graph(n, m, cfg.cost_lo, cfg.cost_hi, seed)?;
    let h = add_artificial_source(&g);

    let start = Instant::now();
    let sol = solve(&h)?;
    let time_parametric_ns = elapsed_ns(start);

    let start = Instant::now();
    let karp = min_mean_cycle_karp(&g);
    let time_karp_ns = elapsed_ns(start);

    let parametric = sol.lambda_star.finite().cloned();
    if parametric != karp {
        return Err(Error::CheckFailed(format!("parametric and Karp disagree on n={n} m={m} seed={seed}")));
    }
    if cfg.certify && !certify_solution(&h, &sol).passed() {
        return Err(Error::CheckFailed(format!("certification failed on n={n} m={m} seed={seed}")));
    }
    Ok(TrialRecord {
        n,
        m,
        seed,
        trial,
        path_changes: sol.path_change_count,
        max_degree: g.max_degree(),
        pivots: sol.pivot_count,
        contractions: None,
        time_parametric_ns,
        time_karp_ns: Some(time_karp_ns),
    })
}

fn balance_trial(cfg: &BenchConfig, n: usize, m: usize, trial: usize) -> Result<TrialRecord> {
    let (g, seed) = random_strongly_connected(n, m, cfg.cost_lo, cfg.cost_hi, trial_seed(cfg.seed, n, m, trial))?;
    let big: Graph<BigRational> = g.map_costs(|&c| BigRational::from_integer(c.into()));

    let start = Instant::now();
    let res = min_balance(&big)?;
    let time_parametric_ns = elapsed_ns(start);

    if cfg.certify {
        let first = res.contraction_trace.first().map(|c| c.lambda.clone());
        let karp = min_mean_cycle_karp(&big);
        if first != karp {
            return Err(Error::CheckFailed(format!(
                "first contraction value differs from the minimum cycle mean on n={n} m={m} seed={seed}"
            )));
        }
    }
    Ok(TrialRecord {
        n,
        m,
        seed,
        trial,
        path_changes: res.changes_per_vertex.iter().sum(),
        max_degree: g.max_degree(),
        pivots: res.pivots,
        contractions: Some(res.contraction_count),
        time_parametric_ns,
        time_karp_ns: None,
    })
}

/// Runs every trial of every point, in order.
pub fn run_trials(cfg: &BenchConfig) -> Result<Vec<TrialRecord>> {
    let mut out = Vec::new();
    for &(n, m) in &cfg.points {
        if m > n.saturating_mul(n.saturating_sub(1)) {
            return Err(Error::TooManyEdges { n, m });
        }
        for trial in 0..cfg.trials_for(n) {
            out.push(match cfg.mode {
                Mode::Mmc => mmc_trial(cfg, n, m, trial)?,
                Mode::Balance => balance_trial(cfg, n, m, trial)?,
            });
        }
    }
    Ok(out)
}

/// Largest degree (in plus out) above which a random graph counts as
/// violating the degree bound: `8m/n + 2·log2(n)`.
pub fn degree_threshold(n: usize, m: usize) -> f64 {
    8.0 * m as f64 / n as f64 + 2.0 * (n as f64).log2()
}

/// Fraction of `samples` random graphs whose maximum degree exceeds
/// [`degree_threshold`].
pub fn degree_check(n: usize, m: usize, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Ok(0.0);
    }
    let limit = degree_threshold(n, m);
    let mut bad = 0usize;
    for i in 0..samples {
        let g = random_graph(n, m, 0, 0, trial_seed(seed, n, m, i))?;
        if g.max_degree() as f64 > limit {
            bad += 1;
        }
    }
    Ok(bad as f64 / samples as f64)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// Writes the header and one row per record.
pub fn emit_csv<W: Write>(records: &[TrialRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.m.to_string(),
            r.seed.to_string(),
            r.trial.to_string(),
            r.path_changes.to_string(),
            r.max_degree.to_string(),
            r.pivots.to_string(),
            opt(&r.contractions),
            r.time_parametric_ns.to_string(),
            opt(&r.time_karp_ns),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads back a CSV written by [`emit_csv`].
pub fn parse_csv<R: Read>(input: R) -> std::result::Result<Vec<TrialRecord>, String> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(CSV_HEADER) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let field = |k: usize| row.get(k).unwrap_or("");
        fn num<T: std::str::FromStr>(s: &str, row: usize) -> std::result::Result<T, String> {
            s.parse().map_err(|_| format!("row {row}: bad field {s:?}"))
        }
        fn maybe<T: std::str::FromStr>(s: &str, row: usize) -> std::result::Result<Option<T>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s, row).map(Some)
            }
        }
        let line = i + 2;
        out.push(TrialRecord {
            n: num(field(0), line)?,
            m: num(field(1), line)?,
            seed: num(field(2), line)?,
            trial: num(field(3), line)?,
            path_changes: num(field(4), line)?,
            max_degree: num(field(5), line)?,
            pivots: num(field(6), line)?,
            contractions: maybe(field(7), line)?,
            time_parametric_ns: num(field(8), line)?,
            time_karp_ns: maybe(field(9), line)?,
        });
    }
    Ok(out)
}

/// Per-point averages.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub mean_path_changes_per_vertex: f64,
    pub mean_time_parametric_ns: f64,
    pub mean_time_karp_ns: Option<f64>,
    pub mean_contractions_per_vertex: Option<f64>,
}

pub fn summarize(records: &[TrialRecord]) -> Vec<PointSummary> {
    let mut points: Vec<(usize, usize)> = Vec::new();
    for r in records {
        if !points.contains(&(r.n, r.m)) {
            points.push((r.n, r.m));
        }
    }
    points
        .into_iter()
        .map(|(n, m)| {
            let rs: Vec<&TrialRecord> = records.iter().filter(|r| (r.n, r.m) == (n, m)).collect();
            let k = rs.len() as f64;
            let mean = |f: &dyn Fn(&TrialRecord) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / k;
            let all_some = |f: &dyn Fn(&TrialRecord) -> Option<f64>| -> Option<f64> {
                let v: Option<Vec<f64>> = rs.iter().map(|r| f(r)).collect();
                v.map(|v| v.iter().sum::<f64>() / k)
            };
            PointSummary {
                n,
                m,
                trials: rs.len(),
                mean_path_changes_per_vertex: mean(&|r| r.path_changes as f64 / n as f64),
                mean_time_parametric_ns: mean(&|r| r.time_parametric_ns as f64),
                mean_time_karp_ns: all_some(&|r| r.time_karp_ns.map(|t| t as f64)),
                mean_contractions_per_vertex: all_some(&|r| r.contractions.map(|c| c as f64 / n as f64)),
            }
        })
        .collect()
}
