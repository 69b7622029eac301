//! Complete-graph sweeps and polynomial least-squares fits.

use std::fmt::Write;
use std::ops::RangeInclusive;
use std::time::Instant;

use cfpq_core::{Grammar, Graph, ParseTable, Query};
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub grammar: String,
    pub time_ms: f64,
    pub sppf_nodes: usize,
    pub gss_nodes: usize,
    pub descriptors: usize,
}

pub const CSV_HEADER: &str = "n,grammar,time_ms,sppf_nodes,gss_nodes,descriptors";

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(out, "{},{},{:.3},{},{},{}", r.n, r.grammar, r.time_ms, r.sppf_nodes, r.gss_nodes, r.descriptors)
            .unwrap();
    }
    out
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("size range is empty")]
    EmptyRange,
    #[error("sizes must be written as A..B, got `{0}`")]
    BadRange(String),
    #[error("grammar has no terminals to label edges with")]
    NoTerminals,
    #[error("repeats must be at least 1")]
    NoRepeats,
}

/// Parses `A..B` (inclusive) or a single size.
pub fn parse_sizes(text: &str) -> Result<RangeInclusive<usize>, BenchError> {
    let bad = || BenchError::BadRange(text.to_string());
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (text, text),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b || b == 0 {
        return Err(BenchError::EmptyRange);
    }
    Ok(a.max(1)..=b)
}

/// Times every size `repeats` times with all vertices as starts and finals
/// and keeps the median. Edges carry every terminal of the grammar.
///
/// Sizes are timed in rounds (every size once per round, after one untimed
/// round) so that slow drift in machine speed hits all sizes alike.
pub fn sweep(
    name: &str,
    grammar: &Grammar,
    sizes: RangeInclusive<usize>,
    with_loops: bool,
    repeats: usize,
) -> Result<Vec<BenchRecord>, BenchError> {
    if sizes.is_empty() {
        return Err(BenchError::EmptyRange);
    }
    if repeats == 0 {
        return Err(BenchError::NoRepeats);
    }
    if grammar.terminals().is_empty() {
        return Err(BenchError::NoTerminals);
    }
    let table = ParseTable::build(grammar);
    let graphs = sizes
        .map(|n| Graph::complete(n, grammar.terminals(), with_loops).map(|g| (n, g)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| BenchError::NoTerminals)?;
    let mut times = vec![Vec::with_capacity(repeats); graphs.len()];
    let mut out: Vec<BenchRecord> = Vec::with_capacity(graphs.len());
    for round in 0..=repeats {
        for (i, (n, graph)) in graphs.iter().enumerate() {
            let start = Instant::now();
            let r = Query::new(graph, grammar).table(&table).run();
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            if round == 0 {
                out.push(BenchRecord {
                    n: *n,
                    grammar: name.to_string(),
                    time_ms: 0.0,
                    sppf_nodes: r.sppf().len(),
                    gss_nodes: r.gss().len(),
                    descriptors: r.engine_stats().descriptors,
                });
            } else {
                times[i].push(elapsed);
            }
        }
    }
    for (rec, t) in out.iter_mut().zip(&mut times) {
        rec.time_ms = median(t);
    }
    Ok(out)
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// `y ≈ Σ coefficients[i] · x^powers[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFit {
    pub powers: Vec<u32>,
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.powers.iter().zip(&self.coefficients).map(|(&p, c)| c * x.powi(p as i32)).sum()
    }

    /// Coefficient of the highest power.
    pub fn leading(&self) -> f64 {
        let i = (0..self.powers.len()).max_by_key(|&i| self.powers[i]).expect("fit has terms");
        self.coefficients[i]
    }
}

impl std::fmt::Display for PolyFit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("f(x) =")?;
        for (i, (&p, &c)) in self.powers.iter().zip(&self.coefficients).enumerate() {
            match (i, c < 0.0) {
                (0, _) => write!(f, " {c:.6}*x^{p}")?,
                (_, true) => write!(f, " - {:.6}*x^{p}", -c)?,
                (_, false) => write!(f, " + {c:.6}*x^{p}")?,
            }
        }
        write!(f, "; R^2 = {:.6}", self.r_squared)
    }
}

/// Ordinary least squares on the basis `x^p` for each `p` in `powers`.
/// `R² = 1 − SS_res / SS_tot`, with `SS_tot` taken around the mean.
pub fn fit(xs: &[f64], ys: &[f64], powers: &[u32]) -> Option<PolyFit> {
    if xs.len() != ys.len() || xs.len() < powers.len() || powers.is_empty() {
        return None;
    }
    let a = DMatrix::from_fn(xs.len(), powers.len(), |i, j| xs[i].powi(powers[j] as i32));
    let b = DVector::from_column_slice(ys);
    let coef = a.clone().svd(true, true).solve(&b, 1e-12).ok()?;
    let residual = &a * &coef - &b;
    let ss_res = residual.norm_squared();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { if ss_res == 0.0 { 1.0 } else { 0.0 } } else { 1.0 - ss_res / ss_tot };
    Some(PolyFit { powers: powers.to_vec(), coefficients: coef.iter().copied().collect(), r_squared })
}

pub const NODE_POWERS: [u32; 3] = [3, 2, 1];
pub const TIME_POWERS: [u32; 4] = [4, 3, 2, 1];

pub fn fit_nodes(records: &[BenchRecord]) -> Option<PolyFit> {
    let xs: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.sppf_nodes as f64).collect();
    fit(&xs, &ys, &NODE_POWERS)
}

pub fn fit_time(records: &[BenchRecord]) -> Option<PolyFit> {
    let xs: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.time_ms).collect();
    fit(&xs, &ys, &TIME_POWERS)
}
