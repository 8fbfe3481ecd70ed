//! Runtime scaling measurements behind `netsparse bench`.

use std::time::Instant;

use netsparse::graph::generate_random_connected;
use netsparse::multilevel::{ml_sparsify_on, Preset};
use netsparse::sparsify::sparsify_binned;
use netsparse::{
    compute_algdist, AlgDistParams, EdgeScores, Graph, Hierarchy, LevelConfig, Mode,
    MultilevelParams, SparsifyPlan,
};
use serde::Serialize;

use crate::args::{BenchAlgorithm, BenchArgs};
use crate::{CliError, CliResult};

pub const CSV_HEADER: [&str; 8] = ["record", "algorithm", "threads", "m", "seconds", "slope", "intercept", "r2"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LinearFit { slope, intercept, r2 }
}

/// `points` edge counts spaced geometrically from `min` to `max`.
pub fn edge_counts(min: usize, max: usize, points: usize) -> Vec<usize> {
    if points <= 1 || min == max {
        return vec![max];
    }
    let ratio = (max as f64 / min as f64).powf(1.0 / (points - 1) as f64);
    (0..points).map(|k| (min as f64 * ratio.powi(k as i32)).round() as usize).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Sparsify,
    MlSparsify,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sparsify => "sparsify",
            Algorithm::MlSparsify => "ml-sparsify",
        }
    }
}

/// Scores with defaults and applies binned sparsification at `e = 0.5`.
pub fn run_sparsify(g: &Graph, seed: u64) -> CliResult<Graph> {
    let scores = compute_algdist(g, &AlgDistParams::default().with_seed(seed))?;
    let plan = SparsifyPlan { seed, ..SparsifyPlan::new(0.5, Mode::Mixture) };
    Ok(sparsify_binned(g, &scores, &plan)?)
}

/// Builds the hierarchy and sparsifies the finest three levels at `e = 0.5`.
pub fn run_ml_sparsify(g: &Graph, seed: u64) -> CliResult<Graph> {
    let params = MultilevelParams {
        algdist: AlgDistParams::default().with_seed(seed),
        seed,
        ..Default::default()
    };
    let h = Hierarchy::build(g, &params.algdist, &params.coarsening)?;
    let cfg = LevelConfig::preset(h.depth(), Preset::Finest, 3, 0.5)?;
    Ok(ml_sparsify_on(&h, &cfg, &params)?.sparse)
}

/// Best of several runs, fewer for larger graphs.
fn time_best(m: usize, mut f: impl FnMut() -> CliResult<()>) -> CliResult<f64> {
    let runs = (200_000 / m.max(1)).clamp(1, 5);
    let mut best = f64::INFINITY;
    for _ in 0..runs {
        let start = Instant::now();
        f()?;
        best = best.min(start.elapsed().as_secs_f64());
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub algorithm: &'static str,
    pub threads: usize,
    pub m: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreadSample {
    pub threads: usize,
    pub m: usize,
    pub seconds: f64,
    /// Algebraic distances bitwise equal to the first thread count's.
    pub identical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub samples: Vec<Sample>,
    pub fits: Vec<(&'static str, LinearFit)>,
    pub threads: Vec<ThreadSample>,
}

pub fn generate(m: usize, density: usize, seed: u64) -> CliResult<Graph> {
    let n = (m / density.max(1)).max(2);
    Ok(generate_random_connected(n, m, seed)?)
}

/// Times each algorithm on generated graphs of increasing size.
pub fn measure_scaling(sizes: &[usize], density: usize, algorithms: &[Algorithm], seed: u64) -> CliResult<ScalingReport> {
    let threads = rayon::current_num_threads();
    let mut samples = Vec::new();
    for &m in sizes {
        let g = generate(m, density, seed)?;
        for &alg in algorithms {
            let seconds = time_best(g.m(), || {
                match alg {
                    Algorithm::Sparsify => run_sparsify(&g, seed)?,
                    Algorithm::MlSparsify => run_ml_sparsify(&g, seed)?,
                };
                Ok(())
            })?;
            samples.push(Sample { algorithm: alg.name(), threads, m: g.m(), seconds });
        }
    }
    let fits = algorithms
        .iter()
        .map(|alg| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = samples
                .iter()
                .filter(|s| s.algorithm == alg.name())
                .map(|s| (s.m as f64, s.seconds))
                .unzip();
            (alg.name(), linear_fit(&xs, &ys))
        })
        .collect();
    Ok(ScalingReport { samples, fits, threads: Vec::new() })
}

/// Times `compute_algdist` on `g` under each worker count.
pub fn measure_threads(g: &Graph, counts: &[usize], seed: u64) -> CliResult<Vec<ThreadSample>> {
    let params = AlgDistParams::default().with_seed(seed);
    let mut reference: Option<EdgeScores> = None;
    let mut out = Vec::new();
    for &t in counts {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Runtime(format!("cannot start worker pool: {e}")))?;
        let start = Instant::now();
        let scores = pool.install(|| compute_algdist(g, &params))?;
        let seconds = start.elapsed().as_secs_f64();
        let identical = reference.as_ref().is_none_or(|r| *r == scores);
        reference.get_or_insert(scores);
        out.push(ThreadSample { threads: t, m: g.m(), seconds, identical });
    }
    Ok(out)
}

fn parse_counts(text: &str) -> CliResult<Vec<usize>> {
    let counts = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&c| c > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::Usage(format!("bad thread list {text:?}")))?;
    if counts.is_empty() {
        return Err(CliError::Usage("empty thread list".into()));
    }
    Ok(counts)
}

pub fn write_csv<W: std::io::Write>(report: &ScalingReport, sink: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for s in &report.samples {
        w.write_record([
            "sample",
            s.algorithm,
            &s.threads.to_string(),
            &s.m.to_string(),
            &s.seconds.to_string(),
            "",
            "",
            "",
        ])?;
    }
    for (alg, fit) in &report.fits {
        w.write_record([
            "fit",
            alg,
            "",
            "",
            "",
            &fit.slope.to_string(),
            &fit.intercept.to_string(),
            &fit.r2.to_string(),
        ])?;
    }
    for t in &report.threads {
        w.write_record([
            "threads",
            "algdist",
            &t.threads.to_string(),
            &t.m.to_string(),
            &t.seconds.to_string(),
            "",
            "",
            "",
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(a: BenchArgs) -> CliResult<()> {
    if a.min_edges == 0 || a.min_edges > a.max_edges || a.points == 0 || a.density == 0 {
        return Err(CliError::Usage(
            "need 0 < min-edges <= max-edges, points >= 1 and density >= 1".into(),
        ));
    }
    let sweep = a.threads_sweep.as_deref().map(parse_counts).transpose()?;
    let algorithms = match a.algorithm {
        BenchAlgorithm::Sparsify => vec![Algorithm::Sparsify],
        BenchAlgorithm::MlSparsify => vec![Algorithm::MlSparsify],
        BenchAlgorithm::Both => vec![Algorithm::Sparsify, Algorithm::MlSparsify],
    };
    let sizes = edge_counts(a.min_edges, a.max_edges, a.points);
    let mut report = measure_scaling(&sizes, a.density, &algorithms, a.seed)?;
    if let Some(counts) = sweep {
        let g = generate(a.max_edges, a.density, a.seed)?;
        report.threads = measure_threads(&g, &counts, a.seed)?;
        let base = report.threads[0].seconds;
        for t in &report.threads {
            eprintln!(
                "algdist threads={} {:.3}s speedup {:.2}x identical={}",
                t.threads,
                t.seconds,
                base / t.seconds,
                t.identical
            );
        }
    }
    for (alg, fit) in &report.fits {
        eprintln!("{alg}: seconds = {:.3e} * m + {:.3e}, R^2 = {:.4}", fit.slope, fit.intercept, fit.r2);
    }
    match &a.csv {
        Some(path) => write_csv(&report, std::fs::File::create(path)?),
        None => write_csv(&report, std::io::stdout().lock()),
    }
}
