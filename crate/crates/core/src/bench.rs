//! Benchmark sweeps over generated instances.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{generate, Family, GenParams};
use crate::mec::{classical_mec, gamma_for_epsilon, symbolic_mec, MecDecomposition};
use crate::symbolic::{Backend, SymbolicMdp};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    pub epsilons: Vec<f64>,
    pub seeds: Vec<u64>,
    pub avg_degree: f64,
    pub random_fraction: f64,
    pub backend: Backend,
    pub wall_time: bool,
}

/// One measured run: an instance, an algorithm and (for the separator
/// algorithm) its parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub algo: &'static str,
    pub epsilon: f64,
    pub gamma: Option<usize>,
    pub pre: u64,
    pub post: u64,
    pub basic_set: u64,
    pub pick: u64,
    pub cardinality: u64,
    pub total_ops: u64,
    pub peak_live_sets: u64,
    pub recursion_depth: usize,
    pub mec_count: usize,
    pub wall_time_ms: Option<f64>,
}

/// Runs every (family, n, seed, ε) instance with the separator algorithm
/// and the classical baseline. The two decompositions must agree.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &family in &cfg.families {
        for &n in &cfg.sizes {
            for &seed in &cfg.seeds {
                let mut params = GenParams::new(family, n, seed);
                params.avg_degree = cfg.avg_degree;
                params.random_fraction = cfg.random_fraction;
                let g = generate(&params)?;
                for &epsilon in &cfg.epsilons {
                    let gamma = gamma_for_epsilon(n, epsilon);
                    let (sep, sep_mecs) = measure(cfg, &g, Some(gamma), |p| symbolic_mec(p, gamma))?;
                    let (cl, cl_mecs) = measure(cfg, &g, None, classical_mec)?;
                    if sep_mecs != cl_mecs {
                        return Err(Error::Invariant(format!(
                            "separator and classical decompositions differ on {family} n={n} seed={seed}"
                        )));
                    }
                    for (algo, row) in [("separator", sep), ("classical", cl)] {
                        rows.push(BenchRow {
                            family,
                            n,
                            m: g.m(),
                            seed,
                            algo,
                            epsilon,
                            ..row
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn measure(
    cfg: &BenchConfig,
    g: &crate::explicit::ExplicitMdp,
    gamma: Option<usize>,
    run: impl FnOnce(&SymbolicMdp) -> Result<(MecDecomposition, crate::mec::MecStats)>,
) -> Result<(BenchRow, MecDecomposition)> {
    let p = SymbolicMdp::from_explicit(g, cfg.backend)?;
    let u = p.universe().clone();
    u.meter_reset();
    let start = Instant::now();
    let (d, stats) = run(&p)?;
    let elapsed = start.elapsed();
    let meter = u.meter_snapshot();
    let row = BenchRow {
        family: Family::Uniform,
        n: 0,
        m: 0,
        seed: 0,
        algo: "",
        epsilon: 0.0,
        gamma,
        pre: meter.pre,
        post: meter.post,
        basic_set: meter.basic_set,
        pick: meter.pick,
        cardinality: meter.cardinality,
        total_ops: meter.total_ops(),
        peak_live_sets: meter.peak_live_sets,
        recursion_depth: stats.max_depth,
        mec_count: stats.mec_count,
        wall_time_ms: cfg.wall_time.then_some(elapsed.as_secs_f64() * 1e3),
    };
    Ok((row, d))
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(rows: &[BenchRow], mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_count_is_the_product() {
        let cfg = BenchConfig {
            families: vec![Family::Uniform],
            sizes: vec![16, 24, 32],
            epsilons: vec![0.25, 0.5],
            seeds: vec![1, 2],
            avg_degree: 2.0,
            random_fraction: 0.3,
            backend: Backend::BitVector,
            wall_time: false,
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 24);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&rows, &mut a).unwrap();
        write_csv(&run_bench(&cfg).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a)
            .unwrap()
            .starts_with("family,n,m,seed,algo,epsilon,gamma,"));
    }

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(1.5)))
            .collect();
        assert!((loglog_slope(&pts) - 1.5).abs() < 1e-9);
    }
}
