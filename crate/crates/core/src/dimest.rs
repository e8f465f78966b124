//! Monte Carlo estimation of information dimension.
//!
//! The dimension is the growth rate of `H(floor(k X) / k)` against `log2 k`.
//! We sample the self-similar law, compute plug-in entropies of the
//! quantised samples on a grid of resolutions and fit a least-squares slope.
//! Grids made of powers of `1/r` keep the log-periodic oscillation of
//! self-similar measures out of the fit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{hochman_dimension, sample, IfsSpec};
use crate::info::entropy_from_counts;

/// Plug-in entropy (bits) of `{floor(k x)}`, optionally with the
/// Miller-Madow bias correction `(occupied - 1) / (2 n ln 2)`.
pub fn quantized_entropy(samples: &[f64], k: u64, miller_madow: bool) -> Result<f64> {
    Ok(quantized_entropy_detail(samples, k, miller_madow)?.0)
}

/// Entropy and number of occupied cells.
fn quantized_entropy_detail(samples: &[f64], k: u64, miller_madow: bool) -> Result<(f64, usize)> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("quantisation level k must be positive".into()));
    }
    let kf = k as f64;
    let mut cells: Vec<i64> = samples.par_iter().map(|&x| (kf * x).floor() as i64).collect();
    cells.par_sort_unstable();
    let mut counts = Vec::new();
    let mut run = 1u64;
    for w in cells.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            counts.push(run);
            run = 1;
        }
    }
    counts.push(run);
    let occupied = counts.len();
    let mut h = entropy_from_counts(counts);
    if miller_madow {
        h += (occupied as f64 - 1.0) / (2.0 * samples.len() as f64 * std::f64::consts::LN_2);
    }
    Ok((h, occupied))
}

/// Resolutions `base^j` with `kmin <= base^j <= kmax`.
pub fn power_grid(base: u64, kmin: u64, kmax: u64) -> Vec<u64> {
    assert!(base >= 2);
    let mut out = Vec::new();
    let mut k = 1u64;
    while k <= kmax {
        if k >= kmin {
            out.push(k);
        }
        match k.checked_mul(base) {
            Some(next) => k = next,
            None => break,
        }
    }
    out
}

/// Grid aligned with the contraction: powers of `1/r` when that is an
/// integer, powers of two otherwise.
pub fn aligned_grid(spec: &IfsSpec, kmin: u64, kmax: u64) -> Vec<u64> {
    let inv = 1.0 / spec.ratio();
    let base = if (inv - inv.round()).abs() < 1e-9 && inv.round() >= 2.0 {
        inv.round() as u64
    } else {
        2
    };
    power_grid(base, kmin.max(2), kmax)
}

/// Smallest depth `m` with `r^m <= 1 / (2 kmax)`.
pub fn required_depth(spec: &IfsSpec, kmax: u64) -> u32 {
    let m = ((2.0 * kmax as f64).ln() / -spec.ratio().ln()).ceil();
    let mut m = m.max(1.0) as u32;
    // guard against rounding in the logarithms
    while spec.ratio().powi(m as i32) > 1.0 / (2.0 * kmax as f64) {
        m += 1;
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionConfig {
    pub k_grid: Vec<u64>,
    pub samples: usize,
    /// Series truncation depth; `None` picks [`required_depth`] plus a margin.
    pub depth: Option<u32>,
    pub seed: u64,
    pub miller_madow: bool,
}

impl DimensionConfig {
    pub fn new(k_grid: Vec<u64>, samples: usize, seed: u64) -> Self {
        DimensionConfig {
            k_grid,
            samples,
            depth: None,
            seed,
            miller_madow: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    #[serde(skip)]
    spec: Option<IfsSpec>,
    pub k_grid: Vec<u64>,
    /// Estimated `H(<X>_k)` in bits, per grid point.
    pub entropies: Vec<f64>,
    /// `H(<X>_k) / log2 k`, per grid point.
    pub pointwise: Vec<f64>,
    pub occupied_cells: Vec<usize>,
    /// Least-squares slope of entropy against `log2 k`.
    pub slope: f64,
    pub intercept: f64,
    /// Minimum and maximum pointwise ratio over the grid: crude proxies for
    /// the lower and upper dimension, not estimates of them.
    pub lower_proxy: f64,
    pub upper_proxy: f64,
    pub sample_count: usize,
    pub depth: u32,
    pub seed: u64,
    pub miller_madow: bool,
    /// Some resolution occupied more than `n / 10` cells.
    pub undersampled: bool,
}

impl DimensionEstimate {
    pub fn spec(&self) -> Option<&IfsSpec> {
        self.spec.as_ref()
    }
}

pub fn estimate_dimension(spec: &IfsSpec, config: &DimensionConfig) -> Result<DimensionEstimate> {
    if config.k_grid.len() < 2 {
        return Err(Error::InvalidArgument("the k grid needs at least two resolutions".into()));
    }
    if let Some(&bad) = config.k_grid.iter().find(|&&k| k < 2) {
        return Err(Error::InvalidArgument(format!("resolution k = {bad} is below 2")));
    }
    if config.samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let kmax = *config.k_grid.iter().max().unwrap();
    let needed = required_depth(spec, kmax);
    let depth = match config.depth {
        Some(d) if d < needed => {
            return Err(Error::InvalidArgument(format!(
                "depth {d} is too shallow for k = {kmax}: r^m <= 1/(2k) needs depth >= {needed}"
            )))
        }
        Some(d) => d,
        None => needed + 4,
    };
    let xs = sample(spec, depth, config.samples, config.seed)?;

    let mut entropies = Vec::with_capacity(config.k_grid.len());
    let mut occupied_cells = Vec::with_capacity(config.k_grid.len());
    for &k in &config.k_grid {
        let (h, occ) = quantized_entropy_detail(&xs, k, config.miller_madow)?;
        entropies.push(h);
        occupied_cells.push(occ);
    }
    let logs: Vec<f64> = config.k_grid.iter().map(|&k| (k as f64).log2()).collect();
    let pointwise: Vec<f64> = entropies.iter().zip(&logs).map(|(h, l)| h / l).collect();
    let (slope, intercept) = least_squares(&logs, &entropies);
    Ok(DimensionEstimate {
        spec: Some(spec.clone()),
        k_grid: config.k_grid.clone(),
        lower_proxy: pointwise.iter().copied().fold(f64::INFINITY, f64::min),
        upper_proxy: pointwise.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        entropies,
        pointwise,
        undersampled: occupied_cells.iter().any(|&c| c > config.samples / 10),
        occupied_cells,
        slope,
        intercept,
        sample_count: config.samples,
        depth,
        seed: config.seed,
        miller_madow: config.miller_madow,
    })
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaComparison {
    pub formula: f64,
    pub empirical: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub agrees: bool,
}

/// Pairs the closed-form dimension with the fitted slope of an estimate that
/// was produced for the same spec.
pub fn compare_with_formula(spec: &IfsSpec, estimate: &DimensionEstimate, tolerance: f64) -> Result<FormulaComparison> {
    if estimate.spec.as_ref() != Some(spec) {
        return Err(Error::SpecMismatch);
    }
    let formula = hochman_dimension(spec);
    let abs_error = (formula - estimate.slope).abs();
    Ok(FormulaComparison {
        formula,
        empirical: estimate.slope,
        abs_error,
        tolerance,
        agrees: abs_error <= tolerance,
    })
}
