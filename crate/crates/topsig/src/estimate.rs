use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{
    normalized_functional, EvaluationGrid, FunctionalCurve, KernelSpec, TruncationSpec,
};
use crate::series::TimeSeries;
use crate::simulate::{Seed, TAG_BOOTSTRAP};
use crate::{diagram, simulate};

/// Sliding-window extraction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    pub window_len: usize,
    pub stride: usize,
}

impl WindowConfig {
    pub fn new(window_len: usize) -> Self {
        WindowConfig { window_len, stride: 1 }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    fn validate(&self, series_len: usize) -> Result<()> {
        if self.window_len < 2 {
            return Err(Error::invalid("window length must be at least 2"));
        }
        if self.window_len > series_len {
            return Err(Error::invalid(format!(
                "window length {} exceeds series length {series_len}",
                self.window_len
            )));
        }
        if self.stride == 0 {
            return Err(Error::invalid("stride must be positive"));
        }
        Ok(())
    }
}

/// Overlapping windows (S_n, ..., S_{n+M-1}) at the configured stride,
/// preserving dt.
pub fn windows(series: &TimeSeries, cfg: WindowConfig) -> Result<Vec<TimeSeries>> {
    cfg.validate(series.len())?;
    let count = (series.len() - cfg.window_len) / cfg.stride + 1;
    (0..count)
        .map(|i| series.window(i * cfg.stride, cfg.window_len))
        .collect()
}

/// Normalized-functional curve of every window; the expensive half of the
/// pipeline, parallel over windows and bit-reproducible regardless of the
/// worker count.
pub fn window_curves(
    series: &TimeSeries,
    wcfg: WindowConfig,
    spec: TruncationSpec,
    kernel: &KernelSpec,
    grid: &EvaluationGrid,
) -> Result<Vec<FunctionalCurve>> {
    let wins = windows(series, wcfg)?;
    Ok(wins
        .par_iter()
        .map(|w| {
            let d = diagram::sublevel_diagram(w);
            normalized_functional(&d, spec, kernel, grid)
        })
        .collect())
}

/// Node-wise mean curve, summed in fixed index order.
fn mean_curve(curves: &[FunctionalCurve], indices: &[usize]) -> FunctionalCurve {
    debug_assert!(!indices.is_empty());
    let mut acc = FunctionalCurve::zeros(curves[0].grid.clone());
    for &i in indices {
        for (a, v) in acc.values.iter_mut().zip(&curves[i].values) {
            *a += v;
        }
    }
    let scale = 1.0 / indices.len() as f64;
    for a in &mut acc.values {
        *a *= scale;
    }
    acc
}

/// Empirical signature: the mean of the normalized functionals over all
/// windows.
pub fn empirical_signature(
    series: &TimeSeries,
    wcfg: WindowConfig,
    spec: TruncationSpec,
    kernel: &KernelSpec,
    grid: &EvaluationGrid,
) -> Result<FunctionalCurve> {
    let curves = window_curves(series, wcfg, spec, kernel, grid)?;
    let all: Vec<usize> = (0..curves.len()).collect();
    Ok(mean_curve(&curves, &all))
}

/// Kind of confidence band attached to a signature estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandKind {
    Pointwise,
    Uniform,
}

/// Moving-block-bootstrap parameters. `level` is the two-sided alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub block_len: usize,
    pub level: f64,
    pub seed: Seed,
    pub band_kind: BandKind,
}

impl BootstrapConfig {
    fn validate(&self, num_windows: usize) -> Result<()> {
        if self.replicates < 2 {
            return Err(Error::invalid("need at least 2 bootstrap replicates"));
        }
        if self.block_len == 0 || self.block_len > num_windows {
            return Err(Error::invalid(format!(
                "block length must lie in 1..={num_windows}, got {}",
                self.block_len
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::invalid(format!(
                "band level must lie in (0, 1), got {}",
                self.level
            )));
        }
        Ok(())
    }
}

/// Default block length: the largest integer at most num_windows^(2/5),
/// which grows without bound yet stays well under the square root.
pub fn default_block_len(num_windows: usize) -> usize {
    // Exact integer part of num_windows^(2/5): the largest k with
    // k^5 <= num_windows^2, found without float rounding.
    let target = (num_windows as u128).pow(2);
    let mut k: u128 = 1;
    while (k + 1).pow(5) <= target {
        k += 1;
    }
    (k as usize).max(1)
}

/// The window indices of one moving-block-bootstrap replicate.
///
/// Draws ceil(num_windows / L) block starts uniformly from the positions
/// where a full block of L consecutive window indices fits, concatenates
/// the blocks and truncates the concatenation to num_windows indices.
/// Deterministic given (cfg.seed, replicate_index), independent of
/// scheduling order.
pub fn mbb_indices(num_windows: usize, cfg: &BootstrapConfig, replicate_index: u64) -> Vec<usize> {
    let n = num_windows;
    let l = cfg.block_len.min(n);
    let max_start = n - l;
    let blocks = n.div_ceil(l);
    let mut rng = simulate::stream(cfg.seed, TAG_BOOTSTRAP, replicate_index);

    let mut indices = Vec::with_capacity(blocks * l);
    for _ in 0..blocks {
        let start = if max_start == 0 { 0 } else { rng.random_range(0..=max_start) };
        for k in 0..l {
            indices.push(start + k);
        }
    }
    indices.truncate(n);
    indices
}

/// One moving-block-bootstrap replicate: the mean curve over the
/// replicate's window indices.
pub fn mbb_resample(
    window_curves: &[FunctionalCurve],
    cfg: &BootstrapConfig,
    replicate_index: u64,
) -> FunctionalCurve {
    let indices = mbb_indices(window_curves.len(), cfg, replicate_index);
    mean_curve(window_curves, &indices)
}

/// Signature estimate: the empirical mean curve and its bootstrap band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureEstimate {
    pub grid: EvaluationGrid,
    pub mean: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
    pub band_kind: BandKind,
    pub replicates: usize,
}

impl SignatureEstimate {
    pub fn mean_curve(&self) -> FunctionalCurve {
        FunctionalCurve { grid: self.grid.clone(), values: self.mean.clone() }
    }

    /// CSV export `t,mean,lower,upper` (1d grids).
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,mean,lower,upper")?;
        for i in 0..self.mean.len() {
            let node = self.grid.node(i);
            let t = if node.len() == 1 {
                format!("{}", node[0])
            } else {
                format!("{};{}", node[0], node[1])
            };
            writeln!(out, "{},{},{},{}", t, self.mean[i], self.lower[i], self.upper[i])?;
        }
        Ok(())
    }
}

/// Order-statistic quantile: the ceil(q * B)-th smallest of B values.
fn empirical_quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let b = sorted.len();
    let rank = (q * b as f64).ceil() as usize;
    sorted[rank.clamp(1, b) - 1]
}

/// Full estimation pipeline: window curves are computed once, replicates
/// resample cached indices only, bands come from replicate quantiles.
///
/// Pointwise bands are node-wise alpha/2 and 1 - alpha/2 quantiles of the
/// replicate curves; uniform bands are mean +- the (1 - alpha)-quantile
/// of the sup-node deviation |replicate - mean|.
pub fn bootstrap_bands(
    series: &TimeSeries,
    wcfg: WindowConfig,
    spec: TruncationSpec,
    kernel: &KernelSpec,
    grid: &EvaluationGrid,
    bcfg: &BootstrapConfig,
) -> Result<SignatureEstimate> {
    let curves = window_curves(series, wcfg, spec, kernel, grid)?;
    bcfg.validate(curves.len())?;

    let all: Vec<usize> = (0..curves.len()).collect();
    let mean = mean_curve(&curves, &all);

    let replicates: Vec<FunctionalCurve> = (0..bcfg.replicates as u64)
        .into_par_iter()
        .map(|i| mbb_resample(&curves, bcfg, i))
        .collect();

    let nodes = mean.values.len();
    let alpha = bcfg.level;
    let (lower, upper) = match bcfg.band_kind {
        BandKind::Pointwise => {
            let mut lower = vec![0.0; nodes];
            let mut upper = vec![0.0; nodes];
            let mut column = vec![0.0; replicates.len()];
            for i in 0..nodes {
                for (r, c) in replicates.iter().zip(column.iter_mut()) {
                    *c = r.values[i];
                }
                column.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                lower[i] = empirical_quantile(&column, alpha / 2.0);
                upper[i] = empirical_quantile(&column, 1.0 - alpha / 2.0);
            }
            (lower, upper)
        }
        BandKind::Uniform => {
            let mut sups: Vec<f64> = replicates.iter().map(|r| r.sup_distance(&mean)).collect();
            sups.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let q = empirical_quantile(&sups, 1.0 - alpha);
            (
                mean.values.iter().map(|v| v - q).collect(),
                mean.values.iter().map(|v| v + q).collect(),
            )
        }
    };

    Ok(SignatureEstimate {
        grid: grid.clone(),
        mean: mean.values,
        lower,
        upper,
        level: alpha,
        band_kind: bcfg.band_kind,
        replicates: bcfg.replicates,
    })
}
