//! Monte Carlo estimators for section volumes.
//!
//! Two representations are implemented, both averaging a determinant
//! functional over i.i.d. standard exponential weights `Y₁,…,Yₙ`:
//!
//! * **codimension form**, fed by an orthonormal basis `u₁,…,u_k` of `H⊥`
//!   (`k = n − dim H`):
//!
//!   ```text
//!   vol = 2^{n−k} / ((n−k)! π^{k/2}) · Πaⱼ · E[ det(Σⱼ aⱼ² Yⱼ vⱼvⱼᵀ)^{−1/2} ]
//!   ```
//!
//! * **dimension form**, fed by any spanning basis of `H` (`k = dim H`):
//!
//!   ```text
//!   vol = 2ᵏ / (k! π^{(n−k)/2}) · √det(Σᵢ vᵢvᵢᵀ)
//!         · E[ (Πᵢ Yᵢ)^{−1/2} det(Σᵢ (Yᵢ aᵢ²)⁻¹ vᵢvᵢᵀ)^{−1/2} ]
//!   ```
//!
//! Samples are split into contiguous batches; batch means give the standard
//! error. Sample `i` always draws from substream `i` of the master seed, so
//! results are independent of the worker count and estimates at different
//! dilations share their random numbers.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{cholesky_logdet, gauss_legendre, SymMatrix};
use crate::rng::{Domain, StreamFamily, Substream};
use crate::section::{
    codim_profile, dim_profile, to_dilation, ColumnProfile, DilationVector, LogDilation, ProfileMode, SubspaceSpec,
};

/// How batch means are combined into a point estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    #[default]
    Mean,
    /// Median of the batch means; robust when the integrand is heavy tailed.
    MedianOfMeans,
}

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MCConfig {
    samples: u64,
    batches: u64,
    seed: u64,
    aggregation: Aggregation,
}

impl MCConfig {
    /// Requires `samples ≥ batches ≥ 2` and `batches` dividing `samples`.
    pub fn new(samples: u64, batches: u64, seed: u64) -> Result<Self> {
        if batches < 2 {
            return Err(Error::InvalidConfig(format!("need at least 2 batches, got {batches}")));
        }
        if samples < batches || !samples.is_multiple_of(batches) {
            return Err(Error::InvalidConfig(format!("{batches} batches must divide {samples} samples")));
        }
        Ok(Self { samples, batches, seed, aggregation: Aggregation::Mean })
    }

    pub fn with_aggregation(mut self, aggregation: Aggregation) -> Self {
        self.aggregation = aggregation;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn batches(&self) -> u64 {
        self.batches
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }

    pub fn batch_size(&self) -> u64 {
        self.samples / self.batches
    }
}

/// Which routine produced a [`VolumeEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Codim,
    Dim,
    OracleK1,
    OracleK2,
    OracleMc,
    ClosedForm,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Codim => "codim",
            Method::Dim => "dim",
            Method::OracleK1 => "oracle_k1",
            Method::OracleK2 => "oracle_k2",
            Method::OracleMc => "oracle_mc",
            Method::ClosedForm => "closed_form",
        }
    }
}

/// A volume with its standard error. Exact routines report `stderr = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub method: Method,
    /// Samples whose matrix was numerically singular (counted as zero).
    pub singular: u64,
    /// Set when the largest 0.1% of samples carry more than 20% of the sum,
    /// in which case `stderr` is unreliable.
    pub heavy_tail: bool,
}

impl VolumeEstimate {
    pub fn exact(value: f64, method: Method) -> Self {
        Self { value, stderr: 0.0, samples: 0, method, singular: 0, heavy_tail: false }
    }
}

/// Fraction of the samples inspected by the heavy-tail check.
const TAIL_FRACTION: f64 = 1e-3;
/// Share of the total mass above which the top samples flag a heavy tail.
const TAIL_MASS: f64 = 0.2;

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

/// Per-sample evaluator of one representation at one dilation.
#[derive(Debug, Clone)]
pub struct SampleKernel<'a> {
    profile: &'a ColumnProfile,
    /// `aⱼ²` (codim) or `aⱼ⁻²` (dim).
    weights: Vec<f64>,
    /// Log of every factor that does not depend on the draws.
    log_const: f64,
}

impl<'a> SampleKernel<'a> {
    pub fn new(profile: &'a ColumnProfile, a: &DilationVector) -> Result<Self> {
        let n = profile.n();
        let k = profile.k();
        if a.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.len() });
        }
        if k == 0 {
            return Err(Error::Empty("column profile"));
        }
        let a = a.as_slice();
        let (weights, log_const) = match profile.mode() {
            ProfileMode::Codim => {
                let m = n - k;
                let log_pref = m as f64 * 2f64.ln() - ln_factorial(m) - 0.5 * k as f64 * PI.ln();
                let sum_log_a: f64 = a.iter().map(|x| x.ln()).sum();
                (a.iter().map(|x| x * x).collect(), log_pref + sum_log_a)
            }
            ProfileMode::Dim => {
                let log_pref = k as f64 * 2f64.ln() - ln_factorial(k) - 0.5 * (n - k) as f64 * PI.ln();
                let log_gram = cholesky_logdet(&profile.gram()).ok_or(Error::RankDeficient { k })?;
                (a.iter().map(|x| 1.0 / (x * x)).collect(), log_pref + 0.5 * log_gram)
            }
        };
        Ok(Self { profile, weights, log_const })
    }

    pub fn profile(&self) -> &ColumnProfile {
        self.profile
    }

    /// The full per-sample value (prefactor included), whose expectation is
    /// the section volume. `None` when the sampled matrix is singular.
    pub fn eval(&self, ys: &[f64], work: &mut SymMatrix) -> Option<f64> {
        *work = SymMatrix::zeros(self.profile.k());
        let cols = self.profile.columns();
        match self.profile.mode() {
            ProfileMode::Codim => {
                for ((v, w), y) in cols.iter().zip(&self.weights).zip(ys) {
                    work.add_rank1(w * y, v);
                }
                let ld = cholesky_logdet(work)?;
                Some((self.log_const - 0.5 * ld).exp())
            }
            ProfileMode::Dim => {
                let mut sum_log_y = 0.0;
                for ((v, w), y) in cols.iter().zip(&self.weights).zip(ys) {
                    work.add_rank1(w / y, v);
                    sum_log_y += y.ln();
                }
                let ld = cholesky_logdet(work)?;
                Some((self.log_const - 0.5 * sum_log_y - 0.5 * ld).exp())
            }
        }
    }
}

/// Per-sample value for explicit exponential draws `ys`.
pub fn sample_value(profile: &ColumnProfile, a: &DilationVector, ys: &[f64]) -> Result<Option<f64>> {
    if ys.len() != profile.n() {
        return Err(Error::DimensionMismatch { expected: profile.n(), found: ys.len() });
    }
    let kernel = SampleKernel::new(profile, a)?;
    let mut work = SymMatrix::zeros(profile.k());
    Ok(kernel.eval(ys, &mut work))
}

/// Raw per-sample output of a batched simulation with `width` values per
/// sample, stored sample-major. Singular samples hold `NaN`.
pub(crate) struct SampleTable {
    pub(crate) width: usize,
    pub(crate) values: Vec<f64>,
}

pub(crate) fn simulate<F>(cfg: &MCConfig, domain: Domain, width: usize, eval: F) -> SampleTable
where
    F: Fn(&mut Substream, &mut [f64]) + Sync,
{
    let family = StreamFamily::new(cfg.seed, domain);
    let size = cfg.batch_size();
    let chunks: Vec<Vec<f64>> = (0..cfg.batches)
        .into_par_iter()
        .map(|b| {
            let mut out = vec![0.0; size as usize * width];
            for (j, row) in out.chunks_mut(width).enumerate() {
                let mut stream = family.substream(b * size + j as u64);
                eval(&mut stream, row);
            }
            out
        })
        .collect();
    SampleTable { width, values: chunks.concat() }
}

/// Batch-level summary of one column of a [`SampleTable`].
#[derive(Debug, Clone)]
struct ColumnSummary {
    batch_means: Vec<f64>,
    singular: u64,
    heavy_tail: bool,
}

impl SampleTable {
    fn summarize(&self, column: usize, batches: u64) -> ColumnSummary {
        let mut col: Vec<f64> = self.values.iter().skip(column).step_by(self.width).copied().collect();
        let singular = col.iter().filter(|x| x.is_nan()).count() as u64;
        col.iter_mut().filter(|x| x.is_nan()).for_each(|x| *x = 0.0);
        let size = col.len() / batches as usize;
        let batch_means = col.chunks(size).map(|c| c.iter().sum::<f64>() / size as f64).collect();
        let heavy_tail = heavy_tail(&mut col);
        ColumnSummary { batch_means, singular, heavy_tail }
    }
}

fn heavy_tail(values: &mut [f64]) -> bool {
    let total: f64 = values.iter().sum();
    if !(total > 0.0) {
        return false;
    }
    let top = ((values.len() as f64 * TAIL_FRACTION).ceil() as usize).max(1);
    let split = values.len() - top;
    values.select_nth_unstable_by(split, f64::total_cmp);
    let top_mass: f64 = values[split..].iter().sum();
    top_mass > TAIL_MASS * total
}

fn mean_and_stderr(batch_means: &[f64], aggregation: Aggregation) -> (f64, f64) {
    let b = batch_means.len() as f64;
    let mean = batch_means.iter().sum::<f64>() / b;
    let var = batch_means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (b - 1.0);
    let stderr = (var / b).sqrt();
    match aggregation {
        Aggregation::Mean => (mean, stderr),
        Aggregation::MedianOfMeans => {
            let mut sorted = batch_means.to_vec();
            sorted.sort_by(f64::total_cmp);
            let mid = sorted.len() / 2;
            let median =
                if sorted.len().is_multiple_of(2) { 0.5 * (sorted[mid - 1] + sorted[mid]) } else { sorted[mid] };
            // asymptotic efficiency of the median under normal batch means
            (median, stderr * (0.5 * PI).sqrt())
        }
    }
}

fn estimate_with(
    profile: &ColumnProfile,
    a: &DilationVector,
    cfg: &MCConfig,
    method: Method,
) -> Result<VolumeEstimate> {
    let kernel = SampleKernel::new(profile, a)?;
    let n = profile.n();
    let k = profile.k();
    let table = simulate(cfg, Domain::Exponential, 1, |stream, out| {
        let mut ys = vec![0.0; n];
        stream.fill_exponentials(&mut ys);
        let mut work = SymMatrix::zeros(k);
        out[0] = kernel.eval(&ys, &mut work).unwrap_or(f64::NAN);
    });
    let summary = table.summarize(0, cfg.batches);
    let (value, stderr) = mean_and_stderr(&summary.batch_means, cfg.aggregation);
    Ok(VolumeEstimate {
        value,
        stderr,
        samples: cfg.samples,
        method,
        singular: summary.singular,
        heavy_tail: summary.heavy_tail,
    })
}

/// Volume estimate from the codimension representation (orthonormal basis of
/// `H⊥`).
pub fn estimate_codim(profile: &ColumnProfile, a: &DilationVector, cfg: &MCConfig) -> Result<VolumeEstimate> {
    profile.expect_mode(ProfileMode::Codim)?;
    estimate_with(profile, a, cfg, Method::Codim)
}

/// Volume estimate from the dimension representation (any spanning basis of
/// `H`).
pub fn estimate_dim(profile: &ColumnProfile, a: &DilationVector, cfg: &MCConfig) -> Result<VolumeEstimate> {
    profile.expect_mode(ProfileMode::Dim)?;
    estimate_with(profile, a, cfg, Method::Dim)
}

/// `log vol` at one point of a path, with its delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogVolPoint {
    pub log_value: f64,
    pub stderr: f64,
    pub estimate: VolumeEstimate,
}

/// Log-volumes along a list of log-dilations evaluated with common random
/// numbers.
#[derive(Debug, Clone)]
pub struct LogVolPath {
    pub points: Vec<LogVolPoint>,
    batch_means: Vec<Vec<f64>>,
}

impl LogVolPath {
    /// Standard error of `Σᵢ wᵢ log Vᵢ`, linearized batch by batch so the
    /// correlation induced by shared draws is accounted for.
    pub fn combined_stderr(&self, weights: &[f64]) -> f64 {
        assert_eq!(weights.len(), self.points.len());
        let b = self.batch_means[0].len();
        let totals: Vec<f64> = self.points.iter().map(|p| p.estimate.value).collect();
        let d: Vec<f64> = (0..b)
            .map(|j| weights.iter().zip(&self.batch_means).zip(&totals).map(|((w, m), t)| w * m[j] / t).sum())
            .collect();
        let mean = d.iter().sum::<f64>() / b as f64;
        let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (b as f64 - 1.0);
        (var / b as f64).sqrt()
    }
}

/// Evaluates `t ↦ log vol(diag(eᵗ)B₁ⁿ ∩ H)` at every `t` in `ts`, reusing the
/// same draws for sample `i` at every point.
pub fn estimate_logvol_path(
    s: &SubspaceSpec,
    ts: &[LogDilation],
    mode: ProfileMode,
    cfg: &MCConfig,
) -> Result<LogVolPath> {
    if ts.is_empty() {
        return Err(Error::Empty("log-dilation path"));
    }
    let profile = match mode {
        ProfileMode::Codim => codim_profile(s)?,
        ProfileMode::Dim => dim_profile(s, false),
    };
    let dilations = ts.iter().map(to_dilation).collect::<Result<Vec<_>>>()?;
    let kernels = dilations.iter().map(|a| SampleKernel::new(&profile, a)).collect::<Result<Vec<_>>>()?;
    let n = profile.n();
    let k = profile.k();
    let table = simulate(cfg, Domain::Exponential, kernels.len(), |stream, out| {
        let mut ys = vec![0.0; n];
        stream.fill_exponentials(&mut ys);
        let mut work = SymMatrix::zeros(k);
        for (slot, kernel) in out.iter_mut().zip(&kernels) {
            *slot = kernel.eval(&ys, &mut work).unwrap_or(f64::NAN);
        }
    });
    let method = match mode {
        ProfileMode::Codim => Method::Codim,
        ProfileMode::Dim => Method::Dim,
    };
    let mut points = Vec::with_capacity(ts.len());
    let mut batch_means = Vec::with_capacity(ts.len());
    for i in 0..ts.len() {
        let summary = table.summarize(i, cfg.batches);
        let (value, stderr) = mean_and_stderr(&summary.batch_means, cfg.aggregation);
        let estimate = VolumeEstimate {
            value,
            stderr,
            samples: cfg.samples,
            method,
            singular: summary.singular,
            heavy_tail: summary.heavy_tail,
        };
        points.push(LogVolPoint { log_value: value.ln(), stderr: stderr / value, estimate });
        batch_means.push(summary.batch_means);
    }
    Ok(LogVolPath { points, batch_means })
}

/// Minimum number of quadrature nodes accepted by [`density_identity_check`].
pub const MIN_QUADRATURE_POINTS: usize = 100;
const GL_ORDER: usize = 10;
const GRADING_RATIO: f64 = 0.3;

/// Panels on `[0, 1]` graded geometrically toward both endpoints, with more
/// panels toward `u = 1` where the mixture integrand is singular at `x = 0`.
fn graded_panels(count: usize) -> Vec<(f64, f64)> {
    let right = (3 * count).div_ceil(4);
    let left = count - right;
    let mut edges = vec![0.0];
    // left half: [0, 1/2] with panel widths growing away from 0
    let mut inner: Vec<f64> = (1..left).map(|j| 0.5 * GRADING_RATIO.powi((left - j) as i32)).collect();
    edges.append(&mut inner);
    edges.push(0.5);
    for j in 1..right {
        edges.push(1.0 - 0.5 * GRADING_RATIO.powi(j as i32));
    }
    edges.push(1.0);
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Absolute difference between `½e^{−|x|}` and `E[(2π·2Y)^{−1/2} e^{−x²/(4Y)}]`,
/// `Y ~ Exp(1)`, with the expectation computed by composite Gauss–Legendre
/// quadrature after substituting `y = −ln u`.
pub fn density_identity_check(x: f64, quadrature_points: usize) -> Result<f64> {
    if quadrature_points < MIN_QUADRATURE_POINTS {
        return Err(Error::InvalidConfig(format!(
            "need at least {MIN_QUADRATURE_POINTS} quadrature points, got {quadrature_points}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite("density argument"));
    }
    let (nodes, weights) = gauss_legendre(GL_ORDER);
    let integrand = |u: f64| {
        let y = -u.ln();
        if !(y > 0.0) {
            return 0.0;
        }
        (-x * x / (4.0 * y)).exp() / ((2.0 * PI).sqrt() * (2.0 * y).sqrt())
    };
    let panels = graded_panels(quadrature_points / GL_ORDER);
    let rhs: f64 = panels
        .iter()
        .map(|&(lo, hi)| {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            nodes.iter().zip(&weights).map(|(t, w)| w * integrand(mid + half * t)).sum::<f64>() * half
        })
        .sum();
    Ok((0.5 * (-x.abs()).exp() - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::section::GivenAs;

    fn cfg(samples: u64) -> MCConfig {
        MCConfig::new(samples, 100, 11).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(MCConfig::new(100, 1, 0).is_err());
        assert!(MCConfig::new(101, 10, 0).is_err());
        assert!(MCConfig::new(1, 2, 0).is_err());
        assert!(MCConfig::new(100, 10, 0).is_ok());
    }

    #[test]
    fn wrong_mode_is_rejected() {
        let s = SubspaceSpec::new(2, GivenAs::Subspace, vec![vec![1.0, 1.0]]).unwrap();
        let p = dim_profile(&s, false);
        let a = DilationVector::ones(2);
        assert!(matches!(estimate_codim(&p, &a, &cfg(1000)), Err(Error::WrongMode { .. })));
        let a3 = DilationVector::ones(3);
        assert!(matches!(estimate_dim(&p, &a3, &cfg(1000)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn axis_section_codim() {
        // H = span{e₁}: the segment |x₁| ≤ a₁. The codim integrand has
        // infinite variance here (E[1/Y] diverges), so only a loose check.
        let s = SubspaceSpec::new(2, GivenAs::Subspace, vec![vec![1.0, 0.0]]).unwrap();
        let p = codim_profile(&s).unwrap();
        let a = DilationVector::new(vec![1.5, 0.7]).unwrap();
        let est = estimate_codim(&p, &a, &cfg(200_000)).unwrap();
        assert!((est.value - 3.0).abs() < 0.1, "{est:?}");
    }

    #[test]
    fn full_space_dim_is_exact_per_sample() {
        let s = SubspaceSpec::new(2, GivenAs::Subspace, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let p = dim_profile(&s, false);
        let a = DilationVector::new(vec![2.0, 3.0]).unwrap();
        let est = estimate_dim(&p, &a, &cfg(1000)).unwrap();
        assert!((est.value - 12.0).abs() <= 1e-12);
        assert!(est.stderr <= 1e-12);
    }

    #[test]
    fn median_of_means_is_close_to_mean() {
        let s = SubspaceSpec::new(3, GivenAs::Complement, vec![vec![1.0, 1.0, 1.0]]).unwrap();
        let p = codim_profile(&s).unwrap();
        let a = DilationVector::ones(3);
        let mean = estimate_codim(&p, &a, &cfg(100_000)).unwrap();
        let mom = estimate_codim(&p, &a, &cfg(100_000).with_aggregation(Aggregation::MedianOfMeans)).unwrap();
        assert!((mean.value - mom.value).abs() <= 4.0 * mom.stderr);
        assert!(mom.stderr > mean.stderr);
    }

    #[test]
    fn heavy_tail_detector() {
        let mut flat = vec![1.0; 10_000];
        assert!(!heavy_tail(&mut flat));
        let mut spiky = vec![1.0; 10_000];
        spiky[17] = 5_000.0;
        assert!(heavy_tail(&mut spiky));
    }

    #[test]
    fn graded_panels_cover_unit_interval() {
        let panels = graded_panels(40);
        assert_eq!(panels.len(), 40);
        assert_eq!(panels[0].0, 0.0);
        assert_eq!(panels.last().unwrap().1, 1.0);
        for w in panels.windows(2) {
            assert_eq!(w[0].1, w[1].0);
            assert!(w[0].0 < w[0].1);
        }
    }

    #[test]
    fn density_check_rejects_few_points() {
        assert!(density_identity_check(0.0, 99).is_err());
    }
}
