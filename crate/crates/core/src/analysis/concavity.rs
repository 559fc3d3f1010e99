//! Statistical midpoint test for log-concavity of
//! `F(t) = log vol_H(diag(eᵗ)B₁ⁿ ∩ H)`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimators::{estimate_logvol_path, MCConfig};
use crate::rng::{Domain, StreamFamily};
use crate::section::{LogDilation, ProfileMode, SubspaceSpec};

/// Margins this close to zero with negligible standard error are treated as
/// exact (affine directions, repeated points).
pub const ROUNDING_TOL: f64 = 1e-10;
/// Number of standard errors separating a violation from noise.
pub const SIGMA_THRESHOLD: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Violation,
    Inconclusive,
}

/// Classifies a midpoint margin `F(mid) − (F(t₀) + F(t₁))/2`.
pub fn classify(margin: f64, stderr: f64) -> Verdict {
    let band = SIGMA_THRESHOLD * stderr;
    if margin < -band - ROUNDING_TOL {
        Verdict::Violation
    } else if margin.abs() <= band && band > ROUNDING_TOL {
        Verdict::Inconclusive
    } else {
        Verdict::Consistent
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleResult {
    pub t0: Vec<f64>,
    pub mid: Vec<f64>,
    pub t1: Vec<f64>,
    /// `F` at `t0`, `mid`, `t1`.
    pub log_values: [f64; 3],
    pub margin: f64,
    pub stderr: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub triples: Vec<TripleResult>,
}

impl ConcavityReport {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.triples.iter().filter(|t| t.verdict == verdict).count()
    }

    pub fn violations(&self) -> usize {
        self.count(Verdict::Violation)
    }
}

/// Evaluates `F` at `t0`, the midpoint and `t1` with common random numbers and
/// classifies the midpoint margin.
pub fn check_triple(
    s: &SubspaceSpec,
    t0: &LogDilation,
    t1: &LogDilation,
    cfg: &MCConfig,
    mode: ProfileMode,
) -> Result<TripleResult> {
    let mid = t0.midpoint(t1);
    let path = estimate_logvol_path(s, &[t0.clone(), mid.clone(), t1.clone()], mode, cfg)?;
    let f: Vec<f64> = path.points.iter().map(|p| p.log_value).collect();
    let margin = f[1] - 0.5 * (f[0] + f[2]);
    let stderr = path.combined_stderr(&[-0.5, 1.0, -0.5]);
    Ok(TripleResult {
        t0: t0.as_slice().to_vec(),
        mid: mid.as_slice().to_vec(),
        t1: t1.as_slice().to_vec(),
        log_values: [f[0], f[1], f[2]],
        margin,
        stderr,
        verdict: classify(margin, stderr),
    })
}

/// Draws `triples` random pairs `(t₀, t₁)` uniformly from `[−box, box]ⁿ` and
/// tests the midpoint inequality for each.
pub fn logconcavity_scan(
    s: &SubspaceSpec,
    triples: usize,
    box_half_width: f64,
    cfg: &MCConfig,
    mode: ProfileMode,
) -> Result<ConcavityReport> {
    let n = s.ambient_dim();
    let family = StreamFamily::new(cfg.seed(), Domain::Parameters);
    let results = (0..triples)
        .map(|i| {
            let mut stream = family.substream(i as u64);
            let t0 = LogDilation::new((0..n).map(|_| stream.uniform_symmetric(box_half_width)).collect())?;
            let t1 = LogDilation::new((0..n).map(|_| stream.uniform_symmetric(box_half_width)).collect())?;
            check_triple(s, &t0, &t1, cfg, mode)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcavityReport { triples: results })
}
