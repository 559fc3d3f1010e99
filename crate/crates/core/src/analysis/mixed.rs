//! Mixed discriminants and the convexity of `t ↦ log det(Σ e^{tᵢ} vᵢvᵢᵀ)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{cholesky_logdet, SymMatrix};
use crate::rng::{Domain, StreamFamily};

/// Largest order accepted by [`mixed_discriminant`] (2ᵏ subset sums).
pub const MAX_ORDER: usize = 12;
/// Largest number of ordered tuples enumerated by [`det_expansion_check`].
pub const MAX_TUPLES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MixedDiscriminantResult {
    pub value: f64,
    pub matrices: Vec<SymMatrix>,
}

impl MixedDiscriminantResult {
    /// Product of the traces; the natural magnitude of the value for PSD
    /// arguments.
    pub fn scale(&self) -> f64 {
        self.matrices.iter().map(SymMatrix::trace).product()
    }
}

/// `D(A₁,…,A_k)` by polarization:
///
/// ```text
/// D = (1/k!) Σ_{S ⊆ [k]} (−1)^{k−|S|} det(Σ_{i∈S} Aᵢ)
/// ```
///
/// normalized so that `D(A,…,A) = det A`, which makes
/// `det(Σ xᵢAᵢ) = Σ_{j₁..j_k} D(A_{j₁},…,A_{j_k}) x_{j₁}⋯x_{j_k}` over ordered
/// tuples.
pub fn mixed_discriminant(ms: &[SymMatrix]) -> Result<MixedDiscriminantResult> {
    let k = ms.len();
    if k == 0 {
        return Err(Error::Empty("matrix list"));
    }
    if k > MAX_ORDER {
        return Err(Error::TooLarge(format!("mixed discriminant of order {k} (max {MAX_ORDER})")));
    }
    if let Some(m) = ms.iter().find(|m| m.order() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: m.order() });
    }
    let mut total = 0.0;
    for mask in 1u32..(1u32 << k) {
        let mut sum = SymMatrix::zeros(k);
        for (i, m) in ms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum.add_scaled(1.0, m);
            }
        }
        let size = mask.count_ones() as usize;
        let sign = if (k - size).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * sum.det();
    }
    let k_fact: f64 = (2..=k).map(|i| i as f64).product();
    Ok(MixedDiscriminantResult { value: total / k_fact, matrices: ms.to_vec() })
}

/// Relative residual between `det(Σᵢ xᵢAᵢ)` evaluated directly and through
/// the ordered-tuple expansion in mixed discriminants.
///
/// The residual is normalized by `max(|det|, Σ|terms|, (Σ|xᵢ|‖Aᵢ‖_F)ᵏ)`, so
/// neither cancellation in the expansion nor a singular sum (where both sides
/// are pure rounding) inflates it.
pub fn det_expansion_check(ms: &[SymMatrix], x: &[f64]) -> Result<f64> {
    let n = ms.len();
    if n == 0 {
        return Err(Error::Empty("matrix list"));
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let k = ms[0].order();
    if let Some(m) = ms.iter().find(|m| m.order() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: m.order() });
    }
    let tuples = (n as f64).powi(k as i32);
    if tuples > MAX_TUPLES as f64 {
        return Err(Error::TooLarge(format!("{n}^{k} ordered tuples (max {MAX_TUPLES})")));
    }

    let mut direct_m = SymMatrix::zeros(k);
    for (m, xi) in ms.iter().zip(x) {
        direct_m.add_scaled(*xi, m);
    }
    let direct = direct_m.det();
    let scale = ms
        .iter()
        .zip(x)
        .map(|(m, xi)| xi.abs() * m.to_rows().iter().flatten().map(|v| v * v).sum::<f64>().sqrt())
        .sum::<f64>()
        .powi(k as i32);

    let mut cache: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut idx = vec![0usize; k];
    let (mut expansion, mut magnitude) = (0.0, 0.0);
    loop {
        let mut key = idx.clone();
        key.sort_unstable();
        let d = match cache.get(&key) {
            Some(&d) => d,
            None => {
                let args: Vec<SymMatrix> = key.iter().map(|&j| ms[j].clone()).collect();
                let d = mixed_discriminant(&args)?.value;
                cache.insert(key, d);
                d
            }
        };
        let term = d * idx.iter().map(|&j| x[j]).product::<f64>();
        expansion += term;
        magnitude += term.abs();

        // odometer increment over [0, n)^k
        let mut pos = 0;
        loop {
            if pos == k {
                let denom = direct.abs().max(magnitude).max(scale).max(f64::MIN_POSITIVE);
                return Ok((direct - expansion).abs() / denom);
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Outcome of [`logdet_convexity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    /// `max g((s+t)/2) − (g(s) + g(t))/2` over the evaluated pairs.
    pub max_margin: f64,
    pub evaluated: usize,
    /// Pairs skipped because `Σ e^{tᵢ} vᵢvᵢᵀ` was numerically singular.
    pub skipped: usize,
}

/// Box from which the random `(s, t)` pairs are drawn, `[−3, 3]ⁿ`.
pub const CONVEXITY_BOX: f64 = 3.0;

fn logdet_weighted(vs: &[Vec<f64>], t: &[f64], k: usize) -> Option<f64> {
    let mut m = SymMatrix::zeros(k);
    for (v, ti) in vs.iter().zip(t) {
        m.add_rank1(ti.exp(), v);
    }
    cholesky_logdet(&m)
}

/// Midpoint-convexity probe of `g(t) = log det(Σᵢ e^{tᵢ} vᵢvᵢᵀ)` on `pairs`
/// random pairs from `[−3, 3]ⁿ`.
pub fn logdet_convexity_check(vs: &[Vec<f64>], pairs: usize, seed: u64) -> Result<ConvexityReport> {
    let n = vs.len();
    let k = vs.first().ok_or(Error::Empty("vector list"))?.len();
    if k == 0 {
        return Err(Error::Empty("vector entries"));
    }
    if let Some(v) = vs.iter().find(|v| v.len() != k) {
        return Err(Error::DimensionMismatch { expected: k, found: v.len() });
    }
    if logdet_weighted(vs, &vec![0.0; n], k).is_none() {
        return Err(Error::RankDeficient { k });
    }
    let family = StreamFamily::new(seed, Domain::Parameters);
    let mut report = ConvexityReport { max_margin: f64::NEG_INFINITY, evaluated: 0, skipped: 0 };
    for p in 0..pairs {
        let mut stream = family.substream(p as u64);
        let s: Vec<f64> = (0..n).map(|_| stream.uniform_symmetric(CONVEXITY_BOX)).collect();
        let t: Vec<f64> = (0..n).map(|_| stream.uniform_symmetric(CONVEXITY_BOX)).collect();
        let mid: Vec<f64> = s.iter().zip(&t).map(|(a, b)| 0.5 * (a + b)).collect();
        match (logdet_weighted(vs, &s, k), logdet_weighted(vs, &t, k), logdet_weighted(vs, &mid, k)) {
            (Some(gs), Some(gt), Some(gm)) => {
                report.max_margin = report.max_margin.max(gm - 0.5 * (gs + gt));
                report.evaluated += 1;
            }
            _ => report.skipped += 1,
        }
    }
    Ok(report)
}

/// `g(t)` for a single point; exposed for affine-case checks.
pub fn weighted_logdet(vs: &[Vec<f64>], t: &[f64]) -> Option<f64> {
    let k = vs.first()?.len();
    logdet_weighted(vs, t, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn diagonal_of_expansion_is_det() {
        let a = SymMatrix::from_upper(&[vec![2.0, -1.0, 0.5], vec![0.0, 1.0, 3.0], vec![0.0, 0.0, -4.0]]).unwrap();
        let d = mixed_discriminant(&[a.clone(), a.clone(), a.clone()]).unwrap();
        assert_relative_eq!(d.value, a.det(), max_relative = 1e-12);
    }

    #[test]
    fn order_two_examples() {
        let i = SymMatrix::identity(2);
        assert_relative_eq!(mixed_discriminant(&[i.clone(), i]).unwrap().value, 1.0);
        let e1 = SymMatrix::diagonal(&[1.0, 0.0]);
        let e2 = SymMatrix::diagonal(&[0.0, 1.0]);
        assert_relative_eq!(mixed_discriminant(&[e1, e2]).unwrap().value, 0.5);
    }

    #[test]
    fn order_mismatch_rejected() {
        let err = mixed_discriminant(&[SymMatrix::identity(2), SymMatrix::identity(3)]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        let err = mixed_discriminant(&vec![SymMatrix::identity(13); 13]).unwrap_err();
        assert!(matches!(err, Error::TooLarge(_)));
    }

    #[test]
    fn expansion_of_identities() {
        let ms = vec![SymMatrix::identity(3); 4];
        let x = [0.5, -1.0, 2.0, 0.25];
        assert!(det_expansion_check(&ms, &x).unwrap() <= 1e-14);
        let direct = {
            let s: f64 = x.iter().sum();
            s.powi(3)
        };
        let mut m = SymMatrix::zeros(3);
        for xi in x {
            m.add_scaled(xi, &SymMatrix::identity(3));
        }
        assert_relative_eq!(m.det(), direct, max_relative = 1e-14);
    }

    #[test]
    fn expansion_single_matrix() {
        let a = SymMatrix::from_upper(&[vec![3.0, 1.0], vec![0.0, 2.0]]).unwrap();
        assert!(det_expansion_check(&[a], &[1.7]).unwrap() <= 1e-14);
    }

    #[test]
    fn expansion_of_singular_sum() {
        // rank one in order three: both sides are rounding noise around zero
        let mut a = SymMatrix::zeros(3);
        a.add_rank1(1.0, &[0.3, -0.7, 0.9]);
        let b = a.scaled(2.5);
        assert!(det_expansion_check(&[a, b], &[1.3, -0.4]).unwrap() <= 1e-12);
    }

    #[test]
    fn expansion_size_limit() {
        let ms = vec![SymMatrix::identity(7); 8];
        assert!(matches!(det_expansion_check(&ms, &[1.0; 8]), Err(Error::TooLarge(_))));
    }

    #[test]
    fn convexity_affine_and_degenerate_cases() {
        let r = logdet_convexity_check(&[vec![1.0]], 50, 1).unwrap();
        assert!(r.max_margin.abs() <= 1e-15);
        assert_eq!(r.evaluated, 50);
        assert!(matches!(
            logdet_convexity_check(&[vec![1.0, 1.0], vec![2.0, 2.0]], 5, 1),
            Err(Error::RankDeficient { k: 2 })
        ));
    }

    #[test]
    fn convexity_equal_points() {
        let vs = vec![vec![1.0, 0.3], vec![-0.2, 1.0], vec![0.7, 0.7]];
        let t = [0.3, -1.2, 2.0];
        let g = weighted_logdet(&vs, &t).unwrap();
        assert_eq!(g - 0.5 * (g + g), 0.0);
    }
}
