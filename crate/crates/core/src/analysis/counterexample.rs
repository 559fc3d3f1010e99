//! A symmetric log-concave measure without the strong B-property: the uniform
//! measure on the parallelogram `K = conv{(−1,−2), (−1,−1), (1,1), (1,2)}`.
//!
//! With `K_t = diag(1, eᵗ)K` the function `f(t) = log(|K_t ∩ K| / |K|)` peaks
//! at `t = 0`, tends to `−∞` as `t → −∞` and stays bounded as `t → ∞`, so it
//! cannot be concave.

use serde::{Deserialize, Serialize};

use crate::oracle::{clip_polygon, polygon_area, HalfPlane, Polygon};

/// `K`, counterclockwise.
pub fn parallelogram() -> Polygon {
    Polygon::new(vec![[-1.0, -2.0], [1.0, 1.0], [1.0, 2.0], [-1.0, -1.0]])
}

/// `K` as an intersection of four halfplanes: `|x| ≤ 1`, `|y − 3x/2| ≤ 1/2`.
pub fn parallelogram_halfplanes() -> [HalfPlane; 4] {
    [
        HalfPlane::new([1.0, 0.0], 1.0),
        HalfPlane::new([-1.0, 0.0], 1.0),
        HalfPlane::new([-1.5, 1.0], 0.5),
        HalfPlane::new([1.5, -1.0], 0.5),
    ]
}

/// `K_t = diag(1, eᵗ)K` as four halfplanes, `|x| ≤ 1`, `|e^{−t}y − 3x/2| ≤ 1/2`,
/// each scaled so its largest coefficient stays bounded for any `t`.
pub fn dilated_halfplanes(t: f64) -> [HalfPlane; 4] {
    let (nx, ny, c) = if t >= 0.0 {
        (-1.5, (-t).exp(), 0.5)
    } else {
        let e = t.exp();
        (-1.5 * e, 1.0, 0.5 * e)
    };
    [
        HalfPlane::new([1.0, 0.0], 1.0),
        HalfPlane::new([-1.0, 0.0], 1.0),
        HalfPlane::new([nx, ny], c),
        HalfPlane::new([-nx, -ny], c),
    ]
}

/// `K_t ∩ K`, obtained by clipping `K` with the halfplanes of `K_t` so that
/// all vertex coordinates stay of unit size.
pub fn dilated_intersection(t: f64) -> Polygon {
    dilated_halfplanes(t).iter().fold(parallelogram(), |p, h| clip_polygon(&p, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    /// `log(|K_t ∩ K| / |K|)`; `−∞` for an empty intersection.
    pub f: f64,
}

pub fn counterexample_value(t: f64) -> f64 {
    let area = polygon_area(&dilated_intersection(t));
    if area > 0.0 {
        (area / polygon_area(&parallelogram())).ln()
    } else {
        f64::NEG_INFINITY
    }
}

pub fn counterexample_curve(ts: &[f64]) -> Vec<CurvePoint> {
    ts.iter().map(|&t| CurvePoint { t, f: counterexample_value(t) }).collect()
}

/// The pinned triple `(0, 10, 20)` and its midpoint margin
/// `f(10) − (f(0) + f(20))/2`. A negative margin certifies non-concavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    pub triple: [f64; 3],
    pub values: [f64; 3],
    pub margin: f64,
}

pub const PINNED_TRIPLE: [f64; 3] = [0.0, 10.0, 20.0];

pub fn counterexample_violation() -> ViolationCertificate {
    let values = PINNED_TRIPLE.map(counterexample_value);
    ViolationCertificate { triple: PINNED_TRIPLE, values, margin: values[1] - 0.5 * (values[0] + values[2]) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallelogram_area_and_peak() {
        assert_eq!(polygon_area(&parallelogram()), 2.0);
        assert_eq!(counterexample_value(0.0), 0.0);
        assert_eq!(dilated_intersection(0.0), parallelogram());
    }

    #[test]
    fn halfplane_forms_agree() {
        assert_eq!(dilated_halfplanes(0.0), parallelogram_halfplanes());
        // scaling K's vertices and clipping by K gives the same polygon
        for t in [-3.0, -0.7, 0.4, 2.5] {
            let scaled = parallelogram().scaled(1.0, f64::exp(t));
            let other = parallelogram_halfplanes().iter().fold(scaled, |p, h| clip_polygon(&p, h));
            let a = polygon_area(&other);
            assert!((a - polygon_area(&dilated_intersection(t))).abs() <= 1e-12 * a.max(1.0), "t = {t}");
        }
    }

    #[test]
    fn far_negative_t_is_empty() {
        assert_eq!(counterexample_value(-800.0), f64::NEG_INFINITY);
    }

    #[test]
    fn curve_is_nonpositive() {
        for i in -40..=40 {
            let t = i as f64 * 0.5;
            assert!(counterexample_value(t) <= 1e-15, "f({t}) > 0");
        }
    }

    #[test]
    fn collapses_for_negative_t() {
        assert!(counterexample_value(-20.0) <= -10.0);
        // intersection hugs [−1/3, 1/3] × {0}
        let p = dilated_intersection(-20.0);
        for [x, y] in p.vertices() {
            assert!(x.abs() <= 1.0 / 3.0 + 1e-8);
            assert!(y.abs() <= 1e-8);
        }
    }

    #[test]
    fn large_t_limit_is_the_strip_of_k() {
        // as t → ∞, K_t ∩ K → K ∩ {|x| ≤ 1/3}, of area 2/3
        let p = dilated_intersection(20.0);
        assert!((polygon_area(&p) - 2.0 / 3.0).abs() <= 1e-8);
        assert!((counterexample_value(20.0) - (1.0f64 / 3.0).ln()).abs() <= 1e-8);
    }

    #[test]
    fn certificate_margin_is_negative() {
        let c = counterexample_violation();
        assert_eq!(c.triple, [0.0, 10.0, 20.0]);
        assert!(c.margin <= -0.5, "{c:?}");
        // adding a constant to f leaves the margin unchanged
        let shifted = (c.values[1] + 3.0) - 0.5 * (c.values[0] + 3.0 + c.values[2] + 3.0);
        assert!((shifted - c.margin).abs() <= 1e-12);
    }

    #[test]
    fn local_triple_near_peak_need_not_violate() {
        let f = counterexample_curve(&[-1.0, -0.5, 0.0]);
        assert!(f.iter().all(|p| p.f.is_finite()));
    }
}
