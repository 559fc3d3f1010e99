//! Reference volumes: closed forms, exact one- and two-dimensional sections,
//! and a hit-or-miss estimator for higher-dimensional sections.
//!
//! A section `diag(a)B₁ⁿ ∩ H` with `H` spanned by the rows of a k×n matrix
//! with columns `vᵢ` is the image of
//!
//! ```text
//! K = { y ∈ Rᵏ : Σᵢ |⟨y, vᵢ⟩| / aᵢ ≤ 1 }
//! ```
//!
//! under `y ↦ (⟨y, vᵢ⟩)ᵢ`, which scales k-volume by `√det(Σᵢ vᵢvᵢᵀ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{simulate, MCConfig, Method, VolumeEstimate};
use crate::numkit::{cholesky_logdet, min_eigenvalue};
use crate::rng::Domain;
use crate::section::{ColumnProfile, DilationVector, ProfileMode};

pub type Point = [f64; 2];

/// Vertices closer than this are merged after clipping.
const VERTEX_MERGE_TOL: f64 = 1e-12;

/// A convex polygon with counterclockwise vertices. Fewer than three
/// vertices means empty.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Takes the vertices of a convex polygon in either orientation and
    /// stores them counterclockwise.
    pub fn new(mut vertices: Vec<Point>) -> Self {
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Self { vertices: dedup_vertices(vertices) }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { vertices: vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]] }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Applies `(x, y) ↦ (sx·x, sy·y)` with positive factors.
    pub fn scaled(&self, sx: f64, sy: f64) -> Self {
        Self { vertices: self.vertices.iter().map(|[x, y]| [sx * x, sy * y]).collect() }
    }
}

/// The closed halfplane `{ y : ⟨y, normal⟩ ≤ offset }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: Point,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Point, offset: f64) -> Self {
        Self { normal, offset }
    }
}

fn signed_area(vertices: &[Point]) -> f64 {
    let m = vertices.len();
    if m < 3 {
        return 0.0;
    }
    0.5 * (0..m)
        .map(|i| {
            let [x0, y0] = vertices[i];
            let [x1, y1] = vertices[(i + 1) % m];
            x0 * y1 - x1 * y0
        })
        .sum::<f64>()
}

fn dedup_vertices(mut vertices: Vec<Point>) -> Vec<Point> {
    let close =
        |p: &Point, q: &Point| (p[0] - q[0]).abs() <= VERTEX_MERGE_TOL && (p[1] - q[1]).abs() <= VERTEX_MERGE_TOL;
    vertices.dedup_by(|q, p| close(p, q));
    while vertices.len() > 1 && close(&vertices[0], vertices.last().unwrap()) {
        vertices.pop();
    }
    if vertices.len() < 3 {
        vertices.clear();
    }
    vertices
}

/// Shoelace area of a counterclockwise polygon.
pub fn polygon_area(p: &Polygon) -> f64 {
    signed_area(&p.vertices).max(0.0)
}

/// `p ∩ h` by one Sutherland–Hodgman pass. Vertices within a scale-relative
/// tolerance of the boundary line count as inside.
pub fn clip_polygon(p: &Polygon, h: &HalfPlane) -> Polygon {
    if p.is_empty() {
        return Polygon::empty();
    }
    let [nx, ny] = h.normal;
    let extent = p.vertices.iter().map(|[x, y]| x.abs().max(y.abs())).fold(0.0, f64::max);
    let tol = 1e-14 * (h.offset.abs() + (nx.abs() + ny.abs()) * extent);
    let dist: Vec<f64> = p.vertices.iter().map(|[x, y]| nx * x + ny * y - h.offset).collect();
    if dist.iter().all(|&d| d <= tol) {
        return p.clone();
    }
    let m = p.vertices.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let j = (i + 1) % m;
        let (pi, pj) = (p.vertices[i], p.vertices[j]);
        let (di, dj) = (dist[i], dist[j]);
        let inside_i = di <= tol;
        let inside_j = dj <= tol;
        if inside_i {
            out.push(pi);
        }
        if inside_i != inside_j {
            let s = di / (di - dj);
            out.push([pi[0] + s * (pj[0] - pi[0]), pi[1] + s * (pj[1] - pi[1])]);
        }
    }
    Polygon { vertices: dedup_vertices(out) }
}

/// Volume of the dilated cross-polytope itself, `2ⁿ Πaᵢ / n!`, accumulated
/// as `Πᵢ 2aᵢ/i` so that integer cases come out exact.
pub fn full_volume(a: &DilationVector) -> f64 {
    a.as_slice().iter().enumerate().map(|(i, x)| 2.0 * x / (i + 1) as f64).product()
}

/// The body `K ⊂ Rᵏ` parameterizing a section: spanning-basis columns of `H`
/// together with the dilation.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionBody {
    profile: ColumnProfile,
    a: DilationVector,
}

impl SectionBody {
    pub fn new(profile: ColumnProfile, a: DilationVector) -> Result<Self> {
        profile.expect_mode(ProfileMode::Dim)?;
        if profile.n() != a.len() {
            return Err(Error::DimensionMismatch { expected: profile.n(), found: a.len() });
        }
        Ok(Self { profile, a })
    }

    pub fn profile(&self) -> &ColumnProfile {
        &self.profile
    }

    pub fn dilation(&self) -> &DilationVector {
        &self.a
    }

    /// `Σᵢ |⟨y, vᵢ⟩| / aᵢ`, the gauge of `K`.
    pub fn gauge(&self, y: &[f64]) -> f64 {
        self.profile.columns().iter().zip(self.a.as_slice()).map(|(v, a)| crate::numkit::dot(y, v).abs() / a).sum()
    }

    /// `√det(Σᵢ vᵢvᵢᵀ)`, the volume factor of `y ↦ (⟨y, vᵢ⟩)ᵢ`.
    pub fn jacobian(&self) -> Result<f64> {
        let k = self.profile.k();
        cholesky_logdet(&self.profile.gram()).map(|ld| (0.5 * ld).exp()).ok_or(Error::RankDeficient { k })
    }

    /// A radius `R` with `K ⊆ {‖y‖ ≤ R}`: the gauge is at least
    /// `‖y‖ √λ_min / max aᵢ`.
    pub fn enclosing_radius(&self) -> Result<f64> {
        let k = self.profile.k();
        let lambda = min_eigenvalue(&self.profile.gram())?;
        let scale = self.profile.gram().trace().max(f64::MIN_POSITIVE);
        if !(lambda > 1e-14 * scale) {
            return Err(Error::RankDeficient { k });
        }
        let a_max = self.a.as_slice().iter().copied().fold(0.0, f64::max);
        Ok(a_max / lambda.sqrt())
    }
}

/// Exact section volume when `dim H = 1`.
pub fn volume_k1(body: &SectionBody) -> Result<f64> {
    if body.profile.k() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: body.profile.k() });
    }
    let (mut len2, mut c) = (0.0, 0.0);
    for (v, a) in body.profile.columns().iter().zip(body.a.as_slice()) {
        len2 += v[0] * v[0];
        c += v[0].abs() / a;
    }
    if c == 0.0 {
        return Err(Error::RankDeficient { k: 1 });
    }
    Ok(2.0 * len2.sqrt() / c)
}

/// The polygon `K ⊂ R²` for a two-dimensional section, cut out of a box of
/// side `4R` by the halfplanes `⟨y, Σᵢ εᵢ vᵢ/aᵢ⟩ ≤ 1`, `ε ∈ {±1}ⁿ`.
pub fn section_polygon(body: &SectionBody) -> Result<Polygon> {
    if body.profile.k() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: body.profile.k() });
    }
    let r = body.enclosing_radius()?;
    // zero columns only duplicate halfplanes
    let scaled: Vec<Point> = body
        .profile
        .columns()
        .iter()
        .zip(body.a.as_slice())
        .filter(|(v, _)| v[0] != 0.0 || v[1] != 0.0)
        .map(|(v, a)| [v[0] / a, v[1] / a])
        .collect();
    let m = scaled.len();
    if m > 24 {
        return Err(Error::TooLarge(format!("{m} nonzero columns (at most 24 supported)")));
    }
    let mut poly = Polygon::rect(-2.0 * r, -2.0 * r, 2.0 * r, 2.0 * r);
    // ε₁ = +1; the reflected halfplane covers ε₁ = −1
    for mask in 0u32..(1u32 << (m - 1)) {
        let mut w = scaled[0];
        for (bit, s) in scaled.iter().enumerate().skip(1) {
            let sign = if mask >> (bit - 1) & 1 == 1 { -1.0 } else { 1.0 };
            w[0] += sign * s[0];
            w[1] += sign * s[1];
        }
        poly = clip_polygon(&poly, &HalfPlane::new(w, 1.0));
        poly = clip_polygon(&poly, &HalfPlane::new([-w[0], -w[1]], 1.0));
    }
    Ok(poly)
}

/// Exact section volume when `dim H = 2`.
pub fn volume_k2(body: &SectionBody) -> Result<f64> {
    let poly = section_polygon(body)?;
    Ok(polygon_area(&poly) * body.jacobian()?)
}

/// Hit-or-miss estimate: uniform points in `[−R, R]ᵏ`, scaled by the
/// jacobian. The standard error is binomial.
pub fn volume_mc(body: &SectionBody, cfg: &MCConfig) -> Result<VolumeEstimate> {
    let k = body.profile.k();
    let r = body.enclosing_radius()?;
    let jac = body.jacobian()?;
    let table = simulate(cfg, Domain::HitOrMiss, 1, |stream, out| {
        let y: Vec<f64> = (0..k).map(|_| stream.uniform_symmetric(r)).collect();
        out[0] = if body.gauge(&y) <= 1.0 { 1.0 } else { 0.0 };
    });
    let n = cfg.samples() as f64;
    let p = table.values.iter().sum::<f64>() / n;
    let scale = (2.0 * r).powi(k as i32) * jac;
    Ok(VolumeEstimate {
        value: scale * p,
        stderr: scale * (p * (1.0 - p) / n).sqrt(),
        samples: cfg.samples(),
        method: Method::OracleMc,
        singular: 0,
        heavy_tail: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::section::{dim_profile, GivenAs, SubspaceSpec};
    use approx::assert_relative_eq;

    fn body(n: usize, rows: &[&[f64]], a: &[f64]) -> SectionBody {
        let s = SubspaceSpec::new(n, GivenAs::Subspace, rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        SectionBody::new(dim_profile(&s, false), DilationVector::new(a.to_vec()).unwrap()).unwrap()
    }

    fn unit_square() -> Polygon {
        Polygon::rect(0.0, 0.0, 1.0, 1.0)
    }

    #[test]
    fn area_examples() {
        assert_eq!(polygon_area(&unit_square()), 1.0);
        assert_eq!(polygon_area(&Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])), 0.5);
        let k = Polygon::new(vec![[-1.0, -2.0], [1.0, 1.0], [1.0, 2.0], [-1.0, -1.0]]);
        assert_eq!(polygon_area(&k), 2.0);
        // clockwise input is reoriented
        let cw = Polygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]);
        assert_eq!(polygon_area(&cw), 1.0);
    }

    #[test]
    fn clip_examples() {
        let half = clip_polygon(&unit_square(), &HalfPlane::new([1.0, 0.0], 0.5));
        assert_eq!(polygon_area(&half), 0.5);
        let same = clip_polygon(&unit_square(), &HalfPlane::new([1.0, 1.0], 5.0));
        assert_eq!(same, unit_square());
        let gone = clip_polygon(&unit_square(), &HalfPlane::new([1.0, 0.0], -1.0));
        assert!(gone.is_empty());
        assert_eq!(polygon_area(&gone), 0.0);
        // touching at a single edge degenerates to empty
        let edge = clip_polygon(&unit_square(), &HalfPlane::new([1.0, 0.0], 0.0));
        assert_eq!(polygon_area(&edge), 0.0);
    }

    #[test]
    fn full_volume_examples() {
        assert_relative_eq!(full_volume(&DilationVector::ones(2)), 2.0, max_relative = 1e-15);
        assert_relative_eq!(full_volume(&DilationVector::ones(3)), 4.0 / 3.0, max_relative = 1e-15);
        let a = DilationVector::new(vec![2.0, 3.0]).unwrap();
        assert_relative_eq!(full_volume(&a), 12.0, max_relative = 1e-15);
    }

    #[test]
    fn k1_examples() {
        assert_relative_eq!(
            volume_k1(&body(2, &[&[1.0, 1.0]], &[1.0, 1.0])).unwrap(),
            2f64.sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(volume_k1(&body(2, &[&[1.0, 0.0]], &[1.7, 0.3])).unwrap(), 3.4, max_relative = 1e-15);
        assert_relative_eq!(
            volume_k1(&body(3, &[&[1.0, 1.0, 1.0]], &[1.0; 3])).unwrap(),
            2.0 * 3f64.sqrt() / 3.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn k2_examples() {
        let hex = body(3, &[&[1.0, -1.0, 0.0], &[1.0, 1.0, -2.0]], &[1.0; 3]);
        assert_relative_eq!(volume_k2(&hex).unwrap(), 3.0 * 3f64.sqrt() / 4.0, max_relative = 1e-12);
        let poly = section_polygon(&hex).unwrap();
        assert_eq!(poly.vertices().len(), 6);
        let plane = body(2, &[&[1.0, 0.0], &[0.0, 1.0]], &[1.0, 1.0]);
        assert_relative_eq!(volume_k2(&plane).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn k2_requires_rank_two() {
        let s = SubspaceSpec::new(3, GivenAs::Subspace, vec![vec![1.0, 1.0, 1.0]]).unwrap();
        let b = SectionBody::new(dim_profile(&s, false), DilationVector::ones(3)).unwrap();
        assert!(volume_k2(&b).is_err());
    }

    #[test]
    fn mc_matches_exact_k2() {
        let hex = body(3, &[&[1.0, -1.0, 0.0], &[1.0, 1.0, -2.0]], &[1.0, 2.0, 0.5]);
        let exact = volume_k2(&hex).unwrap();
        let est = volume_mc(&hex, &MCConfig::new(400_000, 100, 3).unwrap()).unwrap();
        assert_eq!(est.method, Method::OracleMc);
        assert!((est.value - exact).abs() <= 3.0 * est.stderr, "{exact} vs {est:?}");
    }
}
