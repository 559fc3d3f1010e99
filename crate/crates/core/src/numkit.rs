//! Small dense linear algebra: symmetric matrices, determinants, Gram–Schmidt
//! and extremal eigenvalues.
//!
//! Everything here works at the sizes the section formulas need (orders up to
//! a few dozen), so plain `Vec<f64>` storage and textbook algorithms are used.

use crate::error::{Error, Result};

/// Relative tolerance for Cholesky pivots, scaled by the largest diagonal entry.
pub const PIVOT_TOL: f64 = 1e-12;

/// Relative residual below which a row counts as dependent on earlier rows.
pub const DEPENDENCE_TOL: f64 = 1e-10;

/// Threshold for discarding coordinate vectors while completing a basis.
pub const COMPLETION_TOL: f64 = 1e-8;

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Dense symmetric matrix of small order, stored in full row-major form.
///
/// Every mutating method writes both triangles, so `m[(i, j)] == m[(j, i)]`
/// holds bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        Self { order, data: vec![0.0; order * order] }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.data[i * order + i] = 1.0;
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    /// Builds a matrix from the upper triangle of `rows` (the lower triangle
    /// is ignored and mirrored).
    pub fn from_upper(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::Empty("matrix rows"));
        }
        let mut m = Self::zeros(k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: row.len() });
            }
            for j in i..k {
                if !row[j].is_finite() {
                    return Err(Error::NonFinite("matrix entry"));
                }
                m.set(i, j, row[j]);
            }
        }
        Ok(m)
    }

    /// The outer product `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        let mut m = Self::zeros(v.len());
        m.add_rank1(1.0, v);
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.order + j] = value;
        self.data[j * self.order + i] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.order).map(<[f64]>::to_vec).collect()
    }

    /// `self += weight · v vᵀ`.
    pub fn add_rank1(&mut self, weight: f64, v: &[f64]) {
        debug_assert_eq!(v.len(), self.order);
        let k = self.order;
        for i in 0..k {
            let wi = weight * v[i];
            for j in i..k {
                let value = self.data[i * k + j] + wi * v[j];
                self.data[i * k + j] = value;
                self.data[j * k + i] = value;
            }
        }
    }

    /// `self += weight · other`.
    pub fn add_scaled(&mut self, weight: f64, other: &SymMatrix) {
        debug_assert_eq!(self.order, other.order);
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += weight * y;
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { order: self.order, data: self.data.iter().map(|x| x * factor).collect() }
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Determinant by Gaussian elimination with partial pivoting. Works for
    /// indefinite input; use [`cholesky_logdet`] for positive definite sums.
    pub fn det(&self) -> f64 {
        let k = self.order;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..k {
            let pivot = (col..k).max_by(|&r, &s| a[r * k + col].abs().total_cmp(&a[s * k + col].abs())).unwrap_or(col);
            if a[pivot * k + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..k {
                    a.swap(col * k + j, pivot * k + j);
                }
                det = -det;
            }
            let p = a[col * k + col];
            det *= p;
            for r in col + 1..k {
                let factor = a[r * k + col] / p;
                if factor != 0.0 {
                    for j in col..k {
                        a[r * k + j] -= factor * a[col * k + j];
                    }
                }
            }
        }
        det
    }

    /// Eigenvalues in ascending order (cyclic Jacobi rotations).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let k = self.order;
        let mut a = self.data.clone();
        let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if scale > 0.0 {
            for _sweep in 0..100 {
                let off: f64 = (0..k)
                    .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
                    .map(|(i, j)| a[i * k + j] * a[i * k + j])
                    .sum::<f64>()
                    .sqrt();
                if off <= 1e-15 * scale {
                    break;
                }
                for p in 0..k {
                    for q in p + 1..k {
                        let apq = a[p * k + q];
                        if apq == 0.0 {
                            continue;
                        }
                        let theta = (a[q * k + q] - a[p * k + p]) / (2.0 * apq);
                        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                        let t = if theta == 0.0 { 1.0 } else { t };
                        let c = 1.0 / (t * t + 1.0).sqrt();
                        let s = t * c;
                        for r in 0..k {
                            let arp = a[r * k + p];
                            let arq = a[r * k + q];
                            a[r * k + p] = c * arp - s * arq;
                            a[r * k + q] = s * arp + c * arq;
                        }
                        for r in 0..k {
                            let apr = a[p * k + r];
                            let aqr = a[q * k + r];
                            a[p * k + r] = c * apr - s * aqr;
                            a[q * k + r] = s * apr + c * aqr;
                        }
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..k).map(|i| a[i * k + i]).collect();
        eig.sort_by(f64::total_cmp);
        eig
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.order + j]
    }
}

/// Log-determinant of a symmetric positive definite matrix via Cholesky.
///
/// Returns `None` when a pivot falls below `PIVOT_TOL` times the largest
/// diagonal entry (singular, indefinite or zero input).
pub fn cholesky_logdet(m: &SymMatrix) -> Option<f64> {
    let k = m.order;
    let max_diag = (0..k).map(|i| m.get(i, i)).fold(0.0, f64::max);
    if !(max_diag > 0.0) || !max_diag.is_finite() {
        return None;
    }
    let tol = PIVOT_TOL * max_diag;
    let mut l = vec![0.0; k * k];
    let mut logdet = 0.0;
    for j in 0..k {
        let mut d = m.get(j, j);
        for p in 0..j {
            d -= l[j * k + p] * l[j * k + p];
        }
        if !(d > tol) {
            return None;
        }
        let ljj = d.sqrt();
        l[j * k + j] = ljj;
        logdet += d.ln();
        for i in j + 1..k {
            let mut s = m.get(i, j);
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            l[i * k + j] = s / ljj;
        }
    }
    Some(logdet)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix entry"));
    }
    Ok(m.eigenvalues()[0])
}

/// A list of linearly independent row vectors in Rⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrix {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl BasisMatrix {
    /// Validates dimensions, finiteness and linear independence of `rows`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.first().ok_or(Error::Empty("basis rows"))?.len();
        if n == 0 {
            return Err(Error::Empty("basis row entries"));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("basis row"));
            }
        }
        if rows.len() > n {
            return Err(Error::DependentRow { row: n });
        }
        gram_schmidt(&rows)?;
        Ok(Self { n, rows })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Gram matrix `B Bᵀ` of the rows.
    pub fn gram(&self) -> SymMatrix {
        let k = self.rows.len();
        let mut g = SymMatrix::zeros(k);
        for i in 0..k {
            for j in i..k {
                g.set(i, j, dot(&self.rows[i], &self.rows[j]));
            }
        }
        g
    }

    /// Column `i` of the k×n matrix whose rows are the basis vectors.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass. Returns the
/// orthonormal rows, or the index of the first dependent row.
fn gram_schmidt(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    for (idx, row) in rows.iter().enumerate() {
        let original = norm(row);
        let w = residual(row, &out);
        let len = norm(&w);
        if !(original > 0.0 && len > DEPENDENCE_TOL * original) {
            return Err(Error::DependentRow { row: idx });
        }
        out.push(w.into_iter().map(|x| x / len).collect());
    }
    Ok(out)
}

fn residual(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for _pass in 0..2 {
        for q in basis {
            let c = dot(&w, q);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
    }
    w
}

/// Component of `v` orthogonal to the orthonormal `basis`, normalized.
fn project_out(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let w = residual(v, basis);
    let len = norm(&w);
    (len > 0.0).then(|| w.into_iter().map(|x| x / len).collect())
}

/// Flips `v` so that its first entry with magnitude above 1e-12 is positive.
fn fix_sign(v: &mut [f64]) {
    if let Some(&lead) = v.iter().find(|x| x.abs() > 1e-12) {
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Orthonormal basis of the row space of `b`, each row's first nonzero entry
/// made positive.
pub fn orthonormalize(b: &BasisMatrix) -> BasisMatrix {
    let mut rows = gram_schmidt(&b.rows).expect("BasisMatrix rows are independent");
    rows.iter_mut().for_each(|r| fix_sign(r));
    BasisMatrix { n: b.n, rows }
}

/// Orthonormal basis of the orthogonal complement of the row space of `b`,
/// obtained by completing with coordinate vectors.
pub fn complement_basis(b: &BasisMatrix) -> Result<BasisMatrix> {
    if b.len() >= b.n {
        return Err(Error::TrivialComplement { n: b.n });
    }
    let mut all = gram_schmidt(&b.rows)?;
    let start = all.len();
    for j in 0..b.n {
        if all.len() == b.n {
            break;
        }
        let mut e = vec![0.0; b.n];
        e[j] = 1.0;
        let w = residual(&e, &all);
        if norm(&w) > COMPLETION_TOL {
            if let Some(q) = project_out(&w, &all) {
                all.push(q);
            }
        }
    }
    debug_assert_eq!(all.len(), b.n);
    let mut rows = all.split_off(start);
    rows.iter_mut().for_each(|r| fix_sign(r));
    Ok(BasisMatrix { n: b.n, rows })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let m = order;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn basis(rows: &[&[f64]]) -> BasisMatrix {
        BasisMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn gram_deviation(b: &BasisMatrix) -> f64 {
        b.gram().max_abs_diff(&SymMatrix::identity(b.len()))
    }

    #[test]
    fn logdet_identity_and_diagonal() {
        assert_eq!(cholesky_logdet(&SymMatrix::identity(3)), Some(0.0));
        let ld = cholesky_logdet(&SymMatrix::diagonal(&[2.0, 8.0])).unwrap();
        assert_relative_eq!(ld, 16f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn logdet_flags_rank_one() {
        assert_eq!(cholesky_logdet(&SymMatrix::outer(&[1.0, 1.0])), None);
        assert_eq!(cholesky_logdet(&SymMatrix::zeros(2)), None);
        assert_eq!(cholesky_logdet(&SymMatrix::diagonal(&[1.0, -1.0])), None);
    }

    #[test]
    fn logdet_pivot_is_scale_relative() {
        let m = SymMatrix::diagonal(&[1e-20, 3e-20]);
        assert_relative_eq!(cholesky_logdet(&m).unwrap(), (3e-40f64).ln(), max_relative = 1e-12);
    }

    #[test]
    fn lu_det_handles_indefinite() {
        let m = SymMatrix::from_upper(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert_relative_eq!(m.det(), -4.0);
        let m = SymMatrix::from_upper(&[vec![2.0, -1.0, 0.0], vec![0.0, 2.0, -1.0], vec![0.0, 0.0, 2.0]]).unwrap();
        assert_relative_eq!(m.det(), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn orthonormalize_examples() {
        let q = orthonormalize(&basis(&[&[2.0, 0.0], &[0.0, 3.0]]));
        assert_eq!(q.rows(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);

        let q = orthonormalize(&basis(&[&[1.0, 1.0, 0.0]]));
        let h = 0.5f64.sqrt();
        assert_relative_eq!(q.rows()[0][0], h, epsilon = 1e-15);
        assert_relative_eq!(q.rows()[0][1], h, epsilon = 1e-15);
        assert_eq!(q.rows()[0][2], 0.0);

        let q = orthonormalize(&basis(&[&[1.0, 0.0], &[1.0, 1.0]]));
        assert!(gram_deviation(&q) <= 1e-10);
    }

    #[test]
    fn dependent_rows_are_named() {
        let err = BasisMatrix::new(vec![vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::DependentRow { row: 1 });
        let err = BasisMatrix::new(vec![vec![0.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::DependentRow { row: 0 });
        let err = BasisMatrix::new(vec![vec![1.0, 0.0], vec![0.0]]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn complement_examples() {
        let c = complement_basis(&basis(&[&[1.0, 0.0, 0.0]])).unwrap();
        assert_eq!(c.len(), 2);
        assert!(gram_deviation(&c) <= 1e-12);
        for r in c.rows() {
            assert!(r[0].abs() <= 1e-12);
        }

        let h = 0.5f64.sqrt();
        let c = complement_basis(&basis(&[&[h, h]])).unwrap();
        assert_relative_eq!(c.rows()[0][0], h, epsilon = 1e-12);
        assert_relative_eq!(c.rows()[0][1], -h, epsilon = 1e-12);

        let s = 1.0 / 3f64.sqrt();
        let c = complement_basis(&basis(&[&[s, s, s]])).unwrap();
        assert_eq!(c.len(), 2);
        for r in c.rows() {
            assert!(r.iter().sum::<f64>().abs() <= 1e-12);
        }

        let full = basis(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(complement_basis(&full).unwrap_err(), Error::TrivialComplement { n: 2 });
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        let p18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert_relative_eq!(p18, 2.0 / 19.0, epsilon = 1e-14);
        let (x, w) = gauss_legendre(1);
        assert_eq!((x[0], w[0]), (0.0, 2.0));
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_relative_eq!(min_eigenvalue(&SymMatrix::diagonal(&[1.0, 4.0])).unwrap(), 1.0);
        assert_relative_eq!(min_eigenvalue(&SymMatrix::identity(5)).unwrap(), 1.0);
        assert!(min_eigenvalue(&SymMatrix::outer(&[1.0, 0.0])).unwrap().abs() <= 1e-15);
        let m = SymMatrix::from_upper(&[vec![2.0, 1.0], vec![0.0, 2.0]]).unwrap();
        assert_relative_eq!(min_eigenvalue(&m).unwrap(), 1.0, max_relative = 1e-12);
    }
}
