//! The section problem: a central subspace `H`, a coordinate dilation, and the
//! column vectors `v₁,…,vₙ` that both volume formulas consume.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{complement_basis, orthonormalize, BasisMatrix, SymMatrix};

/// How the rows of a [`SubspaceSpec`] describe `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GivenAs {
    /// Rows span `H` itself.
    #[serde(rename = "H")]
    Subspace,
    /// Rows span the orthogonal complement of `H`.
    #[serde(rename = "complement")]
    Complement,
}

/// A linear subspace `H ⊆ Rⁿ`, given by a basis of `H` or of `H⊥`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSpec {
    given_as: GivenAs,
    basis: BasisMatrix,
    dim_h: usize,
}

impl SubspaceSpec {
    /// Validates `rows` (nonempty, all of length `n`, independent). The rows
    /// are stored as given.
    pub fn new(n: usize, given_as: GivenAs, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("subspace rows"));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        let basis = BasisMatrix::new(rows)?;
        let dim_h = match given_as {
            GivenAs::Subspace => basis.len(),
            GivenAs::Complement => n - basis.len(),
        };
        if dim_h == 0 {
            return Err(Error::Empty("subspace H (complement spans all of Rⁿ)"));
        }
        Ok(Self { given_as, basis, dim_h })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.dim_h
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim_h
    }

    pub fn given_as(&self) -> GivenAs {
        self.given_as
    }

    pub fn basis(&self) -> &BasisMatrix {
        &self.basis
    }

    /// The same subspace with coordinates reordered: new coordinate `i` is
    /// old coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let rows = self.basis.rows().iter().map(|r| perm.iter().map(|&p| r[p]).collect()).collect();
        Self::new(self.ambient_dim(), self.given_as, rows)
    }
}

/// Positive coordinate scales `a₁,…,aₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationVector(Vec<f64>);

impl DilationVector {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Empty("dilation"));
        }
        for (index, &value) in a.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveDilation { index, value });
            }
        }
        Ok(Self(a))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(perm.iter().map(|&p| self.0[p]).collect())
    }
}

/// Logarithmic dilation parameters, `aᵢ = e^{tᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogDilation(Vec<f64>);

impl LogDilation {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::Empty("log-dilation"));
        }
        if t.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("log-dilation"));
        }
        Ok(Self(t))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(self + other) / 2`, coordinatewise.
    pub fn midpoint(&self, other: &LogDilation) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(s, t)| 0.5 * (s + t)).collect())
    }

    /// `self + s·(1,…,1)`.
    pub fn shifted(&self, s: f64) -> Self {
        Self(self.0.iter().map(|t| t + s).collect())
    }
}

/// `aᵢ = exp(tᵢ)`; fails if any entry overflows.
pub fn to_dilation(t: &LogDilation) -> Result<DilationVector> {
    let a =
        t.0.iter()
            .map(|&x| {
                let e = x.exp();
                if e.is_finite() && e > 0.0 {
                    Ok(e)
                } else {
                    Err(Error::DilationOverflow { value: x })
                }
            })
            .collect::<Result<Vec<_>>>()?;
    Ok(DilationVector(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMode {
    /// Columns of an orthonormal basis of `H⊥`.
    Codim,
    /// Columns of a spanning basis of `H`.
    Dim,
}

impl ProfileMode {
    pub fn name(self) -> &'static str {
        match self {
            ProfileMode::Codim => "codim",
            ProfileMode::Dim => "dim",
        }
    }
}

/// The columns `v₁,…,vₙ ∈ Rᵏ` of a k×n generating matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnProfile {
    mode: ProfileMode,
    k: usize,
    columns: Vec<Vec<f64>>,
}

impl ColumnProfile {
    /// Profile from the rows of a k×n matrix.
    pub fn from_rows(mode: ProfileMode, basis: &BasisMatrix) -> Self {
        let columns = (0..basis.ambient_dim()).map(|i| basis.column(i)).collect();
        Self { mode, k: basis.len(), columns }
    }

    pub fn mode(&self) -> ProfileMode {
        self.mode
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    /// `Σᵢ vᵢ vᵢᵀ`.
    pub fn gram(&self) -> SymMatrix {
        let mut g = SymMatrix::zeros(self.k);
        for v in &self.columns {
            g.add_rank1(1.0, v);
        }
        g
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { mode: self.mode, k: self.k, columns: perm.iter().map(|&p| self.columns[p].clone()).collect() }
    }

    pub(crate) fn expect_mode(&self, mode: ProfileMode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(Error::WrongMode { expected: mode.name(), found: self.mode.name() })
        }
    }
}

/// Columns of an orthonormal basis of `H⊥` (the codimension formula's input).
pub fn codim_profile(s: &SubspaceSpec) -> Result<ColumnProfile> {
    let perp = match s.given_as {
        GivenAs::Complement => orthonormalize(&s.basis),
        GivenAs::Subspace => complement_basis(&s.basis)?,
    };
    Ok(ColumnProfile::from_rows(ProfileMode::Codim, &perp))
}

/// Columns of a spanning basis of `H` (the dimension formula's input). Rows
/// given for `H` are used as-is unless `orthonormalize_first` is set.
pub fn dim_profile(s: &SubspaceSpec, orthonormalize_first: bool) -> ColumnProfile {
    let span = match s.given_as {
        GivenAs::Subspace if orthonormalize_first => orthonormalize(&s.basis),
        GivenAs::Subspace => s.basis.clone(),
        GivenAs::Complement => complement_basis(&s.basis).expect("complement rows leave a nontrivial H"),
    };
    ColumnProfile::from_rows(ProfileMode::Dim, &span)
}
