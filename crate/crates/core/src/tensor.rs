//! Second-order tensors in the four index placements.
//!
//! All products and traces are evaluated on the mixed `A^i_{·j}` form (`UpDown`),
//! and results are converted back to the caller's placement.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_diff};
use crate::metric::Metric;
use crate::Matrix;

/// Default relative tolerance for [`Tensor2::classify`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Index placement of a second-order tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variance {
    /// `A^{ij}`
    #[serde(rename = "uu")]
    UpUp,
    /// `A_{ij}`
    #[serde(rename = "dd")]
    DownDown,
    /// `A_i^{·j}`, covariant index first.
    #[serde(rename = "du")]
    DownUp,
    /// `A^i_{·j}`, contravariant index first.
    #[serde(rename = "ud")]
    UpDown,
}

impl Variance {
    pub const ALL: [Variance; 4] =
        [Variance::UpUp, Variance::DownDown, Variance::DownUp, Variance::UpDown];

    pub fn tag(self) -> &'static str {
        match self {
            Variance::UpUp => "uu",
            Variance::DownDown => "dd",
            Variance::DownUp => "du",
            Variance::UpDown => "ud",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TensorClass {
    Symmetric,
    SymmetricTraceless,
    Antisymmetric,
    General,
}

impl TensorClass {
    pub fn is_symmetric(self) -> bool {
        matches!(self, TensorClass::Symmetric | TensorClass::SymmetricTraceless)
    }
}

impl fmt::Display for TensorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TensorClass::Symmetric => "Symmetric",
            TensorClass::SymmetricTraceless => "SymmetricTraceless",
            TensorClass::Antisymmetric => "Antisymmetric",
            TensorClass::General => "General",
        };
        f.write_str(s)
    }
}

/// Dense second-order tensor; row index is the first tensor index.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2 {
    variance: Variance,
    c: Matrix,
}

impl Tensor2 {
    pub fn new(variance: Variance, c: Matrix) -> Result<Self> {
        if !c.is_square() {
            return Err(Error::InvalidDimension(format!(
                "tensor components must be square, got {}x{}",
                c.nrows(),
                c.ncols()
            )));
        }
        if c.nrows() == 0 {
            return Err(Error::InvalidDimension("tensor has no components".into()));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("tensor has non-finite components".into()));
        }
        Ok(Tensor2 { variance, c })
    }

    /// The Kronecker delta `δ^i_{·j}`.
    pub fn identity_mixed(n: usize) -> Self {
        Tensor2 { variance: Variance::UpDown, c: Matrix::identity(n, n) }
    }

    pub fn zeros(n: usize, variance: Variance) -> Self {
        Tensor2 { variance, c: Matrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn components(&self) -> &Matrix {
        &self.c
    }

    pub fn into_components(self) -> Matrix {
        self.c
    }

    /// Components of the mixed form `A^i_{·j}`.
    pub fn mixed(&self, m: &Metric) -> Result<Matrix> {
        m.check_dim(self.dim())?;
        let (g, gi) = (m.g(), m.g_inv());
        Ok(match self.variance {
            Variance::UpDown => self.c.clone(),
            Variance::UpUp => &self.c * g,
            Variance::DownDown => gi * &self.c,
            Variance::DownUp => gi * &self.c * g,
        })
    }

    /// Build a tensor in `target` placement from mixed `A^i_{·j}` components.
    pub fn from_mixed(mixed: Matrix, m: &Metric, target: Variance) -> Result<Self> {
        m.check_dim(mixed.nrows())?;
        let (g, gi) = (m.g(), m.g_inv());
        let c = match target {
            Variance::UpDown => mixed,
            Variance::UpUp => mixed * gi,
            Variance::DownDown => g * mixed,
            Variance::DownUp => g * mixed * gi,
        };
        Tensor2::new(target, c)
    }

    /// Re-express the components in another index placement.
    pub fn convert(&self, m: &Metric, target: Variance) -> Result<Self> {
        m.check_dim(self.dim())?;
        if target == self.variance {
            return Ok(self.clone());
        }
        Tensor2::from_mixed(self.mixed(m)?, m, target)
    }

    /// Transpose; mixed placements swap between `UpDown` and `DownUp`.
    pub fn transpose(&self) -> Self {
        let variance = match self.variance {
            Variance::UpDown => Variance::DownUp,
            Variance::DownUp => Variance::UpDown,
            v => v,
        };
        Tensor2 { variance, c: self.c.transpose() }
    }

    /// Symmetry class, decided on the contravariant form.
    ///
    /// The zero tensor is both symmetric and antisymmetric and is reported as
    /// [`TensorClass::SymmetricTraceless`]. Antisymmetric tensors are never
    /// reported as traceless-symmetric.
    pub fn classify(&self, m: &Metric, tol: f64) -> Result<TensorClass> {
        let up = self.convert(m, Variance::UpUp)?;
        let a = up.components();
        let scale = max_abs(a);
        let at = a.transpose();
        let sym = max_abs_diff(a, &at) <= tol * scale;
        let anti = (a + &at).iter().fold(0.0_f64, |acc, x| acc.max(x.abs())) <= tol * scale;
        if sym {
            let mixed = self.mixed(m)?;
            let n = self.dim() as f64;
            if mixed.trace().abs() <= tol * n * max_abs(&mixed) {
                Ok(TensorClass::SymmetricTraceless)
            } else {
                Ok(TensorClass::Symmetric)
            }
        } else if anti {
            Ok(TensorClass::Antisymmetric)
        } else {
            Ok(TensorClass::General)
        }
    }

    /// Metric-contracted product, returned in the placement of `self`.
    pub fn compose(&self, other: &Tensor2, m: &Metric) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let prod = self.mixed(m)? * other.mixed(m)?;
        Tensor2::from_mixed(prod, m, self.variance)
    }

    /// `k`-th power under [`compose`](Self::compose), `k >= 1`.
    pub fn power(&self, m: &Metric, k: usize) -> Result<Self> {
        if k == 1 {
            m.check_dim(self.dim())?;
            return Ok(self.clone());
        }
        let mixed = mixed_power(&self.mixed(m)?, k)?;
        Tensor2::from_mixed(mixed, m, self.variance)
    }

    /// Metric trace; the same value for every placement of the tensor.
    pub fn trace(&self, m: &Metric) -> Result<f64> {
        Ok(self.mixed(m)?.trace())
    }

    pub fn trace_power(&self, m: &Metric, k: usize) -> Result<f64> {
        Ok(mixed_power(&self.mixed(m)?, k)?.trace())
    }

    /// `trace(A^k)` for `k = 1..=kmax`.
    pub fn trace_powers(&self, m: &Metric, kmax: usize) -> Result<Vec<f64>> {
        let mixed = self.mixed(m)?;
        Ok(mixed_trace_powers(&mixed, kmax))
    }

    /// The three degree-two contractions of a tensor with itself:
    /// `A^{ij}g_{jk}A^{kl}g_{li}` (= trace(A²)), `A^{ij}g_{jk}A^{lk}g_{li}` and
    /// `A^{ji}g_{jk}A^{lk}g_{li}`.
    pub fn degree_two_contractions(&self, m: &Metric) -> Result<[f64; 3]> {
        let a = self.convert(m, Variance::UpUp)?.c;
        let g = m.g();
        let at = a.transpose();
        Ok([
            (&a * g * &a * g).trace(),
            (&a * g * &at * g).trace(),
            (&at * g * &at * g).trace(),
        ])
    }
}

pub(crate) fn mixed_power(mixed: &Matrix, k: usize) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("power exponent must be at least 1".into()));
    }
    let mut acc = mixed.clone();
    for _ in 1..k {
        acc = &acc * mixed;
    }
    Ok(acc)
}

pub(crate) fn mixed_trace_powers(mixed: &Matrix, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax);
    let mut acc = mixed.clone();
    for k in 1..=kmax {
        if k > 1 {
            acc = &acc * mixed;
        }
        out.push(acc.trace());
    }
    out
}
