//! Constant metric tensors of flat pseudo-Riemannian spaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_diff};
use crate::Matrix;

/// Relative tolerance for `g_ij = g_ji`.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Scale-relative threshold on `|det g|` and on eigenvalue magnitudes.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Allowed deviation of `g^{ij} g_{jk}` from the Kronecker delta.
pub const INVERSE_TOL: f64 = 1e-10;

/// A symmetric nondegenerate bilinear form `g_ij` with its inverse `g^ij`.
///
/// Immutable once constructed; every constructor validates symmetry,
/// nondegeneracy and the inverse contract.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    g: Matrix,
    g_inv: Matrix,
    signature: Signature,
}

/// Inertia `(p, q)`: counts of positive and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Metric {
    pub fn new(g: Matrix) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::InvalidDimension(format!(
                "metric must be square, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        let n = g.nrows();
        if n < 2 {
            return Err(Error::InvalidDimension(format!(
                "metric dimension must be at least 2, got {n}"
            )));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("metric has non-finite entries".into()));
        }

        let scale = max_abs(&g);
        let asym = max_abs_diff(&g, &g.transpose());
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::AsymmetricMetric { deviation: asym });
        }

        let row_norm = g.row_iter().map(|r| r.norm()).fold(0.0, f64::max);
        let det = g.determinant();
        if row_norm == 0.0 || det.abs() < DEGENERACY_TOL * row_norm.powi(n as i32) {
            return Err(Error::DegenerateMetric {
                reason: format!("|det g| = {:e} below threshold", det.abs()),
            });
        }

        let eig = nalgebra::SymmetricEigen::new(g.clone());
        let radius = eig.eigenvalues.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let band = DEGENERACY_TOL * radius;
        let mut signature = Signature { positive: 0, negative: 0 };
        for &lambda in eig.eigenvalues.iter() {
            if lambda.abs() <= band {
                return Err(Error::DegenerateMetric {
                    reason: format!("eigenvalue {lambda:e} within zero band {band:e}"),
                });
            }
            if lambda > 0.0 {
                signature.positive += 1;
            } else {
                signature.negative += 1;
            }
        }

        let g_inv = g.clone().lu().try_inverse().ok_or_else(|| Error::DegenerateMetric {
            reason: "LU factorization is singular".into(),
        })?;
        // keep g^ij exactly symmetric
        let g_inv = (&g_inv + g_inv.transpose()) * 0.5;
        let residual = max_abs_diff(&(&g_inv * &g), &Matrix::identity(n, n));
        if residual > INVERSE_TOL {
            return Err(Error::DegenerateMetric {
                reason: format!("inverse contract violated by {residual:e}"),
            });
        }

        Ok(Metric { g, g_inv, signature })
    }

    /// The Minkowski metric `diag(1, -1, -1, -1)`; index 0 is time.
    pub fn minkowski() -> Self {
        let g = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0, -1.0]));
        Metric {
            g_inv: g.clone(),
            g,
            signature: Signature { positive: 1, negative: 3 },
        }
    }

    /// The identity metric of dimension `n >= 2`.
    pub fn euclidean(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(format!(
                "metric dimension must be at least 2, got {n}"
            )));
        }
        Ok(Metric {
            g: Matrix::identity(n, n),
            g_inv: Matrix::identity(n, n),
            signature: Signature { positive: n, negative: 0 },
        })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// Covariant components `g_ij`.
    pub fn g(&self) -> &Matrix {
        &self.g
    }

    /// Contravariant components `g^ij`.
    pub fn g_inv(&self) -> &Matrix {
        &self.g_inv
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    fn diag(v: &[f64]) -> Matrix {
        Matrix::from_diagonal(&nalgebra::DVector::from_row_slice(v))
    }

    #[test]
    fn identity_metric() {
        let m = Metric::new(Matrix::identity(3, 3)).unwrap();
        assert_eq!(m.signature(), Signature { positive: 3, negative: 0 });
        assert_eq!(m.g_inv(), &Matrix::identity(3, 3));
    }

    #[test]
    fn lorentzian_diagonal() {
        let m = Metric::new(diag(&[1.0, -1.0, -1.0, -1.0])).unwrap();
        assert_eq!(m.signature(), Signature { positive: 1, negative: 3 });
        assert_eq!(m.g_inv(), &diag(&[1.0, -1.0, -1.0, -1.0]));
        assert_eq!(m, Metric::minkowski());
    }

    #[test]
    fn degenerate_rejected() {
        let err = Metric::new(diag(&[1.0, 0.0])).unwrap_err();
        assert_eq!(err.name(), "DegenerateMetric");
        let err = Metric::new(dmatrix![1.0, 1.0; 1.0, 1.0]).unwrap_err();
        assert_eq!(err.name(), "DegenerateMetric");
    }

    #[test]
    fn asymmetric_rejected() {
        let err = Metric::new(dmatrix![1.0, 0.5; 0.0, 1.0]).unwrap_err();
        assert_eq!(err.name(), "AsymmetricMetric");
    }

    #[test]
    fn shape_errors() {
        assert_eq!(Metric::euclidean(1).unwrap_err().name(), "InvalidDimension");
        assert_eq!(Metric::new(Matrix::identity(1, 1)).unwrap_err().name(), "InvalidDimension");
        assert_eq!(Metric::new(Matrix::zeros(2, 3)).unwrap_err().name(), "InvalidDimension");
    }

    #[test]
    fn euclidean_shortcut() {
        let m = Metric::euclidean(4).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.signature(), Signature { positive: 4, negative: 0 });
        assert_eq!(Metric::euclidean(2).unwrap().g(), &Matrix::identity(2, 2));
    }

    #[test]
    fn minkowski_is_self_inverse() {
        let m = Metric::minkowski();
        assert_eq!(m.g(), m.g_inv());
        assert_eq!(m.signature(), Signature { positive: 1, negative: 3 });
    }

    #[test]
    fn deterministic_construction() {
        let g = dmatrix![2.0, 0.3, -0.1; 0.3, -1.5, 0.2; -0.1, 0.2, 0.7];
        assert_eq!(Metric::new(g.clone()).unwrap(), Metric::new(g).unwrap());
    }

    proptest! {
        #[test]
        fn inertia_is_congruence_invariant(
            signs in proptest::collection::vec(prop::bool::ANY, 2..6),
            mags in proptest::collection::vec(0.5f64..2.0, 6),
            entries in proptest::collection::vec(-0.4f64..0.4, 36),
        ) {
            let n = signs.len();
            let d: Vec<f64> = signs.iter().zip(&mags).map(|(s, m)| if *s { *m } else { -*m }).collect();
            let base = Metric::new(diag(&d)).unwrap();
            // P = I + small perturbation stays invertible
            let p = Matrix::from_fn(n, n, |i, j| entries[i * 6 + j] / n as f64 + if i == j { 1.0 } else { 0.0 });
            let congruent = p.transpose() * diag(&d) * &p;
            let congruent = (&congruent + congruent.transpose()) * 0.5;
            let m = Metric::new(congruent).unwrap();
            prop_assert_eq!(m.signature(), base.signature());
            let residual = max_abs_diff(&(m.g_inv() * m.g()), &Matrix::identity(n, n));
            prop_assert!(residual <= INVERSE_TOL);
        }
    }
}
