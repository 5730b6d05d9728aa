//! Seeded random metrics and tensors for property checks, the self-test and benches.

use rand::Rng;

use crate::metric::Metric;
use crate::minkowski::{EMField, StressEnergyBlocks};
use crate::tensor::{Tensor2, Variance};
use crate::Matrix;

/// A random well-conditioned metric of random signature: `Pᵀ D P` with
/// `D` a diagonal of mixed signs (magnitudes in `[0.5, 2]`) and `P` a
/// perturbation of the identity.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Metric {
    loop {
        let d: Vec<f64> = (0..n)
            .map(|_| {
                let mag = rng.gen_range(0.5..2.0);
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let d = Matrix::from_diagonal(&nalgebra::DVector::from_vec(d));
        let p = Matrix::from_fn(n, n, |i, j| {
            let off = rng.gen_range(-0.5..0.5) / n as f64;
            if i == j {
                1.0 + off
            } else {
                off
            }
        });
        let g = p.transpose() * d * &p;
        let g = (&g + g.transpose()) * 0.5;
        if let Ok(m) = Metric::new(g) {
            return m;
        }
    }
}

fn uniform_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
}

/// Components uniform in `[-1, 1]`, no symmetry.
pub fn random_tensor<R: Rng + ?Sized>(rng: &mut R, n: usize, variance: Variance) -> Tensor2 {
    Tensor2::new(variance, uniform_matrix(rng, n)).expect("finite square components")
}

/// Symmetric contravariant tensor with components in `[-1, 1]`.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Tensor2 {
    let a = uniform_matrix(rng, n);
    Tensor2::new(Variance::UpUp, (&a + a.transpose()) * 0.5).expect("finite square components")
}

/// Symmetric traceless contravariant tensor: a random symmetric tensor with
/// `trace(A)/n · g^{ij}` removed.
pub fn random_symmetric_traceless<R: Rng + ?Sized>(rng: &mut R, n: usize, m: &Metric) -> Tensor2 {
    let a = random_symmetric(rng, n);
    let tr = a.trace(m).expect("dimension checked");
    let c = a.components() - m.g_inv() * (tr / n as f64);
    Tensor2::new(Variance::UpUp, c).expect("finite square components")
}

/// Antisymmetric contravariant tensor with components in `[-1, 1]`.
pub fn random_antisymmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Tensor2 {
    let a = uniform_matrix(rng, n);
    Tensor2::new(Variance::UpUp, (&a - a.transpose()) * 0.5).expect("finite square components")
}

/// Field components uniform in `[-range, range]`.
pub fn random_em_field<R: Rng + ?Sized>(rng: &mut R, range: f64) -> EMField {
    let mut v = || [(); 3].map(|_| rng.gen_range(-range..range));
    let e = v();
    let b = v();
    EMField { e, b }
}

/// Blocks with `d`, `p` and a symmetric `T`, all entries in `[-range, range]`.
pub fn random_blocks<R: Rng + ?Sized>(rng: &mut R, range: f64) -> StressEnergyBlocks {
    let d = rng.gen_range(-range..range);
    let p = [(); 3].map(|_| rng.gen_range(-range..range));
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let x = rng.gen_range(-range..range);
            t[i][j] = x;
            t[j][i] = x;
        }
    }
    StressEnergyBlocks { d, p, t }
}
