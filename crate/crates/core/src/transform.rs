//! Isometries of a metric and empirical invariance certification.
//!
//! Proper isometries are sampled as `Λ = exp(g^{-1} S)` with `S` antisymmetric,
//! which guarantees `Λᵀ g Λ = g` and `det Λ = +1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::invariants::char_poly_mixed;
use crate::linalg::inf_norm;
use crate::metric::Metric;
use crate::minkowski::EMField;
use crate::tensor::{mixed_trace_powers, Tensor2, TensorClass, Variance, DEFAULT_CLASSIFY_TOL};
use crate::Matrix;

pub const TAYLOR_ORDER: usize = 12;
/// Generators are scaled down until `‖X/2^s‖_∞` is at most this.
pub const SCALED_NORM: f64 = 0.5;
/// Relative deviation above which a scalar is reported as not invariant.
pub const INVARIANCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    lambda: Matrix,
    inverse: Matrix,
    generator: Matrix,
    det_sign: i8,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry {
            lambda: Matrix::identity(n, n),
            inverse: Matrix::identity(n, n),
            generator: Matrix::zeros(n, n),
            det_sign: 1,
        }
    }

    /// `Λ = exp(g^{-1} S)` for an antisymmetric `S`.
    pub fn from_generator(m: &Metric, s: &Matrix) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::InvalidDimension("generator must be square".into()));
        }
        m.check_dim(s.nrows())?;
        let x = m.g_inv() * s;
        let lambda = expm(&x);
        let inverse = m.g_inv() * lambda.transpose() * m.g();
        Ok(Isometry { lambda, inverse, generator: x, det_sign: 1 })
    }

    pub fn dim(&self) -> usize {
        self.lambda.nrows()
    }

    /// The transformation matrix acting on contravariant components.
    pub fn matrix(&self) -> &Matrix {
        &self.lambda
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    /// `g^{-1} S` for exp-generated elements; zero for composed ones.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            lambda: &self.lambda * &other.lambda,
            inverse: &other.inverse * &self.inverse,
            generator: Matrix::zeros(self.dim(), self.dim()),
            det_sign: self.det_sign * other.det_sign,
        }
    }

    /// Transform a tensor, keeping its placement.
    pub fn apply(&self, t: &Tensor2) -> Result<Tensor2> {
        if t.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: t.dim() });
        }
        let (l, li) = (&self.lambda, &self.inverse);
        let c = t.components();
        let out = match t.variance() {
            Variance::UpUp => l * c * l.transpose(),
            Variance::DownDown => li.transpose() * c * li,
            Variance::UpDown => l * c * li,
            Variance::DownUp => li.transpose() * c * l.transpose(),
        };
        Tensor2::new(t.variance(), out)
    }

    /// Max entry of `|Λᵀ g Λ − g|`.
    pub fn metric_defect(&self, m: &Metric) -> f64 {
        let d = self.lambda.transpose() * m.g() * &self.lambda - m.g();
        d.iter().fold(0.0, |a, x| a.max(x.abs()))
    }
}

/// The reflection `R = I − 2 v vᵀ g / (vᵀ g v)` along an eigenvector `v` of `g`,
/// preferring a negative eigenvalue. For Minkowski this flips spatial axis 1.
pub fn reflection(m: &Metric) -> Isometry {
    let n = m.dim();
    let g = m.g();
    let is_diagonal = (0..n).all(|i| (0..n).all(|j| i == j || g[(i, j)] == 0.0));
    let v = if is_diagonal {
        let idx = (0..n).find(|&i| g[(i, i)] < 0.0).unwrap_or(0);
        nalgebra::DVector::from_fn(n, |i, _| if i == idx { 1.0 } else { 0.0 })
    } else {
        let eig = nalgebra::SymmetricEigen::new(g.clone());
        let idx = (0..n)
            .filter(|&i| eig.eigenvalues[i] < 0.0)
            .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
            .unwrap_or(0);
        eig.eigenvectors.column(idx).into_owned()
    };
    let gv = g * &v;
    let norm = v.dot(&gv);
    let r = Matrix::identity(n, n) - (&v * gv.transpose()) * (2.0 / norm);
    Isometry {
        inverse: r.clone(),
        lambda: r,
        generator: Matrix::zeros(n, n),
        det_sign: -1,
    }
}

/// Scaling-and-squaring Taylor matrix exponential.
pub fn expm(x: &Matrix) -> Matrix {
    let n = x.nrows();
    let norm = inf_norm(x);
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > SCALED_NORM {
        squarings += 1;
    }
    let scaled = x / 2f64.powi(squarings);
    let mut term = Matrix::identity(n, n);
    let mut sum = Matrix::identity(n, n);
    for k in 1..=TAYLOR_ORDER {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Random antisymmetric `S` with entries uniform in `[−scale, scale]`.
pub fn random_generator<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Matrix {
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = if scale > 0.0 { rng.gen_range(-scale..=scale) } else { 0.0 };
            s[(i, j)] = x;
            s[(j, i)] = -x;
        }
    }
    s
}

/// Proper isometry sampled deterministically from `seed`.
pub fn random_isometry(m: &Metric, seed: u64, scale: f64) -> Result<Isometry> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("generator scale must be >= 0, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_generator(&mut rng, m.dim(), scale);
    Isometry::from_generator(m, &s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Invariant,
    /// Changes sign under every sample (a pseudoscalar under improper maps).
    SignFlip,
    NotInvariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarKind {
    TracePower,
    Coefficient,
    Pseudoscalar,
    FieldCombination,
    Probe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarReport {
    pub name: String,
    pub kind: ScalarKind,
    pub before: f64,
    /// `max |after − before| / max(1, |before|)` over samples.
    pub max_rel_dev: f64,
    /// `max |after + before| / max(1, |before|)` over samples.
    pub max_rel_flip: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub samples: usize,
    pub seed: u64,
    pub scale: f64,
    pub improper: bool,
    pub class: TensorClass,
    pub max_metric_defect: f64,
    pub scalars: Vec<ScalarReport>,
}

impl InvarianceReport {
    pub fn scalar(&self, name: &str) -> Option<&ScalarReport> {
        self.scalars.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceOptions {
    pub samples: usize,
    pub seed: u64,
    pub scale: f64,
    pub improper: bool,
    pub execution: Execution,
}

impl Default for InvarianceOptions {
    fn default() -> Self {
        InvarianceOptions {
            samples: 100,
            seed: 0,
            scale: 1.0,
            improper: false,
            execution: Execution::default(),
        }
    }
}

/// Pfaffian of a 4×4 antisymmetric matrix.
pub(crate) fn pfaffian4(a: &Matrix) -> f64 {
    a[(0, 1)] * a[(2, 3)] - a[(0, 2)] * a[(1, 3)] + a[(0, 3)] * a[(1, 2)]
}

/// Named scalars evaluated on a tensor.
fn evaluate(t: &Tensor2, m: &Metric, class: TensorClass) -> Result<Vec<(String, ScalarKind, f64)>> {
    let n = t.dim();
    let mixed = t.mixed(m)?;
    let mut out = Vec::new();
    for (k, p) in mixed_trace_powers(&mixed, n).into_iter().enumerate() {
        out.push((format!("trace(A^{})", k + 1), ScalarKind::TracePower, p));
    }
    for (k, a) in char_poly_mixed(&mixed).a.into_iter().enumerate() {
        out.push((format!("a{}", k + 1), ScalarKind::Coefficient, a));
    }
    if n == 4 && class == TensorClass::Antisymmetric {
        let up = t.convert(m, Variance::UpUp)?;
        out.push(("pf(A)".into(), ScalarKind::Pseudoscalar, pfaffian4(up.components())));
        if m == &Metric::minkowski() {
            let f = EMField::from_tensor(&up)?;
            out.push(("e.e-b.b".into(), ScalarKind::FieldCombination, f.ee() - f.bb()));
            out.push(("(e.b)^2".into(), ScalarKind::FieldCombination, f.eb() * f.eb()));
            out.push(("e.b".into(), ScalarKind::Pseudoscalar, f.eb()));
            out.push(("e.e".into(), ScalarKind::Probe, f.ee()));
            out.push(("b.b".into(), ScalarKind::Probe, f.bb()));
        }
    }
    Ok(out)
}

/// Evaluate candidate scalars before and after `options.samples` random
/// isometries (sample `i` uses seed `seed + i`).
pub fn invariance_report(t: &Tensor2, m: &Metric, options: &InvarianceOptions) -> Result<InvarianceReport> {
    m.check_dim(t.dim())?;
    if options.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if !(options.scale >= 0.0 && options.scale.is_finite()) {
        return Err(Error::InvalidArgument("generator scale must be >= 0".into()));
    }
    let class = t.classify(m, DEFAULT_CLASSIFY_TOL)?;
    let before = evaluate(t, m, class)?;
    let flip = options.improper.then(|| reflection(m));

    let per_sample: Vec<Result<(f64, Vec<f64>)>> =
        options.execution.map_indexed(options.samples, |i| {
            let mut iso = random_isometry(m, options.seed.wrapping_add(i as u64), options.scale)?;
            if let Some(r) = &flip {
                iso = r.compose(&iso);
            }
            let after = evaluate(&iso.apply(t)?, m, class)?;
            Ok((iso.metric_defect(m), after.into_iter().map(|(_, _, v)| v).collect()))
        });

    let mut max_dev = vec![0.0_f64; before.len()];
    let mut max_flip = vec![0.0_f64; before.len()];
    let mut max_defect = 0.0_f64;
    for sample in per_sample {
        let (defect, after) = sample?;
        max_defect = max_defect.max(defect);
        for (i, ((_, _, b), a)) in before.iter().zip(after).enumerate() {
            let denom = b.abs().max(1.0);
            max_dev[i] = max_dev[i].max((a - b).abs() / denom);
            max_flip[i] = max_flip[i].max((a + b).abs() / denom);
        }
    }

    let scalars = before
        .into_iter()
        .enumerate()
        .map(|(i, (name, kind, value))| {
            let verdict = if max_dev[i] <= INVARIANCE_TOL {
                Verdict::Invariant
            } else if max_flip[i] <= INVARIANCE_TOL {
                Verdict::SignFlip
            } else {
                Verdict::NotInvariant
            };
            ScalarReport {
                name,
                kind,
                before: value,
                max_rel_dev: max_dev[i],
                max_rel_flip: max_flip[i],
                verdict,
            }
        })
        .collect();

    Ok(InvarianceReport {
        samples: options.samples,
        seed: options.seed,
        scale: options.scale,
        improper: options.improper,
        class,
        max_metric_defect: max_defect,
        scalars,
    })
}
