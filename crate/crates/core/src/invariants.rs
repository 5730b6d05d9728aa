//! Characteristic polynomial, eigenstructure and minimal integrity bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::inf_norm;
use crate::metric::Metric;
use crate::tensor::{mixed_trace_powers, Tensor2, TensorClass, DEFAULT_CLASSIFY_TOL};
use crate::{Complex, Matrix};

pub const ROOT_MAX_ITER: usize = 500;
/// Convergence when the largest Durand–Kerner correction is below this times the start radius.
pub const ROOT_UPDATE_TOL: f64 = 1e-13;
/// Rotation of the initial points away from the real axis, in radians.
pub const ROOT_START_ANGLE: f64 = 0.4;
/// Pivots below this times `‖A‖` count as zero during null-space extraction.
pub const PIVOT_TOL: f64 = 1e-10;

/// Coefficients `a_1..a_n` of `det(λδ − A) = λⁿ + Σ (−1)ᵏ a_k λ^{n−k}`.
///
/// `a_k` is the k-th elementary symmetric polynomial of the eigenvalues;
/// `a_1` is the trace and `a_n` the determinant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    pub a: Vec<f64>,
}

impl CharPoly {
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Monic coefficients, highest power first: `[1, −a_1, a_2, −a_3, ...]`.
    pub fn monic(&self) -> Vec<f64> {
        std::iter::once(1.0)
            .chain(self.a.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { -x } else { x }))
            .collect()
    }

    pub fn eval(&self, z: Complex) -> Complex {
        horner(&self.monic(), z)
    }
}

/// Faddeev–LeVerrier recurrence on the mixed form.
pub fn char_poly(t: &Tensor2, m: &Metric) -> Result<CharPoly> {
    let mixed = t.mixed(m)?;
    Ok(char_poly_mixed(&mixed))
}

pub(crate) fn char_poly_mixed(mixed: &Matrix) -> CharPoly {
    let n = mixed.nrows();
    let mut b = Matrix::identity(n, n);
    let mut a = Vec::with_capacity(n);
    for k in 1..=n {
        let c = mixed * &b;
        let ck = -c.trace() / k as f64;
        a.push(if k % 2 == 0 { ck } else { -ck });
        b = c;
        for i in 0..n {
            b[(i, i)] += ck;
        }
    }
    CharPoly { a }
}

/// Elementary symmetric values `a_1..a_n` from power sums `p_1..p_n`
/// (Newton's identities: `k a_k = Σ_{i=1..k} (−1)^{i−1} a_{k−i} p_i`).
pub fn traces_to_coeffs(p: &[f64]) -> Vec<f64> {
    let mut a = vec![1.0];
    for k in 1..=p.len() {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * a[k - i] * p[i - 1];
        }
        a.push(s / k as f64);
    }
    a.remove(0);
    a
}

/// Inverse of [`traces_to_coeffs`].
pub fn coeffs_to_traces(a: &[f64]) -> Vec<f64> {
    let coeff = |j: usize| if j == 0 { 1.0 } else { a[j - 1] };
    let mut p: Vec<f64> = Vec::with_capacity(a.len());
    for k in 1..=a.len() {
        let mut s = k as f64 * a[k - 1];
        for i in 1..k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s -= sign * coeff(k - i) * p[i - 1];
        }
        p.push(if k % 2 == 1 { s } else { -s });
    }
    p
}

/// Normalized Cayley–Hamilton residual `‖φ(A)‖_max / max(1, ‖A‖ⁿ)`.
pub fn cayley_hamilton_residual(t: &Tensor2, m: &Metric) -> Result<f64> {
    let mixed = t.mixed(m)?;
    let n = mixed.nrows();
    let monic = char_poly_mixed(&mixed).monic();
    let mut acc = Matrix::identity(n, n);
    for &c in &monic[1..] {
        acc = &acc * &mixed;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    let resid = acc.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    Ok(resid / inf_norm(&mixed).powi(n as i32).max(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomp {
    /// Sorted by real part, then imaginary part, both descending.
    pub values: Vec<Complex>,
    /// Unit contravariant eigenvector `x^j` paired with each value. Repeated
    /// values share one null vector.
    pub vectors: Vec<Vec<Complex>>,
    /// Algebraic multiplicity of each value.
    pub multiplicities: Vec<usize>,
}

/// Eigenpairs `A^i_{·j} x^j = λ x^i` of the mixed form.
pub fn eigen(t: &Tensor2, m: &Metric) -> Result<EigenDecomp> {
    let mixed = t.mixed(m)?;
    let poly = char_poly_mixed(&mixed);
    let values = polynomial_roots(&poly.monic())?;
    let multiplicities: Vec<usize> =
        values.iter().map(|v| values.iter().filter(|w| *w == v).count()).collect();
    let norm = inf_norm(&mixed);
    let vectors = values.iter().map(|&lambda| null_vector(&mixed, lambda, norm)).collect();
    Ok(EigenDecomp { values, vectors, multiplicities })
}

fn horner(coeffs: &[f64], z: Complex) -> Complex {
    coeffs.iter().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_abs(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c.abs())
}

/// All roots of a monic real polynomial (`coeffs[0] == 1`, highest power first).
pub(crate) fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex>> {
    // exact zero roots
    let mut end = coeffs.len();
    while end > 1 && coeffs[end - 1] == 0.0 {
        end -= 1;
    }
    let zeros = coeffs.len() - end;
    let reduced = &coeffs[..end];
    let mut roots = durand_kerner(reduced)?;
    merge_clusters(reduced, &mut roots);
    roots.extend(std::iter::repeat(Complex::new(0.0, 0.0)).take(zeros));

    let scale = coefficient_scale(reduced);
    for r in roots.iter_mut() {
        if r.im.abs() <= 1e-10 * scale {
            r.im = 0.0;
        }
        if r.re.abs() <= 1e-10 * scale {
            r.re = 0.0;
        }
    }
    roots.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    Ok(roots)
}

/// `max_k |c_k|^{1/k}`: the magnitude scale of the roots.
fn coefficient_scale(coeffs: &[f64]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.abs().powf(1.0 / k as f64))
        .fold(0.0, f64::max)
}

fn durand_kerner(coeffs: &[f64]) -> Result<Vec<Complex>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let radius = 1.0 + coefficient_scale(coeffs);
    let mut z: Vec<Complex> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + ROOT_START_ANGLE;
            Complex::from_polar(radius, theta)
        })
        .collect();
    let rounding = 8.0 * n as f64 * f64::EPSILON;

    for _ in 0..ROOT_MAX_ITER {
        let mut max_update = 0.0_f64;
        let next: Vec<Complex> = (0..n)
            .map(|i| {
                let mut den = Complex::new(1.0, 0.0);
                for j in (0..n).filter(|&j| j != i) {
                    den *= z[i] - z[j];
                }
                if den.norm() == 0.0 {
                    den = Complex::new(f64::EPSILON * radius, 0.0);
                }
                let delta = horner(coeffs, z[i]) / den;
                max_update = max_update.max(delta.norm());
                z[i] - delta
            })
            .collect();
        z = next;
        // updates at multiple roots shrink only linearly; stop once every
        // residual is at rounding level
        let at_rounding = z
            .iter()
            .all(|&r| horner(coeffs, r).norm() <= rounding * horner_abs(coeffs, r.norm()));
        if max_update <= ROOT_UPDATE_TOL * radius || at_rounding {
            return Ok(z);
        }
    }
    Err(Error::ConvergenceFailure { iterations: ROOT_MAX_ITER })
}

/// Taylor coefficients `p^{(j)}(μ)/j!` for `j = 0..=n`.
fn taylor_shift(coeffs: &[f64], mu: Complex) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let mut b: Vec<Complex> = coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        for i in 1..=n - j {
            let prev = b[i - 1];
            b[i] += mu * prev;
        }
        out.push(b[n - j]);
    }
    out
}

fn taylor_shift_abs(coeffs: &[f64], x: f64) -> Vec<f64> {
    let n = coeffs.len() - 1;
    let mut b: Vec<f64> = coeffs.iter().map(|c| c.abs()).collect();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        for i in 1..=n - j {
            b[i] += x * b[i - 1];
        }
        out.push(b[n - j]);
    }
    out
}

/// Replace groups of approximations to one multiple root by their mean, but
/// only where the polynomial and its first `m − 1` derivatives all vanish at
/// the mean to working accuracy.
fn merge_clusters(coeffs: &[f64], roots: &mut [Complex]) {
    let n = roots.len();
    if n < 2 {
        return;
    }
    let scale = coefficient_scale(coeffs);
    let link = 1e-2 * scale;
    // single-linkage grouping
    let mut group: Vec<usize> = (0..n).collect();
    fn find(group: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while group[r] != r {
            r = group[r];
        }
        group[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= link {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[a.max(b)] = a.min(b);
                }
            }
        }
    }
    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut group, i) == root).collect();
        let size = members.len();
        if size < 2 {
            continue;
        }
        let mut mean = members.iter().map(|&i| roots[i]).sum::<Complex>() / size as f64;
        // an m-fold root of p is a simple root of p^{(m-1)}
        for _ in 0..8 {
            let q = taylor_shift(coeffs, mean);
            let slope = q[size] * size as f64;
            if slope.norm() == 0.0 {
                break;
            }
            let step = q[size - 1] / slope;
            mean -= step;
            if step.norm() <= f64::EPSILON * mean.norm().max(scale) {
                break;
            }
        }
        let q = taylor_shift(coeffs, mean);
        let qabs = taylor_shift_abs(coeffs, mean.norm().max(scale));
        if (0..size).all(|j| q[j].norm() <= 1e-11 * qabs[j]) {
            for &i in &members {
                roots[i] = mean;
            }
        }
    }
}

/// A unit null vector of `λδ − A` by full-pivot elimination.
fn null_vector(mixed: &Matrix, lambda: Complex, norm: f64) -> Vec<Complex> {
    let n = mixed.nrows();
    let mut w: Vec<Vec<Complex>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { lambda } else { Complex::new(0.0, 0.0) };
                    d - mixed[(i, j)]
                })
                .collect()
        })
        .collect();
    let threshold = PIVOT_TOL * norm.max(f64::MIN_POSITIVE);
    let mut cols: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while rank < n - 1 {
        let (mut pr, mut pc, mut best) = (rank, rank, 0.0);
        for (r, row) in w.iter().enumerate().skip(rank) {
            for (c, x) in row.iter().enumerate().skip(rank) {
                if x.norm() > best {
                    best = x.norm();
                    pr = r;
                    pc = c;
                }
            }
        }
        if best <= threshold {
            break;
        }
        w.swap(rank, pr);
        for row in w.iter_mut() {
            row.swap(rank, pc);
        }
        cols.swap(rank, pc);
        let pivot = w[rank][rank];
        for r in rank + 1..n {
            let f = w[r][rank] / pivot;
            if f.norm() != 0.0 {
                for c in rank..n {
                    let sub = f * w[rank][c];
                    w[r][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    // first free column = 1, remaining free columns = 0, back-substitute
    let mut y = vec![Complex::new(0.0, 0.0); n];
    y[rank] = Complex::new(1.0, 0.0);
    for r in (0..rank).rev() {
        let s: Complex = (r + 1..n).map(|c| w[r][c] * y[c]).sum();
        y[r] = -s / w[r][r];
    }
    let mut x = vec![Complex::new(0.0, 0.0); n];
    for (k, &c) in cols.iter().enumerate() {
        x[c] = y[k];
    }
    let len = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let (mut big, mut phase) = (0.0, Complex::new(1.0, 0.0));
    for v in &x {
        if v.norm() > big * (1.0 + 1e-12) {
            big = v.norm();
            phase = v.conj() / v.norm();
        }
    }
    x.iter().map(|v| v * phase / len).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisRepresentation {
    TracePowers,
    Coefficients,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub name: String,
    pub degree: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrityBasis {
    pub class: TensorClass,
    pub representation: BasisRepresentation,
    pub entries: Vec<BasisEntry>,
}

impl IntegrityBasis {
    pub fn degrees(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.degree).collect()
    }
}

/// Degrees of the minimal integrity basis of a tensor class in dimension `n`.
pub fn basis_degrees(class: TensorClass, n: usize) -> Result<Vec<usize>> {
    match class {
        TensorClass::Symmetric => Ok((1..=n).collect()),
        TensorClass::SymmetricTraceless => Ok((2..=n).collect()),
        TensorClass::Antisymmetric => Ok((2..=n).step_by(2).collect()),
        TensorClass::General => Err(Error::UnsupportedClass(class.to_string())),
    }
}

pub fn minimal_integrity_basis(
    t: &Tensor2,
    m: &Metric,
    rep: BasisRepresentation,
) -> Result<IntegrityBasis> {
    minimal_integrity_basis_with_tol(t, m, rep, DEFAULT_CLASSIFY_TOL)
}

pub fn minimal_integrity_basis_with_tol(
    t: &Tensor2,
    m: &Metric,
    rep: BasisRepresentation,
    tol: f64,
) -> Result<IntegrityBasis> {
    let class = t.classify(m, tol)?;
    let degrees = basis_degrees(class, t.dim())?;
    let mixed = t.mixed(m)?;
    let values = match rep {
        BasisRepresentation::TracePowers => mixed_trace_powers(&mixed, t.dim()),
        BasisRepresentation::Coefficients => char_poly_mixed(&mixed).a,
    };
    let entries = degrees
        .into_iter()
        .map(|k| BasisEntry {
            name: match rep {
                BasisRepresentation::TracePowers => format!("trace(A^{k})"),
                BasisRepresentation::Coefficients => format!("a{k}"),
            },
            degree: k,
            value: values[k - 1],
        })
        .collect();
    Ok(IntegrityBasis { class, representation: rep, entries })
}

/// `trace(A^k)` evaluated directly and from the trace-power basis through
/// Cayley–Hamilton reduction of `x^k` modulo the characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerWitness {
    pub k: usize,
    pub direct: f64,
    pub reduced: f64,
    pub abs_diff: f64,
    /// `abs_diff / max(|direct|, ‖A‖_∞^k)`.
    pub rel_diff: f64,
}

pub fn express_in_basis(t: &Tensor2, m: &Metric, k: usize) -> Result<PowerWitness> {
    let n = t.dim();
    if k <= n {
        return Err(Error::InvalidArgument(format!(
            "power {k} must exceed the dimension {n}"
        )));
    }
    let basis = minimal_integrity_basis(t, m, BasisRepresentation::TracePowers)?;
    // powers outside the basis vanish for the class
    let mut p = vec![0.0; n];
    for e in &basis.entries {
        p[e.degree - 1] = e.value;
    }
    let a = traces_to_coeffs(&p);
    let monic = CharPoly { a }.monic();

    // r(x) = x^k mod φ(x), r[j] multiplies x^j
    let mut r = vec![0.0; n];
    r[0] = 1.0;
    for _ in 0..k {
        let overflow = r[n - 1];
        for j in (1..n).rev() {
            r[j] = r[j - 1];
        }
        r[0] = 0.0;
        // x^n = −Σ_{j=1..n} c_j x^{n−j}
        for j in 1..=n {
            r[n - j] -= overflow * monic[j];
        }
    }
    let reduced = r[0] * n as f64 + (1..n).map(|j| r[j] * p[j - 1]).sum::<f64>();

    let mixed = t.mixed(m)?;
    let direct = crate::tensor::mixed_power(&mixed, k)?.trace();
    let abs_diff = (direct - reduced).abs();
    let denom = direct.abs().max(inf_norm(&mixed).powi(k as i32)).max(f64::MIN_POSITIVE);
    Ok(PowerWitness { k, direct, reduced, abs_diff, rel_diff: abs_diff / denom })
}
