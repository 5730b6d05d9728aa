//! Minkowski space (`n = 4`, index 0 is time): the electromagnetic field
//! tensor, the block form of symmetric tensors, and an audit of the classical
//! closed-form coefficient expansions against the generic pipeline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::invariants::{char_poly_mixed, traces_to_coeffs};
use crate::linalg::max_abs;
use crate::metric::Metric;
use crate::tensor::{mixed_trace_powers, Tensor2, Variance, DEFAULT_CLASSIFY_TOL};
use crate::Matrix;

/// Relative tolerance of the audit verdicts.
pub const AUDIT_TOL: f64 = 1e-8;
/// Relative symmetry tolerance of the stress block.
pub const BLOCK_SYMMETRY_TOL: f64 = 1e-12;

type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Electric and magnetic 3-vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EMField {
    pub e: Vec3,
    pub b: Vec3,
}

impl EMField {
    pub fn ee(&self) -> f64 {
        dot(&self.e, &self.e)
    }

    pub fn bb(&self) -> f64 {
        dot(&self.b, &self.b)
    }

    pub fn eb(&self) -> f64 {
        dot(&self.e, &self.b)
    }

    /// Read `e` and `b` back from contravariant components.
    pub fn from_tensor(t: &Tensor2) -> Result<Self> {
        if t.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: t.dim() });
        }
        if t.variance() != Variance::UpUp {
            return Err(Error::InvalidArgument("field extraction needs the A^{ab} form".into()));
        }
        let a = t.components();
        Ok(EMField {
            e: [a[(1, 0)], a[(2, 0)], a[(3, 0)]],
            b: [a[(3, 2)], a[(1, 3)], a[(2, 1)]],
        })
    }
}

/// Contravariant field tensor
///
/// ```text
///  0   -e1  -e2  -e3
///  e1   0   -b3   b2
///  e2   b3   0   -b1
///  e3  -b2   b1   0
/// ```
pub fn em_tensor(f: &EMField) -> Tensor2 {
    let [e1, e2, e3] = f.e;
    let [b1, b2, b3] = f.b;
    #[rustfmt::skip]
    let c = Matrix::from_row_slice(4, 4, &[
        0.0, -e1, -e2, -e3,
        e1,  0.0, -b3,  b2,
        e2,  b3,  0.0, -b1,
        e3, -b2,  b1,  0.0,
    ]);
    Tensor2::new(Variance::UpUp, c).expect("field components must be finite")
}

/// The classical closed forms. `a4` is `(e·b)²`, the determinant of the
/// contravariant matrix; the characteristic-polynomial coefficient of the
/// mixed form is `−(e·b)²` because `det g = −1` (see [`em_audit`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmInvariants {
    /// `b·b − e·e`
    pub a2: f64,
    /// `(e·b)²`
    pub a4: f64,
    /// `e·b`
    pub pseudoscalar: f64,
}

pub fn em_invariants(f: &EMField) -> EmInvariants {
    let eb = f.eb();
    EmInvariants { a2: f.bb() - f.ee(), a4: eb * eb, pseudoscalar: eb }
}

/// The electromagnetic energy tensor in block form: `d = (e·e + b·b)/2`,
/// `p = e × b`, and `T = e eᵀ + b bᵀ − d I` so that `A^{ab}` is traceless.
pub fn em_stress_energy(f: &EMField) -> StressEnergyBlocks {
    let (e, b) = (f.e, f.b);
    let d = 0.5 * (f.ee() + f.bb());
    let p = [
        e[1] * b[2] - e[2] * b[1],
        e[2] * b[0] - e[0] * b[2],
        e[0] * b[1] - e[1] * b[0],
    ];
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = e[i] * e[j] + b[i] * b[j] - if i == j { d } else { 0.0 };
        }
    }
    StressEnergyBlocks { d, p, t }
}

/// `d`, `p`, `T` of a symmetric tensor `A^{ab} = [[d, pᵀ], [p, −T]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressEnergyBlocks {
    pub d: f64,
    pub p: Vec3,
    pub t: [[f64; 3]; 3],
}

impl StressEnergyBlocks {
    pub fn validate(&self) -> Result<()> {
        let scale = self.t.iter().flatten().fold(0.0_f64, |a, x| a.max(x.abs()));
        let mut dev = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                dev = dev.max((self.t[i][j] - self.t[j][i]).abs());
            }
        }
        if dev > BLOCK_SYMMETRY_TOL * scale {
            return Err(Error::AsymmetricBlock { deviation: dev });
        }
        let finite = self.d.is_finite()
            && self.p.iter().all(|x| x.is_finite())
            && self.t.iter().flatten().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("blocks contain non-finite values".into()));
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        self.p
            .iter()
            .chain(self.t.iter().flatten())
            .fold(self.d.abs(), |a, x| a.max(x.abs()))
    }

    fn t_matrix(&self) -> Matrix {
        Matrix::from_fn(3, 3, |i, j| self.t[i][j])
    }
}

pub fn symmetric_tensor(s: &StressEnergyBlocks) -> Result<Tensor2> {
    s.validate()?;
    let mut c = Matrix::zeros(4, 4);
    c[(0, 0)] = s.d;
    for i in 0..3 {
        c[(0, i + 1)] = s.p[i];
        c[(i + 1, 0)] = s.p[i];
        for j in 0..3 {
            c[(i + 1, j + 1)] = -s.t[i][j];
        }
    }
    Tensor2::new(Variance::UpUp, c)
}

/// Block scalars that appear in the closed forms.
struct BlockScalars {
    d: f64,
    pp: f64,
    ptp: f64,
    pt2p: f64,
    tr: [f64; 4],
}

impl BlockScalars {
    fn new(s: &StressEnergyBlocks) -> Self {
        let t = s.t_matrix();
        let p = nalgebra::DVector::from_row_slice(&s.p);
        let tp = &t * &p;
        let t2 = &t * &t;
        let t3 = &t2 * &t;
        let t4 = &t2 * &t2;
        BlockScalars {
            d: s.d,
            pp: p.dot(&p),
            ptp: p.dot(&tp),
            pt2p: tp.dot(&tp),
            tr: [t.trace(), t2.trace(), t3.trace(), t4.trace()],
        }
    }
}

/// `trace(A^k)`, `k = 1..=4`, from the blocks. The mixed form is
/// `[[d, −pᵀ], [p, T]]`, which gives
///
/// ```text
/// trace(A)   = d + tr T
/// trace(A^2) = d² − 2 p·p + tr T²
/// trace(A^3) = d³ − 3 d p·p − 3 p·Tp + tr T³
/// trace(A^4) = d⁴ − 4 d² p·p + 2 (p·p)² − 4 d p·Tp − 4 p·T²p + tr T⁴
/// ```
pub fn block_trace_powers(s: &StressEnergyBlocks) -> Result<[f64; 4]> {
    s.validate()?;
    let BlockScalars { d, pp, ptp, pt2p, tr } = BlockScalars::new(s);
    let d2 = d * d;
    Ok([
        d + tr[0],
        d2 - 2.0 * pp + tr[1],
        d2 * d - 3.0 * d * pp - 3.0 * ptp + tr[2],
        d2 * d2 - 4.0 * d2 * pp + 2.0 * pp * pp - 4.0 * d * ptp - 4.0 * pt2p + tr[3],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AuditVerdict {
    Match,
    Mismatch,
}

/// One printed closed form compared with the generic value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    /// `a1`..`a4`, `d` or `det(A^ab)`.
    pub quantity: String,
    /// Polynomial degree of the quantity in the tensor components.
    pub degree: usize,
    pub formula: String,
    pub closed_form: f64,
    /// Authoritative value from the generic pipeline.
    pub generic: f64,
    pub abs_diff: f64,
    pub verdict: AuditVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub tolerance: f64,
    pub records: Vec<DiscrepancyRecord>,
}

impl DiscrepancyReport {
    fn new() -> Self {
        DiscrepancyReport { tolerance: AUDIT_TOL, records: Vec::new() }
    }

    fn push(&mut self, quantity: &str, degree: usize, formula: &str, closed: f64, generic: f64, scale: f64) {
        let abs_diff = (closed - generic).abs();
        let bound = AUDIT_TOL * generic.abs().max(scale.powi(degree.max(1) as i32)).max(1.0);
        let verdict = if abs_diff <= bound { AuditVerdict::Match } else { AuditVerdict::Mismatch };
        self.records.push(DiscrepancyRecord {
            quantity: quantity.into(),
            degree,
            formula: formula.into(),
            closed_form: closed,
            generic,
            abs_diff,
            verdict,
        });
    }

    pub fn all_match(&self) -> bool {
        self.records.iter().all(|r| r.verdict == AuditVerdict::Match)
    }
}

/// Closed forms for the field tensor against the generic characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmAudit {
    pub closed_form: EmInvariants,
    /// `a1..a4` from the generic pipeline.
    pub generic: Vec<f64>,
    pub report: DiscrepancyReport,
}

pub fn em_audit(f: &EMField) -> EmAudit {
    let closed = em_invariants(f);
    let mixed = em_tensor(f).mixed(&Metric::minkowski()).expect("4x4 tensor");
    let generic = char_poly_mixed(&mixed).a;
    let scale = f.e.iter().chain(&f.b).fold(0.0_f64, |a, x| a.max(x.abs()));
    let mut report = DiscrepancyReport::new();
    report.push("a1", 1, "a1 = 0", 0.0, generic[0], scale);
    report.push("a2", 2, "a2 = b.b - e.e", closed.a2, generic[1], scale);
    report.push("a3", 3, "a3 = 0", 0.0, generic[2], scale);
    report.push("a4", 4, "a4 = det(A) = (e.b)^2", closed.a4, generic[3], scale);
    let det_up = em_tensor(f).components().clone().determinant();
    report.push("det(A^ab)", 4, "det(A^ab) = (e.b)^2", closed.a4, det_up, scale);
    // det(A^a_b) = det(A^ac) det(g_cb) and det g = -1
    report.push("a4", 4, "a4 = det(A^a_b) = -(e.b)^2", -closed.a4, generic[3], scale);
    EmAudit { closed_form: closed, generic, report }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressEnergyInvariants {
    /// `a1..a4` from Newton's identities on the generic trace powers.
    pub a: [f64; 4],
    pub trace_powers: [f64; 4],
    pub report: DiscrepancyReport,
}

/// Coefficients of a symmetric Minkowski tensor, with the classical printed
/// expansions (transcribed as published) audited against the generic route.
pub fn stress_energy_invariants(s: &StressEnergyBlocks, assume_traceless: bool) -> Result<StressEnergyInvariants> {
    let m = Metric::minkowski();
    let tensor = symmetric_tensor(s)?;
    let mixed = tensor.mixed(&m)?;
    let tp = mixed_trace_powers(&mixed, 4);
    let trace_powers = [tp[0], tp[1], tp[2], tp[3]];
    let a = traces_to_coeffs(&tp);
    let a = [a[0], a[1], a[2], a[3]];

    if assume_traceless {
        let tolerance = DEFAULT_CLASSIFY_TOL * 4.0 * max_abs(&mixed);
        if tp[0].abs() > tolerance {
            return Err(Error::NotTraceless { trace: tp[0], tolerance });
        }
    }

    let BlockScalars { d, pp, ptp, pt2p, tr } = BlockScalars::new(s);
    let [t1, t2, t3, t4] = tr;
    let [p1, p2, p3, p4] = trace_powers;
    let (d2, d3, d4) = (d * d, d * d * d, d * d * d * d);
    let scale = s.scale();
    let mut report = DiscrepancyReport::new();

    if assume_traceless {
        report.push("d", 1, "d = trace(A) + trace(T)", p1 + t1, d, scale);
        report.push("a1", 1, "a1 = trace(A) = 0", 0.0, a[0], scale);
        report.push(
            "a2",
            2,
            "a2 = -1/2 [d^2 - 2 p.p + trace(T^2)]",
            -0.5 * (d2 - 2.0 * pp + t2),
            a[1],
            scale,
        );
        report.push(
            "a3",
            3,
            "a3 = 1/3 [d^3 - 3 d p.p - 3 p.T.p + trace(T^3)]",
            (d3 - 3.0 * d * pp - 3.0 * ptp + t3) / 3.0,
            a[2],
            scale,
        );
        report.push(
            "a4",
            4,
            "a4 = 1/8 trace(A^2)^2 - 1/4 trace(A^4)",
            p2 * p2 / 8.0 - p4 / 4.0,
            a[3],
            scale,
        );
        report.push(
            "a4",
            4,
            "a4 = -d^4 + 12 p.p - 4 d^2 p.p - 2 (p.p)^2 + trace(T^2)^2 + 2 d^2 trace(T^2) \
             - 4 p.p trace(T^2) + 8 d p.T.p + 4 p.T^2.p - trace(T^4)",
            -d4 + 12.0 * pp - 4.0 * d2 * pp - 2.0 * pp * pp + t2 * t2 + 2.0 * d2 * t2
                - 4.0 * pp * t2
                + 8.0 * d * ptp
                + 4.0 * pt2p
                - t4,
            a[3],
            scale,
        );
    } else {
        report.push("a1", 1, "a1 = d - trace(T)", d - t1, a[0], scale);
        report.push(
            "a2",
            2,
            "a2 = 1/2 [trace(A)^2 - trace(A^2)]",
            0.5 * (p1 * p1 - p2),
            a[1],
            scale,
        );
        report.push(
            "a2",
            2,
            "a2 = 1/2 [2 p.p - 2 d trace(T) + trace(T)^2 - trace(T^2)]",
            0.5 * (2.0 * pp - 2.0 * d * t1 + t1 * t1 - t2),
            a[1],
            scale,
        );
        report.push(
            "a3",
            3,
            "a3 = 1/6 [trace(A)^3 - 3 trace(A) trace(A^2) + 2 trace(A^3)]",
            (p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0,
            a[2],
            scale,
        );
        report.push(
            "a3",
            3,
            "a3 = 1/6 [-3 d trace(T)^2 - trace(T)^3 - 3 d trace(T^2) + 6 p.p trace(T) \
             - 3 trace(T) trace(T^2) - 6 p.T.p + 2 trace(T^3)]",
            (-3.0 * d * t1 * t1 - t1 * t1 * t1 - 3.0 * d * t2 + 6.0 * pp * t1 - 3.0 * t1 * t2 - 6.0 * ptp
                + 2.0 * t3)
                / 6.0,
            a[2],
            scale,
        );
        report.push(
            "a4",
            4,
            "a4 = 1/24 trace(A)^4 + 3/8 trace(A) trace(A^3) - 1/4 trace(A)^2 trace(A^2) \
             + 1/8 trace(A^2)^2 - 1/4 trace(A^4)",
            p1.powi(4) / 24.0 + 3.0 / 8.0 * p1 * p3 - 0.25 * p1 * p1 * p2 + p2 * p2 / 8.0 - p4 / 4.0,
            a[3],
            scale,
        );
        report.push(
            "a4",
            4,
            "a4 = 1/24 [4 d trace(T)^3 + trace(T)^4 - 12 d trace(T) trace(T^2) + 12 p.p trace(T)^2 \
             - 6 trace(T)^2 trace(T^2) + 8 d trace(T^3) - 24 p.T.p trace(T) + 8 trace(T) trace(T^3) \
             + 3 trace(T^2)^2 - 12 d^2 p.p + 24 p.p - 12 p.p trace(T^2) - 12 (p.p)^2 + 24 p.T^2.p \
             - 6 trace(T^4)]",
            (4.0 * d * t1.powi(3) + t1.powi(4) - 12.0 * d * t1 * t2 + 12.0 * pp * t1 * t1
                - 6.0 * t1 * t1 * t2
                + 8.0 * d * t3
                - 24.0 * ptp * t1
                + 8.0 * t1 * t3
                + 3.0 * t2 * t2
                - 12.0 * d2 * pp
                + 24.0 * pp
                - 12.0 * pp * t2
                - 12.0 * pp * pp
                + 24.0 * pt2p
                - 6.0 * t4)
                / 24.0,
            a[3],
            scale,
        );
    }

    Ok(StressEnergyInvariants { a, trace_powers, report })
}

/// Verdict of one printed formula over a batch of inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BatchVerdict {
    AlwaysMatch,
    AlwaysMismatch,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaVerdict {
    pub quantity: String,
    pub formula: String,
    pub matches: usize,
    pub mismatches: usize,
    pub verdict: BatchVerdict,
}

/// Per-formula verdict tally over a batch of audits with identical record layout.
pub fn summarize_reports(reports: &[DiscrepancyReport]) -> Vec<FormulaVerdict> {
    let Some(first) = reports.first() else {
        return Vec::new();
    };
    first
        .records
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let matches = reports
                .iter()
                .filter(|r| r.records[i].verdict == AuditVerdict::Match)
                .count();
            let mismatches = reports.len() - matches;
            let verdict = match (matches, mismatches) {
                (_, 0) => BatchVerdict::AlwaysMatch,
                (0, _) => BatchVerdict::AlwaysMismatch,
                _ => BatchVerdict::Mixed,
            };
            FormulaVerdict {
                quantity: rec.quantity.clone(),
                formula: rec.formula.clone(),
                matches,
                mismatches,
                verdict,
            }
        })
        .collect()
}

pub fn em_audit_batch(fields: &[EMField], exec: Execution) -> Vec<EmAudit> {
    exec.map_slice(fields, em_audit)
}

pub fn stress_energy_batch(
    blocks: &[StressEnergyBlocks],
    assume_traceless: bool,
    exec: Execution,
) -> Vec<Result<StressEnergyInvariants>> {
    exec.map_slice(blocks, |s| stress_energy_invariants(s, assume_traceless))
}
