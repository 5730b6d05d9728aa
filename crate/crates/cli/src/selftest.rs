//! Seeded property checks over the whole library, reported as one JSON document.

use flatinv::invariants::{
    cayley_hamilton_residual, char_poly, coeffs_to_traces, eigen, express_in_basis, traces_to_coeffs,
};
use flatinv::minkowski::{em_audit, em_tensor};
use flatinv::sampling;
use flatinv::transform::{invariance_report, InvarianceOptions};
use flatinv::{Complex, Metric, TensorClass, Variance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

struct Check {
    name: &'static str,
    worst: f64,
    tolerance: f64,
}

fn newton_round_trip(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for (x, y) in a.iter().zip(traces_to_coeffs(&coeffs_to_traces(&a))) {
            worst = worst.max((x - y).abs());
        }
    }
    worst
}

fn char_poly_vs_newton(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let n = 2 + i % 5;
        let m = sampling::random_metric(rng, n);
        let t = sampling::random_tensor(rng, n, Variance::ALL[i % 4]);
        let direct = char_poly(&t, &m).unwrap().a;
        let newton = traces_to_coeffs(&t.trace_powers(&m, n).unwrap());
        for (x, y) in direct.iter().zip(&newton) {
            worst = worst.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    worst
}

fn cayley_hamilton(rng: &mut ChaCha8Rng) -> f64 {
    (0..100)
        .map(|i| {
            let n = 2 + i % 5;
            let m = sampling::random_metric(rng, n);
            let t = sampling::random_tensor(rng, n, Variance::ALL[i % 4]);
            cayley_hamilton_residual(&t, &m).unwrap()
        })
        .fold(0.0, f64::max)
}

/// Largest odd coefficient of an antisymmetric tensor, relative to `scale^k`.
fn antisymmetric_odd(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let n = 2 + i % 5;
        let m = sampling::random_metric(rng, n);
        let t = sampling::random_antisymmetric(rng, n);
        let mixed = t.mixed(&m).unwrap();
        let scale = mixed.abs().row_sum().max().max(1e-300);
        let a = char_poly(&t, &m).unwrap().a;
        for k in (1..=n).step_by(2) {
            worst = worst.max(a[k - 1].abs() / scale.powi(k as i32));
        }
    }
    worst
}

/// Largest `|A x − λ x|` over simple eigenpairs, relative to the mixed form's size.
fn eigen_residual(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..50 {
        let n = 2 + i % 5;
        let m = sampling::random_metric(rng, n);
        let t = sampling::random_tensor(rng, n, Variance::UpDown);
        let mixed = t.mixed(&m).unwrap();
        let scale = mixed.abs().max().max(1.0);
        let eig = eigen(&t, &m).unwrap();
        for ((lambda, x), mult) in eig.values.iter().zip(&eig.vectors).zip(&eig.multiplicities) {
            if *mult != 1 {
                continue;
            }
            for r in 0..n {
                let ax: Complex = (0..n).map(|c| x[c] * mixed[(r, c)]).sum();
                worst = worst.max((ax - lambda * x[r]).norm() / scale);
            }
        }
    }
    worst
}

fn isometry_invariance(rng: &mut ChaCha8Rng, seed: u64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..6 {
        let (m, n) = if i % 2 == 0 { (Metric::minkowski(), 4) } else { (sampling::random_metric(rng, 3), 3) };
        let t = sampling::random_tensor(rng, n, Variance::ALL[i % 4]);
        let opts = InvarianceOptions { samples: 20, seed: seed.wrapping_add(100 * i as u64), ..Default::default() };
        for s in invariance_report(&t, &m, &opts).unwrap().scalars {
            worst = worst.max(s.max_rel_dev);
        }
    }
    worst
}

/// e·b must be unchanged by proper and negated by improper isometries.
fn pseudoscalar(rng: &mut ChaCha8Rng, seed: u64) -> f64 {
    let t = em_tensor(&sampling::random_em_field(rng, 1.0));
    let m = Metric::minkowski();
    let mut worst = 0.0_f64;
    for improper in [false, true] {
        let opts = InvarianceOptions { samples: 20, seed, improper, ..Default::default() };
        let r = invariance_report(&t, &m, &opts).unwrap();
        let eb = r.scalar("e.b").unwrap();
        worst = worst.max(if improper { eb.max_rel_flip } else { eb.max_rel_dev });
    }
    worst
}

fn basis_witness(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for n in 3..=5 {
        for class in [TensorClass::Symmetric, TensorClass::SymmetricTraceless, TensorClass::Antisymmetric] {
            let m = sampling::random_metric(rng, n);
            let t = match class {
                TensorClass::Symmetric => sampling::random_symmetric(rng, n),
                TensorClass::SymmetricTraceless => sampling::random_symmetric_traceless(rng, n, &m),
                _ => sampling::random_antisymmetric(rng, n),
            };
            for k in [n + 1, n + 2] {
                worst = worst.max(express_in_basis(&t, &m, k).unwrap().rel_diff);
            }
        }
    }
    worst
}

/// Generic `a2` against `b·b − e·e` and `a4` against `−(e·b)²`, relative to `scale^k`.
fn em_closed_forms(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let f = sampling::random_em_field(rng, 10.0);
        let audit = em_audit(&f);
        let scale = f.e.iter().chain(&f.b).fold(1.0_f64, |s, x| s.max(x.abs()));
        let c = audit.closed_form;
        worst = worst
            .max((audit.generic[1] - c.a2).abs() / scale.powi(2))
            .max((audit.generic[3] + c.a4).abs() / scale.powi(4));
    }
    worst
}

pub fn run(seed: u64) -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = [
        Check { name: "newton_round_trip", worst: newton_round_trip(&mut rng), tolerance: 1e-12 },
        Check { name: "char_poly_vs_newton", worst: char_poly_vs_newton(&mut rng), tolerance: 1e-9 },
        Check { name: "cayley_hamilton", worst: cayley_hamilton(&mut rng), tolerance: 1e-9 },
        Check { name: "antisymmetric_odd_coefficients", worst: antisymmetric_odd(&mut rng), tolerance: 1e-9 },
        Check { name: "eigenpair_residual", worst: eigen_residual(&mut rng), tolerance: 1e-8 },
        Check { name: "isometry_invariance", worst: isometry_invariance(&mut rng, seed), tolerance: 1e-8 },
        Check { name: "pseudoscalar", worst: pseudoscalar(&mut rng, seed), tolerance: 1e-8 },
        Check { name: "integrity_basis_witness", worst: basis_witness(&mut rng), tolerance: 1e-8 },
        Check { name: "em_closed_forms", worst: em_closed_forms(&mut rng), tolerance: 1e-10 },
    ];
    let failed = checks.iter().filter(|c| !(c.worst <= c.tolerance)).count();
    json!({
        "seed": seed,
        "checks": checks
            .iter()
            .map(|c| json!({
                "name": c.name,
                "pass": c.worst <= c.tolerance,
                "worst": c.worst,
                "tolerance": c.tolerance,
            }))
            .collect::<Vec<_>>(),
        "passed": checks.len() - failed,
        "failed": failed,
    })
}
