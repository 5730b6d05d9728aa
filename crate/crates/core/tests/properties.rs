//! Property tests across modules on seeded random inputs.

use approx::assert_relative_eq;
use flatinv::invariants::{char_poly, eigen, minimal_integrity_basis, traces_to_coeffs, BasisRepresentation};
use flatinv::minkowski::{em_stress_energy, em_tensor, stress_energy_invariants, symmetric_tensor, EMField};
use flatinv::sampling;
use flatinv::transform::{random_isometry, reflection};
use flatinv::{Metric, Tensor2, Variance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn problem(seed: u64, n: usize) -> (Metric, Tensor2) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = sampling::random_metric(&mut rng, n);
    let t = sampling::random_tensor(&mut rng, n, Variance::ALL[(seed % 4) as usize]);
    (m, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficients_independent_of_variance(seed in any::<u64>(), n in 2usize..=6) {
        let (m, t) = problem(seed, n);
        let a = char_poly(&t, &m).unwrap().a;
        for v in Variance::ALL {
            let b = char_poly(&t.convert(&m, v).unwrap(), &m).unwrap().a;
            for (x, y) in a.iter().zip(&b) {
                assert_relative_eq!(*x, *y, epsilon = 1e-9, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn eigenvalues_reproduce_coefficients(seed in any::<u64>(), n in 2usize..=5) {
        let (m, t) = problem(seed, n);
        let a = char_poly(&t, &m).unwrap().a;
        let values = eigen(&t, &m).unwrap().values;
        prop_assert_eq!(values.len(), n);
        // power sums of the eigenvalues are the trace powers
        let p: Vec<f64> = (1..=n as i32).map(|k| values.iter().map(|z| z.powi(k).re).sum()).collect();
        let b = traces_to_coeffs(&p);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-7 * x.abs().max(1.0));
        }
    }

    #[test]
    fn isometries_preserve_coefficients(seed in any::<u64>(), n in 2usize..=5) {
        let (m, t) = problem(seed, n);
        let iso = random_isometry(&m, seed, 0.5).unwrap();
        let iso = if seed % 2 == 0 { reflection(&m).compose(&iso) } else { iso };
        let a = char_poly(&t, &m).unwrap().a;
        let b = char_poly(&iso.apply(&t).unwrap(), &m).unwrap().a;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0));
        }
    }

    #[test]
    fn basis_entries_are_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Metric::minkowski();
        let t = sampling::random_symmetric(&mut rng, 4);
        let iso = random_isometry(&m, seed, 1.0).unwrap();
        for rep in [BasisRepresentation::TracePowers, BasisRepresentation::Coefficients] {
            let before = minimal_integrity_basis(&t, &m, rep).unwrap();
            let after = minimal_integrity_basis(&iso.apply(&t).unwrap(), &m, rep).unwrap();
            prop_assert_eq!(before.degrees(), vec![1, 2, 3, 4]);
            for (x, y) in before.entries.iter().zip(&after.entries) {
                prop_assert!((x.value - y.value).abs() <= 1e-8 * x.value.abs().max(1.0));
            }
        }
    }

    #[test]
    fn field_energy_tensor_coefficients(e in prop::array::uniform3(-5.0..5.0f64), b in prop::array::uniform3(-5.0..5.0f64)) {
        let f = EMField { e, b };
        let s = em_stress_energy(&f);
        let r = stress_energy_invariants(&s, true).unwrap();
        let cp = char_poly(&symmetric_tensor(&s).unwrap(), &Metric::minkowski()).unwrap();
        for k in 0..4 {
            prop_assert!((r.a[k] - cp.a[k]).abs() <= 1e-9 * cp.a[k].abs().max(1.0));
        }
        // tr(F^a_b F^b_a) = 2 (e·e − b·b)
        let fm = em_tensor(&f).mixed(&Metric::minkowski()).unwrap();
        let f2 = &fm * &fm;
        prop_assert!((f2.trace() - 2.0 * (f.ee() - f.bb())).abs() <= 1e-9 * (1.0 + f.ee() + f.bb()));
    }
}
