use cylquant::basis::phi_abs_sq;
use cylquant::quantizer::PointwiseObservable;
use cylquant::symbols::PhaseGrid;
use cylquant::*;
use num_complex::Complex;
use proptest::prelude::*;

fn eps(v: f64) -> Epsilon64 {
    Epsilon::new(v).unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

fn laurent() -> impl Strategy<Value = Laurent64> {
    prop::collection::vec(((-2i64..=2, -2i64..=2), complex()), 1..6).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_coefficients_conjugate_values(c in laurent(), b in 0.0..6.3f64, j in -2.0..2.0f64, e in 0.1..2.0f64) {
        let x = PhasePoint::new(b, j).unwrap();
        let lhs = eval_laurent(&c.conjugate_transpose(), &x, eps(e)).unwrap();
        let rhs = eval_laurent(&c, &x, eps(e)).unwrap().conj();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn a_times_a_star(b in -10.0..10.0f64, j in -5.0..5.0f64, e in 0.05..3.0f64) {
        let x = PhasePoint::new(b, j).unwrap();
        let prod = classical_A(&x, eps(e)).unwrap() * classical_A_star(&x, eps(e)).unwrap();
        let want = (2.0 * e * j).exp();
        prop_assert!((prod.re - want).abs() <= 1e-14 * want);
        prop_assert!(prod.im.abs() <= 1e-14 * want);
    }

    #[test]
    fn phi_modulus_is_beta_independent(n in -8i64..=8, b in 0.0..6.3f64, j in -3.0..3.0f64, e in 0.1..2.0f64) {
        let x = PhasePoint::new(b, j).unwrap();
        let v = phi(n, &x, eps(e)).unwrap().norm_sqr();
        let want = phi_abs_sq(n, j, eps(e)).unwrap();
        prop_assert!((v - want).abs() <= 1e-13 * want);
    }

    #[test]
    fn normalization_equals_window_sum_plus_tail(j in -3.0..3.0f64, e in 0.2..2.0f64) {
        let tol = 1e-13;
        let r = normalization(j, eps(e), tol).unwrap();
        let w = choose_window(eps(e), 3.0, 1e-15).unwrap();
        let direct: f64 = w.indices().map(|n| phi_abs_sq(n, j, eps(e)).unwrap()).sum();
        prop_assert!(r.tail_bound < tol);
        prop_assert!(((r.value - direct) / r.value).abs() < 1e-12);
    }

    #[test]
    fn coherent_state_normalized(b in 0.0..6.3f64, j in -3.0..3.0f64) {
        let tol = 1e-12;
        let w = choose_window(eps(1.0), 3.0, tol).unwrap();
        let x = PhasePoint::new(b, j).unwrap();
        let c = coherent_vector(&x, eps(1.0), w).unwrap();
        prop_assert!((overlap(&x, &x, eps(1.0), w).unwrap() - Complex::new(1.0, 0.0)).norm() < tol);
        prop_assert!(c.norm_defect().abs() < tol);
        prop_assert!(c.norm_sqr() <= 1.0 + 1e-15);
    }

    #[test]
    fn overlap_bounded_and_shift_invariant(
        b1 in 0.0..6.3f64, j1 in -3.0..3.0f64, b2 in 0.0..6.3f64, j2 in -3.0..3.0f64, d in -3.0..3.0f64
    ) {
        let w = BasisWindow::new(12);
        let e = eps(0.8);
        let x1 = PhasePoint::new(b1, j1).unwrap();
        let x2 = PhasePoint::new(b2, j2).unwrap();
        let o = overlap(&x1, &x2, e, w).unwrap();
        prop_assert!(o.norm() <= 1.0 + 1e-12);
        let shifted = overlap(&x1.shifted(d).unwrap(), &x2.shifted(d).unwrap(), e, w).unwrap();
        prop_assert!((o.norm() - shifted.norm()).abs() < 1e-12);
        prop_assert!((o - overlap(&x2, &x1, e, w).unwrap().conj()).norm() < 1e-14);
    }

    #[test]
    fn ordering_identity_random(p in -4i64..=4, q in -4i64..=4, e in 0.05..2.0f64) {
        let r = verify_ordering(p, q, eps(e), BasisWindow::new(12)).unwrap();
        prop_assert!(r.interior_defect < 1e-12);
    }

    #[test]
    fn hermitian_laurent_gives_hermitian_matrix(c in laurent()) {
        let sym: Laurent64 = c.iter().chain(c.conjugate_transpose().iter()).collect();
        let w = BasisWindow::new(5);
        let q = QuadratureConfig::auto(w, sym.bandwidth(), 6.0, 1e-10).unwrap();
        let o = quantize(&ObservableSpec::Laurent(sym), eps(0.7), w, &q).unwrap();
        prop_assert!(o.hermiticity_defect() <= 1e-10 * o.max_abs().max(1.0));
    }

    #[test]
    fn single_mode_is_banded(k in -4i64..=4, a in -1.0..1.0f64) {
        let w = BasisWindow::new(5);
        let f = ObservableSpec::Fourier(
            FourierObservable::new().with_mode(k, JProfile::exponential(Complex::new(1.0, 0.5), a)),
        );
        let q = QuadratureConfig::auto(w, k.unsigned_abs(), 6.0, 1e-10).unwrap();
        let o = quantize(&f, eps(1.0), w, &q).unwrap();
        for (m, n, v) in o.iter_entries() {
            if m - n != k {
                prop_assert_eq!(v, Complex::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn lower_symbol_is_linear(a in complex(), b in complex(), e in 0.3..2.0f64) {
        let w = BasisWindow::new(8);
        let o1 = op_beta(eps(e), w);
        let o2 = op_J_power(2, eps(e), w).unwrap();
        let combo = o1.scale(a).try_add(&o2.scale(b)).unwrap();
        let g = PhaseGrid::new(vec![0.3, 3.0], vec![-1.0, 0.0, 1.5]).unwrap();
        let f1 = lower_symbol(&o1, &g, w, "beta").unwrap();
        let f2 = lower_symbol(&o2, &g, w, "J^2").unwrap();
        let fc = lower_symbol(&combo, &g, w, "combo").unwrap();
        for ((x, y), z) in f1.values.iter().zip(&f2.values).zip(&fc.values) {
            let want = a * x + b * y;
            prop_assert!((want - z).norm() <= 1e-12 * want.norm().max(1.0));
        }
    }
}

#[test]
fn measure_is_a_probability_measure() {
    // Gauss-Hermite in J (weight e^{-eps J²} absorbed) and trapezoid in β.
    for &e in &[0.1f64, 1.0, 3.0] {
        let rule = gauss_hermite_rule::<f64>(40).unwrap();
        let betas = 16;
        let mut total = 0.0;
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let j = t / e.sqrt();
            for k in 0..betas {
                let b = std::f64::consts::TAU * k as f64 / betas as f64;
                let x = PhasePoint::new(b, j).unwrap();
                let density = measure_weight(&x, eps(e));
                // dJ = dt/√eps; undo the e^{-t²} already in the weight.
                total += wt * (t * t).exp() / e.sqrt() * density * std::f64::consts::TAU / betas as f64;
            }
        }
        assert!((total - 1.0).abs() < 1e-12, "eps={e} total={total}");
    }
}

#[test]
fn positivity_of_nonnegative_symbols() {
    let w = BasisWindow::new(10);
    let e = eps(1.0);
    let q = QuadratureConfig::auto(w, 1, 6.0, 1e-10).unwrap();
    let observables = [
        ObservableSpec::constant(Complex::new(1.0, 0.0)),
        ObservableSpec::exp_cos(2.0, 0),
        ObservableSpec::Pointwise(PointwiseObservable::new(1, 0.0, |b: f64, _| Complex::new(2.0 + b.cos(), 0.0))),
    ];
    for f in &observables {
        let o = quantize(f, e, w, &q).unwrap();
        assert!(o.min_eigenvalue().unwrap() >= -1e-9);
    }
}
