use num_complex::Complex64;
use proptest::prelude::*;

use omega_psido::calculus::{compose_formal, FormalSum};
use omega_psido::function_spaces::{box_points, seminorm_lambda, GridFunction, GridSpec, Space, TestFunction};
use omega_psido::operators::{apply_symbol_op, compose_and_compare, kernel};
use omega_psido::symbols::{AmplitudeExpr, SymbolExpr};
use omega_psido::weights::WeightFunction;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn xi_poly(coeffs: &[f64]) -> SymbolExpr {
    let pairs: Vec<(Vec<u32>, f64)> = coeffs.iter().enumerate().map(|(k, &a)| (vec![k as u32], a)).collect();
    SymbolExpr::constant_coefficient(1, &pairs).unwrap()
}

fn x_poly(coeffs: &[f64]) -> SymbolExpr {
    coeffs.iter().enumerate().fold(SymbolExpr::zero(1), |acc, (k, &a)| {
        acc.add(&SymbolExpr::term(1, c(a, 0.0), vec![k as u32], vec![0], 0.0, 0.0).unwrap())
    })
}

fn finite(p: &SymbolExpr) -> FormalSum {
    FormalSum::from_symbol(p.clone(), 0.0, 1.0, 1.0).unwrap()
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..=len)
}

fn spec() -> GridSpec {
    GridSpec::default_for(1).unwrap()
}

/// Roundoff scale of a Fourier multiplier: sup |p(ξ)| on the frequency grid times sup |u|.
fn multiplier_scale(p: &SymbolExpr, u: &GridFunction) -> f64 {
    let sp = u.spec();
    let pmax = sp.points(Space::Frequency).map(|xi| p.eval(&[0.0], &xi).norm()).fold(0.0, f64::max);
    let umax = u.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    (pmax * umax).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn leibniz_composition_matches_operator_product(p in coeffs(4), q in coeffs(3)) {
        let u = TestFunction::gaussian(1, 0.5).unwrap();
        let r = compose_and_compare(&xi_poly(&p), &x_poly(&q), &u, &spec(), 1e-8).unwrap();
        prop_assert!(r.pass, "{r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fourier_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, s in 0.2f64..2.0, t in 0.2f64..2.0, xi in -4.0f64..4.0) {
        let f = TestFunction::gaussian(1, s).unwrap();
        let g = TestFunction::term(1, c(1.0, 0.5), vec![2], t).unwrap();
        let lhs = f.scale(c(a, 0.0)).add(&g.scale(c(b, 0.0))).fourier().eval(&[xi]);
        let rhs = f.fourier().eval(&[xi]) * a + g.fourier().eval(&[xi]) * b;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn seminorm_is_homogeneous_and_subadditive(a in 0.1f64..5.0, s in 0.3f64..2.0, t in 0.3f64..2.0, lambda in 0.5f64..3.0) {
        let w = WeightFunction::gevrey(0.5).unwrap();
        let grid = box_points(1, 6.0, 41);
        let f = TestFunction::gaussian(1, s).unwrap();
        let g = TestFunction::term(1, c(0.0, 1.0), vec![1], t).unwrap();
        let norm = |h: &TestFunction| seminorm_lambda(h, lambda, &w, 4, &grid).unwrap().value;
        let (nf, ng) = (norm(&f), norm(&g));
        prop_assert!((norm(&f.scale(c(-a, 0.0))) - a * nf).abs() <= 1e-10 * a * nf);
        prop_assert!(norm(&f.add(&g)) <= (nf + ng) * (1.0 + 1e-12));
    }

    #[test]
    fn formal_composition_is_bilinear(p1 in coeffs(3), p2 in coeffs(3), q in coeffs(3), a in -2.0f64..2.0, x in -3.0f64..3.0, xi in -3.0f64..3.0) {
        let (p1, p2, q) = (xi_poly(&p1), xi_poly(&p2), x_poly(&q));
        let sum = |p: &SymbolExpr| {
            let r = compose_formal(&finite(p), &finite(&q), 4).unwrap();
            r.partial_sum(r.terms().len()).eval(&[x], &[xi])
        };
        let lhs = sum(&p1.scale(c(a, 0.0)).add(&p2));
        let rhs = sum(&p1) * a + sum(&p2);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn operator_is_linear(p in coeffs(4), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let sp = spec();
        let p = xi_poly(&p);
        let u = TestFunction::gaussian(1, 0.7).unwrap().sample(&sp);
        let v = TestFunction::term(1, c(1.0, 0.0), vec![1], 0.4).unwrap().sample(&sp);
        let lhs = apply_symbol_op(&p, &u.scale(c(a, 0.0)).add(&v.scale(c(b, 0.0))).unwrap()).unwrap();
        let rhs = apply_symbol_op(&p, &u).unwrap().scale(c(a, 0.0)).add(&apply_symbol_op(&p, &v).unwrap().scale(c(b, 0.0))).unwrap();
        let scale = multiplier_scale(&p, &u) + multiplier_scale(&p, &v);
        let err = lhs.values().iter().zip(rhs.values()).map(|(l, r)| (l - r).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * scale);
    }

    #[test]
    fn constant_coefficient_operators_commute_with_shifts(p in coeffs(4), shift in 1usize..64) {
        let sp = spec();
        let p = xi_poly(&p);
        let u = TestFunction::gaussian(1, 0.5).unwrap().sample(&sp);
        let rotate = |g: &GridFunction| {
            let mut v = g.values().to_vec();
            v.rotate_right(shift);
            GridFunction::new(sp, Space::Physical, v).unwrap()
        };
        let a = apply_symbol_op(&p, &rotate(&u)).unwrap();
        let b = rotate(&apply_symbol_op(&p, &u).unwrap());
        let err = a.values().iter().zip(b.values()).map(|(l, r)| (l - r).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * multiplier_scale(&p, &u));
    }

    #[test]
    fn reflected_gaussian_amplitudes_have_symmetric_kernels(s in 0.1f64..1.0, t in 0.1f64..1.0, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let k = kernel(&AmplitudeExpr::gaussian(1, s, s, t).unwrap()).unwrap();
        let (a, b) = (k.eval(&[x], &[y]), k.eval(&[y], &[x]));
        prop_assert!((a - b).norm() <= 1e-14 * (1.0 + a.norm()));
    }
}

