use std::f64::consts::PI;

use num_complex::Complex64;

use super::*;
use crate::terms::TermExpr;
use crate::weights::WeightFunction;

fn coord() -> TermExpr {
    TermExpr::coordinate(1, 1, 0, 0)
}

fn x_xi() -> SymbolExpr {
    SymbolExpr::term(1, c(1.0 / (2.0 * PI)), vec![1], vec![1], 0.0, 0.0).unwrap()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn spec() -> GridSpec {
    GridSpec::default_for(1).unwrap()
}

fn max_rel(g: &GridFunction, exact: impl Fn(&[f64]) -> Complex64) -> f64 {
    let e = GridFunction::from_fn(*g.spec(), Space::Physical, exact);
    g.interior_rel_error(&e, INTERIOR)
}

#[test]
fn derivative_of_gaussian() {
    let u = TestFunction::gaussian(1, 1.0).unwrap();
    let p = SymbolExpr::constant_coefficient(1, &[(vec![1], 1.0)]).unwrap();
    let g = apply_symbol_op(&p, &u.sample(&spec())).unwrap();
    let du = u.d(&[1]);
    assert!(max_rel(&g, |x| du.eval(x)) < 1e-10);
    let exact = symbol_op_exact(&p, &u).unwrap();
    assert!(max_rel(&g, |x| exact.eval(x)) < 1e-10);
}

#[test]
fn identity_symbol() {
    let u = TestFunction::term(1, c(1.0), vec![2], 0.5).unwrap();
    let p = SymbolExpr::constant(1, c(1.0 / (2.0 * PI)));
    let g = apply_symbol_op(&p, &u.sample(&spec())).unwrap();
    assert!(max_rel(&g, |x| u.eval(x)) < 1e-12);
}

#[test]
fn x_times_derivative() {
    let u = TestFunction::gaussian(1, 0.7).unwrap();
    let g = apply_symbol_op(&x_xi(), &u.sample(&spec())).unwrap();
    let oracle = coord().mul(u.d(&[1]).expr());
    assert!(max_rel(&g, |t| oracle.eval(t)) < 1e-10);
}

#[test]
fn gaussian_amplitude_triple_integral() {
    // e^{-x²} ∫∫ e^{i(x−y)ξ} e^{-ξ²} e^{-2y²} dy dξ = (2π/3) e^{-11x²/9}.
    let a = AmplitudeExpr::gaussian(1, 1.0, 1.0, 1.0).unwrap();
    let f = TestFunction::gaussian(1, 1.0).unwrap();
    let oracle = |x: &[f64]| c(2.0 * PI / 3.0 * (-11.0 * x[0] * x[0] / 9.0).exp());
    let g = apply_amplitude_op(&a, &f.sample(&spec())).unwrap();
    assert!(max_rel(&g, oracle) < 1e-10);
    let exact = amplitude_op_exact(&a, &f).unwrap();
    for x in [-1.3, 0.0, 0.4, 2.0] {
        assert!((exact.eval(&[x]) - oracle(&[x])).norm() < 1e-13);
    }
}

#[test]
fn y_dependent_amplitude_acts_before_differentiation() {
    // a = (2π)^{-1} y ξ gives A f = D(y f).
    let a = AmplitudeExpr::term(1, c(1.0 / (2.0 * PI)), vec![0], vec![1], vec![1], 0.0, 0.0, 0.0).unwrap();
    let f = TestFunction::gaussian(1, 0.5).unwrap();
    let oracle = TestFunction::from_expr(coord().mul(f.expr())).unwrap().d(&[1]);
    let exact = amplitude_op_exact(&a, &f).unwrap();
    for x in [-2.0, -0.3, 0.0, 1.1] {
        assert!((exact.eval(&[x]) - oracle.eval(&[x])).norm() < 1e-12);
    }
    assert!(matches!(apply_amplitude_op(&a, &f.sample(&spec())), Err(Error::NotRepresentable(_))));
}

#[test]
fn kernel_of_xi_gaussian() {
    let p = SymbolExpr::term(1, c(1.0), vec![0], vec![0], 0.0, 1.0).unwrap();
    let k = kernel_of_symbol(&p).unwrap();
    for (x, y) in [(0.0, 0.0), (1.0, -0.5), (3.0, 2.0), (-2.0, 1.5)] {
        let oracle = PI.sqrt() * (-(x - y) * (x - y) / 4.0f64).exp();
        assert!((k.eval(&[x], &[y]) - c(oracle)).norm() < 1e-14);
    }
}

#[test]
fn kernel_matches_quadrature() {
    let a = AmplitudeExpr::term(1, c(1.0), vec![1], vec![0], vec![2], 0.3, 0.4, 0.5).unwrap();
    let r = kernel_quadrature_check(&a, 20, 3.0, 7).unwrap();
    assert!(r.max_error < 1e-7, "{r:?}");
}

#[test]
fn kernel_jet_value_and_slope() {
    let a = AmplitudeExpr::gaussian(1, 0.2, 0.3, 0.5).unwrap();
    let k = kernel(&a).unwrap();
    let space = crate::jet::JetSpace::new(2, 2);
    let (x, y, h) = (0.7, -0.4, 1e-5);
    let j = k.jet(&space, &[x], &[y]);
    assert!((j.value() - k.eval(&[x], &[y])).norm() < 1e-14);
    let fd = (k.eval(&[x + h], &[y]) - k.eval(&[x - h], &[y])) / (2.0 * h);
    assert!((j.derivative(&[1, 0]) - fd).norm() < 1e-8);
}

#[test]
fn reflected_amplitude_gives_symmetric_kernel() {
    let a = AmplitudeExpr::gaussian(1, 0.3, 0.3, 0.6).unwrap();
    let k = kernel(&a).unwrap();
    let pts = crate::function_spaces::box_points(2, 3.0, 7);
    assert!(k.max_asymmetry(&pts) < 1e-14);
}

#[test]
fn decay_report_for_gaussian_amplitude() {
    let a = AmplitudeExpr::gaussian(1, 0.5, 0.5, 0.5).unwrap();
    let w = WeightFunction::gevrey(0.5).unwrap();
    let kg = KernelGrid::new(kernel(&a).unwrap(), 8.0, 33, 1.0).unwrap();
    let r = offdiagonal_decay_report(&kg, &w, &[1.0, 2.0], 6).unwrap();
    assert!(r.pass, "{r:#?}");
    assert!(r.rows.iter().all(|row| row.c_lambda.is_finite() && row.c_lambda > 0.0));
}

#[test]
fn small_delta_regularization_approaches_direct() {
    let a = AmplitudeExpr::gaussian(1, 0.5, 0.5, 0.5).unwrap();
    let f = TestFunction::gaussian(1, 1.0).unwrap();
    let fg = f.sample(&spec());
    let chi = standard_regularizer(1);
    let reg = apply_amplitude_op_regularized(&a, &fg, &chi, 1e-4).unwrap();
    let direct = apply_amplitude_op(&a, &fg).unwrap();
    assert!(reg.interior_rel_error(&direct, INTERIOR) < 1e-3);
    assert!(matches!(apply_amplitude_op_regularized(&a, &fg, &chi, 0.0), Err(Error::Domain(_))));
}

#[test]
fn regularizer_must_be_one_at_origin() {
    let a = AmplitudeExpr::gaussian(1, 0.5, 0.5, 0.5).unwrap();
    let f = TestFunction::gaussian(1, 1.0).unwrap();
    let chi = standard_regularizer(1).scale(c(2.0));
    assert!(matches!(amplitude_op_regularized_exact(&a, &f, &chi, 0.5), Err(Error::Config(_))));
}

#[test]
fn neville_recovers_polynomials() {
    let xs = [0.5, 0.25, 0.125];
    let ys: Vec<Complex64> = xs.iter().map(|x| c(3.0 - 2.0 * x + x * x)).collect();
    assert!((neville_at_zero(&xs, &ys) - c(3.0)).norm() < 1e-12);
}

#[test]
fn regularization_study_gaussian() {
    let a = AmplitudeExpr::gaussian(1, 0.5, 0.5, 0.5).unwrap();
    let f = TestFunction::gaussian(1, 1.0).unwrap();
    let r = regularization_study(&a, &f, &standard_regularizer(1), &[4, 8, 16, 32], &spec(), 1e-5).unwrap();
    assert!(r.exact_error < 1e-9, "{r:#?}");
    assert!(r.pass, "{r:#?}");
}

#[test]
fn compose_d_after_x() {
    let p = SymbolExpr::constant_coefficient(1, &[(vec![1], 1.0)]).unwrap();
    let q = SymbolExpr::x(1, 0);
    let u = TestFunction::gaussian(1, 1.0).unwrap();
    let r = compose_and_compare(&p, &q, &u, &spec(), 1e-8).unwrap();
    assert_eq!(r.predicted_index, 2);
    assert!(r.pass, "{r:?}");
}

#[test]
fn compose_rejects_nonterminating() {
    let g = SymbolExpr::gaussian(1);
    let u = TestFunction::gaussian(1, 1.0).unwrap();
    assert!(matches!(compose_and_compare(&g, &g, &u, &spec(), 1e-8), Err(Error::Config(_))));
}

#[test]
fn transpose_of_x_derivative() {
    let p = x_xi();
    let u = TestFunction::gaussian(1, 1.0).unwrap();
    let v = TestFunction::term(1, c(1.0), vec![1], 0.5).unwrap();
    let r = transpose_and_compare(&p, &u, &v, &spec(), 1e-10).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn evaluator_quadrature_matches_fft() {
    let s = crate::calculus::FormalSum::from_symbol(SymbolExpr::gaussian(1), 0.0, 1.0, 1.0).unwrap();
    let w = WeightFunction::gevrey(0.5).unwrap();
    let fam = crate::calculus::build_partition(1, &w, 1.0, 1.0, &crate::calculus::JRule::Default, 4).unwrap();
    let e = crate::calculus::realize_symbol(&s, &fam).unwrap();
    let sp = GridSpec::new(1, 10.0, 128).unwrap();
    let u = TestFunction::gaussian(1, 1.0).unwrap().sample(&sp);
    let a = apply_evaluator_op(&e, &u).unwrap();
    let b = apply_symbol_op(&SymbolExpr::gaussian(1), &u).unwrap();
    assert!(a.interior_rel_error(&b, INTERIOR) < 1e-10);
}
