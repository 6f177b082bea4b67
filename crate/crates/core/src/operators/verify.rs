use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{apply_symbol_op, interior_diff, interior_sup, INTERIOR};
use crate::calculus::{
    compose_formal, compose_termination_bound, transpose_formal, transpose_termination_bound, FormalSum,
};
use crate::error::{Error, Result};
use crate::function_spaces::{GridFunction, GridSpec, TestFunction};
use crate::symbols::SymbolExpr;

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub kind: &'static str,
    pub dim: usize,
    /// Relative residual of the operator identity.
    pub residual: f64,
    /// Denominator used for `residual`.
    pub scale: f64,
    /// Index from which the formal sum must vanish, by degree count.
    pub predicted_index: usize,
    /// Index from which the computed formal sum does vanish.
    pub termination_index: usize,
    pub index_matches: bool,
    pub tolerance: f64,
    pub pass: bool,
}

fn finite(p: &SymbolExpr) -> Result<FormalSum> {
    FormalSum::from_symbol(p.clone(), 0.0, 1.0, 1.0)
}

/// `Op(p)Op(q)u` against `Op((2π)^d Σ_j r_j)u` on the grid, where `r_j` is the
/// terminating formal composition. The residual is the interior sup of the
/// difference over the interior sup of `Op(p)Op(q)u` and of `u`.
pub fn compose_and_compare(
    p: &SymbolExpr,
    q: &SymbolExpr,
    u: &TestFunction,
    spec: &GridSpec,
    tolerance: f64,
) -> Result<ResidualReport> {
    let (ps, qs) = (finite(p)?, finite(q)?);
    let predicted = compose_termination_bound(&ps, &qs)
        .ok_or_else(|| Error::Config("composition does not terminate: p is not polynomial in ξ and q is not polynomial in x".into()))?;
    let r = compose_formal(&ps, &qs, predicted)?;
    let index = r.termination_index().unwrap_or(usize::MAX);
    let d = p.dim();
    let full = r.partial_sum(r.terms().len()).scale(Complex64::new((2.0 * PI).powi(d as i32), 0.0));
    let ug = u.sample(spec);
    let lhs = apply_symbol_op(p, &apply_symbol_op(q, &ug)?)?;
    let rhs = apply_symbol_op(&full, &ug)?;
    let scale = interior_sup(&lhs, INTERIOR).max(interior_sup(&ug, INTERIOR)).max(f64::MIN_POSITIVE);
    let residual = interior_diff(&lhs, &rhs, INTERIOR) / scale;
    Ok(ResidualReport {
        kind: "compose",
        dim: d,
        residual,
        scale,
        predicted_index: predicted,
        termination_index: index,
        index_matches: index == predicted,
        tolerance,
        pass: residual <= tolerance && index == predicted,
    })
}

/// `∫ f g dx` over the interior of the box.
fn pairing(f: &GridFunction, g: &GridFunction) -> Complex64 {
    let cell = f.spec().h().powi(f.spec().dim as i32);
    f.values()
        .iter()
        .zip(g.values())
        .enumerate()
        .filter(|(i, _)| f.spec().is_interior(*i, INTERIOR))
        .map(|(_, (a, b))| a * b)
        .sum::<Complex64>()
        * cell
}

fn l2(f: &GridFunction) -> f64 {
    let cell = f.spec().h().powi(f.spec().dim as i32);
    let sum: f64 = f
        .values()
        .iter()
        .enumerate()
        .filter(|(i, _)| f.spec().is_interior(*i, INTERIOR))
        .map(|(_, v)| v.norm_sqr())
        .sum();
    (sum * cell).sqrt()
}

/// `⟨Op(p)u, v⟩` against `⟨u, Op(Σ q_j)v⟩` with `q_j` the terminating formal
/// transpose. The residual is taken relative to the Cauchy–Schwarz scale
/// `max(‖Pu‖‖v‖, ‖u‖‖Qv‖)`.
pub fn transpose_and_compare(
    p: &SymbolExpr,
    u: &TestFunction,
    v: &TestFunction,
    spec: &GridSpec,
    tolerance: f64,
) -> Result<ResidualReport> {
    let ps = finite(p)?;
    let predicted = transpose_termination_bound(&ps)
        .ok_or_else(|| Error::Config("transpose does not terminate: p is polynomial in neither x nor ξ".into()))?;
    let t = transpose_formal(&ps, predicted)?;
    let index = t.termination_index().unwrap_or(usize::MAX);
    let q = t.partial_sum(t.terms().len());
    let (ug, vg) = (u.sample(spec), v.sample(spec));
    let pu = apply_symbol_op(p, &ug)?;
    let qv = apply_symbol_op(&q, &vg)?;
    let (left, right) = (pairing(&pu, &vg), pairing(&ug, &qv));
    let scale = (l2(&pu) * l2(&vg)).max(l2(&ug) * l2(&qv)).max(f64::MIN_POSITIVE);
    let residual = (left - right).norm() / scale;
    Ok(ResidualReport {
        kind: "transpose",
        dim: p.dim(),
        residual,
        scale,
        predicted_index: predicted,
        termination_index: index,
        index_matches: index == predicted,
        tolerance,
        pass: residual <= tolerance && index == predicted,
    })
}
