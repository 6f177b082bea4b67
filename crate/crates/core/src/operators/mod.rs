//! Grid application of symbol and amplitude operators, the regularized
//! oscillatory integral, kernels and their off-diagonal decay, and residual
//! checks of the composition and transpose expansions.
//!
//! Quantization: `Pu(x) = ∫ e^{i⟨x,ξ⟩} p(x, ξ) û(ξ) dξ` with `û = ∫ u e^{-i⟨x,ξ⟩} dx`.
//! Differential symbols carry `(2π)^{-d}`, so `Op(p)Op(q) = Op((2π)^d p∘q)`.

mod kernel;
mod verify;

pub use kernel::{
    kernel, kernel_of_symbol, kernel_quadrature, kernel_quadrature_check, offdiagonal_decay_report, DecayReport,
    DecayRow, KernelExpr, KernelGrid, KernelTerm, QuadratureCheck,
};
pub use verify::{compose_and_compare, transpose_and_compare, ResidualReport};

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::calculus::SymbolEvaluator;
use crate::error::{Error, Result};
use crate::function_spaces::{GridFunction, GridSpec, Space, TestFunction};
use crate::symbols::{AmplitudeExpr, SymbolExpr, AXI, AY};
use crate::terms::{TermExpr, TermKey};

/// Fraction of the box used by every residual metric.
pub const INTERIOR: f64 = 0.6;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn physical(u: &GridFunction) -> Result<()> {
    if u.space() != Space::Physical {
        return Err(Error::Tag("operators act on physical-space grid functions".into()));
    }
    Ok(())
}

/// `∫∫ e^{i⟨x−y,ξ⟩} b(x, y, ξ) f(y) dy dξ` on the grid for a sum of separable
/// terms `X(x) Y(y) H(ξ)`: one forward and one inverse transform per distinct
/// `(Y, H)` pair.
fn apply_separable(b: &TermExpr, f: &GridFunction) -> Result<GridFunction> {
    physical(f)?;
    let spec = *f.spec();
    let d = spec.dim;
    if b.dim() != d {
        return Err(Error::Dimension { expected: d, found: b.dim() });
    }
    let mut groups: BTreeMap<TermKey, TermExpr> = BTreeMap::new();
    for (k, v) in b.iter() {
        let yk = TermKey { powers: k.powers[d..].to_vec(), widths: k.widths[1..].to_vec() };
        let x = TermExpr::monomial(d, 1, *v, k.powers[..d].to_vec(), vec![k.widths[0]])?;
        let slot = groups.entry(yk).or_insert_with(|| TermExpr::zero(d, 1));
        *slot = slot.add(&x);
    }
    let xs: Vec<Vec<f64>> = spec.points(Space::Physical).collect();
    let xis: Vec<Vec<f64>> = spec.points(Space::Frequency).collect();
    let norm = c((2.0 * PI).powi(d as i32));
    let mut out = vec![c(0.0); spec.len()];
    for (yk, x_part) in groups {
        let y = TermExpr::monomial(d, 1, c(1.0), yk.powers[..d].to_vec(), vec![yk.widths[0]])?;
        let h = TermExpr::monomial(d, 1, c(1.0), yk.powers[d..].to_vec(), vec![yk.widths[1]])?;
        let fy = if y.is_zero() { f.clone() } else { f.mul_fn(|p| y.eval(p)) };
        let spectrum = fy.fourier()?;
        let shaped: Vec<Complex64> =
            spectrum.values().iter().zip(&xis).map(|(v, xi)| v * h.eval(xi)).collect();
        let back = GridFunction::new(spec, Space::Frequency, shaped)?.inverse_fourier()?;
        for ((o, v), x) in out.iter_mut().zip(back.values()).zip(&xs) {
            *o += v * norm * x_part.eval(x);
        }
    }
    GridFunction::new(spec, Space::Physical, out)
}

/// `Op(p)u` on the grid, termwise over the separable terms of `p`.
pub fn apply_symbol_op(p: &SymbolExpr, u: &GridFunction) -> Result<GridFunction> {
    apply_separable(p.to_amplitude().expr(), u)
}

/// `Op(a)u` for a realized symbol by direct ξ-quadrature at every grid point,
/// `O(N^{2d})` evaluations.
pub fn apply_evaluator_op(e: &SymbolEvaluator, u: &GridFunction) -> Result<GridFunction> {
    physical(u)?;
    let spec = *u.spec();
    if spec.len() > 4096 {
        return Err(Error::Resource(format!("direct quadrature limited to 4096 grid points, got {}", spec.len())));
    }
    let spectrum = u.fourier()?;
    let xis: Vec<Vec<f64>> = spec.points(Space::Frequency).collect();
    let cell = spec.dxi().powi(spec.dim as i32);
    Ok(GridFunction::from_fn(spec, Space::Physical, |x| {
        let mut acc = c(0.0);
        for (xi, v) in xis.iter().zip(spectrum.values()) {
            let phase: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
            acc += Complex64::from_polar(1.0, phase) * e.eval(x, xi) * v;
        }
        acc * cell
    }))
}

/// The iterated integral `∫(∫ e^{i⟨x−y,ξ⟩} a(x, y, ξ) f(y) dy) dξ` on the grid.
/// Needs Gaussian decay of `a` in ξ; anything else goes through the regularized path.
pub fn apply_amplitude_op(a: &AmplitudeExpr, f: &GridFunction) -> Result<GridFunction> {
    if !a.is_zero() && !a.has_xi_decay() {
        return Err(Error::NotRepresentable(
            "amplitude without Gaussian ξ-decay; use the regularized operator".into(),
        ));
    }
    apply_separable(a.expr(), f)
}

/// Closed form of `∫∫ e^{i⟨x−y,ξ⟩} b(x, y, ξ) f(y) dy dξ` as a function of x.
/// The y-transform of `b·f` supplies Gaussian decay in ξ, so no ξ-decay of `b` is needed.
fn exact_iterated(b: &TermExpr, f: &TestFunction) -> Result<TermExpr> {
    let fy = f.expr().extend_blocks(2).permute_blocks(&[1, 0, 2]);
    // ∫ e^{-i⟨y,η⟩} b f dy at η = ξ leaves blocks (x, ξ); then ∫ e^{i⟨ζ,ξ⟩} · dξ at ζ = x.
    let inner = b.mul(&fy).fourier(AY, -1.0)?.merge(AY, AXI);
    inner.fourier(1, 1.0).map(|t| t.merge(1, 0))
}

/// `A f` in closed form for a test function `f`.
pub fn amplitude_op_exact(a: &AmplitudeExpr, f: &TestFunction) -> Result<TermExpr> {
    if a.dim() != f.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: f.dim() });
    }
    exact_iterated(a.expr(), f)
}

/// `Op(p) f` in closed form for a test function `f`.
pub fn symbol_op_exact(p: &SymbolExpr, f: &TestFunction) -> Result<TermExpr> {
    amplitude_op_exact(&p.to_amplitude(), f)
}

/// `χ(x, ξ) = (1 + Σx_i + Σξ_i) e^{-|x|²-|ξ|²}`, with `χ(0, 0) = 1`.
pub fn standard_regularizer(dim: usize) -> SymbolExpr {
    let mut lin = SymbolExpr::constant(dim, c(1.0));
    for i in 0..dim {
        lin = lin.add(&SymbolExpr::x(dim, i)).add(&SymbolExpr::xi(dim, i));
    }
    lin.mul(&SymbolExpr::gaussian(dim))
}

fn regularized_amplitude(a: &AmplitudeExpr, chi: &SymbolExpr, delta: f64) -> Result<TermExpr> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("δ must be positive, got {delta}")));
    }
    if chi.dim() != a.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: chi.dim() });
    }
    let at0 = chi.eval(&vec![0.0; chi.dim()], &vec![0.0; chi.dim()]);
    if (at0 - c(1.0)).norm() > 1e-12 {
        return Err(Error::Config(format!("regularizer must equal 1 at the origin, got {at0}")));
    }
    let scaled = chi.expr().dilate(0, delta).dilate(1, delta);
    let chi3 = SymbolExpr::from_expr(scaled)?.to_amplitude();
    Ok(a.expr().mul(chi3.expr()))
}

/// `A_{δ,χ} f = ∫∫ e^{i⟨x−y,ξ⟩} a(x, y, ξ) χ(δx, δξ) f(y) dy dξ` on the grid.
pub fn apply_amplitude_op_regularized(
    a: &AmplitudeExpr,
    f: &GridFunction,
    chi: &SymbolExpr,
    delta: f64,
) -> Result<GridFunction> {
    apply_separable(&regularized_amplitude(a, chi, delta)?, f)
}

/// `A_{δ,χ} f` in closed form.
pub fn amplitude_op_regularized_exact(
    a: &AmplitudeExpr,
    f: &TestFunction,
    chi: &SymbolExpr,
    delta: f64,
) -> Result<TermExpr> {
    exact_iterated(&regularized_amplitude(a, chi, delta)?, f)
}

/// Value at `0` of the interpolating polynomial through `(xs[i], ys[i])`.
pub fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    assert_eq!(xs.len(), ys.len());
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * xs[i + m] - p[i + 1] * xs[i]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// `sup |g|` over the inner part of the box.
pub fn interior_sup(g: &GridFunction, fraction: f64) -> f64 {
    g.values()
        .iter()
        .enumerate()
        .filter(|(i, _)| g.spec().is_interior(*i, fraction))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
}

fn interior_diff(a: &GridFunction, b: &GridFunction, fraction: f64) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .enumerate()
        .filter(|(i, _)| a.spec().is_interior(*i, fraction))
        .map(|(_, (x, y))| (x - y).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub k: usize,
    pub l: usize,
    /// `|A_{1/k} f − A_{1/l} f|₀`, the interior sup norm.
    pub distance: f64,
    /// `distance / |1/k − 1/l|`.
    pub slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub ks: Vec<usize>,
    pub rows: Vec<ConvergenceRow>,
    pub slope_min: f64,
    pub slope_max: f64,
    pub slope_stable: bool,
    /// Distances to the finest `δ` shrink along the sequence.
    pub distances_decrease: bool,
    /// `k` values behind the extrapolation: `ks` continued by doubling until
    /// the extrapolated value settles.
    pub limit_ks: Vec<usize>,
    /// Neville extrapolation to `δ = 0` against the direct iterated integral.
    pub limit_error: f64,
    /// Largest deviation of a grid `A_δ f` from its closed form.
    pub exact_error: f64,
    pub pass: bool,
}

fn extrapolate(ks: &[usize], outs: &[GridFunction], spec: &GridSpec) -> Result<GridFunction> {
    let deltas: Vec<f64> = ks.iter().map(|&k| 1.0 / k as f64).collect();
    let values = (0..spec.len())
        .map(|p| neville_at_zero(&deltas, &outs.iter().map(|o| o.values()[p]).collect::<Vec<_>>()))
        .collect();
    GridFunction::new(*spec, Space::Physical, values)
}

/// `A_{1/k} f` for every `k`, pairwise distances and slopes, and the
/// extrapolated limit compared with [`apply_amplitude_op`].
pub fn regularization_study(
    a: &AmplitudeExpr,
    f: &TestFunction,
    chi: &SymbolExpr,
    ks: &[usize],
    spec: &GridSpec,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    if ks.len() < 2 || ks.contains(&0) {
        return Err(Error::Config("need at least two positive k values".into()));
    }
    let fg = f.sample(spec);
    let mut outs = Vec::with_capacity(ks.len());
    let mut exact_error: f64 = 0.0;
    for &k in ks {
        let delta = 1.0 / k as f64;
        let g = apply_amplitude_op_regularized(a, &fg, chi, delta)?;
        let exact = amplitude_op_regularized_exact(a, f, chi, delta)?;
        let eg = GridFunction::from_fn(*spec, Space::Physical, |x| exact.eval(x));
        exact_error = exact_error.max(g.interior_rel_error(&eg, INTERIOR));
        outs.push(g);
    }
    let mut rows = Vec::new();
    for i in 0..ks.len() {
        for j in i + 1..ks.len() {
            let distance = interior_diff(&outs[i], &outs[j], INTERIOR);
            let gap = (1.0 / ks[i] as f64 - 1.0 / ks[j] as f64).abs();
            rows.push(ConvergenceRow { k: ks[i], l: ks[j], distance, slope: distance / gap });
        }
    }
    let slope_min = rows.iter().map(|r| r.slope).fold(f64::INFINITY, f64::min);
    let slope_max = rows.iter().map(|r| r.slope).fold(0.0, f64::max);
    let last = outs.len() - 1;
    let to_last: Vec<f64> = (0..last).map(|i| interior_diff(&outs[i], &outs[last], INTERIOR)).collect();
    let distances_decrease = to_last.windows(2).all(|v| v[1] <= v[0]);
    let direct = apply_amplitude_op(a, &fg)?;
    let scale = interior_sup(&direct, INTERIOR).max(f64::MIN_POSITIVE);
    let mut limit_ks = ks.to_vec();
    let mut limit = extrapolate(&limit_ks, &outs, spec)?;
    for _ in 0..6 {
        let k = 2 * limit_ks[limit_ks.len() - 1];
        outs.push(apply_amplitude_op_regularized(a, &fg, chi, 1.0 / k as f64)?);
        limit_ks.push(k);
        let next = extrapolate(&limit_ks, &outs, spec)?;
        let change = interior_diff(&next, &limit, INTERIOR) / scale;
        limit = next;
        if change <= 0.01 * tolerance {
            break;
        }
    }
    let limit_error = interior_diff(&limit, &direct, INTERIOR) / scale;
    let slope_stable = slope_min > 0.0 && slope_max <= 2.0 * slope_min;
    Ok(ConvergenceReport {
        ks: ks.to_vec(),
        rows,
        slope_min,
        slope_max,
        slope_stable,
        distances_decrease,
        limit_ks,
        limit_error,
        exact_error,
        pass: slope_stable && distances_decrease && limit_error <= tolerance,
    })
}

#[cfg(test)]
mod tests;
