use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function_spaces::box_points;
use crate::jet::{Jet, JetSpace};
use crate::sampling::rng;
use crate::symbols::{AmplitudeExpr, DerivativeProfile, SymbolExpr, AXI, DEFAULT_ORDER_CAP};
use crate::weights::WeightFunction;

/// `c x^μ y^η (x−y)^κ e^{-s|x|²-r|y|²-q|x−y|²}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelTerm {
    pub c_re: f64,
    pub c_im: f64,
    pub mu: Vec<u32>,
    pub eta: Vec<u32>,
    pub kappa: Vec<u32>,
    pub s: f64,
    pub r: f64,
    pub q: f64,
}

/// `K(x, y) = ∫ e^{i⟨x−y,ξ⟩} a(x, y, ξ) dξ` in closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelExpr {
    pub dim: usize,
    pub terms: Vec<KernelTerm>,
}

/// Kernel of the amplitude `a`, which must decay in ξ.
pub fn kernel(a: &AmplitudeExpr) -> Result<KernelExpr> {
    if !a.is_zero() && !a.has_xi_decay() {
        return Err(Error::NotRepresentable("kernel needs Gaussian ξ-decay of the amplitude".into()));
    }
    let d = a.dim();
    let f = a.expr().fourier(AXI, 1.0)?;
    let terms = f
        .iter()
        .map(|(k, v)| KernelTerm {
            c_re: v.re,
            c_im: v.im,
            mu: k.powers[..d].to_vec(),
            eta: k.powers[d..2 * d].to_vec(),
            kappa: k.powers[2 * d..].to_vec(),
            s: k.widths[0],
            r: k.widths[1],
            q: k.widths[2],
        })
        .collect();
    Ok(KernelExpr { dim: d, terms })
}

/// Kernel of `Op(p)`, i.e. of the y-independent amplitude `p(x, ξ)`.
pub fn kernel_of_symbol(p: &SymbolExpr) -> Result<KernelExpr> {
    kernel(&p.to_amplitude())
}

fn powu(v: f64, p: u32) -> f64 {
    v.powi(p as i32)
}

impl KernelExpr {
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Complex64 {
        let sq = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>();
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let (nx, ny, nd) = (sq(x), sq(y), sq(&diff));
        self.terms
            .iter()
            .map(|t| {
                let mut m = 1.0;
                for i in 0..self.dim {
                    m *= powu(x[i], t.mu[i]) * powu(y[i], t.eta[i]) * powu(diff[i], t.kappa[i]);
                }
                Complex64::new(t.c_re, t.c_im) * m * (-t.s * nx - t.r * ny - t.q * nd).exp()
            })
            .sum()
    }

    /// Taylor jet in the `2d` variables `(x, y)`.
    pub fn jet(&self, space: &Arc<JetSpace>, x: &[f64], y: &[f64]) -> Jet {
        let d = self.dim;
        let xs: Vec<Jet> = (0..d).map(|i| Jet::variable(space, i, x[i])).collect();
        let ys: Vec<Jet> = (0..d).map(|i| Jet::variable(space, d + i, y[i])).collect();
        let ds: Vec<Jet> = xs.iter().zip(&ys).map(|(a, b)| a.sub(b)).collect();
        let sq = |v: &[Jet]| v.iter().fold(Jet::zero(space), |acc, t| acc.add(&t.mul(t)));
        let (nx, ny, nd) = (sq(&xs), sq(&ys), sq(&ds));
        let mut acc = Jet::zero(space);
        for t in &self.terms {
            let q = nx.scale(Complex64::new(-t.s, 0.0))
                .add(&ny.scale(Complex64::new(-t.r, 0.0)))
                .add(&nd.scale(Complex64::new(-t.q, 0.0)));
            let mut term = q.exp();
            for i in 0..d {
                term = term.mul(&xs[i].powi(t.mu[i] as usize));
                term = term.mul(&ys[i].powi(t.eta[i] as usize));
                term = term.mul(&ds[i].powi(t.kappa[i] as usize));
            }
            acc.add_scaled(&term, Complex64::new(t.c_re, t.c_im));
        }
        acc
    }

    /// `K(x, y) = K(y, x)` on the given points.
    pub fn max_asymmetry(&self, points: &[Vec<f64>]) -> f64 {
        let d = self.dim;
        points
            .iter()
            .map(|p| (self.eval(&p[..d], &p[d..]) - self.eval(&p[d..], &p[..d])).norm())
            .fold(0.0, f64::max)
    }
}

/// Trapezoidal ξ-quadrature of `∫ e^{i⟨x−y,ξ⟩} a(x, y, ξ) dξ`, with the box
/// sized so the Gaussian tails fall below `e^{-45}` and the step resolving the
/// oscillation.
pub fn kernel_quadrature(a: &AmplitudeExpr, x: &[f64], y: &[f64]) -> Result<Complex64> {
    if !a.has_xi_decay() {
        return Err(Error::NotRepresentable("quadrature needs Gaussian ξ-decay".into()));
    }
    let d = a.dim();
    if d > 2 {
        return Err(Error::Resource("kernel quadrature is limited to d ≤ 2".into()));
    }
    let (mut t_min, mut t_max, mut deg) = (f64::INFINITY, 0.0f64, 0u32);
    for (k, _) in a.expr().iter() {
        t_min = t_min.min(k.widths[AXI]);
        t_max = t_max.max(k.widths[AXI]);
        deg = deg.max(k.powers[AXI * d..].iter().sum());
    }
    let zeta: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let zmax = zeta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let l = ((45.0 + 3.0 * deg as f64) / t_min).sqrt() + 1.0;
    let h_osc = 2.0 * PI / (zmax + (180.0 * t_max).sqrt() + deg as f64 + 1.0);
    let n = ((2.0 * l / h_osc).ceil() as usize).max(64);
    let h = 2.0 * l / n as f64;
    let axis: Vec<f64> = (0..=n).map(|i| -l + i as f64 * h).collect();
    let mut idx = vec![0usize; d];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut xi = vec![0.0; d];
    loop {
        for i in 0..d {
            xi[i] = axis[idx[i]];
        }
        let wgt: f64 = idx.iter().map(|&i| if i == 0 || i == n { 0.5 } else { 1.0 }).product();
        let phase: f64 = zeta.iter().zip(&xi).map(|(a, b)| a * b).sum();
        acc += Complex64::from_polar(wgt, phase) * a.eval(x, y, &xi);
        let mut ax = 0;
        loop {
            if ax == d {
                return Ok(acc * h.powi(d as i32));
            }
            idx[ax] += 1;
            if idx[ax] <= n {
                break;
            }
            idx[ax] = 0;
            ax += 1;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureCheck {
    pub points: usize,
    /// Largest `|K_quad − K_closed|` over the sample, relative to the sample sup of `|K|`.
    pub max_error: f64,
    pub scale: f64,
}

/// Closed form against quadrature at `count` seeded points of `[-L, L]^{2d}`.
pub fn kernel_quadrature_check(a: &AmplitudeExpr, count: usize, half_width: f64, seed: u64) -> Result<QuadratureCheck> {
    let k = kernel(a)?;
    let d = a.dim();
    let mut g = rng(seed);
    let mut pairs = Vec::with_capacity(count);
    for _ in 0..count {
        let p: Vec<f64> = (0..2 * d).map(|_| g.gen_range(-half_width..half_width)).collect();
        let closed = k.eval(&p[..d], &p[d..]);
        let quad = kernel_quadrature(a, &p[..d], &p[d..])?;
        pairs.push((closed, quad));
    }
    let scale = pairs.iter().map(|(c, _)| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let max_error = pairs.iter().map(|(c, q)| (c - q).norm()).fold(0.0, f64::max) / scale;
    Ok(QuadratureCheck { points: count, max_error, scale })
}

/// A kernel sampled on the tensor grid `[-L, L]^{2d}` with the diagonal strip
/// `|x − y| < r` excluded from decay measurements.
#[derive(Debug, Clone)]
pub struct KernelGrid {
    pub kernel: KernelExpr,
    pub half_width: f64,
    pub per_axis: usize,
    pub r: f64,
}

impl KernelGrid {
    pub fn new(kernel: KernelExpr, half_width: f64, per_axis: usize, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("strip radius must be positive, got {r}")));
        }
        if !(half_width > 0.0) || per_axis < 2 {
            return Err(Error::Config("kernel grid needs a positive half width and ≥ 2 points per axis".into()));
        }
        Ok(KernelGrid { kernel, half_width, per_axis, r })
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        box_points(2 * self.kernel.dim, self.half_width, self.per_axis)
    }

    pub fn values(&self) -> Vec<Complex64> {
        let d = self.kernel.dim;
        self.points().iter().map(|p| self.kernel.eval(&p[..d], &p[d..])).collect()
    }

    fn off_diagonal(&self, p: &[f64]) -> bool {
        let d = self.kernel.dim;
        p[..d].iter().zip(&p[d..]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() >= self.r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayRow {
    pub lambda: f64,
    pub c_lambda: f64,
    pub c_half_radius: f64,
    pub stable: bool,
    pub witness_order: Vec<usize>,
    pub witness_point: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub weight: String,
    pub r: f64,
    pub order_cap: usize,
    pub half_width: f64,
    pub off_diagonal_points: usize,
    pub rows: Vec<DecayRow>,
    pub pass: bool,
}

/// Minimal `C_λ` with `|D_x^α D_y^β K| ≤ C_λ e^{λφ*(|α+β|/λ)} e^{-λω(x)} e^{-λω(y)}`
/// on `|x − y| ≥ r`, and the same over the half-width box.
pub fn offdiagonal_decay_report(
    k: &KernelGrid,
    w: &WeightFunction,
    lambdas: &[f64],
    order_cap: usize,
) -> Result<DecayReport> {
    if order_cap > DEFAULT_ORDER_CAP {
        return Err(Error::Resource(format!("order cap {order_cap} exceeds {DEFAULT_ORDER_CAP}")));
    }
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::Domain("λ values must be positive".into()));
    }
    let d = k.kernel.dim;
    let points: Vec<Vec<f64>> = k.points().into_iter().filter(|p| k.off_diagonal(p)).collect();
    let profiles =
        DerivativeProfile::from_jets(2 * d, &points, order_cap, |s, p| k.kernel.jet(s, &p[..d], &p[d..]));
    let half = 0.5 * k.half_width * (1.0 + 1e-12);
    let rows = lambdas
        .iter()
        .map(|&lambda| {
            let pen: Vec<f64> = (0..=order_cap).map(|o| lambda * w.phi_star(o as f64 / lambda)).collect();
            let (mut best, mut best_half) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            let mut witness = (Vec::new(), Vec::new());
            for p in &profiles {
                let gain = lambda * (w.radial(&p.point[..d]) + w.radial(&p.point[d..]));
                let inner = p.point.iter().all(|v| v.abs() <= half);
                for (o, &l) in p.ln_max.iter().enumerate() {
                    if l == f64::NEG_INFINITY {
                        continue;
                    }
                    let v = l - pen[o] + gain;
                    if v > best {
                        best = v;
                        witness = (p.argmax[o].clone(), p.point.clone());
                    }
                    if inner && v > best_half {
                        best_half = v;
                    }
                }
            }
            let (c, ch) = (best.exp(), best_half.exp());
            DecayRow {
                lambda,
                c_lambda: c,
                c_half_radius: ch,
                stable: c.is_finite() && c <= ch * (1.0 + 1e-6),
                witness_order: witness.0,
                witness_point: witness.1,
            }
        })
        .collect::<Vec<_>>();
    let pass = rows.iter().all(|r| r.stable);
    Ok(DecayReport {
        weight: w.name(),
        r: k.r,
        order_cap,
        half_width: k.half_width,
        off_diagonal_points: points.len(),
        rows,
        pass,
    })
}
