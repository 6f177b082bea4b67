use serde::Serialize;

use std::sync::Arc;

use super::AmplitudeExpr;
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use crate::sampling::{geometric_radii, radial_points, rng};
use crate::terms::TermExpr;
use crate::weights::WeightFunction;

/// Largest total derivative order examined by the class checks.
pub const DEFAULT_ORDER_CAP: usize = 16;

/// Sample points `r·θ` in `R^n` with `r ∈ {0, 1, 2, 4, ..., max_radius}`
/// and seeded random directions `θ`.
pub fn class_grid(n: usize, count: usize, max_radius: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut g = rng(seed);
    radial_points(&mut g, n, &geometric_radii(max_radius), count)
}

/// `⟨v⟩ = (1 + |v|²)^{1/2}`, in the log domain.
pub(crate) fn ln_bracket(v: &[f64]) -> f64 {
    0.5 * v.iter().map(|a| a * a).sum::<f64>().ln_1p()
}

/// Largest `|∂^γ f|` per total order at one sample point, as logarithms.
#[derive(Debug, Clone)]
pub struct DerivativeProfile {
    pub point: Vec<f64>,
    /// `ln max_{|γ|=k} |∂^γ f(point)|`, `-∞` when all vanish.
    pub ln_max: Vec<f64>,
    pub argmax: Vec<Vec<usize>>,
}

/// Anything that yields Taylor jets of a function of `(x, ξ) ∈ R^{2d}`.
pub trait SymbolJets {
    fn dim(&self) -> usize;
    fn jet_at(&self, space: &Arc<JetSpace>, z: &[f64]) -> Jet;
}

impl SymbolJets for super::SymbolExpr {
    fn dim(&self) -> usize {
        self.expr().dim()
    }

    fn jet_at(&self, space: &Arc<JetSpace>, z: &[f64]) -> Jet {
        self.expr().jet(space, z)
    }
}

impl DerivativeProfile {
    pub fn compute(expr: &TermExpr, points: &[Vec<f64>], order_cap: usize) -> Vec<Self> {
        Self::from_jets(expr.dim() * expr.blocks(), points, order_cap, |space, p| expr.jet(space, p))
    }

    pub fn from_jets(
        nv: usize,
        points: &[Vec<f64>],
        order_cap: usize,
        jet_at: impl Fn(&Arc<JetSpace>, &[f64]) -> Jet,
    ) -> Vec<Self> {
        let space = JetSpace::new(nv, order_cap);
        points
            .iter()
            .map(|p| {
                let jet = jet_at(&space, p);
                let mut ln_max = vec![f64::NEG_INFINITY; order_cap + 1];
                let mut argmax = vec![vec![0; nv]; order_cap + 1];
                for (gamma, mag) in jet.derivative_magnitudes() {
                    let k: usize = gamma.iter().sum();
                    let l = mag.ln();
                    if l > ln_max[k] {
                        ln_max[k] = l;
                        argmax[k] = gamma.to_vec();
                    }
                }
                DerivativeProfile { point: p.clone(), ln_max, argmax }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub n: usize,
    /// Minimal constant over the whole sample; 0 for the zero function.
    pub c_n: f64,
    /// The same constant restricted to the inner half of the sampled radii.
    pub c_n_half_radius: f64,
    pub stable: bool,
    /// Derivative multi-index over all variable blocks at the witness.
    pub witness_order: Vec<usize>,
    pub witness_point: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub kind: &'static str,
    pub weight: String,
    pub m: f64,
    pub rho: f64,
    pub order_cap: usize,
    pub grid_radius: f64,
    pub points: usize,
    pub rows: Vec<ClassRow>,
    /// `C_n` nondecreasing in `n`, as forced by `nφ*(k/n)` decreasing in `n`.
    pub monotone_in_n: bool,
    pub pass: bool,
}

impl ClassReport {
    pub fn constant(&self, n: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.c_n)
    }
}

fn validate(rho: f64, n_list: &[usize], order_cap: usize) -> Result<()> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Domain(format!("ρ must lie in (0, 1], got {rho}")));
    }
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::Config("n list must be nonempty and contain only positive integers".into()));
    }
    if order_cap > DEFAULT_ORDER_CAP {
        return Err(Error::Resource(format!("order cap {order_cap} exceeds {DEFAULT_ORDER_CAP}")));
    }
    Ok(())
}

/// `ln C_n = max over sample and orders of ln|∂f| − ln(bound / C_n)`; the
/// closure supplies the order-independent and per-order pieces of the bound.
fn class_rows(
    profiles: &[DerivativeProfile],
    w: &WeightFunction,
    rho: f64,
    n_list: &[usize],
    // (ln of the per-point growth factor, ln of the base of the per-order power)
    bound: impl Fn(&[f64]) -> (f64, f64),
) -> (Vec<ClassRow>, f64) {
    let radius = profiles.iter().map(|p| p.point.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let half = 0.5 * radius * (1.0 + 1e-12);
    let pre: Vec<(f64, f64, bool)> = profiles
        .iter()
        .map(|p| {
            let (g, b) = bound(&p.point);
            let r = p.point.iter().map(|v| v * v).sum::<f64>().sqrt();
            (g, b, r <= half)
        })
        .collect();
    let rows = n_list
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let pen: Vec<f64> = (0..profiles.first().map_or(1, |p| p.ln_max.len()))
                .map(|k| nf * rho * w.phi_star(k as f64 / nf))
                .collect();
            let mut best = f64::NEG_INFINITY;
            let mut best_half = f64::NEG_INFINITY;
            let mut witness = (Vec::new(), Vec::new());
            for (p, &(g, b, inner)) in profiles.iter().zip(&pre) {
                for (k, &l) in p.ln_max.iter().enumerate() {
                    if l == f64::NEG_INFINITY {
                        continue;
                    }
                    let v = l + rho * k as f64 * b - pen[k] - g;
                    if v > best {
                        best = v;
                        witness = (p.argmax[k].clone(), p.point.clone());
                    }
                    if inner && v > best_half {
                        best_half = v;
                    }
                }
            }
            let (c, ch) = (best.exp(), best_half.exp());
            ClassRow {
                n,
                c_n: c,
                c_n_half_radius: ch,
                stable: c.is_finite() && c <= ch * (1.0 + 1e-6),
                witness_order: witness.0,
                witness_point: witness.1,
            }
        })
        .collect();
    (rows, radius)
}

fn finish(
    kind: &'static str,
    w: &WeightFunction,
    m: f64,
    rho: f64,
    order_cap: usize,
    points: usize,
    (rows, grid_radius): (Vec<ClassRow>, f64),
) -> ClassReport {
    let mut sorted: Vec<&ClassRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let monotone_in_n = sorted.windows(2).all(|v| v[1].c_n >= v[0].c_n * (1.0 - 1e-12));
    let pass = rows.iter().all(|r| r.c_n.is_finite() && r.stable);
    ClassReport { kind, weight: w.name(), m, rho, order_cap, grid_radius, points, rows, monotone_in_n, pass }
}

/// Minimal `C_n` with `|D_x^α D_ξ^β p| ≤ C_n ⟨(x,ξ)⟩^{-ρ|α+β|} e^{nρφ*(|α+β|/n)} e^{mω(x)} e^{mω(ξ)}`
/// over the sample points of `R^{2d}` and orders `≤ order_cap`.
pub fn check_symbol_class(
    p: &impl SymbolJets,
    m: f64,
    rho: f64,
    w: &WeightFunction,
    n_list: &[usize],
    grid: &[Vec<f64>],
    order_cap: usize,
) -> Result<ClassReport> {
    validate(rho, n_list, order_cap)?;
    let d = p.dim();
    if let Some(bad) = grid.iter().find(|z| z.len() != 2 * d) {
        return Err(Error::Dimension { expected: 2 * d, found: bad.len() });
    }
    let profiles = DerivativeProfile::from_jets(2 * d, grid, order_cap, |s, z| p.jet_at(s, z));
    let rows = class_rows(&profiles, w, rho, n_list, |z| {
        (m * (w.radial(&z[..d]) + w.radial(&z[d..])), ln_bracket(z))
    });
    Ok(finish("symbol", w, m, rho, order_cap, grid.len(), rows))
}

/// As [`check_symbol_class`] on `R^{3d}` with the extra `⟨x−y⟩^{ρ|α+β+γ|}` factor.
pub fn check_amplitude_class(
    a: &AmplitudeExpr,
    m: f64,
    rho: f64,
    w: &WeightFunction,
    n_list: &[usize],
    grid: &[Vec<f64>],
    order_cap: usize,
) -> Result<ClassReport> {
    validate(rho, n_list, order_cap)?;
    let d = a.dim();
    if let Some(bad) = grid.iter().find(|z| z.len() != 3 * d) {
        return Err(Error::Dimension { expected: 3 * d, found: bad.len() });
    }
    let profiles = DerivativeProfile::compute(a.expr(), grid, order_cap);
    let rows = class_rows(&profiles, w, rho, n_list, |z| {
        let (x, y, xi) = (&z[..d], &z[d..2 * d], &z[2 * d..]);
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        (m * (w.radial(x) + w.radial(y) + w.radial(xi)), ln_bracket(z) - ln_bracket(&diff))
    });
    Ok(finish("amplitude", w, m, rho, order_cap, grid.len(), rows))
}

#[cfg(test)]
mod tests {
    use super::super::SymbolExpr;
    use super::*;
    use num_complex::Complex64;

    fn gevrey() -> WeightFunction {
        WeightFunction::gevrey(0.5).unwrap()
    }

    #[test]
    fn zero_symbol_has_zero_constants() {
        let r = check_symbol_class(&SymbolExpr::zero(1), 0.0, 1.0, &gevrey(), &[1, 2], &class_grid(2, 200, 64.0, 1), 8)
            .unwrap();
        assert!(r.rows.iter().all(|row| row.c_n == 0.0));
        assert!(r.pass);
    }

    #[test]
    fn xi_squared_is_in_order_two() {
        let p = SymbolExpr::xi(1, 0).mul(&SymbolExpr::xi(1, 0));
        let r = check_symbol_class(&p, 2.0, 1.0, &gevrey(), &[1, 2, 4], &class_grid(2, 1000, 64.0, 2), 16).unwrap();
        assert!(r.pass, "{r:#?}");
        assert!(r.monotone_in_n);
    }

    #[test]
    fn cubic_growth_is_flagged_at_order_one() {
        let x = SymbolExpr::xi(1, 0);
        let p = x.mul(&x).mul(&x).mul(&x);
        let r = check_symbol_class(&p, 1.0, 1.0, &gevrey(), &[1], &class_grid(2, 1000, 64.0, 2), 4).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn gaussian_amplitude_is_in_order_zero() {
        let a = AmplitudeExpr::gaussian(1, 1.0, 1.0, 1.0).unwrap();
        let r = check_amplitude_class(&a, 0.0, 1.0, &gevrey(), &[1, 2], &class_grid(3, 1000, 64.0, 3), 8).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn y_independent_amplitude_dominated_by_symbol() {
        let w = gevrey();
        let p = SymbolExpr::term(1, Complex64::new(1.0, 0.0), vec![1], vec![2], 0.5, 0.5).unwrap();
        let a = p.to_amplitude();
        let grid3 = class_grid(3, 1000, 16.0, 4);
        let ra = check_amplitude_class(&a, 0.0, 1.0, &w, &[1, 2], &grid3, 6).unwrap();
        // Symbol check on the projected (x, ξ) sample; at m = 0 only the ratio
        // ⟨(x,y,ξ)⟩ / (⟨x−y⟩⟨(x,ξ)⟩), raised to the order, separates the two.
        let grid2: Vec<Vec<f64>> = grid3.iter().map(|z| vec![z[0], z[2]]).collect();
        let rs = check_symbol_class(&p, 0.0, 1.0, &w, &[1, 2], &grid2, 6).unwrap();
        let factor = grid3
            .iter()
            .map(|z| (ln_bracket(z) - ln_bracket(&[z[0] - z[1]]) - ln_bracket(&[z[0], z[2]])).max(0.0))
            .fold(0.0, f64::max);
        for (x, y) in ra.rows.iter().zip(&rs.rows) {
            assert!(x.c_n <= y.c_n * (6.0 * factor).exp() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rejects_bad_rho_and_cap() {
        let p = SymbolExpr::gaussian(1);
        let g = class_grid(2, 10, 4.0, 0);
        assert!(matches!(check_symbol_class(&p, 0.0, 0.0, &gevrey(), &[1], &g, 4), Err(Error::Domain(_))));
        assert!(matches!(check_symbol_class(&p, 0.0, 1.0, &gevrey(), &[1], &g, 17), Err(Error::Resource(_))));
    }
}
