use std::sync::Arc;

use serde::Serialize;

use super::region_threshold;
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use crate::symbols::{ln_bracket, DerivativeProfile, DEFAULT_ORDER_CAP};
use crate::weights::WeightFunction;

/// A formal sum seen through its partial sums `Σ_{j<N} a_j`.
pub trait PartialSums {
    fn dim(&self) -> usize;
    /// `(m, ρ, R)`.
    fn meta(&self) -> (f64, f64, f64);
    /// Number of computed terms when the sum was cut off, `None` when exact.
    fn available(&self) -> Option<usize>;
    fn partial_jet(&self, n: usize, space: &Arc<JetSpace>, z: &[f64]) -> Jet;
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivRow {
    pub n: usize,
    pub big_n: usize,
    pub d_n: f64,
    pub d_n_half_radius: f64,
    pub region_points: usize,
    pub half_region_points: usize,
    /// "stable", "unstable", or "inconclusive: ..." with the reason.
    pub status: String,
    pub witness_order: Vec<usize>,
    pub witness_point: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivReport {
    pub weight: String,
    pub m: f64,
    pub rho: f64,
    pub radius: f64,
    pub order_cap: usize,
    pub grid_radius: f64,
    pub rows: Vec<EquivRow>,
    pub inconclusive: usize,
    pub pass: bool,
}

/// For each `(n, N)` the minimal `D_n` with
/// `|∂^γ Σ_{j<N}(a_j − b_j)| ≤ D_n ⟨z⟩^{-ρ(|γ|+N)} e^{nρφ*((|γ|+N)/n)} e^{mω(x)+mω(ξ)}`
/// on the sampled region `log(⟨z⟩/R) ≥ (n/N)φ*(N/n)`. A row is stable when the
/// constant over the whole sample matches the one over the inner half radius.
pub fn equivalence_check(
    a: &dyn PartialSums,
    b: &dyn PartialSums,
    w: &WeightFunction,
    n_list: &[usize],
    big_n_list: &[usize],
    grid: &[Vec<f64>],
    order_cap: usize,
) -> Result<EquivReport> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: b.dim() });
    }
    let ((ma, ra, rra), (mb, rb, rrb)) = (a.meta(), b.meta());
    if ma != mb || ra != rb {
        return Err(Error::Config(format!("metadata differ: (m, ρ) = ({ma}, {ra}) vs ({mb}, {rb})")));
    }
    if n_list.is_empty() || n_list.contains(&0) || big_n_list.is_empty() {
        return Err(Error::Config("n and N lists must be nonempty, n positive".into()));
    }
    if order_cap > DEFAULT_ORDER_CAP {
        return Err(Error::Resource(format!("order cap {order_cap} exceeds {DEFAULT_ORDER_CAP}")));
    }
    let d = a.dim();
    if let Some(bad) = grid.iter().find(|z| z.len() != 2 * d) {
        return Err(Error::Dimension { expected: 2 * d, found: bad.len() });
    }
    let (m, rho, r) = (ma, ra, rra.max(rrb));
    let ln_r = r.ln();
    let radius = grid.iter().map(|z| z.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let half = 0.5 * radius * (1.0 + 1e-12);
    let pre: Vec<(f64, f64, bool)> = grid
        .iter()
        .map(|z| {
            let inner = z.iter().map(|v| v * v).sum::<f64>().sqrt() <= half;
            (ln_bracket(z), m * (w.radial(&z[..d]) + w.radial(&z[d..])), inner)
        })
        .collect();
    let limit = a.available().unwrap_or(usize::MAX).min(b.available().unwrap_or(usize::MAX));
    let mut rows = Vec::new();
    for &big_n in big_n_list {
        if big_n > limit {
            for &n in n_list {
                rows.push(EquivRow {
                    n,
                    big_n,
                    d_n: f64::NAN,
                    d_n_half_radius: f64::NAN,
                    region_points: 0,
                    half_region_points: 0,
                    status: format!("inconclusive: N exceeds the {limit} computed terms"),
                    witness_order: Vec::new(),
                    witness_point: Vec::new(),
                });
            }
            continue;
        }
        let profiles = DerivativeProfile::from_jets(2 * d, grid, order_cap, |s, z| {
            a.partial_jet(big_n, s, z).sub(&b.partial_jet(big_n, s, z))
        });
        for &n in n_list {
            let nf = n as f64;
            let thr = region_threshold(w, n, big_n);
            let pen: Vec<f64> =
                (0..=order_cap).map(|k| nf * rho * w.phi_star((k + big_n) as f64 / nf)).collect();
            let (mut best, mut best_half) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            let (mut count, mut count_half) = (0, 0);
            let mut witness = (Vec::new(), Vec::new());
            for (p, &(lb, g, inner)) in profiles.iter().zip(&pre) {
                if lb - ln_r < thr {
                    continue;
                }
                count += 1;
                count_half += inner as usize;
                for (k, &l) in p.ln_max.iter().enumerate() {
                    if l == f64::NEG_INFINITY {
                        continue;
                    }
                    let v = l + rho * (k + big_n) as f64 * lb - pen[k] - g;
                    if v > best {
                        best = v;
                        witness = (p.argmax[k].clone(), p.point.clone());
                    }
                    if inner && v > best_half {
                        best_half = v;
                    }
                }
            }
            let (dn, dh) = (best.exp(), best_half.exp());
            let status = if count == 0 {
                "inconclusive: no samples in the region".to_string()
            } else if count_half == 0 {
                "inconclusive: no region samples within half the grid radius".to_string()
            } else if dn.is_finite() && dn <= dh * (1.0 + 1e-6) {
                "stable".to_string()
            } else {
                "unstable".to_string()
            };
            rows.push(EquivRow {
                n,
                big_n,
                d_n: dn,
                d_n_half_radius: dh,
                region_points: count,
                half_region_points: count_half,
                status,
                witness_order: witness.0,
                witness_point: witness.1,
            });
        }
    }
    let inconclusive = rows.iter().filter(|r| r.status.starts_with("inconclusive")).count();
    let pass = rows.iter().all(|r| r.status != "unstable") && inconclusive < rows.len();
    Ok(EquivReport {
        weight: w.name(),
        m,
        rho,
        radius: r,
        order_cap,
        grid_radius: radius,
        rows,
        inconclusive,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{amplitude_reduction, build_partition, realize_symbol, FormalSum, JRule};
    use super::*;
    use crate::symbols::{class_grid, AmplitudeExpr, SymbolExpr};
    use num_complex::Complex64;

    fn gevrey() -> WeightFunction {
        WeightFunction::gevrey(0.5).unwrap()
    }

    #[test]
    fn identical_sums_have_zero_constants() {
        let s = FormalSum::new(1, vec![SymbolExpr::x(1, 0), SymbolExpr::gaussian(1)], 1.0, 1.0, 1.0).unwrap();
        let grid = class_grid(2, 200, 64.0, 2);
        let r = equivalence_check(&s, &s, &gevrey(), &[1, 2], &[1, 2, 3], &grid, 4).unwrap();
        assert!(r.pass);
        assert!(r.rows.iter().all(|row| row.d_n == 0.0));
    }

    #[test]
    fn swapping_arguments_keeps_constants() {
        let a = FormalSum::from_symbol(SymbolExpr::gaussian(1), 0.0, 1.0, 1.0).unwrap();
        let b = FormalSum::zero(1, 0.0, 1.0, 1.0).unwrap();
        let grid = class_grid(2, 200, 64.0, 4);
        let ab = equivalence_check(&a, &b, &gevrey(), &[1, 2], &[1, 2], &grid, 4).unwrap();
        let ba = equivalence_check(&b, &a, &gevrey(), &[1, 2], &[1, 2], &grid, 4).unwrap();
        for (x, y) in ab.rows.iter().zip(&ba.rows) {
            assert_eq!(x.d_n, y.d_n);
        }
    }

    #[test]
    fn rapidly_decreasing_perturbation_is_equivalent() {
        let base = SymbolExpr::term(1, Complex64::new(1.0, 0.0), vec![1], vec![1], 0.0, 0.0).unwrap();
        let a = FormalSum::from_symbol(base.clone(), 2.0, 1.0, 1.0).unwrap();
        let pert = SymbolExpr::term(1, Complex64::new(3.0, 0.0), vec![0], vec![2], 0.02, 0.02).unwrap();
        let b = FormalSum::from_symbol(base.add(&pert), 2.0, 1.0, 1.0).unwrap();
        let grid = class_grid(2, 600, 512.0, 6);
        let r = equivalence_check(&a, &b, &gevrey(), &[1, 2, 4], &[1, 2, 4], &grid, 4).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn polynomial_perturbation_is_not_equivalent() {
        // At m = 0 a polynomial difference cannot gain the N-fold decay.
        let a = FormalSum::from_symbol(SymbolExpr::gaussian(1), 0.0, 1.0, 1.0).unwrap();
        let b = FormalSum::from_symbol(SymbolExpr::gaussian(1).add(&SymbolExpr::xi(1, 0)), 0.0, 1.0, 1.0).unwrap();
        let grid = class_grid(2, 600, 512.0, 6);
        let r = equivalence_check(&a, &b, &gevrey(), &[1], &[3], &grid, 2).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn realized_symbol_equivalent_to_its_sum() {
        let amp = AmplitudeExpr::gaussian(1, 0.05, 0.05, 0.05).unwrap();
        let s = amplitude_reduction(&amp, 0.0, 1.0, 1.0, 6).unwrap();
        let f = build_partition(1, &gevrey(), 1.0, 1.0, &JRule::Default, 6).unwrap();
        let e = realize_symbol(&s, &f).unwrap();
        let grid = class_grid(2, 800, 512.0, 8);
        let r = equivalence_check(&e, &s, &gevrey(), &[1, 2], &[1, 2, 3, 4], &grid, 4).unwrap();
        assert!(r.pass, "{r:#?}");
    }

    #[test]
    fn truncated_sums_flag_large_n() {
        let amp = AmplitudeExpr::gaussian(1, 0.1, 0.1, 0.1).unwrap();
        let s = amplitude_reduction(&amp, 0.0, 1.0, 1.0, 2).unwrap();
        let grid = class_grid(2, 50, 32.0, 1);
        let r = equivalence_check(&s, &s, &gevrey(), &[1], &[2, 9], &grid, 2).unwrap();
        assert!(r.rows[1].status.starts_with("inconclusive"));
    }
}
