use serde::Serialize;

use super::TestFunction;
use crate::error::{Error, Result};
use crate::jet::JetSpace;
use crate::weights::WeightFunction;

/// Uniform tensor grid on `[-a, a]^d` with `per_axis` points per axis.
pub fn box_points(dim: usize, half_width: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..per_axis)
        .map(|i| if per_axis == 1 { 0.0 } else { -half_width + 2.0 * half_width * i as f64 / (per_axis - 1) as f64 })
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

struct Sweep {
    /// `ln` of the running sup after including all orders `≤ k`.
    per_order: Vec<f64>,
    witness_alpha: Vec<usize>,
    witness_x: Vec<f64>,
}

/// `sup |∂^α f(x)| e^{-λφ*(|α|/λ)} e^{μω(x)}` in the log domain, split by order.
fn sweep(f: &TestFunction, lambda: f64, mu: f64, w: &WeightFunction, max_order: usize, grid: &[Vec<f64>]) -> Sweep {
    let space = JetSpace::new(f.dim(), max_order);
    let penalty: Vec<f64> = (0..=max_order).map(|k| lambda * w.phi_star(k as f64 / lambda)).collect();
    let mut best = vec![f64::NEG_INFINITY; max_order + 1];
    let mut witness_alpha = vec![0; f.dim()];
    let mut witness_x = vec![0.0; f.dim()];
    let mut overall = f64::NEG_INFINITY;
    for x in grid {
        let jet = f.expr().jet(&space, x);
        let gain = mu * w.radial(x);
        for (alpha, mag) in jet.derivative_magnitudes() {
            if mag == 0.0 {
                continue;
            }
            let k: usize = alpha.iter().sum();
            let v = mag.ln() - penalty[k] + gain;
            if v > best[k] {
                best[k] = v;
            }
            if v > overall {
                overall = v;
                witness_alpha = alpha.to_vec();
                witness_x = x.clone();
            }
        }
    }
    let mut run = f64::NEG_INFINITY;
    let per_order = best
        .into_iter()
        .map(|b| {
            run = run.max(b);
            run
        })
        .collect();
    Sweep { per_order, witness_alpha, witness_x }
}

/// The last order moved the running sup by less than `1e-6` relative.
fn stable(per_order: &[f64]) -> bool {
    match per_order {
        [.., a, b] if b.is_finite() => (b - a).exp_m1().abs() < 1e-6,
        _ => true,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeminormReport {
    pub lambda: f64,
    pub value: f64,
    /// Running sup including all orders `≤ k`.
    pub per_order: Vec<f64>,
    pub stable: bool,
    pub witness_alpha: Vec<usize>,
    pub witness_x: Vec<f64>,
}

/// `|f|_λ = sup_{|α|≤max_order, x∈grid} |D^α f(x)| e^{-λφ*(|α|/λ)} e^{λω(x)}`.
pub fn seminorm_lambda(
    f: &TestFunction,
    lambda: f64,
    w: &WeightFunction,
    max_order: usize,
    grid: &[Vec<f64>],
) -> Result<SeminormReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    let s = sweep(f, lambda, lambda, w, max_order, grid);
    let per_order: Vec<f64> = s.per_order.iter().map(|v| v.exp()).collect();
    Ok(SeminormReport {
        lambda,
        value: *per_order.last().unwrap_or(&0.0),
        stable: stable(&s.per_order),
        per_order,
        witness_alpha: s.witness_alpha,
        witness_x: s.witness_x,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipRow {
    pub lambda: f64,
    pub mu: f64,
    /// Minimal `D_{λ,μ}` with `|D^α f(x)| ≤ D e^{λφ*(|α|/λ)} e^{-μω(x)}` on the sample.
    pub constant: f64,
    pub stable: bool,
    pub witness_alpha: Vec<usize>,
    pub witness_x: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub weight: String,
    pub max_order: usize,
    pub sample_points: usize,
    pub rows: Vec<MembershipRow>,
    pub certified: bool,
    pub verdict: String,
}

/// Sampled check of the derivative bounds characterizing membership. A finite
/// constant for every `(λ, μ)` certifies membership up to sampling; nothing
/// here can refute it.
pub fn check_s_omega_membership(
    f: &TestFunction,
    w: &WeightFunction,
    lambdas: &[f64],
    mus: &[f64],
    max_order: usize,
    grid: &[Vec<f64>],
) -> Result<MembershipReport> {
    if lambdas.is_empty() || mus.is_empty() || grid.is_empty() {
        return Err(Error::Config("membership check needs nonempty λ, μ and grid lists".into()));
    }
    if let Some(bad) = lambdas.iter().chain(mus).find(|v| !(**v > 0.0)) {
        return Err(Error::Domain(format!("λ and μ must be positive, got {bad}")));
    }
    let mut rows = Vec::new();
    for &lambda in lambdas {
        for &mu in mus {
            let s = sweep(f, lambda, mu, w, max_order, grid);
            let ln_d = *s.per_order.last().unwrap();
            rows.push(MembershipRow {
                lambda,
                mu,
                constant: ln_d.exp(),
                stable: stable(&s.per_order),
                witness_alpha: s.witness_alpha,
                witness_x: s.witness_x,
            });
        }
    }
    let certified = rows.iter().all(|r| r.constant.is_finite());
    let verdict = if certified { "member (up to sampling)" } else { "not certified" }.to_string();
    Ok(MembershipReport { weight: w.name(), max_order, sample_points: grid.len(), rows, certified, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn zero_function_has_zero_seminorm() {
        let w = WeightFunction::gevrey(0.5).unwrap();
        let r = seminorm_lambda(&TestFunction::zero(1), 1.0, &w, 4, &box_points(1, 5.0, 11)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn order_zero_matches_grid_maximization() {
        let w = WeightFunction::gevrey(0.5).unwrap();
        let f = TestFunction::gaussian(1, 0.5).unwrap();
        let grid = box_points(1, 12.0, 2401);
        let oracle = grid.iter().map(|x| (-0.5 * x[0] * x[0] + w.w(x[0].abs())).exp()).fold(0.0, f64::max);
        let r = seminorm_lambda(&f, 1.0, &w, 0, &grid).unwrap();
        assert!((r.value - oracle).abs() < 1e-14 * oracle);
    }

    #[test]
    fn nonpositive_lambda_rejected() {
        let w = WeightFunction::gevrey(0.5).unwrap();
        let f = TestFunction::gaussian(1, 0.5).unwrap();
        assert!(matches!(seminorm_lambda(&f, 0.0, &w, 2, &[vec![0.0]]), Err(Error::Domain(_))));
    }

    #[test]
    fn hermite_constant_grows_with_mu() {
        let w = WeightFunction::gevrey(0.5).unwrap();
        let f = TestFunction::term(1, Complex64::new(1.0, 0.0), vec![3], 1.0).unwrap();
        let r = check_s_omega_membership(&f, &w, &[1.0], &[0.5, 1.0, 2.0, 4.0], 12, &box_points(1, 12.0, 481)).unwrap();
        assert!(r.certified);
        for pair in r.rows.windows(2) {
            assert!(pair[1].constant > pair[0].constant);
        }
    }
}
