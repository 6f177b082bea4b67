use serde::Serialize;

use super::WeightFunction;
use crate::sampling::geometric_grid;

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub pass: bool,
    /// Worst observed margin; positive values mean the axiom held.
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub weight: String,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

/// Default grids: `t` geometric over `[1e-3, 1e30]`, `s` uniform over `[0, 60]`.
pub fn default_grids() -> (Vec<f64>, Vec<f64>) {
    let t = geometric_grid(1e-3, 1e30, 4000);
    let s = (0..=6000).map(|i| i as f64 * 0.01).collect();
    (t, s)
}

/// `∫_1^T ω(t)/t² dt = ∫_0^{ln T} φ(u) e^{-u} du`, composite Simpson in `u`.
fn beta_integral(w: &WeightFunction, big_t: f64) -> f64 {
    let b = big_t.ln();
    let n = 4000;
    let h = b / n as f64;
    let f = |u: f64| w.phi(u) * (-u).exp();
    let mut acc = f(0.0) + f(b);
    for i in 1..n {
        let u = i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(u);
    }
    acc * h / 3.0
}

pub fn verify_weight_axioms(w: &WeightFunction, t_grid: &[f64], s_grid: &[f64]) -> AxiomReport {
    let t_max = w.t_max();
    let ts: Vec<f64> = t_grid.iter().copied().filter(|t| *t > 0.0 && 2.0 * t <= t_max).collect();

    // (α): the doubling ratio stays bounded; its supremum must settle as the
    // grid is extended from T^{1/2} to T.
    let ratio = |t: f64| w.w(2.0 * t) / (w.w(t) + 1.0);
    let top = ts.iter().copied().fold(1.0, f64::max);
    let half = top.sqrt();
    let sup_full = ts.iter().map(|&t| ratio(t)).fold(0.0, f64::max);
    let sup_half = ts.iter().filter(|t| **t <= half).map(|&t| ratio(t)).fold(0.0, f64::max);
    let drift = (sup_full - sup_half) / sup_half.max(1e-300);
    let alpha = AxiomCheck {
        axiom: "alpha",
        pass: sup_full.is_finite() && drift < 1e-2,
        margin: 1e-2 - drift,
        detail: format!("sup ω(2t)/(ω(t)+1) = {sup_full:.6} (grid to {half:.3e}: {sup_half:.6})"),
    };

    // (β): partial integrals up to T = 10^k must form a Cauchy sequence;
    // successive increments have to contract geometrically.
    let big: Vec<f64> = (1..=6).map(|k| 10f64.powi(k)).filter(|t| *t <= t_max).collect();
    let vals: Vec<f64> = big.iter().map(|&t| beta_integral(w, t)).collect();
    let incs: Vec<f64> = vals.windows(2).map(|v| v[1] - v[0]).collect();
    let beta = if incs.len() >= 2 {
        let r = incs[incs.len() - 1] / incs[incs.len() - 2].max(1e-300);
        AxiomCheck {
            axiom: "beta",
            pass: r < 0.9,
            margin: 0.9 - r,
            detail: format!(
                "∫₁^T ω/t² at T=10..1e6: {:?}; last increment ratio {r:.4}",
                vals.iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>()
            ),
        }
    } else {
        AxiomCheck { axiom: "beta", pass: false, margin: f64::NAN, detail: "range too short".into() }
    };

    // (γ): log t / ω(t) strictly decreasing along the tail, and at least
    // halved across it.
    let tail: Vec<f64> = (2..=30).map(|k| 10f64.powi(k)).filter(|t| *t <= t_max).collect();
    let q: Vec<f64> = tail.iter().map(|&t| t.ln() / w.w(t)).collect();
    let worst_step = q.windows(2).map(|v| v[0] - v[1]).fold(f64::INFINITY, f64::min);
    let shrink = q.last().copied().unwrap_or(f64::NAN) / q.first().copied().unwrap_or(f64::NAN);
    let gamma = AxiomCheck {
        axiom: "gamma",
        pass: q.len() >= 3 && worst_step > 0.0 && shrink < 0.5,
        margin: worst_step.min(0.5 - shrink),
        detail: format!(
            "log t/ω(t): {:.4e} at t={:.0e} → {:.4e} at t={:.0e}",
            q.first().copied().unwrap_or(f64::NAN),
            tail.first().copied().unwrap_or(f64::NAN),
            q.last().copied().unwrap_or(f64::NAN),
            tail.last().copied().unwrap_or(f64::NAN)
        ),
    };

    // (δ): nonnegative second differences of φ.
    let ss: Vec<f64> = s_grid.iter().copied().filter(|s| s.exp() <= t_max).collect();
    let mut worst = f64::INFINITY;
    let mut at = f64::NAN;
    for v in ss.windows(3) {
        let (a, b, c) = (w.phi(v[0]), w.phi(v[1]), w.phi(v[2]));
        let (h1, h2) = (v[1] - v[0], v[2] - v[1]);
        let second = (c - b) / h2 - (b - a) / h1;
        let scaled = second + 1e-9 * (1.0 + a.abs() + c.abs());
        if scaled < worst {
            worst = scaled;
            at = v[1];
        }
    }
    let delta = AxiomCheck {
        axiom: "delta",
        pass: worst >= 0.0,
        margin: worst,
        detail: format!("worst second difference of φ at s = {at:.3}"),
    };

    AxiomReport { weight: w.name(), checks: vec![alpha, beta, gamma, delta] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(w: &WeightFunction) -> AxiomReport {
        let (t, s) = default_grids();
        verify_weight_axioms(w, &t, &s)
    }

    #[test]
    fn builtin_weights_pass() {
        for w in [
            WeightFunction::gevrey(0.5).unwrap(),
            WeightFunction::log_power(2.0).unwrap(),
            WeightFunction::gevrey_log(0.5, 1.0).unwrap(),
        ] {
            let r = report(&w);
            assert!(r.pass(), "{r:#?}");
        }
    }

    #[test]
    fn linear_weight_fails_beta_only() {
        let r = report(&WeightFunction::power(1.0).unwrap());
        assert!(!r.get("beta").unwrap().pass);
        assert!(r.get("alpha").unwrap().pass);
        assert!(r.get("gamma").unwrap().pass);
        assert!(r.get("delta").unwrap().pass);
    }

    #[test]
    fn beta_integral_closed_form() {
        // ∫_1^T (√t − 1)/t² dt = 2 − 2/√T − 1 + 1/T
        let w = WeightFunction::gevrey(0.5).unwrap();
        let t: f64 = 1e4;
        let exact = 1.0 - 2.0 / t.sqrt() + 1.0 / t;
        assert!((beta_integral(&w, t) - exact).abs() < 1e-9);
    }
}
