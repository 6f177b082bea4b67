//! Weight functions ω, their log-scale profile φ(σ) = ω(e^σ), Young
//! conjugates and the inequality toolbox built on them.
//!
//! Built-in weights are normalized to `ω̃(t) = max(0, ω_raw(t) − ω_raw(1))`
//! so that ω vanishes identically on `[0, 1]` and `φ*(0) = 0` exactly.

mod axioms;
mod conjugate;
mod inequalities;

pub use axioms::{default_grids, verify_weight_axioms, AxiomCheck, AxiomReport};
pub use conjugate::{conjugate_suite, ConjugateSuite, YoungConjugate};
pub use inequalities::{inequality_suite, InequalityResult, SuiteReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::geometric_grid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `t^d`, `0 < d < 1`.
    Gevrey { d: f64 },
    /// `log^s(1 + t)`, `s > 1`.
    LogPower { s: f64 },
    /// `t^d log^s(e + t)`, `0 < d < 1`, `s ≠ 0`.
    GevreyLog { d: f64, s: f64 },
    /// `t^d` for any `d > 0`; `d ≥ 1` gives quasianalytic test weights.
    Power { d: f64 },
    /// Samples `(t_i, ω_i)`, interpolated linearly in `log t`.
    Tabulated { t: Vec<f64>, omega: Vec<f64> },
}

/// Piecewise-linear φ on knots `σ_0 = 0 < σ_1 < ...`; `+∞` beyond the last knot.
#[derive(Debug, Clone)]
struct Table {
    sigma: Vec<f64>,
    phi: Vec<f64>,
    base: f64,
}

impl Table {
    fn build(t: &[f64], omega: &[f64]) -> Result<Self> {
        if t.len() != omega.len() || t.len() < 2 {
            return Err(Error::Config("tabulated weight needs matching t/omega lists of length ≥ 2".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) || t[0] <= 0.0 {
            return Err(Error::Config("tabulated t must be positive and strictly increasing".into()));
        }
        if omega.windows(2).any(|w| w[1] < w[0]) || omega.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("tabulated omega must be finite and nondecreasing".into()));
        }
        if t[0] > 1.0 || *t.last().unwrap() <= 1.0 {
            return Err(Error::Config("tabulated t must bracket t = 1".into()));
        }
        let s: Vec<f64> = t.iter().map(|v| v.ln()).collect();
        let k = s.iter().position(|v| *v > 0.0).unwrap();
        let base = if k == 0 {
            omega[0]
        } else {
            let (s0, s1) = (s[k - 1], s[k]);
            omega[k - 1] + (omega[k] - omega[k - 1]) * (0.0 - s0) / (s1 - s0)
        };
        let mut sigma = vec![0.0];
        let mut phi = vec![0.0];
        for i in k..s.len() {
            sigma.push(s[i]);
            phi.push((omega[i] - base).max(0.0));
        }
        let table = Table { sigma, phi, base };
        table.check_convex()?;
        Ok(table)
    }

    fn check_convex(&self) -> Result<()> {
        for i in 1..self.sigma.len() - 1 {
            let (a, b, c) = (self.sigma[i - 1], self.sigma[i], self.sigma[i + 1]);
            let chord = self.phi[i - 1] + (self.phi[i + 1] - self.phi[i - 1]) * (b - a) / (c - a);
            let gap = self.phi[i] - chord;
            if gap > 1e-12 * (1.0 + self.phi[i].abs()) {
                return Err(Error::NonConvex { t: b.exp(), gap });
            }
        }
        Ok(())
    }

    fn phi(&self, sigma: f64) -> f64 {
        if sigma <= 0.0 {
            return 0.0;
        }
        let last = self.sigma.len() - 1;
        if sigma > self.sigma[last] {
            return f64::INFINITY;
        }
        let i = self.sigma.partition_point(|v| *v < sigma).max(1);
        let (s0, s1) = (self.sigma[i - 1], self.sigma[i]);
        self.phi[i - 1] + (self.phi[i] - self.phi[i - 1]) * (sigma - s0) / (s1 - s0)
    }

    fn slope_right(&self, sigma: f64) -> f64 {
        let last = self.sigma.len() - 1;
        if sigma >= self.sigma[last] {
            return f64::INFINITY;
        }
        let i = self.sigma.partition_point(|v| *v <= sigma.max(0.0)).max(1);
        (self.phi[i] - self.phi[i - 1]) / (self.sigma[i] - self.sigma[i - 1])
    }

    fn t_max(&self) -> f64 {
        self.sigma.last().unwrap().exp()
    }
}

#[derive(Debug, Clone)]
pub struct WeightFunction {
    kind: WeightKind,
    l_double: f64,
    l_e: f64,
    normalization_offset: f64,
    table: Option<Table>,
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x + (-x).exp()
    } else {
        x.exp().ln_1p()
    }
}

/// `e^x / (1 + e^x)`.
fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl WeightFunction {
    pub fn new(kind: WeightKind) -> Result<Self> {
        let mut table = None;
        let offset = match &kind {
            WeightKind::Gevrey { d } => {
                if !(*d > 0.0 && *d < 1.0) {
                    return Err(Error::Config(format!("gevrey exponent must lie in (0,1), got {d}")));
                }
                1.0
            }
            WeightKind::Power { d } => {
                if !(*d > 0.0 && d.is_finite()) {
                    return Err(Error::Config(format!("power exponent must be positive, got {d}")));
                }
                1.0
            }
            WeightKind::LogPower { s } => {
                if !(*s > 1.0 && s.is_finite()) {
                    return Err(Error::Config(format!("log_power exponent must exceed 1, got {s}")));
                }
                std::f64::consts::LN_2.powf(*s)
            }
            WeightKind::GevreyLog { d, s } => {
                if !(*d > 0.0 && *d < 1.0) || *s == 0.0 || !s.is_finite() {
                    return Err(Error::Config(format!("gevrey_log needs 0<d<1 and s≠0, got d={d}, s={s}")));
                }
                (1.0 + std::f64::consts::E).ln().powf(*s)
            }
            WeightKind::Tabulated { t, omega } => {
                let tab = Table::build(t, omega)?;
                let off = tab.base;
                table = Some(tab);
                off
            }
        };
        let mut w = WeightFunction { kind, l_double: 1.0, l_e: 1.0, normalization_offset: offset, table };
        let (ld, le) = w.growth_constants();
        w.l_double = ld;
        w.l_e = le;
        Ok(w)
    }

    pub fn gevrey(d: f64) -> Result<Self> {
        Self::new(WeightKind::Gevrey { d })
    }

    pub fn log_power(s: f64) -> Result<Self> {
        Self::new(WeightKind::LogPower { s })
    }

    pub fn gevrey_log(d: f64, s: f64) -> Result<Self> {
        Self::new(WeightKind::GevreyLog { d, s })
    }

    pub fn power(d: f64) -> Result<Self> {
        Self::new(WeightKind::Power { d })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(serde_json::from_str(text)?)
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            WeightKind::Gevrey { d } => format!("gevrey(d={d})"),
            WeightKind::LogPower { s } => format!("log_power(s={s})"),
            WeightKind::GevreyLog { d, s } => format!("gevrey_log(d={d},s={s})"),
            WeightKind::Power { d } => format!("power(d={d})"),
            WeightKind::Tabulated { t, .. } => format!("tabulated({} knots)", t.len()),
        }
    }

    /// Doubling constant: `ω(2t) ≤ L(ω(t) + 1)`.
    pub fn l_double(&self) -> f64 {
        self.l_double
    }

    /// Constant with `ω(et) ≤ L(ω(t) + 1)`.
    pub fn l_e(&self) -> f64 {
        self.l_e
    }

    pub fn normalization_offset(&self) -> f64 {
        self.normalization_offset
    }

    /// Largest t at which ω is defined (finite only for tabulated weights).
    pub fn t_max(&self) -> f64 {
        self.table.as_ref().map_or(f64::INFINITY, Table::t_max)
    }

    /// Power-type exponent `a` with `ω(t) = o(t^a)`, when one is known.
    pub fn growth_exponent(&self) -> Option<f64> {
        match &self.kind {
            WeightKind::Gevrey { d } | WeightKind::GevreyLog { d, .. } => Some(*d),
            WeightKind::LogPower { .. } | WeightKind::Tabulated { .. } => Some(0.0),
            WeightKind::Power { d } => Some(*d),
        }
    }

    /// Normalized ω(t) with domain checks.
    pub fn omega(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!("omega needs finite t ≥ 0, got {t}")));
        }
        if t > self.t_max() {
            return Err(Error::Domain(format!("t = {t} lies beyond the tabulated range")));
        }
        Ok(self.w(t))
    }

    /// Normalized ω(t) for `t ≥ 0` without checks.
    pub fn w(&self, t: f64) -> f64 {
        if t <= 1.0 {
            0.0
        } else {
            self.phi(t.ln())
        }
    }

    /// ω(|v|₂).
    pub fn radial(&self, v: &[f64]) -> f64 {
        self.w(v.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    /// φ(σ) = ω(e^σ), zero for σ ≤ 0.
    pub fn phi(&self, sigma: f64) -> f64 {
        if sigma <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            WeightKind::Gevrey { d } | WeightKind::Power { d } => (d * sigma).exp_m1(),
            WeightKind::LogPower { s } => softplus(sigma).powf(*s) - self.normalization_offset,
            WeightKind::GevreyLog { d, s } => {
                let l = (std::f64::consts::E + sigma.exp()).ln();
                ((d * sigma).exp() * l.powf(*s) - self.normalization_offset).max(0.0)
            }
            WeightKind::Tabulated { .. } => self.table.as_ref().unwrap().phi(sigma),
        }
    }

    /// Right derivative φ'(σ+) for σ ≥ 0.
    pub fn phi_prime(&self, sigma: f64) -> f64 {
        let sigma = sigma.max(0.0);
        match &self.kind {
            WeightKind::Gevrey { d } | WeightKind::Power { d } => d * (d * sigma).exp(),
            WeightKind::LogPower { s } => s * softplus(sigma).powf(s - 1.0) * logistic(sigma),
            WeightKind::GevreyLog { d, s } => {
                let e = std::f64::consts::E;
                let l = (e + sigma.exp()).ln();
                let g = (d * sigma).exp();
                // d/dσ ln(e + e^σ) = e^σ / (e + e^σ) = logistic(σ - 1)
                d * g * l.powf(*s) + g * s * l.powf(s - 1.0) * logistic(sigma - 1.0)
            }
            WeightKind::Tabulated { .. } => self.table.as_ref().unwrap().slope_right(sigma),
        }
    }

    /// Young conjugate φ*(t) = sup_{s≥0} (st − φ(s)).
    pub fn phi_star(&self, t: f64) -> f64 {
        conjugate::phi_star(self, t)
    }

    /// `sup ω(2t)/(ω(t)+1)` and `sup ω(et)/(ω(t)+1)`, closed form where known.
    fn growth_constants(&self) -> (f64, f64) {
        match &self.kind {
            WeightKind::Gevrey { d } | WeightKind::Power { d } => (2f64.powf(*d), std::f64::consts::E.powf(*d)),
            _ => (self.sup_ratio(2.0), self.sup_ratio(std::f64::consts::E)),
        }
    }

    /// Numerical `sup_t ω(ct)/(ω(t)+1)` over a geometric grid, inflated by a
    /// relative safety margin since a larger constant is always admissible.
    pub fn sup_ratio(&self, c: f64) -> f64 {
        let hi = if self.t_max().is_finite() { self.t_max() / c } else { 1e30 };
        let sup = geometric_grid(1e-3, hi, 6000)
            .into_iter()
            .map(|t| self.w(c * t) / (self.w(t) + 1.0))
            .fold(1.0, f64::max);
        sup * (1.0 + 1e-6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normalized_values() {
        let g = WeightFunction::gevrey(0.5).unwrap();
        assert_eq!(g.omega(1.0).unwrap(), 0.0);
        assert_eq!(g.omega(0.3).unwrap(), 0.0);
        assert_relative_eq!(g.omega(4.0).unwrap(), 1.0, epsilon = 1e-15);
        let l = WeightFunction::log_power(2.0).unwrap();
        let t = std::f64::consts::E.powi(2) - 1.0;
        assert_relative_eq!(l.omega(t).unwrap(), 4.0 - std::f64::consts::LN_2.powi(2), epsilon = 1e-13);
        assert!(g.omega(-1.0).is_err());
        assert!(g.omega(f64::NAN).is_err());
    }

    #[test]
    fn radial_extension() {
        let g = WeightFunction::gevrey(0.5).unwrap();
        assert_eq!(g.radial(&[0.0, 0.0]), 0.0);
        assert_relative_eq!(g.radial(&[3.0, 4.0]), g.omega(5.0).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WeightFunction::gevrey(1.0).is_err());
        assert!(WeightFunction::log_power(1.0).is_err());
        assert!(WeightFunction::from_json(r#"{"kind":"gevrey","d":0.5}"#).is_ok());
    }

    #[test]
    fn analytic_derivative_matches_differences() {
        for w in [
            WeightFunction::gevrey(0.5).unwrap(),
            WeightFunction::log_power(2.0).unwrap(),
            WeightFunction::gevrey_log(0.5, 1.0).unwrap(),
        ] {
            for &s in &[0.5, 2.0, 7.0, 20.0] {
                let h = 1e-6 * (1.0 + s);
                let fd = (w.phi(s + h) - w.phi(s - h)) / (2.0 * h);
                assert_relative_eq!(w.phi_prime(s), fd, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn tabulated_interpolates_and_rejects_nonconvex() {
        let t: Vec<f64> = (0..12).map(|k| 2f64.powi(k)).collect();
        let omega: Vec<f64> = t.iter().map(|v| v.sqrt() - 1.0).collect();
        let w = WeightFunction::new(WeightKind::Tabulated { t: t.clone(), omega }).unwrap();
        assert_eq!(w.omega(1.0).unwrap(), 0.0);
        assert_relative_eq!(w.omega(16.0).unwrap(), 3.0, epsilon = 1e-12);
        let bad: Vec<f64> = t.iter().map(|v| v.ln().sqrt()).collect();
        match WeightFunction::new(WeightKind::Tabulated { t, omega: bad }) {
            Err(Error::NonConvex { gap, .. }) => assert!(gap > 0.0),
            other => panic!("expected NonConvex, got {other:?}"),
        }
    }

    #[test]
    fn doubling_constant_bounds_grid() {
        for w in [WeightFunction::log_power(2.0).unwrap(), WeightFunction::gevrey_log(0.5, 1.0).unwrap()] {
            for t in geometric_grid(0.01, 1e12, 500) {
                assert!(w.w(2.0 * t) <= w.l_double() * (w.w(t) + 1.0));
                assert!(w.w(std::f64::consts::E * t) <= w.l_e() * (w.w(t) + 1.0));
            }
        }
    }
}
