use rand::Rng;
use serde::Serialize;

use super::{WeightFunction, WeightKind};
use crate::sampling::{log_uniform, rng};

/// Closed form for `φ(s) = e^{ds} − 1`: zero for `t ≤ d`, otherwise
/// `(t/d) ln(t/d) − t/d + 1` attained at `s = ln(t/d)/d`.
fn exponential_closed_form(d: f64, t: f64) -> f64 {
    if t <= d {
        0.0
    } else {
        let r = t / d;
        r * r.ln() - r + 1.0
    }
}

/// Maximizer of `s ↦ st − φ(s)` on `s ≥ 0`: the root of `φ'(s) = t`,
/// bracketed by doubling and refined by bisection.
fn maximizer(w: &WeightFunction, t: f64) -> f64 {
    if w.phi_prime(0.0) >= t {
        return 0.0;
    }
    let mut hi = 1.0;
    while w.phi_prime(hi) < t {
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if w.phi_prime(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn numeric(w: &WeightFunction, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if let Some(tab) = &w.table {
        // Piecewise-linear φ: the supremum sits on a knot.
        return tab
            .sigma
            .iter()
            .zip(&tab.phi)
            .map(|(s, p)| s * t - p)
            .fold(0.0, f64::max);
    }
    let s = maximizer(w, t);
    if !s.is_finite() {
        return f64::INFINITY;
    }
    (s * t - w.phi(s)).max(0.0)
}

pub(super) fn phi_star(w: &WeightFunction, t: f64) -> f64 {
    match w.kind {
        WeightKind::Gevrey { d } | WeightKind::Power { d } => exponential_closed_form(d, t.max(0.0)),
        _ => numeric(w, t),
    }
}

/// Evaluator for `φ*(t) = sup_{s≥0} (st − φ(s))` of a fixed weight.
#[derive(Debug, Clone)]
pub struct YoungConjugate {
    weight: WeightFunction,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugateRow {
    pub t: f64,
    pub value: f64,
    pub maximizer: f64,
}

impl YoungConjugate {
    pub fn new(weight: &WeightFunction) -> Self {
        YoungConjugate { weight: weight.clone() }
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn has_closed_form(&self) -> bool {
        matches!(self.weight.kind, WeightKind::Gevrey { .. } | WeightKind::Power { .. })
    }

    pub fn eval(&self, t: f64) -> crate::Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(crate::Error::Domain(format!("conjugate needs finite t ≥ 0, got {t}")));
        }
        Ok(phi_star(&self.weight, t))
    }

    /// The closed-form value when one is available.
    pub fn closed_form(&self, t: f64) -> Option<f64> {
        match self.weight.kind {
            WeightKind::Gevrey { d } | WeightKind::Power { d } => Some(exponential_closed_form(d, t)),
            _ => None,
        }
    }

    /// The maximization path, regardless of any closed form.
    pub fn numeric(&self, t: f64) -> f64 {
        numeric(&self.weight, t)
    }

    /// The inner maximization cap: smallest s with `φ'(s) ≥ t`.
    pub fn s_max(&self, t: f64) -> f64 {
        maximizer(&self.weight, t)
    }

    pub fn table(&self, ts: &[f64]) -> Vec<ConjugateRow> {
        ts.iter()
            .map(|&t| ConjugateRow { t, value: phi_star(&self.weight, t), maximizer: maximizer(&self.weight, t) })
            .collect()
    }

    /// `φ**(s) = sup_{t≥0} (st − φ*(t))` by golden-section search over t.
    pub fn biconjugate(&self, s: f64) -> f64 {
        let f = |t: f64| s * t - phi_star(&self.weight, t);
        let mut hi = 1.0;
        while f(2.0 * hi) > f(hi) && hi < 1e12 {
            hi *= 2.0;
        }
        let (mut a, mut b) = (0.0, 2.0 * hi);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..200 {
            if (b - a) <= 1e-14 * (1.0 + b.abs()) {
                break;
            }
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        f(0.0).max(fc).max(fd).max(f(0.5 * (a + b)))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugateSuite {
    pub weight: String,
    pub samples: usize,
    pub value_at_zero: f64,
    /// Smallest `λφ*(t₁) + (1−λ)φ*(t₂) − φ*(λt₁ + (1−λ)t₂)`, relative to `max(1, rhs)`.
    pub convexity_slack: f64,
    /// Smallest `φ*(t₂)/t₂ − φ*(t₁)/t₁` for `t₁ < t₂`, relative to `max(1, φ*(t₂)/t₂)`.
    pub ratio_slack: f64,
    /// Largest `|φ**(s) − φ(s)|` over `s ∈ [0, 10]`.
    pub biconjugate_gap: f64,
    /// Largest relative gap between the closed form and the maximization path.
    pub closed_form_gap: Option<f64>,
    pub pass: bool,
}

/// Zero value, convexity, monotone `φ*(t)/t`, biconjugacy and, for Gevrey-type
/// weights, the closed form against the numerical maximizer.
pub fn conjugate_suite(w: &WeightFunction, samples: usize, seed: u64) -> ConjugateSuite {
    let y = YoungConjugate::new(w);
    let mut r = rng(seed);
    let (mut convexity_slack, mut ratio_slack) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..samples {
        let a = log_uniform(&mut r, 1e-3, 1e3);
        let b = log_uniform(&mut r, 1e-3, 1e3);
        let (t1, t2) = if a <= b { (a, b) } else { (b, a) };
        let lam: f64 = r.gen();
        let rhs = lam * w.phi_star(t1) + (1.0 - lam) * w.phi_star(t2);
        let lhs = w.phi_star(lam * t1 + (1.0 - lam) * t2);
        convexity_slack = convexity_slack.min((rhs - lhs) / rhs.abs().max(1.0));
        let (q1, q2) = (w.phi_star(t1) / t1, w.phi_star(t2) / t2);
        ratio_slack = ratio_slack.min((q2 - q1) / q2.abs().max(1.0));
    }
    let biconjugate_gap = (0..=200)
        .map(|i| {
            let s = 0.05 * i as f64;
            (y.biconjugate(s) - w.phi(s)).abs()
        })
        .fold(0.0, f64::max);
    let closed_form_gap = y.has_closed_form().then(|| {
        (0..samples)
            .map(|_| {
                let t = log_uniform(&mut r, 1e-3, 1e3);
                let exact = y.closed_form(t).unwrap();
                (exact - y.numeric(t)).abs() / exact.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    });
    let value_at_zero = w.phi_star(0.0);
    let pass = value_at_zero == 0.0
        && convexity_slack >= -1e-9
        && ratio_slack >= -1e-9
        && biconjugate_gap < 1e-6
        && closed_form_gap.is_none_or(|g| g <= 1e-8);
    ConjugateSuite {
        weight: w.name(),
        samples,
        value_at_zero,
        convexity_slack,
        ratio_slack,
        biconjugate_gap,
        closed_form_gap,
        pass,
    }
}
