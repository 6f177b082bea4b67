//! Randomized and boundary-value checks of the weight-function inequality
//! toolbox. Every check compares logarithms of both sides; the reported
//! slack is `log(rhs) − log(lhs)` and must be nonnegative up to a relative
//! rounding allowance.

use rand::Rng;
use serde::Serialize;

use super::{WeightFunction, WeightKind};
use crate::multi_index::ln_gamma1;
use crate::sampling::{direction, geometric_grid, log_uniform, rng};

const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct InequalityResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub samples: usize,
    pub worst_slack: f64,
    pub pass: bool,
    /// For inequalities with an existential constant: the smallest constant
    /// compatible with every sample.
    pub minimal_constant: Option<f64>,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub weight: String,
    pub l_double: f64,
    pub l_e: f64,
    pub results: Vec<InequalityResult>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&InequalityResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

struct Tracker {
    name: &'static str,
    statement: &'static str,
    samples: usize,
    worst: f64,
    ok: bool,
    witness: String,
    constant: Option<f64>,
}

impl Tracker {
    fn new(name: &'static str, statement: &'static str) -> Self {
        Tracker { name, statement, samples: 0, worst: f64::INFINITY, ok: true, witness: String::new(), constant: None }
    }

    /// Records `lhs ≤ rhs` (both already in log scale or both plain).
    fn record(&mut self, lhs: f64, rhs: f64, witness: impl FnOnce() -> String) {
        self.samples += 1;
        let slack = rhs - lhs;
        let allowed = -REL_TOL * (1.0 + lhs.abs() + rhs.abs());
        if !(slack >= allowed) {
            self.ok = false;
        }
        let normalized = slack - allowed;
        if normalized < self.worst || slack.is_nan() {
            self.worst = slack;
            self.witness = witness();
        }
    }

    fn finish(self) -> InequalityResult {
        InequalityResult {
            name: self.name,
            statement: self.statement,
            samples: self.samples,
            worst_slack: self.worst,
            pass: self.ok && self.samples > 0,
            minimal_constant: self.constant,
            witness: self.witness,
        }
    }
}

fn bracket(v: &[f64]) -> f64 {
    (1.0 + v.iter().map(|x| x * x).sum::<f64>()).sqrt()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn random_vector<R: Rng>(r: &mut R, d: usize, max_radius: f64) -> Vec<f64> {
    let rad = if r.gen_bool(0.1) { r.gen_range(0.0..1.0) } else { log_uniform(r, 1e-3, max_radius) };
    direction(r, d).into_iter().map(|x| x * rad).collect()
}

/// Auxiliary weight σ with `ω(t^{1/a}) = o(σ(t))`, and the exponent `a`.
pub fn comparison_weight(w: &WeightFunction) -> Option<(WeightFunction, f64)> {
    match *w.kind() {
        WeightKind::Gevrey { d } | WeightKind::GevreyLog { d, .. } => {
            let a = 0.75f64.max(d + (1.0 - d) / 2.0);
            let ds = (1.0 + d / a) / 2.0;
            Some((WeightFunction::gevrey(ds).ok()?, a))
        }
        WeightKind::LogPower { s } => Some((WeightFunction::log_power(s + 0.5).ok()?, 0.5)),
        _ => None,
    }
}

/// Exponent `a` with `ω(t) = o(t^a)` used for the factorial bound.
pub fn factorial_exponent(w: &WeightFunction) -> Option<f64> {
    match *w.kind() {
        WeightKind::Gevrey { d } | WeightKind::GevreyLog { d, .. } => Some((1.0 + d) / 2.0),
        WeightKind::LogPower { .. } => Some(0.5),
        WeightKind::Power { d } if d < 1.0 => Some((1.0 + d) / 2.0),
        _ => None,
    }
}

/// `sup_n (n ln B + ln n! − aλφ*(n/λ))` with its maximizer. Integers up to
/// 4096 are scanned exactly, then a geometric grid reaching `n_end` with a
/// golden-section refinement of the continuous extension around the best
/// grid point (the continuous supremum dominates the integer one).
pub fn factorial_bound_constant(w: &WeightFunction, a: f64, b: f64, lambda: f64, n_end: f64) -> (f64, f64) {
    scan_sup(&|n: f64| n * b.ln() + ln_gamma1(n) - a * lambda * w.phi_star(n / lambda), n_end)
}

fn scan_sup(f: &impl Fn(f64) -> f64, n_end: f64) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for n in 0..=4096 {
        let v = f(n as f64);
        if v > best.0 {
            best = (v, n as f64);
        }
    }
    let grid = geometric_grid(4096.0, n_end.max(8192.0), 2000);
    let vals: Vec<f64> = grid.iter().map(|&n| f(n)).collect();
    let i = (0..grid.len()).fold(0, |b, i| if vals[i] > vals[b] { i } else { b });
    if vals[i] > best.0 {
        best = (vals[i], grid[i]);
    }
    let refined = golden_max(f, grid[i.saturating_sub(1)], grid[(i + 1).min(grid.len() - 1)]);
    if refined.0 > best.0 {
        best = refined;
    }
    best
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
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
    if fc > fd { (fc, c) } else { (fd, d) }
}

/// `min_{j ∈ N₀} (−j ln t + kφ*(j/k))`. The objective is convex in j and its
/// continuous minimizer is `j = kφ'(ln t)`, so the neighbouring integers
/// (and j = 0) contain the integer minimizer.
fn inf_over_j(w: &WeightFunction, k: f64, lt: f64) -> f64 {
    let f = |j: f64| -j * lt + k * w.phi_star(j / k);
    let jc = k * w.phi_prime(lt);
    let mut best = f(0.0);
    let base = jc.floor();
    for off in -2..=2 {
        let j = base + off as f64;
        if j >= 0.0 {
            best = best.min(f(j));
        }
    }
    best
}

pub fn inequality_suite(w: &WeightFunction, budget: usize, seed: u64) -> SuiteReport {
    let mut r = rng(seed);
    let l = w.l_double();
    let le = w.l_e();
    let mut results = Vec::new();

    // t^k ≤ e^{nφ*(k/n)} e^{nω(t)}
    let mut tr = Tracker::new("power_vs_conjugate", "t^k <= exp(n phi*(k/n)) exp(n omega(t)), t >= 1");
    for i in 0..budget {
        let (n, k, t) = if i < 16 {
            ((i % 4 + 1) as f64, (i / 4 + 1) as f64, if i % 2 == 0 { 1.0 } else { 2.0 })
        } else {
            (r.gen_range(1..=50) as f64, r.gen_range(1..=60) as f64, log_uniform(&mut r, 1.0, 1e12))
        };
        tr.record(k * t.ln(), n * w.phi_star(k / n) + n * w.w(t), || format!("n={n}, k={k}, t={t:e}"));
    }
    results.push(tr.finish());

    // inf_j t^{-j} e^{kφ*(j/k)} ≤ e^{−kω(t) + log t}
    let mut tr = Tracker::new("inverse_power_infimum", "inf_j t^-j exp(k phi*(j/k)) <= exp(-k omega(t) + log t), t >= 1");
    for i in 0..budget {
        let (k, t) = if i < 8 {
            ((i + 1) as f64, 1.0)
        } else {
            (r.gen_range(1..=50) as f64, log_uniform(&mut r, 1.0, 1e12))
        };
        let lt = t.ln();
        tr.record(inf_over_j(w, k, lt), -k * w.w(t) + lt, || format!("k={k}, t={t:e}"));
    }
    results.push(tr.finish());

    // B^n n! ≤ C e^{aλφ*(n/λ)}
    let mut tr = Tracker::new("factorial_vs_conjugate", "B^n n! <= C exp(a lambda phi*(n/lambda)), omega = o(t^a)");
    if let Some(a) = factorial_exponent(w) {
        let pairs: Vec<(f64, f64)> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .flat_map(|&b| [0.5, 1.0, 2.0].iter().map(move |&lam| (b, lam)))
            .collect();
        let n_end = 1e12;
        let mut worst_c: f64 = 0.0;
        for &(b, lam) in &pairs {
            let (log_c, argmax) = factorial_bound_constant(w, a, b, lam, n_end);
            worst_c = worst_c.max(log_c);
            // The supremum must be attained well inside the scanned range.
            tr.samples += 1;
            if argmax > n_end / 100.0 || !log_c.is_finite() {
                tr.ok = false;
                tr.witness = format!("B={b}, lambda={lam}: maximizer n={argmax:e} at the edge of the scan");
            }
            for i in 0..budget / pairs.len() {
                let n = if i % 2 == 0 { r.gen_range(0..=4096) as f64 } else { log_uniform(&mut r, 1.0, n_end).round() };
                tr.record(n * b.ln() + ln_gamma1(n), log_c + a * lam * w.phi_star(n / lam), || {
                    format!("B={b}, lambda={lam}, n={n}")
                });
            }
        }
        tr.constant = Some(worst_c.exp());
    } else {
        tr.ok = false;
        tr.witness = "no exponent a < 1 with omega = o(t^a)".into();
    }
    results.push(tr.finish());

    // ⟨x − y⟩ ≤ √2 ⟨(x, y)⟩
    let mut tr = Tracker::new("bracket_of_difference", "<x-y> <= sqrt(2) <(x,y)>");
    for _ in 0..budget {
        let d = r.gen_range(1..=3);
        let x = random_vector(&mut r, d, 1e6);
        let y = if r.gen_bool(0.2) { x.iter().map(|v| -v).collect() } else { random_vector(&mut r, d, 1e6) };
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let joint: Vec<f64> = x.iter().chain(&y).copied().collect();
        tr.record(bracket(&diff).ln(), 0.5 * 2f64.ln() + bracket(&joint).ln(), || format!("x={x:?}, y={y:?}"));
    }
    results.push(tr.finish());

    // λL^nφ*(y/(λL^n)) + ny ≤ λφ*(y/λ) + λΣ_{j≤n} L^j, with ω(et) ≤ L(ω(t)+1)
    let mut tr = Tracker::new(
        "iterated_doubling",
        "lambda L^n phi*(y/(lambda L^n)) + n y <= lambda phi*(y/lambda) + lambda sum_{j<=n} L^j",
    );
    for i in 0..budget {
        let y = if i % 50 == 0 { 0.0 } else { log_uniform(&mut r, 1e-3, 1e3) };
        let lam = log_uniform(&mut r, 0.1, 10.0);
        let n = r.gen_range(1..=8);
        let ln = le.powi(n);
        let sum: f64 = (1..=n).map(|j| le.powi(j)).sum();
        tr.record(
            lam * ln * w.phi_star(y / (lam * ln)) + n as f64 * y,
            lam * w.phi_star(y / lam) + lam * sum,
            || format!("y={y}, lambda={lam}, n={n}"),
        );
    }
    results.push(tr.finish());

    // 2λφ*((s+t)/2λ) ≤ λφ*(s/λ) + λφ*(t/λ) ≤ λφ*((s+t)/λ)
    let mut tr = Tracker::new(
        "conjugate_midpoint",
        "2 lambda phi*((s+t)/(2 lambda)) <= lambda phi*(s/lambda) + lambda phi*(t/lambda) <= lambda phi*((s+t)/lambda)",
    );
    for i in 0..budget {
        let s = log_uniform(&mut r, 1e-3, 1e3);
        let t = if i % 20 == 0 { s } else { log_uniform(&mut r, 1e-3, 1e3) };
        let lam = log_uniform(&mut r, 0.1, 10.0);
        let mid = lam * w.phi_star(s / lam) + lam * w.phi_star(t / lam);
        tr.record(2.0 * lam * w.phi_star((s + t) / (2.0 * lam)), mid, || format!("left: s={s}, t={t}, lambda={lam}"));
        tr.samples -= 1;
        tr.record(mid, lam * w.phi_star((s + t) / lam), || format!("right: s={s}, t={t}, lambda={lam}"));
    }
    results.push(tr.finish());

    // (k/N)φ*(N/k) ≤ log t ≤ (k/(N+1))φ*((N+1)/k) ⇒ t^{-N} e^{2kφ*(N/2k)} ≤ e^{−kω(t)+log t}
    let mut tr = Tracker::new(
        "band_decay",
        "t^-N exp(2k phi*(N/(2k))) <= exp(-k omega(t) + log t) on the band of log t",
    );
    for i in 0..budget {
        let k = r.gen_range(1..=20) as f64;
        let nn = r.gen_range(1..=200) as f64;
        let lo = k / nn * w.phi_star(nn / k);
        let hi = k / (nn + 1.0) * w.phi_star((nn + 1.0) / k);
        let lt = match i % 10 {
            0 => lo,
            1 => hi,
            _ => r.gen_range(lo..=hi.max(lo)),
        };
        tr.record(-nn * lt + 2.0 * k * w.phi_star(nn / (2.0 * k)), -k * w.w(lt.exp()) + lt, || {
            format!("k={k}, N={nn}, log t={lt}")
        });
    }
    results.push(tr.finish());

    // λφ*_σ(j/λ) ≤ C + μaφ*_ω(j/μ) when ω(t^{1/a}) = o(σ(t))
    let mut tr = Tracker::new(
        "conjugate_comparison",
        "lambda phi_sigma*(j/lambda) <= C + mu a phi_omega*(j/mu), omega(t^(1/a)) = o(sigma(t))",
    );
    if let Some((sigma, a)) = comparison_weight(w) {
        let j_end = 1e12;
        let pairs: Vec<(f64, f64)> =
            [0.5, 1.0, 2.0].iter().flat_map(|&l| [0.5, 1.0, 2.0].iter().map(move |&m| (l, m))).collect();
        let mut worst_c: f64 = 0.0;
        for &(lam, mu) in &pairs {
            let diff = |j: f64| lam * sigma.phi_star(j / lam) - mu * a * w.phi_star(j / mu);
            let (c, arg) = scan_sup(&diff, j_end);
            worst_c = worst_c.max(c);
            tr.samples += 1;
            if arg > j_end / 100.0 || !c.is_finite() {
                tr.ok = false;
                tr.witness = format!("lambda={lam}, mu={mu}: maximizer j={arg:e} at the edge of the scan");
            }
            for i in 0..budget / pairs.len() {
                let j = if i % 2 == 0 { r.gen_range(0..=4096) as f64 } else { log_uniform(&mut r, 1.0, j_end).round() };
                tr.record(lam * sigma.phi_star(j / lam), c + mu * a * w.phi_star(j / mu), || {
                    format!("lambda={lam}, mu={mu}, j={j}")
                });
            }
        }
        tr.constant = Some(worst_c);
    } else {
        tr.ok = false;
        tr.witness = "no comparison weight for this kind".into();
    }
    results.push(tr.finish());

    // ω(x) ≤ L'ω(|x|_∞) + L' ≤ L'ω(x) + L'
    let mut tr = Tracker::new("sup_norm_comparison", "omega(x) <= L' omega(|x|_inf) + L' <= L' omega(x) + L'");
    let mut minimal: f64 = 0.0;
    for _ in 0..budget {
        let d = r.gen_range(1..=4);
        let x = random_vector(&mut r, d, 1e8);
        let inf = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let k = ((d as f64).sqrt().log2()).ceil().max(0.0) as i32;
        let lp = l.powi(k).max((1..=k).map(|j| l.powi(j)).sum::<f64>()).max(1.0);
        let wx = w.radial(&x);
        let winf = w.w(inf);
        minimal = minimal.max(wx / (winf + 1.0));
        tr.record(wx, lp * winf + lp, || format!("d={d}, x={x:?}, L'={lp}"));
        tr.samples -= 1;
        tr.record(lp * winf + lp, lp * wx + lp, || format!("right: d={d}, x={x:?}"));
    }
    tr.constant = Some(minimal);
    results.push(tr.finish());

    // ω(x + y) ≤ L(ω(x) + ω(y) + 1)
    let mut tr = Tracker::new("omega_of_sum", "omega(x+y) <= L (omega(x) + omega(y) + 1)");
    for _ in 0..budget {
        let d = r.gen_range(1..=3);
        let x = random_vector(&mut r, d, 1e8);
        let y = random_vector(&mut r, d, 1e8);
        let s: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        tr.record(w.radial(&s), l * (w.radial(&x) + w.radial(&y) + 1.0), || format!("x={x:?}, y={y:?}"));
    }
    results.push(tr.finish());

    // ω(⟨x⟩) ≤ ω(1 + |x|) ≤ L(ω(x) + 1)
    let mut tr = Tracker::new("omega_of_bracket", "omega(<x>) <= omega(1+|x|) <= L (omega(x) + 1)");
    for _ in 0..budget {
        let d = r.gen_range(1..=3);
        let x = random_vector(&mut r, d, 1e8);
        let nx = norm(&x);
        let mid = w.w(1.0 + nx);
        tr.record(w.w(bracket(&x)), mid, || format!("x={x:?}"));
        tr.samples -= 1;
        tr.record(mid, l * (w.w(nx) + 1.0), || format!("right: x={x:?}"));
    }
    results.push(tr.finish());

    // e^{-1} e^{(m/j)φ*(j/m)} ≤ t ≤ e^{(n/j)φ*(j/n)}, m ≥ n ⇒ t^{j+1} ≥ e^{nω(t)} e^{2mφ*(j/2m)} e^{-j}
    let mut tr = Tracker::new(
        "exterior_band_growth",
        "t^(j+1) >= exp(n omega(t)) exp(2m phi*(j/(2m))) exp(-j) on the band of t",
    );
    for i in 0..budget {
        let n = r.gen_range(1..=10);
        let m = r.gen_range(n..=3 * n);
        let j = r.gen_range(1..=200) as f64;
        let (n, m) = (n as f64, m as f64);
        let lo = (m / j * w.phi_star(j / m) - 1.0).max(0.0);
        let hi = n / j * w.phi_star(j / n);
        let lt = match i % 10 {
            0 => lo,
            1 => hi,
            _ => r.gen_range(lo..=hi.max(lo)),
        };
        tr.record(n * w.w(lt.exp()) + 2.0 * m * w.phi_star(j / (2.0 * m)) - j, (j + 1.0) * lt, || {
            format!("n={n}, m={m}, j={j}, log t={lt}")
        });
    }
    results.push(tr.finish());

    SuiteReport { weight: w.name(), l_double: l, l_e: le, results }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_vs_conjugate_example_point() {
        // n=1, k=3, t=2 for gevrey(0.5): 2³ ≤ e^{φ*(3)} e^{ω(2)}
        let w = WeightFunction::gevrey(0.5).unwrap();
        let lhs = 3.0 * 2f64.ln();
        let rhs = w.phi_star(3.0) + w.w(2.0);
        assert!(rhs - lhs > 1.0);
    }

    #[test]
    fn factorial_constant_for_gevrey() {
        let w = WeightFunction::gevrey(0.5).unwrap();
        let a = factorial_exponent(&w).unwrap();
        let (log_c, arg) = factorial_bound_constant(&w, a, 2.0, 1.0, 1e6);
        assert!(log_c.is_finite());
        assert!(arg < 1e4);
        // Independent scan over the integers n ≤ 30 stays below the supremum.
        let direct = (0..=30)
            .map(|n| {
                let n = n as f64;
                n * 2f64.ln() + crate::multi_index::ln_factorial(n as usize) - a * w.phi_star(n)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(direct <= log_c + 1e-12);
    }

    #[test]
    fn suite_passes_for_builtin_weights() {
        for w in [
            WeightFunction::gevrey(0.5).unwrap(),
            WeightFunction::log_power(2.0).unwrap(),
            WeightFunction::gevrey_log(0.5, 1.0).unwrap(),
        ] {
            let rep = inequality_suite(&w, 600, 11);
            for res in &rep.results {
                assert!(res.pass, "{}: {} {:?}", rep.weight, res.name, res);
            }
        }
    }
}
