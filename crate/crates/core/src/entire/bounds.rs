use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::CanonicalProduct;
use crate::error::{Error, Result};
use crate::multi_index::{ln_factorial, with_order};

#[derive(Debug, Clone, Serialize)]
pub struct QBoundRow {
    pub n: usize,
    /// Minimal `C` with `|D^β q^n| ≤ C β! R^{-|β|} e^{-nKω(ξ)}` on the sample.
    pub c_fit: f64,
    /// `c_fit^{1/n}`, to be compared with the single-power constant.
    pub c_fit_root: f64,
    /// Least-squares slope of `−log|q^n(ξ)|` against `ω(ξ)` where `ω ≥ 1`.
    pub rate: f64,
    /// The `n`-th power bound holds with the constants `(C, R, K)` of the first power.
    pub bound_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QBoundReport {
    pub factors: usize,
    /// Contour radius `R`, shrunk to stay inside the cone and away from zeros.
    pub radius: f64,
    pub nodes: usize,
    pub cone_aperture: f64,
    /// Decay rate `K`, the real-axis minimum of `log G / ω`.
    pub k_rate: f64,
    /// `C = max_ξ max_{|ζ−ξ|=R} |q(ζ)| e^{Kω(ξ)}`, the Cauchy majorant constant.
    pub c: f64,
    pub rows: Vec<QBoundRow>,
    /// Largest relative gap between the contour first derivative and `−q·(log G)'`.
    pub derivative_check_error: f64,
    /// `c_fit_root ≤ 1.05 C` and `rate_n / (n rate_1) ∈ [0.95, 1.05]` for every power.
    pub scaling_ok: bool,
}

fn slope_through(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx).powi(2)));
    sxy / sxx
}

/// Derivatives of `q^n = G^{-n}` on the real line by the trapezoidal Cauchy
/// integral on circles of radius `R ≤ min(radius, C₃, m₁/2)`.
pub fn q_derivative_bounds(
    f: &CanonicalProduct,
    powers: &[usize],
    beta_cap: usize,
    xi_grid: &[f64],
    radius: f64,
    cone_aperture: f64,
    nodes: usize,
) -> Result<QBoundReport> {
    if powers.is_empty() || powers.contains(&0) || xi_grid.is_empty() {
        return Err(Error::Config("need positive powers and a nonempty ξ grid".into()));
    }
    if nodes < 2 * beta_cap + 8 {
        return Err(Error::Config(format!("{nodes} contour nodes cannot resolve order {beta_cap}")));
    }
    let r = radius.min(cone_aperture).min(0.5 * f.zero(0));
    if !(r > 0.0) {
        return Err(Error::Domain(format!("contour radius must be positive, got {r}")));
    }
    let w = f.weight();
    let k_rate = xi_grid
        .iter()
        .filter(|t| w.w(t.abs()) >= 1.0)
        .map(|&t| f.log_abs_real(t) / w.w(t.abs()))
        .fold(f64::INFINITY, f64::min);
    let k_rate = if k_rate.is_finite() { k_rate } else { 0.0 };
    let thetas: Vec<Complex64> = (0..nodes).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64)).collect();

    // Per ξ: log G(ξ), the complex logs on the circle, and the Cauchy majorant.
    struct Circle {
        xi: f64,
        l0: f64,
        l: Vec<Complex64>,
        ln_major: f64,
    }
    let circles: Vec<Circle> = xi_grid
        .iter()
        .map(|&xi| {
            let l: Vec<Complex64> = thetas
                .iter()
                .map(|e| {
                    let z = Complex64::new(xi, 0.0) + e * r;
                    f.log_in_square(z * z)
                })
                .collect();
            let ln_major = -l.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
            Circle { xi, l0: f.log_abs_real(xi), l, ln_major }
        })
        .collect();
    let ln_c = circles.iter().map(|c| c.ln_major + k_rate * w.w(c.xi.abs())).fold(f64::NEG_INFINITY, f64::max);

    // β-th Taylor coefficient of q^n(ξ + ·)/q^n(ξ) at radius r, as a log magnitude.
    let coeff = |c: &Circle, n: usize, beta: usize| -> f64 {
        let nf = n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, lv) in c.l.iter().enumerate() {
            let rot = thetas[(j * beta) % nodes].conj();
            acc += (-(lv - c.l0) * nf).exp() * rot;
        }
        (acc / nodes as f64).norm().ln()
    };

    let mut rows = Vec::new();
    let mut rate1 = f64::NAN;
    let mut scaling_ok = true;
    for &n in powers {
        let nf = n as f64;
        let mut ln_fit = f64::NEG_INFINITY;
        let mut holds = true;
        for c in &circles {
            let om = w.w(c.xi.abs());
            for beta in 0..=beta_cap {
                // ln|D^β q^n| − ln β! + β ln R = ln|coeff| − n log G(ξ)
                let lhs = coeff(c, n, beta) - nf * c.l0;
                ln_fit = ln_fit.max(lhs + nf * k_rate * om);
                if lhs > nf * ln_c - nf * k_rate * om + 1e-9 * (1.0 + nf * c.l0) {
                    holds = false;
                }
            }
        }
        let tail: Vec<(f64, f64)> = circles
            .iter()
            .filter(|c| w.w(c.xi.abs()) >= 1.0)
            .map(|c| (w.w(c.xi.abs()), nf * c.l0))
            .collect();
        let rate = if tail.len() >= 2 { slope_through(&tail) } else { f64::NAN };
        if n == 1 {
            rate1 = rate;
        }
        let root = (ln_fit / nf).exp();
        scaling_ok &= holds && root <= 1.05 * ln_c.exp();
        if rate1.is_finite() && rate.is_finite() {
            let ratio = rate / (nf * rate1);
            scaling_ok &= (0.95..=1.05).contains(&ratio);
        }
        rows.push(QBoundRow { n, c_fit: ln_fit.exp(), c_fit_root: root, rate, bound_holds: holds });
    }

    // First derivative from the contour against the product rule, at up to 20 points.
    let step = (circles.len() / 20).max(1);
    let mut err: f64 = 0.0;
    for c in circles.iter().step_by(step).take(20) {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, lv) in c.l.iter().enumerate() {
            acc += (-(lv - c.l0)).exp() * thetas[j].conj();
        }
        let contour = acc / (nodes as f64 * r);
        let exact = -f.log_derivative_real(c.xi);
        // both sides relative to q(ξ)
        err = err.max((contour.re - exact).abs().max(contour.im.abs()) / exact.abs().max(1e-3));
    }

    Ok(QBoundReport {
        factors: f.factors(),
        radius: r,
        nodes,
        cone_aperture,
        k_rate,
        c: ln_c.exp(),
        rows,
        derivative_check_error: err,
        scaling_ok,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientBoundReport {
    pub factors: usize,
    pub dim: usize,
    pub degree_cap: usize,
    /// Minimal `C` with `|a_α| ≤ e^C e^{-Cφ*(|α|/C)}` for `|α| ≤ degree_cap`.
    pub c: f64,
    /// `(n, holds, worst margin)` for `|b_α| ≤ e^{nC} e^{-nCφ*(|α|/(nC))}` with the same `C`.
    pub power_checks: Vec<(usize, bool, f64)>,
    /// Relative gap between the coefficients of `G²` and the self-convolution of those of `G`.
    pub square_convolution_gap: f64,
    /// Some coefficient underflowed or lost its value to rounding.
    pub unreliable: bool,
}

/// `ln max_{|α|=j} |coefficient of z^α|` for `G^n(z) = Σ c_k (z₁² + … + z_d²)^k`.
fn ln_max_coefficients(series: &[f64], dim: usize, degree_cap: usize) -> Vec<Option<f64>> {
    (0..=degree_cap)
        .map(|j| {
            if j % 2 == 1 || series[j / 2] <= 0.0 {
                return None;
            }
            let k = j / 2;
            let ln_multinomial = with_order(dim, k)
                .iter()
                .map(|g| ln_factorial(k) - g.iter().map(|&v| ln_factorial(v)).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            Some(series[k].ln() + ln_multinomial)
        })
        .collect()
}

/// Slack of `ln|c_j| ≤ s − s φ*(j/s)` minimized over `j`, with `s = nC`.
fn margin(f: &CanonicalProduct, ln_c: &[Option<f64>], s: f64) -> f64 {
    ln_c.iter()
        .enumerate()
        .filter_map(|(j, v)| v.map(|l| s - s * f.weight().phi_star(j as f64 / s) - l))
        .fold(f64::INFINITY, f64::min)
}

pub fn taylor_coefficient_bounds(
    f: &CanonicalProduct,
    dim: usize,
    degree_cap: usize,
    powers: &[usize],
) -> Result<CoefficientBoundReport> {
    if dim == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    let half = degree_cap / 2;
    let a = f.taylor_coefficients(half)?;
    let ln_a = ln_max_coefficients(&a, dim, degree_cap);
    // The slack is nondecreasing in C since Cφ*(j/C) decreases in C.
    let (mut lo, mut hi) = (1e-9, 1.0);
    while margin(f, &ln_a, hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::Domain("no finite constant bounds the coefficients".into()));
        }
    }
    if margin(f, &ln_a, lo) >= 0.0 {
        hi = lo;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if margin(f, &ln_a, mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let c = hi;
    let mut unreliable = a.iter().any(|v| !v.is_finite() || *v < 1e-290);
    let mut power_checks = Vec::new();
    for &n in powers {
        let b = f.power_coefficients(n, half);
        unreliable |= b.iter().any(|v| !v.is_finite() || *v < 1e-290);
        let m = margin(f, &ln_max_coefficients(&b, dim, degree_cap), n as f64 * c);
        power_checks.push((n, m >= -1e-9, m));
    }
    let b2 = f.power_coefficients(2, half);
    let gap = (0..=half)
        .map(|k| {
            let conv: f64 = (0..=k).map(|i| a[i] * a[k - i]).sum();
            (conv - b2[k]).abs() / b2[k].abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    Ok(CoefficientBoundReport {
        factors: f.factors(),
        dim,
        degree_cap,
        c,
        power_checks,
        square_convolution_gap: gap,
        unreliable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::geometric_grid;

    #[test]
    fn q_at_origin_is_one_and_bounds_hold() {
        let g = CanonicalProduct::gevrey(0.5, 2000).unwrap();
        assert_eq!(g.log_abs_real(0.0), 0.0);
        let grid: Vec<f64> = std::iter::once(0.0).chain(geometric_grid(0.5, 1e3, 40)).collect();
        let r = q_derivative_bounds(&g, &[1, 2, 3], 6, &grid, 1.0, 1.0, 64).unwrap();
        assert!(r.rows.iter().all(|row| row.bound_holds), "{r:#?}");
        assert!(r.scaling_ok, "{r:#?}");
        assert!(r.derivative_check_error < 1e-8, "{}", r.derivative_check_error);
    }

    #[test]
    fn coefficient_constant_and_square() {
        let g = CanonicalProduct::gevrey(0.5, 2000).unwrap();
        let r = taylor_coefficient_bounds(&g, 1, 40, &[1, 2, 3]).unwrap();
        assert!(r.c > 0.0 && r.c.is_finite());
        assert!(r.power_checks.iter().all(|(_, ok, _)| *ok), "{r:#?}");
        assert!(r.square_convolution_gap < 1e-12);
        assert!(!r.unreliable);
    }

    #[test]
    fn lifted_coefficients_bound_holds_in_two_variables() {
        let g = CanonicalProduct::gevrey(0.5, 500).unwrap();
        let r = taylor_coefficient_bounds(&g, 2, 20, &[1, 2]).unwrap();
        assert!(r.power_checks.iter().all(|(_, ok, _)| *ok));
    }
}
