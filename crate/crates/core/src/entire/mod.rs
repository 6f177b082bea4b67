//! Canonical products `G(z) = Π (1 + z²/m_k²)` with `log|G| ≍ ω`, their
//! several-variable lift, and the derivative and Taylor-coefficient bounds
//! they satisfy.

mod bounds;

pub use bounds::{
    q_derivative_bounds, taylor_coefficient_bounds, CoefficientBoundReport, QBoundReport, QBoundRow,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{direction, geometric_grid, rng};
use crate::weights::WeightFunction;

/// Cone apertures `C₃` tried when measuring the lower bound off the real axis.
pub const CONE_APERTURES: [f64; 7] = [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

/// Zero placement for a canonical product.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroScale {
    /// `m_k = (κ_d k)^{1/d}` with `κ_d = π / sin(πd/2)`, so `log G(t) ~ t^d`.
    Gevrey { d: f64 },
    /// `m_k = k^{1/d}`, giving `log G(t) ~ κ_d t^d`.
    Plain { d: f64 },
    /// User-provided positive zeros, sorted ascending.
    Custom(Vec<f64>),
}

/// Even entire function `G(z) = Π_{k≤K} (1 + z²/m_k²)` evaluated in the log domain.
#[derive(Debug, Clone)]
pub struct CanonicalProduct {
    scale: ZeroScale,
    /// `1/m_k²`, ascending in `k`.
    inv_sq: Vec<f64>,
    weight: WeightFunction,
}

impl CanonicalProduct {
    /// The Gevrey product with `K` factors compared against `ω(t) = max(0, t^d − 1)`.
    pub fn gevrey(d: f64, factors: usize) -> Result<Self> {
        Self::with_scale(ZeroScale::Gevrey { d }, factors, WeightFunction::gevrey(d)?)
    }

    pub fn with_scale(scale: ZeroScale, factors: usize, weight: WeightFunction) -> Result<Self> {
        let zeros: Vec<f64> = match &scale {
            ZeroScale::Gevrey { d } | ZeroScale::Plain { d } => {
                if !(*d > 0.0 && *d < 1.0) {
                    return Err(Error::Domain(format!("canonical products need 0 < d < 1, got {d}")));
                }
                if factors == 0 {
                    return Err(Error::Config("at least one factor is required".into()));
                }
                let kappa = if matches!(scale, ZeroScale::Gevrey { .. }) { PI / (0.5 * PI * d).sin() } else { 1.0 };
                (1..=factors).map(|k| (kappa * k as f64).powf(1.0 / d)).collect()
            }
            ZeroScale::Custom(z) => {
                if z.is_empty() || z.iter().any(|m| !(*m > 0.0)) || z.windows(2).any(|v| v[1] < v[0]) {
                    return Err(Error::Config("custom zeros must be positive and ascending".into()));
                }
                z.clone()
            }
        };
        Ok(CanonicalProduct { scale, inv_sq: zeros.iter().map(|m| 1.0 / (m * m)).collect(), weight })
    }

    pub fn scale(&self) -> &ZeroScale {
        &self.scale
    }

    pub fn factors(&self) -> usize {
        self.inv_sq.len()
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    /// The same zero rule with `K` replaced by `factors`.
    pub fn with_factors(&self, factors: usize) -> Result<Self> {
        Self::with_scale(self.scale.clone(), factors, self.weight.clone())
    }

    pub fn zero(&self, k: usize) -> f64 {
        self.inv_sq[k].sqrt().recip()
    }

    /// `log G(t)` for real `t` (all factors are `≥ 1`).
    pub fn log_abs_real(&self, t: f64) -> f64 {
        let t2 = t * t;
        self.inv_sq.iter().map(|q| (t2 * q).ln_1p()).sum()
    }

    /// `Σ Log(1 + s/m_k²)` as a function of `s = Σ z_i²`; its real part is `log|G|`.
    pub fn log_in_square(&self, s: Complex64) -> Complex64 {
        self.inv_sq
            .iter()
            .map(|q| {
                let u = s * q;
                // ln|1+u| without cancellation for small u
                let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
                Complex64::new(re, (Complex64::new(1.0, 0.0) + u).arg())
            })
            .sum()
    }

    pub fn log_abs(&self, z: Complex64) -> f64 {
        self.log_in_square(z * z).re
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.log_in_square(z * z).exp()
    }

    /// `d/dt log G(t) = Σ 2t / (m_k² + t²)` on the real axis.
    pub fn log_derivative_real(&self, t: f64) -> f64 {
        self.inv_sq.iter().map(|q| 2.0 * t * q / (1.0 + t * t * q)).sum()
    }

    /// `log(1 + x)` summed over the factors beyond `K`, estimated from the
    /// zero counting function; zero for custom zero lists.
    pub fn tail_estimate(&self, t: f64) -> f64 {
        let k = self.factors() as f64;
        match self.scale {
            ZeroScale::Gevrey { d } | ZeroScale::Plain { d } => {
                let kappa = if matches!(self.scale, ZeroScale::Gevrey { .. }) { PI / (0.5 * PI * d).sin() } else { 1.0 };
                // Σ_{k>K} t²/m_k² ≈ t² κ^{-2/d} K^{1-2/d} / (2/d − 1)
                t * t * kappa.powf(-2.0 / d) * k.powf(1.0 - 2.0 / d) / (2.0 / d - 1.0)
            }
            ZeroScale::Custom(_) => 0.0,
        }
    }

    /// Coefficients `a_n` of `G(z) = Σ a_n z^{2n}` for `n ≤ n_max`: elementary
    /// symmetric functions of `1/m_k²`, accumulated with compensated sums.
    pub fn taylor_coefficients(&self, n_max: usize) -> Result<Vec<f64>> {
        Ok(elementary_symmetric(self.inv_sq.iter().copied(), n_max))
    }

    /// Coefficients of `G(z)^n = Σ b_j z^{2j}`, from the product with every zero repeated `n` times.
    pub fn power_coefficients(&self, n: usize, j_max: usize) -> Vec<f64> {
        elementary_symmetric(self.inv_sq.iter().flat_map(|q| std::iter::repeat_n(*q, n)), j_max)
    }
}

/// `e_j(x_1, ..., x_K)` for `j ≤ j_max` by the recursion
/// `e_j ← e_j + x_k e_{j−1}`, with per-entry error compensation.
fn elementary_symmetric(xs: impl Iterator<Item = f64>, j_max: usize) -> Vec<f64> {
    let mut e = vec![0.0; j_max + 1];
    let mut err = vec![0.0; j_max + 1];
    e[0] = 1.0;
    for x in xs {
        for j in (1..=j_max).rev() {
            let add = x * (e[j - 1] + err[j - 1]);
            let s = e[j] + add;
            let bp = s - e[j];
            err[j] += (e[j] - (s - bp)) + (add - bp);
            e[j] = s;
        }
    }
    e.iter().zip(&err).map(|(a, b)| a + b).collect()
}

/// Two-sided comparison of `log G(t)` with `ω(t)` on `t ∈ [1, 10⁴]`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthBand {
    pub factors: usize,
    /// `min log G / ω` where `ω ≥ 1`.
    pub c_low: f64,
    /// `max log G / ω` where `ω ≥ 1`.
    pub c_up: f64,
    /// Smallest `c₀ ≥ 0` with `c_low ω − c₀ ≤ log G` on the grid.
    pub c0: f64,
    /// Smallest `c₁ ≥ 0` with `log G ≤ c_up ω + c₁` on the grid.
    pub c1: f64,
    /// Smallest `C₁` with `log G ≤ ω + C₁` on the grid.
    pub upper_offset: f64,
    pub tail_at_t_max: f64,
    /// The neglected factors could move `log G(t_max)` by more than 1%.
    pub tail_unstable: bool,
}

impl CanonicalProduct {
    pub fn growth_band(&self, t_grid: &[f64]) -> GrowthBand {
        let w = &self.weight;
        let mut c_low = f64::INFINITY;
        let mut c_up: f64 = 0.0;
        for &t in t_grid {
            let om = w.w(t);
            if om >= 1.0 {
                let r = self.log_abs_real(t) / om;
                c_low = c_low.min(r);
                c_up = c_up.max(r);
            }
        }
        let mut c0: f64 = 0.0;
        let mut c1: f64 = 0.0;
        let mut upper = f64::NEG_INFINITY;
        for &t in t_grid {
            let (g, om) = (self.log_abs_real(t), w.w(t));
            c0 = c0.max(c_low * om - g);
            c1 = c1.max(g - c_up * om);
            upper = upper.max(g - om);
        }
        let t_max = t_grid.iter().copied().fold(0.0, f64::max);
        let tail = self.tail_estimate(t_max);
        GrowthBand {
            factors: self.factors(),
            c_low,
            c_up,
            c0,
            c1,
            upper_offset: upper,
            tail_at_t_max: tail,
            tail_unstable: self.factors() < 100 || tail > 1e-2 * self.log_abs_real(t_max).max(1.0),
        }
    }
}

/// Default real grid for the growth band: 400 log-spaced points on `[1, 10⁴]`.
pub fn band_grid() -> Vec<f64> {
    geometric_grid(1.0, 1e4, 400)
}

#[derive(Debug, Clone, Serialize)]
pub struct BandStability {
    pub band: GrowthBand,
    pub doubled: GrowthBand,
    pub max_relative_change: f64,
    pub stable: bool,
}

/// The growth band at `K` and `2K` factors; stable when `c_low`, `c_up`
/// and `C₁` move by at most `tol` relative (with a floor of 1 for `C₁`).
pub fn gevrey_langenbruch(d: f64, factors: usize, tol: f64) -> Result<(CanonicalProduct, BandStability)> {
    let g = CanonicalProduct::gevrey(d, factors)?;
    let grid = band_grid();
    let band = g.growth_band(&grid);
    let doubled = g.with_factors(2 * factors)?.growth_band(&grid);
    let rel = |a: f64, b: f64, floor: f64| (a - b).abs() / a.abs().max(floor);
    let change = rel(band.c_low, doubled.c_low, 1e-300)
        .max(rel(band.c_up, doubled.c_up, 1e-300))
        .max(rel(band.upper_offset, doubled.upper_offset, 1.0));
    let stable = change <= tol && !band.tail_unstable && band.c_low > 0.0;
    Ok((g, BandStability { band, doubled, max_relative_change: change, stable }))
}

/// `G(z) = f(√(z₁² + … + z_d²))`, evaluated through `s = Σ z_i²` so no square root is taken.
#[derive(Debug, Clone)]
pub struct LiftedProduct {
    f: CanonicalProduct,
    dim: usize,
}

pub fn lift_to_several_variables(f: &CanonicalProduct, dim: usize) -> LiftedProduct {
    LiftedProduct { f: f.clone(), dim }
}

/// Measured constants for the lifted bounds on sampled complex points.
#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub dim: usize,
    /// Smallest `C₁` with `log|G(z)| ≤ ω(z) + C₁` on all samples.
    pub c1: f64,
    /// Real-axis rate `min log G / ω` used as the reference for the cone.
    pub c2_real: f64,
    pub cones: Vec<ConeRow>,
    /// Largest aperture whose measured rate is at least half the real-axis rate.
    pub aperture: Option<f64>,
    pub upper_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeRow {
    pub c3: f64,
    /// `min log|G(z)| / ω(z)` over cone samples with `ω(z) ≥ 1`.
    pub c2: f64,
    /// Smallest `C₄ ≥ 0` with `log|G| ≥ C₂ ω − C₄` on the cone samples.
    pub c4: f64,
    pub samples: usize,
}

impl LiftedProduct {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn log_abs(&self, z: &[Complex64]) -> f64 {
        let s: Complex64 = z.iter().map(|v| v * v).sum();
        self.f.log_in_square(s).re
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let s: Complex64 = z.iter().map(|v| v * v).sum();
        self.f.log_in_square(s).exp()
    }

    /// `ω(|z|)` with `|z|² = Σ |z_i|²`.
    pub fn omega(&self, z: &[Complex64]) -> f64 {
        self.f.weight.w(z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
    }

    /// Samples `z = a·u + i b·v` with `|a| ∈ [0, a_max]` log-spaced, random unit
    /// `u, v`, and `b` filling `[0, C₃(|a|+1)]`, for each aperture; the upper bound
    /// is measured over all samples including `b` up to `2·8·(|a|+1)`.
    pub fn verify(&self, a_max: f64, per_aperture: usize, seed: u64) -> LiftReport {
        let mut g = rng(seed);
        let real: Vec<f64> = std::iter::once(0.0).chain(geometric_grid(0.1, a_max, per_aperture.max(2) - 1)).collect();
        let c2_real = real
            .iter()
            .filter(|t| self.f.weight.w(**t) >= 1.0)
            .map(|&t| self.f.log_abs_real(t) / self.f.weight.w(t))
            .fold(f64::INFINITY, f64::min);
        let mut c1 = f64::NEG_INFINITY;
        let mut cones = Vec::new();
        let fractions = [0.0, 0.25, 0.5, 0.75, 1.0];
        for &c3 in &CONE_APERTURES {
            let mut c2 = f64::INFINITY;
            let mut pts = Vec::new();
            for (i, &a) in real.iter().enumerate() {
                let u = direction(&mut g, self.dim);
                let v = direction(&mut g, self.dim);
                let b = c3 * (a + 1.0) * fractions[i % fractions.len()];
                let z: Vec<Complex64> = u.iter().zip(&v).map(|(x, y)| Complex64::new(a * x, b * y)).collect();
                let (lg, om) = (self.log_abs(&z), self.omega(&z));
                c1 = c1.max(lg - om);
                if om >= 1.0 {
                    c2 = c2.min(lg / om);
                }
                pts.push((lg, om));
            }
            let c2 = if c2.is_finite() { c2 } else { 0.0 };
            let c4 = pts.iter().map(|(lg, om)| c2 * om - lg).fold(0.0, f64::max);
            cones.push(ConeRow { c3, c2, c4, samples: pts.len() });
        }
        let aperture = cones.iter().filter(|r| r.c2 >= 0.5 * c2_real).map(|r| r.c3).fold(None, |acc: Option<f64>, c| {
            Some(acc.map_or(c, |a| a.max(c)))
        });
        LiftReport { dim: self.dim, c1, c2_real, cones, aperture, upper_holds: c1.is_finite() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_and_even() {
        let g = CanonicalProduct::gevrey(0.5, 200).unwrap();
        assert_eq!(g.eval(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        for &t in &[0.3, 2.0, 17.0, 400.0] {
            assert_eq!(g.log_abs_real(t), g.log_abs_real(-t));
            let z = Complex64::new(t, 0.4 * t);
            assert_eq!(g.eval(z), g.eval(-z));
        }
    }

    #[test]
    fn log_domain_matches_direct_product() {
        let g = CanonicalProduct::gevrey(0.5, 150).unwrap();
        let z = Complex64::new(3.0, 1.5);
        let direct: Complex64 = (0..g.factors())
            .map(|k| Complex64::new(1.0, 0.0) + z * z / (g.zero(k) * g.zero(k)))
            .product();
        assert!((g.eval(z) - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn real_values_are_monotone_and_at_least_one() {
        let g = CanonicalProduct::gevrey(0.5, 300).unwrap();
        let mut prev = 0.0;
        for t in geometric_grid(1e-3, 1e4, 200) {
            let v = g.log_abs_real(t);
            assert!(v >= prev && v >= 0.0);
            prev = v;
        }
    }

    #[test]
    fn coefficients_are_positive_and_reproduce_values() {
        let g = CanonicalProduct::gevrey(0.5, 400).unwrap();
        let a = g.taylor_coefficients(12).unwrap();
        assert_eq!(a[0], 1.0);
        assert!(a.iter().all(|v| *v > 0.0));
        let t: f64 = 3.0;
        let series: f64 = a.iter().enumerate().map(|(n, c)| c * t.powi(2 * n as i32)).sum();
        assert!((series - g.log_abs_real(t).exp()).abs() < 1e-12 * series);
    }

    #[test]
    fn radial_lift_on_real_vectors() {
        let g = CanonicalProduct::gevrey(0.5, 500).unwrap();
        let lifted = lift_to_several_variables(&g, 2);
        let v = [Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0)];
        assert_eq!(lifted.eval(&v), g.eval(Complex64::new(5.0, 0.0)));
    }

    #[test]
    fn log_derivative_matches_difference() {
        let g = CanonicalProduct::gevrey(0.5, 500).unwrap();
        let (t, h) = (12.0, 1e-5);
        let fd = (g.log_abs_real(t + h) - g.log_abs_real(t - h)) / (2.0 * h);
        assert!((fd - g.log_derivative_real(t)).abs() < 1e-8);
    }
}
