//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] stores the Taylor coefficients `c_γ = ∂^γ f(p) / γ!` of a
//! function at a point `p` for all multi-indices with `|γ| ≤ order`. Sums,
//! products and composition with univariate functions act exactly on the
//! truncated series, so one jet evaluation yields every partial derivative
//! up to the order of the space.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::multi_index::{self, multi_factorial};

#[derive(Debug)]
pub struct JetSpace {
    nvars: usize,
    order: usize,
    indices: Vec<Vec<usize>>,
    orders: Vec<usize>,
    lookup: HashMap<Vec<usize>, usize>,
    products: Vec<(u32, u32, u32)>,
}

impl JetSpace {
    pub fn new(nvars: usize, order: usize) -> Arc<Self> {
        let indices = multi_index::up_to_order(nvars, order);
        let orders: Vec<usize> = indices.iter().map(|g| multi_index::order(g)).collect();
        let lookup: HashMap<Vec<usize>, usize> =
            indices.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let mut products = Vec::new();
        let mut sum = vec![0; nvars];
        for (i, a) in indices.iter().enumerate() {
            for (j, b) in indices.iter().enumerate() {
                if orders[i] + orders[j] > order {
                    continue;
                }
                for k in 0..nvars {
                    sum[k] = a[k] + b[k];
                }
                let target = lookup[&sum];
                products.push((i as u32, j as u32, target as u32));
            }
        }
        Arc::new(JetSpace { nvars, order, indices, orders, lookup, products })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[Vec<usize>] {
        &self.indices
    }

    pub fn index_of(&self, gamma: &[usize]) -> Option<usize> {
        self.lookup.get(gamma).copied()
    }

    pub fn order_of(&self, idx: usize) -> usize {
        self.orders[idx]
    }
}

#[derive(Debug, Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn zero(space: &Arc<JetSpace>) -> Self {
        Jet { space: Arc::clone(space), coeffs: vec![Complex64::new(0.0, 0.0); space.len()] }
    }

    pub fn constant(space: &Arc<JetSpace>, value: Complex64) -> Self {
        let mut j = Self::zero(space);
        j.coeffs[0] = value;
        j
    }

    /// The coordinate function `v_i` expanded at `value`.
    pub fn variable(space: &Arc<JetSpace>, var: usize, value: f64) -> Self {
        let mut j = Self::constant(space, Complex64::new(value, 0.0));
        if space.order >= 1 {
            let mut e = vec![0; space.nvars];
            e[var] = 1;
            let idx = space.index_of(&e).expect("unit index present");
            j.coeffs[idx] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn from_coeffs(space: &Arc<JetSpace>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), space.len());
        Jet { space: Arc::clone(space), coeffs }
    }

    /// Product of univariate series `g_i(v_i)`; `factors[i][k]` is the k-th
    /// Taylor coefficient of `g_i`.
    pub fn separable(space: &Arc<JetSpace>, factors: &[Vec<Complex64>]) -> Self {
        assert_eq!(factors.len(), space.nvars);
        let coeffs = space
            .indices
            .iter()
            .map(|g| {
                g.iter()
                    .zip(factors)
                    .map(|(&k, f)| f.get(k).copied().unwrap_or_default())
                    .product()
            })
            .collect();
        Jet { space: Arc::clone(space), coeffs }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `∂^γ f` at the expansion point.
    pub fn derivative(&self, gamma: &[usize]) -> Complex64 {
        match self.space.index_of(gamma) {
            Some(i) => self.coeffs[i] * multi_factorial(gamma),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `(|∂^γ f|, |γ|)` for every stored γ.
    pub fn derivative_magnitudes(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.space
            .indices
            .iter()
            .zip(&self.coeffs)
            .map(|(g, c)| (g.as_slice(), c.norm() * multi_factorial(g)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Jet { space: Arc::clone(&self.space), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add_assign(&mut self, other: &Jet) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn add_scaled(&mut self, other: &Jet, s: Complex64) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * s;
        }
    }

    pub fn add(&self, other: &Jet) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Jet) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(-1.0, 0.0));
        out
    }

    pub fn add_const(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn mul(&self, other: &Jet) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        for &(i, j, k) in &self.space.products {
            out[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Jet { space: Arc::clone(&self.space), coeffs: out }
    }

    /// `h(f)` where `series[k] = h^{(k)}(f(p)) / k!`.
    pub fn compose(&self, series: &[Complex64]) -> Self {
        let mut tail = self.clone();
        tail.coeffs[0] = Complex64::new(0.0, 0.0);
        let top = series.len().min(self.space.order + 1);
        if top == 0 {
            return Jet::zero(&self.space);
        }
        let mut acc = Jet::constant(&self.space, series[top - 1]);
        for k in (0..top - 1).rev() {
            acc = acc.mul(&tail);
            acc.coeffs[0] += series[k];
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let series: Vec<Complex64> =
            (0..=self.space.order).map(|k| e / multi_index::factorial(k)).collect();
        self.compose(&series)
    }

    pub fn recip(&self) -> Self {
        let a = self.value();
        let inv = 1.0 / a;
        let mut series = Vec::with_capacity(self.space.order + 1);
        let mut term = inv;
        for _ in 0..=self.space.order {
            series.push(term);
            term *= -inv;
        }
        self.compose(&series)
    }

    pub fn sqrt(&self) -> Self {
        let a = self.value();
        let root = a.sqrt();
        let mut series = Vec::with_capacity(self.space.order + 1);
        let mut binom = 1.0;
        let mut pow = root;
        for k in 0..=self.space.order {
            series.push(pow * binom);
            binom *= (0.5 - k as f64) / (k as f64 + 1.0);
            pow /= a;
        }
        self.compose(&series)
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut out = Jet::constant(&self.space, Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }
}

/// Taylor coefficients of `v ↦ e^{-w v²}` at `v0` up to `order`.
pub fn gaussian_series(w: f64, v0: f64, order: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    let g0 = (-w * v0 * v0).exp();
    if w == 0.0 {
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    // g' = -2 w v g; with v = v0 + ε this yields
    // (k+1) c_{k+1} = -2w (v0 c_k + c_{k-1}).
    out[0] = Complex64::new(g0, 0.0);
    for k in 0..order {
        let prev = if k > 0 { out[k - 1] } else { Complex64::new(0.0, 0.0) };
        out[k + 1] = (out[k] * v0 + prev) * (-2.0 * w) / (k as f64 + 1.0);
    }
    out
}

/// Taylor coefficients of the polynomial `v ↦ v^p` at `v0`.
pub fn monomial_series(p: usize, v0: f64, order: usize) -> Vec<Complex64> {
    (0..=order)
        .map(|k| {
            if k > p {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(multi_index::binomial(p, k) * v0.powi((p - k) as i32), 0.0)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule_on_monomials() {
        let space = JetSpace::new(2, 4);
        let x = Jet::variable(&space, 0, 1.5);
        let y = Jet::variable(&space, 1, -0.5);
        let f = x.mul(&x).mul(&y); // x² y
        assert_relative_eq!(f.value().re, 1.5 * 1.5 * -0.5);
        assert_relative_eq!(f.derivative(&[1, 0]).re, 2.0 * 1.5 * -0.5);
        assert_relative_eq!(f.derivative(&[2, 1]).re, 2.0);
        assert_eq!(f.derivative(&[3, 0]).re, 0.0);
    }

    #[test]
    fn exp_and_recip_match_closed_forms() {
        let space = JetSpace::new(1, 6);
        let x = Jet::variable(&space, 0, 0.7);
        let e = x.exp();
        for k in 0..=6 {
            assert_relative_eq!(e.derivative(&[k]).re, 0.7f64.exp(), max_relative = 1e-13);
        }
        let r = x.recip();
        // d^k/dx^k 1/x = (-1)^k k! / x^{k+1}
        for k in 0..=6 {
            let expected = (-1f64).powi(k as i32) * multi_index::factorial(k) / 0.7f64.powi(k as i32 + 1);
            assert_relative_eq!(r.derivative(&[k]).re, expected, max_relative = 1e-12);
        }
        let s = x.sqrt();
        assert_relative_eq!(s.derivative(&[1]).re, 0.5 / 0.7f64.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn gaussian_series_matches_jet_exp() {
        let space = JetSpace::new(1, 10);
        let x = Jet::variable(&space, 0, 0.3);
        let g = x.mul(&x).scale(Complex64::new(-1.7, 0.0)).exp();
        let series = gaussian_series(1.7, 0.3, 10);
        for (a, b) in g.coeffs().iter().zip(&series).take(11) {
            assert_relative_eq!(a.re, b.re, max_relative = 1e-11, epsilon = 1e-15);
        }
    }
}
