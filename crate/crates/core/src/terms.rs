//! Finite sums of Gaussian-times-polynomial terms.
//!
//! A [`TermExpr`] lives on `blocks` groups of `dim` real variables and stores
//! terms `c · Π_b v_b^{μ_b} e^{-w_b |v_b|²}` in a canonical ordered map, so
//! like terms are merged on insertion and equality is structural. Every
//! operation needed by the symbol calculus (derivatives, products,
//! reflection, diagonal restriction, exact Gaussian Fourier transforms) maps
//! the representable set into itself.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{gaussian_series, monomial_series, Jet, JetSpace};

#[derive(Debug, Clone)]
pub struct TermKey {
    pub powers: Vec<u32>,
    pub widths: Vec<f64>,
}

impl PartialEq for TermKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for TermKey {}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.powers.cmp(&other.powers).then_with(|| {
            for (a, b) in self.widths.iter().zip(&other.widths) {
                match a.total_cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            self.widths.len().cmp(&other.widths.len())
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermExpr {
    dim: usize,
    blocks: usize,
    terms: BTreeMap<TermKey, Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl TermExpr {
    pub fn zero(dim: usize, blocks: usize) -> Self {
        TermExpr { dim, blocks, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, blocks: usize, c: Complex64) -> Self {
        let mut e = Self::zero(dim, blocks);
        e.insert(TermKey { powers: vec![0; dim * blocks], widths: vec![0.0; blocks] }, c);
        e
    }

    /// A single term; `powers` has `dim * blocks` entries, `widths` one per block.
    pub fn monomial(dim: usize, blocks: usize, c: Complex64, powers: Vec<u32>, widths: Vec<f64>) -> Result<Self> {
        if powers.len() != dim * blocks || widths.len() != blocks {
            return Err(Error::Dimension { expected: dim * blocks, found: powers.len() });
        }
        if widths.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Domain("Gaussian widths must be finite and nonnegative".into()));
        }
        let mut e = Self::zero(dim, blocks);
        e.insert(TermKey { powers, widths }, c);
        Ok(e)
    }

    /// The coordinate function `v_{block, i}`.
    pub fn coordinate(dim: usize, blocks: usize, block: usize, i: usize) -> Self {
        let mut powers = vec![0; dim * blocks];
        powers[block * dim + i] = 1;
        let mut e = Self::zero(dim, blocks);
        e.insert(TermKey { powers, widths: vec![0.0; blocks] }, Complex64::new(1.0, 0.0));
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &Complex64)> {
        self.terms.iter()
    }

    fn insert(&mut self, key: TermKey, c: Complex64) {
        if c == ZERO {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum == ZERO {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.dim == other.dim && self.blocks == other.blocks,
            "term expressions over different variable sets"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.dim, self.blocks);
        for (k, c) in &self.terms {
            out.insert(k.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut out = Self::zero(self.dim, self.blocks);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let powers = ka.powers.iter().zip(&kb.powers).map(|(a, b)| a + b).collect();
                let widths = ka.widths.iter().zip(&kb.widths).map(|(a, b)| a + b).collect();
                out.insert(TermKey { powers, widths }, ca * cb);
            }
        }
        out
    }

    /// `∂/∂v_{block, i}`.
    pub fn partial(&self, block: usize, i: usize) -> Self {
        let idx = block * self.dim + i;
        let mut out = Self::zero(self.dim, self.blocks);
        for (k, c) in &self.terms {
            let p = k.powers[idx];
            if p > 0 {
                let mut key = k.clone();
                key.powers[idx] -= 1;
                out.insert(key, c * p as f64);
            }
            let w = k.widths[block];
            if w != 0.0 {
                let mut key = k.clone();
                key.powers[idx] += 1;
                out.insert(key, c * (-2.0 * w));
            }
        }
        out
    }

    /// `∂^α` in one block.
    pub fn partial_multi(&self, block: usize, alpha: &[usize]) -> Self {
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.partial(block, i);
            }
        }
        out
    }

    /// `D^α = (-i∂)^α` in one block.
    pub fn d_multi(&self, block: usize, alpha: &[usize]) -> Self {
        let k: usize = alpha.iter().sum();
        self.partial_multi(block, alpha).scale(Complex64::new(0.0, -1.0).powu(k as u32))
    }

    /// Substitution `v_block → -v_block`.
    pub fn reflect(&self, block: usize) -> Self {
        let mut out = Self::zero(self.dim, self.blocks);
        for (k, c) in &self.terms {
            let deg: u32 = k.powers[block * self.dim..(block + 1) * self.dim].iter().sum();
            let sign = if deg.is_multiple_of(2) { 1.0 } else { -1.0 };
            out.insert(k.clone(), c * sign);
        }
        out
    }

    /// Substitution `v_from := v_into`; the `from` block disappears.
    pub fn merge(&self, from: usize, into: usize) -> Self {
        assert!(from != into && from < self.blocks && into < self.blocks);
        let d = self.dim;
        let mut out = Self::zero(d, self.blocks - 1);
        for (k, c) in &self.terms {
            let mut powers = k.powers.clone();
            let mut widths = k.widths.clone();
            for i in 0..d {
                powers[into * d + i] += k.powers[from * d + i];
            }
            widths[into] += k.widths[from];
            powers.drain(from * d..(from + 1) * d);
            widths.remove(from);
            out.insert(TermKey { powers, widths }, *c);
        }
        out
    }

    /// Appends `extra` empty blocks at the end.
    pub fn extend_blocks(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.dim, self.blocks + extra);
        for (k, c) in &self.terms {
            let mut powers = k.powers.clone();
            powers.extend(std::iter::repeat_n(0, extra * self.dim));
            let mut widths = k.widths.clone();
            widths.extend(std::iter::repeat_n(0.0, extra));
            out.insert(TermKey { powers, widths }, *c);
        }
        out
    }

    /// Reorders blocks: block `b` of the result is block `order[b]` of `self`.
    pub fn permute_blocks(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.blocks);
        let d = self.dim;
        let mut out = Self::zero(d, self.blocks);
        for (k, c) in &self.terms {
            let mut powers = Vec::with_capacity(k.powers.len());
            let mut widths = Vec::with_capacity(self.blocks);
            for &src in order {
                powers.extend_from_slice(&k.powers[src * d..(src + 1) * d]);
                widths.push(k.widths[src]);
            }
            out.insert(TermKey { powers, widths }, *c);
        }
        out
    }

    /// Substitution `v_block → δ·v_block`.
    pub fn dilate(&self, block: usize, delta: f64) -> Self {
        let mut out = Self::zero(self.dim, self.blocks);
        for (k, c) in &self.terms {
            let deg: u32 = k.powers[block * self.dim..(block + 1) * self.dim].iter().sum();
            let mut key = k.clone();
            key.widths[block] *= delta * delta;
            out.insert(key, c * delta.powi(deg as i32));
        }
        out
    }

    /// `∫ e^{iσ⟨v,ζ⟩} f(v) dv` over the variables of `block`, with the
    /// frequency `ζ` taking the place of `v`. `σ = -1` is the forward
    /// transform, `σ = +1` the unnormalized inverse.
    pub fn fourier(&self, block: usize, sign: f64) -> Result<Self> {
        let d = self.dim;
        let mut out = Self::zero(d, self.blocks);
        for (k, c) in &self.terms {
            let w = k.widths[block];
            if w <= 0.0 {
                return Err(Error::NotRepresentable(
                    "Fourier integral of a term without Gaussian decay".into(),
                ));
            }
            // ∫ v^μ e^{-w v²} e^{iσvζ} dv = (-iσ∂_ζ)^μ [√(π/w) e^{-ζ²/(4w)}]
            let mut key = k.clone();
            for i in 0..d {
                key.powers[block * d + i] = 0;
            }
            key.widths[block] = 1.0 / (4.0 * w);
            let amp = (PI / w).powf(d as f64 / 2.0);
            let mut base = Self::zero(d, self.blocks);
            base.insert(key, c * amp);
            let factor = Complex64::new(0.0, -sign);
            for i in 0..d {
                for _ in 0..k.powers[block * d + i] {
                    base = base.partial(block, i).scale(factor);
                }
            }
            for (bk, bc) in base.terms {
                out.insert(bk, bc);
            }
        }
        Ok(out)
    }

    /// Value at `point` (length `dim * blocks`).
    pub fn eval(&self, point: &[f64]) -> Complex64 {
        let d = self.dim;
        let norms: Vec<f64> = (0..self.blocks)
            .map(|b| point[b * d..(b + 1) * d].iter().map(|v| v * v).sum())
            .collect();
        let mut acc = ZERO;
        for (k, c) in &self.terms {
            let mut mono = 1.0;
            for (p, v) in k.powers.iter().zip(point) {
                if *p > 0 {
                    mono *= v.powi(*p as i32);
                }
            }
            let expo: f64 = k.widths.iter().zip(&norms).map(|(w, n)| w * n).sum();
            acc += c * (mono * (-expo).exp());
        }
        acc
    }

    /// Highest total degree of the polynomial parts in `block`.
    pub fn degree(&self, block: usize) -> u32 {
        let d = self.dim;
        self.terms
            .keys()
            .map(|k| k.powers[block * d..(block + 1) * d].iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// True when every term decays like a Gaussian in `block`.
    pub fn decays_in(&self, block: usize) -> bool {
        self.terms.keys().all(|k| k.widths[block] > 0.0)
    }

    /// True when no term carries a Gaussian factor in `block`.
    pub fn polynomial_in(&self, block: usize) -> bool {
        self.terms.keys().all(|k| k.widths[block] == 0.0)
    }

    /// True when the expression does not depend on `block`.
    pub fn independent_of(&self, block: usize) -> bool {
        let d = self.dim;
        self.terms
            .keys()
            .all(|k| k.widths[block] == 0.0 && k.powers[block * d..(block + 1) * d].iter().all(|p| *p == 0))
    }

    /// Largest coefficient modulus; a scale for relative comparisons.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops terms whose coefficient modulus is below `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        let mut out = Self::zero(self.dim, self.blocks);
        for (k, c) in &self.terms {
            if c.norm() > tol {
                out.insert(k.clone(), *c);
            }
        }
        out
    }

    /// Taylor jet at `point` over all `dim * blocks` variables.
    pub fn jet(&self, space: &Arc<JetSpace>, point: &[f64]) -> Jet {
        let order = space.order();
        let mut acc = Jet::zero(space);
        let nv = self.dim * self.blocks;
        for (k, c) in &self.terms {
            let mut factors = Vec::with_capacity(nv);
            for (v, (&p, &x)) in k.powers.iter().zip(point).enumerate() {
                let w = k.widths[v / self.dim];
                let mono = monomial_series(p as usize, x, order);
                let gauss = gaussian_series(w, x, order);
                factors.push(convolve(&mono, &gauss, order));
            }
            acc.add_scaled(&Jet::separable(space, &factors), *c);
        }
        acc
    }
}

fn convolve(a: &[Complex64], b: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; order + 1];
    for (i, x) in a.iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let x = TermExpr::coordinate(1, 1, 0, 0);
        let e = x.add(&x).sub(&x.scale(c(2.0)));
        assert!(e.is_zero());
    }

    #[test]
    fn derivative_of_x_gauss() {
        // ∂(x e^{-x²}) = (1 - 2x²) e^{-x²}
        let f = TermExpr::monomial(1, 1, c(1.0), vec![1], vec![1.0]).unwrap();
        let df = f.partial(0, 0);
        for x in [-1.3f64, 0.0, 0.4, 2.0] {
            let expected = (1.0 - 2.0 * x * x) * (-x * x).exp();
            assert_relative_eq!(df.eval(&[x]).re, expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn merge_restricts_to_diagonal() {
        let y = TermExpr::monomial(1, 2, c(1.0), vec![1, 2], vec![0.5, 0.25]).unwrap();
        let m = y.merge(1, 0);
        assert_eq!(m.blocks(), 1);
        assert_relative_eq!(m.eval(&[0.7]).re, y.eval(&[0.7, 0.7]).re, epsilon = 1e-15);
    }

    #[test]
    fn gaussian_fourier_transform() {
        // ∫ e^{-x²/2} e^{-ixξ} dx = √(2π) e^{-ξ²/2}
        let g = TermExpr::monomial(1, 1, c(1.0), vec![0], vec![0.5]).unwrap();
        let gh = g.fourier(0, -1.0).unwrap();
        for &xi in &[0.0, 0.8, -1.7] {
            assert_relative_eq!(gh.eval(&[xi]).re, (2.0 * PI).sqrt() * (-xi * xi / 2.0f64).exp(), epsilon = 1e-14);
        }
        // x e^{-x²/2} ↦ -i√(2π) ξ e^{-ξ²/2}
        let f = TermExpr::monomial(1, 1, c(1.0), vec![1], vec![0.5]).unwrap();
        let fh = f.fourier(0, -1.0).unwrap();
        let v = fh.eval(&[0.9]);
        assert_relative_eq!(v.im, -(2.0 * PI).sqrt() * 0.9 * (-0.81f64 / 2.0).exp(), epsilon = 1e-14);
        assert!(v.re.abs() < 1e-15);
    }

    #[test]
    fn jet_matches_exact_derivatives() {
        let f = TermExpr::monomial(2, 1, c(1.5), vec![2, 1], vec![0.3]).unwrap();
        let space = JetSpace::new(2, 4);
        let p = [0.4, -0.9];
        let j = f.jet(&space, &p);
        for gamma in space.indices() {
            let exact = f.partial_multi(0, gamma).eval(&p);
            let got = j.derivative(gamma);
            assert!((exact - got).norm() <= 1e-12 * (1.0 + exact.norm()), "{gamma:?}");
        }
    }
}
