//! Test functions in 𝒮_ω (Gaussian-times-polynomial sums), sampled grid
//! functions, Fourier transforms and the |·|_λ seminorms.

mod grid;
mod seminorm;

pub use grid::{GridFunction, GridSpec, Space};
pub use seminorm::{
    box_points, check_s_omega_membership, seminorm_lambda, MembershipReport, MembershipRow, SeminormReport,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::terms::TermExpr;

/// `Σ c · x^μ · e^{-s|x|²}` on `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction(TermExpr);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestTerm {
    pub c_re: f64,
    #[serde(default)]
    pub c_im: f64,
    pub mu: Vec<u32>,
    pub s: f64,
}

/// Accepted external encodings; only term lists have an exact representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TestFunctionInput {
    Terms { dim: usize, terms: Vec<TestTerm> },
    Tabulated { dim: usize, x: Vec<f64>, values: Vec<f64> },
}

impl TestFunction {
    pub fn zero(dim: usize) -> Self {
        TestFunction(TermExpr::zero(dim, 1))
    }

    /// `e^{-s|x|²}`.
    pub fn gaussian(dim: usize, s: f64) -> Result<Self> {
        Self::term(dim, Complex64::new(1.0, 0.0), vec![0; dim], s)
    }

    pub fn term(dim: usize, c: Complex64, mu: Vec<u32>, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("test-function terms need a positive Gaussian width, got {s}")));
        }
        Ok(TestFunction(TermExpr::monomial(dim, 1, c, mu, vec![s])?))
    }

    /// Wraps a one-block expression; every term must decay.
    pub fn from_expr(e: TermExpr) -> Result<Self> {
        if e.blocks() != 1 || !e.decays_in(0) {
            return Err(Error::NotRepresentable("test functions need Gaussian decay in every term".into()));
        }
        Ok(TestFunction(e))
    }

    pub fn from_input(input: TestFunctionInput) -> Result<Self> {
        match input {
            TestFunctionInput::Terms { dim, terms } => {
                let mut acc = Self::zero(dim);
                for t in terms {
                    acc = acc.add(&Self::term(dim, Complex64::new(t.c_re, t.c_im), t.mu, t.s)?);
                }
                Ok(acc)
            }
            TestFunctionInput::Tabulated { .. } => Err(Error::NotRepresentable(
                "sampled data has no Gaussian-times-polynomial representation".into(),
            )),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_input(serde_json::from_str(text)?)
    }

    pub fn to_input(&self) -> TestFunctionInput {
        let terms = self
            .0
            .iter()
            .map(|(k, c)| TestTerm { c_re: c.re, c_im: c.im, mu: k.powers.clone(), s: k.widths[0] })
            .collect();
        TestFunctionInput::Terms { dim: self.dim(), terms }
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn expr(&self) -> &TermExpr {
        &self.0
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.0.eval(x)
    }

    pub fn add(&self, other: &Self) -> Self {
        TestFunction(self.0.add(&other.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TestFunction(self.0.scale(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        TestFunction(self.0.mul(&other.0))
    }

    /// `D^α f = (-i∂)^α f`, exact.
    pub fn d(&self, alpha: &[usize]) -> Self {
        TestFunction(self.0.d_multi(0, alpha))
    }

    pub fn partial(&self, alpha: &[usize]) -> Self {
        TestFunction(self.0.partial_multi(0, alpha))
    }

    /// `f̂(ξ) = ∫ f(x) e^{-i⟨x,ξ⟩} dx`, exact; the result is a function of ξ.
    pub fn fourier(&self) -> TestFunction {
        TestFunction(self.0.fourier(0, -1.0).expect("test functions always decay"))
    }

    /// `(2π)^{-d} ∫ g(ξ) e^{i⟨x,ξ⟩} dξ`, exact.
    pub fn inverse_fourier(&self) -> TestFunction {
        let scale = (2.0 * std::f64::consts::PI).powi(-(self.dim() as i32));
        TestFunction(self.0.fourier(0, 1.0).expect("test functions always decay").scale(Complex64::new(scale, 0.0)))
    }

    /// Samples onto the physical grid of `spec`.
    pub fn sample(&self, spec: &GridSpec) -> GridFunction {
        let values = spec.points(Space::Physical).map(|x| self.eval(&x)).collect();
        GridFunction::new(*spec, Space::Physical, values).expect("grid size matches spec")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exact_transform_pairs() {
        let g = TestFunction::gaussian(1, 0.5).unwrap();
        let gh = g.fourier();
        assert!((gh.eval(&[1.1]).re - (2.0 * PI).sqrt() * (-0.605f64).exp()).abs() < 1e-14);
        let back = gh.inverse_fourier();
        for &x in &[0.0, 0.7, -2.0] {
            assert!((back.eval(&[x]) - g.eval(&[x])).norm() < 1e-14);
        }
    }

    #[test]
    fn linearity_of_transform_is_exact() {
        let f = TestFunction::term(1, Complex64::new(1.0, 0.0), vec![1], 0.5).unwrap();
        let g = TestFunction::term(1, Complex64::new(0.0, 2.0), vec![2], 1.0).unwrap();
        let a = Complex64::new(0.3, -1.0);
        let lhs = f.scale(a).add(&g).fourier();
        let rhs = f.fourier().scale(a).add(&g.fourier());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tabulated_input_is_rejected() {
        let x: Vec<f64> = (0..11).map(|i| i as f64 - 5.0).collect();
        let values = x.iter().map(|v| 1.0 / (1.0 + v * v)).collect();
        let err = TestFunction::from_input(TestFunctionInput::Tabulated { dim: 1, x, values }).unwrap_err();
        assert!(matches!(err, Error::NotRepresentable(_)));
    }

    #[test]
    fn json_round_trip() {
        let f = TestFunction::term(2, Complex64::new(1.5, -0.5), vec![1, 2], 0.75).unwrap();
        let text = serde_json::to_string(&f.to_input()).unwrap();
        assert_eq!(TestFunction::from_json(&text).unwrap(), f);
    }
}
