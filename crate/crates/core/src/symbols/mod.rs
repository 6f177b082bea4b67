//! Exact symbols `p(x, ξ)` and amplitudes `a(x, y, ξ)` built from
//! Gaussian-times-polynomial terms, and sampled checks of their class estimates.

mod class;

pub(crate) use class::ln_bracket;
pub use class::{
    check_amplitude_class, check_symbol_class, class_grid, ClassReport, ClassRow, DerivativeProfile, SymbolJets,
    DEFAULT_ORDER_CAP,
};

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_spaces::{TestFunction, TestFunctionInput};
use crate::jet::{Jet, JetSpace};
use crate::terms::TermExpr;

const X: usize = 0;
const XI: usize = 1;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_order(total: usize, cap: usize) -> Result<()> {
    if total > cap {
        Err(Error::Resource(format!("derivative order {total} exceeds the cap {cap}")))
    } else {
        Ok(())
    }
}

fn check_width(w: f64) -> Result<()> {
    if w >= 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Gaussian widths must be finite and ≥ 0, got {w}")))
    }
}

/// `Σ c · x^μ ξ^ν e^{-s|x|²} e^{-t|ξ|²}` on `R^d × R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolExpr(TermExpr);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolTerm {
    pub c_re: f64,
    #[serde(default)]
    pub c_im: f64,
    pub mu: Vec<u32>,
    pub nu: Vec<u32>,
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub t: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolJson {
    pub dim: usize,
    pub terms: Vec<SymbolTerm>,
}

impl SymbolExpr {
    pub fn zero(dim: usize) -> Self {
        SymbolExpr(TermExpr::zero(dim, 2))
    }

    pub fn constant(dim: usize, value: Complex64) -> Self {
        SymbolExpr(TermExpr::constant(dim, 2, value))
    }

    pub fn term(dim: usize, coeff: Complex64, mu: Vec<u32>, nu: Vec<u32>, s: f64, t: f64) -> Result<Self> {
        check_width(s)?;
        check_width(t)?;
        if mu.len() != dim || nu.len() != dim {
            return Err(Error::Dimension { expected: dim, found: mu.len().max(nu.len()) });
        }
        let powers = mu.into_iter().chain(nu).collect();
        Ok(SymbolExpr(TermExpr::monomial(dim, 2, coeff, powers, vec![s, t])?))
    }

    /// The coordinate `x_i`.
    pub fn x(dim: usize, i: usize) -> Self {
        SymbolExpr(TermExpr::coordinate(dim, 2, X, i))
    }

    /// The coordinate `ξ_i`.
    pub fn xi(dim: usize, i: usize) -> Self {
        SymbolExpr(TermExpr::coordinate(dim, 2, XI, i))
    }

    /// `e^{-|x|²-|ξ|²}`.
    pub fn gaussian(dim: usize) -> Self {
        Self::term(dim, c(1.0), vec![0; dim], vec![0; dim], 1.0, 1.0).expect("valid term")
    }

    /// Symbol of `Σ a_γ(x) D^γ`: `(2π)^{-d} Σ a_γ(x) ξ^γ`.
    pub fn differential(dim: usize, coeffs: &[(Vec<u32>, TestFunction)]) -> Result<Self> {
        let norm = (2.0 * PI).powi(-(dim as i32));
        let mut acc = Self::zero(dim);
        for (gamma, a) in coeffs {
            if gamma.len() != dim || a.dim() != dim {
                return Err(Error::Dimension { expected: dim, found: gamma.len() });
            }
            let mono = Self::term(dim, c(norm), vec![0; dim], gamma.clone(), 0.0, 0.0)?;
            acc = acc.add(&Self::from_x_function(a).mul(&mono));
        }
        Ok(acc)
    }

    /// Constant-coefficient symbol `(2π)^{-d} Σ b_γ ξ^γ`.
    pub fn constant_coefficient(dim: usize, coeffs: &[(Vec<u32>, f64)]) -> Result<Self> {
        let norm = (2.0 * PI).powi(-(dim as i32));
        let mut acc = Self::zero(dim);
        for (gamma, b) in coeffs {
            acc = acc.add(&Self::term(dim, c(norm * b), vec![0; dim], gamma.clone(), 0.0, 0.0)?);
        }
        Ok(acc)
    }

    /// `f(x)` regarded as a symbol independent of ξ.
    pub fn from_x_function(f: &TestFunction) -> Self {
        SymbolExpr(f.expr().extend_blocks(1))
    }

    /// `g(ξ)` regarded as a symbol independent of x.
    pub fn from_xi_function(g: &TestFunction) -> Self {
        SymbolExpr(g.expr().extend_blocks(1).permute_blocks(&[1, 0]))
    }

    pub fn from_expr(e: TermExpr) -> Result<Self> {
        if e.blocks() != 2 {
            return Err(Error::Config(format!("symbols have two variable blocks, got {}", e.blocks())));
        }
        Ok(SymbolExpr(e))
    }

    pub fn from_json_value(j: SymbolJson) -> Result<Self> {
        let mut acc = Self::zero(j.dim);
        for t in j.terms {
            acc = acc.add(&Self::term(j.dim, Complex64::new(t.c_re, t.c_im), t.mu, t.nu, t.s, t.t)?);
        }
        Ok(acc)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_value(serde_json::from_str(text)?)
    }

    pub fn to_json_value(&self) -> SymbolJson {
        let d = self.dim();
        let terms = self
            .0
            .iter()
            .map(|(k, v)| SymbolTerm {
                c_re: v.re,
                c_im: v.im,
                mu: k.powers[..d].to_vec(),
                nu: k.powers[d..].to_vec(),
                s: k.widths[0],
                t: k.widths[1],
            })
            .collect();
        SymbolJson { dim: d, terms }
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn expr(&self) -> &TermExpr {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        let z: Vec<f64> = x.iter().chain(xi).copied().collect();
        self.0.eval(&z)
    }

    pub fn jet(&self, space: &Arc<JetSpace>, x: &[f64], xi: &[f64]) -> Jet {
        let z: Vec<f64> = x.iter().chain(xi).copied().collect();
        self.0.jet(space, &z)
    }

    pub fn add(&self, o: &Self) -> Self {
        SymbolExpr(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        SymbolExpr(self.0.sub(&o.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SymbolExpr(self.0.scale(s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        SymbolExpr(self.0.mul(&o.0))
    }

    /// `∂_x^α ∂_ξ^β p`, exact, with `|α| + |β| ≤ 16`.
    pub fn differentiate(&self, alpha: &[usize], beta: &[usize]) -> Result<Self> {
        check_order(alpha.iter().chain(beta).sum(), DEFAULT_ORDER_CAP)?;
        Ok(SymbolExpr(self.0.partial_multi(X, alpha).partial_multi(XI, beta)))
    }

    /// `D_x^α D_ξ^β p` with `D = -i∂`, exact, with `|α| + |β| ≤ 16`.
    pub fn d(&self, alpha: &[usize], beta: &[usize]) -> Result<Self> {
        check_order(alpha.iter().chain(beta).sum(), DEFAULT_ORDER_CAP)?;
        Ok(SymbolExpr(self.0.d_multi(X, alpha).d_multi(XI, beta)))
    }

    /// `p(x, -ξ)`.
    pub fn reflect_xi(&self) -> Self {
        SymbolExpr(self.0.reflect(XI))
    }

    pub fn x_degree(&self) -> u32 {
        self.0.degree(X)
    }

    pub fn xi_degree(&self) -> u32 {
        self.0.degree(XI)
    }

    /// No Gaussian factor in ξ: the symbol is a polynomial in ξ.
    pub fn is_xi_polynomial(&self) -> bool {
        self.0.polynomial_in(XI)
    }

    pub fn has_xi_decay(&self) -> bool {
        self.0.decays_in(XI)
    }

    pub fn is_x_independent(&self) -> bool {
        self.0.independent_of(X)
    }

    /// `a(x, y, ξ) := p(x, ξ)`.
    pub fn to_amplitude(&self) -> AmplitudeExpr {
        AmplitudeExpr(self.0.extend_blocks(1).permute_blocks(&[0, 2, 1]))
    }

    /// Splits `p = Σ f_k(x) g_k(ξ)` into separable pieces, one per term.
    pub fn separable_terms(&self) -> Vec<(TermExpr, TermExpr)> {
        let d = self.dim();
        self.0
            .iter()
            .map(|(k, v)| {
                let f = TermExpr::monomial(d, 1, *v, k.powers[..d].to_vec(), vec![k.widths[0]]).unwrap();
                let g = TermExpr::monomial(d, 1, c(1.0), k.powers[d..].to_vec(), vec![k.widths[1]]).unwrap();
                (f, g)
            })
            .collect()
    }

    pub fn prune(&self, tol: f64) -> Self {
        SymbolExpr(self.0.prune(tol))
    }
}

/// `Σ c · x^μ y^η ξ^ν e^{-s|x|²} e^{-r|y|²} e^{-t|ξ|²}` on `R^{3d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeExpr(TermExpr);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeTerm {
    pub c_re: f64,
    #[serde(default)]
    pub c_im: f64,
    pub mu: Vec<u32>,
    pub eta: Vec<u32>,
    pub nu: Vec<u32>,
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub t: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeJson {
    pub dim: usize,
    pub terms: Vec<AmplitudeTerm>,
}

pub(crate) const AX: usize = 0;
pub(crate) const AY: usize = 1;
pub(crate) const AXI: usize = 2;

impl AmplitudeExpr {
    pub fn zero(dim: usize) -> Self {
        AmplitudeExpr(TermExpr::zero(dim, 3))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn term(
        dim: usize,
        coeff: Complex64,
        mu: Vec<u32>,
        eta: Vec<u32>,
        nu: Vec<u32>,
        s: f64,
        r: f64,
        t: f64,
    ) -> Result<Self> {
        for w in [s, r, t] {
            check_width(w)?;
        }
        if mu.len() != dim || eta.len() != dim || nu.len() != dim {
            return Err(Error::Dimension { expected: dim, found: mu.len().max(eta.len()).max(nu.len()) });
        }
        let powers = mu.into_iter().chain(eta).chain(nu).collect();
        Ok(AmplitudeExpr(TermExpr::monomial(dim, 3, coeff, powers, vec![s, r, t])?))
    }

    /// `e^{-s|x|² - r|y|² - t|ξ|²}`.
    pub fn gaussian(dim: usize, s: f64, r: f64, t: f64) -> Result<Self> {
        Self::term(dim, c(1.0), vec![0; dim], vec![0; dim], vec![0; dim], s, r, t)
    }

    pub fn from_expr(e: TermExpr) -> Result<Self> {
        if e.blocks() != 3 {
            return Err(Error::Config(format!("amplitudes have three variable blocks, got {}", e.blocks())));
        }
        Ok(AmplitudeExpr(e))
    }

    pub fn from_json_value(j: AmplitudeJson) -> Result<Self> {
        let mut acc = Self::zero(j.dim);
        for t in j.terms {
            acc = acc.add(&Self::term(j.dim, Complex64::new(t.c_re, t.c_im), t.mu, t.eta, t.nu, t.s, t.r, t.t)?);
        }
        Ok(acc)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_value(serde_json::from_str(text)?)
    }

    pub fn to_json_value(&self) -> AmplitudeJson {
        let d = self.dim();
        let terms = self
            .0
            .iter()
            .map(|(k, v)| AmplitudeTerm {
                c_re: v.re,
                c_im: v.im,
                mu: k.powers[..d].to_vec(),
                eta: k.powers[d..2 * d].to_vec(),
                nu: k.powers[2 * d..].to_vec(),
                s: k.widths[0],
                r: k.widths[1],
                t: k.widths[2],
            })
            .collect();
        AmplitudeJson { dim: d, terms }
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn expr(&self) -> &TermExpr {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn eval(&self, x: &[f64], y: &[f64], xi: &[f64]) -> Complex64 {
        let z: Vec<f64> = x.iter().chain(y).chain(xi).copied().collect();
        self.0.eval(&z)
    }

    pub fn add(&self, o: &Self) -> Self {
        AmplitudeExpr(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        AmplitudeExpr(self.0.sub(&o.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        AmplitudeExpr(self.0.scale(s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        AmplitudeExpr(self.0.mul(&o.0))
    }

    /// `∂_x^α ∂_y^β ∂_ξ^γ a`, exact, with `|α| + |β| + |γ| ≤ 16`.
    pub fn differentiate(&self, alpha: &[usize], beta: &[usize], gamma: &[usize]) -> Result<Self> {
        check_order(alpha.iter().chain(beta).chain(gamma).sum(), DEFAULT_ORDER_CAP)?;
        Ok(AmplitudeExpr(self.0.partial_multi(AX, alpha).partial_multi(AY, beta).partial_multi(AXI, gamma)))
    }

    /// `D_x^α D_y^β D_ξ^γ a`, exact.
    pub fn d(&self, alpha: &[usize], beta: &[usize], gamma: &[usize]) -> Result<Self> {
        check_order(alpha.iter().chain(beta).chain(gamma).sum(), DEFAULT_ORDER_CAP)?;
        Ok(AmplitudeExpr(self.0.d_multi(AX, alpha).d_multi(AY, beta).d_multi(AXI, gamma)))
    }

    /// `a(x, x, ξ)`.
    pub fn restrict_diagonal(&self) -> SymbolExpr {
        SymbolExpr(self.0.merge(AY, AX))
    }

    /// `a(y, x, -ξ)`, the amplitude of the transposed operator.
    pub fn transpose(&self) -> Self {
        AmplitudeExpr(self.0.permute_blocks(&[AY, AX, AXI]).reflect(AXI))
    }

    pub fn has_xi_decay(&self) -> bool {
        self.0.decays_in(AXI)
    }

    pub fn is_y_independent(&self) -> bool {
        self.0.independent_of(AY)
    }
}

/// Named built-in symbols.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuiltinSymbol {
    /// `Σ a_γ(x) D^γ` with coefficients given as test-function term lists.
    Differential { dim: usize, coeffs: Vec<DifferentialCoeff> },
    Gaussian { dim: usize },
    /// Truncated Taylor polynomial of the Gevrey canonical product `G(D)`.
    UltradiffConstcoef { dim: usize, d: f64, factors: usize, degree: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DifferentialCoeff {
    pub gamma: Vec<u32>,
    pub a: TestFunctionInput,
}

pub fn builtin_symbol(kind: &BuiltinSymbol) -> Result<SymbolExpr> {
    match kind {
        BuiltinSymbol::Differential { dim, coeffs } => {
            let parsed = coeffs
                .iter()
                .map(|dc| Ok((dc.gamma.clone(), TestFunction::from_input(dc.a.clone())?)))
                .collect::<Result<Vec<_>>>()?;
            SymbolExpr::differential(*dim, &parsed)
        }
        BuiltinSymbol::Gaussian { dim } => Ok(SymbolExpr::gaussian(*dim)),
        BuiltinSymbol::UltradiffConstcoef { dim, d, factors, degree } => {
            let g = crate::entire::CanonicalProduct::gevrey(*d, *factors)?;
            let a = g.taylor_coefficients(*degree / 2)?;
            // G(ξ) = Σ a_n |ξ|^{2n}, expanded through repeated products of |ξ|².
            let mut r2 = SymbolExpr::zero(*dim);
            for i in 0..*dim {
                r2 = r2.add(&SymbolExpr::xi(*dim, i).mul(&SymbolExpr::xi(*dim, i)));
            }
            let norm = (2.0 * PI).powi(-(*dim as i32));
            let mut power = SymbolExpr::constant(*dim, c(1.0));
            let mut acc = SymbolExpr::zero(*dim);
            for an in a {
                acc = acc.add(&power.scale(c(norm * an)));
                power = power.mul(&r2);
            }
            Ok(acc)
        }
    }
}
