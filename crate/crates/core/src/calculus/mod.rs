//! Formal sums of symbols, their equivalence, the transpose and composition
//! expansions, and realization of a genuine symbol from a formal sum.

mod equivalence;
mod partition;
mod realize;

pub use equivalence::{equivalence_check, EquivReport, EquivRow, PartialSums};
pub use partition::{
    build_partition, phi_profile, DerivativeBoundReport, JRule, PartitionFamily, SupportReport,
};
pub use realize::{realize_symbol, SymbolEvaluator};

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use crate::multi_index::{multi_factorial, with_order};
use crate::symbols::{ln_bracket, AmplitudeExpr, DerivativeProfile, SymbolExpr, SymbolJson, AXI, AY};
use crate::terms::TermKey;
use crate::weights::WeightFunction;

const X: usize = 0;
const XI: usize = 1;

/// Terms `p_0, p_1, ...` of `Σ p_j` with growth `m`, reduction `ρ` and radius `R`.
///
/// Finite sums store every nonzero term; sums that did not terminate within
/// `j_max` store `p_0..=p_{j_max}` and carry the truncation flag.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSum {
    dim: usize,
    terms: Vec<SymbolExpr>,
    m: f64,
    rho: f64,
    r: f64,
    truncated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormalSumJson {
    pub terms: Vec<SymbolJson>,
    pub m: f64,
    pub rho: f64,
    #[serde(rename = "R", default = "one")]
    pub r: f64,
    #[serde(default)]
    pub truncated: bool,
    #[serde(default, skip_deserializing)]
    pub termination_index: Option<usize>,
}

fn one() -> f64 {
    1.0
}

fn validate_meta(m: f64, rho: f64, r: f64) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::Domain(format!("m must be finite, got {m}")));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Domain(format!("ρ must lie in (0, 1], got {rho}")));
    }
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::Domain(format!("R must be ≥ 1, got {r}")));
    }
    Ok(())
}

fn inv_factorial(alpha: &[usize]) -> Complex64 {
    Complex64::new(1.0 / multi_factorial(alpha), 0.0)
}

impl FormalSum {
    pub fn new(dim: usize, terms: Vec<SymbolExpr>, m: f64, rho: f64, r: f64) -> Result<Self> {
        Self::build(dim, terms, m, rho, r, false)
    }

    fn build(dim: usize, mut terms: Vec<SymbolExpr>, m: f64, rho: f64, r: f64, truncated: bool) -> Result<Self> {
        validate_meta(m, rho, r)?;
        if let Some(bad) = terms.iter().find(|t| t.dim() != dim) {
            return Err(Error::Dimension { expected: dim, found: bad.dim() });
        }
        if !truncated {
            while terms.last().is_some_and(|t| t.is_zero()) {
                terms.pop();
            }
        }
        Ok(FormalSum { dim, terms, m, rho, r, truncated })
    }

    /// A symbol regarded as the formal sum `a_0 = p`, `a_j = 0` for `j ≥ 1`.
    pub fn from_symbol(p: SymbolExpr, m: f64, rho: f64, r: f64) -> Result<Self> {
        let dim = p.dim();
        Self::new(dim, vec![p], m, rho, r)
    }

    pub fn zero(dim: usize, m: f64, rho: f64, r: f64) -> Result<Self> {
        Self::new(dim, Vec::new(), m, rho, r)
    }

    pub fn from_json_value(j: FormalSumJson) -> Result<Self> {
        let dim = j.terms.first().map(|t| t.dim).unwrap_or(1);
        let terms = j.terms.into_iter().map(SymbolExpr::from_json_value).collect::<Result<Vec<_>>>()?;
        Self::build(dim, terms, j.m, j.rho, j.r, j.truncated)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_value(serde_json::from_str(text)?)
    }

    pub fn to_json_value(&self) -> FormalSumJson {
        FormalSumJson {
            terms: self.terms.iter().map(|t| t.to_json_value()).collect(),
            m: self.m,
            rho: self.rho,
            r: self.r,
            truncated: self.truncated,
            termination_index: self.termination_index(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn terms(&self) -> &[SymbolExpr] {
        &self.terms
    }

    /// `p_j`, zero beyond the stored terms of a finite sum.
    pub fn term(&self, j: usize) -> SymbolExpr {
        self.terms.get(j).cloned().unwrap_or_else(|| SymbolExpr::zero(self.dim))
    }

    /// Largest stored index.
    pub fn j_max(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// First index from which every term vanishes, for finite sums.
    pub fn termination_index(&self) -> Option<usize> {
        (!self.truncated).then_some(self.terms.len())
    }

    /// `Σ_{j<n} p_j`.
    pub fn partial_sum(&self, n: usize) -> SymbolExpr {
        self.terms.iter().take(n).fold(SymbolExpr::zero(self.dim), |acc, t| acc.add(t))
    }

    pub fn with_radius(&self, r: f64) -> Result<Self> {
        validate_meta(self.m, self.rho, r)?;
        Ok(FormalSum { r, ..self.clone() })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if o.dim != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: o.dim });
        }
        let len = self.terms.len().max(o.terms.len());
        let terms = (0..len).map(|j| self.term(j).add(&o.term(j))).collect();
        let truncated = self.truncated || o.truncated;
        let len = if truncated { self.cut().min(o.cut()) } else { len };
        let mut s = Self::build(self.dim, terms, self.m.max(o.m), self.rho.min(o.rho), self.r.max(o.r), truncated)?;
        s.terms.truncate(len);
        Ok(s)
    }

    /// Number of trustworthy leading terms.
    fn cut(&self) -> usize {
        if self.truncated {
            self.terms.len()
        } else {
            usize::MAX
        }
    }
}

/// `Σ_{|α|=j} (1/α!) D_ξ^α ∂_y^α a(x, y, ξ)|_{y=x}` for `j ≤ j_max`, in
/// `FGS^{2m}` when `a` has growth `m`.
pub fn amplitude_reduction(a: &AmplitudeExpr, m: f64, rho: f64, r: f64, j_max: usize) -> Result<FormalSum> {
    let d = a.dim();
    let e = a.expr();
    // A monomial survives ∂_y^α D_ξ^α while α stays below its y- and ξ-exponents.
    let stop = e
        .iter()
        .map(|(k, _)| joint_order(reach(k, d, AY), reach(k, d, AXI)).map(|o| o + 1))
        .try_fold(0, |acc, s| s.map(|s| acc.max(s)));
    let last = stop.map_or(j_max, |s| s.saturating_sub(1).min(j_max));
    let mut terms = Vec::with_capacity(last + 1);
    for j in 0..=last {
        let mut acc = AmplitudeExpr::zero(d);
        for alpha in with_order(d, j) {
            let t = AmplitudeExpr::from_expr(e.partial_multi(AY, &alpha).d_multi(AXI, &alpha))?;
            acc = acc.add(&t.scale(inv_factorial(&alpha)));
        }
        terms.push(acc.restrict_diagonal());
    }
    let truncated = stop.is_none_or(|s| s > j_max + 1);
    FormalSum::build(d, terms, 2.0 * m, rho, r, truncated)
}

/// Per-coordinate exponents a derivative `α` may reach in `block` before a
/// monomial vanishes, `None` when the monomial carries a Gaussian there.
fn reach(k: &TermKey, d: usize, block: usize) -> Option<&[u32]> {
    (k.widths[block] == 0.0).then(|| &k.powers[block * d..(block + 1) * d])
}

/// Largest `|α|` with `α ≤ a` and `α ≤ b` componentwise, where a missing side
/// imposes no constraint; `None` when both are missing.
fn joint_order(a: Option<&[u32]>, b: Option<&[u32]>) -> Option<usize> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| x.min(y)).sum::<u32>() as usize),
        (Some(v), None) | (None, Some(v)) => Some(v.iter().sum::<u32>() as usize),
        (None, None) => None,
    }
}

/// Index from which every `q_j` of the transpose vanishes. A monomial
/// `x^μ ξ^ν` of `p_h` survives `∂_ξ^α D_x^α` exactly while `α ≤ μ` and `α ≤ ν`,
/// with Gaussian factors lifting their constraint. `None` when some monomial
/// is Gaussian in both variables or the sum is truncated.
pub fn transpose_termination_bound(p: &FormalSum) -> Option<usize> {
    if p.truncated {
        return None;
    }
    let d = p.dim;
    let mut acc = 0;
    for (h, t) in p.terms.iter().enumerate() {
        for (k, _) in t.expr().iter() {
            acc = acc.max(h + joint_order(reach(k, d, X), reach(k, d, XI))? + 1);
        }
    }
    Some(acc)
}

/// Index from which every `r_j` of `p∘q` vanishes: for monomials of `p_h` and
/// `q_k`, `∂_ξ^α p_h · D_x^α q_k` is nonzero exactly while `α` stays below the
/// ξ-exponents of the first and the x-exponents of the second.
pub fn compose_termination_bound(p: &FormalSum, q: &FormalSum) -> Option<usize> {
    if p.truncated || q.truncated {
        return None;
    }
    let d = p.dim;
    let mut acc = 0;
    for (h, ph) in p.terms.iter().enumerate() {
        for (k, qk) in q.terms.iter().enumerate() {
            for (kp, _) in ph.expr().iter() {
                for (kq, _) in qk.expr().iter() {
                    acc = acc.max(h + k + joint_order(reach(kp, d, XI), reach(kq, d, X))? + 1);
                }
            }
        }
    }
    Some(acc)
}

/// `q_j = Σ_{|α|+h=j} (1/α!) ∂_ξ^α D_x^α (p_h(x, −ξ))`.
pub fn transpose_formal(p: &FormalSum, j_max: usize) -> Result<FormalSum> {
    let d = p.dim;
    let stop = transpose_termination_bound(p);
    let limit = if p.truncated { p.terms.len().min(j_max + 1) } else { j_max + 1 };
    let last = stop.map_or(limit, |s| s.min(limit));
    let reflected: Vec<SymbolExpr> = p.terms.iter().map(|t| t.reflect_xi()).collect();
    let mut terms = Vec::with_capacity(last);
    for j in 0..last {
        let mut acc = SymbolExpr::zero(d);
        for (h, ph) in reflected.iter().enumerate().take(j + 1) {
            for alpha in with_order(d, j - h) {
                let t = ph.expr().d_multi(X, &alpha).partial_multi(XI, &alpha);
                acc = acc.add(&SymbolExpr::from_expr(t)?.scale(inv_factorial(&alpha)));
            }
        }
        terms.push(acc);
    }
    let truncated = stop.is_none_or(|s| s > last);
    FormalSum::build(d, terms, p.m, p.rho, p.r, truncated)
}

/// `r_j = Σ_{|α|+h+k=j} (1/α!) ∂_ξ^α p_h · D_x^α q_k`, growth `m₁ + m₂`.
/// The operator identity carries an extra factor `(2π)^d`.
pub fn compose_formal(p: &FormalSum, q: &FormalSum, j_max: usize) -> Result<FormalSum> {
    if p.dim != q.dim {
        return Err(Error::Dimension { expected: p.dim, found: q.dim });
    }
    let d = p.dim;
    let stop = compose_termination_bound(p, q);
    let limit = (j_max + 1).min(p.cut()).min(q.cut());
    let last = stop.map_or(limit, |s| s.min(limit));
    let mut terms = Vec::with_capacity(last);
    for j in 0..last {
        let mut acc = SymbolExpr::zero(d);
        for (h, ph) in p.terms.iter().enumerate().take(j + 1) {
            for (k, qk) in q.terms.iter().enumerate().take(j + 1 - h) {
                for alpha in with_order(d, j - h - k) {
                    let dp = SymbolExpr::from_expr(ph.expr().partial_multi(XI, &alpha))?;
                    if dp.is_zero() {
                        continue;
                    }
                    let dq = SymbolExpr::from_expr(qk.expr().d_multi(X, &alpha))?;
                    acc = acc.add(&dp.mul(&dq).scale(inv_factorial(&alpha)));
                }
            }
        }
        terms.push(acc);
    }
    let truncated = stop.is_none_or(|s| s > last);
    FormalSum::build(d, terms, p.m + q.m, p.rho.min(q.rho), p.r.max(q.r), truncated)
}

/// Region of the `j`-th term at level `n`: `log(⟨z⟩/R) ≥ (n/j)φ*(j/n)`.
pub(crate) fn region_threshold(w: &WeightFunction, n: usize, j: usize) -> f64 {
    if j == 0 {
        0.0
    } else {
        let t = j as f64 / n as f64;
        w.phi_star(t) / t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FormalRow {
    pub n: usize,
    /// Minimal `D_n` over all stored terms and sampled region points.
    pub d_n: f64,
    pub d_n_half_radius: f64,
    pub stable: bool,
    pub region_points: usize,
    pub witness_j: usize,
    pub witness_point: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FormalReport {
    pub weight: String,
    pub m: f64,
    pub rho: f64,
    pub radius: f64,
    pub order_cap: usize,
    pub terms: usize,
    pub rows: Vec<FormalRow>,
    pub pass: bool,
}

/// Sampled check that each `p_j` obeys the `j`-strengthened estimate on its region.
pub fn check_formal_sum(
    s: &FormalSum,
    w: &WeightFunction,
    n_list: &[usize],
    grid: &[Vec<f64>],
    order_cap: usize,
) -> Result<FormalReport> {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::Config("n list must be nonempty and contain only positive integers".into()));
    }
    let d = s.dim;
    if let Some(bad) = grid.iter().find(|z| z.len() != 2 * d) {
        return Err(Error::Dimension { expected: 2 * d, found: bad.len() });
    }
    let radius = grid.iter().map(|z| z.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let half = 0.5 * radius * (1.0 + 1e-12);
    let profiles: Vec<Vec<DerivativeProfile>> =
        s.terms.iter().map(|t| DerivativeProfile::compute(t.expr(), grid, order_cap)).collect();
    let rows = n_list
        .iter()
        .map(|&n| {
            let mut row = FormalRow {
                n,
                d_n: 0.0,
                d_n_half_radius: 0.0,
                stable: true,
                region_points: 0,
                witness_j: 0,
                witness_point: Vec::new(),
            };
            let (mut best, mut best_half) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for (j, prof) in profiles.iter().enumerate() {
                let thr = region_threshold(w, n, j);
                for p in prof {
                    let lb = ln_bracket(&p.point);
                    if lb - s.r.ln() < thr {
                        continue;
                    }
                    row.region_points += 1;
                    let inner = p.point.iter().map(|v| v * v).sum::<f64>().sqrt() <= half;
                    let g = s.m * (w.radial(&p.point[..d]) + w.radial(&p.point[d..]));
                    for (k, &l) in p.ln_max.iter().enumerate() {
                        if l == f64::NEG_INFINITY {
                            continue;
                        }
                        let kk = (k + j) as f64;
                        let v = l + s.rho * kk * lb - n as f64 * s.rho * w.phi_star(kk / n as f64) - g;
                        if v > best {
                            best = v;
                            row.witness_j = j;
                            row.witness_point = p.point.clone();
                        }
                        if inner && v > best_half {
                            best_half = v;
                        }
                    }
                }
            }
            row.d_n = best.exp();
            row.d_n_half_radius = best_half.exp();
            row.stable = row.d_n.is_finite() && row.d_n <= row.d_n_half_radius * (1.0 + 1e-6);
            row
        })
        .collect::<Vec<_>>();
    let pass = rows.iter().all(|r| r.stable);
    Ok(FormalReport {
        weight: w.name(),
        m: s.m,
        rho: s.rho,
        radius: s.r,
        order_cap,
        terms: s.terms.len(),
        rows,
        pass,
    })
}

impl PartialSums for FormalSum {
    fn dim(&self) -> usize {
        self.dim
    }

    fn meta(&self) -> (f64, f64, f64) {
        (self.m, self.rho, self.r)
    }

    fn available(&self) -> Option<usize> {
        self.truncated.then_some(self.terms.len())
    }

    fn partial_jet(&self, n: usize, space: &Arc<JetSpace>, z: &[f64]) -> Jet {
        let mut acc = Jet::zero(space);
        for t in self.terms.iter().take(n) {
            acc.add_assign(&t.expr().jet(space, z));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sym(coeff: Complex64, mu: u32, nu: u32) -> SymbolExpr {
        SymbolExpr::term(1, coeff, vec![mu], vec![nu], 0.0, 0.0).unwrap()
    }

    fn single(p: SymbolExpr) -> FormalSum {
        FormalSum::from_symbol(p, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn reduction_of_y_xi() {
        // a = yξ: p₀ = xξ and p₁ = D_ξ ∂_y (yξ) = D_ξ ξ = −i.
        let a = AmplitudeExpr::term(1, c(1.0, 0.0), vec![0], vec![1], vec![1], 0.0, 0.0, 0.0).unwrap();
        let s = amplitude_reduction(&a, 1.0, 1.0, 1.0, 8).unwrap();
        assert_eq!(s.termination_index(), Some(2));
        assert_eq!(s.term(0), sym(c(1.0, 0.0), 1, 1));
        assert_eq!(s.term(1), SymbolExpr::constant(1, c(0.0, -1.0)));
        assert_eq!(s.m(), 2.0);
    }

    #[test]
    fn reduction_of_y_independent_and_zero() {
        let a = AmplitudeExpr::gaussian(1, 1.0, 0.0, 1.0).unwrap();
        let s = amplitude_reduction(&a, 0.0, 1.0, 1.0, 6).unwrap();
        assert_eq!(s.termination_index(), Some(1));
        assert_eq!(s.term(0), a.restrict_diagonal());
        let z = amplitude_reduction(&AmplitudeExpr::zero(2), 0.0, 1.0, 1.0, 6).unwrap();
        assert_eq!(z.termination_index(), Some(0));
    }

    #[test]
    fn gaussian_reduction_is_truncated() {
        let a = AmplitudeExpr::gaussian(1, 0.1, 0.1, 0.1).unwrap();
        let s = amplitude_reduction(&a, 0.0, 1.0, 1.0, 5).unwrap();
        assert!(s.is_truncated());
        assert_eq!(s.terms().len(), 6);
        assert_eq!(s.termination_index(), None);
    }

    #[test]
    fn transpose_examples() {
        // p = ξ: q₀ = −ξ and nothing else.
        let t = transpose_formal(&single(sym(c(1.0, 0.0), 0, 1)), 8).unwrap();
        assert_eq!(t.terms(), &[sym(c(-1.0, 0.0), 0, 1)]);
        // p = xξ: ∫(xDu)v = ∫u(−xDv + iv), so q = −xξ + i.
        let t = transpose_formal(&single(sym(c(1.0, 0.0), 1, 1)), 8).unwrap();
        assert_eq!(t.term(0), sym(c(-1.0, 0.0), 1, 1));
        assert_eq!(t.term(1), SymbolExpr::constant(1, c(0.0, 1.0)));
        assert_eq!(t.termination_index(), Some(2));
        let k = SymbolExpr::constant(1, c(2.0, 0.5));
        assert_eq!(transpose_formal(&single(k.clone()), 8).unwrap().terms(), &[k]);
    }

    #[test]
    fn compose_leibniz() {
        // D(xu) = xDu − iu: r₀ = xξ, r₁ = −i.
        let r = compose_formal(&single(sym(c(1.0, 0.0), 0, 1)), &single(sym(c(1.0, 0.0), 1, 0)), 8).unwrap();
        assert_eq!(r.terms(), &[sym(c(1.0, 0.0), 1, 1), SymbolExpr::constant(1, c(0.0, -1.0))]);
        assert_eq!(r.m(), 2.0);
    }

    #[test]
    fn compose_identities() {
        let p = single(
            SymbolExpr::term(1, c(1.5, -0.5), vec![2], vec![3], 0.5, 0.0)
                .unwrap()
                .add(&sym(c(0.25, 0.0), 1, 1)),
        );
        let one = single(SymbolExpr::constant(1, c(1.0, 0.0)));
        assert_eq!(compose_formal(&p, &one, 8).unwrap().terms(), p.terms());
        assert_eq!(compose_formal(&one, &p, 8).unwrap().terms(), p.terms());
    }

    #[test]
    fn compose_termination_index_by_degree() {
        // ξ-degree 3 against a Gaussian-in-x symbol terminates after index 3.
        let p = single(sym(c(1.0, 0.0), 1, 3));
        let q = single(SymbolExpr::term(1, c(1.0, 0.0), vec![2], vec![1], 1.0, 0.0).unwrap());
        let r = compose_formal(&p, &q, 10).unwrap();
        assert_eq!(r.termination_index(), Some(4));
        assert!(!r.term(3).is_zero());
    }

    #[test]
    fn termination_needs_both_powers_in_one_monomial() {
        // x² + ξ²: no monomial carries both x and ξ, so the transpose stops at q₀.
        let p = single(sym(c(1.0, 0.0), 2, 0).add(&sym(c(1.0, 0.0), 0, 2)));
        assert_eq!(transpose_termination_bound(&p), Some(1));
        assert_eq!(transpose_formal(&p, 8).unwrap().termination_index(), Some(1));
        // ξ₁² after x₂²: the derivatives act on different coordinates.
        let xi1 = single(SymbolExpr::term(2, c(1.0, 0.0), vec![0, 0], vec![2, 0], 0.0, 0.0).unwrap());
        let x2 = single(SymbolExpr::term(2, c(1.0, 0.0), vec![0, 2], vec![0, 0], 0.0, 0.0).unwrap());
        assert_eq!(compose_termination_bound(&xi1, &x2), Some(1));
        assert_eq!(compose_formal(&xi1, &x2, 8).unwrap().termination_index(), Some(1));
    }

    #[test]
    fn compose_of_nonterminating_is_truncated() {
        let g = single(SymbolExpr::gaussian(1));
        let r = compose_formal(&g, &g, 4).unwrap();
        assert!(r.is_truncated());
        assert_eq!(r.terms().len(), 5);
    }

    #[test]
    fn json_round_trip() {
        let s = FormalSum::new(1, vec![sym(c(1.0, 2.0), 1, 0), sym(c(0.0, 1.0), 0, 2)], 1.0, 0.5, 2.0).unwrap();
        let text = serde_json::to_string(&s.to_json_value()).unwrap();
        assert!(text.contains("\"R\":2.0"));
        assert_eq!(FormalSum::from_json(&text).unwrap(), s);
    }

    #[test]
    fn metadata_validated() {
        assert!(matches!(FormalSum::zero(1, 0.0, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(FormalSum::zero(1, 0.0, 1.0, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn formal_class_check_on_reduced_gaussian() {
        let w = WeightFunction::gevrey(0.5).unwrap();
        let a = AmplitudeExpr::gaussian(1, 0.05, 0.05, 0.05).unwrap();
        let s = amplitude_reduction(&a, 0.0, 1.0, 1.0, 6).unwrap();
        let grid = crate::symbols::class_grid(2, 400, 256.0, 3);
        let r = check_formal_sum(&s, &w, &[1, 2, 4], &grid, 6).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
