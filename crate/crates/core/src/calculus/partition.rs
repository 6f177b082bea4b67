use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::region_threshold;
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use crate::sampling::{direction, rng};
use crate::symbols::{ln_bracket, DEFAULT_ORDER_CAP};
use crate::weights::WeightFunction;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `e^{-1/u²}` for `u > 0`, zero otherwise.
fn glue(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / (u * u)).exp()
    }
}

fn glue_jet(u: &Jet) -> Jet {
    u.recip().powi(2).scale(c(-1.0)).exp()
}

/// Radial profile of `Φ`: 1 on `[0, 2]`, 0 on `[3, ∞)`, and the smooth
/// transition `S(3 − v)` with `S(u) = f(u) / (f(u) + f(1 − u))` between.
pub fn phi_profile(v: f64) -> f64 {
    if v <= 2.0 {
        1.0
    } else if v >= 3.0 {
        0.0
    } else {
        let u = 3.0 - v;
        let (f, g) = (glue(u), glue(1.0 - u));
        f / (f + g)
    }
}

/// Jet of `z ↦ Φ(z / a)` at `z`.
fn phi_jet(space: &Arc<JetSpace>, z: &[f64], a: f64) -> Jet {
    let v = z.iter().map(|t| t * t).sum::<f64>().sqrt() / a;
    if v <= 2.0 {
        return Jet::constant(space, c(1.0));
    }
    if v >= 3.0 {
        return Jet::zero(space);
    }
    let mut r2 = Jet::zero(space);
    for (i, &zi) in z.iter().enumerate() {
        let t = Jet::variable(space, i, zi);
        r2.add_assign(&t.mul(&t));
    }
    let u = r2.sqrt().scale(c(-1.0 / a)).add_const(c(3.0));
    let f = glue_jet(&u);
    let g = glue_jet(&u.scale(c(-1.0)).add_const(c(1.0)));
    f.mul(&f.add(&g).recip())
}

/// How the block boundaries `j_1 < j_2 < ...` are chosen.
#[derive(Debug, Clone)]
pub enum JRule {
    /// `j_1 = 1`; for `n ≥ 2` the smallest `j_n ≥ max(n², j_{n−1}+1)` with `(n/j)φ*(j/n) ≥ n`.
    Default,
    /// A user sequence starting at `j_1 = 1`, checked against the same inequality.
    Explicit(Vec<usize>),
}

/// The cutoffs `Ψ_{j,n} = 1 − Φ(z / A_{n,j})`, `A_{n,j} = R e^{(n/j)φ*(j/n)}`,
/// for `j_n ≤ j < j_{n+1}` and `1 ≤ j ≤ j_max`.
#[derive(Debug, Clone)]
pub struct PartitionFamily {
    dim: usize,
    weight: WeightFunction,
    r: f64,
    rho: f64,
    j_seq: Vec<usize>,
    j_max: usize,
    radii: Vec<f64>,
    blocks: Vec<usize>,
}

pub fn build_partition(
    dim: usize,
    w: &WeightFunction,
    r: f64,
    rho: f64,
    rule: &JRule,
    j_max: usize,
) -> Result<PartitionFamily> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::Domain(format!("R must be ≥ 1, got {r}")));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Domain(format!("ρ must lie in (0, 1], got {rho}")));
    }
    let j_seq = match rule {
        JRule::Default => {
            let mut seq = vec![1];
            let mut n = 1;
            while *seq.last().unwrap() <= j_max {
                n += 1;
                let mut j = (n * n).max(seq[n - 2] + 1);
                while region_threshold(w, n, j) < n as f64 {
                    j += 1;
                }
                seq.push(j);
            }
            seq
        }
        JRule::Explicit(seq) => {
            if seq.first() != Some(&1) {
                return Err(Error::Config("the block sequence must start with j_1 = 1".into()));
            }
            if let Some(p) = seq.windows(2).position(|v| v[1] <= v[0]) {
                return Err(Error::Config(format!("block sequence not strictly increasing at position {}", p + 2)));
            }
            for (i, &j) in seq.iter().enumerate().skip(1) {
                let n = i + 1;
                if region_threshold(w, n, j) < n as f64 {
                    return Err(Error::Config(format!("j_{n} = {j} violates (n/j)φ*(j/n) ≥ n")));
                }
            }
            if *seq.last().unwrap() <= j_max {
                return Err(Error::Config(format!("block sequence must extend beyond j_max = {j_max}")));
            }
            seq.clone()
        }
    };
    let mut radii = vec![r];
    let mut blocks = vec![0];
    for j in 1..=j_max {
        let n = j_seq.iter().rposition(|&s| s <= j).unwrap() + 1;
        blocks.push(n);
        radii.push(r * region_threshold(w, n, j).exp());
    }
    Ok(PartitionFamily { dim, weight: w.clone(), r, rho, j_seq, j_max, radii, blocks })
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportReport {
    pub points: usize,
    pub pairs_checked: usize,
    /// `(z, j)` with `Ψ_j(z) ≠ 0`.
    pub nonzero: usize,
    /// `(z, j)` where some derivative of `Ψ_j` is nonzero.
    pub derivative_support: usize,
    pub violations_nonzero: usize,
    pub violations_derivative: usize,
    pub witness: Option<(usize, Vec<f64>)>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivativeBoundReport {
    pub ks: Vec<usize>,
    pub order_cap: usize,
    pub grid: (usize, usize),
    pub refined_grid: (usize, usize),
    pub constants: Vec<f64>,
    pub refined_constants: Vec<f64>,
    pub max_relative_change: f64,
    pub stable: bool,
}

impl PartitionFamily {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// `j_1, j_2, ...`, ending with the first entry beyond `j_max`.
    pub fn block_starts(&self) -> &[usize] {
        &self.j_seq
    }

    /// The block `n` with `j_n ≤ j < j_{n+1}`.
    pub fn block(&self, j: usize) -> usize {
        self.blocks[j]
    }

    /// `A_{n,j}` for the block containing `j ≥ 1`.
    pub fn cutoff_radius(&self, j: usize) -> f64 {
        self.radii[j]
    }

    fn check_j(&self, j: usize) {
        assert!(j >= 1 && j <= self.j_max, "cutoff index {j} outside 1..={}", self.j_max);
    }

    pub fn psi(&self, j: usize, z: &[f64]) -> f64 {
        self.check_j(j);
        let v = z.iter().map(|t| t * t).sum::<f64>().sqrt() / self.radii[j];
        1.0 - phi_profile(v)
    }

    pub fn psi_jet(&self, j: usize, space: &Arc<JetSpace>, z: &[f64]) -> Jet {
        self.check_j(j);
        phi_jet(space, z, self.radii[j]).scale(c(-1.0)).add_const(c(1.0))
    }

    /// Whether `Ψ_j` is nonzero somewhere near `z`, i.e. `|z| > 2A`.
    pub fn is_active(&self, j: usize, z: &[f64]) -> bool {
        z.iter().map(|t| t * t).sum::<f64>().sqrt() > 2.0 * self.radii[j]
    }

    /// Samples `count` points concentrated around the cutoff annuli and
    /// checks both support facts for every `j` at every point.
    pub fn check_support(&self, count: usize, seed: u64) -> SupportReport {
        let mut g = rng(seed);
        let nv = 2 * self.dim;
        let space = JetSpace::new(nv, 2);
        let a_max = self.radii[1..].iter().copied().fold(self.r, f64::max);
        let mut rep = SupportReport {
            points: count,
            pairs_checked: 0,
            nonzero: 0,
            derivative_support: 0,
            violations_nonzero: 0,
            violations_derivative: 0,
            witness: None,
            holds: true,
        };
        for i in 0..count {
            let radius = if i % 4 == 0 || self.j_max == 0 {
                g.gen_range(0.0..4.0 * a_max)
            } else {
                let j = g.gen_range(1..=self.j_max);
                self.radii[j] * g.gen_range(1.8..3.2)
            };
            let z: Vec<f64> = direction(&mut g, nv).into_iter().map(|t| t * radius).collect();
            let lb = ln_bracket(&z).exp();
            for j in 1..=self.j_max {
                rep.pairs_checked += 1;
                let a = self.radii[j];
                if self.psi(j, &z) != 0.0 {
                    rep.nonzero += 1;
                    if lb <= 2.0 * a {
                        rep.violations_nonzero += 1;
                        rep.witness.get_or_insert((j, z.clone()));
                    }
                }
                let jet = self.psi_jet(j, &space, &z);
                if jet.coeffs()[1..].iter().any(|v| v.norm() != 0.0) {
                    rep.derivative_support += 1;
                    if !(2.0 * a <= lb && lb <= 10f64.sqrt() * a) {
                        rep.violations_derivative += 1;
                        rep.witness.get_or_insert((j, z.clone()));
                    }
                }
            }
        }
        rep.holds = rep.violations_nonzero == 0 && rep.violations_derivative == 0;
        rep
    }

    /// Minimal `C_k` with `|∂^γ Ψ_j| ≤ C_k (√10/⟨z⟩)^{ρ|γ|} e^{kρφ*(|γ|/k)}` over
    /// `2A ≤ |z| ≤ 3A`, all `j ≤ j_max` and `|γ| ≤ order_cap`.
    fn bound_constants(&self, ks: &[usize], order_cap: usize, radial: usize, dirs: &[Vec<f64>]) -> Vec<f64> {
        let nv = 2 * self.dim;
        let space = JetSpace::new(nv, order_cap);
        let rho = self.rho;
        let mut best = vec![f64::NEG_INFINITY; ks.len()];
        let pen: Vec<Vec<f64>> = ks
            .iter()
            .map(|&k| (0..=order_cap).map(|o| k as f64 * rho * self.weight.phi_star(o as f64 / k as f64)).collect())
            .collect();
        for i in 1..radial {
            let s = 2.0 + i as f64 / radial as f64;
            for dir in dirs {
                let v: Vec<f64> = dir.iter().map(|t| t * s).collect();
                let jet = phi_jet(&space, &v, 1.0);
                let mut ln_max = vec![f64::NEG_INFINITY; order_cap + 1];
                ln_max[0] = (1.0 - jet.value().re).abs().ln();
                for (gamma, mag) in jet.derivative_magnitudes() {
                    let o: usize = gamma.iter().sum();
                    if o > 0 && mag > 0.0 {
                        ln_max[o] = ln_max[o].max(mag.ln());
                    }
                }
                for j in 1..=self.j_max {
                    let a = self.radii[j];
                    let lb = 0.5 * (a * a * s * s).ln_1p() - 0.5 * 10f64.ln();
                    for (o, &l) in ln_max.iter().enumerate() {
                        if l == f64::NEG_INFINITY {
                            continue;
                        }
                        let base = l - o as f64 * a.ln() + rho * o as f64 * lb;
                        for (b, p) in best.iter_mut().zip(&pen) {
                            *b = b.max(base - p[o]);
                        }
                    }
                }
            }
        }
        best.into_iter().map(f64::exp).collect()
    }

    /// `C_k` on a `radial × directions` grid of the transition annulus and on
    /// the nested grid refined twice in each direction.
    pub fn derivative_bounds(
        &self,
        ks: &[usize],
        order_cap: usize,
        radial: usize,
        directions: usize,
        seed: u64,
    ) -> Result<DerivativeBoundReport> {
        if order_cap > DEFAULT_ORDER_CAP {
            return Err(Error::Resource(format!("order cap {order_cap} exceeds {DEFAULT_ORDER_CAP}")));
        }
        if ks.is_empty() || ks.contains(&0) || self.j_max == 0 {
            return Err(Error::Config("derivative bounds need positive k values and j_max ≥ 1".into()));
        }
        let nv = 2 * self.dim;
        let mut dirs: Vec<Vec<f64>> = (0..nv)
            .map(|i| {
                let mut e = vec![0.0; nv];
                e[i] = 1.0;
                e
            })
            .collect();
        dirs.push(vec![1.0 / (nv as f64).sqrt(); nv]);
        let mut g = rng(seed);
        while dirs.len() < 2 * directions {
            dirs.push(direction(&mut g, nv));
        }
        let coarse = self.bound_constants(ks, order_cap, radial, &dirs[..directions.max(nv + 1)]);
        let fine = self.bound_constants(ks, order_cap, 2 * radial, &dirs);
        let max_relative_change =
            coarse.iter().zip(&fine).map(|(a, b)| ((b - a) / a).abs()).fold(0.0, f64::max);
        Ok(DerivativeBoundReport {
            ks: ks.to_vec(),
            order_cap,
            grid: (radial, directions.max(nv + 1)),
            refined_grid: (2 * radial, dirs.len()),
            constants: coarse,
            refined_constants: fine,
            max_relative_change,
            stable: max_relative_change <= 0.05,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(j_max: usize) -> PartitionFamily {
        build_partition(1, &WeightFunction::gevrey(0.5).unwrap(), 1.0, 1.0, &JRule::Default, j_max).unwrap()
    }

    #[test]
    fn profile_plateaus_and_symmetry() {
        assert_eq!(phi_profile(0.0), 1.0);
        assert_eq!(phi_profile(2.0), 1.0);
        assert_eq!(phi_profile(3.0), 0.0);
        assert_eq!(phi_profile(7.0), 0.0);
        // S(u) + S(1 − u) = 1, so Φ(2.5) = 1/2 and Φ(2 + t) + Φ(3 − t) = 1.
        assert!((phi_profile(2.5) - 0.5).abs() < 1e-15);
        for t in [0.1, 0.2, 0.37, 0.45] {
            assert!((phi_profile(2.0 + t) + phi_profile(3.0 - t) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn jet_matches_finite_differences() {
        let space = JetSpace::new(2, 2);
        let z = [0.9, 2.1];
        let a = 1.0;
        let jet = phi_jet(&space, &z, a);
        let f = |p: [f64; 2]| phi_profile((p[0] * p[0] + p[1] * p[1]).sqrt() / a);
        let h = 1e-5;
        let dx = (f([z[0] + h, z[1]]) - f([z[0] - h, z[1]])) / (2.0 * h);
        let dxy = (f([z[0] + h, z[1] + h]) - f([z[0] + h, z[1] - h]) - f([z[0] - h, z[1] + h])
            + f([z[0] - h, z[1] - h]))
            / (4.0 * h * h);
        assert!((jet.value().re - f(z)).abs() < 1e-14);
        assert!((jet.derivative(&[1, 0]).re - dx).abs() < 1e-7);
        assert!((jet.derivative(&[1, 1]).re - dxy).abs() < 1e-4);
    }

    #[test]
    fn default_blocks_satisfy_growth_rule() {
        let f = family(60);
        let w = WeightFunction::gevrey(0.5).unwrap();
        let seq = f.block_starts();
        assert_eq!(seq[0], 1);
        for (i, &j) in seq.iter().enumerate().skip(1) {
            let n = i + 1;
            assert!(j >= n * n && j > seq[i - 1]);
            assert!(region_threshold(&w, n, j) >= n as f64);
            assert!(region_threshold(&w, n, j - 1) < n as f64 || j - 1 < n * n || j - 1 == seq[i - 1]);
        }
        assert!(*seq.last().unwrap() > 60);
    }

    #[test]
    fn radii_monotone_within_blocks() {
        let f = family(40);
        for j in 1..40 {
            if f.block(j) == f.block(j + 1) {
                assert!(f.cutoff_radius(j) <= f.cutoff_radius(j + 1));
            }
            assert!(f.cutoff_radius(j) >= 1.0);
        }
    }

    #[test]
    fn explicit_sequences_validated() {
        let w = WeightFunction::gevrey(0.5).unwrap();
        let bad_start = build_partition(1, &w, 1.0, 1.0, &JRule::Explicit(vec![2, 8, 30]), 5);
        assert!(matches!(bad_start, Err(Error::Config(_))));
        let too_small = build_partition(1, &w, 1.0, 1.0, &JRule::Explicit(vec![1, 4, 30]), 5);
        assert!(matches!(too_small, Err(Error::Config(_))));
        assert!(build_partition(1, &w, 1.0, 1.0, &JRule::Explicit(vec![1, 8, 30]), 5).is_ok());
    }

    #[test]
    fn cutoffs_vanish_inside_and_equal_one_outside() {
        let f = family(10);
        for j in 1..=10 {
            let a = f.cutoff_radius(j);
            assert_eq!(f.psi(j, &[2.0 * a * 0.6, 2.0 * a * 0.8]), 0.0);
            assert_eq!(f.psi(j, &[0.0, 3.0 * a * 1.0001]), 1.0);
            assert_eq!(f.psi(j, &[0.0, 0.0]), 0.0);
        }
    }

    #[test]
    fn support_facts_on_sample() {
        let r = family(12).check_support(2000, 5);
        assert!(r.holds, "{r:?}");
        assert!(r.nonzero > 0 && r.derivative_support > 0);
    }

    #[test]
    fn derivative_constants_finite() {
        let r = family(6).derivative_bounds(&[1, 2, 4], 6, 12, 6, 1).unwrap();
        assert!(r.constants.iter().all(|c| c.is_finite() && *c >= 1.0));
        assert!(r.refined_constants.iter().zip(&r.constants).all(|(f, c)| f >= c));
    }
}
