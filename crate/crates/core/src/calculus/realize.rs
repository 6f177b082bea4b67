use std::sync::Arc;

use num_complex::Complex64;

use super::{FormalSum, PartialSums, PartitionFamily};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use crate::symbols::SymbolJets;

/// `a = p_0 + Σ_{j≥1} Ψ_{j,n(j)} p_j`, evaluated lazily per point.
#[derive(Debug, Clone)]
pub struct SymbolEvaluator {
    sum: FormalSum,
    family: PartitionFamily,
}

pub fn realize_symbol(s: &FormalSum, f: &PartitionFamily) -> Result<SymbolEvaluator> {
    if s.dim() != f.dim() {
        return Err(Error::Dimension { expected: s.dim(), found: f.dim() });
    }
    if s.j_max() > f.j_max() && s.terms().len() > 1 {
        return Err(Error::Config(format!(
            "partition covers j ≤ {} but the sum has terms up to {}",
            f.j_max(),
            s.j_max()
        )));
    }
    Ok(SymbolEvaluator { sum: s.clone(), family: f.clone() })
}

impl SymbolEvaluator {
    pub fn sum(&self) -> &FormalSum {
        &self.sum
    }

    pub fn family(&self) -> &PartitionFamily {
        &self.family
    }

    /// Value at `(x, ξ)` and the number of terms with `φ_j(x, ξ) ≠ 0`.
    pub fn eval_counted(&self, x: &[f64], xi: &[f64]) -> (Complex64, usize) {
        let z: Vec<f64> = x.iter().chain(xi).copied().collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut active = 0;
        for (j, t) in self.sum.terms().iter().enumerate() {
            let phi = if j == 0 { 1.0 } else { self.family.psi(j, &z) };
            if phi != 0.0 {
                active += 1;
                acc += t.expr().eval(&z) * phi;
            }
        }
        (acc, active)
    }

    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        self.eval_counted(x, xi).0
    }
}

impl SymbolJets for SymbolEvaluator {
    fn dim(&self) -> usize {
        self.sum.dim()
    }

    fn jet_at(&self, space: &Arc<JetSpace>, z: &[f64]) -> Jet {
        let mut acc = Jet::zero(space);
        for (j, t) in self.sum.terms().iter().enumerate() {
            if j == 0 {
                acc.add_assign(&t.expr().jet(space, z));
            } else if self.family.is_active(j, z) {
                acc.add_assign(&self.family.psi_jet(j, space, z).mul(&t.expr().jet(space, z)));
            }
        }
        acc
    }
}

/// The realized symbol regarded as the formal sum `a_0 = a`, `a_j = 0` otherwise.
impl PartialSums for SymbolEvaluator {
    fn dim(&self) -> usize {
        self.sum.dim()
    }

    fn meta(&self) -> (f64, f64, f64) {
        (self.sum.m(), self.sum.rho(), self.sum.radius())
    }

    fn available(&self) -> Option<usize> {
        None
    }

    fn partial_jet(&self, n: usize, space: &Arc<JetSpace>, z: &[f64]) -> Jet {
        if n == 0 {
            Jet::zero(space)
        } else {
            self.jet_at(space, z)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{amplitude_reduction, build_partition, JRule};
    use super::*;
    use crate::symbols::{check_symbol_class, class_grid, AmplitudeExpr, SymbolExpr};
    use crate::weights::WeightFunction;

    fn gevrey() -> WeightFunction {
        WeightFunction::gevrey(0.5).unwrap()
    }

    #[test]
    fn single_term_sum_is_p0() {
        let p = SymbolExpr::gaussian(1).add(&SymbolExpr::x(1, 0));
        let s = FormalSum::from_symbol(p.clone(), 1.0, 1.0, 1.0).unwrap();
        let f = build_partition(1, &gevrey(), 1.0, 1.0, &JRule::Default, 0).unwrap();
        let e = realize_symbol(&s, &f).unwrap();
        for (x, xi) in [(0.0, 0.0), (3.0, -40.0), (1e3, 2.0)] {
            assert_eq!(e.eval(&[x], &[xi]), p.eval(&[x], &[xi]));
        }
    }

    #[test]
    fn origin_sees_only_p0() {
        let a = AmplitudeExpr::gaussian(1, 0.2, 0.2, 0.2).unwrap();
        let s = amplitude_reduction(&a, 0.0, 1.0, 1.0, 6).unwrap();
        let f = build_partition(1, &gevrey(), 1.0, 1.0, &JRule::Default, 6).unwrap();
        let e = realize_symbol(&s, &f).unwrap();
        let (v, active) = e.eval_counted(&[0.0], &[0.0]);
        assert_eq!(active, 1);
        assert_eq!(v, s.term(0).eval(&[0.0], &[0.0]));
        // Far out every stored term is active.
        let (_, far) = e.eval_counted(&[1e4], &[0.0]);
        assert_eq!(far, 7);
    }

    #[test]
    fn realized_gaussian_reduction_in_class() {
        let a = AmplitudeExpr::gaussian(1, 0.05, 0.05, 0.05).unwrap();
        let s = amplitude_reduction(&a, 0.0, 1.0, 1.0, 6).unwrap();
        let f = build_partition(1, &gevrey(), 1.0, 1.0, &JRule::Default, 6).unwrap();
        let e = realize_symbol(&s, &f).unwrap();
        let grid = class_grid(2, 300, 256.0, 11);
        let r = check_symbol_class(&e, 0.0, 1.0, &gevrey(), &[1, 2, 4], &grid, 6).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
