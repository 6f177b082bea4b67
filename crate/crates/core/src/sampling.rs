//! Seeded sample generation shared by the estimate checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `{0, 1, 2, 4, ..., max}` with `max` rounded up to a power of two.
pub fn geometric_radii(max: f64) -> Vec<f64> {
    let mut out = vec![0.0, 1.0];
    let mut r = 1.0;
    while r < max {
        r *= 2.0;
        out.push(r);
    }
    out
}

/// Uniformly distributed direction on the unit sphere of `R^n`.
pub fn direction<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `count` points `r·θ` cycling through `radii` with random directions `θ`.
pub fn radial_points<R: Rng>(rng: &mut R, n: usize, radii: &[f64], count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let r = radii[i % radii.len()];
            direction(rng, n).into_iter().map(|x| x * r).collect()
        })
        .collect()
}

/// Log-uniform sample in `[lo, hi]`.
pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

/// `n` points geometrically spaced over `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_and_directions() {
        assert_eq!(geometric_radii(64.0), vec![0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]);
        let mut r = rng(7);
        for p in radial_points(&mut r, 3, &[2.0], 20) {
            let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a: Vec<f64> = radial_points(&mut rng(3), 2, &[1.0, 4.0], 5).concat();
        let b: Vec<f64> = radial_points(&mut rng(3), 2, &[1.0, 4.0], 5).concat();
        assert_eq!(a, b);
    }
}
