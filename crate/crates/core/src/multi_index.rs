//! Multi-index enumeration and the small combinatorial helpers shared by
//! the term algebra, the jets and the estimate checks.

/// All multi-indices of length `dim` with total order exactly `order`,
/// in lexicographically decreasing order of the first entry.
pub fn with_order(dim: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; dim];
    fill(dim, order, 0, &mut cur, &mut out);
    out
}

fn fill(dim: usize, left: usize, pos: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if dim == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == dim - 1 {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        fill(dim, left - k, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// All multi-indices of length `dim` with total order at most `max_order`,
/// graded by order.
pub fn up_to_order(dim: usize, max_order: usize) -> Vec<Vec<usize>> {
    (0..=max_order).flat_map(|k| with_order(dim, k)).collect()
}

pub fn order(alpha: &[usize]) -> usize {
    alpha.iter().sum()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `ln n!`: direct summation for small n, Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 256 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        ln_gamma1(n as f64)
    }
}

/// `ln Γ(x + 1)` for real `x ≥ 0`.
pub fn ln_gamma1(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut y = x;
    while y < 32.0 {
        y += 1.0;
        shift += y.ln();
    }
    let z = y + 1.0;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z.powi(3)) + 1.0 / (1260.0 * z.powi(5));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

/// `α! = α_1! ⋯ α_d!`
pub fn multi_factorial(alpha: &[usize]) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn multi_binomial(alpha: &[usize], beta: &[usize]) -> f64 {
    alpha.iter().zip(beta).map(|(&a, &b)| binomial(a, b)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_stars_and_bars() {
        for dim in 1..=4 {
            for k in 0..=6 {
                let expected = binomial(k + dim - 1, dim - 1) as usize;
                assert_eq!(with_order(dim, k).len(), expected);
            }
        }
        assert_eq!(up_to_order(2, 16).len(), 153);
    }

    #[test]
    fn indices_have_requested_order() {
        for a in with_order(3, 5) {
            assert_eq!(order(&a), 5);
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert!((ln_factorial(20) - factorial(20).ln()).abs() < 1e-12);
        assert!((ln_gamma1(20.0) - factorial(20).ln()).abs() < 1e-12);
        assert!((ln_gamma1(0.0)).abs() < 1e-12);
        let direct: f64 = (2..=1000).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(1000) - direct).abs() < 1e-9);
        assert_eq!(multi_factorial(&[2, 3]), 12.0);
        assert_eq!(binomial(6, 2), 15.0);
    }
}
