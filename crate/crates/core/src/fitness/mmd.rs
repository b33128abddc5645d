/// Squared Euclidean distance; the shorter vector is treated as zero-padded.
pub fn sq_distance(x: &[f64], y: &[f64]) -> f64 {
    let common = x.len().min(y.len());
    let mut s = 0.0;
    for k in 0..common {
        let d = x[k] - y[k];
        s += d * d;
    }
    let tail = if x.len() > common { &x[common..] } else { &y[common..] };
    for t in tail {
        s += t * t;
    }
    s
}

/// `exp(-|x - y|^2 / (2 sigma^2))`.
pub fn gaussian_kernel(x: &[f64], y: &[f64], sigma: f64) -> f64 {
    (-sq_distance(x, y) / (2.0 * sigma * sigma)).exp()
}

/// Mean of `k(x, y)` over all pairs. Terms are summed in sorted order so the
/// result does not depend on which side is `xs`.
pub fn kernel_mean<K>(xs: &[Vec<f64>], ys: &[Vec<f64>], kernel: &K) -> f64
where
    K: Fn(&[f64], &[f64]) -> f64,
{
    let mut terms: Vec<f64> = xs.iter().flat_map(|x| ys.iter().map(|y| kernel(x, y))).collect();
    terms.sort_unstable_by(f64::total_cmp);
    terms.iter().sum::<f64>() / (xs.len() * ys.len()) as f64
}

/// Combines the three kernel means of the biased estimator.
pub fn mmd2_from_means(xx: f64, xy: f64, yy: f64) -> f64 {
    (xx + yy) - 2.0 * xy
}

/// Biased squared maximum mean discrepancy between two samples.
pub fn mmd2<K>(xs: &[Vec<f64>], ys: &[Vec<f64>], kernel: K) -> f64
where
    K: Fn(&[f64], &[f64]) -> f64,
{
    assert!(!xs.is_empty() && !ys.is_empty(), "mmd2 needs non-empty samples");
    mmd2_from_means(
        kernel_mean(xs, xs, &kernel),
        kernel_mean(xs, ys, &kernel),
        kernel_mean(ys, ys, &kernel),
    )
}

pub fn gaussian_mmd2(xs: &[Vec<f64>], ys: &[Vec<f64>], sigma: f64) -> f64 {
    mmd2(xs, ys, |x, y| gaussian_kernel(x, y, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn kernel_values() {
        assert_eq!(gaussian_kernel(&[1.0, 2.0], &[1.0, 2.0], 1.0), 1.0);
        let k = gaussian_kernel(&[1.0, 0.0], &[0.0, 1.0], 1.0);
        assert!((k - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(gaussian_kernel(&[0.3], &[2.0], 0.7), gaussian_kernel(&[2.0], &[0.3], 0.7));
    }

    #[test]
    fn padding_matches_explicit_zeros() {
        assert_eq!(sq_distance(&[1.0, 2.0], &[1.0, 2.0, 3.0]), 9.0);
        assert_eq!(sq_distance(&[1.0, 2.0, 0.0], &[1.0]), sq_distance(&[1.0, 2.0], &[1.0]));
    }

    #[test]
    fn single_points() {
        let v = gaussian_mmd2(&[vec![1.0, 0.0]], &[vec![0.0, 1.0]], 1.0);
        assert!((v - (2.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn nonnegative_and_symmetric_on_random_sets() {
        let mut r = crate::rng::seeded(0);
        for _ in 0..1000 {
            let mut set = |n: usize| -> Vec<Vec<f64>> {
                (0..n).map(|_| (0..3).map(|_| r.random::<f64>() * 2.0).collect()).collect()
            };
            let (a, b) = (set(3), set(4));
            let ab = gaussian_mmd2(&a, &b, 1.0);
            assert!(ab >= -1e-12);
            assert_eq!(ab, gaussian_mmd2(&b, &a, 1.0));
            assert!(gaussian_mmd2(&a, &a, 1.0).abs() < 1e-12);
        }
    }
}
