use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::Rng;

use super::SearchConfig;

/// Softmax temperature at a generation: `initial * decay^generation`,
/// floored at the smallest positive double so annealing never reaches 0.
pub fn temperature(generation: u64, cfg: &SearchConfig) -> f64 {
    (cfg.temperature_initial * cfg.temperature_decay.powf(generation as f64)).max(f64::MIN_POSITIVE)
}

/// Winning probabilities `exp(-l_i / T) / sum_j exp(-l_j / T)`, computed
/// relative to the smallest loss. At `T = 0` the mass is spread evenly over
/// the minimal losses. NaN losses never win.
pub fn selection_probabilities(losses: &[f64], t: f64) -> Vec<f64> {
    assert!(!losses.is_empty(), "tournament needs at least one contestant");
    let clean: Vec<f64> = losses.iter().map(|&l| if l.is_nan() { f64::INFINITY } else { l }).collect();
    let min = clean.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = if min == f64::INFINITY {
        vec![1.0; clean.len()]
    } else if t == 0.0 {
        clean.iter().map(|&l| if l == min { 1.0 } else { 0.0 }).collect()
    } else {
        clean.iter().map(|&l| (-(l - min) / t).exp()).collect()
    };
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

/// Samples a winner index from [`selection_probabilities`].
pub fn tournament_select<R: Rng + ?Sized>(losses: &[f64], t: f64, rng: &mut R) -> usize {
    let probs = selection_probabilities(losses, t);
    // The best contestant always has weight 1 before normalization, so the
    // distribution is never degenerate.
    WeightedIndex::new(&probs).expect("positive total weight").sample(rng)
}

/// Draws `tournament_size` distinct contestants (all of them if the
/// population is smaller) and returns the winner's population index.
pub fn run_tournament<R: Rng + ?Sized>(losses: &[f64], tournament_size: usize, t: f64, rng: &mut R) -> usize {
    let k = tournament_size.min(losses.len());
    let contestants: Vec<usize> = index::sample(rng, losses.len(), k).into_vec();
    let local: Vec<f64> = contestants.iter().map(|&i| losses[i]).collect();
    contestants[tournament_select(&local, t, rng)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn temperature_schedule() {
        let cfg = SearchConfig::default();
        assert_eq!(temperature(0, &cfg), 10.0);
        assert!((temperature(1, &cfg) - 9.998).abs() < 1e-12);
        assert!(temperature(100, &cfg) < temperature(99, &cfg));
        assert!(temperature(100_000_000, &cfg) > 0.0);
    }

    #[test]
    fn equal_losses_are_uniform() {
        for t in [0.0, 0.1, 10.0] {
            assert_eq!(selection_probabilities(&[2.0; 4], t), vec![0.25; 4]);
        }
    }

    #[test]
    fn log_three_gap_gives_three_to_one() {
        let p = selection_probabilities(&[0.0, 3f64.ln()], 1.0);
        assert!((p[0] - 0.75).abs() < 1e-15 && (p[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn shift_invariance() {
        // Dyadic values keep the shifted differences exact.
        let l = [0.25, 1.75, 0.5, 2.5];
        let plus: Vec<f64> = l.iter().map(|x| x + 8.0).collect();
        assert_eq!(selection_probabilities(&l, 0.7), selection_probabilities(&plus, 0.7));
        let l = [0.3, 1.7, 0.9, 2.5];
        let plus: Vec<f64> = l.iter().map(|x| x + 0.123).collect();
        for (x, y) in selection_probabilities(&l, 0.7).iter().zip(selection_probabilities(&plus, 0.7)) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_temperature_is_argmin() {
        let mut r = rng::seeded(0);
        let mut counts = [0usize; 3];
        for _ in 0..10_000 {
            counts[tournament_select(&[5.0, 1.0, 1.0], 0.0, &mut r)] += 1;
        }
        assert_eq!(counts[0], 0);
        assert!((counts[1] as f64 / 10_000.0 - 0.5).abs() < 0.03);
    }

    #[test]
    fn nan_and_huge_losses() {
        let p = selection_probabilities(&[f64::NAN, 1.0], 1.0);
        assert_eq!(p, vec![0.0, 1.0]);
        let p = selection_probabilities(&[1e300, 1.0], 1e-300);
        assert_eq!(p, vec![0.0, 1.0]);
        assert_eq!(selection_probabilities(&[f64::NAN; 2], 1.0), vec![0.5, 0.5]);
    }

    #[test]
    fn tournament_draws_distinct_contestants() {
        let mut r = rng::seeded(2);
        // With 4 contestants out of 4, the unique minimum must always win
        // at T = 0.
        for _ in 0..100 {
            assert_eq!(run_tournament(&[3.0, 2.0, 0.5, 9.0], 4, 0.0, &mut r), 2);
        }
    }
}
