//! Reproducible random ensembles. Each sequence draws from its own
//! counter-derived ChaCha8 stream, so the ensemble is identical no matter
//! how cases are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal, Uniform};

use jacobi_lps::FiniteSequence;

use crate::config::{Distribution, EnsembleConfig};

/// SplitMix64 finalizer over (seed, counter).
pub fn split_seed(seed: u64, counter: u64) -> u64 {
    let mut z = seed ^ counter.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Draw one sequence: the stored length is uniform in 1..=support_max and
/// entries follow the configured distribution (sparse zeroes entries with
/// probability 3/4, keeping at least one).
pub fn draw_sequence(cfg: &EnsembleConfig, case: u64) -> FiniteSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(cfg.seed, case));
    let len = Uniform::new_inclusive(1, cfg.support_max)
        .expect("support_max >= 1")
        .sample(&mut rng);
    let mut entries: Vec<f64> = match cfg.distribution {
        Distribution::Gaussian => (0..len)
            .map(|_| <StandardNormal as rand_distr::Distribution<f64>>::sample(&StandardNormal, &mut rng))
            .collect(),
        Distribution::Rademacher => (0..len)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect(),
        Distribution::Sparse => (0..len)
            .map(|_| {
                let v: f64 =
                    <StandardNormal as rand_distr::Distribution<f64>>::sample(&StandardNormal, &mut rng);
                if rng.random::<f64>() < 0.75 {
                    0.0
                } else {
                    v
                }
            })
            .collect(),
    };
    if entries.iter().all(|&v| v == 0.0) {
        entries[0] = 1.0;
    }
    FiniteSequence::new(entries)
}

pub fn ensemble(cfg: &EnsembleConfig) -> Vec<FiniteSequence> {
    (0..cfg.count).map(|i| draw_sequence(cfg, i as u64)).collect()
}
