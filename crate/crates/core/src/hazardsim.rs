//! Monte Carlo sampling of pipelines with random hazards.
//!
//! An input element of hazard type `j` finishes `j` cycles after its
//! predecessor; the first element always needs `depth` cycles. Sampling the
//! per-element types from a distribution and summing gives a random total
//! whose expectation must match the closed-form single-hazard and restart
//! models, which is exactly what the validation tests exploit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::RestartModel;

const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Distribution of hazard types: `probs()[j - 1]` is the probability that an
/// element completes `j` cycles after its predecessor.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardDistribution {
    probs: Vec<f64>,
}

impl HazardDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidFraction { index, value: p });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::DistributionSum(sum));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Expected hazard type, `sum of j * b_j`.
    pub fn mean_type(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (i + 1) as f64 * p)
            .sum()
    }

    /// Largest type carrying positive probability.
    pub fn max_support(&self) -> usize {
        self.probs
            .iter()
            .rposition(|&p| p > 0.0)
            .map_or(1, |i| i + 1)
    }

    /// True when some positive-probability type exceeds `depth`, violating
    /// the always-one-stage-active premise of the hazard model.
    pub fn exceeds_depth(&self, depth: usize) -> bool {
        self.max_support() > depth
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.gen();
        let mut cumulative = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                return i + 1;
            }
        }
        self.probs.len() // floating-point residue lands on the last type
    }
}

/// Single-hazard distribution matching the bounded pipeline: type
/// `(p - q)^+ + 1` with probability `1/q`, type 1 with the rest. The two
/// masses merge at type 1 when `p <= q`.
pub fn simplified_distribution(depth: usize, devices: usize) -> Result<HazardDistribution> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    if devices == 0 {
        return Err(Error::InvalidDeviceCount);
    }
    let mut probs = vec![0.0; depth];
    let hazard_type = depth.saturating_sub(devices) + 1;
    if hazard_type == 1 {
        probs[0] = 1.0;
    } else {
        probs[0] = 1.0 - 1.0 / devices as f64;
        probs[hazard_type - 1] = 1.0 / devices as f64;
    }
    HazardDistribution::new(probs)
}

/// Two-hazard distribution for the restart model: restart (type `p`) with
/// probability `b`, the single-hazard type `(p - q)^+ + 1` with `(1 - b)/q`,
/// and type 1 with the rest. Coinciding support points add their masses.
pub fn restart_distribution(
    depth: usize,
    devices: usize,
    restart: RestartModel,
) -> Result<HazardDistribution> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    if devices == 0 {
        return Err(Error::InvalidDeviceCount);
    }
    let b = restart.probability;
    let mut probs = vec![0.0; depth];
    let hazard_type = depth.saturating_sub(devices) + 1;
    probs[0] += (1.0 - b) * (1.0 - 1.0 / devices as f64);
    probs[hazard_type - 1] += (1.0 - b) / devices as f64;
    probs[depth - 1] += b;
    HazardDistribution::new(probs)
}

/// One replication: `depth` cycles for the first element plus a sampled
/// hazard type for each of the remaining `elements - 1`. Deterministic for
/// a fixed seed.
pub fn sample_cycles(depth: usize, dist: &HazardDistribution, elements: usize, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_total(depth, dist, elements, &mut rng)
}

fn draw_total(depth: usize, dist: &HazardDistribution, elements: usize, rng: &mut impl Rng) -> u64 {
    let mut total = depth as u64;
    for _ in 1..elements {
        total += dist.sample(rng) as u64;
    }
    total
}

/// Sample mean and standard error of [`sample_cycles`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// Monte Carlo estimate over independent replications. Trial `t` draws from
/// an independent substream of the seeded generator, so replications are
/// reproducible regardless of evaluation order.
pub fn monte_carlo_mean(
    depth: usize,
    dist: &HazardDistribution,
    elements: usize,
    trials: usize,
    seed: u64,
) -> Result<SampleStats> {
    if trials < 2 {
        return Err(Error::TooFewTrials(trials));
    }
    let mut sum = 0.0;
    let mut sum_squares = 0.0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let cycles = draw_total(depth, dist, elements, &mut rng) as f64;
        sum += cycles;
        sum_squares += cycles * cycles;
    }
    let n = trials as f64;
    let mean = sum / n;
    let variance = ((sum_squares - sum * sum / n) / (n - 1.0)).max(0.0);
    Ok(SampleStats {
        mean,
        stderr: (variance / n).sqrt(),
        trials,
    })
}
