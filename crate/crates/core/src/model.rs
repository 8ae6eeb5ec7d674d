//! Closed-form timing models for bounded pipelines.
//!
//! A bounded pipeline has `depth` stages but at most `devices` of them can be
//! active in any one cycle; the shortage shows up as structural-hazard stalls.
//! This module provides the exact processing-time formula, the hyperbola
//! decomposition of the time-vs-depth curve, optimal-depth calculators for the
//! exact / simplified / restart models, and the concurrency-weighted speedup
//! identity used to cross-check the scheduler.

use crate::error::{Error, Result};

/// Shape and timing of a uniform bounded pipeline.
///
/// The per-stage delay (pipeline cycle) is `h = logical_delay / depth +
/// latch_overhead`: splitting the logic into more stages shortens the logic
/// share of a cycle but the latch overhead is paid per stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Number of stages, `p >= 1`.
    pub depth: usize,
    /// Number of functional devices serving the stages, `q >= 1`.
    pub devices: usize,
    /// Total logic delay of the unpipelined operation, `t_p >= 0`.
    pub logical_delay: f64,
    /// Latch read/write overhead per stage, `t_o >= 0`.
    pub latch_overhead: f64,
}

impl PipelineConfig {
    pub fn new(
        depth: usize,
        devices: usize,
        logical_delay: f64,
        latch_overhead: f64,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidDepth);
        }
        if devices == 0 {
            return Err(Error::InvalidDeviceCount);
        }
        check_timing("logical_delay", logical_delay)?;
        check_timing("latch_overhead", latch_overhead)?;
        if logical_delay == 0.0 && latch_overhead == 0.0 {
            return Err(Error::ZeroTimings);
        }
        Ok(Self {
            depth,
            devices,
            logical_delay,
            latch_overhead,
        })
    }

    /// Configuration with `h = 1`, so all times come out in whole cycles.
    pub fn unit_cycle(depth: usize, devices: usize) -> Result<Self> {
        Self::new(depth, devices, 0.0, 1.0)
    }

    /// Pipeline cycle `h = t_p / p + t_o`.
    pub fn cycle_time(&self) -> f64 {
        self.logical_delay / self.depth as f64 + self.latch_overhead
    }
}

/// Amount of input data fed to the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workload {
    /// Number of input elements, `n >= 1`.
    pub elements: usize,
}

impl Workload {
    pub fn new(elements: usize) -> Result<Self> {
        if elements == 0 {
            return Err(Error::EmptyWorkload);
        }
        Ok(Self { elements })
    }
}

/// Probability that an input element forces a full pipeline restart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartModel {
    pub probability: f64,
}

impl RestartModel {
    pub fn new(probability: f64) -> Result<Self> {
        if !probability.is_finite() || !(0.0..=1.0).contains(&probability) {
            return Err(Error::ProbabilityRange(probability));
        }
        Ok(Self { probability })
    }
}

/// Coefficients of a time-vs-depth branch `f(x) = A x + B + C / x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolaCoeffs {
    /// Linear coefficient `A` (time per stage).
    pub linear: f64,
    /// Constant term `B` (time).
    pub constant: f64,
    /// Inverse coefficient `C` (time times stages).
    pub inverse: f64,
}

impl HyperbolaCoeffs {
    /// Evaluate `A x + B + C / x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.linear * x + self.constant + self.inverse / x
    }

    /// Abscissa of the minimum, `sqrt(C / A)`; undefined when `A = 0`
    /// (the branch then decreases towards its asymptote).
    pub fn minimum_abscissa(&self) -> Option<f64> {
        (self.linear > 0.0).then(|| (self.inverse / self.linear).sqrt())
    }
}

/// Recommended pipeline depth: the real-valued minimizer of the chosen time
/// model and the better of its two integer neighbours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthRecommendation {
    pub real_optimum: f64,
    pub integer_optimum: usize,
    /// Value of the time model at `integer_optimum`.
    pub predicted_time: f64,
}

fn check_timing(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::NegativeTiming { name, value });
    }
    Ok(())
}

/// Cycles needed to process `elements` inputs when `h = 1`:
/// `p + n - 1 + (p - q)^+ * floor((n - 1) / q)`.
///
/// Every extra depth beyond the device count delays each full batch of `q`
/// elements by the same `(p - q)` stall cycles.
pub fn bounded_cycles(depth: usize, devices: usize, elements: usize) -> u64 {
    let stall = depth.saturating_sub(devices) as u64;
    let batches = ((elements - 1) / devices) as u64;
    depth as u64 + elements as u64 - 1 + stall * batches
}

/// Exact processing time of the bounded pipeline,
/// `T_q(p, n) = (p + n - 1 + (p - q)^+ floor((n - 1) / q)) * h`.
pub fn bounded_time(cfg: &PipelineConfig, w: Workload) -> f64 {
    bounded_cycles(cfg.depth, cfg.devices, w.elements) as f64 * cfg.cycle_time()
}

/// Both branches of the time-vs-depth curve for fixed `q` and `n`, as
/// functions of a real depth `x`: the constrained branch (in effect for
/// `x >= q`) and the unconstrained one (`x < q`).
///
/// Constrained: `A_q = t_o (1 + K)`, `B_q = t_o R + t_p (1 + K)`,
/// `C_q = t_p R` with `K = floor((n-1)/q)`, `R = (n-1) mod q`.
/// Unconstrained: `A = t_o`, `B = (n-1) t_o + t_p`, `C = (n-1) t_p`.
pub fn hyperbola_coeffs(
    devices: usize,
    w: Workload,
    logical_delay: f64,
    latch_overhead: f64,
) -> Result<(HyperbolaCoeffs, HyperbolaCoeffs)> {
    if devices == 0 {
        return Err(Error::InvalidDeviceCount);
    }
    check_timing("logical_delay", logical_delay)?;
    check_timing("latch_overhead", latch_overhead)?;
    let full_batches = ((w.elements - 1) / devices) as f64;
    let remainder = ((w.elements - 1) % devices) as f64;
    let spread = (w.elements - 1) as f64;
    let constrained = HyperbolaCoeffs {
        linear: latch_overhead * (1.0 + full_batches),
        constant: latch_overhead * remainder + logical_delay * (1.0 + full_batches),
        inverse: logical_delay * remainder,
    };
    let unconstrained = HyperbolaCoeffs {
        linear: latch_overhead,
        constant: spread * latch_overhead + logical_delay,
        inverse: spread * logical_delay,
    };
    Ok((constrained, unconstrained))
}

/// Pick the better integer neighbour of a real optimum by evaluating the
/// time model at floor and ceil; ties go to the smaller (cheaper) depth.
fn integerize(real_optimum: f64, mut time_at: impl FnMut(usize) -> f64) -> (usize, f64) {
    let lower = (real_optimum.floor() as usize).max(1);
    let upper = (real_optimum.ceil() as usize).max(1);
    let time_lower = time_at(lower);
    if upper == lower {
        return (lower, time_lower);
    }
    let time_upper = time_at(upper);
    if time_lower <= time_upper {
        (lower, time_lower)
    } else {
        (upper, time_upper)
    }
}

/// Depth minimizing the exact bounded-pipeline time for fixed `q` and `n`:
/// `max(p0, min(q, p1))` where `p0`/`p1` are the minima of the constrained /
/// unconstrained branches. Requires `t_p > 0` and `t_o > 0`, otherwise no
/// finite minimum exists.
pub fn optimal_depth_exact(
    devices: usize,
    w: Workload,
    logical_delay: f64,
    latch_overhead: f64,
) -> Result<DepthRecommendation> {
    if devices == 0 {
        return Err(Error::InvalidDeviceCount);
    }
    if !logical_delay.is_finite() || logical_delay <= 0.0 {
        return Err(Error::RequiresPositiveLogicalDelay);
    }
    if !latch_overhead.is_finite() || latch_overhead <= 0.0 {
        return Err(Error::RequiresPositiveLatchOverhead);
    }
    let (constrained, unconstrained) = hyperbola_coeffs(devices, w, logical_delay, latch_overhead)?;
    let p0 = constrained.minimum_abscissa().expect("A_q > 0");
    let p1 = unconstrained.minimum_abscissa().expect("A > 0");
    let real = p0.max((devices as f64).min(p1)).max(1.0);
    let (integer, predicted) = integerize(real, |depth| {
        let cfg = PipelineConfig::new(depth, devices, logical_delay, latch_overhead)
            .expect("validated inputs");
        bounded_time(&cfg, w)
    });
    Ok(DepthRecommendation {
        real_optimum: real,
        integer_optimum: integer,
        predicted_time: predicted,
    })
}

/// Expected cycles spent on the `n - 1` follow-up elements of the
/// single-hazard model: `(n - 1)(q + (p - q)^+) / q`. The numerator is
/// formed in integers so that the division is exact whenever `q` divides
/// it, keeping the `p <= q` case identical to the exact model bit for bit.
fn single_hazard_followup_cycles(depth: usize, devices: usize, elements: usize) -> f64 {
    ((elements - 1) * (devices + depth.saturating_sub(devices))) as f64 / devices as f64
}

/// Expected processing time of the single-hazard pipeline that approximates
/// the bounded one: `T(p, n) = (p + (n - 1)(1 - 1/q + ((p-q)^+ + 1)/q)) h`.
pub fn simplified_time(cfg: &PipelineConfig, w: Workload) -> f64 {
    let followup = single_hazard_followup_cycles(cfg.depth, cfg.devices, w.elements);
    (cfg.depth as f64 + followup) * cfg.cycle_time()
}

/// Strict upper bound on `simplified_time - bounded_time`:
/// `(p - q)^+ (t_o + t_p / p)`. Zero when `p <= q` (the models coincide).
pub fn simplified_error_bound(cfg: &PipelineConfig) -> f64 {
    cfg.depth.saturating_sub(cfg.devices) as f64 * cfg.cycle_time()
}

/// Depth minimizing the single-hazard expected time:
/// `min(q, sqrt((n - 1) t_p / t_o))`. Requires `t_o > 0`.
pub fn optimal_depth_simplified(
    devices: usize,
    w: Workload,
    logical_delay: f64,
    latch_overhead: f64,
) -> Result<DepthRecommendation> {
    if devices == 0 {
        return Err(Error::InvalidDeviceCount);
    }
    check_timing("logical_delay", logical_delay)?;
    if !latch_overhead.is_finite() || latch_overhead <= 0.0 {
        return Err(Error::RequiresPositiveLatchOverhead);
    }
    let unconstrained_min = ((w.elements - 1) as f64 * logical_delay / latch_overhead).sqrt();
    let real = (devices as f64).min(unconstrained_min).max(1.0);
    let (integer, predicted) = integerize(real, |depth| {
        let cfg = PipelineConfig::new(depth, devices, logical_delay, latch_overhead)
            .expect("validated inputs");
        simplified_time(&cfg, w)
    });
    Ok(DepthRecommendation {
        real_optimum: real,
        integer_optimum: integer,
        predicted_time: predicted,
    })
}

/// Expected processing time of the two-hazard pipeline where each element
/// restarts with probability `b`:
/// `T(p, n, b) = (p + (n - 1)((1-b)(1 - 1/q) + ((p-q)^+ + 1)(1-b)/q + b p)) h`.
pub fn restart_time(cfg: &PipelineConfig, w: Workload, restart: RestartModel) -> f64 {
    let b = restart.probability;
    let followup = single_hazard_followup_cycles(cfg.depth, cfg.devices, w.elements);
    let restarts = ((w.elements - 1) * cfg.depth) as f64;
    (cfg.depth as f64 + (1.0 - b) * followup + b * restarts) * cfg.cycle_time()
}

/// Depth minimizing the restart-model expected time:
/// `min(q, sqrt((1 - b) t_p / ((1/(n-1) + b) t_o)))`.
/// Requires `t_o > 0` and `n >= 2`.
pub fn optimal_depth_restart(
    devices: usize,
    w: Workload,
    logical_delay: f64,
    latch_overhead: f64,
    restart: RestartModel,
) -> Result<DepthRecommendation> {
    if devices == 0 {
        return Err(Error::InvalidDeviceCount);
    }
    check_timing("logical_delay", logical_delay)?;
    if !latch_overhead.is_finite() || latch_overhead <= 0.0 {
        return Err(Error::RequiresPositiveLatchOverhead);
    }
    if w.elements < 2 {
        return Err(Error::WorkloadTooSmall {
            got: w.elements,
            min: 2,
        });
    }
    let b = restart.probability;
    let hyperbola_min =
        ((1.0 - b) * logical_delay / ((1.0 / (w.elements - 1) as f64 + b) * latch_overhead)).sqrt();
    let real = (devices as f64).min(hyperbola_min).max(1.0);
    let (integer, predicted) = integerize(real, |depth| {
        let cfg = PipelineConfig::new(depth, devices, logical_delay, latch_overhead)
            .expect("validated inputs");
        restart_time(&cfg, w, restart)
    });
    Ok(DepthRecommendation {
        real_optimum: real,
        integer_optimum: integer,
        predicted_time: predicted,
    })
}

/// Concurrency-weighted speedup identity:
/// `T_q = (g_1/1 + g_2/2 + ... + g_q/q) * T_1`, where `g_i` is the fraction
/// of work executed while exactly `i` stages run concurrently.
pub fn generalized_amdahl(fractions: &[f64], sequential_time: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut weighted = 0.0;
    for (index, &g) in fractions.iter().enumerate() {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidFraction { index, value: g });
        }
        sum += g;
        weighted += g / (index + 1) as f64;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::FractionSum(sum));
    }
    Ok(weighted * sequential_time)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(p: usize, q: usize, tp: f64, to: f64) -> PipelineConfig {
        PipelineConfig::new(p, q, tp, to).unwrap()
    }

    fn unit(p: usize, q: usize) -> PipelineConfig {
        PipelineConfig::unit_cycle(p, q).unwrap()
    }

    fn w(n: usize) -> Workload {
        Workload::new(n).unwrap()
    }

    #[test]
    fn config_rejects_degenerate_inputs() {
        assert!(matches!(
            PipelineConfig::new(0, 1, 1.0, 1.0),
            Err(Error::InvalidDepth)
        ));
        assert!(matches!(
            PipelineConfig::new(1, 0, 1.0, 1.0),
            Err(Error::InvalidDeviceCount)
        ));
        assert!(matches!(
            PipelineConfig::new(1, 1, 0.0, 0.0),
            Err(Error::ZeroTimings)
        ));
        assert!(matches!(
            PipelineConfig::new(1, 1, -1.0, 1.0),
            Err(Error::NegativeTiming { .. })
        ));
        assert!(Workload::new(0).is_err());
        assert!(RestartModel::new(1.5).is_err());
        assert!(RestartModel::new(f64::NAN).is_err());
    }

    #[test]
    fn cycle_time_examples() {
        assert_relative_eq!(cfg(5, 5, 1.0, 0.3).cycle_time(), 0.5);
        assert_relative_eq!(cfg(1, 1, 0.0, 1.0).cycle_time(), 1.0);
        assert_relative_eq!(cfg(4, 4, 4.0, 0.0).cycle_time(), 1.0);
    }

    #[test]
    fn bounded_time_examples() {
        assert_relative_eq!(bounded_time(&unit(4, 3), w(8)), 13.0);
        assert_relative_eq!(bounded_time(&unit(10, 5), w(50)), 104.0);
        // no devices missing: (p + n - 1) h
        let c = cfg(6, 6, 2.0, 0.5);
        assert_relative_eq!(bounded_time(&c, w(9)), 14.0 * c.cycle_time());
        // single element just traverses the p stages
        assert_relative_eq!(
            bounded_time(&cfg(7, 2, 3.0, 0.4), w(1)),
            7.0 * (3.0 / 7.0 + 0.4)
        );
        // more devices than stages changes nothing
        assert_eq!(bounded_cycles(4, 9, 8), bounded_cycles(4, 4, 8));
    }

    #[test]
    fn hyperbola_coeffs_examples() {
        let (con, unc) = hyperbola_coeffs(3, w(8), 0.0, 1.0).unwrap();
        assert_relative_eq!(con.linear, 3.0);
        assert_relative_eq!(con.constant, 1.0);
        assert_relative_eq!(con.inverse, 0.0);
        assert_relative_eq!(con.eval(4.0), 13.0);
        assert_relative_eq!(unc.linear, 1.0);
        assert_relative_eq!(unc.constant, 7.0);
        assert_relative_eq!(unc.inverse, 0.0);

        // single element kills both inverse terms
        let (con1, unc1) = hyperbola_coeffs(4, w(1), 2.5, 0.5).unwrap();
        assert_eq!(con1.inverse, 0.0);
        assert_eq!(unc1.inverse, 0.0);

        // with fewer elements than devices the branches coincide
        let (con2, unc2) = hyperbola_coeffs(9, w(6), 1.5, 0.25).unwrap();
        assert_eq!(con2, unc2);
    }

    #[test]
    fn minimum_abscissa_requires_positive_linear_term() {
        let flat = HyperbolaCoeffs {
            linear: 0.0,
            constant: 2.0,
            inverse: 3.0,
        };
        assert!(flat.minimum_abscissa().is_none());
        let curve = HyperbolaCoeffs {
            linear: 0.2,
            constant: 100.28,
            inverse: 140.0,
        };
        assert_relative_eq!(curve.minimum_abscissa().unwrap(), 700f64.sqrt());
    }

    #[test]
    fn exact_depth_is_sensitive_to_the_workload_size() {
        let at_150 = optimal_depth_exact(15, w(150), 10.0, 0.02).unwrap();
        assert_relative_eq!(at_150.real_optimum, 700f64.sqrt(), max_relative = 1e-12);
        // the true integer argmin is 26: T(26) = 110.864615... beats
        // T(27) = 110.865185...
        assert_eq!(at_150.integer_optimum, 26);
        assert_relative_eq!(at_150.predicted_time, 274.0 * (10.0 / 26.0 + 0.02));

        // one more element crosses a batch boundary and the optimum
        // collapses to the device count
        let at_151 = optimal_depth_exact(15, w(151), 10.0, 0.02).unwrap();
        assert_relative_eq!(at_151.real_optimum, 15.0);
        assert_eq!(at_151.integer_optimum, 15);
    }

    #[test]
    fn exact_depth_matches_the_five_device_example() {
        let rec = optimal_depth_exact(5, w(20), 100.0, 3.0).unwrap();
        assert!(rec.real_optimum > 5.7 && rec.real_optimum < 5.9);
        assert_eq!(rec.integer_optimum, 6);
        assert_relative_eq!(rec.predicted_time, 28.0 * (100.0 / 6.0 + 3.0));
    }

    #[test]
    fn exact_depth_clamps_and_rejects() {
        let single = optimal_depth_exact(4, w(1), 2.0, 0.5).unwrap();
        assert_relative_eq!(single.real_optimum, 1.0);
        assert_eq!(single.integer_optimum, 1);
        assert!(matches!(
            optimal_depth_exact(4, w(10), 0.0, 0.5),
            Err(Error::RequiresPositiveLogicalDelay)
        ));
        assert!(matches!(
            optimal_depth_exact(4, w(10), 2.0, 0.0),
            Err(Error::RequiresPositiveLatchOverhead)
        ));
    }

    #[test]
    fn simplified_time_examples() {
        // coincides with the exact model when no stage waits for a device
        let small = cfg(4, 6, 2.0, 0.3);
        assert_eq!(simplified_time(&small, w(9)), bounded_time(&small, w(9)));
        assert_relative_eq!(simplified_time(&unit(10, 5), w(50)), 108.0);
        assert_relative_eq!(
            simplified_time(&cfg(5, 2, 1.0, 0.5), w(1)),
            5.0 * (1.0 / 5.0 + 0.5)
        );
    }

    #[test]
    fn simplified_error_bound_examples() {
        assert_eq!(simplified_error_bound(&cfg(4, 6, 2.0, 0.3)), 0.0);
        assert_relative_eq!(simplified_error_bound(&unit(10, 5)), 5.0);
        // observed gap on the same parameters stays under the bound
        let gap = simplified_time(&unit(10, 5), w(50)) - bounded_time(&unit(10, 5), w(50));
        assert_relative_eq!(gap, 4.0);
        assert!(gap < simplified_error_bound(&unit(10, 5)));
    }

    #[test]
    fn simplified_depth_examples() {
        let rec = optimal_depth_simplified(5, w(20), 100.0, 3.0).unwrap();
        assert_relative_eq!(rec.real_optimum, 5.0);
        assert_eq!(rec.integer_optimum, 5);

        // stable across neighbouring workload sizes, unlike the exact model
        let a = optimal_depth_simplified(15, w(150), 10.0, 0.02).unwrap();
        let b = optimal_depth_simplified(15, w(151), 10.0, 0.02).unwrap();
        assert_eq!(a.integer_optimum, 15);
        assert_eq!(b.integer_optimum, 15);

        let single = optimal_depth_simplified(5, w(1), 100.0, 3.0).unwrap();
        assert_eq!(single.integer_optimum, 1);
        assert!(optimal_depth_simplified(5, w(20), 100.0, 0.0).is_err());
    }

    #[test]
    fn restart_time_examples() {
        let c = cfg(5, 5, 1.0, 0.2);
        let no_restart = RestartModel::new(0.0).unwrap();
        assert_eq!(
            restart_time(&c, w(20), no_restart),
            simplified_time(&c, w(20))
        );

        let always = RestartModel::new(1.0).unwrap();
        assert_relative_eq!(restart_time(&unit(5, 5), w(20), always), (20 * 5) as f64);

        let b01 = RestartModel::new(0.1).unwrap();
        assert_relative_eq!(
            restart_time(&unit(5, 5), w(20), b01),
            31.6,
            max_relative = 1e-12
        );
    }

    #[test]
    fn restart_depth_examples() {
        let no_restart = RestartModel::new(0.0).unwrap();
        let a = optimal_depth_restart(5, w(20), 100.0, 3.0, no_restart).unwrap();
        let b = optimal_depth_simplified(5, w(20), 100.0, 3.0).unwrap();
        assert_eq!(a.integer_optimum, b.integer_optimum);
        assert_relative_eq!(a.real_optimum, b.real_optimum, max_relative = 1e-12);

        let always = RestartModel::new(1.0).unwrap();
        let clamped = optimal_depth_restart(5, w(20), 100.0, 3.0, always).unwrap();
        assert_relative_eq!(clamped.real_optimum, 1.0);
        assert_eq!(clamped.integer_optimum, 1);

        let b02 = RestartModel::new(0.2).unwrap();
        let rec = optimal_depth_restart(5, w(20), 100.0, 3.0, b02).unwrap();
        let expected = (80.0_f64 / ((1.0 / 19.0 + 0.2) * 3.0)).sqrt().min(5.0);
        assert_relative_eq!(rec.real_optimum, expected);
        // exhaustive scan agrees
        let scan_best = (1..=50)
            .map(|p| restart_time(&cfg(p, 5, 100.0, 3.0), w(20), b02))
            .fold(f64::INFINITY, f64::min);
        assert_relative_eq!(rec.predicted_time, scan_best, max_relative = 1e-12);

        assert!(matches!(
            optimal_depth_restart(5, w(1), 100.0, 3.0, b02),
            Err(Error::WorkloadTooSmall { .. })
        ));
    }

    #[test]
    fn generalized_amdahl_examples() {
        let t = generalized_amdahl(&[2.0 / 32.0, 6.0 / 32.0, 24.0 / 32.0], 32.0).unwrap();
        assert_relative_eq!(t, 13.0);
        assert_relative_eq!(generalized_amdahl(&[1.0], 42.0).unwrap(), 42.0);
        let mut fully_parallel = vec![0.0; 8];
        fully_parallel[7] = 1.0;
        assert_relative_eq!(generalized_amdahl(&fully_parallel, 56.0).unwrap(), 7.0);

        assert!(matches!(
            generalized_amdahl(&[0.5, 0.4], 1.0),
            Err(Error::FractionSum(_))
        ));
        assert!(matches!(
            generalized_amdahl(&[-0.1, 1.1], 1.0),
            Err(Error::InvalidFraction { .. })
        ));
    }
}
