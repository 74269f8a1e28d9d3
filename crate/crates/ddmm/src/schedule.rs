//! Noise schedules: the per-step variances `beta_t` and every coefficient
//! derived from them.
//!
//! Timesteps are 1-based in the public contract (`t = 1..=t_max`); `alpha_bar`
//! additionally defines `alpha_bar(0) = 1`. All schedule math is computed and
//! stored in 64-bit regardless of what precision the networks train in.

use crate::error::{DdmmError, Result};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Cosine,
    Linear,
}

/// Immutable after construction; safe for unrestricted concurrent reads.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule {
    kind: ScheduleKind,
    t_max: usize,
    betas: Vec<f64>,
    alphas: Vec<f64>,
    alpha_bars: Vec<f64>,
    posterior_variances: Vec<f64>,
}

impl NoiseSchedule {
    /// Squared-cosine profile: `abar(t) = f(t)/f(0)` with
    /// `f(t) = cos^2(((t/T + s)/(1 + s)) * pi/2)`, betas clipped at `beta_cap`
    /// and the stored `alpha_bars` recomputed from the clipped betas.
    pub fn cosine(t_max: usize, offset: f64, beta_cap: f64) -> Result<Self> {
        if t_max < 2 {
            return Err(DdmmError::invalid("t_max must be >= 2"));
        }
        if !(offset > 0.0) {
            return Err(DdmmError::invalid("cosine offset must be > 0"));
        }
        if !(beta_cap > 0.0 && beta_cap < 1.0) {
            return Err(DdmmError::invalid("beta_cap must lie in (0, 1)"));
        }
        let f = |t: f64| {
            let angle = ((t / t_max as f64 + offset) / (1.0 + offset)) * FRAC_PI_2;
            angle.cos().powi(2)
        };
        let f0 = f(0.0);
        let mut betas = Vec::with_capacity(t_max);
        let mut prev = 1.0; // abar_raw(0) = f(0)/f(0)
        for t in 1..=t_max {
            let cur = f(t as f64) / f0;
            let beta = (1.0 - cur / prev).min(beta_cap);
            betas.push(beta);
            prev = cur;
        }
        Self::from_betas(ScheduleKind::Cosine, betas)
    }

    /// Betas linearly interpolated from `beta_start` to `beta_end`.
    pub fn linear(t_max: usize, beta_start: f64, beta_end: f64) -> Result<Self> {
        if t_max < 2 {
            return Err(DdmmError::invalid("t_max must be >= 2"));
        }
        if !(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0) {
            return Err(DdmmError::invalid(
                "require 0 < beta_start <= beta_end < 1",
            ));
        }
        let betas = (0..t_max)
            .map(|i| {
                let u = i as f64 / (t_max - 1) as f64;
                beta_start + u * (beta_end - beta_start)
            })
            .collect();
        Self::from_betas(ScheduleKind::Linear, betas)
    }

    /// Derive alphas, cumulative products and posterior variances, then
    /// validate every schedule invariant.
    pub fn from_betas(kind: ScheduleKind, betas: Vec<f64>) -> Result<Self> {
        let t_max = betas.len();
        if t_max < 2 {
            return Err(DdmmError::invalid("schedule needs at least 2 steps"));
        }
        let alphas: Vec<f64> = betas.iter().map(|b| 1.0 - b).collect();
        let mut alpha_bars = Vec::with_capacity(t_max);
        let mut cum = 1.0;
        for &a in &alphas {
            cum *= a;
            alpha_bars.push(cum);
        }
        // beta~_t = beta_t (1 - abar_{t-1}) / (1 - abar_t), with abar_0 = 1.
        let mut posterior_variances = Vec::with_capacity(t_max);
        for t in 1..=t_max {
            let abar_prev = if t == 1 { 1.0 } else { alpha_bars[t - 2] };
            posterior_variances.push(betas[t - 1] * (1.0 - abar_prev) / (1.0 - alpha_bars[t - 1]));
        }

        let schedule = NoiseSchedule {
            kind,
            t_max,
            betas,
            alphas,
            alpha_bars,
            posterior_variances,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    fn validate(&self) -> Result<()> {
        for (i, &b) in self.betas.iter().enumerate() {
            if !b.is_finite() || b <= 0.0 || b >= 1.0 {
                return Err(DdmmError::invalid(format!(
                    "beta_{} = {} outside (0, 1)",
                    i + 1,
                    b
                )));
            }
        }
        let mut prev = 1.0;
        for (i, &ab) in self.alpha_bars.iter().enumerate() {
            if !ab.is_finite() || ab <= 0.0 || ab >= prev {
                return Err(DdmmError::invalid(format!(
                    "alpha_bar_{} = {} not strictly decreasing in (0, 1)",
                    i + 1,
                    ab
                )));
            }
            prev = ab;
        }
        for (i, (&pv, &b)) in self
            .posterior_variances
            .iter()
            .zip(&self.betas)
            .enumerate()
        {
            if !pv.is_finite() || pv < 0.0 || pv > b {
                return Err(DdmmError::invalid(format!(
                    "posterior variance at t={} is {} (beta {})",
                    i + 1,
                    pv,
                    b
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn check_t(&self, t: usize) -> Result<()> {
        if t < 1 || t > self.t_max {
            return Err(DdmmError::TimestepOutOfRange {
                t,
                t_max: self.t_max,
            });
        }
        Ok(())
    }

    pub fn beta(&self, t: usize) -> f64 {
        self.betas[t - 1]
    }

    pub fn alpha(&self, t: usize) -> f64 {
        self.alphas[t - 1]
    }

    /// Cumulative product, with `alpha_bar(0) = 1`.
    pub fn alpha_bar(&self, t: usize) -> f64 {
        if t == 0 {
            1.0
        } else {
            self.alpha_bars[t - 1]
        }
    }

    pub fn posterior_variance(&self, t: usize) -> f64 {
        self.posterior_variances[t - 1]
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn alpha_bars(&self) -> &[f64] {
        &self.alpha_bars
    }

    pub fn posterior_variances(&self) -> &[f64] {
        &self.posterior_variances
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Independent direct evaluation of the squared-cosine profile and the
    // beta recurrence, frozen from a high-precision (40-digit) run.
    const COSINE_T4_BETAS: [f64; 4] = [
        0.15298783867309526,
        0.41695808751199437,
        0.7078587123971636,
        0.999,
    ];
    const COSINE_T4_ALPHA_BARS: [f64; 4] = [
        0.8470121613269047,
        0.4938435904406377,
        0.1442721023857357,
        0.00014427210238573572,
    ];
    const COSINE_T4_POSTERIOR: [f64; 4] = [
        0.0,
        0.12602728212265396,
        0.4186929342155985,
        0.8549955217180987,
    ];

    #[test]
    fn cosine_t4_matches_direct_evaluation_oracle() {
        let s = NoiseSchedule::cosine(4, 0.008, 0.999).unwrap();
        for t in 1..=4 {
            assert_relative_eq!(s.beta(t), COSINE_T4_BETAS[t - 1], max_relative = 1e-14);
            assert_relative_eq!(
                s.alpha_bar(t),
                COSINE_T4_ALPHA_BARS[t - 1],
                max_relative = 1e-14
            );
            assert_relative_eq!(
                s.posterior_variance(t),
                COSINE_T4_POSTERIOR[t - 1],
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn default_run_configuration_builds() {
        let s = NoiseSchedule::cosine(100, 0.008, 0.999).unwrap();
        assert_eq!(s.t_max(), 100);
        assert!(s.alpha_bar(1) < 1.0);
        // the cap engages on the last step at T=100
        assert_eq!(s.beta(100), 0.999);
        assert_relative_eq!(s.beta(1), 0.00063128159834152, max_relative = 1e-12);
        assert_relative_eq!(s.alpha_bar(100), 2.428572279350056e-7, max_relative = 1e-12);
    }

    #[test]
    fn linear_examples() {
        let s = NoiseSchedule::linear(2, 0.1, 0.1).unwrap();
        assert_eq!(s.betas(), &[0.1, 0.1]);
        assert_relative_eq!(s.alpha_bar(1), 0.9, max_relative = 1e-15);
        assert_relative_eq!(s.alpha_bar(2), 0.81, max_relative = 1e-15);

        let s = NoiseSchedule::linear(3, 0.1, 0.3).unwrap();
        assert_relative_eq!(s.beta(1), 0.1);
        assert_relative_eq!(s.beta(2), 0.2);
        assert_relative_eq!(s.beta(3), 0.3);
        // cumulative product oracle: 0.9, 0.9*0.8, 0.9*0.8*0.7
        assert_relative_eq!(s.alpha_bar(1), 0.9, max_relative = 1e-15);
        assert_relative_eq!(s.alpha_bar(2), 0.72, max_relative = 1e-15);
        assert_relative_eq!(s.alpha_bar(3), 0.504, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(NoiseSchedule::cosine(1, 0.008, 0.999).is_err());
        assert!(NoiseSchedule::cosine(10, 0.0, 0.999).is_err());
        assert!(NoiseSchedule::cosine(10, 0.008, 1.0).is_err());
        assert!(NoiseSchedule::linear(3, 0.3, 0.1).is_err());
        assert!(NoiseSchedule::linear(3, 0.0, 0.1).is_err());
        assert!(NoiseSchedule::linear(3, 0.1, 1.0).is_err());
    }

    #[test]
    fn timestep_bounds() {
        let s = NoiseSchedule::cosine(10, 0.008, 0.999).unwrap();
        assert!(s.check_t(0).is_err());
        assert!(s.check_t(1).is_ok());
        assert!(s.check_t(10).is_ok());
        assert!(s.check_t(11).is_err());
    }

    proptest! {
        #[test]
        fn invariants_hold_for_cosine(t_max in 2usize..200, offset in 1e-4f64..0.1) {
            let s = NoiseSchedule::cosine(t_max, offset, 0.999).unwrap();
            // cumulative-product identity to 1 ulp
            for t in 2..=t_max {
                let expect = s.alpha_bar(t - 1) * s.alpha(t);
                prop_assert!((s.alpha_bar(t) - expect).abs() <= f64::EPSILON * expect.abs());
            }
            // beta reconstruction from stored alpha_bars
            for t in 1..=t_max {
                let recon = 1.0 - s.alpha_bar(t) / s.alpha_bar(t - 1);
                prop_assert!((recon - s.beta(t)).abs() <= 1e-12 * s.beta(t));
            }
            // posterior identity, with beta~_1 = 0
            prop_assert_eq!(s.posterior_variance(1), 0.0);
            for t in 2..=t_max {
                let expect = s.beta(t) * (1.0 - s.alpha_bar(t - 1)) / (1.0 - s.alpha_bar(t));
                prop_assert!((s.posterior_variance(t) - expect).abs() <= 1e-15);
            }
        }

        #[test]
        fn invariants_hold_for_linear(
            t_max in 2usize..200,
            start in 1e-4f64..0.01,
            spread in 0.0f64..0.2,
        ) {
            let s = NoiseSchedule::linear(t_max, start, start + spread).unwrap();
            let mut prev = 1.0;
            for t in 1..=t_max {
                prop_assert!(s.alpha_bar(t) < prev);
                prop_assert!(s.posterior_variance(t) <= s.beta(t));
                prev = s.alpha_bar(t);
            }
        }
    }
}
