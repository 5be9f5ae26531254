//! Marginal CLT for radial functions: `sqrt(t) (r_t(u)^d - 1/(mu |u|))` is
//! asymptotically centred normal with variance `sigma^2 / (mu^3 |u|^2)`.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::ks::{ks_test, KsResult};
use crate::error::{Error, Result};
use crate::multisum::PrefixGrid;
use crate::noise_field::{FieldSampler, SummandDistribution};
use crate::renewal_set::RenewalSetView;
use crate::scalar::{euclidean_norm, volume};

/// Fewer replicates make asymptotic KS critical values unreliable.
pub const MIN_REPLICATES: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub t: f64,
    pub direction: Vec<f64>,
    /// Samples in replicate order.
    pub samples: Vec<f64>,
    pub variance_target: f64,
    pub sample_mean: f64,
    pub sample_variance: f64,
    /// `None` when `sigma = 0`.
    pub ks: Option<KsResult>,
    pub degenerate: bool,
}

pub fn clt_variance(dist: &SummandDistribution, u: &[f64]) -> f64 {
    let vol = volume(u);
    dist.sigma2() / (dist.mu().powi(3) * vol * vol)
}

/// One replicate of `sqrt(t) (r_t(u)^d - 1/(mu |u|))`.
pub fn clt_replicate(sampler: &FieldSampler, u: &[f64], t: f64) -> Result<f64> {
    let dist = sampler.distribution();
    let d = u.len();
    let vol = volume(u);
    let reach = 2.5 * (dist.mu() * vol).powf(-1.0 / d as f64);
    let r = if d == 2 {
        let window = reach * u.iter().cloned().fold(0.0, f64::max);
        let view = RenewalSetView::<f64, _>::planar(sampler, t, window)?;
        view.radial(u, view.default_tol(u))?.value
    } else {
        let scale = t.powf(1.0 / d as f64);
        let extent: Vec<usize> = u.iter().map(|&v| (reach * v * scale).ceil() as usize + 2).collect();
        let view = RenewalSetView::new(PrefixGrid::build(sampler, &extent)?, t, dist)?;
        view.radial(u, view.default_tol(u))?.value
    };
    Ok(t.sqrt() * (r.powi(d as i32) - 1.0 / (dist.mu() * vol)))
}

/// `replicates` independent samples and a KS test (alpha = 0.01) against the normal limit.
pub fn clt_sample(
    dist: &SummandDistribution,
    u: &[f64],
    t: f64,
    replicates: usize,
    seed: u64,
) -> Result<CltReport> {
    if replicates < MIN_REPLICATES {
        return Err(Error::Argument(format!(
            "need at least {MIN_REPLICATES} replicates for the KS test, got {replicates}"
        )));
    }
    if !dist.nonnegative() {
        return Err(Error::Unsupported("radial functions need nonnegative summands".into()));
    }
    if u.is_empty() || u.iter().any(|&v| !(v > 0.0)) || (euclidean_norm(u) - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("direction must be a Euclidean unit vector in the open orthant".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Argument(format!("threshold must be positive, got {t}")));
    }
    let variance_target = clt_variance(dist, u);
    let degenerate = dist.sigma2() == 0.0;
    let base = FieldSampler::new(seed, *dist, u.len())?;
    let samples = if degenerate {
        vec![0.0; replicates]
    } else {
        (0..replicates as u64)
            .map(|r| clt_replicate(&base.replicate(r), u, t))
            .collect::<Result<Vec<_>>>()?
    };
    let n = samples.len() as f64;
    let sample_mean = samples.iter().sum::<f64>() / n;
    let sample_variance = samples.iter().map(|x| (x - sample_mean).powi(2)).sum::<f64>() / (n - 1.0);
    let ks = if degenerate {
        None
    } else {
        let normal = Normal::new(0.0, variance_target.sqrt()).map_err(|e| Error::Argument(e.to_string()))?;
        let mut sorted = samples.clone();
        Some(ks_test(&mut sorted, |x| normal.cdf(x), 0.01))
    };
    Ok(CltReport {
        t,
        direction: u.to_vec(),
        samples,
        variance_target,
        sample_mean,
        sample_variance,
        ks,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn variance_for_diagonal_exponential() {
        let dist = SummandDistribution::exponential(1.0).unwrap();
        assert!((clt_variance(&dist, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn refuses_small_samples() {
        let dist = SummandDistribution::exponential(1.0).unwrap();
        let u = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        assert!(matches!(clt_sample(&dist, &u, 64.0, 10, 1), Err(Error::Argument(_))));
        assert!(matches!(clt_sample(&dist, &[0.6, 0.6], 64.0, 60, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn degenerate_law_gives_zeros() {
        let dist = SummandDistribution::constant(2.0).unwrap();
        let rep = clt_sample(&dist, &[0.6, 0.8], 256.0, 50, 1).unwrap();
        assert!(rep.degenerate && rep.ks.is_none());
        assert!(rep.samples.iter().all(|&s| s == 0.0));
        let sampler = FieldSampler::new(1, dist, 2).unwrap();
        assert!(clt_replicate(&sampler, &[0.6, 0.8], 256.0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn replicates_in_other_dimensions() {
        let dist = SummandDistribution::exponential(1.0).unwrap();
        let u3 = [1.0 / 3f64.sqrt(); 3];
        let rep = clt_sample(&dist, &u3, 512.0, 50, 4).unwrap();
        assert!(rep.samples.iter().all(|s| s.is_finite()));
        let rep1 = clt_sample(&dist, &[1.0], 256.0, 50, 4).unwrap();
        assert!((rep1.variance_target - 1.0).abs() < 1e-12);
    }
}
