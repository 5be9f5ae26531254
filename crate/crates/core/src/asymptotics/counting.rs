//! Growth of the lattice deficiency `N_t` against `t log^{d-1} t / (mu (d-1)!)`.

use serde::Serialize;

use super::envelope::log_ext;
use crate::error::Result;
use crate::noise_field::{FieldSampler, SummandDistribution, SummandKind};
use crate::renewal_set::{deficiency_count, divisor_count};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRow {
    pub t: f64,
    pub n_t: u64,
    /// `N_t / (t log^{d-1} t)`.
    pub ratio: f64,
    /// `1 / (mu (d-1)!)`.
    pub target: f64,
    /// `T_{ceil(t/c) - 1}` for a constant summand `c`, where `N_t` is a divisor count.
    pub divisor_oracle: Option<u128>,
}

pub fn n_t_target(mu: f64, d: usize) -> f64 {
    1.0 / (mu * (1..d).map(|k| k as f64).product::<f64>())
}

/// Exact `N_t` for a constant summand `c > 0`.
pub fn constant_deficiency(c: f64, d: usize, t: f64) -> u128 {
    if t <= 0.0 {
        return 0;
    }
    let k = (t / c).ceil() as u64;
    if k == 0 {
        0
    } else {
        divisor_count(d, k - 1)
    }
}

pub fn n_t_slln_check(dist: &SummandDistribution, d: usize, ts: &[f64], seed: u64) -> Result<Vec<CountRow>> {
    let sampler = FieldSampler::new(seed, *dist, d)?;
    let target = n_t_target(dist.mu(), d);
    ts.iter()
        .map(|&t| {
            let n_t = deficiency_count(&sampler, t)?;
            let divisor_oracle = match dist.kind() {
                SummandKind::Constant { value } => Some(constant_deficiency(value, d, t)),
                _ => None,
            };
            Ok(CountRow {
                t,
                n_t,
                ratio: n_t as f64 / (t * log_ext(t)?.powi(d as i32 - 1)),
                target,
                divisor_oracle,
            })
        })
        .collect()
}
