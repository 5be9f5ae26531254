//! Summand laws and an index-addressable i.i.d. field `{xi_n : n in N^d}`.
//!
//! Values are generated by hashing `(seed, n)` so any lattice cell can be
//! regenerated on demand; nothing about the grid is ever stored here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Family and parameters of the generic summand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SummandKind {
    Constant { value: f64 },
    Exponential { rate: f64 },
    /// `scale * Bernoulli(p)`.
    BernoulliScaled { scale: f64, p: f64 },
    /// `shift + scale * (U^{-1/alpha} - 1)`: Lomax tail of index `alpha`, support `[shift, inf)`.
    ShiftedPareto { alpha: f64, scale: f64, shift: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummandDistribution {
    kind: SummandKind,
    mu: f64,
    sigma2: f64,
}

impl SummandDistribution {
    pub fn constant(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Argument(format!("constant summand must be positive, got {value}")));
        }
        Ok(Self { kind: SummandKind::Constant { value }, mu: value, sigma2: 0.0 })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Argument(format!("exponential rate must be positive, got {rate}")));
        }
        Ok(Self {
            kind: SummandKind::Exponential { rate },
            mu: 1.0 / rate,
            sigma2: 1.0 / (rate * rate),
        })
    }

    pub fn bernoulli_scaled(scale: f64, p: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !(p > 0.0 && p <= 1.0) {
            return Err(Error::Argument(format!(
                "bernoulli-scaled needs scale > 0 and p in (0, 1], got scale={scale}, p={p}"
            )));
        }
        Ok(Self {
            kind: SummandKind::BernoulliScaled { scale, p },
            mu: scale * p,
            sigma2: scale * scale * p * (1.0 - p),
        })
    }

    pub fn shifted_pareto(alpha: f64, scale: f64, shift: f64) -> Result<Self> {
        if !(alpha > 1.0) || !(scale > 0.0) || !shift.is_finite() {
            return Err(Error::Argument(format!(
                "shifted-pareto needs alpha > 1 and scale > 0, got alpha={alpha}, scale={scale}"
            )));
        }
        let mu = shift + scale / (alpha - 1.0);
        if !(mu > 0.0) {
            return Err(Error::Argument(format!("shifted-pareto mean {mu} must be positive")));
        }
        let sigma2 = if alpha > 2.0 {
            scale * scale * alpha / ((alpha - 1.0).powi(2) * (alpha - 2.0))
        } else {
            f64::INFINITY
        };
        Ok(Self { kind: SummandKind::ShiftedPareto { alpha, scale, shift }, mu, sigma2 })
    }

    pub fn kind(&self) -> SummandKind {
        self.kind
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    pub fn nonnegative(&self) -> bool {
        match self.kind {
            SummandKind::ShiftedPareto { shift, .. } => shift >= 0.0,
            _ => true,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, SummandKind::Constant { .. })
    }

    /// Smallest value in the support.
    pub fn support_min(&self) -> f64 {
        match self.kind {
            SummandKind::Constant { value } => value,
            SummandKind::Exponential { .. } | SummandKind::BernoulliScaled { .. } => 0.0,
            SummandKind::ShiftedPareto { shift, .. } => shift,
        }
    }

    /// Maps a uniform draw in `(0, 1)` to a summand value.
    pub fn quantile(&self, u: f64) -> f64 {
        match self.kind {
            SummandKind::Constant { value } => value,
            SummandKind::Exponential { rate } => -u.ln() / rate,
            SummandKind::BernoulliScaled { scale, p } => {
                if u < p {
                    scale
                } else {
                    0.0
                }
            }
            SummandKind::ShiftedPareto { alpha, scale, shift } => {
                shift + scale * (u.powf(-1.0 / alpha) - 1.0)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.kind {
            SummandKind::Constant { value } => f64::from(x >= value),
            SummandKind::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - (-rate * x).exp()
                }
            }
            SummandKind::BernoulliScaled { scale, p } => {
                if x < 0.0 {
                    0.0
                } else if x < scale {
                    1.0 - p
                } else {
                    1.0
                }
            }
            SummandKind::ShiftedPareto { alpha, scale, shift } => {
                if x <= shift {
                    0.0
                } else {
                    1.0 - (1.0 + (x - shift) / scale).powf(-alpha)
                }
            }
        }
    }

    /// Analytic moment conditions for dimension `d`.
    pub fn moment_summary(&self, d: usize) -> MomentSummary {
        // Power-tailed family: E|xi|^b log^k|xi| < inf iff b < alpha, for every k >= 0.
        let tail_index = match self.kind {
            SummandKind::ShiftedPareto { alpha, .. } => Some(alpha),
            _ => None,
        };
        MomentSummary {
            dimension: d,
            mu: self.mu,
            sigma2: self.sigma2,
            beta_upper: tail_index.map_or(2.0, |a| a.min(2.0)),
            wichura: tail_index.map_or(true, |a| a > 2.0),
            log_moment: true,
            finite_variance: self.sigma2.is_finite(),
        }
    }
}

impl fmt::Display for SummandDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SummandKind::Constant { value } => write!(f, "constant:{value}"),
            SummandKind::Exponential { rate } => write!(f, "exponential:{rate}"),
            SummandKind::BernoulliScaled { scale, p } => write!(f, "bernoulli:{scale},{p}"),
            SummandKind::ShiftedPareto { alpha, scale, shift } => {
                write!(f, "pareto:{alpha},{scale},{shift}")
            }
        }
    }
}

/// Parses `constant:2`, `exponential:1`, `bernoulli:scale,p`, `pareto:alpha,scale[,shift]`.
impl FromStr for SummandDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let nums = params
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Argument(format!("bad number {p:?} in distribution {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::Argument(format!("distribution {name:?} takes {n} parameters in {s:?}")))
            }
        };
        match name.trim() {
            "constant" => arity(1).and_then(|_| Self::constant(nums[0])),
            "exponential" => arity(1).and_then(|_| Self::exponential(nums[0])),
            "bernoulli" | "bernoulli-scaled" => {
                arity(2).and_then(|_| Self::bernoulli_scaled(nums[0], nums[1]))
            }
            "pareto" | "shifted-pareto" => match nums.len() {
                2 => Self::shifted_pareto(nums[0], nums[1], 0.0),
                _ => arity(3).and_then(|_| Self::shifted_pareto(nums[0], nums[1], nums[2])),
            },
            other => Err(Error::Argument(format!("unknown distribution family {other:?}"))),
        }
    }
}

/// Which moment conditions the summand law satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub dimension: usize,
    pub mu: f64,
    pub sigma2: f64,
    /// `E(|xi|^b log^{d-1}|xi|) < inf` holds exactly for `b` in `[1, beta_upper)`.
    pub beta_upper: f64,
    /// `E[xi^2 log^{d-1}|xi| / loglog|xi|] < inf`.
    pub wichura: bool,
    /// `E(xi log^{d-1} xi) < inf`.
    pub log_moment: bool,
    pub finite_variance: bool,
}

impl MomentSummary {
    pub fn admits_beta(&self, beta: f64) -> bool {
        (1.0..2.0).contains(&beta) && beta < self.beta_upper
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replicate `id` of a run keyed by `seed`.
pub fn derive_seed(seed: u64, id: u64) -> u64 {
    mix64(mix64(seed ^ 0xD1B5_4A32_D192_ED03) ^ id)
}

/// Hash of `(key, n)` mapped to the open interval `(0, 1)`.
fn hashed_uniform(key: u64, n: &[usize]) -> f64 {
    let h = n.iter().fold(key, |h, &c| mix64(h ^ c as u64));
    ((h >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Stateless i.i.d. field over `N^d`; a pure function of `(seed, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSampler {
    seed: u64,
    key: u64,
    distribution: SummandDistribution,
    dim: usize,
}

impl FieldSampler {
    pub fn new(seed: u64, distribution: SummandDistribution, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("dimension must be at least 1".into()));
        }
        Ok(Self { seed, key: mix64(seed ^ 0xA076_1D64_78BD_642F), distribution, dim })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn distribution(&self) -> &SummandDistribution {
        &self.distribution
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sampler for replicate `id`, independent of the parent stream.
    pub fn replicate(&self, id: u64) -> Self {
        Self::new(derive_seed(self.seed, id), self.distribution, self.dim)
            .expect("parent sampler is valid")
    }

    /// `xi_n`; every component of `n` must be at least 1.
    pub fn sample_at(&self, n: &[usize]) -> Result<f64> {
        if n.len() != self.dim {
            return Err(Error::Domain(format!(
                "index {n:?} has {} components, field has dimension {}",
                n.len(),
                self.dim
            )));
        }
        if n.iter().any(|&c| c == 0) {
            return Err(Error::Domain(format!("summands are indexed from 1, got {n:?}")));
        }
        Ok(self.value(n))
    }

    /// Unchecked variant of [`sample_at`](Self::sample_at) for hot loops over valid indices.
    #[inline]
    pub fn value(&self, n: &[usize]) -> f64 {
        if let SummandKind::Constant { value } = self.distribution.kind {
            return value;
        }
        self.distribution.quantile(hashed_uniform(self.key, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_constant() {
        let s = FieldSampler::new(3, SummandDistribution::constant(2.0).unwrap(), 2).unwrap();
        assert_eq!(s.sample_at(&[1, 1]).unwrap(), 2.0);
        assert_eq!(s.sample_at(&[40, 7]).unwrap(), 2.0);
    }

    #[test]
    fn repeat_queries_agree() {
        let s = FieldSampler::new(7, SummandDistribution::exponential(1.0).unwrap(), 2).unwrap();
        let a = s.sample_at(&[3, 5]).unwrap();
        let b = s.sample_at(&[3, 5]).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_ne!(a, s.sample_at(&[5, 3]).unwrap());
    }

    #[test]
    fn zero_component_is_domain_error() {
        let s = FieldSampler::new(1, SummandDistribution::exponential(1.0).unwrap(), 2).unwrap();
        assert!(matches!(s.sample_at(&[0, 4]), Err(Error::Domain(_))));
        assert!(matches!(s.sample_at(&[1, 2, 3]), Err(Error::Domain(_))));
    }

    #[test]
    fn exponential_mean() {
        let s = FieldSampler::new(11, SummandDistribution::exponential(1.0).unwrap(), 2).unwrap();
        let n = 1000;
        let mut sum = 0.0;
        for i in 1..=n {
            for j in 1..=n {
                sum += s.value(&[i, j]);
            }
        }
        let mean = sum / (n * n) as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn family_moments() {
        let e = SummandDistribution::exponential(2.0).unwrap();
        assert_eq!((e.mu(), e.sigma2()), (0.5, 0.25));
        let b = SummandDistribution::bernoulli_scaled(3.0, 0.5).unwrap();
        assert_eq!((b.mu(), b.sigma2()), (1.5, 2.25));
        let c = SummandDistribution::constant(2.0).unwrap();
        assert_eq!((c.mu(), c.sigma2()), (2.0, 0.0));
        let p = SummandDistribution::shifted_pareto(3.0, 2.0, 0.0).unwrap();
        assert_eq!(p.mu(), 1.0);
        assert_eq!(p.sigma2(), 4.0 * 3.0 / (4.0 * 1.0));
    }

    #[test]
    fn moment_report() {
        let e = SummandDistribution::exponential(1.0).unwrap().moment_summary(2);
        assert!(e.wichura && e.admits_beta(1.0) && e.admits_beta(1.99));

        let p = SummandDistribution::shifted_pareto(1.3, 1.0, 0.0).unwrap().moment_summary(2);
        assert!(p.admits_beta(1.0) && p.admits_beta(1.29));
        assert!(!p.admits_beta(1.3) && !p.admits_beta(1.5));
        assert!(!p.wichura && !p.finite_variance);

        let c = SummandDistribution::constant(2.0).unwrap().moment_summary(3);
        assert_eq!(c.sigma2, 0.0);
        assert!(c.wichura && c.admits_beta(1.5));
    }

    #[test]
    fn signed_pareto_is_not_nonnegative() {
        let p = SummandDistribution::shifted_pareto(3.0, 2.0, -0.5).unwrap();
        assert!(!p.nonnegative());
        assert!(SummandDistribution::shifted_pareto(3.0, 2.0, -2.0).is_err());
    }

    #[test]
    fn parse_and_display() {
        for s in ["constant:2", "exponential:1", "bernoulli:3,0.5", "pareto:2.5,1,0"] {
            let d: SummandDistribution = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("gamma:1".parse::<SummandDistribution>().is_err());
        assert!("exponential:1,2".parse::<SummandDistribution>().is_err());
    }
}
