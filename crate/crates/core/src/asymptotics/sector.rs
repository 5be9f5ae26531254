//! Sectorial versus full-orthant LIL for the multiple sums themselves.

use serde::Serialize;

use super::envelope::chi;
use crate::error::{Error, Result};
use crate::limit_geometry::ConeSpec;
use crate::multisum::{LatticeSums, PrefixGrid};
use crate::noise_field::{FieldSampler, SummandDistribution};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorReport {
    pub horizon: usize,
    /// `max |S_n - mu|n|| / (sigma chi(|n|))` over lattice `n <= horizon` inside the cone.
    pub sup_cone: f64,
    pub argmax_cone: Vec<usize>,
    /// The same maximum over the whole box.
    pub sup_all: f64,
    pub argmax_all: Vec<usize>,
    /// `sup_all / sup_cone` (1 when both vanish).
    pub ratio: f64,
    /// Almost-sure limits of the two suprema: 1 in a cone, `sqrt(d)` overall.
    pub limit_cone: f64,
    pub limit_all: f64,
}

pub fn sectorial_lil_compare(
    dist: &SummandDistribution,
    cone: &ConeSpec<f64>,
    horizon: usize,
    seed: u64,
) -> Result<SectorReport> {
    cone.validate()?;
    if horizon == 0 {
        return Err(Error::Argument("horizon must be positive".into()));
    }
    let d = cone.dim();
    let sampler = FieldSampler::new(seed, *dist, d)?;
    let grid: PrefixGrid<f64> = PrefixGrid::build(&sampler, &vec![horizon; d])?;
    let sigma = dist.sigma();
    let mu = dist.mu();
    let mut best_cone = (0.0f64, vec![1; d]);
    let mut best_all = (0.0f64, vec![1; d]);
    let mut n = vec![1usize; d];
    let mut point = vec![0.0; d];
    loop {
        if sigma > 0.0 {
            let vol: f64 = n.iter().map(|&v| v as f64).product();
            let s = grid.lattice_sum(&n).expect("index inside the grid");
            let value = (s - mu * vol).abs() / (sigma * chi(vol)?);
            if value > best_all.0 {
                best_all = (value, n.clone());
            }
            for (p, &v) in point.iter_mut().zip(&n) {
                *p = v as f64;
            }
            if value > best_cone.0 && cone.contains(&point) {
                best_cone = (value, n.clone());
            }
        }
        let mut axis = 0;
        loop {
            if axis == d {
                let ratio = if best_cone.0 > 0.0 { best_all.0 / best_cone.0 } else { 1.0 };
                return Ok(SectorReport {
                    horizon,
                    sup_cone: best_cone.0,
                    argmax_cone: best_cone.1,
                    sup_all: best_all.0,
                    argmax_all: best_all.1,
                    ratio,
                    limit_cone: 1.0,
                    limit_all: (d as f64).sqrt(),
                });
            }
            if n[axis] < horizon {
                n[axis] += 1;
                break;
            }
            n[axis] = 1;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_sums_have_no_excursions() {
        let dist = SummandDistribution::constant(3.0).unwrap();
        let cone = ConeSpec::aperture(2, 0.5).unwrap();
        let rep = sectorial_lil_compare(&dist, &cone, 64, 1).unwrap();
        assert_eq!((rep.sup_cone, rep.sup_all, rep.ratio), (0.0, 0.0, 1.0));
    }

    #[test]
    fn cone_sup_is_dominated() {
        let dist = SummandDistribution::exponential(1.0).unwrap();
        for (d, theta) in [(2, 0.5), (3, 0.7)] {
            let cone = ConeSpec::aperture(d, theta).unwrap();
            let rep = sectorial_lil_compare(&dist, &cone, 24, 8).unwrap();
            assert!(rep.sup_cone <= rep.sup_all && rep.ratio >= 1.0);
            assert!(cone.contains(&rep.argmax_cone.iter().map(|&v| v as f64).collect::<Vec<_>>()));
        }
    }
}
