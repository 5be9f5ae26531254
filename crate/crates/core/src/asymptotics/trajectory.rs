//! One realisation of the field seen along a dyadic threshold grid: inclusion
//! checks against `H(c)` and `H_K(c)`, and the distances behind the LIL and
//! liminf statements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::envelope::phi;
use crate::error::{Error, Result};
use crate::limit_geometry::{
    hausdorff_estimate, l_k, level_radial, orthant_net, planar_net, BoundaryCloud, ConeLimitSet, ConeSpec,
    LimitSet, LkMethod, SetSample,
};
use crate::multisum::{LatticeSums, PrefixGrid, StaircaseGrid};
use crate::noise_field::{FieldSampler, SummandDistribution};
use crate::renewal_set::{planar_extent, RenewalSetView};
use crate::scalar::volume;

/// Renewal-set view over a shared trajectory backend.
pub type SourceView<'a> = RenewalSetView<f64, &'a dyn LatticeSums<f64>>;

/// Anything that can hand out `M_t` for thresholds on a grid.
pub trait SetSource {
    fn dim(&self) -> usize;
    fn distribution(&self) -> &SummandDistribution;
    fn view(&self, t: f64) -> Result<SourceView<'_>>;
}

/// A lattice-sum backend plus the law of its summands.
#[derive(Debug, Clone)]
pub struct GridSource<L> {
    sums: L,
    distribution: SummandDistribution,
}

impl<L: LatticeSums<f64>> GridSource<L> {
    pub fn new(sums: L, distribution: SummandDistribution) -> Self {
        Self { sums, distribution }
    }

    pub fn sums(&self) -> &L {
        &self.sums
    }
}

impl GridSource<StaircaseGrid<f64>> {
    /// Planar source valid for every `t <= t_max` inside the scaled window
    /// `[0, window]^2` (and a wider one for smaller `t`).
    pub fn planar(sampler: &FieldSampler, t_max: f64, window: f64) -> Result<Self> {
        let extent = planar_extent(t_max, window);
        let grid = StaircaseGrid::build(sampler, t_max, extent, extent)?;
        Ok(Self::new(grid, *sampler.distribution()))
    }
}

impl GridSource<PrefixGrid<f64>> {
    pub fn dense(sampler: &FieldSampler, extent: &[usize]) -> Result<Self> {
        Ok(Self::new(PrefixGrid::build(sampler, extent)?, *sampler.distribution()))
    }
}

impl<L: LatticeSums<f64>> SetSource for GridSource<L> {
    fn dim(&self) -> usize {
        self.sums.dim()
    }

    fn distribution(&self) -> &SummandDistribution {
        &self.distribution
    }

    fn view(&self, t: f64) -> Result<SourceView<'_>> {
        RenewalSetView::new(&self.sums as &dyn LatticeSums<f64>, t, &self.distribution)
    }
}

/// `t = 2^j` for `j` in `lo..=hi`.
pub fn dyadic_grid(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|j| 2f64.powi(j as i32)).collect()
}

/// Unit directions whose `H(0)` boundary point lies in `[0, window]^d` (`d <= 3`).
pub fn window_directions(d: usize, mu: f64, window: f64, count: usize) -> Result<Vec<Vec<f64>>> {
    let level = 1.0 / mu;
    if d == 2 {
        let w2 = window * window;
        let (lo, hi) = ((level / w2).atan(), (w2 / level).atan());
        if lo >= hi {
            return Err(Error::Argument(format!("window {window} does not meet the limit set")));
        }
        return Ok(planar_net(lo, hi, count));
    }
    let dirs: Vec<Vec<f64>> = orthant_net(d, count)?
        .into_iter()
        .filter(|u| {
            let r = level_radial(level, u).unwrap_or(f64::INFINITY);
            u.iter().all(|&v| r * v <= window)
        })
        .collect();
    if dirs.is_empty() {
        return Err(Error::Argument(format!("window {window} does not meet the limit set")));
    }
    Ok(dirs)
}

fn radials(view: &SourceView<'_>, directions: &[Vec<f64>]) -> Result<Vec<Option<f64>>> {
    directions
        .iter()
        .map(|u| match view.radial(u, view.default_tol(u)) {
            Ok(r) => Ok(Some(r.value)),
            Err(Error::OutsideRegion(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// Slack for comparing a bisected radial value with a closed form.
fn slack(view: &SourceView<'_>, u: &[f64]) -> f64 {
    2.0 * view.default_tol(u)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SllnRow {
    pub t: f64,
    /// `eps * t^{-1 + 1/beta}`.
    pub margin: f64,
    /// `H(margin) ⊂ t^{-1/d} M_t` on every tested ray and spot point.
    pub lower_ok: bool,
    /// `t^{-1/d} M_t ⊂ H(-margin)` on every tested ray and spot point.
    pub upper_ok: bool,
    pub violations: usize,
    /// Rays or points that left the stored region and were skipped.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SllnReport {
    pub beta: f64,
    pub epsilon: f64,
    /// Moment condition `E|xi|^beta < inf` holds for the summand law.
    pub moment_ok: bool,
    pub rows: Vec<SllnRow>,
    /// Largest `t` with a violation.
    pub last_violation: Option<f64>,
}

/// Inclusions `H(eps t^{-1+1/beta}) ⊂ t^{-1/d} M_t ⊂ H(-eps t^{-1+1/beta})`, checked by
/// radial comparisons along `directions` and by `spot_checks` membership tests at
/// random points within 30% of the limit boundary.
pub fn slln_inclusion_check<S: SetSource + ?Sized>(
    source: &S,
    beta: f64,
    epsilon: f64,
    ts: &[f64],
    directions: &[Vec<f64>],
    spot_checks: usize,
    seed: u64,
) -> Result<SllnReport> {
    if !(epsilon > 0.0) || !(beta >= 1.0 && beta < 2.0) {
        return Err(Error::Argument(format!("need eps > 0 and 1 <= beta < 2, got eps={epsilon}, beta={beta}")));
    }
    let dist = *source.distribution();
    let d = source.dim();
    let base = 1.0 / dist.mu();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let view = source.view(t)?;
        let margin = epsilon * t.powf(-1.0 + 1.0 / beta);
        let (hi_level, lo_level) = (base + margin, base - margin);
        let mut row = SllnRow { t, margin, lower_ok: true, upper_ok: true, violations: 0, skipped: 0 };
        for (u, r) in directions.iter().zip(radials(&view, directions)?) {
            let Some(r) = r else {
                row.skipped += 1;
                continue;
            };
            let s = slack(&view, u);
            if r > level_radial(hi_level, u)? + s {
                row.lower_ok = false;
                row.violations += 1;
            }
            if r < level_radial(lo_level, u)? - s {
                row.upper_ok = false;
                row.violations += 1;
            }
        }
        for _ in 0..spot_checks {
            let u = &directions[rng.gen_range(0..directions.len())];
            let a = level_radial(base, u)? * (1.0 + rng.gen_range(-0.3..0.3));
            let x: Vec<f64> = u.iter().map(|&v| v * a).collect();
            let inside = match view.contains(&x) {
                Ok(b) => b,
                Err(Error::OutsideRegion(_)) => {
                    row.skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let vol = volume(&x);
            if vol >= hi_level && !inside {
                row.lower_ok = false;
                row.violations += 1;
            }
            if inside && vol < lo_level {
                row.upper_ok = false;
                row.violations += 1;
            }
        }
        rows.push(row);
    }
    let last_violation = rows.iter().rev().find(|r| r.violations > 0).map(|r| r.t);
    Ok(SllnReport {
        beta,
        epsilon,
        moment_ok: dist.moment_summary(d).admits_beta(beta),
        rows,
        last_violation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LilRow {
    pub t: f64,
    /// `gamma * sigma * phi(t)`.
    pub c: f64,
    /// `t^{-1/d} M_t ⊂ H_K(c)`.
    pub subset_ok: bool,
    /// `H_K(c) ⊂ t^{-1/d} M_t`.
    pub superset_ok: bool,
    pub skipped: usize,
}

impl LilRow {
    /// The inclusion the sign of `gamma` predicts: subset for `gamma < 0`, superset otherwise.
    pub fn predicted_ok(&self, gamma: f64) -> bool {
        if gamma < 0.0 {
            self.subset_ok
        } else {
            self.superset_ok
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LilReport {
    pub gamma: f64,
    /// `sigma = 0`: `H_K(c) = H` and both inclusions hold by construction.
    pub degenerate: bool,
    pub wichura_ok: bool,
    pub rows: Vec<LilRow>,
}

impl LilReport {
    /// Smallest grid `t` from which the predicted inclusion holds through the end of the grid.
    pub fn settled_from(&self) -> Option<f64> {
        let mut from = None;
        for row in &self.rows {
            if row.predicted_ok(self.gamma) {
                from.get_or_insert(row.t);
            } else {
                from = None;
            }
        }
        from
    }
}

/// `t^{-1/d} M_t` against `H_K(gamma sigma phi(t))` in both directions, by radial
/// comparisons along `directions` (inside and outside the cone).
pub fn lil_envelope_check<S: SetSource + ?Sized>(
    source: &S,
    gamma: f64,
    cone: &ConeSpec<f64>,
    ts: &[f64],
    directions: &[Vec<f64>],
) -> Result<LilReport> {
    let dist = *source.distribution();
    if cone.dim() != source.dim() {
        return Err(Error::InvalidCone(format!("cone dimension {} differs from field dimension {}", cone.dim(), source.dim())));
    }
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let view = source.view(t)?;
        let c = gamma * dist.sigma() * phi(t)?;
        let target = ConeLimitSet::new(*cone, dist.mu(), c)?;
        let mut row = LilRow { t, c, subset_ok: true, superset_ok: true, skipped: 0 };
        for (u, r) in directions.iter().zip(radials(&view, directions)?) {
            let Some(r) = r else {
                row.skipped += 1;
                continue;
            };
            let rk = target.radial(u)?;
            let s = slack(&view, u);
            row.subset_ok &= r >= rk - s;
            row.superset_ok &= r <= rk + s;
        }
        rows.push(row);
    }
    Ok(LilReport {
        gamma,
        degenerate: dist.sigma2() == 0.0,
        wichura_ok: dist.moment_summary(source.dim()).wichura,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryConfig {
    /// Dyadic exponents `j_min..=j_max` of the threshold grid.
    pub log2_t: (u32, u32),
    /// Scaled window `[0, W]^d` for the Hausdorff distance.
    pub window: f64,
    /// Rays used for the boundary clouds behind `rho_H`.
    pub hausdorff_directions: usize,
    /// Rays per check for the inclusion tests.
    pub check_directions: usize,
    pub cone: ConeSpec<f64>,
    /// Panels of the cone quadrature behind `rho_triangle`.
    pub symdiff_panels: usize,
}

impl TrajectoryConfig {
    /// Planar defaults: `t = 2^8..2^20`, `W = 4 * sqrt(2) mu^{-1/2}`, cone `[pi/6, pi/3]`.
    pub fn planar(mu: f64) -> Self {
        Self {
            log2_t: (8, 20),
            window: 4.0 * (2.0 / mu).sqrt(),
            hausdorff_directions: 2048,
            check_directions: 64,
            cone: ConeSpec::AngleInterval {
                lo: std::f64::consts::FRAC_PI_6,
                hi: std::f64::consts::FRAC_PI_3,
            },
            symdiff_panels: 16,
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        dyadic_grid(self.log2_t.0, self.log2_t.1)
    }

    pub fn t_max(&self) -> f64 {
        2f64.powi(self.log2_t.1 as i32)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    /// `rho_H(t^{-1/d} M_t, H)` on the window.
    pub rho_h: f64,
    /// The Hausdorff maximiser touched the window edge.
    pub rho_h_truncated: bool,
    /// `rho_triangle^K(t^{-1/d} M_t, H)`.
    pub rho_tri: f64,
    pub phi_t: f64,
    pub ratio_h: f64,
    pub ratio_tri: f64,
    pub running_sup_h: f64,
    pub running_sup_tri: f64,
    /// `sqrt(t) rho_H` and its running minimum.
    pub scaled_h: f64,
    pub scaled_tri: f64,
    pub running_min_h: f64,
    pub running_min_tri: f64,
    pub dropped_rays: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub mu: f64,
    pub sigma: f64,
    pub dim: usize,
    pub window: f64,
    pub rows: Vec<TrajectoryRow>,
}

/// Distances from `t^{-1/d} M_t` to `H` along the dyadic grid, with running extrema.
pub fn run_trajectory<S: SetSource + ?Sized>(source: &S, cfg: &TrajectoryConfig) -> Result<TrajectoryRecord> {
    let dist = *source.distribution();
    let d = source.dim();
    let mu = dist.mu();
    let h = LimitSet::new(mu, 0.0, d)?;
    let dirs = window_directions(d, mu, cfg.window, cfg.hausdorff_directions)?;
    let mut rows: Vec<TrajectoryRow> = Vec::new();
    for t in cfg.grid() {
        let view = source.view(t)?;
        let mut kept = Vec::with_capacity(dirs.len());
        let mut pts = Vec::with_capacity(dirs.len());
        for (u, r) in dirs.iter().zip(radials(&view, &dirs)?) {
            if let Some(r) = r {
                pts.push(u.iter().map(|&v| v * r).collect::<Vec<_>>());
                kept.push(u.clone());
            }
        }
        if pts.is_empty() {
            return Err(Error::OutsideRegion(vec![t]));
        }
        let dropped = dirs.len() - pts.len();
        let cloud = BoundaryCloud::new(d, pts)?;
        let h_cloud = BoundaryCloud::of_limit(&h, &kept)?;
        let rho =
            hausdorff_estimate(SetSample::Cloud(&cloud), SetSample::Limit { set: &h, boundary: &h_cloud }, cfg.window)?;
        let rho_tri = view.symdiff_to_limit(&h, &cfg.cone, cfg.symdiff_panels)?.value;
        let phi_t = phi(t)?;
        let (ratio_h, ratio_tri) = (rho.distance / phi_t, rho_tri / phi_t);
        let (scaled_h, scaled_tri) = (t.sqrt() * rho.distance, t.sqrt() * rho_tri);
        let prev = rows.last();
        rows.push(TrajectoryRow {
            t,
            rho_h: rho.distance,
            rho_h_truncated: rho.truncated,
            rho_tri,
            phi_t,
            ratio_h,
            ratio_tri,
            running_sup_h: prev.map_or(ratio_h, |p| p.running_sup_h.max(ratio_h)),
            running_sup_tri: prev.map_or(ratio_tri, |p| p.running_sup_tri.max(ratio_tri)),
            scaled_h,
            scaled_tri,
            running_min_h: prev.map_or(scaled_h, |p| p.running_min_h.min(scaled_h)),
            running_min_tri: prev.map_or(scaled_tri, |p| p.running_min_tri.min(scaled_tri)),
            dropped_rays: dropped,
        });
    }
    Ok(TrajectoryRecord { mu, sigma: dist.sigma(), dim: d, window: cfg.window, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricLilStats {
    /// `(t, running sup of rho_H / phi(t))`.
    pub running_sup_h: Vec<(f64, f64)>,
    pub running_sup_tri: Vec<(f64, f64)>,
    /// `d^{-1/2} sigma mu^{-1/2 - 1/d}`, the a.s. limsup of `rho_H / phi`.
    pub constant_h: f64,
    /// `factor * sigma mu^{-3/2} L_K` with factor 1 for nonnegative summands, 2 otherwise.
    pub bound_tri: f64,
    pub degenerate: bool,
}

pub fn metric_lil_constant(sigma: f64, mu: f64, d: usize) -> f64 {
    let df = d as f64;
    sigma * mu.powf(-0.5 - 1.0 / df) / df.sqrt()
}

pub fn symdiff_lil_bound(sigma: f64, mu: f64, nonnegative: bool, cone: &ConeSpec<f64>) -> Result<f64> {
    let method = if cone.angle_interval().is_some() { LkMethod::Analytic2d } else { LkMethod::default() };
    let factor = if nonnegative { 1.0 } else { 2.0 };
    Ok(factor * sigma * mu.powf(-1.5) * l_k(cone, method)?.value)
}

pub fn metric_lil_stats(traj: &TrajectoryRecord, cone: &ConeSpec<f64>) -> Result<MetricLilStats> {
    Ok(MetricLilStats {
        running_sup_h: traj.rows.iter().map(|r| (r.t, r.running_sup_h)).collect(),
        running_sup_tri: traj.rows.iter().map(|r| (r.t, r.running_sup_tri)).collect(),
        constant_h: metric_lil_constant(traj.sigma, traj.mu, traj.dim),
        bound_tri: symdiff_lil_bound(traj.sigma, traj.mu, true, cone)?,
        degenerate: traj.sigma == 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiminfStats {
    /// `(t, running min of sqrt(t) rho_H)`.
    pub running_min_h: Vec<(f64, f64)>,
    pub running_min_tri: Vec<(f64, f64)>,
}

impl LiminfStats {
    /// Running minimum of `sqrt(t) rho_H` at the largest grid point `<= t`.
    pub fn min_h_at(&self, t: f64) -> Option<f64> {
        self.running_min_h.iter().take_while(|(s, _)| *s <= t).last().map(|&(_, v)| v)
    }
}

pub fn liminf_stats(traj: &TrajectoryRecord) -> LiminfStats {
    LiminfStats {
        running_min_h: traj.rows.iter().map(|r| (r.t, r.running_min_h)).collect(),
        running_min_tri: traj.rows.iter().map(|r| (r.t, r.running_min_tri)).collect(),
    }
}
