//! One function per subcommand: resolved config in, CSV table and JSON summary out.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, FRAC_PI_8, SQRT_2};

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use renewal_sets::asymptotics::{
    chentsov_covariance, chentsov_simulate_on, chi, clt_sample, dyadic_grid, lil_envelope_check, liminf_stats,
    metric_lil_stats, n_t_slln_check, phi, run_trajectory, sectorial_lil_compare, slln_inclusion_check,
    window_directions, zeta_extrapolate, GridSource, TrajectoryConfig, TrajectoryRecord,
};
use renewal_sets::limit_geometry::{cone_net, planar_net, unit};
use renewal_sets::{
    divisor_count, hausdorff_closed, hausdorff_estimate, interpolate, l_k, symdiff_closed, symdiff_estimate,
    BoundaryCloud, ConeSpec, Error, FieldSampler, LimitSet, LkMethod, PrefixGrid, SetSample, StaircaseGrid,
    SummandDistribution,
};

use crate::config::{parse_cone, parse_distribution, parse_vector, require_seed, ConfigError};
use crate::output::{num, Criterion, Table};

pub enum CmdError {
    Config(String),
    Internal(String),
}

impl From<ConfigError> for CmdError {
    fn from(e: ConfigError) -> Self {
        CmdError::Config(e.0)
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_)
            | Error::Argument(_)
            | Error::InvalidCone(_)
            | Error::EmptySet(_)
            | Error::Unsupported(_)
            | Error::Capacity { .. }
            | Error::RowLimit(_) => CmdError::Config(e.to_string()),
            Error::OutsideRegion(_) => CmdError::Internal(e.to_string()),
        }
    }
}

pub struct Report {
    pub seed: Option<u64>,
    pub table: Table,
    pub criteria: Vec<Criterion>,
    pub statistics: Map<String, Value>,
}

const DEFAULT_ANGLES: &str = "angles:0.5235987755982988,1.0471975511965976";

fn stats(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

// ---------------------------------------------------------------- selftest

#[derive(Args, Serialize, Debug, Default)]
#[serde(rename_all = "kebab-case")]
pub struct SelftestFlags {
    /// Random points per dimension for the interpolation check.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SelftestConfig {
    pub points: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self { points: 1000 }
    }
}

pub fn selftest(cfg: &SelftestConfig) -> Result<Report, CmdError> {
    let mut table = Table::new(&["check", "value", "target", "tolerance", "pass"]);
    let mut criteria = Vec::new();
    let mut check = |name: &str, value: f64, target: f64, tol: f64| {
        let pass = (value - target).abs() <= tol;
        table.push(vec![name.into(), num(value), num(target), num(tol), pass.to_string()]);
        criteria.push(Criterion::new(name, value, target, pass));
    };

    let h0 = LimitSet::new(1.0, 0.0, 2)?;
    let h1 = LimitSet::new(1.0, 1.0, 2)?;
    let dirs = planar_net(0.0, FRAC_PI_2, 4000);
    let (b0, b1) = (BoundaryCloud::of_limit(&h0, &dirs)?, BoundaryCloud::of_limit(&h1, &dirs)?);
    let numeric = hausdorff_estimate(
        SetSample::Limit { set: &h0, boundary: &b0 },
        SetSample::Limit { set: &h1, boundary: &b1 },
        6.0,
    )?;
    let closed = hausdorff_closed(0.0, 1.0, 1.0, 2)?;
    check("hausdorff_closed", closed, 2.0 - SQRT_2, 1e-12);
    check("hausdorff_numeric", numeric.distance, closed, 0.01 * closed);

    let sector = ConeSpec::angles(FRAC_PI_6, FRAC_PI_3)?;
    let sd_closed = symdiff_closed(&sector, 0.0, 0.2, 1.0)?;
    let h02 = LimitSet::new(1.0, 0.2, 2)?;
    let sd_numeric = symdiff_estimate(&sector, |u| h0.radial(u), |u| h02.radial(u), 16)?;
    check("symdiff_closed", sd_closed, 0.2 * 0.5 * 3f64.ln(), 1e-12);
    check("symdiff_numeric", sd_numeric.value, sd_closed, 0.01 * sd_closed);

    check("l_k_sixth", l_k(&sector, LkMethod::default())?.value, 0.5 * 3f64.ln(), 1e-6);
    let wide = ConeSpec::angles(FRAC_PI_8, 3.0 * FRAC_PI_8)?;
    check("l_k_eighth", l_k(&wide, LkMethod::default())?.value, 0.5 * (3.0 + 2.0 * SQRT_2).ln(), 1e-6);

    let one = SummandDistribution::constant(1.0)?;
    for d in 1..=3usize {
        let sampler = FieldSampler::new(0, one, d)?;
        let grid: PrefixGrid<f64> = PrefixGrid::build(&sampler, &vec![21; d])?;
        let mut worst = 0.0f64;
        for k in 0..cfg.points {
            // Low-discrepancy points in (0, 20]^d.
            let x: Vec<f64> =
                (0..d).map(|i| 20.0 * ((k as f64 + 0.5) * (0.618_033_988_749_9 + 0.414_213_562 * i as f64)).fract()).collect();
            let vol: f64 = x.iter().product();
            worst = worst.max((interpolate(&grid, &x)? - vol).abs() / vol.max(1e-300));
        }
        check(&format!("interpolation_exact_d{d}"), worst, 0.0, 1e-12);
    }

    for d in [2usize, 3] {
        let mismatches = (1..=200u64)
            .filter(|&k| {
                let brute: u128 = match d {
                    2 => (1..=k).map(|i| (k / i) as u128).sum(),
                    _ => (1..=k).flat_map(|i| (1..=k / i).map(move |j| (k / (i * j)) as u128)).sum(),
                };
                brute != divisor_count(d, k)
            })
            .count();
        check(&format!("divisor_count_d{d}"), mismatches as f64, 0.0, 0.0);
    }
    let sampler = FieldSampler::new(0, one, 2)?;
    check("deficiency_unit_3.5", renewal_sets::deficiency_count(&sampler, 3.5)? as f64, 5.0, 0.0);
    check("chi_10", chi(10.0)?, 20f64.sqrt(), 1e-12);
    check("phi_100", phi(100.0)?, 0.174_767, 1e-6);

    Ok(Report { seed: None, table, criteria, statistics: Map::new() })
}

// ---------------------------------------------------------------- trajectory commands

#[derive(Args, Serialize, Debug, Default)]
#[serde(rename_all = "kebab-case")]
pub struct SllnFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Summand law, e.g. `exponential:1`, `constant:2`, `bernoulli:2,0.5`, `pareto:3,1`.
    #[arg(long)]
    pub distribution: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub log2_t_min: Option<u32>,
    #[arg(long)]
    pub log2_t_max: Option<u32>,
    /// Scaled window side; defaults to `4 sqrt(2/mu)`.
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long)]
    pub directions: Option<usize>,
    #[arg(long)]
    pub spot_checks: Option<usize>,
    /// Violations at `t >= 2^assert-from-log2` fail the run.
    #[arg(long)]
    pub assert_from_log2: Option<u32>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SllnConfig {
    pub seed: Option<u64>,
    pub distribution: String,
    pub beta: f64,
    pub epsilon: f64,
    pub log2_t_min: u32,
    pub log2_t_max: u32,
    pub window: Option<f64>,
    pub directions: usize,
    pub spot_checks: usize,
    pub assert_from_log2: u32,
}

impl Default for SllnConfig {
    fn default() -> Self {
        Self {
            seed: None,
            distribution: "exponential:1".into(),
            beta: 1.5,
            epsilon: 1.0,
            log2_t_min: 8,
            log2_t_max: 20,
            window: None,
            directions: 64,
            spot_checks: 200,
            assert_from_log2: 12,
        }
    }
}

fn planar_source(
    seed: u64,
    dist: SummandDistribution,
    log2: (u32, u32),
    window: f64,
) -> Result<GridSource<StaircaseGrid<f64>>, CmdError> {
    if log2.0 > log2.1 || log2.1 > 30 {
        return Err(CmdError::Config(format!("bad dyadic range 2^{}..2^{}", log2.0, log2.1)));
    }
    let sampler = FieldSampler::new(seed, dist, 2)?;
    Ok(GridSource::planar(&sampler, 2f64.powi(log2.1 as i32), 1.25 * window)?)
}

fn default_window(mu: f64) -> f64 {
    4.0 * (2.0 / mu).sqrt()
}

pub fn slln(cfg: &SllnConfig) -> Result<Report, CmdError> {
    let seed = require_seed(cfg.seed)?;
    let dist = parse_distribution(&cfg.distribution)?;
    let window = cfg.window.unwrap_or(default_window(dist.mu()));
    let log2 = (cfg.log2_t_min, cfg.log2_t_max);
    let source = planar_source(seed, dist, log2, window)?;
    let dirs = window_directions(2, dist.mu(), window, cfg.directions)?;
    let rep = slln_inclusion_check(&source, cfg.beta, cfg.epsilon, &dyadic_grid(log2.0, log2.1), &dirs, cfg.spot_checks, seed)?;
    let mut table = Table::new(&["t", "margin", "lower_ok", "upper_ok", "violations", "skipped"]);
    for r in &rep.rows {
        table.push(vec![
            num(r.t),
            num(r.margin),
            r.lower_ok.to_string(),
            r.upper_ok.to_string(),
            r.violations.to_string(),
            r.skipped.to_string(),
        ]);
    }
    let from = 2f64.powi(cfg.assert_from_log2 as i32);
    let late: usize = rep.rows.iter().filter(|r| r.t >= from).map(|r| r.violations).sum();
    Ok(Report {
        seed: Some(seed),
        table,
        criteria: vec![
            Criterion::new("violations_after_assert_from", late as u64, 0, late == 0),
            Criterion::new("moment_condition", rep.moment_ok, true, rep.moment_ok),
        ],
        statistics: stats(&[("last_violation", json!(rep.last_violation))]),
    })
}

#[derive(Args, Serialize, Debug, Default)]
#[serde(rename_all = "kebab-case")]
pub struct LilFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub distribution: Option<String>,
    #[arg(long)]
    pub log2_t_min: Option<u32>,
    #[arg(long)]
    pub log2_t_max: Option<u32>,
    #[arg(long)]
    pub window: Option<f64>,
    /// `angles:LO,HI` or `aperture:THETA`.
    #[arg(long)]
    pub cone: Option<String>,
    #[arg(long)]
    pub hausdorff_directions: Option<usize>,
    #[arg(long)]
    pub directions: Option<usize>,
    #[arg(long)]
    pub panels: Option<usize>,
    /// Envelope checks use `gamma = +-gamma-factor * mu^{-3/2}`.
    #[arg(long)]
    pub gamma_factor: Option<f64>,
    #[arg(long)]
    pub assert_from_log2: Option<u32>,
    #[arg(long)]
    pub band_low: Option<f64>,
    #[arg(long)]
    pub band_high: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct LilConfig {
    pub seed: Option<u64>,
    pub distribution: String,
    pub log2_t_min: u32,
    pub log2_t_max: u32,
    pub window: Option<f64>,
    pub cone: String,
    pub hausdorff_directions: usize,
    pub directions: usize,
    pub panels: usize,
    pub gamma_factor: f64,
    pub assert_from_log2: u32,
    pub band_low: f64,
    pub band_high: f64,
}

impl Default for LilConfig {
    fn default() -> Self {
        Self {
            seed: None,
            distribution: "exponential:1".into(),
            log2_t_min: 8,
            log2_t_max: 20,
            window: None,
            cone: DEFAULT_ANGLES.into(),
            hausdorff_directions: 2048,
            directions: 64,
            panels: 16,
            gamma_factor: 10.0,
            assert_from_log2: 14,
            band_low: 0.2,
            band_high: 3.0,
        }
    }
}

struct TrajectoryRun {
    source: GridSource<StaircaseGrid<f64>>,
    cfg: TrajectoryConfig,
    record: TrajectoryRecord,
    dist: SummandDistribution,
}

fn trajectory_run(
    seed: u64,
    distribution: &str,
    log2: (u32, u32),
    window: Option<f64>,
    cone: &str,
    hausdorff_directions: usize,
    directions: usize,
    panels: usize,
) -> Result<TrajectoryRun, CmdError> {
    let dist = parse_distribution(distribution)?;
    let cone = parse_cone(cone, 2)?;
    if cone.dim() != 2 {
        return Err(CmdError::Config("trajectory commands are planar; the cone must have dimension 2".into()));
    }
    let window = window.unwrap_or(default_window(dist.mu()));
    let cfg = TrajectoryConfig {
        log2_t: log2,
        window,
        hausdorff_directions,
        check_directions: directions,
        cone,
        symdiff_panels: panels,
    };
    let source = planar_source(seed, dist, log2, window)?;
    let record = run_trajectory(&source, &cfg)?;
    Ok(TrajectoryRun { source, cfg, record, dist })
}

pub fn lil(cfg: &LilConfig) -> Result<Report, CmdError> {
    let seed = require_seed(cfg.seed)?;
    let run = trajectory_run(
        seed,
        &cfg.distribution,
        (cfg.log2_t_min, cfg.log2_t_max),
        cfg.window,
        &cfg.cone,
        cfg.hausdorff_directions,
        cfg.directions,
        cfg.panels,
    )?;
    let stats_ = metric_lil_stats(&run.record, &run.cfg.cone)?;
    let ts = run.cfg.grid();
    let mut dirs = cone_net(&run.cfg.cone, cfg.directions)?;
    let window_dirs = window_directions(2, run.dist.mu(), run.cfg.window, cfg.directions)?;
    dirs.extend(window_dirs.into_iter().filter(|u| !run.cfg.cone.contains(u)));
    let gamma = cfg.gamma_factor * run.dist.mu().powf(-1.5);
    let below = lil_envelope_check(&run.source, -gamma, &run.cfg.cone, &ts, &dirs)?;
    let above = lil_envelope_check(&run.source, gamma, &run.cfg.cone, &ts, &dirs)?;

    let mut table = Table::new(&[
        "t",
        "rho_H",
        "rho_tri",
        "phi_t",
        "ratio_H",
        "ratio_tri",
        "running_sup_H",
        "incl_subset_ok",
        "incl_superset_ok",
    ]);
    for ((r, lo), hi) in run.record.rows.iter().zip(&below.rows).zip(&above.rows) {
        table.push(vec![
            num(r.t),
            num(r.rho_h),
            num(r.rho_tri),
            num(r.phi_t),
            num(r.ratio_h),
            num(r.ratio_tri),
            num(r.running_sup_h),
            lo.subset_ok.to_string(),
            hi.superset_ok.to_string(),
        ]);
    }
    let max_ratio = run.record.rows.iter().map(|r| r.ratio_h).fold(0.0, f64::max);
    let from = 2f64.powi(cfg.assert_from_log2 as i32);
    let late_failures = below
        .rows
        .iter()
        .zip(&above.rows)
        .filter(|(lo, hi)| lo.t >= from && !(lo.subset_ok && hi.superset_ok))
        .count();
    let (low, high) = (cfg.band_low * stats_.constant_h, cfg.band_high * stats_.constant_h);
    Ok(Report {
        seed: Some(seed),
        table,
        criteria: vec![
            Criterion::new("max_ratio_H_below_band", max_ratio, high, max_ratio <= high),
            Criterion::new("max_ratio_H_above_band", max_ratio, low, stats_.degenerate || max_ratio > low),
            Criterion::new("envelope_failures_after_assert_from", late_failures as u64, 0, late_failures == 0),
        ],
        statistics: stats(&[
            ("lil_constant_H", json!(stats_.constant_h)),
            ("lil_bound_tri", json!(stats_.bound_tri)),
            ("max_ratio_tri", json!(run.record.rows.iter().map(|r| r.ratio_tri).fold(0.0, f64::max))),
            ("degenerate", json!(stats_.degenerate)),
            ("subset_settled_from", json!(below.settled_from())),
            ("superset_settled_from", json!(above.settled_from())),
        ]),
    })
}

#[derive(Args, Serialize, Debug, Default)]
#[serde(rename_all = "kebab-case")]
pub struct LiminfFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub distribution: Option<String>,
    #[arg(long)]
    pub log2_t_min: Option<u32>,
    #[arg(long)]
    pub log2_t_max: Option<u32>,
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long)]
    pub cone: Option<String>,
    #[arg(long)]
    pub hausdorff_directions: Option<usize>,
    #[arg(long)]
    pub panels: Option<usize>,
    /// The running minimum at the horizon is compared with its value at `2^compare-log2`.
    #[arg(long)]
    pub compare_log2: Option<u32>,
    #[arg(long)]
    pub decay: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct LiminfConfig {
    pub seed: Option<u64>,
    pub distribution: String,
    pub log2_t_min: u32,
    pub log2_t_max: u32,
    pub window: Option<f64>,
    pub cone: String,
    pub hausdorff_directions: usize,
    pub panels: usize,
    pub compare_log2: u32,
    pub decay: f64,
}

impl Default for LiminfConfig {
    fn default() -> Self {
        Self {
            seed: None,
            distribution: "exponential:1".into(),
            log2_t_min: 8,
            log2_t_max: 20,
            window: None,
            cone: DEFAULT_ANGLES.into(),
            hausdorff_directions: 2048,
            panels: 16,
            compare_log2: 10,
            decay: 0.5,
        }
    }
}

pub fn liminf(cfg: &LiminfConfig) -> Result<Report, CmdError> {
    let seed = require_seed(cfg.seed)?;
    let run = trajectory_run(
        seed,
        &cfg.distribution,
        (cfg.log2_t_min, cfg.log2_t_max),
        cfg.window,
        &cfg.cone,
        cfg.hausdorff_directions,
        64,
        cfg.panels,
    )?;
    let mins = liminf_stats(&run.record);
    let mut table = Table::new(&["t", "sqrt_t_rho_H", "running_min_H", "sqrt_t_rho_tri", "running_min_tri"]);
    for r in &run.record.rows {
        table.push(vec![num(r.t), num(r.scaled_h), num(r.running_min_h), num(r.scaled_tri), num(r.running_min_tri)]);
    }
    let early = mins
        .min_h_at(2f64.powi(cfg.compare_log2 as i32))
        .ok_or_else(|| CmdError::Config("compare-log2 lies below the t-grid".into()))?;
    let late = mins.min_h_at(run.cfg.t_max()).unwrap_or(early);
    let pass = late < cfg.decay * early || (early == 0.0 && late == 0.0);
    Ok(Report {
        seed: Some(seed),
        table,
        criteria: vec![Criterion::new("running_min_H_decay", late, cfg.decay * early, pass)],
        statistics: stats(&[("running_min_H_at_compare", json!(early)), ("running_min_H_at_horizon", json!(late))]),
    })
}

// ---------------------------------------------------------------- clt

#[derive(Args, Serialize, Debug, Default)]
#[serde(rename_all = "kebab-case")]
pub struct CltFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub distribution: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated direction with positive entries; normalised to unit length.
    #[arg(long)]
    pub direction: Option<String>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub replicates: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CltConfig {
    pub seed: Option<u64>,
    pub distribution: String,
    pub dim: usize,
    pub direction: Option<String>,
    pub t: f64,
    pub replicates: usize,
}

impl Default for CltConfig {
    fn default() -> Self {
        Self { seed: None, distribution: "exponential:1".into(), dim: 2, direction: None, t: 4096.0, replicates: 400 }
    }
}

pub fn clt(cfg: &CltConfig) -> Result<Report, CmdError> {
    let seed = require_seed(cfg.seed)?;
    let dist = parse_distribution(&cfg.distribution)?;
    let raw = match &cfg.direction {
        Some(s) => parse_vector(s)?,
        None => vec![1.0; cfg.dim],
    };
    if raw.len() != cfg.dim || raw.iter().any(|&v| !(v > 0.0)) {
        return Err(CmdError::Config(format!("direction must have {} positive entries", cfg.dim)));
    }
    let u = unit(&raw);
    let rep = clt_sample(&dist, &u, cfg.t, cfg.replicates, seed)?;
    let mut table = Table::new(&["replicate", "sample"]);
    for (i, s) in rep.samples.iter().enumerate() {
        table.push(vec![i.to_string(), num(*s)]);
    }
    let criteria = match &rep.ks {
        Some(ks) => vec![Criterion::new("ks_statistic", ks.statistic, ks.critical, ks.pass)],
        None => vec![Criterion::new("ks_statistic", Value::Null, Value::Null, false)],
    };
    Ok(Report {
        seed: Some(seed),
        table,
        criteria,
        statistics: stats(&[
            ("variance_target", json!(rep.variance_target)),
            ("sample_mean", json!(rep.sample_mean)),
            ("sample_variance", json!(rep.sample_variance)),
            ("p_value", json!(rep.ks.map(|k| k.p_value))),
            ("degenerate", json!(rep.degenerate)),
        ]),
    })
}

// ---------------------------------------------------------------- sector

#[derive(Args, Serialize, Debug, Default)]
#[serde(rename_all = "kebab-case")]
pub struct SectorFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub distribution: Option<String>,
    /// `aperture:THETA[:DIM]` or `angles:LO,HI`.
    #[arg(long)]
    pub cone: Option<String>,
    /// Lattice points per axis.
    #[arg(long)]
    pub horizon: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SectorConfig {
    pub seed: Option<u64>,
    pub distribution: String,
    pub cone: String,
    pub horizon: usize,
}

impl Default for SectorConfig {
    fn default() -> Self {
        Self { seed: None, distribution: "exponential:1".into(), cone: "aperture:0.5".into(), horizon: 2048 }
    }
}

pub fn sector(cfg: &SectorConfig) -> Result<Report, CmdError> {
    let seed = require_seed(cfg.seed)?;
    let dist = parse_distribution(&cfg.distribution)?;
    let cone = parse_cone(&cfg.cone, 2)?;
    let rep = sectorial_lil_compare(&dist, &cone, cfg.horizon, seed)?;
    let mut table = Table::new(&["region", "sup", "argmax", "limit"]);
    let fmt_idx = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    table.push(vec!["cone".into(), num(rep.sup_cone), fmt_idx(&rep.argmax_cone), num(rep.limit_cone)]);
    table.push(vec!["all".into(), num(rep.sup_all), fmt_idx(&rep.argmax_all), num(rep.limit_all)]);
    let d = cone.dim() as f64;
    Ok(Report {
        seed: Some(seed),
        table,
        criteria: vec![
            Criterion::new("cone_sup_le_overall", rep.sup_cone, rep.sup_all, rep.sup_cone <= rep.sup_all),
            Criterion::new("overall_over_cone_ratio", rep.ratio, json!([1.0, 2.0]), (1.0..=2.0).contains(&rep.ratio)),
        ],
        statistics: stats(&[("ratio_target", json!(d.sqrt()))]),
    })
}

// ---------------------------------------------------------------- count

#[derive(Args, Serialize, Debug, Default)]
#[serde(rename_all = "kebab-case")]
pub struct CountFlags {
    /// Required unless the summand law is constant.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub distribution: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated thresholds.
    #[arg(long)]
    pub t: Option<String>,
    /// Also report the divisor count `T_k`.
    #[arg(long)]
    pub divisor_k: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CountConfig {
    pub seed: Option<u64>,
    pub distribution: String,
    pub dim: usize,
    pub t: String,
    pub divisor_k: Option<u64>,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self { seed: None, distribution: "constant:1".into(), dim: 2, t: "3.5".into(), divisor_k: None }
    }
}

pub fn count(cfg: &CountConfig) -> Result<Report, CmdError> {
    let dist = parse_distribution(&cfg.distribution)?;
    let seed = if dist.is_constant() { cfg.seed } else { Some(require_seed(cfg.seed)?) };
    let ts = parse_vector(&cfg.t)?;
    let rows = n_t_slln_check(&dist, cfg.dim, &ts, seed.unwrap_or(0))?;
    let mut table = Table::new(&["t", "n_t", "ratio", "target", "divisor_oracle"]);
    let mut criteria = Vec::new();
    for r in &rows {
        let oracle = r.divisor_oracle.map(|v| v.to_string()).unwrap_or_default();
        table.push(vec![num(r.t), r.n_t.to_string(), num(r.ratio), num(r.target), oracle]);
        if let Some(o) = r.divisor_oracle {
            criteria.push(Criterion::new(&format!("n_t_equals_divisor_count_t={}", r.t), r.n_t, o as u64, o == r.n_t as u128));
        }
    }
    let mut statistics = stats(&[
        ("n_t", json!(rows.iter().map(|r| r.n_t).collect::<Vec<_>>())),
        ("ratio", json!(rows.iter().map(|r| r.ratio).collect::<Vec<_>>())),
        ("target", json!(rows.first().map(|r| r.target))),
    ]);
    if let Some(k) = cfg.divisor_k {
        statistics.insert("divisor_count".into(), json!(divisor_count(cfg.dim, k).to_string()));
    }
    Ok(Report { seed, table, criteria, statistics })
}

// ---------------------------------------------------------------- chentsov

#[derive(Args, Serialize, Debug, Default)]
#[serde(rename_all = "kebab-case")]
pub struct ChentsovFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid cells per unit length (resolution `h = 1/steps`).
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub zeta_directions: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ChentsovConfig {
    pub seed: Option<u64>,
    pub steps: usize,
    pub paths: usize,
    pub tolerance: f64,
    pub zeta_directions: usize,
}

impl Default for ChentsovConfig {
    fn default() -> Self {
        Self { seed: None, steps: 64, paths: 2000, tolerance: 0.1, zeta_directions: 100 }
    }
}

/// Planar point pairs with strongly correlated values, on grid nodes for `steps` divisible by 8.
pub fn chentsov_pairs() -> Vec<(Vec<f64>, Vec<f64>)> {
    vec![
        (vec![1.0, 1.0], vec![1.0, 1.0]),
        (vec![0.5, 0.5], vec![0.5, 0.5]),
        (vec![1.0, 1.0], vec![0.75, 1.0]),
        (vec![0.875, 0.75], vec![0.75, 0.875]),
        (vec![0.625, 1.0], vec![0.625, 0.875]),
    ]
}

pub fn chentsov(cfg: &ChentsovConfig) -> Result<Report, CmdError> {
    let seed = require_seed(cfg.seed)?;
    let rows = chentsov_covariance(cfg.steps, 2, cfg.paths, &chentsov_pairs(), seed)?;
    let mut table = Table::new(&["pair", "x", "y", "target", "estimate", "relative_error"]);
    let fmt_pt = |p: &[f64]| p.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" ");
    let mut criteria = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        table.push(vec![i.to_string(), fmt_pt(&r.x), fmt_pt(&r.y), num(r.target), num(r.estimate), num(r.relative_error)]);
        criteria.push(Criterion::new(
            &format!("covariance_pair_{i}"),
            r.relative_error,
            cfg.tolerance,
            r.relative_error < cfg.tolerance,
        ));
    }
    let path = chentsov_simulate_on::<f64>(cfg.steps, 2, 2, seed)?;
    let mut worst = 0.0f64;
    for u in planar_net(FRAC_PI_6, FRAC_PI_3, cfg.zeta_directions) {
        let z = zeta_extrapolate(&path, &u)?;
        let z2 = zeta_extrapolate(&path, &[2.0 * u[0], 2.0 * u[1]])?;
        worst = worst.max((z2 - z / 4.0).abs() / z.abs().max(1.0));
    }
    criteria.push(Criterion::new("zeta_self_similarity", worst, 1e-12, worst <= 1e-12));
    Ok(Report { seed: Some(seed), table, criteria, statistics: Map::new() })
}
