//! Limit-theorem checks for renewal sets: envelopes, trajectory statistics,
//! CLT sampling, the Chentsov field, and lattice counts.

mod chentsov;
mod clt;
mod counting;
mod envelope;
mod ks;
mod sector;
mod trajectory;

pub use chentsov::{
    chentsov_covariance, chentsov_simulate, chentsov_simulate_on, steps_for_resolution, zeta_extrapolate, ChentsovPath, CovarianceRow,
};
pub use clt::{clt_replicate, clt_sample, clt_variance, CltReport, MIN_REPLICATES};
pub use counting::{constant_deficiency, n_t_slln_check, n_t_target, CountRow};
pub use envelope::{chi, envelope, log_ext, loglog_ext, phi, q_lower, CustomEnvelope, Envelope};
pub use ks::{critical_value, kolmogorov_sf, ks_statistic, ks_test, KsResult};
pub use sector::{sectorial_lil_compare, SectorReport};
pub use trajectory::{
    dyadic_grid, lil_envelope_check, liminf_stats, metric_lil_constant, metric_lil_stats, run_trajectory,
    slln_inclusion_check, symdiff_lil_bound, window_directions, GridSource, LilReport, LilRow, LiminfStats,
    MetricLilStats, SetSource, SllnReport, SllnRow, SourceView, TrajectoryConfig, TrajectoryRecord, TrajectoryRow,
};
