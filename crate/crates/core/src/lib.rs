//! Simulation and verification of multidimensional renewal sets
//! `M_t = {x in R^d_+ : S_x >= t}` built from interpolated multiple sums of i.i.d. fields.
//!
//! Geometry, interpolation and envelopes are generic over [`Scalar`] (`f32` or `f64`);
//! the field samplers and Monte Carlo drivers work in `f64`.

pub mod asymptotics;
pub mod error;
pub mod limit_geometry;
pub mod multisum;
pub mod noise_field;
pub mod quadrature;
pub mod renewal_set;
pub mod scalar;

pub use error::{Error, Result};
pub use limit_geometry::{
    cone_limit_contains, dist_to_limit, h_radial, hausdorff_closed, hausdorff_estimate, l_k, level_radial,
    symdiff_closed, symdiff_estimate, BoundaryCloud, ConeLimitSet, ConeSpec, HausdorffEstimate, LimitSet,
    LkEstimate, LkMethod, Projection, SetSample, SymdiffEstimate,
};
pub use multisum::{
    cone_restricted, interpolate, interpolate_level, staircase_sweep, ConeSums, DirectSums, LatticeSums, Level,
    PrefixGrid, Staircase, StaircaseGrid, Stencil,
};
pub use noise_field::{derive_seed, FieldSampler, MomentSummary, SummandDistribution, SummandKind};
pub use renewal_set::{deficiency_count, divisor_count, RadialSample, RenewalSetView};
pub use scalar::Scalar;

pub type LimitSet64 = LimitSet<f64>;
pub type LimitSet32 = LimitSet<f32>;
pub type ConeSpec64 = ConeSpec<f64>;
pub type ConeSpec32 = ConeSpec<f32>;
pub type ConeLimitSet64 = ConeLimitSet<f64>;
pub type PrefixGrid64 = PrefixGrid<f64>;
pub type PrefixGrid32 = PrefixGrid<f32>;
pub type StaircaseGrid64 = StaircaseGrid<f64>;
pub type BoundaryCloud64 = BoundaryCloud<f64>;
pub type Envelope64 = asymptotics::Envelope<f64>;
pub type Envelope32 = asymptotics::Envelope<f32>;
pub type PlanarView64 = RenewalSetView<f64, StaircaseGrid<f64>>;
