//! Brownian sheet on `[0, 1]^d` with covariance `|x ∧ y|`, sampled as interpolated
//! cumulative sums of Gaussian cell masses on a grid of mesh `h = 1/m`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multisum::{interpolate, PrefixGrid};
use crate::noise_field::derive_seed;
use crate::scalar::{volume, Scalar};

/// Path on `[0, side]^d` with `steps` cells per unit length.
#[derive(Debug, Clone)]
pub struct ChentsovPath<T> {
    steps: usize,
    side: usize,
    grid: PrefixGrid<T>,
}

impl<T: Scalar> ChentsovPath<T> {
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.grid.extent().len()
    }

    pub fn resolution(&self) -> T {
        T::one() / T::of_usize(self.steps)
    }

    /// `Z_x` for `x` in `[0, side]^d`, multilinear between grid nodes.
    pub fn value(&self, x: &[T]) -> Result<T> {
        let side = T::of_usize(self.side);
        if x.len() != self.dim() || x.iter().any(|&v| !(v >= T::zero() && v <= side)) {
            return Err(Error::Domain(format!(
                "point {:?} lies outside the simulated domain [0, {}]^{}",
                x.iter().map(|v| v.f64()).collect::<Vec<_>>(),
                self.side,
                self.dim()
            )));
        }
        let m = T::of_usize(self.steps);
        let y: Vec<T> = x.iter().map(|&v| v * m).collect();
        interpolate(&self.grid, &y)
    }
}

/// Steps per unit length for a mesh `h`; `1/h` must be an integer.
pub fn steps_for_resolution(h: f64) -> Result<usize> {
    let m = (1.0 / h).round();
    if !(h > 0.0 && h <= 1.0) || ((1.0 / h) - m).abs() > 1e-9 * m {
        return Err(Error::Argument(format!("resolution must be 1/m for a positive integer m, got {h}")));
    }
    Ok(m as usize)
}

/// One path on `[0, 1]^d`; cell masses are `h^{d/2}` standard normals.
pub fn chentsov_simulate<T: Scalar>(steps: usize, d: usize, seed: u64) -> Result<ChentsovPath<T>> {
    chentsov_simulate_on(steps, 1, d, seed)
}

/// One path on `[0, side]^d`.
pub fn chentsov_simulate_on<T: Scalar>(steps: usize, side: usize, d: usize, seed: u64) -> Result<ChentsovPath<T>> {
    if steps == 0 || side == 0 || d == 0 {
        return Err(Error::Argument("need positive steps, side and dimension".into()));
    }
    let scale = (steps as f64).powf(-(d as f64) / 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extent = vec![steps * side; d];
    let grid = PrefixGrid::from_fn(&extent, |_| {
        let g: f64 = StandardNormal.sample(&mut rng);
        T::of(g * scale)
    })?;
    Ok(ChentsovPath { steps, side, grid })
}

/// `zeta_u = |u|^{-1} Z_{u / |u|^{1/d}}`; the rescaled point must lie in the simulated domain.
pub fn zeta_extrapolate<T: Scalar>(path: &ChentsovPath<T>, u: &[T]) -> Result<T> {
    if u.len() != path.dim() || u.iter().any(|&v| !(v > T::zero())) {
        return Err(Error::Domain("direction must lie in the open orthant".into()));
    }
    let vol = volume(u);
    let root = vol.powf(T::one() / T::of_usize(u.len()));
    let x: Vec<T> = u.iter().map(|&v| v / root).collect();
    Ok(path.value(&x)? / vol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceRow {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub target: f64,
    pub estimate: f64,
    pub relative_error: f64,
}

/// Empirical `E[Z_x Z_y]` over `paths` independent paths (the field is centred).
pub fn chentsov_covariance(
    steps: usize,
    d: usize,
    paths: usize,
    pairs: &[(Vec<f64>, Vec<f64>)],
    seed: u64,
) -> Result<Vec<CovarianceRow>> {
    if paths == 0 {
        return Err(Error::Argument("need at least one path".into()));
    }
    let mut acc = vec![0.0; pairs.len()];
    for p in 0..paths {
        let path = chentsov_simulate::<f64>(steps, d, derive_seed(seed, p as u64))?;
        for (a, (x, y)) in acc.iter_mut().zip(pairs) {
            *a += path.value(x)? * path.value(y)?;
        }
    }
    Ok(pairs
        .iter()
        .zip(acc)
        .map(|((x, y), a)| {
            let target: f64 = x.iter().zip(y).map(|(a, b)| a.min(*b)).product();
            let estimate = a / paths as f64;
            CovarianceRow {
                x: x.clone(),
                y: y.clone(),
                target,
                estimate,
                relative_error: (estimate - target).abs() / target,
            }
        })
        .collect())
}
