//! Renewal sets `M_t = {x >= 0 : S_x >= t}` seen through their scaled copy
//! `t^{-1/d} M_t`: membership, radial function, boundary samples, and the
//! lattice deficiency count `N_t = card(N^d \ M_t)`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit_geometry::{symdiff_estimate, BoundaryCloud, ConeSpec, LimitSet, SymdiffEstimate};
use crate::multisum::{
    interpolate_level, staircase_sweep, LatticeSums, Level, PrefixGrid, StaircaseGrid,
};
use crate::noise_field::{FieldSampler, SummandDistribution};
use crate::scalar::{volume, Scalar};

/// Row/column limit for streaming counts.
pub const DEFAULT_MAX_EXTENT: usize = 1 << 32;

/// Factor by which the ray bracket widens; small so brackets stay near the crossing.
const BRACKET_GROWTH: f64 = 1.125;

impl<T: Scalar, L: LatticeSums<T> + ?Sized> LatticeSums<T> for &L {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn lattice_sum(&self, n: &[usize]) -> Option<T> {
        (**self).lattice_sum(n)
    }

    fn lattice_level(&self, n: &[usize]) -> Option<Level<T>> {
        (**self).lattice_level(n)
    }
}

/// Point on the boundary of `t^{-1/d} M_t` along a ray.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSample<T> {
    pub direction: Vec<T>,
    /// `r_t(u) = inf{a > 0 : a u in t^{-1/d} M_t}`.
    pub value: T,
    /// `|S - t|` at the returned crossing when the backend knows `S` exactly there.
    pub residual: Option<T>,
}

impl<T: Scalar> RadialSample<T> {
    pub fn point(&self) -> Vec<T> {
        self.direction.iter().map(|&v| v * self.value).collect()
    }
}

/// `M_t` for one threshold over a lattice-sum backend.
#[derive(Debug, Clone)]
pub struct RenewalSetView<T, L> {
    sums: L,
    t: T,
    scale: T,
    mu: T,
    nonnegative: bool,
}

impl<T: Scalar, L: LatticeSums<T>> RenewalSetView<T, L> {
    pub fn new(sums: L, t: T, distribution: &SummandDistribution) -> Result<Self> {
        if !(t > T::zero()) || !t.is_finite() {
            return Err(Error::Argument(format!("threshold must be positive, got {t}")));
        }
        let d = sums.dim();
        Ok(Self {
            scale: t.powf(T::one() / T::of_usize(d)),
            sums,
            t,
            mu: T::of(distribution.mu()),
            nonnegative: distribution.nonnegative(),
        })
    }

    pub fn threshold(&self) -> T {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.sums.dim()
    }

    /// `t^{1/d}`.
    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn sums(&self) -> &L {
        &self.sums
    }

    /// `y in M_t`, i.e. `S_y >= t`.
    pub fn contains_unscaled(&self, y: &[T]) -> Result<bool> {
        let level = interpolate_level(&self.sums, y)?;
        level
            .reaches(self.t)
            .ok_or_else(|| Error::OutsideRegion(y.iter().map(|v| v.f64()).collect()))
    }

    /// `x in t^{-1/d} M_t`, i.e. `S_{t^{1/d} x} >= t`.
    pub fn contains(&self, x: &[T]) -> Result<bool> {
        let y: Vec<T> = x.iter().map(|&v| v * self.scale).collect();
        self.contains_unscaled(&y)
    }

    fn require_nonnegative(&self) -> Result<()> {
        if self.nonnegative {
            Ok(())
        } else {
            Err(Error::Unsupported(
                "radial functions need nonnegative summands (M_t is not an upper set otherwise)".into(),
            ))
        }
    }

    /// Default bisection tolerance `1e-9 (mu |u|)^{-1/d}`.
    pub fn default_tol(&self, u: &[T]) -> T {
        T::of(1e-9) * (self.mu * volume(u)).powf(-T::one() / T::of_usize(u.len()))
    }

    /// Radial function by bisection on the nondecreasing map `a -> S_{t^{1/d} a u}`.
    /// The bracket starts at the deterministic crossing `(mu |u|)^{-1/d}` and is widened
    /// geometrically; the result `a` has `S >= t` at `a` and `S < t` at `a - tol`.
    pub fn radial(&self, u: &[T], tol: T) -> Result<RadialSample<T>> {
        self.require_nonnegative()?;
        if u.len() != self.dim() {
            return Err(Error::Domain(format!("direction has {} components, set has dimension {}", u.len(), self.dim())));
        }
        if u.iter().any(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(Error::Domain("direction must have strictly positive components".into()));
        }
        if !(tol > T::zero()) {
            return Err(Error::Argument(format!("tolerance must be positive, got {tol}")));
        }
        let two = T::of(2.0);
        let grow = T::of(BRACKET_GROWTH);
        let member = |a: T| self.contains(&u.iter().map(|&v| v * a).collect::<Vec<_>>());
        let start = (self.mu * volume(u)).powf(-T::one() / T::of_usize(u.len()));
        let (mut lo, mut hi) = if member(start)? {
            let mut lo = start / grow;
            while member(lo)? {
                lo = lo / grow;
            }
            (lo, lo * grow)
        } else {
            let mut hi = start * grow;
            while !member(hi)? {
                hi = hi * grow;
                if !hi.is_finite() {
                    return Err(Error::Domain("ray never enters the renewal set".into()));
                }
            }
            (hi / grow, hi)
        };
        while hi - lo > tol {
            let mid = lo + (hi - lo) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if member(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let y: Vec<T> = u.iter().map(|&v| v * hi * self.scale).collect();
        let residual = match interpolate_level(&self.sums, &y)? {
            Level::Exact(s) => Some((s - self.t).abs()),
            Level::AtLeast(_) => None,
        };
        Ok(RadialSample { direction: u.to_vec(), value: hi, residual })
    }

    /// Scaled boundary points `r_t(u) u` along `directions`.
    pub fn boundary_cloud(&self, directions: &[Vec<T>], tol: T) -> Result<BoundaryCloud<T>> {
        let pts = directions
            .iter()
            .map(|u| self.radial(u, tol).map(|r| r.point()))
            .collect::<Result<Vec<_>>>()?;
        BoundaryCloud::new(self.dim(), pts)
    }

    /// Like [`boundary_cloud`](Self::boundary_cloud) but drops directions whose crossing
    /// leaves the stored region; returns the cloud and the number of dropped rays.
    pub fn boundary_cloud_within(&self, directions: &[Vec<T>], tol: T) -> Result<(BoundaryCloud<T>, usize)> {
        let mut pts = Vec::with_capacity(directions.len());
        let mut dropped = 0;
        for u in directions {
            match self.radial(u, tol) {
                Ok(r) => pts.push(r.point()),
                Err(Error::OutsideRegion(_)) => dropped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok((BoundaryCloud::new(self.dim(), pts)?, dropped))
    }

    /// `lambda_d(K ∩ (t^{-1/d} M_t △ H(c)))` by directional quadrature.
    pub fn symdiff_to_limit(&self, ls: &LimitSet<T>, cone: &ConeSpec<T>, panels: usize) -> Result<SymdiffEstimate<T>> {
        symdiff_estimate(
            cone,
            |u| self.radial(u, self.default_tol(u)).map(|r| r.value),
            |u| ls.radial(u),
            panels,
        )
    }
}

impl<T: Scalar> RenewalSetView<T, StaircaseGrid<T>> {
    /// Planar view backed by a staircase grid covering the scaled window `[0, window]^2`
    /// with a small margin for bisection brackets.
    pub fn planar(sampler: &FieldSampler, t: f64, window: f64) -> Result<Self> {
        let extent = planar_extent(t, window);
        let grid = StaircaseGrid::build(sampler, t, extent, extent)?;
        Self::new(grid, T::of(t), sampler.distribution())
    }
}

/// Rows/columns a staircase grid needs for the scaled window `[0, window]^2` at threshold `t`.
pub fn planar_extent(t: f64, window: f64) -> usize {
    (1.05 * window * t.sqrt()).ceil() as usize + 2
}

/// `N_t`: number of lattice points `n` with `S_n < t` (nonnegative summands).
pub fn deficiency_count(sampler: &FieldSampler, t: f64) -> Result<u64> {
    deficiency_count_with_limit(sampler, t, DEFAULT_MAX_EXTENT)
}

pub fn deficiency_count_with_limit(sampler: &FieldSampler, t: f64, max_extent: usize) -> Result<u64> {
    if !sampler.distribution().nonnegative() {
        return Err(Error::Unsupported("N_t is defined here for nonnegative summands only".into()));
    }
    if !(t > 0.0) {
        return Ok(0);
    }
    match sampler.dim() {
        1 => Ok(axis_first_reach(sampler, 0, t, max_extent)? as u64 - 1),
        2 => Ok(staircase_sweep(sampler, t, max_extent)?.deficiency()),
        d => {
            // Any n with S_n < t has n_i below the first index where the axis sums reach t.
            let extent = (0..d)
                .map(|axis| axis_first_reach(sampler, axis, t, max_extent).map(|e| (e - 1).max(1)))
                .collect::<Result<Vec<_>>>()?;
            let grid = PrefixGrid::<f64>::build(sampler, &extent)?;
            let mut count = 0u64;
            let mut idx = vec![1usize; d];
            'outer: loop {
                if grid.lattice_sum(&idx).expect("inside extent") < t {
                    count += 1;
                }
                for i in (0..d).rev() {
                    if idx[i] < extent[i] {
                        idx[i] += 1;
                        continue 'outer;
                    }
                    idx[i] = 1;
                }
                break;
            }
            Ok(count)
        }
    }
}

/// First `m` with `S_{(1,..,m,..,1)} >= t` along `axis`.
fn axis_first_reach(sampler: &FieldSampler, axis: usize, t: f64, max_extent: usize) -> Result<usize> {
    let mut idx = vec![1usize; sampler.dim()];
    let mut run = 0.0;
    for m in 1..=max_extent {
        idx[axis] = m;
        run += sampler.value(&idx);
        if run >= t {
            return Ok(m);
        }
    }
    Err(Error::RowLimit(max_extent))
}

/// `T_k = card{n in N^d : n^1 ... n^d <= k}`, exactly.
pub fn divisor_count(d: usize, k: u64) -> u128 {
    assert!(d >= 1, "dimension must be at least 1");
    let mut memo = HashMap::new();
    divisor_count_memo(d, k, &mut memo)
}

fn divisor_count_memo(d: usize, k: u64, memo: &mut HashMap<(usize, u64), u128>) -> u128 {
    match (d, k) {
        (_, 0) => 0,
        (1, k) => k as u128,
        (2, k) => {
            // Lattice points under the hyperbola, counted twice over i <= sqrt(k) minus the square.
            let r = k.isqrt();
            let half: u128 = (1..=r).map(|i| (k / i) as u128).sum();
            2 * half - (r as u128) * (r as u128)
        }
        (d, k) => {
            if let Some(&v) = memo.get(&(d, k)) {
                return v;
            }
            // T^(d)(k) = sum_i T^(d-1)(k / i), grouped by equal quotients.
            let mut total = 0u128;
            let mut i = 1u64;
            while i <= k {
                let q = k / i;
                let last = k / q;
                total += (last - i + 1) as u128 * divisor_count_memo(d - 1, q, memo);
                i = last + 1;
            }
            memo.insert((d, k), total);
            total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multisum::PrefixGrid;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn brute_divisor(d: usize, k: u64) -> u128 {
        fn rec(d: usize, k: u64) -> u128 {
            if d == 0 {
                return 1;
            }
            (1..=k).map(|i| rec(d - 1, k / i)).sum()
        }
        if k == 0 {
            0
        } else {
            rec(d, k)
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisor_count(2, 3), 5);
        assert_eq!(divisor_count(2, 1), 1);
        assert_eq!(divisor_count(3, 2), 4);
        assert_eq!(divisor_count(1, 17), 17);
    }

    #[test]
    fn divisor_matches_brute_force() {
        for k in 1..=200 {
            assert_eq!(divisor_count(2, k), brute_divisor(2, k), "d=2 k={k}");
            assert_eq!(divisor_count(3, k), brute_divisor(3, k), "d=3 k={k}");
        }
        for k in [1, 5, 30, 64] {
            assert_eq!(divisor_count(4, k), brute_divisor(4, k));
        }
    }

    fn unit(d: usize) -> FieldSampler {
        FieldSampler::new(0, SummandDistribution::constant(1.0).unwrap(), d).unwrap()
    }

    #[test]
    fn unit_deficiency() {
        assert_eq!(deficiency_count(&unit(2), 3.5).unwrap(), 5);
        assert_eq!(deficiency_count(&unit(2), 0.5).unwrap(), 0);
        assert_eq!(deficiency_count(&unit(1), 7.5).unwrap(), 7);
        assert_eq!(deficiency_count(&unit(1), 7.0).unwrap(), 6);
        // {n : n1 n2 n3 < 3} = {n : |n| <= 2} in d = 3.
        assert_eq!(deficiency_count(&unit(3), 3.0).unwrap(), 4);
    }

    #[test]
    fn constant_view_membership_and_radial() {
        let dist = SummandDistribution::constant(2.0).unwrap();
        let f = FieldSampler::new(0, dist, 2).unwrap();
        let t = 50.0;
        let grid = PrefixGrid::<f64>::build(&f, &[40, 40]).unwrap();
        let view = RenewalSetView::new(&grid, t, &dist).unwrap();
        // S_x = 2|x| so x in t^{-1/2} M_t iff |x| >= 1/2.
        assert!(view.contains(&[1.0, 0.5]).unwrap());
        assert!(!view.contains(&[0.7, 0.7]).unwrap());
        assert!(!view.contains(&[0.0, 3.0]).unwrap());
        let u = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        let r = view.radial(&u, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-11);
        assert!(r.residual.unwrap() < 1e-9);
    }

    #[test]
    fn radial_rejects_bad_input() {
        let dist = SummandDistribution::exponential(1.0).unwrap();
        let f = FieldSampler::new(1, dist, 2).unwrap();
        let grid = PrefixGrid::<f64>::build(&f, &[30, 30]).unwrap();
        let view = RenewalSetView::new(&grid, 100.0, &dist).unwrap();
        assert!(matches!(view.radial(&[0.0, 1.0], 1e-9), Err(Error::Domain(_))));
        assert!(view.radial(&[1.0, 1.0], 0.0).is_err());

        let signed = SummandDistribution::shifted_pareto(3.0, 2.0, -0.5).unwrap();
        let g = FieldSampler::new(1, signed, 2).unwrap();
        let grid = PrefixGrid::<f64>::build(&g, &[30, 30]).unwrap();
        let view = RenewalSetView::new(&grid, 100.0, &signed).unwrap();
        assert!(matches!(view.radial(&[1.0, 1.0], 1e-9), Err(Error::Unsupported(_))));
        assert!(matches!(deficiency_count(&g, 10.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn radial_homogeneity() {
        let dist = SummandDistribution::exponential(1.0).unwrap();
        let f = FieldSampler::new(8, dist, 2).unwrap();
        let view = RenewalSetView::<f64, _>::planar(&f, 400.0, 6.0).unwrap();
        let u = [0.6, 0.8];
        let r = view.radial(&u, 1e-12).unwrap().value;
        let r3 = view.radial(&[1.8, 2.4], 1e-12).unwrap().value;
        assert!((r3 - r / 3.0).abs() < 1e-10);
    }

    #[test]
    fn unit_boundary_cloud_sits_on_hyperbola() {
        let dist = SummandDistribution::constant(1.0).unwrap();
        let f = FieldSampler::new(0, dist, 2).unwrap();
        let view = RenewalSetView::<f64, _>::planar(&f, 900.0, 4.0).unwrap();
        let tol = 1e-10;
        let dirs = crate::limit_geometry::planar_net(0.3, 1.2, 50);
        let cloud = view.boundary_cloud(&dirs, tol).unwrap();
        for p in cloud.points() {
            assert!((p[0] * p[1] - 1.0).abs() <= 2.0 * tol * 10.0);
        }
        let one = view.boundary_cloud(&dirs[..1], tol).unwrap();
        assert_eq!(one.points().len(), 1);
    }
}
