//! Multiple sums `S_n = sum_{m <= n} xi_m`, their piecewise multilinear
//! extension `S_x` to the closed orthant, and cone-restricted sums.
//!
//! Three lattice backends share the [`LatticeSums`] surface:
//! [`PrefixGrid`] (dense, any dimension), [`StaircaseGrid`] (planar, stores
//! only cells below a level cap inside a window) and [`DirectSums`]
//! (brute-force summation straight from the sampler, used as an oracle).

use crate::error::{Error, Result};
use crate::limit_geometry::ConeSpec;
use crate::noise_field::FieldSampler;
use crate::scalar::Scalar;

/// Cells a dense grid may hold before [`PrefixGrid::build`] refuses.
pub const DEFAULT_CELL_BUDGET: u128 = 1 << 26;

/// Value of a sum query: exact, or only known to be at least some level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Level<T> {
    Exact(T),
    AtLeast(T),
}

impl<T: Scalar> Level<T> {
    pub fn value(self) -> T {
        match self {
            Level::Exact(v) | Level::AtLeast(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Level::Exact(_))
    }

    /// Whether the underlying sum is `>= t`; exact for `Exact`, and for `AtLeast(c)` with `c >= t`.
    pub fn reaches(self, t: T) -> Option<bool> {
        match self {
            Level::Exact(v) => Some(v >= t),
            Level::AtLeast(c) if c >= t => Some(true),
            Level::AtLeast(_) => None,
        }
    }
}

/// Lattice multiple sums. Indices with a zero component give `S = 0`.
pub trait LatticeSums<T: Scalar> {
    fn dim(&self) -> usize;

    /// `S_n` if stored, `None` otherwise.
    fn lattice_sum(&self, n: &[usize]) -> Option<T>;

    /// Like [`lattice_sum`](Self::lattice_sum) but may return a lower bound for
    /// cells the backend knows about without storing.
    fn lattice_level(&self, n: &[usize]) -> Option<Level<T>> {
        self.lattice_sum(n).map(Level::Exact)
    }
}

/// Corners and weights of the multilinear stencil for a point `x`.
///
/// The containing cube is the one with lower corner `floor(x)`, except that an
/// integer coordinate `x^i > 0` uses lower corner `x^i - 1`. Any containing cube
/// gives the same value; this choice keeps corners inside `[0, ceil(x)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil<T> {
    lower: Vec<usize>,
    frac: Vec<T>,
}

impl<T: Scalar> Stencil<T> {
    pub fn new(x: &[T]) -> Result<Self> {
        let mut lower = Vec::with_capacity(x.len());
        let mut frac = Vec::with_capacity(x.len());
        for &xi in x {
            if !(xi >= T::zero()) || !xi.is_finite() {
                return Err(Error::Domain(format!(
                    "interpolation needs finite x >= 0, got {:?}",
                    x.iter().map(|v| v.f64()).collect::<Vec<_>>()
                )));
            }
            let mut l = xi.floor();
            if l == xi && xi > T::zero() {
                l = l - T::one();
            }
            lower.push(l.to_usize().ok_or_else(|| Error::Domain("coordinate too large".into()))?);
            frac.push(xi - l);
        }
        Ok(Self { lower, frac })
    }

    pub fn lower(&self) -> &[usize] {
        &self.lower
    }

    /// Iterator over `(corner, weight)` for all `2^d` cube vertices. The weight of a
    /// corner is the volume of the box spanned by `x` and the opposite vertex.
    pub fn corners(&self) -> impl Iterator<Item = (Vec<usize>, T)> + '_ {
        let d = self.lower.len();
        (0..1usize << d).map(move |mask| {
            let mut corner = self.lower.clone();
            let mut w = T::one();
            for i in 0..d {
                if mask >> i & 1 == 1 {
                    corner[i] += 1;
                    w = w * self.frac[i];
                } else {
                    w = w * (T::one() - self.frac[i]);
                }
            }
            (corner, w)
        })
    }
}

fn check_dim<T: Scalar>(src_dim: usize, x: &[T]) -> Result<()> {
    if x.len() != src_dim {
        return Err(Error::Domain(format!(
            "point has {} coordinates, sums are {}-dimensional",
            x.len(),
            src_dim
        )));
    }
    Ok(())
}

/// `S_x` with lower-bound propagation for partially stored backends.
pub fn interpolate_level<T: Scalar, L: LatticeSums<T> + ?Sized>(src: &L, x: &[T]) -> Result<Level<T>> {
    check_dim(src.dim(), x)?;
    let stencil = Stencil::new(x)?;
    if x.iter().any(|&v| v == T::zero()) {
        return Ok(Level::Exact(T::zero()));
    }
    let outside = || Error::OutsideRegion(x.iter().map(|v| v.f64()).collect());
    // For nondecreasing sums the lower corner bounds S_x from below.
    if let Some(Level::AtLeast(c)) = src.lattice_level(stencil.lower()) {
        return Ok(Level::AtLeast(c));
    }
    let mut acc = T::zero();
    let mut exact = true;
    for (corner, w) in stencil.corners() {
        if w == T::zero() {
            continue;
        }
        match src.lattice_level(&corner).ok_or_else(outside)? {
            Level::Exact(v) => acc = acc + w * v,
            Level::AtLeast(v) => {
                exact = false;
                acc = acc + w * v;
            }
        }
    }
    Ok(if exact { Level::Exact(acc) } else { Level::AtLeast(acc) })
}

/// Multilinear interpolation `S_x`; fails where the backend cannot give the exact value.
pub fn interpolate<T: Scalar, L: LatticeSums<T> + ?Sized>(src: &L, x: &[T]) -> Result<T> {
    match interpolate_level(src, x)? {
        Level::Exact(v) => Ok(v),
        Level::AtLeast(_) => Err(Error::OutsideRegion(x.iter().map(|v| v.f64()).collect())),
    }
}

/// Dense table of `S_n` for `1 <= n <= extent`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixGrid<T> {
    extent: Vec<usize>,
    strides: Vec<usize>,
    values: Vec<T>,
}

fn strides_for(extent: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; extent.len()];
    for i in (0..extent.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * extent[i + 1];
    }
    strides
}

fn cell_count(extent: &[usize]) -> u128 {
    extent.iter().map(|&n| n as u128).product()
}

impl<T: Scalar> PrefixGrid<T> {
    /// Sums of `xi` drawn from `sampler` over the box `[1, extent]`.
    pub fn build(sampler: &FieldSampler, extent: &[usize]) -> Result<Self> {
        Self::build_with_budget(sampler, extent, DEFAULT_CELL_BUDGET)
    }

    pub fn build_with_budget(sampler: &FieldSampler, extent: &[usize], budget: u128) -> Result<Self> {
        if extent.len() != sampler.dim() {
            return Err(Error::Argument(format!(
                "extent {extent:?} does not match field dimension {}",
                sampler.dim()
            )));
        }
        Self::from_fn_with_budget(extent, budget, |n| T::of(sampler.value(n)))
    }

    /// Prefix sums of the cell values `cell(n)`, `n` ranging over `[1, extent]`.
    pub fn from_fn(extent: &[usize], cell: impl FnMut(&[usize]) -> T) -> Result<Self> {
        Self::from_fn_with_budget(extent, DEFAULT_CELL_BUDGET, cell)
    }

    pub fn from_fn_with_budget(
        extent: &[usize],
        budget: u128,
        mut cell: impl FnMut(&[usize]) -> T,
    ) -> Result<Self> {
        if extent.is_empty() || extent.iter().any(|&n| n == 0) {
            return Err(Error::Argument(format!("extent must be >= 1 componentwise, got {extent:?}")));
        }
        let cells = cell_count(extent);
        if cells > budget {
            return Err(Error::Capacity { cells, budget });
        }
        let strides = strides_for(extent);
        let mut values = Vec::with_capacity(cells as usize);
        let mut idx = vec![1usize; extent.len()];
        for _ in 0..cells {
            values.push(cell(&idx));
            for i in (0..idx.len()).rev() {
                if idx[i] < extent[i] {
                    idx[i] += 1;
                    break;
                }
                idx[i] = 1;
            }
        }
        let mut grid = Self { extent: extent.to_vec(), strides, values };
        grid.accumulate();
        Ok(grid)
    }

    /// One cumulative scan per axis turns cell values into box sums.
    fn accumulate(&mut self) {
        let total = self.values.len();
        for axis in 0..self.extent.len() {
            let stride = self.strides[axis];
            let span = stride * self.extent[axis];
            for base in (0..total).step_by(span) {
                for off in base + stride..base + span {
                    let prev = self.values[off - stride];
                    self.values[off] = self.values[off] + prev;
                }
            }
        }
    }

    pub fn extent(&self) -> &[usize] {
        &self.extent
    }

    fn offset(&self, n: &[usize]) -> usize {
        n.iter().zip(&self.strides).map(|(&c, &s)| (c - 1) * s).sum()
    }

    /// Summand at cell `n`, recovered from `2^d` prefix corners by inclusion–exclusion.
    pub fn cell_mass(&self, n: &[usize]) -> Option<T> {
        let d = n.len();
        let mut acc = T::zero();
        let mut corner = vec![0; d];
        for mask in 0..1usize << d {
            let mut flips = 0;
            for i in 0..d {
                if mask >> i & 1 == 1 {
                    corner[i] = n[i].checked_sub(1)?;
                    flips += 1;
                } else {
                    corner[i] = n[i];
                }
            }
            let v = self.lattice_sum(&corner)?;
            acc = if flips % 2 == 0 { acc + v } else { acc - v };
        }
        Some(acc)
    }
}

impl<T: Scalar> LatticeSums<T> for PrefixGrid<T> {
    fn dim(&self) -> usize {
        self.extent.len()
    }

    fn lattice_sum(&self, n: &[usize]) -> Option<T> {
        if n.len() != self.extent.len() {
            return None;
        }
        if n.iter().any(|&c| c == 0) {
            return Some(T::zero());
        }
        if n.iter().zip(&self.extent).any(|(&c, &e)| c > e) {
            return None;
        }
        Some(self.values[self.offset(n)])
    }
}

/// Brute-force `S_n` summed straight from the sampler; `O(|n|)` per query.
#[derive(Debug, Clone, Copy)]
pub struct DirectSums<'a> {
    sampler: &'a FieldSampler,
}

impl<'a> DirectSums<'a> {
    pub fn new(sampler: &'a FieldSampler) -> Self {
        Self { sampler }
    }
}

impl<T: Scalar> LatticeSums<T> for DirectSums<'_> {
    fn dim(&self) -> usize {
        self.sampler.dim()
    }

    fn lattice_sum(&self, n: &[usize]) -> Option<T> {
        if n.len() != self.sampler.dim() {
            return None;
        }
        if n.iter().any(|&c| c == 0) {
            return Some(T::zero());
        }
        let mut idx = vec![1usize; n.len()];
        let mut acc = 0.0;
        'outer: loop {
            acc += self.sampler.value(&idx);
            for i in (0..idx.len()).rev() {
                if idx[i] < n[i] {
                    idx[i] += 1;
                    continue 'outer;
                }
                idx[i] = 1;
            }
            break;
        }
        Some(T::of(acc))
    }
}

/// Sum and count of lattice points of a cone below `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSums {
    /// `S_n(K) = sum of xi_k over k <= n, k in K`.
    pub sum: f64,
    /// `R_n(K) = card{k in K : k <= n}`.
    pub count: u64,
}

pub fn cone_restricted(sampler: &FieldSampler, cone: &ConeSpec<f64>, n: &[usize]) -> Result<ConeSums> {
    cone.validate()?;
    if n.len() != sampler.dim() || n.len() != cone.dim() {
        return Err(Error::Argument(format!(
            "index {n:?} does not match field dimension {} / cone dimension {}",
            sampler.dim(),
            cone.dim()
        )));
    }
    if n.iter().any(|&c| c == 0) {
        return Err(Error::Domain(format!("cone sums need n >= 1, got {n:?}")));
    }
    let mut idx = vec![1usize; n.len()];
    let mut point = vec![0.0; n.len()];
    let mut out = ConeSums { sum: 0.0, count: 0 };
    'outer: loop {
        for (p, &k) in point.iter_mut().zip(&idx) {
            *p = k as f64;
        }
        if cone.contains(&point) {
            out.sum += sampler.value(&idx);
            out.count += 1;
        }
        for i in (0..idx.len()).rev() {
            if idx[i] < n[i] {
                idx[i] += 1;
                continue 'outer;
            }
            idx[i] = 1;
        }
        break;
    }
    Ok(out)
}

/// Planar staircase `n_m = max{n >= 0 : S_(m,n) < t}`, one entry per row `m = 1, 2, ...`,
/// ending with the first row where `n_m = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    pub threshold: f64,
    pub rows: Vec<usize>,
}

impl Staircase {
    /// Number of lattice points with `S_n < t`.
    pub fn deficiency(&self) -> u64 {
        self.rows.iter().map(|&n| n as u64).sum()
    }
}

fn require_monotone(sampler: &FieldSampler, what: &str) -> Result<()> {
    if !sampler.distribution().nonnegative() {
        return Err(Error::Unsupported(format!(
            "{what} needs nonnegative summands; {} has negative support",
            sampler.distribution()
        )));
    }
    Ok(())
}

/// Streams the staircase of `{S < t}` for a planar field using column accumulators
/// `C_j = sum_{i <= m} xi_(i,j)`; memory is `O(n_1)`.
///
/// Row `m` only visits columns `j <= n_{m-1}` because `S_(m,j) >= S_(m-1,j)`, so
/// every accumulator it reads was brought up to row `m - 1` by the previous row.
/// `max_extent` bounds both the number of rows and of columns.
/// Once a row has `n_m = 0` every later row does too, so the count is exact.
pub fn staircase_sweep(sampler: &FieldSampler, t: f64, max_extent: usize) -> Result<Staircase> {
    if sampler.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "streaming sweep is planar only, field has dimension {}",
            sampler.dim()
        )));
    }
    require_monotone(sampler, "the staircase sweep")?;
    let mut rows = Vec::new();
    if !(t > 0.0) {
        rows.push(0);
        return Ok(Staircase { threshold: t, rows });
    }
    let mut cols: Vec<f64> = Vec::new();
    let mut prev = usize::MAX;
    for m in 1..=max_extent {
        let mut run = 0.0;
        let mut n = 0;
        while n < prev {
            let j = n + 1;
            if j > cols.len() {
                if j > max_extent {
                    return Err(Error::RowLimit(max_extent));
                }
                cols.push(0.0);
            }
            cols[j - 1] += sampler.value(&[m, j]);
            run += cols[j - 1];
            if run >= t {
                break;
            }
            n = j;
        }
        rows.push(n);
        if n == 0 {
            return Ok(Staircase { threshold: t, rows });
        }
        prev = n;
    }
    Err(Error::RowLimit(max_extent))
}

/// Planar prefix sums over the window `[1, rows] x [1, cols]`, stored only up to one
/// column past the staircase of level `cap`.
///
/// Row `m` keeps columns `1..=min(cols, f_{m-1} + 1)` where `f_m` is the number of
/// cells of row `m` below `cap`. Any window cell left out has `S >= cap`, and every
/// cube whose lower corner has `S < cap` has all four corners stored, so `S_x` is
/// exact wherever `S_x < cap`.
#[derive(Debug, Clone)]
pub struct StaircaseGrid<T> {
    cap: T,
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    lens: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> StaircaseGrid<T> {
    pub fn build(sampler: &FieldSampler, cap: f64, rows: usize, cols: usize) -> Result<Self> {
        if sampler.dim() != 2 {
            return Err(Error::Unsupported("staircase grids are planar only".into()));
        }
        require_monotone(sampler, "a staircase grid")?;
        if rows == 0 || cols == 0 {
            return Err(Error::Argument("staircase window must be nonempty".into()));
        }
        let mut acc = vec![0.0f64; cols];
        let mut offsets = Vec::with_capacity(rows);
        let mut lens = Vec::with_capacity(rows);
        let mut values = Vec::new();
        let mut below_prev = cols;
        for m in 1..=rows {
            let len = if m == 1 { cols } else { cols.min(below_prev + 1) };
            offsets.push(values.len());
            lens.push(len);
            let mut run = 0.0;
            let mut below = 0;
            for j in 1..=len {
                acc[j - 1] += sampler.value(&[m, j]);
                run += acc[j - 1];
                if run < cap {
                    below = j;
                }
                values.push(T::of(run));
            }
            below_prev = below;
        }
        Ok(Self { cap: T::of(cap), rows, cols, offsets, lens, values })
    }

    pub fn cap(&self) -> T {
        self.cap
    }

    /// Window `(rows, cols)`.
    pub fn window(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn stored_cells(&self) -> usize {
        self.values.len()
    }
}

impl<T: Scalar> LatticeSums<T> for StaircaseGrid<T> {
    fn dim(&self) -> usize {
        2
    }

    fn lattice_sum(&self, n: &[usize]) -> Option<T> {
        match self.lattice_level(n)? {
            Level::Exact(v) => Some(v),
            Level::AtLeast(_) => None,
        }
    }

    fn lattice_level(&self, n: &[usize]) -> Option<Level<T>> {
        let (m, j) = match n {
            [m, j] => (*m, *j),
            _ => return None,
        };
        if m == 0 || j == 0 {
            return Some(Level::Exact(T::zero()));
        }
        if m > self.rows || j > self.cols {
            return None;
        }
        if j <= self.lens[m - 1] {
            Some(Level::Exact(self.values[self.offsets[m - 1] + j - 1]))
        } else {
            Some(Level::AtLeast(self.cap))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise_field::SummandDistribution;

    fn unit_field(d: usize) -> FieldSampler {
        FieldSampler::new(0, SummandDistribution::constant(1.0).unwrap(), d).unwrap()
    }

    fn exp_field(seed: u64, d: usize) -> FieldSampler {
        FieldSampler::new(seed, SummandDistribution::exponential(1.0).unwrap(), d).unwrap()
    }

    #[test]
    fn two_by_two_prefix() {
        let cells = [[1.0, 2.0], [3.0, 4.0]];
        let g = PrefixGrid::<f64>::from_fn(&[2, 2], |n| cells[n[0] - 1][n[1] - 1]).unwrap();
        assert_eq!(g.lattice_sum(&[1, 1]), Some(1.0));
        assert_eq!(g.lattice_sum(&[1, 2]), Some(3.0));
        assert_eq!(g.lattice_sum(&[2, 1]), Some(4.0));
        assert_eq!(g.lattice_sum(&[2, 2]), Some(10.0));
        assert_eq!(g.lattice_sum(&[0, 2]), Some(0.0));
        assert_eq!(g.lattice_sum(&[3, 1]), None);
    }

    #[test]
    fn unit_summands_count_the_box() {
        let g = PrefixGrid::<f64>::build(&unit_field(3), &[3, 4, 5]).unwrap();
        assert_eq!(g.lattice_sum(&[2, 3, 4]), Some(24.0));
        assert_eq!(g.lattice_sum(&[3, 4, 5]), Some(60.0));
    }

    #[test]
    fn capacity_error() {
        let err = PrefixGrid::<f64>::build_with_budget(&unit_field(2), &[100, 100], 5000).unwrap_err();
        assert!(matches!(err, Error::Capacity { cells: 10000, budget: 5000 }));
    }

    #[test]
    fn single_bump_interpolation() {
        let g = PrefixGrid::<f64>::from_fn(&[3, 3], |n| if n == [1, 1] { 4.0 } else { 0.0 }).unwrap();
        assert!((interpolate(&g, &[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(interpolate(&g, &[2.0, 3.0]).unwrap(), 4.0);
        assert_eq!(interpolate(&g, &[0.0, 2.5]).unwrap(), 0.0);
    }

    #[test]
    fn unit_interpolation_is_volume() {
        let g = PrefixGrid::<f64>::build(&unit_field(2), &[4, 4]).unwrap();
        assert!((interpolate(&g, &[1.5, 2.5]).unwrap() - 3.75).abs() < 1e-15);
        assert!(matches!(interpolate(&g, &[-0.5, 1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn stencil_weights_sum_to_one() {
        let s = Stencil::new(&[2.25, 0.5, 3.0]).unwrap();
        assert_eq!(s.lower(), &[2, 0, 2]);
        let total: f64 = s.corners().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(s.corners().all(|(_, w)| w >= 0.0));
    }

    #[test]
    fn lattice_points_take_either_cube() {
        // Both neighbouring cubes must give S_n at a shared vertex.
        let f = exp_field(5, 2);
        let g = PrefixGrid::<f64>::build(&f, &[6, 6]).unwrap();
        let exact = g.lattice_sum(&[2, 3]).unwrap();
        assert_eq!(interpolate(&g, &[2.0, 3.0]).unwrap(), exact);
        let eps = 1e-12;
        assert!((interpolate(&g, &[2.0 + eps, 3.0 + eps]).unwrap() - exact).abs() < 1e-9);
    }

    #[test]
    fn direct_sums_match_dense() {
        let f = exp_field(9, 3);
        let g = PrefixGrid::<f64>::build(&f, &[4, 4, 4]).unwrap();
        let direct = DirectSums::new(&f);
        for n in [[1, 1, 1], [2, 3, 4], [4, 4, 4], [3, 1, 2]] {
            let a: f64 = direct.lattice_sum(&n).unwrap();
            assert!((a - g.lattice_sum(&n).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn cell_mass_recovers_summands() {
        let f = exp_field(2, 3);
        let g = PrefixGrid::<f64>::build(&f, &[3, 4, 2]).unwrap();
        for n in [[1, 1, 1], [3, 4, 2], [2, 2, 1]] {
            assert!((g.cell_mass(&n).unwrap() - f.value(&n)).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_staircase() {
        let s = staircase_sweep(&unit_field(2), 3.5, 100).unwrap();
        assert_eq!(s.rows, vec![3, 1, 1, 0]);
        assert_eq!(s.deficiency(), 5);
    }

    #[test]
    fn low_threshold_staircase_is_empty() {
        let f = exp_field(4, 2);
        let t = f.value(&[1, 1]) * 0.5;
        let s = staircase_sweep(&f, t, 100).unwrap();
        assert_eq!(s.rows, vec![0]);
        assert_eq!(staircase_sweep(&f, 0.0, 10).unwrap().deficiency(), 0);
    }

    #[test]
    fn sweep_rejects_signed_and_non_planar() {
        let signed = FieldSampler::new(1, SummandDistribution::shifted_pareto(3.0, 2.0, -0.5).unwrap(), 2)
            .unwrap();
        assert!(matches!(staircase_sweep(&signed, 10.0, 100), Err(Error::Unsupported(_))));
        assert!(matches!(staircase_sweep(&unit_field(3), 10.0, 100), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sweep_row_limit() {
        assert!(matches!(staircase_sweep(&unit_field(2), 1e6, 1000), Err(Error::RowLimit(1000))));
    }

    #[test]
    fn staircase_grid_is_exact_below_cap() {
        let f = exp_field(21, 2);
        let cap = 150.0;
        let sg = StaircaseGrid::<f64>::build(&f, cap, 40, 40).unwrap();
        let dense = PrefixGrid::<f64>::build(&f, &[40, 40]).unwrap();
        assert!(sg.stored_cells() < 40 * 40);
        for m in 1..=40 {
            for j in 1..=40 {
                let d = dense.lattice_sum(&[m, j]).unwrap();
                match sg.lattice_level(&[m, j]).unwrap() {
                    Level::Exact(v) => assert_eq!(v, d),
                    Level::AtLeast(c) => assert!(d >= c),
                }
            }
        }
        let mut x = 0.3;
        while x < 39.0 {
            let y = 150.0 / x;
            if y < 39.0 {
                for p in [[x, y], [x, 0.9 * y], [0.8 * x, 0.8 * y]] {
                    let exact = interpolate(&dense, &p).unwrap();
                    match interpolate_level(&sg, &p).unwrap() {
                        Level::Exact(v) => assert!((v - exact).abs() < 1e-9),
                        Level::AtLeast(c) => assert!(exact >= c && c >= cap),
                    }
                    if exact < cap {
                        assert!(interpolate_level(&sg, &p).unwrap().is_exact());
                    }
                }
            }
            x += 0.37;
        }
        assert!(matches!(interpolate_level(&sg, &[41.0, 1.0]), Err(Error::OutsideRegion(_))));
    }
}
