//! Limit sets `H(c) = {x >= 0 : |x| >= 1/mu + c}`, cones, the cone constant
//! `L_K = (1/d) * integral over K ∩ S^{d-1} of |u|^{-1} du`, and closed-form and
//! sampled distances between upper sets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;
use crate::scalar::{euclidean_dist, euclidean_norm, volume, Scalar};

/// Closed convex cone with `K \ {0}` inside the open orthant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConeSpec<T> {
    /// `{x >= 0 : min_i x^i >= theta * max_i x^i}`, `theta` in `(0, 1]`.
    Aperture { dim: usize, theta: T },
    /// Planar sector of polar angles `[lo, hi]` inside `(0, pi/2)`.
    AngleInterval { lo: T, hi: T },
}

impl<T: Scalar> ConeSpec<T> {
    pub fn aperture(dim: usize, theta: T) -> Result<Self> {
        let cone = ConeSpec::Aperture { dim, theta };
        cone.validate()?;
        Ok(cone)
    }

    pub fn angles(lo: T, hi: T) -> Result<Self> {
        let cone = ConeSpec::AngleInterval { lo, hi };
        cone.validate()?;
        Ok(cone)
    }

    pub fn dim(&self) -> usize {
        match *self {
            ConeSpec::Aperture { dim, .. } => dim,
            ConeSpec::AngleInterval { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ConeSpec::Aperture { dim, theta } => {
                if dim == 0 {
                    return Err(Error::InvalidCone("dimension must be at least 1".into()));
                }
                if !(theta > T::zero() && theta <= T::one()) {
                    return Err(Error::InvalidCone(format!(
                        "aperture must lie in (0, 1], got {theta}; theta = 0 touches the coordinate planes"
                    )));
                }
            }
            ConeSpec::AngleInterval { lo, hi } => {
                if !(lo > T::zero() && lo <= hi && hi < T::FRAC_PI_2()) {
                    return Err(Error::InvalidCone(format!(
                        "angle interval [{lo}, {hi}] must satisfy 0 < lo <= hi < pi/2"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Membership of a point of the closed orthant; the origin belongs to every cone.
    pub fn contains(&self, x: &[T]) -> bool {
        if x.len() != self.dim() || x.iter().any(|&v| v < T::zero()) {
            return false;
        }
        if x.iter().all(|&v| v == T::zero()) {
            return true;
        }
        match *self {
            ConeSpec::Aperture { theta, .. } => {
                let (lo, hi) = x
                    .iter()
                    .fold((T::infinity(), T::zero()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
                lo >= theta * hi
            }
            ConeSpec::AngleInterval { lo, hi } => {
                let a = x[1].atan2(x[0]);
                a >= lo && a <= hi
            }
        }
    }

    /// Polar-angle interval of a planar cone.
    pub fn angle_interval(&self) -> Option<(T, T)> {
        match *self {
            ConeSpec::AngleInterval { lo, hi } => Some((lo, hi)),
            ConeSpec::Aperture { dim: 2, theta } => Some((theta.atan(), theta.recip().atan())),
            ConeSpec::Aperture { .. } => None,
        }
    }
}

fn require_open_orthant<T: Scalar>(u: &[T]) -> Result<()> {
    if u.is_empty() || u.iter().any(|&v| !(v > T::zero()) || !v.is_finite()) {
        return Err(Error::Domain(format!(
            "direction must lie in the open orthant, got {:?}",
            u.iter().map(|v| v.f64()).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

/// Radial function of `{x >= 0 : |x| >= level}` in direction `u`; zero when `level <= 0`.
pub fn level_radial<T: Scalar>(level: T, u: &[T]) -> Result<T> {
    require_open_orthant(u)?;
    if level <= T::zero() {
        return Ok(T::zero());
    }
    Ok((level / volume(u)).powf(T::one() / T::of_usize(u.len())))
}

/// `H(c)` for a summand mean `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSet<T> {
    mu: T,
    c: T,
    dim: usize,
}

impl<T: Scalar> LimitSet<T> {
    pub fn new(mu: T, c: T, dim: usize) -> Result<Self> {
        if !(mu > T::zero()) || dim == 0 {
            return Err(Error::Argument(format!("need mu > 0 and d >= 1, got mu={mu}, d={dim}")));
        }
        let level = mu.recip() + c;
        if !(level > T::zero()) {
            return Err(Error::EmptySet(level.f64()));
        }
        Ok(Self { mu, c, dim })
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `1/mu + c`.
    pub fn level(&self) -> T {
        self.mu.recip() + self.c
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim && x.iter().all(|&v| v >= T::zero()) && volume(x) >= self.level()
    }

    /// `((1/mu + c) / |u|)^{1/d}`; homogeneous of degree -1 in `u`.
    pub fn radial(&self, u: &[T]) -> Result<T> {
        if u.len() != self.dim {
            return Err(Error::Domain(format!("direction has {} components, set has dimension {}", u.len(), self.dim)));
        }
        level_radial(self.level(), u)
    }
}

pub fn h_radial<T: Scalar>(ls: &LimitSet<T>, u: &[T]) -> Result<T> {
    ls.radial(u)
}

fn check_levels<T: Scalar>(c1: T, c2: T, mu: T) -> Result<()> {
    if !(mu > T::zero()) {
        return Err(Error::Argument(format!("mu must be positive, got {mu}")));
    }
    if !(c1 > -mu.recip() && c1 <= c2) {
        return Err(Error::Argument(format!("need -1/mu < c1 <= c2, got c1={c1}, c2={c2}, mu={mu}")));
    }
    Ok(())
}

/// `rho_H(H(c1), H(c2)) = sqrt(d) * ((1/mu + c2)^{1/d} - (1/mu + c1)^{1/d})`.
pub fn hausdorff_closed<T: Scalar>(c1: T, c2: T, mu: T, d: usize) -> Result<T> {
    check_levels(c1, c2, mu)?;
    let inv_d = T::one() / T::of_usize(d);
    let base = mu.recip();
    Ok(T::of_usize(d).sqrt() * ((base + c2).powf(inv_d) - (base + c1).powf(inv_d)))
}

/// First-order form `d^{-1/2} mu^{1-1/d} (c2 - c1)` of [`hausdorff_closed`] for small levels.
pub fn hausdorff_first_order<T: Scalar>(c1: T, c2: T, mu: T, d: usize) -> T {
    let df = T::of_usize(d);
    df.sqrt().recip() * mu.powf(T::one() - df.recip()) * (c2 - c1)
}

/// `rho_triangle^K(H(c1), H(c2)) = L_K (c2 - c1)`.
pub fn symdiff_closed<T: Scalar>(cone: &ConeSpec<T>, c1: T, c2: T, mu: T) -> Result<T> {
    check_levels(c1, c2, mu)?;
    let lk = if cone.angle_interval().is_some() {
        l_k(cone, LkMethod::Analytic2d)?
    } else {
        l_k(cone, LkMethod::default())?
    };
    Ok(lk.value * (c2 - c1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum LkMethod {
    Analytic2d,
    /// Composite Gauss–Legendre over the spherical cap, refined by doubling.
    Quadrature { tol: f64, max_panels: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for LkMethod {
    fn default() -> Self {
        LkMethod::Quadrature { tol: 1e-10, max_panels: 256 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LkEstimate<T> {
    pub value: T,
    pub error_bound: T,
    /// False when the quadrature budget ran out before reaching the tolerance.
    pub converged: bool,
}

/// Weighted directions approximating integrals over `K ∩ S^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeRule<T> {
    pub directions: Vec<Vec<T>>,
    pub weights: Vec<T>,
}

impl<T: Scalar> ConeRule<T> {
    pub fn integrate(&self, mut f: impl FnMut(&[T]) -> T) -> T {
        self.directions
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (u, &w)| acc + w * f(u))
    }

    pub fn try_integrate(&self, mut f: impl FnMut(&[T]) -> Result<T>) -> Result<T> {
        let mut acc = T::zero();
        for (u, &w) in self.directions.iter().zip(&self.weights) {
            acc = acc + w * f(u)?;
        }
        Ok(acc)
    }
}

const NODES_PER_PANEL: usize = 4;

fn panel_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    (0..panels)
        .flat_map(|p| gauss_legendre_on(NODES_PER_PANEL, a + p as f64 * h, a + (p + 1) as f64 * h))
        .collect()
}

/// Composite 4-point Gauss–Legendre rule over `K ∩ S^{d-1}` with `panels` panels per
/// angular coordinate. Supports planar cones and aperture cones in dimension 3.
pub fn cone_rule<T: Scalar>(cone: &ConeSpec<T>, panels: usize) -> Result<ConeRule<T>> {
    cone.validate()?;
    let panels = panels.max(1);
    let mut rule = ConeRule { directions: Vec::new(), weights: Vec::new() };
    match (cone.dim(), cone.angle_interval()) {
        (1, _) => {
            rule.directions.push(vec![T::one()]);
            rule.weights.push(T::one());
        }
        (2, Some((lo, hi))) => {
            if hi > lo {
                for (a, w) in panel_rule(lo.f64(), hi.f64(), panels) {
                    rule.directions.push(vec![T::of(a.cos()), T::of(a.sin())]);
                    rule.weights.push(T::of(w));
                }
            }
        }
        (3, None) => {
            let theta = match *cone {
                ConeSpec::Aperture { theta, .. } => theta.f64(),
                ConeSpec::AngleInterval { .. } => unreachable!("angle intervals are planar"),
            };
            // Azimuth psi fixes x1 : x2; the polar range is explicit on each side of pi/4.
            let quarter = std::f64::consts::FRAC_PI_4;
            for (a, b) in [(theta.atan(), quarter), (quarter, theta.recip().atan())] {
                if b <= a {
                    continue;
                }
                for (psi, wpsi) in panel_rule(a, b, panels) {
                    let (s, c) = psi.sin_cos();
                    let phi_lo = (theta / s.min(c)).atan();
                    let phi_hi = (1.0 / (theta * s.max(c))).atan();
                    if phi_hi <= phi_lo {
                        continue;
                    }
                    for (phi, wphi) in panel_rule(phi_lo, phi_hi, panels) {
                        let (sp, cp) = phi.sin_cos();
                        rule.directions.push(vec![T::of(sp * c), T::of(sp * s), T::of(cp)]);
                        rule.weights.push(T::of(wpsi * wphi * sp));
                    }
                }
            }
        }
        (d, _) => {
            return Err(Error::Unsupported(format!(
                "cone quadrature is available for d <= 3 only (d = {d}); use Monte Carlo"
            )))
        }
    }
    Ok(rule)
}

/// Surface area of `S^{d-1} ∩ [0, inf)^d`.
fn orthant_sphere_area(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / statrs::function::gamma::gamma(half) / 2f64.powi(d as i32)
}

pub fn l_k<T: Scalar>(cone: &ConeSpec<T>, method: LkMethod) -> Result<LkEstimate<T>> {
    cone.validate()?;
    let d = cone.dim();
    let df = d as f64;
    match method {
        LkMethod::Analytic2d => {
            let (lo, hi) = cone.angle_interval().ok_or_else(|| {
                Error::Unsupported("analytic L_K needs a planar cone".into())
            })?;
            // (1/2) * integral of dtheta / (sin cos) = (1/2) * ln tan.
            let value = T::of(0.5) * (hi.tan() / lo.tan()).ln();
            Ok(LkEstimate { value, error_bound: T::zero(), converged: true })
        }
        LkMethod::Quadrature { tol, max_panels } => {
            let integrand = |u: &[T]| volume(u).recip();
            let mut panels = 1;
            let mut prev = cone_rule(cone, panels)?.integrate(integrand).f64() / df;
            loop {
                panels *= 2;
                let next = cone_rule(cone, panels)?.integrate(integrand).f64() / df;
                let err = (next - prev).abs();
                if err <= tol || panels * 2 > max_panels {
                    return Ok(LkEstimate {
                        value: T::of(next),
                        error_bound: T::of(err),
                        converged: err <= tol,
                    });
                }
                prev = next;
            }
        }
        LkMethod::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::Argument("Monte Carlo needs at least two samples".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut u = vec![T::zero(); d];
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..samples {
                let mut norm = 0.0;
                for v in u.iter_mut() {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    norm += g * g;
                    *v = T::of(g.abs());
                }
                let norm = T::of(norm.sqrt());
                u.iter_mut().for_each(|v| *v = *v / norm);
                let f = if cone.contains(&u) { volume(&u).recip().f64() } else { 0.0 };
                sum += f;
                sum_sq += f * f;
            }
            let n = samples as f64;
            let mean = sum / n;
            let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
            let scale = orthant_sphere_area(d) / df;
            Ok(LkEstimate {
                value: T::of(scale * mean),
                error_bound: T::of(4.0 * scale * (var / n).sqrt()),
                converged: true,
            })
        }
    }
}

/// Euclidean projection of a point onto `H(c)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection<T> {
    pub distance: T,
    pub nearest: Vec<T>,
    /// True when the Newton solve failed and a direction scan produced the answer.
    pub fallback: bool,
}

/// Distance from `x >= 0` to `H(c)`.
///
/// Outside the set the nearest point solves the Lagrange system
/// `y_i - x_i = lambda * a / y_i` with `|y| = a`, i.e.
/// `y_i(lambda) = (x_i + sqrt(x_i^2 + 4 lambda a)) / 2`; the scalar equation
/// `sum ln y_i(lambda) = ln a` is increasing in `lambda` and solved by safeguarded Newton.
pub fn dist_to_limit<T: Scalar>(x: &[T], ls: &LimitSet<T>) -> Result<Projection<T>> {
    if x.len() != ls.dim() || x.iter().any(|&v| !(v >= T::zero())) {
        return Err(Error::Domain(format!(
            "point must be a {}-vector in the closed orthant",
            ls.dim()
        )));
    }
    if ls.contains(x) {
        return Ok(Projection { distance: T::zero(), nearest: x.to_vec(), fallback: false });
    }
    let a = ls.level();
    let ln_a = a.ln();
    let four_a = T::of(4.0) * a;
    let point = |lambda: T| -> Vec<T> {
        x.iter()
            .map(|&xi| (xi + (xi * xi + four_a * lambda).sqrt()) / T::of(2.0))
            .collect()
    };
    let g = |lambda: T| -> (T, T) {
        let mut val = -ln_a;
        let mut der = T::zero();
        for &xi in x {
            let root = (xi * xi + four_a * lambda).sqrt();
            let y = (xi + root) / T::of(2.0);
            val = val + y.ln();
            if root > T::zero() {
                der = der + a / (y * root);
            }
        }
        (val, der)
    };

    let mut lo = T::zero();
    let mut hi = a.max(T::one());
    while g(hi).0 < T::zero() {
        lo = hi;
        hi = hi * T::of(2.0);
        if !hi.is_finite() {
            break;
        }
    }
    let mut lambda = (lo + hi) / T::of(2.0);
    let mut converged = false;
    for _ in 0..200 {
        let (val, der) = g(lambda);
        if val.abs() <= T::epsilon() * T::of(16.0) {
            converged = true;
            break;
        }
        if val < T::zero() {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let newton = if der > T::zero() { lambda - val / der } else { T::nan() };
        let next = if newton > lo && newton < hi { newton } else { (lo + hi) / T::of(2.0) };
        if (next - lambda).abs() <= T::epsilon() * lambda.max(T::min_positive_value()) * T::of(4.0) {
            lambda = next;
            converged = true;
            break;
        }
        lambda = next;
    }
    if converged && lambda.is_finite() {
        let nearest = point(lambda);
        return Ok(Projection { distance: euclidean_dist(x, &nearest), nearest, fallback: false });
    }
    dist_by_scan(x, ls)
}

/// Dense scan of boundary points along a direction net; coarse fallback for the Newton solve.
fn dist_by_scan<T: Scalar>(x: &[T], ls: &LimitSet<T>) -> Result<Projection<T>> {
    let dirs = orthant_net::<T>(ls.dim(), 20_000)?;
    let mut best = (T::infinity(), x.to_vec());
    for u in &dirs {
        let r = ls.radial(u)?;
        let y: Vec<T> = u.iter().map(|&v| v * r).collect();
        let dist = euclidean_dist(x, &y);
        if dist < best.0 {
            best = (dist, y);
        }
    }
    Ok(Projection { distance: best.0, nearest: best.1, fallback: true })
}

/// `count` planar unit directions at the midpoints of equal angle steps over `[lo, hi]`.
pub fn planar_net<T: Scalar>(lo: T, hi: T, count: usize) -> Vec<Vec<T>> {
    let count = count.max(1);
    let step = (hi - lo) / T::of_usize(count);
    (0..count)
        .map(|k| {
            let a = lo + step * (T::of_usize(k) + T::of(0.5));
            vec![a.cos(), a.sin()]
        })
        .collect()
}

/// Spherical Fibonacci directions in the open octant that satisfy `keep`; returns at
/// least `count` points when `keep` has positive area.
fn fibonacci_octant<T: Scalar>(count: usize, keep: impl Fn(&[T]) -> bool) -> Vec<Vec<T>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut total = (count * 4).max(16);
    loop {
        let mut out = Vec::new();
        for k in 0..total {
            let z = 1.0 - (k as f64 + 0.5) / total as f64;
            let rho = (1.0 - z * z).sqrt();
            let az = (k as f64 * golden).rem_euclid(2.0 * std::f64::consts::PI);
            if az <= 0.0 || az >= std::f64::consts::FRAC_PI_2 {
                continue;
            }
            let u = [T::of(rho * az.cos()), T::of(rho * az.sin()), T::of(z)];
            if u.iter().all(|&v| v > T::zero()) && keep(&u) {
                out.push(u.to_vec());
            }
        }
        if out.len() >= count || total > 1 << 24 {
            return out;
        }
        total *= 2;
    }
}

/// Directions covering the open orthant (`d` in 1..=3).
pub fn orthant_net<T: Scalar>(d: usize, count: usize) -> Result<Vec<Vec<T>>> {
    match d {
        1 => Ok(vec![vec![T::one()]]),
        2 => Ok(planar_net(T::zero(), T::FRAC_PI_2(), count)),
        3 => Ok(fibonacci_octant(count, |_| true)),
        _ => Err(Error::Unsupported(format!("direction nets are available for d <= 3, got {d}"))),
    }
}

/// Directions covering `K ∩ S^{d-1}`: equal-angle for planar cones, Fibonacci for `d = 3`.
pub fn cone_net<T: Scalar>(cone: &ConeSpec<T>, count: usize) -> Result<Vec<Vec<T>>> {
    cone.validate()?;
    match (cone.dim(), cone.angle_interval()) {
        (1, _) => Ok(vec![vec![T::one()]]),
        (2, Some((lo, hi))) => Ok(if lo == hi {
            vec![vec![lo.cos(), lo.sin()]]
        } else {
            planar_net(lo, hi, count)
        }),
        (3, _) => Ok(fibonacci_octant(count, |u| cone.contains(u))),
        (d, _) => Err(Error::Unsupported(format!("direction nets are available for d <= 3, got {d}"))),
    }
}

/// `H_K(c)`: threshold `1/mu + c` inside the cone and `1/mu + c sqrt(d)` outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeLimitSet<T> {
    pub cone: ConeSpec<T>,
    pub mu: T,
    pub c: T,
}

impl<T: Scalar> ConeLimitSet<T> {
    pub fn new(cone: ConeSpec<T>, mu: T, c: T) -> Result<Self> {
        cone.validate()?;
        if !(mu > T::zero()) {
            return Err(Error::Argument(format!("mu must be positive, got {mu}")));
        }
        Ok(Self { cone, mu, c })
    }

    pub fn inner_level(&self) -> T {
        self.mu.recip() + self.c
    }

    pub fn outer_level(&self) -> T {
        self.mu.recip() + self.c * T::of_usize(self.cone.dim()).sqrt()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        if x.len() != self.cone.dim() || x.iter().any(|&v| v < T::zero()) {
            return false;
        }
        let level = if self.cone.contains(x) { self.inner_level() } else { self.outer_level() };
        volume(x) >= level
    }

    /// Radial function; each ray lies entirely inside or outside the cone.
    pub fn radial(&self, u: &[T]) -> Result<T> {
        let level = if self.cone.contains(u) { self.inner_level() } else { self.outer_level() };
        level_radial(level, u)
    }
}

pub fn cone_limit_contains<T: Scalar>(cls: &ConeLimitSet<T>, x: &[T]) -> bool {
    cls.contains(x)
}

/// Boundary samples of an upper set in the closed orthant.
///
/// Planar clouds ordered by polar angle are read as a polyline, so the distance
/// from a point to the upper set is second-order accurate in the sample spacing;
/// otherwise the set is approximated by the union of orthants `a + R_+^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCloud<T> {
    dim: usize,
    points: Vec<Vec<T>>,
    ordered: bool,
}

impl<T: Scalar> BoundaryCloud<T> {
    pub fn new(dim: usize, points: Vec<Vec<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Argument("boundary cloud must be nonempty".into()));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Argument(format!("all points must have {dim} coordinates")));
        }
        let ordered = dim == 2
            && points.windows(2).all(|w| w[0][1].atan2(w[0][0]) <= w[1][1].atan2(w[1][0]));
        Ok(Self { dim, points, ordered })
    }

    /// Boundary of `H(c)` along the given directions.
    pub fn of_limit(ls: &LimitSet<T>, directions: &[Vec<T>]) -> Result<Self> {
        let pts = directions
            .iter()
            .map(|u| ls.radial(u).map(|r| u.iter().map(|&v| v * r).collect()))
            .collect::<Result<Vec<Vec<T>>>>()?;
        Self::new(ls.dim(), pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    /// Approximate distance from `x` to the upper set bounded by the cloud.
    pub fn dist_to_upper(&self, x: &[T]) -> T {
        let orthant = |a: &[T]| -> T {
            a.iter()
                .zip(x)
                .fold(T::zero(), |acc, (&p, &q)| {
                    let e = (p - q).max(T::zero());
                    acc + e * e
                })
                .sqrt()
        };
        if !self.ordered || self.points.len() == 1 {
            return self.points.iter().fold(T::infinity(), |best, a| best.min(orthant(a)));
        }
        self.points
            .windows(2)
            .fold(T::infinity(), |best, w| best.min(segment_upper_dist(&w[0], &w[1], x)))
    }
}

/// Distance from `b` to the union of `p + R_+^2` over `p` on the segment `[a0, a1]`.
/// `h(s) = |(a0 + s (a1 - a0) - b)_+|^2` is convex, so its minimum is at an endpoint,
/// at a kink where one positive part switches on, or at the unconstrained projection.
fn segment_upper_dist<T: Scalar>(a0: &[T], a1: &[T], b: &[T]) -> T {
    let (x0, y0) = (a0[0] - b[0], a0[1] - b[1]);
    let (dx, dy) = (a1[0] - a0[0], a1[1] - a0[1]);
    let h = |s: T| {
        let ex = (x0 + s * dx).max(T::zero());
        let ey = (y0 + s * dy).max(T::zero());
        ex * ex + ey * ey
    };
    let mut cands = [T::zero(), T::one(), T::zero(), T::zero(), T::zero()];
    let len2 = dx * dx + dy * dy;
    if len2 > T::zero() {
        cands[2] = -(x0 * dx + y0 * dy) / len2;
    }
    if dx != T::zero() {
        cands[3] = -x0 / dx;
    }
    if dy != T::zero() {
        cands[4] = -y0 / dy;
    }
    cands
        .iter()
        .map(|&s| h(s.max(T::zero()).min(T::one())))
        .fold(T::infinity(), T::min)
        .sqrt()
}

/// One side of a Hausdorff comparison.
#[derive(Debug, Clone, Copy)]
pub enum SetSample<'a, T> {
    /// Limit set with exact point-to-set distances and a boundary sample for the sup.
    Limit { set: &'a LimitSet<T>, boundary: &'a BoundaryCloud<T> },
    /// Upper set known only through boundary samples.
    Cloud(&'a BoundaryCloud<T>),
}

impl<T: Scalar> SetSample<'_, T> {
    fn boundary(&self) -> &BoundaryCloud<T> {
        match self {
            SetSample::Limit { boundary, .. } => boundary,
            SetSample::Cloud(c) => c,
        }
    }

    fn dist(&self, x: &[T]) -> Result<T> {
        match self {
            SetSample::Limit { set, .. } => dist_to_limit(x, set).map(|p| p.distance),
            SetSample::Cloud(c) => Ok(c.dist_to_upper(x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HausdorffEstimate<T> {
    pub distance: T,
    pub argmax: Vec<T>,
    /// The maximising boundary point belongs to the first set.
    pub from_first: bool,
    /// The maximiser sits on the window boundary, so the true distance may be larger.
    pub truncated: bool,
}

/// Relative margin at which a maximiser counts as touching the window.
const WINDOW_MARGIN: f64 = 0.02;

/// Hausdorff distance between two upper sets restricted to the window `[0, W]^d`.
/// For upper sets the supremum is attained on boundaries, so only boundary samples
/// inside the window are scanned.
pub fn hausdorff_estimate<T: Scalar>(a: SetSample<'_, T>, b: SetSample<'_, T>, window: T) -> Result<HausdorffEstimate<T>> {
    if a.boundary().dim() != b.boundary().dim() {
        return Err(Error::Argument("sets live in different dimensions".into()));
    }
    if !(window > T::zero()) {
        return Err(Error::Argument(format!("window must be positive, got {window}")));
    }
    let inside = |p: &[T]| p.iter().all(|&v| v <= window);
    let mut best: Option<(T, &Vec<T>, bool)> = None;
    for (from, to, first) in [(&a, &b, true), (&b, &a, false)] {
        for p in from.boundary().points().iter().filter(|p| inside(p)) {
            let dist = to.dist(p)?;
            if best.map_or(true, |(d, _, _)| dist > d) {
                best = Some((dist, p, first));
            }
        }
    }
    let (distance, argmax, from_first) =
        best.ok_or_else(|| Error::Argument("no boundary samples inside the window".into()))?;
    let edge = window * T::of(1.0 - WINDOW_MARGIN);
    Ok(HausdorffEstimate {
        distance,
        truncated: distance > T::zero() && argmax.iter().any(|&v| v >= edge),
        argmax: argmax.clone(),
        from_first,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymdiffEstimate<T> {
    pub value: T,
    pub error_bound: T,
}

/// `lambda_d(K ∩ (A △ B)) = (1/d) * integral over K ∩ S^{d-1} of |r_A(u)^d - r_B(u)^d| du`
/// for sets that are star-shaped along rays, by cone quadrature with `panels`
/// panels compared against half as many.
pub fn symdiff_estimate<T: Scalar>(
    cone: &ConeSpec<T>,
    mut radial_a: impl FnMut(&[T]) -> Result<T>,
    mut radial_b: impl FnMut(&[T]) -> Result<T>,
    panels: usize,
) -> Result<SymdiffEstimate<T>> {
    let d = cone.dim() as i32;
    let dt = T::of_usize(cone.dim());
    let panels = panels.max(2);
    let mut eval = |p: usize| -> Result<T> {
        let rule = cone_rule(cone, p)?;
        rule.try_integrate(|u| Ok((radial_a(u)?.powi(d) - radial_b(u)?.powi(d)).abs()))
            .map(|v| v / dt)
    };
    let fine = eval(panels)?;
    let coarse = eval(panels / 2)?;
    Ok(SymdiffEstimate { value: fine, error_bound: (fine - coarse).abs() })
}

/// `v` rescaled to Euclidean length one.
pub fn unit<T: Scalar>(v: &[T]) -> Vec<T> {
    let n = euclidean_norm(v);
    v.iter().map(|&x| x / n).collect()
}
