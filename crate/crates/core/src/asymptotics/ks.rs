//! One-sample Kolmogorov–Smirnov test.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub alpha: f64,
    /// Asymptotic critical value `sqrt(-ln(alpha/2) / 2) / sqrt(n)`.
    pub critical: f64,
    /// Asymptotic p-value from the Kolmogorov distribution.
    pub p_value: f64,
    pub pass: bool,
}

/// `sup_x |F_n(x) - F(x)|`; sorts `samples` in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples.iter().enumerate().fold(0.0f64, |sup, (i, &x)| {
        let f = cdf(x);
        sup.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

pub fn critical_value(alpha: f64, n: usize) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

pub fn ks_test(samples: &mut [f64], cdf: impl Fn(f64) -> f64, alpha: f64) -> KsResult {
    let n = samples.len();
    let statistic = ks_statistic(samples, cdf);
    let critical = critical_value(alpha, n);
    KsResult {
        statistic,
        n,
        alpha,
        critical,
        p_value: kolmogorov_sf(statistic * (n as f64).sqrt()),
        pass: statistic < critical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_values() {
        assert!((critical_value(0.01, 400) - 0.0814).abs() < 1e-3);
        assert!((critical_value(0.05, 1) - 1.358).abs() < 1e-3);
    }

    #[test]
    fn sf_matches_tabulated_points() {
        // P(K > 1.358) = 0.05, P(K > 1.628) = 0.01.
        assert!((kolmogorov_sf(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_sf(1.628) - 0.01).abs() < 1e-3);
    }

    #[test]
    fn statistic_of_a_perfect_grid() {
        let n = 100;
        let mut s: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&mut s, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.005).abs() < 1e-12);
    }
}
