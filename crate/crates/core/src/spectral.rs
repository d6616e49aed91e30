//! Dirichlet eigenvalue counting for the unit ball.
//!
//! The eigenvalues are `j_{n+d/2−1,k}²`, the pair (n, k) carrying the
//! multiplicity `m_n^d` of degree-n spherical harmonics. Counting
//! `#{eigenvalues ≤ μ²}` therefore needs, for each n with `n + d/2 − 1 < μ`,
//! only the number of zeros of one Bessel function below μ, which
//! [`count_zeros_below`] delivers from the phase with O(1) evaluations.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::specfun::BesselOrder;
use crate::stats;
use crate::zeros::{count_zeros_below, enumerate_zeros_brute};

/// Largest dimension accepted; keeps Γ(d/2+1) and the binomials tame.
pub const MAX_DIMENSION: u32 = 64;

/// Exponent of μ in the remainder bound beyond `d − 2`.
pub const HUXLEY_EXPONENT: f64 = 131.0 / 208.0;
/// Exponent of `log μ` in the remainder bound.
pub const LOG_EXPONENT: f64 = 18627.0 / 8320.0;

pub(crate) fn check_dimension(d: u32) -> Result<()> {
    if !(3..=MAX_DIMENSION).contains(&d) {
        return Err(domain("dimension d", d as f64));
    }
    Ok(())
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `C(n, k)`, zero when `k > n`; overflow is an error.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        let top = (n - k) as u128 + i;
        // acc·top/i is an integer; divide out the common part first
        let g = gcd(acc, i);
        let rest = i / g;
        acc = (acc / g)
            .checked_mul(top / rest)
            .ok_or(Error::Overflow("binomial coefficient"))?;
    }
    Ok(acc)
}

/// `C(a, k)` with `C(a, k) = 0` for negative `a`.
fn binomial_signed(a: i64, k: u64) -> Result<u128> {
    if a < 0 {
        Ok(0)
    } else {
        binomial(a as u64, k)
    }
}

/// `m_n^d = C(n+d−1, d−1) − C(n+d−3, d−1)`.
pub fn multiplicity(n: u64, d: u32) -> Result<u128> {
    check_dimension(d)?;
    let d = d as i64;
    let n = i64::try_from(n).map_err(|_| Error::Overflow("degree n"))?;
    let a = binomial_signed(n + d - 1, (d - 1) as u64)?;
    let b = binomial_signed(n + d - 3, (d - 1) as u64)?;
    Ok(a - b)
}

/// `Δ_l = m_l^d − m_{l−1}^d = C(l+d−2, d−2) − C(l+d−4, d−2)`.
pub fn multiplicity_difference(l: u64, d: u32) -> Result<u128> {
    check_dimension(d)?;
    let d = d as i64;
    let l = i64::try_from(l).map_err(|_| Error::Overflow("degree l"))?;
    let a = binomial_signed(l + d - 2, (d - 2) as u64)?;
    let b = binomial_signed(l + d - 4, (d - 2) as u64)?;
    Ok(a - b)
}

/// `Σ_{n=0}^{N} m_n^d = C(N+d, d) − C(N+d−2, d)`; `(N+1)²` for d = 3.
pub fn cumulative_multiplicity(n_max: u64, d: u32) -> Result<u128> {
    check_dimension(d)?;
    let n = i64::try_from(n_max).map_err(|_| Error::Overflow("degree n"))?;
    let d = d as i64;
    Ok(binomial_signed(n + d, d as u64)? - binomial_signed(n + d - 2, d as u64)?)
}

/// Multiplicities `m_n^d` and their first differences for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    d: u32,
    values: Vec<u128>,
    differences: Vec<u128>,
}

impl MultiplicityTable {
    pub fn new(d: u32, n_max: u64) -> Result<Self> {
        check_dimension(d)?;
        let mut values = Vec::with_capacity(n_max as usize + 1);
        let mut differences = Vec::with_capacity(n_max as usize + 1);
        let mut prev = 0u128;
        for n in 0..=n_max {
            let m = multiplicity(n, d)?;
            values.push(m);
            differences.push(m - prev);
            prev = m;
        }
        Ok(MultiplicityTable { d, values, differences })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn m(&self, n: u64) -> Option<u128> {
        self.values.get(n as usize).copied()
    }

    pub fn delta(&self, l: u64) -> Option<u128> {
        self.differences.get(l as usize).copied()
    }

    pub fn values(&self) -> &[u128] {
        &self.values
    }

    pub fn differences(&self) -> &[u128] {
        &self.differences
    }
}

/// Largest μ accepted by [`exact_count`] for dimension d unless overridden.
pub fn default_budget(d: u32) -> f64 {
    2000.0 * 3.0 / d as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountConfig {
    /// Largest admissible μ; `None` selects [`default_budget`].
    pub budget: Option<f64>,
    /// Relative width of the knife-edge band around a zero.
    pub tol: f64,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { budget: None, tol: 1e-12 }
    }
}

/// Exact count together with the two-term Weyl asymptotics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCount {
    pub d: u32,
    pub mu: f64,
    pub exact: u128,
    pub weyl_lead: f64,
    pub weyl_second: f64,
    /// `exact − weyl_lead + weyl_second`.
    pub remainder: f64,
    /// μ is within the certification tolerance of some j_{ν,k}.
    pub ambiguous: bool,
}

impl SpectralCount {
    /// `|R| / (μ^{d−2+131/208} (log μ)^{18627/8320})`; NaN for μ ≤ 1.
    pub fn normalized_remainder(&self) -> f64 {
        normalized_by_remainder_bound(self.remainder.abs(), self.mu, self.d)
    }
}

pub(crate) fn normalized_by_remainder_bound(value: f64, mu: f64, d: u32) -> f64 {
    if mu <= 1.0 {
        return f64::NAN;
    }
    value / (mu.powf(d as f64 - 2.0 + HUXLEY_EXPONENT) * mu.ln().powf(LOG_EXPONENT))
}

/// `Γ(d/2 + 1)` for integer d ≥ 0.
pub(crate) fn gamma_half_dim_plus_one(d: u32) -> f64 {
    // Γ(1) = 1, Γ(3/2) = √π/2, then Γ(x+1) = xΓ(x)
    let (mut acc, mut x) = if d % 2 == 0 {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt() / 2.0, 1.5)
    };
    while x < d as f64 / 2.0 + 0.5 {
        acc *= x;
        x += 1.0;
    }
    acc
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `(2^{−d} Γ(d/2+1)^{−2} μ^d, μ^{d−1} / (2 (d−1)!))`.
pub fn weyl_terms(mu: f64, d: u32) -> Result<(f64, f64)> {
    check_dimension(d)?;
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(domain("mu", mu));
    }
    let gamma = gamma_half_dim_plus_one(d);
    let lead = (mu / 2.0).powi(d as i32) / (gamma * gamma);
    let second = mu.powi(d as i32 - 1) / (2.0 * factorial(d - 1));
    Ok((lead, second))
}

/// The same two terms from the general Weyl constants
/// `(2π)^{−d} ω_d vol(B)` and `¼ (2π)^{1−d} ω_{d−1} vol(∂B)`, with
/// `ω_d = π^{d/2}/Γ(d/2+1)` the unit-ball volume and `vol(∂B) = d ω_d`.
pub fn weyl_terms_from_volumes(mu: f64, d: u32) -> Result<(f64, f64)> {
    check_dimension(d)?;
    let omega = |m: u32| std::f64::consts::PI.powf(m as f64 / 2.0) / gamma_half_dim_plus_one(m);
    let two_pi = 2.0 * std::f64::consts::PI;
    let w = omega(d);
    let lead = two_pi.powi(-(d as i32)) * w * w * mu.powi(d as i32);
    let second = 0.25 * two_pi.powi(1 - d as i32) * omega(d - 1) * d as f64 * w * mu.powi(d as i32 - 1);
    Ok((lead, second))
}

/// Reject μ beyond the configured (or default) budget.
pub fn check_budget(mu: f64, d: u32, cfg: &CountConfig) -> Result<()> {
    let budget = cfg.budget.unwrap_or_else(|| default_budget(d));
    if mu > budget {
        return Err(Error::Budget { mu, d, budget });
    }
    Ok(())
}

/// Orders `n + d/2 − 1` that can have zeros at or below μ.
fn channel_count(mu: f64, d: u32) -> u64 {
    let offset = d as f64 / 2.0 - 1.0;
    if mu <= offset {
        0
    } else {
        // ν < μ strictly: j_{ν,1} > ν
        (mu - offset).ceil() as u64
    }
}

/// `𝒩_ℬ(μ) = #{eigenvalues ≤ μ²}` counted with multiplicity.
pub fn exact_count(mu: f64, d: u32) -> Result<SpectralCount> {
    exact_count_with(mu, d, &CountConfig::default())
}

pub fn exact_count_with(mu: f64, d: u32, cfg: &CountConfig) -> Result<SpectralCount> {
    check_dimension(d)?;
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain("mu", mu));
    }
    check_budget(mu, d, cfg)?;
    let channels = channel_count(mu, d);
    let per_n: Vec<Result<(u128, bool)>> = (0..channels)
        .into_par_iter()
        .map(|n| {
            let c = count_zeros_below(BesselOrder::spectral(n, d), mu, cfg.tol)?;
            let m = multiplicity(n, d)?;
            let weighted = m
                .checked_mul(c.count as u128)
                .ok_or(Error::Overflow("eigenvalue count"))?;
            Ok((weighted, c.ambiguous))
        })
        .collect();
    let mut exact = 0u128;
    let mut ambiguous = false;
    for r in per_n {
        let (w, a) = r?;
        exact = exact.checked_add(w).ok_or(Error::Overflow("eigenvalue count"))?;
        ambiguous |= a;
    }
    Ok(with_weyl(d, mu, exact, ambiguous))
}

fn with_weyl(d: u32, mu: f64, exact: u128, ambiguous: bool) -> SpectralCount {
    let (weyl_lead, weyl_second) = weyl_terms(mu, d).expect("validated");
    SpectralCount {
        d,
        mu,
        exact,
        weyl_lead,
        weyl_second,
        remainder: exact as f64 - weyl_lead + weyl_second,
        ambiguous,
    }
}

/// Count for the ball of radius `radius`: its eigenvalues are those of the
/// unit ball divided by `radius²`, so the count at μ is the unit count at `μ·radius`.
pub fn exact_count_radius(mu: f64, d: u32, radius: f64, cfg: &CountConfig) -> Result<SpectralCount> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(domain("radius", radius));
    }
    // the Weyl terms scale the same way, so only μ changes
    let unit = exact_count_with(mu * radius, d, cfg)?;
    Ok(SpectralCount { mu, ..unit })
}

/// Slow oracle: enumerate every zero by grid sign changes and bisection.
pub fn brute_force_count(mu: f64, d: u32) -> Result<u128> {
    check_dimension(d)?;
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain("mu", mu));
    }
    let mut total = 0u128;
    for n in 0..channel_count(mu, d) {
        let zs = enumerate_zeros_brute(BesselOrder::spectral(n, d), mu, 1e-13)?;
        total += multiplicity(n, d)? * zs.iter().filter(|&&z| z <= mu).count() as u128;
    }
    Ok(total)
}

/// Rows of a remainder scan plus fitted statistics.
#[derive(Debug, Clone)]
pub struct RemainderScan {
    pub d: u32,
    pub rows: Vec<SpectralCount>,
    /// Least-squares slope of `log|R|` against `log μ` over rows with `R ≠ 0`.
    pub slope: Option<f64>,
    /// Mean normalized remainder of the last quartile over that of the first.
    pub quartile_ratio: Option<f64>,
}

/// Exact counts along an ascending grid of μ.
pub fn remainder_scan(d: u32, mu_grid: &[f64], cfg: &CountConfig) -> Result<RemainderScan> {
    check_dimension(d)?;
    if mu_grid.is_empty() {
        return Err(Error::Inconsistent("empty mu grid".into()));
    }
    if mu_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Inconsistent("mu grid must be strictly ascending".into()));
    }
    let rows = mu_grid
        .iter()
        .map(|&mu| exact_count_with(mu, d, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize_remainders(d, rows))
}

pub(crate) fn summarize_remainders(d: u32, rows: Vec<SpectralCount>) -> RemainderScan {
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.remainder != 0.0)
        .map(|r| (r.mu.ln(), r.remainder.abs().ln()))
        .unzip();
    let slope = stats::least_squares_slope(&xs, &ys);
    let normalized: Vec<f64> = rows
        .iter()
        .map(SpectralCount::normalized_remainder)
        .filter(|v| v.is_finite())
        .collect();
    let quartile_ratio = stats::quartile_ratio(&normalized);
    RemainderScan { d, rows, slope, quartile_ratio }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(2, 3).unwrap(), 0);
        assert_eq!(binomial(60, 30).unwrap(), 118_264_581_564_861_424);
        assert!(binomial(1_000_000, 40).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(0, 5).unwrap(), 1);
        assert_eq!(multiplicity(1, 7).unwrap(), 7);
        assert_eq!(multiplicity(2, 3).unwrap(), 5);
        for n in 0..50 {
            assert_eq!(multiplicity(n, 3).unwrap(), 2 * n as u128 + 1);
            // d = 4: (n+1)²
            assert_eq!(multiplicity(n, 4).unwrap(), (n as u128 + 1).pow(2));
        }
    }

    #[test]
    fn differences_positive_and_summing() {
        for d in 3..=12 {
            let t = MultiplicityTable::new(d, 40).unwrap();
            assert_eq!(t.m(0), Some(1));
            assert_eq!(t.m(1), Some(d as u128));
            let mut run = 0u128;
            for l in 0..=40 {
                let delta = multiplicity_difference(l, d).unwrap();
                assert_eq!(t.delta(l), Some(delta));
                assert!(delta >= 1);
                run += delta;
                assert_eq!(Some(run), t.m(l));
                let partial: u128 = t.values()[..=l as usize].iter().sum();
                assert_eq!(partial, cumulative_multiplicity(l, d).unwrap());
            }
        }
        for n in 0..100 {
            assert_eq!(cumulative_multiplicity(n, 3).unwrap(), (n as u128 + 1).pow(2));
        }
    }

    #[test]
    fn weyl_examples() {
        let (lead, second) = weyl_terms(1.0, 3).unwrap();
        assert!((lead - 2.0 / (9.0 * PI)).abs() < 1e-16);
        assert_eq!(second, 0.25);
        assert!((weyl_terms(2.0, 4).unwrap().0 - 0.25).abs() < 1e-16);
        for d in 3..=20 {
            let (a, b) = weyl_terms(3.7, d).unwrap();
            let (c, e) = weyl_terms_from_volumes(3.7, d).unwrap();
            assert!((a / c - 1.0).abs() < 1e-12 && (b / e - 1.0).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(exact_count(3.0, 3).unwrap().exact, 0);
        assert_eq!(exact_count(3.2, 3).unwrap().exact, 1);
        assert_eq!(exact_count(4.6, 3).unwrap().exact, 4);
        let below = exact_count(3.0, 3).unwrap();
        assert_eq!(below.remainder, -below.weyl_lead + below.weyl_second);
    }

    #[test]
    fn budget_enforced() {
        assert!(matches!(exact_count(2500.0, 3), Err(Error::Budget { .. })));
        let cfg = CountConfig { budget: Some(10.0), ..Default::default() };
        assert!(exact_count_with(11.0, 3, &cfg).is_err());
        assert!(exact_count(5.0, 2).is_err());
    }

    #[test]
    fn radial_channel_is_floor_mu_over_pi() {
        for i in 1..200 {
            let mu = 0.9 + 0.77 * i as f64;
            let c = count_zeros_below(BesselOrder::spectral(0, 3), mu, 1e-12).unwrap();
            assert_eq!(c.count, (mu / PI).floor() as u64);
        }
    }

    #[test]
    fn radius_scaling() {
        let cfg = CountConfig::default();
        for &(mu, r) in &[(10.0, 2.0), (7.5, 0.5), (30.0, 1.25)] {
            let scaled = exact_count_radius(mu, 3, r, &cfg).unwrap();
            assert_eq!(scaled.exact, exact_count(mu * r, 3).unwrap().exact);
        }
    }

    #[test]
    fn monotone_in_mu() {
        let mut last = 0;
        for i in 1..400 {
            let c = exact_count(0.1 * i as f64, 3).unwrap().exact;
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let cfg = CountConfig::default();
        assert!(remainder_scan(3, &[], &cfg).is_err());
        assert!(remainder_scan(3, &[5.0, 4.0], &cfg).is_err());
    }
}
