//! Positive zeros j_{ν,k} of J_ν.
//!
//! The k-th zero is located through the phase `h_ν(x) = x g(ν/x)`: it lies in
//! the window where `h_ν ∈ (k − 3/8, k)`, i.e. between `F(ν, k − 3/8)` and
//! `F(ν, k)`. The window's endpoints are checked for the expected signs of
//! J_ν before the bracket is trusted; if they do not straddle a zero the
//! window is widened and, failing that, the zero is found by stepping along
//! the axis and counting sign changes. Refinement is Newton's method kept
//! inside the bracket, and the returned value is confirmed by a sign change
//! across `value·(1 ± tol/2)`.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::geometry::{minkowski_unchecked, phase_unchecked};
use crate::specfun::{bessel_j, bessel_j_pair, BesselOrder};

/// Grid step for the brute-force sign scan. Consecutive zeros of J_ν are more
/// than 3 apart for every ν ≥ 0, so no pair of sign changes can hide between
/// two grid points.
const SCAN_STEP: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroRegime {
    Oscillatory,
    Transition,
}

impl ZeroRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroRegime::Oscillatory => "oscillatory",
            ZeroRegime::Transition => "transition",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroConfig {
    /// Relative tolerance on the zero.
    pub tol: f64,
    /// Regime cutoff: oscillatory when `j ≥ (1 + c)ν`.
    pub c: f64,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        ZeroConfig { tol: 1e-12, c: 0.5 }
    }
}

impl ZeroConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol >= 1e-12) || !self.tol.is_finite() || self.tol >= 1e-2 {
            return Err(domain("zero tolerance", self.tol));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(domain("regime cutoff c", self.c));
        }
        Ok(())
    }
}

/// One certified zero together with its phase approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord {
    pub order: BesselOrder,
    pub k: u64,
    pub value: f64,
    /// `F(ν, k − 1/4)`.
    pub approx: f64,
    /// `value − approx`.
    pub residual: f64,
    pub regime: ZeroRegime,
}

impl ZeroRecord {
    /// `h_ν(j_{ν,k}) − (k − 1/4)`.
    pub fn phase_offset(&self) -> f64 {
        phase_unchecked(self.order.nu(), self.value) - (self.k as f64 - 0.25)
    }

    /// The normalized residual matching the record's regime:
    /// `|R|(ν + k)` when oscillatory, `|R| ν^{−1/3} k^{4/3}` in transition.
    pub fn envelope_product(&self) -> f64 {
        let nu = self.order.nu();
        let k = self.k as f64;
        match self.regime {
            ZeroRegime::Oscillatory => self.residual.abs() * (nu + k),
            ZeroRegime::Transition => self.residual.abs() * nu.powf(-1.0 / 3.0) * k.powf(4.0 / 3.0),
        }
    }
}

/// `h_ν(x) = x·g(ν/x)` for `x > ν`.
pub fn phase(order: BesselOrder, x: f64) -> Result<f64> {
    if !(x > order.nu()) || !x.is_finite() {
        return Err(domain("phase argument (must exceed nu)", x));
    }
    Ok(phase_unchecked(order.nu(), x))
}

/// `F(ν, y)`: the point `x > ν` with `h_ν(x) = y`, for y > 0.
pub fn phase_inverse(order: BesselOrder, y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(domain("phase level", y));
    }
    Ok(minkowski_unchecked(order.nu(), y))
}

/// McMahon's leading term `π(k + ν/2 − 1/4)`.
pub fn mcmahon(order: BesselOrder, k: u64) -> f64 {
    std::f64::consts::PI * (k as f64 + order.nu() / 2.0 - 0.25)
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign of J_ν just below its k-th zero.
fn sign_before(k: u64) -> i8 {
    if k % 2 == 1 {
        1
    } else {
        -1
    }
}

/// The k-th positive zero as a record.
pub fn zero(order: BesselOrder, k: u64, cfg: &ZeroConfig) -> Result<ZeroRecord> {
    cfg.validate()?;
    let value = zero_value(order, k, cfg.tol)?;
    Ok(make_record(order, k, value, cfg.c))
}

pub(crate) fn make_record(order: BesselOrder, k: u64, value: f64, c: f64) -> ZeroRecord {
    let nu = order.nu();
    let approx = minkowski_unchecked(nu, k as f64 - 0.25);
    let regime = if value >= (1.0 + c) * nu {
        ZeroRegime::Oscillatory
    } else {
        ZeroRegime::Transition
    };
    ZeroRecord { order, k, value, approx, residual: value - approx, regime }
}

/// The k-th positive zero to relative tolerance `tol`.
pub fn zero_value(order: BesselOrder, k: u64, tol: f64) -> Result<f64> {
    if k == 0 {
        return Err(domain("zero index k", 0.0));
    }
    if !order.is_spectral() {
        return Err(Error::NonSpectralOrder { nu: order.nu() });
    }
    let nu = order.nu();
    let kf = k as f64;
    let before = sign_before(k);
    let j = |x: f64| bessel_j(order, x);

    let windows = [(kf - 0.375, kf), (kf - 0.5 + 1.0 / 64.0, kf + 0.125)];
    let mut bracket = None;
    for (ya, yb) in windows {
        let a = minkowski_unchecked(nu, ya);
        let b = minkowski_unchecked(nu, yb);
        let (fa, fb) = (j(a)?, j(b)?);
        if sign(fa) == before && sign(fb) == -before {
            bracket = Some((a, b));
            break;
        }
        if fa == 0.0 && sign(fb) == -before {
            return Ok(a);
        }
        if fb == 0.0 && sign(fa) == before {
            return Ok(b);
        }
    }
    let (lo, hi) = match bracket {
        Some(b) => b,
        None => step_to_kth_change(order, k)?,
    };
    let start = minkowski_unchecked(nu, kf - 0.25);
    refine(order, k, lo, hi, start, tol)
}

/// Walk from x = ν in steps of [`SCAN_STEP`] until the k-th sign change.
fn step_to_kth_change(order: BesselOrder, k: u64) -> Result<(f64, f64)> {
    let nu = order.nu();
    let limit = minkowski_unchecked(nu, k as f64 + 2.0) + 10.0;
    let mut x = nu;
    let mut fx = bessel_j(order, x)?;
    let mut seen = 0;
    while x < limit {
        let next = x + SCAN_STEP;
        let fnext = bessel_j(order, next)?;
        if sign(fx) * sign(fnext) < 0 || (fnext == 0.0 && fx != 0.0) {
            seen += 1;
            if seen == k {
                return Ok((x, next));
            }
        }
        x = next;
        fx = fnext;
    }
    Err(Error::Bracket { nu, k, lo: nu, hi: limit })
}

fn refine(order: BesselOrder, k: u64, mut lo: f64, mut hi: f64, start: f64, tol: f64) -> Result<f64> {
    let nu = order.nu();
    let lo_sign = sign_before(k);
    let mut x = if start > lo && start < hi { start } else { 0.5 * (lo + hi) };
    for _ in 0..300 {
        let (jv, jv1) = bessel_j_pair(order, x)?;
        if jv == 0.0 {
            return Ok(x);
        }
        if sign(jv) == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let slope = nu / x * jv - jv1;
        let step = jv / slope;
        let converged = step.abs() <= 0.25 * tol * x;
        let mut next = if converged { (x - step).clamp(lo, hi) } else { x - step };
        if !converged && (!(next > lo && next < hi) || !next.is_finite()) {
            next = 0.5 * (lo + hi);
        }
        if converged || hi - lo <= 0.5 * tol * next {
            let half = 0.5 * tol * next;
            let (fl, fr) = (bessel_j(order, next - half)?, bessel_j(order, next + half)?);
            if sign(fl) * sign(fr) < 0 || fl == 0.0 || fr == 0.0 {
                return Ok(next);
            }
            // both on one side: tighten the bracket and keep going
            if sign(fl) == lo_sign {
                lo = lo.max(next + half);
            } else {
                hi = hi.min(next - half);
            }
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    Err(Error::Bracket { nu, k, lo, hi })
}

/// Number of zeros of J_ν in (0, μ], with a flag when μ lies within the
/// certification tolerance of a zero (counted inclusively).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroCount {
    pub count: u64,
    pub ambiguous: bool,
}

/// Count zeros `j_{ν,k} ≤ μ` from the phase, certified by the sign of J_ν(μ).
///
/// With `H = h_ν(μ)`, all zeros `k ≤ ⌊H⌋` lie below μ and all `k ≥ ⌊H⌋ + 2`
/// lie above; zero `⌊H⌋ + 1` can only be below μ when `H` sits in its window
/// (fractional part ≥ 5/8), and then the sign of J_ν(μ) decides. If the sign
/// ever contradicts the phase count the zeros are enumerated directly.
pub fn count_zeros_below(order: BesselOrder, mu: f64, tol: f64) -> Result<ZeroCount> {
    let nu = order.nu();
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain("mu", mu));
    }
    if mu <= nu {
        return Ok(ZeroCount { count: 0, ambiguous: false });
    }
    let h = phase_unchecked(nu, mu);
    let base = h.floor();
    let frac = h - base;
    let base = base as u64;
    let (jv, jv1) = bessel_j_pair(order, mu)?;
    let slope = nu / mu * jv - jv1;
    let ambiguous = jv.abs() <= slope.abs() * tol * mu;
    let parity = |c: u64| if c % 2 == 0 { 1 } else { -1 };
    let count = if frac >= 0.625 {
        if ambiguous || sign(jv) != parity(base) {
            base + 1
        } else {
            base
        }
    } else if ambiguous || sign(jv) == parity(base) {
        base
    } else {
        return Ok(ZeroCount {
            count: brute_force_count(order, mu)?,
            ambiguous,
        });
    };
    Ok(ZeroCount { count, ambiguous })
}

/// Count sign changes of J_ν on a grid from ν to μ (slow oracle).
pub fn brute_force_count(order: BesselOrder, mu: f64) -> Result<u64> {
    Ok(sign_change_brackets(order, mu)?.len() as u64)
}

fn sign_change_brackets(order: BesselOrder, upto: f64) -> Result<Vec<(f64, f64)>> {
    let nu = order.nu();
    let mut out = Vec::new();
    if upto <= nu {
        return Ok(out);
    }
    let steps = ((upto - nu) / SCAN_STEP).ceil() as u64;
    let mut x = nu;
    let mut fx = bessel_j(order, x)?;
    for i in 1..=steps {
        let next = if i == steps { upto } else { nu + i as f64 * SCAN_STEP };
        let fnext = bessel_j(order, next)?;
        if sign(fx) * sign(fnext) < 0 || (fnext == 0.0 && fx != 0.0) {
            out.push((x, next));
        }
        x = next;
        fx = fnext;
    }
    Ok(out)
}

/// All zeros `≤ upto`, found by grid sign changes and bisection alone.
pub fn enumerate_zeros_brute(order: BesselOrder, upto: f64, tol: f64) -> Result<Vec<f64>> {
    sign_change_brackets(order, upto)?
        .into_iter()
        .map(|(mut lo, mut hi)| {
            let flo = sign(bessel_j(order, lo)?);
            if bessel_j(order, hi)? == 0.0 {
                return Ok(hi);
            }
            while hi - lo > tol * hi {
                let mid = 0.5 * (lo + hi);
                let fm = bessel_j(order, mid)?;
                if fm == 0.0 {
                    return Ok(mid);
                }
                if sign(fm) == flo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        })
        .collect()
}

/// Result of a residual scan over a grid of (ν, k).
#[derive(Debug, Clone)]
pub struct ResidualScan {
    pub records: Vec<ZeroRecord>,
    /// Zeros that could not be certified: (ν, k, message).
    pub failures: Vec<(f64, u64, String)>,
    /// `max |R|(ν + k)` over oscillatory records.
    pub c_osc: f64,
    /// `max |R| ν^{−1/3} k^{4/3}` over transition records.
    pub c_tr: f64,
    /// Records whose phase offset falls outside (−1/8, 1/4).
    pub window_violations: usize,
}

/// Certify every `(ν, k)` in the grid and measure the residual envelopes.
/// Work is spread over the current rayon pool; records come back ordered by
/// (ν, k) regardless of scheduling.
pub fn residual_scan(orders: &[BesselOrder], ks: &[u64], cfg: &ZeroConfig) -> Result<ResidualScan> {
    cfg.validate()?;
    let pairs: Vec<(BesselOrder, u64)> = orders
        .iter()
        .flat_map(|&o| ks.iter().map(move |&k| (o, k)))
        .collect();
    let results: Vec<std::result::Result<ZeroRecord, (f64, u64, String)>> = pairs
        .par_iter()
        .map(|&(o, k)| zero(o, k, cfg).map_err(|e| (o.nu(), k, e.to_string())))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(f) => failures.push(f),
        }
    }
    let mut c_osc = 0.0f64;
    let mut c_tr = 0.0f64;
    let mut window_violations = 0;
    for r in &records {
        match r.regime {
            ZeroRegime::Oscillatory => c_osc = c_osc.max(r.envelope_product()),
            ZeroRegime::Transition => c_tr = c_tr.max(r.envelope_product()),
        }
        let off = r.phase_offset();
        if !(off > -0.125 && off < 0.25) {
            window_violations += 1;
        }
    }
    Ok(ResidualScan { records, failures, c_osc, c_tr, window_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn order(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    #[test]
    fn phase_examples() {
        assert!((phase(order(0.0), 5.0).unwrap() - 5.0 / PI).abs() < 1e-15);
        let nu = 7.0;
        assert!(phase(order(nu), nu * (1.0 + 1e-15)).unwrap() < 1e-20);
        assert!(phase(order(nu), nu).is_err());
        for &y in &[0.01, 0.75, 3.0, 40.0] {
            let x = phase_inverse(order(nu), y).unwrap();
            assert!((phase(order(nu), x).unwrap() - y).abs() < 1e-12 * y.max(1.0));
        }
    }

    #[test]
    fn half_order_zeros_are_multiples_of_pi() {
        let cfg = ZeroConfig::default();
        let r = zero(order(0.5), 7, &cfg).unwrap();
        assert!((r.value / (7.0 * PI) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_zeros() {
        let cfg = ZeroConfig::default();
        // bisection on the power series in double-double (tests/oracle.rs)
        let cases = [(0.0, 1, 2.404_825_557_695_773), (1.0, 1, 3.831_705_970_207_512)];
        for (nu, k, want) in cases {
            let got = zero(order(nu), k, &cfg).unwrap().value;
            assert!((got / want - 1.0).abs() < 1e-12, "nu={nu}: {got}");
        }
    }

    #[test]
    fn mcmahon_examples() {
        assert!((mcmahon(order(0.5), 1) - PI).abs() < 1e-15);
        let cfg = ZeroConfig::default();
        let gap1 = zero(order(0.0), 1, &cfg).unwrap().value - mcmahon(order(0.0), 1);
        assert!((gap1 - 0.0486).abs() < 1e-4);
        let mut last = gap1.abs();
        for k in 2..=20 {
            let gap = (zero(order(0.0), k, &cfg).unwrap().value - mcmahon(order(0.0), k)).abs();
            assert!(gap < last);
            last = gap;
        }
        // measured: 0.0020143 at k = 20
        assert!(last < 2.1e-3);
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = ZeroConfig::default();
        assert!(zero(order(1.0), 0, &cfg).is_err());
        assert!(zero(order(1.0 / 3.0), 1, &cfg).is_err());
        assert!(zero(order(1.0), 1, &ZeroConfig { tol: 1e-14, ..cfg }).is_err());
    }

    #[test]
    fn bracket_soundness_and_monotonicity() {
        let cfg = ZeroConfig::default();
        for twice in [0u64, 1, 2, 7, 40, 161] {
            let o = BesselOrder::from_twice(twice);
            let mut prev = o.nu();
            for k in 1..=25 {
                let r = zero(o, k, &cfg).unwrap();
                assert!(r.value > prev);
                prev = r.value;
                let d = cfg.tol * r.value;
                let (a, b) = (bessel_j(o, r.value - d).unwrap(), bessel_j(o, r.value + d).unwrap());
                assert!(a * b < 0.0, "nu={} k={k}", o.nu());
                assert!(bessel_j(o, r.value).unwrap().abs() < 1e-14);
            }
        }
    }

    #[test]
    fn brute_force_agrees_with_certified() {
        let cfg = ZeroConfig::default();
        for twice in [0u64, 1, 6, 21] {
            let o = BesselOrder::from_twice(twice);
            let brute = enumerate_zeros_brute(o, 60.0, 1e-13).unwrap();
            for (i, &z) in brute.iter().enumerate() {
                let c = zero(o, i as u64 + 1, &cfg).unwrap().value;
                assert!((z - c).abs() < 1e-10 * c);
            }
        }
    }

    #[test]
    fn count_matches_enumeration() {
        for twice in [0u64, 1, 3, 10, 33, 80] {
            let o = BesselOrder::from_twice(twice);
            for i in 0..300 {
                let mu = 0.37 + 0.29 * i as f64;
                let fast = count_zeros_below(o, mu, 1e-12).unwrap();
                assert_eq!(fast.count, brute_force_count(o, mu).unwrap(), "nu={} mu={mu}", o.nu());
            }
        }
    }

    #[test]
    fn count_at_a_zero_is_inclusive_and_flagged() {
        let c = count_zeros_below(order(0.5), 3.0 * PI, 1e-12).unwrap();
        assert_eq!(c.count, 3);
        assert!(c.ambiguous);
    }
}
