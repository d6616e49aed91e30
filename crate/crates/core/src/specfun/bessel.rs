//! J_ν(x) for integer and half-integer ν.
//!
//! Strategy by region:
//! - `x² ≤ 4(ν+1)`: the power series, whose terms decrease monotonically;
//! - `ν ≤ x`: upward recurrence from the base pair (J_0, J_1) or
//!   (J_{1/2}, J_{3/2});
//! - `ν > x`: Miller's backward recurrence normalized against the same base
//!   pair.
//!
//! The base pair for integer orders comes from a sum-normalized Miller
//! recurrence when `x ≤ 25` and from Hankel's phase-amplitude expansion
//! beyond; the half-integer base pair is elementary.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::BesselOrder;
use crate::error::{domain, Error, Result};

const HANKEL_SWITCH: f64 = 25.0;
const RESCALE: f64 = 1e150;

/// J_ν(x) for `2ν` a nonnegative integer and `x ≥ 0`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    bessel_j_pair(order, x).map(|(j, _)| j)
}

/// `(J_ν(x), J_{ν+1}(x))`. The second value gives the derivative through
/// `J_ν'(x) = (ν/x) J_ν(x) − J_{ν+1}(x)`.
pub fn bessel_j_pair(order: BesselOrder, x: f64) -> Result<(f64, f64)> {
    let twice = order
        .twice()
        .ok_or(Error::NonSpectralOrder { nu: order.nu() })?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("bessel argument", x));
    }
    let nu = order.nu();
    if x == 0.0 {
        return Ok((if twice == 0 { 1.0 } else { 0.0 }, 0.0));
    }
    if x * x <= 4.0 * (nu + 1.0) {
        return Ok((power_series(nu, x), power_series(nu + 1.0, x)));
    }
    let half = twice % 2 == 1;
    let steps = (twice / 2) as usize;
    let base = if half { 0.5 } else { 0.0 };
    let refs = if half { half_integer_base(x) } else { integer_base(x) };
    if nu <= x {
        Ok(upward(base, refs, steps, x))
    } else {
        Ok(miller(base, refs, steps, x))
    }
}

/// Derivative J_ν'(x) for x > 0.
pub fn bessel_j_derivative(order: BesselOrder, x: f64) -> Result<f64> {
    let (j, j1) = bessel_j_pair(order, x)?;
    Ok(order.nu() / x * j - j1)
}

fn power_series(nu: f64, x: f64) -> f64 {
    let half_x = 0.5 * x;
    // (x/2)^ν / Γ(ν+1), built multiplicatively from the base order
    let (mut pre, mut order) = if nu.fract() == 0.0 {
        (1.0, 0.0)
    } else {
        (half_x.sqrt() / (0.5 * PI.sqrt()), 0.5)
    };
    while order < nu {
        order += 1.0;
        pre *= half_x / order;
    }
    let q = -half_x * half_x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 1.0;
    loop {
        term *= q / (m * (nu + m));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        m += 1.0;
    }
    pre * sum
}

fn half_integer_base(x: f64) -> (f64, f64) {
    let amp = (2.0 / (PI * x)).sqrt();
    let (s, c) = x.sin_cos();
    let j_half = amp * s;
    let j_minus_half = amp * c;
    (j_half, j_half / x - j_minus_half)
}

/// (J_0(x), J_1(x)) for x > 0.
pub(crate) fn integer_base(x: f64) -> (f64, f64) {
    if x <= HANKEL_SWITCH {
        miller_sum_normalized(x)
    } else {
        (hankel(0, x), hankel(1, x))
    }
}

fn miller_sum_normalized(x: f64) -> (f64, f64) {
    let top = 2 * ((x + (160.0 * x).sqrt() + 20.0) as usize / 2);
    let two_over_x = 2.0 / x;
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut sum = 0.0;
    let mut f1 = 0.0;
    // cur holds f_k; each step produces f_{k-1}
    for k in (1..=top).rev() {
        let below = k as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        let order = k - 1;
        if order == 1 {
            f1 = cur;
        }
        if order % 2 == 0 && order > 0 {
            sum += 2.0 * cur;
        }
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            above /= RESCALE;
            sum /= RESCALE;
            f1 /= RESCALE;
        }
    }
    sum += cur;
    (cur / sum, f1 / sum)
}

/// Hankel's expansion for J_0 or J_1, used for x > 25 where the asymptotic
/// series reaches full double precision before diverging.
fn hankel(n: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(n * n);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag > prev || mag < 1e-18 {
            break;
        }
        prev = mag;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let (s, c) = x.sin_cos();
    let (cos_chi, sin_chi) = if n == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

fn upward(base: f64, (j0, j1): (f64, f64), steps: usize, x: f64) -> (f64, f64) {
    let mut lo = j0;
    let mut hi = j1;
    let mut order = base + 1.0;
    for _ in 0..steps {
        let next = 2.0 * order / x * hi - lo;
        lo = hi;
        hi = next;
        order += 1.0;
    }
    (lo, hi)
}

fn miller(base: f64, (j0, j1): (f64, f64), steps: usize, x: f64) -> (f64, f64) {
    let nu = base + steps as f64;
    let span = nu.max(x);
    let top = steps + 1 + ((span - nu) + (160.0 * span).sqrt() + 20.0) as usize;
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut saved = (0.0, 0.0);
    if top == steps + 1 {
        saved.1 = cur;
    }
    // cur holds f at order base + k; each step produces order base + k - 1
    for k in (1..=top).rev() {
        let order = base + k as f64;
        let below = 2.0 * order / x * cur - above;
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx == steps {
            saved.0 = cur;
        } else if idx == steps + 1 {
            saved.1 = cur;
        }
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            above /= RESCALE;
            saved.0 /= RESCALE;
            saved.1 /= RESCALE;
        }
    }
    let (f0, f1) = (cur, above);
    let scale = f0.abs().max(f1.abs());
    let (g0, g1) = (f0 / scale, f1 / scale);
    let s = (j0 * g0 + j1 * g1) / (g0 * g0 + g1 * g1) / scale;
    (s * saved.0, s * saved.1)
}
