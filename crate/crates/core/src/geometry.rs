//! The planar profile `g(t) = (√(1−t²) − t·arccos t)/π` and the domain 𝒟
//! under its graph.
//!
//! Everything here is parametrized by the angle θ = arccos t, in which the
//! graph becomes `(cos θ, S(θ)/π)` with `S(θ) = sin θ − θ cos θ`. `S` is
//! increasing on [0, π/2] with `S' = θ sin θ`, so inverting `g` and solving for
//! the Minkowski functional both reduce to monotone one-dimensional solves
//! that stay well conditioned near the corner at t = 1, where g vanishes like
//! (1−t)^{3/2}.

use std::f64::consts::{FRAC_1_PI, FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{domain, Result};
use crate::quadrature::{integrate, integrate_right_sqrt};

/// |𝒟| = ∫₀¹ g.
pub const PROFILE_AREA: f64 = 0.125;

const SERIES_SWITCH: f64 = 0.5;

/// `sin θ − θ cos θ`, accurate to relative precision for small θ.
pub(crate) fn s_of_theta(theta: f64) -> f64 {
    if theta < SERIES_SWITCH {
        // Σ (−1)^{n+1} 2n θ^{2n+1} / (2n+1)!
        let t2 = theta * theta;
        let mut term = theta * t2 / 3.0;
        let mut sum = term;
        for n in 2..12 {
            let n = n as f64;
            // ratio of consecutive terms
            term *= -t2 * n / ((n - 1.0) * (2.0 * n) * (2.0 * n + 1.0));
            sum += term;
        }
        sum
    } else {
        theta.sin() - theta * theta.cos()
    }
}

/// Solve `S(θ) = target` for θ ∈ [0, π/2], `target ∈ [0, 1]`.
fn invert_s(target: f64) -> f64 {
    if target <= 0.0 {
        return 0.0;
    }
    if target >= 1.0 {
        return FRAC_PI_2;
    }
    let mut lo = 0.0;
    let mut hi = FRAC_PI_2;
    let mut theta = if target < 0.5 {
        (3.0 * target).cbrt()
    } else {
        FRAC_PI_2 - (1.0 - target) / FRAC_PI_2
    }
    .clamp(1e-300, FRAC_PI_2);
    for _ in 0..100 {
        let resid = s_of_theta(theta) - target;
        if resid == 0.0 {
            return theta;
        }
        if resid < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let slope = theta * theta.sin();
        let mut next = theta - resid / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - theta).abs() <= 4.0 * f64::EPSILON * theta {
            return next;
        }
        theta = next;
    }
    theta
}

fn check_unit(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(domain("profile argument t", t))
    }
}

/// The profile function on [0, 1].
pub fn g(t: f64) -> Result<f64> {
    check_unit(t)?;
    Ok(g_unchecked(t))
}

pub(crate) fn g_unchecked(t: f64) -> f64 {
    let root = ((1.0 - t) * (1.0 + t)).sqrt();
    let theta = root.atan2(t);
    if theta < SERIES_SWITCH {
        s_of_theta(theta) * FRAC_1_PI
    } else {
        (root - t * theta) * FRAC_1_PI
    }
}

/// `g'(t) = −arccos(t)/π`.
pub fn g_derivative(t: f64) -> Result<f64> {
    check_unit(t)?;
    Ok(-t.acos() * FRAC_1_PI)
}

/// `h = g⁻¹ : [0, 1/π] → [0, 1]`.
pub fn g_inverse(y: f64) -> Result<f64> {
    if !(0.0..=FRAC_1_PI).contains(&y) {
        return Err(domain("profile value y", y));
    }
    Ok(g_inverse_unchecked(y))
}

pub(crate) fn g_inverse_unchecked(y: f64) -> f64 {
    invert_s(PI * y).cos().max(0.0)
}

/// The Minkowski functional of 𝒟: homogeneous of degree 1 and equal to 1 on
/// the graph of `g`. On the axes `F(x, 0) = x` and `F(0, y) = πy`.
pub fn minkowski_f(x: f64, y: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("Minkowski x", x));
    }
    if !(y >= 0.0) || !y.is_finite() {
        return Err(domain("Minkowski y", y));
    }
    if x == 0.0 && y == 0.0 {
        return Err(domain("Minkowski functional at origin", 0.0));
    }
    Ok(minkowski_unchecked(x, y))
}

pub(crate) fn minkowski_unchecked(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        return x;
    }
    if x == 0.0 {
        return PI * y;
    }
    let scale = x.max(y);
    let (a, b) = (x / scale, y / scale);
    let theta = ray_angle(a, b);
    if theta < FRAC_PI_4 {
        x / theta.cos()
    } else {
        PI * y / s_of_theta(theta)
    }
}

/// The angle θ at which the ray through (a, b) meets the graph, i.e. the root
/// of `a S(θ) − π b cos θ`.
fn ray_angle(a: f64, b: f64) -> f64 {
    let ratio = PI * b / a;
    let mut theta = if ratio < 1.0 {
        (3.0 * ratio).cbrt()
    } else {
        FRAC_PI_2 - 1.0 / (ratio + FRAC_PI_2)
    }
    .clamp(1e-300, FRAC_PI_2);
    let mut lo = 0.0;
    let mut hi = FRAC_PI_2;
    for _ in 0..100 {
        let resid = a * s_of_theta(theta) - PI * b * theta.cos();
        if resid == 0.0 {
            return theta;
        }
        if resid < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let slope = theta.sin() * (a * theta + PI * b);
        let mut next = theta - resid / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - theta).abs() <= 4.0 * f64::EPSILON * theta {
            return next;
        }
        theta = next;
    }
    theta
}

/// `x·g(ν/x)` for `x > ν ≥ 0`, computed through θ = arctan(√(x²−ν²)/ν) so the
/// result keeps relative precision as x → ν⁺.
pub(crate) fn phase_unchecked(nu: f64, x: f64) -> f64 {
    let root = ((x - nu) * (x + nu)).sqrt();
    let theta = root.atan2(nu);
    if theta < SERIES_SWITCH {
        x * s_of_theta(theta) * FRAC_1_PI
    } else {
        (root - nu * theta) * FRAC_1_PI
    }
}

/// `(x, y) ∈ μ𝒟`.
pub fn contains(mu: f64, x: f64, y: f64) -> bool {
    x >= 0.0 && y >= 0.0 && x <= mu && y <= mu * g_unchecked(x / mu)
}

fn check_volume_args(mu: f64, l: u64, d: u32) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain("mu", mu));
    }
    if d < 3 {
        return Err(domain("dimension d", f64::from(d)));
    }
    let left = l as f64 + (f64::from(d) - 3.0) / 2.0;
    if left > mu {
        return Err(domain("strip index l", l as f64));
    }
    Ok(left)
}

/// ∫₀^{u} g for u ∈ [0, 1], pieced as adaptive quadrature on [0, u] when u is
/// away from 1 and with the endpoint substitution otherwise.
fn profile_integral(from: f64, to: f64) -> f64 {
    if from >= to {
        return 0.0;
    }
    if to >= 1.0 {
        integrate_right_sqrt(g_unchecked, from, 1.0, 1e-15, 1e-14).value
    } else {
        integrate(g_unchecked, from, to, 1e-15, 1e-14).value
    }
}

/// Area of `(μ𝒟)_l = μ𝒟 ∩ {x ≥ l + (d−3)/2}`, i.e. `∫_{l+(d−3)/2}^{μ} μ g(t/μ) dt`.
/// Zero when the left edge reaches μ; an edge beyond μ is rejected.
pub fn truncated_dilate_volume(mu: f64, l: u64, d: u32) -> Result<f64> {
    let left = check_volume_args(mu, l, d)?;
    Ok(mu * mu * profile_integral(left / mu, 1.0))
}

/// The areas `vol((μ𝒟)_l)` for every `l` whose strip is nonempty, built from
/// one pass of per-strip integrals and a suffix sum.
#[derive(Debug, Clone)]
pub struct VolumeTable {
    mu: f64,
    d: u32,
    volumes: Vec<f64>,
}

impl VolumeTable {
    pub fn new(mu: f64, d: u32) -> Result<Self> {
        check_volume_args(mu, 0, d)?;
        let offset = (f64::from(d) - 3.0) / 2.0;
        let mut edges = Vec::new();
        let mut l = 0u64;
        while l as f64 + offset < mu {
            edges.push((l as f64 + offset) / mu);
            l += 1;
        }
        let mut volumes = vec![0.0; edges.len()];
        let mut tail = 0.0;
        for (i, &from) in edges.iter().enumerate().rev() {
            let to = edges.get(i + 1).copied().unwrap_or(1.0);
            tail += profile_integral(from, to);
            volumes[i] = mu * mu * tail;
        }
        Ok(VolumeTable { mu, d, volumes })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `vol((μ𝒟)_l)`, zero past the last nonempty strip.
    pub fn volume(&self, l: u64) -> f64 {
        self.volumes.get(l as usize).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volumes.is_empty()
    }
}
