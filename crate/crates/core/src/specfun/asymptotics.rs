//! Leading-order asymptotic forms of J_ν(x) and Olver's ζ.

use std::f64::consts::{FRAC_PI_4, PI};

use super::{airy_ai, AsymptoticConfig, BesselOrder};
use crate::error::{domain, Result};
use crate::geometry::phase_unchecked;

/// An asymptotic value with the envelope its error is expected to stay in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approximation {
    pub value: f64,
    pub error_envelope: f64,
}

/// `√(2/π) (x²−ν²)^{−1/4} sin(π x g(ν/x) + π/4)`, valid for
/// `x ≥ max{(1+c)ν, 2}`. The envelope is `prefactor · C / x`.
pub fn bessel_j_oscillatory_approx(
    order: BesselOrder,
    x: f64,
    cfg: &AsymptoticConfig,
) -> Result<Approximation> {
    let nu = order.nu();
    if !(x >= ((1.0 + cfg.c) * nu).max(2.0)) || !x.is_finite() {
        return Err(domain("oscillatory-regime argument", x));
    }
    let prefactor = (2.0 / PI).sqrt() / ((x - nu) * (x + nu)).powf(0.25);
    let phase = PI * phase_unchecked(nu, x) + FRAC_PI_4;
    Ok(Approximation {
        value: prefactor * phase.sin(),
        error_envelope: prefactor * cfg.oscillatory_constant / x,
    })
}

/// The Airy-type form `(12π h)^{1/6} (x²−ν²)^{−1/4} Ai(−((3π/2) h)^{2/3})`
/// with `h = x g(ν/x)`, valid for `ν < x ≤ (1+c)ν` and `ν ≥ ν_min`. The
/// envelope is `prefactor · C ν^{−4/3} (1 + h^{1/6})`.
pub fn bessel_j_transition_approx(
    order: BesselOrder,
    x: f64,
    cfg: &AsymptoticConfig,
) -> Result<Approximation> {
    let nu = order.nu();
    if nu < cfg.nu_min {
        return Err(domain("transition-regime order (below nu_min)", nu));
    }
    if !(x > nu && x <= (1.0 + cfg.c) * nu) {
        return Err(domain("transition-regime argument", x));
    }
    let h = phase_unchecked(nu, x);
    let prefactor = (12.0 * PI * h).powf(1.0 / 6.0) / ((x - nu) * (x + nu)).powf(0.25);
    let arg = -(1.5 * PI * h).powf(2.0 / 3.0);
    Ok(Approximation {
        value: prefactor * airy_ai(arg),
        error_envelope: prefactor * cfg.transition_constant * nu.powf(-4.0 / 3.0) * (1.0 + h.powf(1.0 / 6.0)),
    })
}

/// Olver's ζ(z): negative for z > 1 with `(2/3)(−ζ)^{3/2} = √(z²−1) − arccos(1/z)`,
/// positive for z < 1 with `(2/3)ζ^{3/2} = ln((1+√(1−z²))/z) − √(1−z²)`.
pub fn olver_zeta(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("Olver zeta argument", z));
    }
    if z >= 1.0 {
        // √(z²−1) − arccos(1/z) = w − arctan w
        let w = ((z - 1.0) * (z + 1.0)).sqrt();
        let v = odd_tail(w, -1.0).unwrap_or_else(|| w - w.atan());
        Ok(-(1.5 * v).powf(2.0 / 3.0))
    } else {
        // ln((1+w)/z) − w = artanh w − w
        let w = ((1.0 - z) * (1.0 + z)).sqrt();
        let v = odd_tail(w, 1.0).unwrap_or_else(|| w.atanh() - w);
        Ok((1.5 * v).powf(2.0 / 3.0))
    }
}

/// `Σ_{n≥1} s^{n+1} w^{2n+1}/(2n+1)` for small w (s = ±1), i.e. the series of
/// `w − arctan w` (s = −1) or `artanh w − w` (s = +1).
fn odd_tail(w: f64, s: f64) -> Option<f64> {
    if w >= 0.1 {
        return None;
    }
    let w2 = w * w;
    let mut pow = w * w2;
    let mut sign = 1.0;
    let mut sum = 0.0;
    for n in 1..12 {
        sum += sign * pow / (2 * n + 1) as f64;
        pow *= w2;
        sign *= s;
    }
    Some(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    #[test]
    fn zeta_at_one_and_two() {
        assert_eq!(olver_zeta(1.0).unwrap(), 0.0);
        let z2 = olver_zeta(2.0).unwrap();
        let lhs = 2.0 / 3.0 * (-z2).powf(1.5);
        assert!((lhs - (3f64.sqrt() - PI / 3.0)).abs() < 1e-12);
        assert!(olver_zeta(0.0).is_err());
        assert!(olver_zeta(-1.0).is_err());
    }

    #[test]
    fn zeta_continuous_at_one() {
        let below = olver_zeta(1.0 - 1e-9).unwrap();
        let above = olver_zeta(1.0 + 1e-9).unwrap();
        assert!(below > 0.0 && above < 0.0);
        assert!(below.abs() < 1e-5 && above.abs() < 1e-5);
    }

    #[test]
    fn zeta_series_switch_is_seamless() {
        // w = 0.1 at z = √1.01 and z = √0.99
        for z in [1.01f64.sqrt(), 0.99f64.sqrt()] {
            let a = olver_zeta(z * (1.0 - 1e-13)).unwrap();
            let b = olver_zeta(z * (1.0 + 1e-13)).unwrap();
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn oscillatory_precondition() {
        let cfg = AsymptoticConfig::default();
        assert!(bessel_j_oscillatory_approx(order(0.0), 1.9, &cfg).is_err());
        assert!(bessel_j_oscillatory_approx(order(10.0), 14.0, &cfg).is_err());
        assert!(bessel_j_oscillatory_approx(order(10.0), 15.0, &cfg).is_ok());
    }

    #[test]
    fn transition_precondition() {
        let cfg = AsymptoticConfig::default();
        assert!(bessel_j_transition_approx(order(5.0), 6.0, &cfg).is_err());
        assert!(bessel_j_transition_approx(order(20.0), 20.0, &cfg).is_err());
        assert!(bessel_j_transition_approx(order(20.0), 31.0, &cfg).is_err());
        assert!(bessel_j_transition_approx(order(20.0), 30.0, &cfg).is_ok());
    }
}
