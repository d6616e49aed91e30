//! Special functions: J_ν for the orders the ball spectrum needs, the Airy
//! function, Olver's ζ, and the two leading-order asymptotic forms of J_ν
//! (oscillatory and transition regions).

mod airy;
mod asymptotics;
mod bessel;
mod dd;

pub use airy::airy_ai;
pub use asymptotics::{
    bessel_j_oscillatory_approx, bessel_j_transition_approx, olver_zeta, Approximation,
};
pub use bessel::{bessel_j, bessel_j_derivative, bessel_j_pair};

use crate::error::{domain, Result};

/// A nonnegative Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder {
    nu: f64,
}

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu >= 0.0 && nu.is_finite() {
            Ok(BesselOrder { nu })
        } else {
            Err(domain("Bessel order", nu))
        }
    }

    /// The order `twice / 2`.
    pub fn from_twice(twice: u64) -> Self {
        BesselOrder { nu: twice as f64 / 2.0 }
    }

    /// The order `n + d/2 − 1` carried by the degree-`n` harmonics in ℝ^d.
    pub fn spectral(n: u64, d: u32) -> Self {
        debug_assert!(d >= 2);
        Self::from_twice(2 * n + u64::from(d) - 2)
    }

    pub fn nu(self) -> f64 {
        self.nu
    }

    /// True when `2ν` is an integer.
    pub fn is_spectral(self) -> bool {
        self.twice().is_some()
    }

    pub(crate) fn twice(self) -> Option<u64> {
        let t = 2.0 * self.nu;
        (t.fract() == 0.0 && t < 9.0e15).then_some(t as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    Series,
    Oscillatory,
    Transition,
}

/// Which asymptotic description of J_ν(x) applies for a cutoff `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRegime {
    pub tag: RegimeTag,
    pub c: f64,
}

impl AsymptoticRegime {
    pub fn classify(nu: f64, x: f64, c: f64) -> Self {
        let tag = if x >= ((1.0 + c) * nu).max(2.0) {
            RegimeTag::Oscillatory
        } else if nu < x && x < (1.0 + c) * nu {
            RegimeTag::Transition
        } else {
            RegimeTag::Series
        };
        AsymptoticRegime { tag, c }
    }
}

/// Tunables for the asymptotic evaluators.
///
/// The envelope constants are empirical: they were measured as the supremum
/// of the normalized error over 2ν ∈ {0, …, 400}, x ≤ 10^3 with c = 0.5
/// (0.3912 oscillatory, 0.0066 transition; both unchanged under 2× grid
/// refinement, see the `approx` verification suite), then given a factor
/// ~1.5 of headroom. A different `c` may need remeasuring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConfig {
    pub c: f64,
    pub nu_min: f64,
    pub oscillatory_constant: f64,
    pub transition_constant: f64,
}

impl Default for AsymptoticConfig {
    fn default() -> Self {
        AsymptoticConfig {
            c: 0.5,
            nu_min: 10.0,
            oscillatory_constant: 0.6,
            transition_constant: 0.01,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_orders() {
        assert_eq!(BesselOrder::spectral(0, 3).nu(), 0.5);
        assert_eq!(BesselOrder::spectral(2, 4).nu(), 3.0);
        assert!(BesselOrder::spectral(5, 7).is_spectral());
        assert!(!BesselOrder::new(0.3).unwrap().is_spectral());
        assert!(BesselOrder::new(-0.5).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn regime_boundaries() {
        let c = 0.5;
        assert_eq!(AsymptoticRegime::classify(10.0, 15.0, c).tag, RegimeTag::Oscillatory);
        assert_eq!(AsymptoticRegime::classify(10.0, 14.9, c).tag, RegimeTag::Transition);
        assert_eq!(AsymptoticRegime::classify(10.0, 10.0, c).tag, RegimeTag::Series);
        assert_eq!(AsymptoticRegime::classify(0.0, 1.5, c).tag, RegimeTag::Series);
        assert_eq!(AsymptoticRegime::classify(0.0, 2.0, c).tag, RegimeTag::Oscillatory);
        assert_eq!(AsymptoticRegime::classify(1.0, 1.8, c).tag, RegimeTag::Series);
    }
}
