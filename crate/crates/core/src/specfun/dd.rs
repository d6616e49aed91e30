//! Unevaluated-sum pairs `hi + lo` of f64, enough for the Airy Maclaurin
//! series and for carrying large oscillatory phases without losing the
//! low-order bits.

use std::ops::{Add, Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p) + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        // remainder self - q1*b, exact up to the lo part
        let p = q1 * b;
        let pe = q1.mul_add(b, -p);
        let (s, se) = two_sum(self.hi, -p);
        let r = s + (se - pe + self.lo);
        let q2 = r / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    /// Square root of an f64 as a pair.
    pub fn sqrt_f64(x: f64) -> Dd {
        let s = x.sqrt();
        if s == 0.0 {
            return Dd::ZERO;
        }
        let r = (-s).mul_add(s, x);
        let (hi, lo) = quick_two_sum(s, r / (2.0 * s));
        Dd { hi, lo }
    }

    /// `sin` and `cos` of the pair, correct to first order in `lo`.
    pub fn sin_cos(self) -> (f64, f64) {
        let (s, c) = self.hi.sin_cos();
        (s + self.lo * c, c - self.lo * s)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_carries_low_bits() {
        let third = Dd::from_f64(1.0).div_f64(3.0);
        let back = third.mul_f64(3.0);
        assert!((back.hi - 1.0).abs() + back.lo.abs() < 1e-31);
    }

    #[test]
    fn sqrt_two_squared() {
        let r = Dd::sqrt_f64(2.0);
        let sq = r * r;
        assert!(((sq + Dd::from_f64(-2.0)).to_f64()).abs() < 1e-30);
    }
}
