//! Error-free accumulation of f64 values (Shewchuk's nonoverlapping
//! partials, as in Python's `math.fsum`). The partials represent the exact
//! real sum of everything added, so results do not depend on the order of
//! additions and exact identities between sums can be checked bit for bit.

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, mut x: f64) {
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    pub fn add_all<I: IntoIterator<Item = f64>>(&mut self, values: I) {
        for v in values {
            self.add(v);
        }
    }

    /// Fold another exact sum into this one; the result is exact.
    pub fn absorb(&mut self, other: &ExactSum) {
        for &p in &other.partials {
            self.add(p);
        }
    }

    /// Flip the sign of the sum; exact.
    pub fn negate(&mut self) {
        for p in &mut self.partials {
            *p = -*p;
        }
    }

    /// True when the exact sum is zero.
    pub fn is_zero(&self) -> bool {
        self.partials.iter().all(|&p| p == 0.0)
    }

    /// The exact sum rounded to nearest.
    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let Some(mut n) = p.len().checked_sub(1) else {
            return 0.0;
        };
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            n -= 1;
            let x = hi;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // half-way correction, as in fsum
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

impl FromIterator<f64> for ExactSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = ExactSum::new();
        s.add_all(iter);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cancels_exactly() {
        let s: ExactSum = [1e100, 1.0, -1e100, 1e-100].into_iter().collect();
        assert_eq!(s.value(), 1.0 + 1e-100);
        let t: ExactSum = [0.1, 0.2, -0.3].into_iter().collect();
        // 0.1 + 0.2 - 0.3 in binary is 2^-54 + ...
        assert_eq!(t.value(), 2.7755575615628914e-17);
    }

    proptest! {
        #[test]
        fn order_independent(mut v in proptest::collection::vec(-1e6f64..1e6, 0..60)) {
            let a: ExactSum = v.iter().copied().collect();
            v.reverse();
            let b: ExactSum = v.iter().copied().collect();
            prop_assert_eq!(a.value(), b.value());
            let mut c = a.clone();
            c.add_all(v.iter().map(|x| -x));
            prop_assert!(c.is_zero());
        }
    }
}
