//! Exact rationals with power-of-two denominators.
//!
//! All set combinatorics in this crate is done in exact arithmetic; floats
//! only enter through the FFT-facing code.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A dyadic rational `num / 2^exp`, kept normalized (`num` odd or zero,
/// and `exp == 0` when `num == 0`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(num: i128, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: i128) -> Self {
        Dyadic { num: n, exp: 0 }
    }

    /// `1 / 2^level`.
    pub fn pow2(level: i32) -> Self {
        if level >= 0 {
            Dyadic::new(1, level as u32)
        } else {
            Dyadic::new(1i128 << (-level) as u32, 0)
        }
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn log2_denom(&self) -> u32 {
        self.exp
    }

    /// Numerator after rescaling to denominator `2^exp`. Panics if the value
    /// does not fit that denominator exactly.
    pub fn numer_at(&self, exp: u32) -> i128 {
        assert!(exp >= self.exp, "denominator too coarse for {self:?}");
        self.num << (exp - self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    pub fn half(&self) -> Self {
        Dyadic::new(self.num, self.exp + 1)
    }

    /// Largest integer `n` with `n <= self`.
    pub fn floor(&self) -> i128 {
        self.num.div_euclid(1i128 << self.exp)
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Dyadic {
        *self - Dyadic::from_int(self.floor())
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / (1u128 << self.exp) as f64
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        Dyadic::new(self.numer_at(exp) + rhs.numer_at(exp), exp)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(self.num * rhs.num, self.exp + rhs.exp)
    }
}

/// Division by a power of two only (the result must stay dyadic).
impl Div for Dyadic {
    type Output = Dyadic;
    fn div(self, rhs: Dyadic) -> Dyadic {
        assert!(!rhs.is_zero(), "division by zero");
        assert!(
            rhs.num.abs() == 1 || self.num % rhs.num == 0,
            "non-dyadic quotient {self:?} / {rhs:?}"
        );
        let num = self.num / rhs.num;
        // self / (n / 2^e) = self * 2^e / n
        if rhs.exp >= self.exp {
            Dyadic::new(num << (rhs.exp - self.exp), 0)
        } else {
            Dyadic::new(num, self.exp - rhs.exp)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        self.numer_at(exp).cmp(&other.numer_at(exp))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_ops() {
        let a = Dyadic::new(4, 3); // 1/2
        assert_eq!(a, Dyadic::new(1, 1));
        assert_eq!(a + a, Dyadic::ONE);
        assert_eq!(a * a, Dyadic::new(1, 2));
        assert_eq!(a - Dyadic::ONE, Dyadic::new(-1, 1));
        assert!(Dyadic::new(3, 2) > a);
    }

    #[test]
    fn floor_and_fract() {
        let x = Dyadic::new(-3, 1); // -3/2
        assert_eq!(x.floor(), -2);
        assert_eq!(x.fract(), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(9, 3).floor(), 1);
    }
}
