//! Positive definite binary quadratic forms ax² + bxy + cy².

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::xgcd;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Debug for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryQuadraticForm { a, b, c }
    }

    /// Form with leading coefficient a and middle coefficient b; c is
    /// forced by the discriminant.
    pub fn from_ab(a: i64, b: i64, disc: i64) -> Option<Self> {
        let num = b as i128 * b as i128 - disc as i128;
        let den = 4 * a as i128;
        (den != 0 && num % den == 0).then(|| Self::new(a, b, (num / den) as i64))
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The principal form (1, δ, (δ − D)/4).
    pub fn identity(disc: i64) -> Self {
        let delta = disc.rem_euclid(2);
        Self::new(1, delta, (delta - disc) / 4)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.a, -self.b, self.c).reduce()
    }

    pub fn is_reduced(&self) -> bool {
        let BinaryQuadraticForm { a, b, c } = *self;
        -a < b && b <= a && a <= c && !(a == c && b < 0)
    }

    pub fn reduce(&self) -> Self {
        let disc = self.discriminant() as i128;
        let (mut a, mut b) = (self.a as i128, self.b as i128);
        debug_assert!(a > 0 && disc < 0);
        loop {
            // bring b into (−a, a]
            let k = (a - b).div_euclid(2 * a);
            b += 2 * a * k;
            let c = (b * b - disc) / (4 * a);
            if a > c {
                (a, b) = (c, -b);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return Self::new(a as i64, b as i64, c as i64);
        }
    }

    /// Composition followed by reduction (Shanks' formulation of Dirichlet
    /// composition).
    pub fn compose(&self, other: &Self) -> Self {
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let (d, u, _) = xgcd(a2, a1);
            (u, d)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let (d1, x2, v) = xgcd(s, d);
            (x2, -v, d1)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let disc = f1.discriminant() as i128;
        let c3 = (b3 * b3 - disc) / (4 * a3);
        debug_assert_eq!(b3 * b3 - 4 * a3 * c3, disc);
        Self::new(a3 as i64, b3 as i64, c3 as i64).reduce()
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::identity(self.discriminant());
        let mut base = *self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            n >>= 1;
        }
        acc
    }

    /// Power with a signed exponent.
    pub fn zpow(&self, n: i128) -> Self {
        if n >= 0 {
            self.pow(n as u64)
        } else {
            self.inverse().pow(n.unsigned_abs() as u64)
        }
    }

    pub fn order(&self) -> u64 {
        let id = Self::identity(self.discriminant());
        let mut x = self.reduce();
        let mut k = 1;
        while x != id {
            x = x.compose(self);
            k += 1;
        }
        k
    }
}

/// All reduced forms of discriminant D < 0, sorted.
pub fn reduced_forms(disc: i64) -> Vec<BinaryQuadraticForm> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            if let Some(f) = BinaryQuadraticForm::from_ab(a, b, disc) {
                if f.is_reduced() {
                    out.push(f);
                }
            }
        }
        a += 1;
    }
    out.sort();
    out
}
