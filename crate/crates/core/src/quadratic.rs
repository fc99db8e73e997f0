//! Exact real quadratic numbers `(a + b√n) / q`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `(a + b√n) / q` with `q > 0`, `n` squarefree, `gcd(a, b, q) = 1`.
/// Rationals are stored with `b = 0` and `n = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    a: i64,
    b: i64,
    n: u64,
    q: i64,
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

impl QuadraticReal {
    pub fn new(a: i64, b: i64, n: u64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidQuadratic("zero denominator".into()));
        }
        if !is_squarefree(n) {
            return Err(Error::NonSquarefreeRadicand(n));
        }
        let (mut a, mut b, mut n, mut q) = (a, b, n, q);
        if n == 1 {
            a = a
                .checked_add(b)
                .ok_or(Error::Overflow("normalizing a quadratic number"))?;
            b = 0;
        }
        if b == 0 || n == 0 {
            b = 0;
            n = 0;
        }
        if q < 0 {
            a = -a;
            b = -b;
            q = -q;
        }
        let g = a.gcd(&b).gcd(&q);
        if g > 1 {
            a /= g;
            b /= g;
            q /= g;
        }
        Ok(QuadraticReal { a, b, n, q })
    }

    pub fn sqrt(n: u64) -> Result<Self> {
        Self::new(0, 1, n, 1)
    }

    pub fn rational(p: i64, q: i64) -> Result<Self> {
        Self::new(p, 0, 0, q)
    }

    pub fn parts(&self) -> (i64, i64, u64, i64) {
        (self.a, self.b, self.n, self.q)
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Exact `floor(k * self)`.
    pub fn floor_mul(&self, k: i64) -> Result<i64> {
        let x = k as i128 * self.a as i128;
        let y = k as i128 * self.b as i128;
        let t = floor_sqrt_times(y, self.n);
        let num = match t {
            Some(t) => x.checked_add(t),
            None => None,
        };
        let q = self.q as i128;
        match num {
            Some(num) => i64::try_from(Integer::div_floor(&num, &q))
                .map_err(|_| Error::Overflow("evaluating a mechanical configuration")),
            None => {
                let t = floor_sqrt_times_big(&BigInt::from(y), self.n);
                (BigInt::from(x) + t)
                    .div_floor(&BigInt::from(q))
                    .to_i64()
                    .ok_or(Error::Overflow("evaluating a mechanical configuration"))
            }
        }
    }

    /// Exact comparison with the rational `p / s` (`s != 0`).
    pub fn cmp_rational(&self, p: &BigInt, s: &BigInt) -> Ordering {
        let (p, s) = if s.is_negative() { (-p, -s) } else { (p.clone(), s.clone()) };
        // sign of (a + b√n)/q - p/s  =  sign of (s a - q p) + (s b)√n
        let x = &s * self.a - BigInt::from(self.q) * p;
        let y = &s * self.b;
        sign_of_sum(&x, &y, self.n)
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.n as f64).sqrt()) / self.q as f64
    }
}

/// Sign of `x + y√n`.
fn sign_of_sum(x: &BigInt, y: &BigInt, n: u64) -> Ordering {
    let sx = x.sign();
    let sy = if n == 0 { num_bigint::Sign::NoSign } else { y.sign() };
    use num_bigint::Sign::*;
    match (sx, sy) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        (Plus, Minus) => (x * x).cmp(&(y * y * n)),
        (Minus, Plus) => (y * y * n).cmp(&(x * x)),
    }
}

/// `floor(y √n)` in `i128`, or `None` on overflow.
fn floor_sqrt_times(y: i128, n: u64) -> Option<i128> {
    if y == 0 || n == 0 {
        return Some(0);
    }
    let yy = y.unsigned_abs().checked_mul(y.unsigned_abs())?;
    let big = yy.checked_mul(n as u128)?;
    let s = big.sqrt();
    let s = i128::try_from(s).ok()?;
    if y > 0 {
        Some(s)
    } else if (s as u128) * (s as u128) == big {
        Some(-s)
    } else {
        Some(-s - 1)
    }
}

fn floor_sqrt_times_big(y: &BigInt, n: u64) -> BigInt {
    if y.is_zero() || n == 0 {
        return BigInt::zero();
    }
    let big = y * y * n;
    let s = big.sqrt();
    if y.is_positive() {
        s
    } else if &s * &s == big {
        -s
    } else {
        -s - 1
    }
}

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            if self.q == 1 {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.q)
            }
        } else if self.a == 0 && self.b == 1 && self.q == 1 {
            write!(f, "sqrt({})", self.n)
        } else {
            write!(f, "quad({},{},{},{})", self.a, self.b, self.n, self.q)
        }
    }
}
