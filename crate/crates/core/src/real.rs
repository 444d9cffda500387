//! Binary floating point numbers with a configurable mantissa width.
//!
//! A [`Real`] is `mantissa * 2^exponent` with the mantissa truncated to at
//! most `prec` bits after every operation. Arithmetic between values of
//! different precision runs at the larger of the two. Only the operations
//! the geometry needs are provided: the four field operations, square root,
//! `pi`, `sin`/`cos`, and exact conversion from rationals and `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const DEFAULT_PRECISION: u32 = 128;

#[derive(Clone)]
pub struct Real {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bit_len(x: &BigInt) -> i64 {
    x.bits() as i64
}

/// Shift right by `k` bits, rounding to nearest (ties away from zero).
fn shr_round(x: &BigInt, k: u64) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    let neg = x.is_negative();
    let mag = x.abs();
    let half = BigInt::one() << (k - 1);
    let r: BigInt = (mag + half) >> k;
    if neg {
        -r
    } else {
        r
    }
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Self {
        Real { mant: v, exp: 0, prec }.normalized()
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(BigInt::from(v), prec)
    }

    /// Exact conversion of a finite `f64`, then rounded to `prec` bits.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64 {v}");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), raw_exp - 1075)
        };
        Real { mant: BigInt::from(sign * m), exp: e, prec }.normalized()
    }

    pub fn from_ratio(q: &BigRational, prec: u32) -> Self {
        let num = q.numer();
        let den = q.denom();
        if num.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 2 + bit_len(den) - bit_len(num)).max(0);
        let scaled: BigInt = num << shift as u64;
        Real { mant: scaled / den, exp: -shift, prec }.normalized()
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Real { mant: self.mant.clone(), exp: self.exp, prec }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let excess = bit_len(&self.mant) - self.prec as i64;
        if excess > 0 {
            self.mant = shr_round(&self.mant, excess as u64);
            self.exp += excess;
            // rounding can carry into one extra bit
            if bit_len(&self.mant) > self.prec as i64 {
                self.mant >>= 1u32;
                self.exp += 1;
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Real { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Position of the leading bit: `2^(top-1) <= |self| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + bit_len(&self.mant)
    }

    /// Base-2 magnitude, `None` for zero.
    pub fn log2_magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.top())
        }
    }

    fn add_impl(&self, other: &Real) -> Real {
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return other.with_precision(prec);
        }
        if other.is_zero() {
            return self.with_precision(prec);
        }
        let (hi, lo) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        if hi.top() - lo.top() > prec as i64 + 4 {
            return hi.with_precision(prec);
        }
        let e = hi.exp.min(lo.exp);
        let a: BigInt = &hi.mant << (hi.exp - e) as u64;
        let b: BigInt = &lo.mant << (lo.exp - e) as u64;
        Real { mant: a + b, exp: e, prec }.normalized()
    }

    fn mul_impl(&self, other: &Real) -> Real {
        let prec = self.prec.max(other.prec);
        Real { mant: &self.mant * &other.mant, exp: self.exp + other.exp, prec }.normalized()
    }

    fn div_impl(&self, other: &Real) -> Real {
        assert!(!other.is_zero(), "division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Real::zero(prec);
        }
        let shift = (prec as i64 + 2 + bit_len(&other.mant) - bit_len(&self.mant)).max(0);
        let num: BigInt = &self.mant << shift as u64;
        Real { mant: num / &other.mant, exp: self.exp - other.exp - shift, prec }.normalized()
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "sqrt of negative number");
        if self.is_zero() {
            return self.clone();
        }
        let mut shift = (2 * self.prec as i64 + 4 - bit_len(&self.mant)).max(0);
        if (self.exp - shift).is_odd() {
            shift += 1;
        }
        let m: BigInt = &self.mant << shift as u64;
        Real { mant: m.sqrt(), exp: (self.exp - shift) / 2, prec: self.prec }.normalized()
    }

    pub fn square(&self) -> Real {
        self.mul_impl(self)
    }

    /// Largest integer not above `self`.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            // arithmetic shift rounds toward negative infinity
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Nearest integer, ties rounded up.
    pub fn round(&self) -> BigInt {
        let half = Real { mant: BigInt::one(), exp: -1, prec: self.prec };
        (self + &half).floor()
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Real {
        let fl = Real::from_bigint(self.floor(), self.prec.max(64 + self.top().max(0) as u32));
        (self - &fl).with_precision(self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let excess = (bit_len(&self.mant) - 60).max(0);
        let m = (&self.mant >> excess as u64).to_i64().unwrap_or(0) as f64;
        m * pow2(self.exp + excess)
    }

    /// Exact rational value.
    pub fn to_ratio(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn exact_cmp(&self, other: &Real) -> Ordering {
        let d = Real { mant: self.mant.clone(), exp: self.exp, prec: u32::MAX }.add_impl(&Real {
            mant: -other.mant.clone(),
            exp: other.exp,
            prec: u32::MAX,
        });
        d.mant.sign().cmp(&Sign::NoSign)
    }

    pub fn min(self, other: Real) -> Real {
        if self.exact_cmp(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Real) -> Real {
        if self.exact_cmp(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// `pi` to `prec` bits via Machin's formula.
    pub fn pi(prec: u32) -> Real {
        let w = prec as u64 + 32;
        let one: BigInt = BigInt::one() << w;
        let pi_fixed: BigInt = (atan_inv_fixed(5, &one) * 16u32) - (atan_inv_fixed(239, &one) * 4u32);
        Real { mant: pi_fixed, exp: -(w as i64), prec }.normalized()
    }

    /// Simultaneous sine and cosine.
    pub fn sin_cos(&self) -> (Real, Real) {
        let prec = self.prec;
        let w = prec as u64 + 64 + self.top().max(0) as u64;
        let one: BigInt = BigInt::one() << w;
        let x_fixed = fixed_from(self, w);
        let half_pi = fixed_from(&Real::pi(w as u32 + 8), w) >> 1u32;
        // quadrant reduction: x = k * pi/2 + r, |r| <= pi/4
        let k = {
            let twice: BigInt = (&x_fixed << 1u32) + &half_pi;
            twice.div_floor(&(&half_pi << 1u32))
        };
        let r = &x_fixed - &k * &half_pi;
        let r2 = (&r * &r) >> w;
        let mut sin = r.clone();
        let mut cos = one.clone();
        let mut term_s = r;
        let mut term_c = one;
        let mut n: u64 = 1;
        loop {
            term_s = -((&term_s * &r2) >> w) / BigInt::from((2 * n) * (2 * n + 1));
            term_c = -((&term_c * &r2) >> w) / BigInt::from((2 * n - 1) * (2 * n));
            if term_s.is_zero() && term_c.is_zero() {
                break;
            }
            sin += &term_s;
            cos += &term_c;
            n += 1;
        }
        let quadrant = k.mod_floor(&BigInt::from(4)).to_u8().unwrap();
        let (s, c) = match quadrant {
            0 => (sin, cos),
            1 => (cos, -sin),
            2 => (-sin, -cos),
            _ => (-cos, sin),
        };
        let e = -(w as i64);
        (
            Real { mant: s, exp: e, prec }.normalized(),
            Real { mant: c, exp: e, prec }.normalized(),
        )
    }

    pub fn sin(&self) -> Real {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Real {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Real {
        let (s, c) = self.sin_cos();
        &s / &c
    }
}

fn pow2(e: i64) -> f64 {
    // split to stay inside the exponent range of intermediate values
    let mut v = 1.0f64;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

fn fixed_from(x: &Real, w: u64) -> BigInt {
    let shift = x.exp + w as i64;
    if shift >= 0 {
        &x.mant << shift as u64
    } else {
        shr_round(&x.mant, (-shift) as u64)
    }
}

/// `atan(1/k) * 2^w` as a fixed point integer.
fn atan_inv_fixed(k: u32, one: &BigInt) -> BigInt {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut power = one / BigInt::from(k);
    let mut sum = power.clone();
    let mut n: u32 = 1;
    loop {
        power = &power / &k2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        n += 1;
    }
    sum
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.exact_cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.exact_cmp(other))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e}, {} bits)", self.to_f64(), self.prec)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -self.mant, exp: self.exp, prec: self.prec }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -self.mant.clone(), exp: self.exp, prec: self.prec }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                self.$imp(rhs)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$imp(&rhs)
            }
        }
    };
}

impl Real {
    fn sub_impl(&self, other: &Real) -> Real {
        self.add_impl(&-other)
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);
