//! Double-double scalar (about 106 significant bits) for measuring
//! truncation error below the `f64` rounding floor.
//!
//! Arithmetic (`+ − × ÷`), comparisons, `sqrt`, `exp` and the rounding
//! functions are carried out in full double-double precision. Everything
//! else in the `Float` surface evaluates on the leading `f64` component and
//! exists only to satisfy the trait bound.

use std::cmp::Ordering;
use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn norm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self { hi: self.hi * s, lo: self.lo * s }
    }

    fn of(f: impl Fn(f64) -> f64, x: Self) -> Self {
        Self::new(f(x.hi))
    }

    const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::norm(s, e + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::norm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        Dd::norm(q1, q2) + Dd::new(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        self - b * (self / b).trunc()
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{:+e}", self.hi, self.lo)
    }
}

impl Zero for Dd {
    fn zero() -> Dd {
        Dd::new(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for Dd {
    fn one() -> Dd {
        Dd::new(1.0)
    }
}

impl Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        s.parse().map(Dd::new)
    }
}

impl ToPrimitive for Dd {
    fn to_i64(&self) -> Option<i64> {
        self.trunc().hi.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.trunc().hi.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl NumCast for Dd {
    fn from<N: ToPrimitive>(n: N) -> Option<Dd> {
        n.to_f64().map(Dd::new)
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Dd> {
        let hi = n as f64;
        Some(Dd::norm(hi, (n - hi as i64) as f64))
    }
    fn from_u64(n: u64) -> Option<Dd> {
        let hi = n as f64;
        Some(Dd::norm(hi, (n as i128 - hi as i128) as f64))
    }
    fn from_f64(x: f64) -> Option<Dd> {
        Some(Dd::new(x))
    }
}

macro_rules! consts {
    ($($name:ident),*) => {
        $(fn $name() -> Dd { Dd::new(<f64 as FloatConst>::$name()) })*
    };
}

impl FloatConst for Dd {
    consts!(E, FRAC_1_PI, FRAC_1_SQRT_2, FRAC_2_PI, FRAC_2_SQRT_PI, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6,
        FRAC_PI_8, LN_10, LOG10_E, LOG2_E, PI, SQRT_2);
    fn LN_2() -> Dd {
        Dd::LN2
    }
}

impl Float for Dd {
    fn nan() -> Dd {
        Dd::new(f64::NAN)
    }
    fn infinity() -> Dd {
        Dd::new(f64::INFINITY)
    }
    fn neg_infinity() -> Dd {
        Dd::new(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Dd {
        Dd::new(-0.0)
    }
    fn min_value() -> Dd {
        Dd::new(f64::MIN)
    }
    fn min_positive_value() -> Dd {
        Dd::new(f64::MIN_POSITIVE)
    }
    fn max_value() -> Dd {
        Dd::new(f64::MAX)
    }
    fn epsilon() -> Dd {
        Dd::new(2f64.powi(-104))
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Dd {
        let hi = self.hi.floor();
        if hi == self.hi {
            Dd::norm(hi, self.lo.floor())
        } else {
            Dd::new(hi)
        }
    }
    fn ceil(self) -> Dd {
        -(-self).floor()
    }
    fn round(self) -> Dd {
        if self.hi >= 0.0 {
            (self + Dd::new(0.5)).floor()
        } else {
            -((-self) + Dd::new(0.5)).floor()
        }
    }
    fn trunc(self) -> Dd {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Dd {
        self - self.trunc()
    }
    fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Dd {
        Dd::new(self.hi.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Dd, b: Dd) -> Dd {
        self * a + b
    }
    fn recip(self) -> Dd {
        Dd::one() / self
    }
    fn powi(self, n: i32) -> Dd {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
    fn powf(self, n: Dd) -> Dd {
        Dd::new(self.hi.powf(n.hi))
    }
    fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::new(self.hi.sqrt());
        }
        let x = self.hi.sqrt();
        let r = self - Dd::new(x) * Dd::new(x);
        Dd::norm(x, r.hi / (2.0 * x))
    }
    fn exp(self) -> Dd {
        if !self.hi.is_finite() {
            return Dd::new(self.hi.exp());
        }
        // x = k·ln2 + r, then the Taylor series of e^r with |r| ≤ ln2/2
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = self - Dd::LN2 * Dd::new(k);
        let mut term = Dd::one();
        let mut sum = Dd::one();
        for n in 1..60 {
            term = term * r / Dd::new(n as f64);
            sum = sum + term;
            if term.abs().hi < 1e-34 {
                break;
            }
        }
        sum.ldexp(k as i32)
    }
    fn exp2(self) -> Dd {
        (self * Dd::LN2).exp()
    }
    fn ln(self) -> Dd {
        // one Newton step on e^y = x from the f64 logarithm
        let y = Dd::new(self.hi.ln());
        if !y.hi.is_finite() {
            return y;
        }
        y + self * (-y).exp() - Dd::one()
    }
    fn log(self, base: Dd) -> Dd {
        self.ln() / base.ln()
    }
    fn log2(self) -> Dd {
        self.ln() / Dd::LN2
    }
    fn log10(self) -> Dd {
        self.ln() / Dd::new(10.0).ln()
    }
    fn max(self, other: Dd) -> Dd {
        if self >= other || other.is_nan() {
            self
        } else {
            other
        }
    }
    fn min(self, other: Dd) -> Dd {
        if self <= other || other.is_nan() {
            self
        } else {
            other
        }
    }
    fn abs_sub(self, other: Dd) -> Dd {
        if self > other {
            self - other
        } else {
            Dd::zero()
        }
    }
    fn cbrt(self) -> Dd {
        Dd::of(f64::cbrt, self)
    }
    fn hypot(self, other: Dd) -> Dd {
        (self * self + other * other).sqrt()
    }
    fn sin(self) -> Dd {
        Dd::of(f64::sin, self)
    }
    fn cos(self) -> Dd {
        Dd::of(f64::cos, self)
    }
    fn tan(self) -> Dd {
        Dd::of(f64::tan, self)
    }
    fn asin(self) -> Dd {
        Dd::of(f64::asin, self)
    }
    fn acos(self) -> Dd {
        Dd::of(f64::acos, self)
    }
    fn atan(self) -> Dd {
        Dd::of(f64::atan, self)
    }
    fn atan2(self, other: Dd) -> Dd {
        Dd::new(self.hi.atan2(other.hi))
    }
    fn sin_cos(self) -> (Dd, Dd) {
        (self.sin(), self.cos())
    }
    fn exp_m1(self) -> Dd {
        self.exp() - Dd::one()
    }
    fn ln_1p(self) -> Dd {
        (Dd::one() + self).ln()
    }
    fn sinh(self) -> Dd {
        Dd::of(f64::sinh, self)
    }
    fn cosh(self) -> Dd {
        Dd::of(f64::cosh, self)
    }
    fn tanh(self) -> Dd {
        Dd::of(f64::tanh, self)
    }
    fn asinh(self) -> Dd {
        Dd::of(f64::asinh, self)
    }
    fn acosh(self) -> Dd {
        Dd::of(f64::acosh, self)
    }
    fn atanh(self) -> Dd {
        Dd::of(f64::atanh, self)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
}

impl fct_drem::Scalar for Dd {}
