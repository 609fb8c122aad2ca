//! Outward-rounded real and complex intervals.
//!
//! Basic arithmetic (`+ - * /`, `sqrt`) is rounded with error-free
//! transformations: the exact rounding error of the nearest-rounded result is
//! recovered with `fma`/TwoSum and the endpoint is nudged by one ulp only when
//! that error points outward. Results are therefore the tightest enclosures
//! representable in `f64`.
//!
//! Transcendental functions rely on the platform libm being accurate to within
//! one ulp; their results are widened by [`LIBM_ULPS`] ulps on each side.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Outward widening applied to libm results (ln, exp, sin, cos).
pub const LIBM_ULPS: u32 = 2;

/// Absolute error bound for `cos(2πr)`/`sin(2πr)` with `r` a reduced fraction:
/// argument rounding (≤ 3 rounding steps on a value ≤ π) plus libm error.
const TRIG_ABS_ERR: f64 = 2.0e-15;

#[inline]
fn down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        x
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x == f64::INFINITY {
        x
    } else {
        x.next_up()
    }
}

fn widen(x: f64, ulps: u32) -> (f64, f64) {
    let (mut lo, mut hi) = (x, x);
    for _ in 0..ulps {
        lo = down(lo);
        hi = up(hi);
    }
    (lo, hi)
}

/// Directed bounds for `fl(a+b)` via TwoSum.
#[inline]
fn add_bounds(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !s.is_finite() {
        return (down(s), up(s));
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    match err.partial_cmp(&0.0) {
        Some(Ordering::Greater) => (s, up(s)),
        Some(Ordering::Less) => (down(s), s),
        _ => (s, s),
    }
}

#[inline]
fn mul_bounds(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return (0.0, 0.0);
    }
    if !p.is_finite() || p.abs() < f64::MIN_POSITIVE * 4.0 {
        return (down(p), up(p));
    }
    let err = a.mul_add(b, -p);
    match err.partial_cmp(&0.0) {
        Some(Ordering::Greater) => (p, up(p)),
        Some(Ordering::Less) => (down(p), p),
        _ => (p, p),
    }
}

#[inline]
fn div_bounds(a: f64, b: f64) -> (f64, f64) {
    let q = a / b;
    if a == 0.0 {
        return (0.0, 0.0);
    }
    if !q.is_finite() || q.abs() < f64::MIN_POSITIVE * 4.0 {
        return (down(q), up(q));
    }
    // a = q*b + r exactly, so a/b - q = r/b.
    let r = (-q).mul_add(b, a);
    let sign = if r == 0.0 { 0.0 } else { r.signum() * b.signum() };
    if sign > 0.0 {
        (q, up(q))
    } else if sign < 0.0 {
        (down(q), q)
    } else {
        (q, q)
    }
}

#[inline]
fn sqrt_bounds(x: f64) -> (f64, f64) {
    let s = x.sqrt();
    if x == 0.0 || !s.is_finite() {
        return (s, s);
    }
    let r = (-s).mul_add(s, x);
    if r > 0.0 {
        (s, up(s))
    } else if r < 0.0 {
        (down(s), s)
    } else {
        (s, s)
    }
}

/// A closed real interval `[lo, hi]` with `f64` endpoints.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RInterval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl fmt::Display for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl RInterval {
    pub const ZERO: RInterval = RInterval { lo: 0.0, hi: 0.0 };
    pub const ONE: RInterval = RInterval { lo: 1.0, hi: 1.0 };
    pub const ENTIRE: RInterval = RInterval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Builds `[lo, hi]`.
    ///
    /// # Panics
    /// If `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        RInterval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Encloses every real within one ulp of `x`, e.g. a decimal literal.
    pub fn around(x: f64) -> Self {
        Self::new(down(x), up(x))
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &RInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &RInterval) -> RInterval {
        RInterval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Exact enclosure of an integer (widened by one ulp above 2^53).
    pub fn from_i128(n: i128) -> Self {
        let x = n as f64;
        if n.unsigned_abs() <= (1u128 << 53) {
            Self::point(x)
        } else {
            Self::new(down(x), up(x))
        }
    }

    pub fn from_u64(n: u64) -> Self {
        Self::from_i128(n as i128)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_i128(n as i128)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        if let Some(v) = n.to_i128() {
            return Self::from_i128(v);
        }
        Self::from_ratio(&BigRational::from_integer(n.clone()))
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        Self::from_bigint(&BigInt::from(n.clone()))
    }

    /// Enclosure of an exact rational of any size.
    ///
    /// The quotient is formed in integer arithmetic with about 64 significant
    /// bits, so the result is at most a few ulps wide and exact when the
    /// rational is a short dyadic.
    pub fn from_ratio(r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::ZERO;
        }
        let neg = r.is_negative();
        let n = r.numer().magnitude();
        let d = r.denom().magnitude();
        let s = 64 + d.bits() as i64 - n.bits() as i64;
        assert!(s.abs() < 960, "rational out of f64 range");
        let (num, den) = if s >= 0 {
            (n << s as usize, d.clone())
        } else {
            (n.clone(), d << (-s) as usize)
        };
        let (q, rem) = num.div_rem(&den);
        let q = q.to_u128().expect("quotient has at most 66 bits");
        let scale = 2f64.powi(-s as i32);
        let qf = q as f64;
        let iv = if rem.is_zero() && (qf as u128) == q && qf.is_finite() {
            Self::point(qf * scale)
        } else {
            let lo = if (qf as u128) <= q { qf } else { down(qf) };
            let q1 = q + 1;
            let q1f = q1 as f64;
            let hi = if (q1f as u128) >= q1 { q1f } else { up(q1f) };
            Self::new(lo * scale, hi * scale)
        };
        if neg {
            -iv
        } else {
            iv
        }
    }

    pub fn square(self) -> Self {
        if self.lo >= 0.0 {
            let (l, _) = mul_bounds(self.lo, self.lo);
            let (_, h) = mul_bounds(self.hi, self.hi);
            Self::new(l, h)
        } else if self.hi <= 0.0 {
            let (l, _) = mul_bounds(self.hi, self.hi);
            let (_, h) = mul_bounds(self.lo, self.lo);
            Self::new(l, h)
        } else {
            let m = self.lo.abs().max(self.hi);
            let (_, h) = mul_bounds(m, m);
            Self::new(0.0, h)
        }
    }

    pub fn powi(self, e: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        let mut e = e;
        // Repeated squaring overestimates for sign-changing intervals;
        // all callers pass nonnegative bases.
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Self {
        assert!(self.hi >= 0.0, "sqrt of negative interval {self:?}");
        let (l, _) = sqrt_bounds(self.lo.max(0.0));
        let (_, h) = sqrt_bounds(self.hi);
        Self::new(l, h)
    }

    pub fn ln(self) -> Self {
        assert!(self.lo > 0.0, "ln of nonpositive interval {self:?}");
        let (l, _) = widen(self.lo.ln(), LIBM_ULPS);
        let (_, h) = widen(self.hi.ln(), LIBM_ULPS);
        Self::new(l, h)
    }

    pub fn asin(self) -> Self {
        assert!(self.lo >= -1.0 && self.hi <= 1.0, "asin outside [-1, 1]: {self:?}");
        let (l, _) = widen(self.lo.asin(), LIBM_ULPS);
        let (_, h) = widen(self.hi.asin(), LIBM_ULPS);
        Self::new(l, h)
    }

    pub fn exp(self) -> Self {
        let (l, _) = widen(self.lo.exp(), LIBM_ULPS);
        let (_, h) = widen(self.hi.exp(), LIBM_ULPS);
        Self::new(l.max(0.0), h)
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Self::new(0.0, self.hi.max(-self.lo))
        }
    }

    pub fn max(self, other: Self) -> Self {
        Self::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn min(self, other: Self) -> Self {
        Self::new(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    /// Product in iteration order (deterministic for a fixed input order).
    pub fn product<I: IntoIterator<Item = RInterval>>(it: I) -> Self {
        it.into_iter().fold(Self::ONE, |a, b| a * b)
    }

    pub fn sum<I: IntoIterator<Item = RInterval>>(it: I) -> Self {
        it.into_iter().fold(Self::ZERO, |a, b| a + b)
    }

    /// True when every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &RInterval) -> bool {
        self.hi < other.lo
    }
}

impl From<f64> for RInterval {
    fn from(x: f64) -> Self {
        RInterval::point(x)
    }
}

impl Neg for RInterval {
    type Output = RInterval;
    fn neg(self) -> RInterval {
        RInterval::new(-self.hi, -self.lo)
    }
}

impl Add for RInterval {
    type Output = RInterval;
    fn add(self, rhs: RInterval) -> RInterval {
        let (l, _) = add_bounds(self.lo, rhs.lo);
        let (_, h) = add_bounds(self.hi, rhs.hi);
        RInterval::new(l, h)
    }
}

impl Sub for RInterval {
    type Output = RInterval;
    fn sub(self, rhs: RInterval) -> RInterval {
        self + (-rhs)
    }
}

impl Mul for RInterval {
    type Output = RInterval;
    fn mul(self, rhs: RInterval) -> RInterval {
        if (self.lo == 0.0 && self.hi == 0.0) || (rhs.lo == 0.0 && rhs.hi == 0.0) {
            return RInterval::ZERO;
        }
        let cands = [
            mul_bounds(self.lo, rhs.lo),
            mul_bounds(self.lo, rhs.hi),
            mul_bounds(self.hi, rhs.lo),
            mul_bounds(self.hi, rhs.hi),
        ];
        let lo = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let hi = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        RInterval::new(lo, hi)
    }
}

impl Div for RInterval {
    type Output = RInterval;
    fn div(self, rhs: RInterval) -> RInterval {
        if rhs.lo <= 0.0 && rhs.hi >= 0.0 {
            return RInterval::ENTIRE;
        }
        let cands = [
            div_bounds(self.lo, rhs.lo),
            div_bounds(self.lo, rhs.hi),
            div_bounds(self.hi, rhs.lo),
            div_bounds(self.hi, rhs.hi),
        ];
        let lo = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let hi = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        RInterval::new(lo, hi)
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<f64> for RInterval {
            type Output = RInterval;
            fn $f(self, rhs: f64) -> RInterval {
                self.$f(RInterval::point(rhs))
            }
        }
        impl $tr<RInterval> for f64 {
            type Output = RInterval;
            fn $f(self, rhs: RInterval) -> RInterval {
                RInterval::point(self).$f(rhs)
            }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul, Div div);

/// A rectangular complex interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CInterval {
    pub re: RInterval,
    pub im: RInterval,
}

impl CInterval {
    pub const ZERO: CInterval = CInterval {
        re: RInterval::ZERO,
        im: RInterval::ZERO,
    };
    pub const ONE: CInterval = CInterval {
        re: RInterval::ONE,
        im: RInterval::ZERO,
    };

    pub fn new(re: RInterval, im: RInterval) -> Self {
        CInterval { re, im }
    }

    pub fn real(re: RInterval) -> Self {
        CInterval {
            re,
            im: RInterval::ZERO,
        }
    }

    /// Enclosure of `e(num/den) = exp(2πi·num/den)`.
    ///
    /// The fraction is reduced exactly in integer arithmetic to `r/den` with
    /// `|r| ≤ den/2` before any floating-point work.
    pub fn e_frac(num: i128, den: u64) -> Self {
        assert!(den > 0);
        let d = den as i128;
        let mut r = num.rem_euclid(d);
        if 2 * r > d {
            r -= d;
        }
        if r == 0 {
            return Self::ONE;
        }
        if 2 * r == d || 2 * r == -d {
            return Self::real(RInterval::point(-1.0));
        }
        if 4 * r == d {
            return Self::new(RInterval::ZERO, RInterval::ONE);
        }
        if 4 * r == -d {
            return Self::new(RInterval::ZERO, RInterval::point(-1.0));
        }
        let theta = std::f64::consts::TAU * (r as f64 / den as f64);
        let (s, c) = theta.sin_cos();
        let re = RInterval::new(
            (c - TRIG_ABS_ERR).max(-1.0),
            (c + TRIG_ABS_ERR).min(1.0),
        );
        let im = RInterval::new(
            (s - TRIG_ABS_ERR).max(-1.0),
            (s + TRIG_ABS_ERR).min(1.0),
        );
        Self::new(re, im)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> RInterval {
        self.re.square() + self.im.square()
    }

    pub fn abs(self) -> RInterval {
        self.norm_sqr().sqrt()
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn scale(self, k: RInterval) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    pub fn powi(self, e: u32) -> Self {
        (0..e).fold(Self::ONE, |acc, _| acc * self)
    }
}

impl Add for CInterval {
    type Output = CInterval;
    fn add(self, rhs: CInterval) -> CInterval {
        CInterval::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for CInterval {
    type Output = CInterval;
    fn sub(self, rhs: CInterval) -> CInterval {
        CInterval::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for CInterval {
    type Output = CInterval;
    fn mul(self, rhs: CInterval) -> CInterval {
        CInterval::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

/// Named constants with hard-coded enclosures.
pub mod consts {
    use super::RInterval;

    /// e^γ = 1.78107241799019798523650410310717954916964521430343...
    /// (γ = 0.57721566490153286060651209008240243104215933593992...).
    /// Enclosure width 2·10⁻¹³.
    pub fn exp_euler_gamma() -> RInterval {
        RInterval::new(1.781_072_417_989_9, 1.781_072_417_990_1)
    }

    /// e^{-γ} = 0.56145948356688516982414321479088078676571038692...
    pub fn exp_neg_euler_gamma() -> RInterval {
        RInterval::new(0.561_459_483_566_8, 0.561_459_483_567_0)
    }

    pub fn pi() -> RInterval {
        RInterval::new(
            std::f64::consts::PI.next_down(),
            std::f64::consts::PI.next_up(),
        )
    }
}
