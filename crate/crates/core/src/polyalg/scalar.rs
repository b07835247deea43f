//! Exact scalars of the real quadratic field ℚ(√3).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `a + b·√3` with `a, b` rational.
///
/// `BigRational` keeps both parts in lowest terms with a positive denominator,
/// so field-wise equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ScalarQ3 {
    a: BigRational,
    b: BigRational,
}

impl ScalarQ3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self {
            a: BigRational::from_integer(BigInt::from(n)),
            b: BigRational::zero(),
        }
    }

    /// `num/den` as a pure rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    /// `√3`.
    pub fn sqrt3() -> Self {
        Self::surd(rat(1, 1))
    }

    /// `b·√3`.
    pub fn surd(b: BigRational) -> Self {
        Self {
            a: BigRational::zero(),
            b,
        }
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √3.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The Galois conjugate `a − b√3`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 3b²`, always rational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - rat(3, 1) * &self.b * &self.b
    }

    /// Multiplicative inverse; `None` only for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        // a² = 3b² has no rational solution besides zero
        debug_assert!(!n.is_zero());
        Some(Self {
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let inv = rhs
            .inv()
            .ok_or_else(|| Error::Domain("division by zero in Q(sqrt3)".into()))?;
        Ok(self * &inv)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            a: &self.a * r,
            b: &self.b * r,
        }
    }

    /// Sign of the real number `a + b√3`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: compare a² with 3b²
        let a2 = &self.a * &self.a;
        let b2 = rat(3, 1) * &self.b * &self.b;
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    /// Exact square root of a nonnegative rational when it lies in ℚ(√3),
    /// i.e. when `r = q²` or `r = 3q²`.
    pub fn sqrt_of_rational(r: &BigRational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Self::zero());
        }
        if let Some(q) = rational_sqrt(r) {
            return Some(Self::from_rational(q));
        }
        let third = r / rat(3, 1);
        rational_sqrt(&third).map(Self::surd)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3f64.sqrt()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Shorthand for a `BigRational` from machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Writes a rational as `num/den`, always with an explicit denominator.
pub(crate) fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let (n, d) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected num/den, got {s:?}")))?;
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

impl fmt::Display for ScalarQ3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt3", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}*sqrt3", self.a, -self.b.clone())
                } else {
                    write!(f, "{} + {}*sqrt3", self.a, self.b)
                }
            }
        }
    }
}

impl serde::Serialize for ScalarQ3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for ScalarQ3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for ScalarQ3 {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for ScalarQ3 {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl<'a> Add<&'a ScalarQ3> for &'a ScalarQ3 {
    type Output = ScalarQ3;
    fn add(self, rhs: &ScalarQ3) -> ScalarQ3 {
        ScalarQ3 {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a ScalarQ3> for &'a ScalarQ3 {
    type Output = ScalarQ3;
    fn sub(self, rhs: &ScalarQ3) -> ScalarQ3 {
        ScalarQ3 {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a ScalarQ3> for &'a ScalarQ3 {
    type Output = ScalarQ3;
    fn mul(self, rhs: &ScalarQ3) -> ScalarQ3 {
        // most coefficients are rational; skip the surd products when possible
        match (self.b.is_zero(), rhs.b.is_zero()) {
            (true, true) => ScalarQ3 {
                a: &self.a * &rhs.a,
                b: BigRational::zero(),
            },
            (true, false) => ScalarQ3 {
                a: &self.a * &rhs.a,
                b: &self.a * &rhs.b,
            },
            (false, true) => ScalarQ3 {
                a: &self.a * &rhs.a,
                b: &self.b * &rhs.a,
            },
            (false, false) => ScalarQ3 {
                a: &self.a * &rhs.a + rat(3, 1) * &self.b * &rhs.b,
                b: &self.a * &rhs.b + &self.b * &rhs.a,
            },
        }
    }
}

impl<'a> Div<&'a ScalarQ3> for &'a ScalarQ3 {
    type Output = ScalarQ3;
    /// Panics on division by zero; see [`ScalarQ3::checked_div`].
    fn div(self, rhs: &ScalarQ3) -> ScalarQ3 {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ScalarQ3> for ScalarQ3 {
            type Output = ScalarQ3;
            fn $m(self, rhs: ScalarQ3) -> ScalarQ3 {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ScalarQ3> for ScalarQ3 {
            type Output = ScalarQ3;
            fn $m(self, rhs: &ScalarQ3) -> ScalarQ3 {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ScalarQ3 {
    type Output = ScalarQ3;
    fn neg(self) -> ScalarQ3 {
        ScalarQ3 {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Neg for &ScalarQ3 {
    type Output = ScalarQ3;
    fn neg(self) -> ScalarQ3 {
        -self.clone()
    }
}

impl AddAssign<&ScalarQ3> for ScalarQ3 {
    fn add_assign(&mut self, rhs: &ScalarQ3) {
        self.a += &rhs.a;
        if !rhs.b.is_zero() {
            self.b += &rhs.b;
        }
    }
}

impl SubAssign<&ScalarQ3> for ScalarQ3 {
    fn sub_assign(&mut self, rhs: &ScalarQ3) {
        self.a -= &rhs.a;
        if !rhs.b.is_zero() {
            self.b -= &rhs.b;
        }
    }
}

impl MulAssign<&ScalarQ3> for ScalarQ3 {
    fn mul_assign(&mut self, rhs: &ScalarQ3) {
        *self = &*self * rhs;
    }
}

impl Zero for ScalarQ3 {
    fn zero() -> Self {
        ScalarQ3::zero()
    }
    fn is_zero(&self) -> bool {
        ScalarQ3::is_zero(self)
    }
}

impl One for ScalarQ3 {
    fn one() -> Self {
        ScalarQ3::one()
    }
}
