//! Elements of the quadratic field Q(sqrt d).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::Scalar;
use crate::error::{Error, Result};

/// Coefficient field of a document: plain rationals or Q(sqrt d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Sqrt(u32),
}

impl FieldSpec {
    /// Q(sqrt d) for a square-free `d >= 2`.
    pub fn sqrt(d: u32) -> Result<Self> {
        if d < 2 || !is_square_free(d) {
            return Err(Error::InvalidField(format!("radicand {d} is not a square-free integer >= 2")));
        }
        Ok(FieldSpec::Sqrt(d))
    }

    pub fn radicand(self) -> Option<u32> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Sqrt(d) => Some(d),
        }
    }

    /// Smallest field containing a coefficient with the given radicand (0 for none).
    pub fn from_radicand(rad: u32) -> Self {
        if rad == 0 {
            FieldSpec::Rational
        } else {
            FieldSpec::Sqrt(rad)
        }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Sqrt(3)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Sqrt(d) => write!(f, "sqrt{d}"),
        }
    }
}

pub(crate) fn is_square_free(d: u32) -> bool {
    let mut k = 2u32;
    while k * k <= d {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// `a + b*sqrt(d)` with `a, b` arbitrary-precision rationals.
///
/// The radicand is carried by the value itself and is reset to 0 whenever
/// `b` vanishes, so structural equality is field equality. Combining two
/// values with different non-zero radicands panics; the parser rejects mixed
/// radicals before that can happen.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coeff {
    a: BigRational,
    b: BigRational,
    rad: u32,
}

fn join_radicands(r: u32, s: u32) -> u32 {
    match (r, s) {
        (0, s) => s,
        (r, 0) => r,
        (r, s) if r == s => r,
        (r, s) => panic!("mixed radicals sqrt({r}) and sqrt({s}) in one expression"),
    }
}

impl Coeff {
    pub fn new(a: BigRational, b: BigRational, d: u32) -> Self {
        let rad = if b.is_zero() { 0 } else { d };
        assert!(b.is_zero() || rad >= 2, "radical part requires a radicand");
        Coeff { a, b, rad }
    }

    pub fn rational(a: BigRational) -> Self {
        Coeff { a, b: BigRational::zero(), rad: 0 }
    }

    pub fn integer(v: i64) -> Self {
        Coeff::rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coeff::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The element `sqrt(d)`.
    pub fn sqrt_of(d: u32) -> Self {
        Coeff { a: BigRational::zero(), b: BigRational::one(), rad: d }
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of the radical.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Radicand, 0 for a rational value.
    pub fn radicand(&self) -> u32 {
        self.rad
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `a - b*sqrt(d)`.
    pub fn conj(&self) -> Self {
        Coeff { a: self.a.clone(), b: -self.b.clone(), rad: self.rad }
    }

    /// Field norm `a^2 - d*b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.rad))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        // sqrt(d) irrational, so the norm of a non-zero element is non-zero
        debug_assert!(!n.is_zero());
        Some(Coeff::new(&self.a / &n, -(&self.b / &n), self.rad))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Sign of the real number represented.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        // compare a with -b*sqrt(d) exactly through squares
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.rad));
        if a2 > db2 {
            sa
        } else {
            sb
        }
    }

    /// Square root inside the same field, if there is one.
    pub fn sqrt_in_field(&self, d: Option<u32>) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Coeff::rational(r));
            }
            let d = d?;
            let dq = BigRational::from_integer(BigInt::from(d));
            return rational_sqrt(&(&self.a / &dq))
                .map(|s| Coeff::new(BigRational::zero(), s, d));
        }
        // (x + y sqrt d)^2 = a + b sqrt d  =>  x^2 = (a +- sqrt(a^2 - d b^2)) / 2
        let disc = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        for cand in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if let Some(x) = rational_sqrt(&cand) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&two * &x);
                let r = Coeff::new(x, y, self.rad);
                if &(&r * &r) == self {
                    return Some(if r.signum() < 0 { -r } else { r });
                }
            }
        }
        None
    }

    /// Square-free `d` with `self = r² d` for a positive rational, if `d` fits in `u32`.
    pub fn square_class(&self) -> Option<u32> {
        if !self.b.is_zero() || self.signum() <= 0 {
            return None;
        }
        let mut m = (self.a.numer() * self.a.denom()).to_u64()?;
        let mut d: u64 = 1;
        let mut k: u64 = 2;
        while k * k <= m {
            while m % (k * k) == 0 {
                m /= k * k;
            }
            if m % k == 0 {
                d *= k;
                m /= k;
            }
            k += 1;
        }
        u32::try_from(d * m).ok()
    }

    /// Format as the rational pair used in reports: `("num/den", "num/den")`.
    pub fn parts_string(&self) -> (String, String) {
        (ratio_string(&self.a), ratio_string(&self.b))
    }

    /// Best rational approximation of a float with bounded denominator.
    pub fn approximate(x: f64, max_den: i64) -> Self {
        // continued fraction convergents
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        let mut v = x;
        for _ in 0..64 {
            let a = v.floor();
            if !a.is_finite() || a.abs() > 1e18 {
                break;
            }
            let ai = a as i128;
            let h2 = ai * h1 + h0;
            let k2 = ai * k1 + k0;
            if k2 > max_den as i128 {
                break;
            }
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            let frac = v - a;
            if frac.abs() < 1e-15 {
                break;
            }
            v = 1.0 / frac;
        }
        if k1 == 0 {
            return Coeff::integer(x.round() as i64);
        }
        Coeff::rational(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
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

fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write_rational(f, &self.a);
        }
        if !self.a.is_zero() {
            write_rational(f, &self.a)?;
            write!(f, "{}", if self.b.is_negative() { " - " } else { " + " })?;
        } else if self.b.is_negative() {
            write!(f, "-")?;
        }
        let mag = self.b.abs();
        if !mag.is_one() {
            write_rational(f, &mag)?;
            write!(f, "*")?;
        }
        write!(f, "sqrt({})", self.rad)
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (a, b) = self.parts_string();
        let mut st = s.serialize_struct("Coeff", 3)?;
        st.serialize_field("rational", &a)?;
        st.serialize_field("radical", &b)?;
        st.serialize_field("d", &self.rad)?;
        st.end()
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let rad = join_radicands(self.rad, rhs.rad);
        Coeff::new(&self.a + &rhs.a, &self.b + &rhs.b, rad)
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        let rad = join_radicands(self.rad, rhs.rad);
        Coeff::new(&self.a - &rhs.a, &self.b - &rhs.b, rad)
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        let rad = join_radicands(self.rad, rhs.rad);
        if self.b.is_zero() && rhs.b.is_zero() {
            return Coeff::rational(&self.a * &rhs.a);
        }
        let d = BigRational::from_integer(BigInt::from(rad));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Coeff::new(a, b, rad)
    }
}

impl<'a> Div<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn div(self, rhs: &Coeff) -> Coeff {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { a: -self.a, b: -self.b, rad: self.rad }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<i64> for Coeff {
    fn from(v: i64) -> Self {
        Coeff::integer(v)
    }
}

impl From<BigRational> for Coeff {
    fn from(v: BigRational) -> Self {
        Coeff::rational(v)
    }
}

impl Scalar for Coeff {
    const EXACT: bool = true;

    fn from_coeff(c: &Coeff) -> Self {
        c.clone()
    }

    fn zero() -> Self {
        Coeff::integer(0)
    }
    fn one() -> Self {
        Coeff::integer(1)
    }
    fn from_i64(v: i64) -> Self {
        Coeff::integer(v)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Coeff::ratio(num, den)
    }
    fn is_zero(&self) -> bool {
        Coeff::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        self.inv()
    }
    fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            a
        } else {
            a + self.b.to_f64().unwrap_or(f64::NAN) * (self.rad as f64).sqrt()
        }
    }
    fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Coeff {
        Coeff::sqrt_of(3)
    }

    #[test]
    fn conjugate_product_is_norm() {
        // (1 + sqrt3)(1 - sqrt3) = 1 - 3
        let x = &Coeff::one() + &s3();
        let y = &Coeff::one() - &s3();
        assert_eq!(&x * &y, Coeff::integer(-2));
    }

    #[test]
    fn sqrt_squared_is_radicand() {
        assert_eq!(&s3() * &s3(), Coeff::integer(3));
    }

    #[test]
    fn inverse_round_trip() {
        let x = Coeff::new(BigRational::new(2.into(), 3.into()), BigRational::new((-5).into(), 7.into()), 3);
        let xi = x.inv().unwrap();
        assert_eq!(&x * &xi, Coeff::one());
        assert!(Coeff::zero().inv().is_none());
    }

    #[test]
    fn radicand_resets_when_radical_cancels() {
        let z = &s3() - &s3();
        assert_eq!(z.radicand(), 0);
        assert_eq!(z, Coeff::zero());
    }

    #[test]
    fn signum_of_mixed_values() {
        assert_eq!((&Coeff::integer(2) - &s3()).signum(), 1);
        assert_eq!((&Coeff::integer(1) - &s3()).signum(), -1);
        assert_eq!((-s3()).signum(), -1);
    }

    #[test]
    fn field_square_roots() {
        assert_eq!(Coeff::ratio(9, 4).sqrt_in_field(None), Some(Coeff::ratio(3, 2)));
        assert_eq!(Coeff::integer(12).sqrt_in_field(Some(3)), Some(&Coeff::integer(2) * &s3()));
        assert_eq!(Coeff::integer(2).sqrt_in_field(Some(3)), None);
        // (2 + sqrt3)^2 = 7 + 4 sqrt3
        let sq = &Coeff::integer(7) + &(&Coeff::integer(4) * &s3());
        assert_eq!(sq.sqrt_in_field(Some(3)), Some(&Coeff::integer(2) + &s3()));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Coeff::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(s3().to_string(), "sqrt(3)");
        assert_eq!((-s3()).to_string(), "-sqrt(3)");
        let x = &Coeff::integer(1) - &(&Coeff::ratio(1, 2) * &s3());
        assert_eq!(x.to_string(), "1 - 1/2*sqrt(3)");
    }

    #[test]
    fn square_free_fields_only() {
        assert!(FieldSpec::sqrt(3).is_ok());
        assert!(FieldSpec::sqrt(12).is_err());
        assert!(FieldSpec::sqrt(1).is_err());
    }

    #[test]
    fn continued_fraction_approximation() {
        assert_eq!(Coeff::approximate(0.75, 100), Coeff::ratio(3, 4));
        assert_eq!(Coeff::approximate(-2.5, 100), Coeff::ratio(-5, 2));
    }

    #[test]
    #[should_panic(expected = "mixed radicals")]
    fn mixed_radicals_panic() {
        let _ = &Coeff::sqrt_of(2) + &Coeff::sqrt_of(3);
    }
}
