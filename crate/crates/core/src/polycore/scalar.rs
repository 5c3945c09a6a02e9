use std::fmt;

/// Coefficient ring used by [`Poly`](super::Poly) and the dense matrices.
///
/// Implemented for the exact field element [`Coeff`](super::Coeff) and for
/// `f64`. The method names avoid the `std::ops` names so that both can be in
/// scope at once.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Whether equality and zero tests are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn recip(&self) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn from_coeff(c: &super::Coeff) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Zero test that tolerates rounding in float mode.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_coeff(c: &super::Coeff) -> Self {
        c.to_f64()
    }

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
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
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}
