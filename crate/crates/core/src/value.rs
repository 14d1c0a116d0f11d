//! Strictly positive reals in the multiplicative coefficient module.
//!
//! A [`PosValue`] is stored as `num/den · e^{exp} · e^{log}` where `num`, `den`
//! are unreduced positive integers, `exp` is an exact rational exponent and
//! `log` is a floating log-factor. Values built only from rationals and
//! rational powers of `e` stay exact; anything else carries a nonzero
//! inexact part and is compared in the log domain.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative tolerance for comparisons once a value has left exact arithmetic.
pub const LOG_RELATIVE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct PosValue {
    num: BigUint,
    den: BigUint,
    exp: BigRational,
    log: f64,
    exact: bool,
}

impl PosValue {
    pub fn one() -> Self {
        PosValue {
            num: BigUint::one(),
            den: BigUint::one(),
            exp: BigRational::zero(),
            log: 0.0,
            exact: true,
        }
    }

    /// Builds `num/den`. Panics if either part is zero.
    pub fn from_ratio(num: BigUint, den: BigUint) -> Self {
        assert!(!num.is_zero() && !den.is_zero(), "PosValue must be positive");
        PosValue {
            num,
            den,
            ..PosValue::one()
        }
    }

    /// Returns `None` unless `r > 0`.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        if !r.is_positive() {
            return None;
        }
        Some(PosValue::from_ratio(
            r.numer().magnitude().clone(),
            r.denom().magnitude().clone(),
        ))
    }

    pub fn from_u64(n: u64) -> Self {
        PosValue::from_ratio(BigUint::from(n), BigUint::one())
    }

    /// `e^t` for rational `t`.
    pub fn exp_of(t: BigRational) -> Self {
        PosValue {
            exp: t,
            ..PosValue::one()
        }
    }

    /// A value known only through its natural logarithm.
    pub fn from_ln(ln: f64) -> Self {
        PosValue {
            log: ln,
            exact: false,
            ..PosValue::one()
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The exact rational value, if the value is exact and has no `e` factor.
    pub fn to_rational(&self) -> Option<BigRational> {
        if !self.exact || !self.exp.is_zero() {
            return None;
        }
        Some(BigRational::new(
            BigInt::from_biguint(Sign::Plus, self.num.clone()),
            BigInt::from_biguint(Sign::Plus, self.den.clone()),
        ))
    }

    /// Rational exponent of `e`, when the value is exact.
    pub fn exp_part(&self) -> Option<&BigRational> {
        self.exact.then_some(&self.exp)
    }

    pub fn mul(&self, other: &PosValue) -> PosValue {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn mul_assign(&mut self, other: &PosValue) {
        self.num *= &other.num;
        self.den *= &other.den;
        if !other.exp.is_zero() {
            self.exp += &other.exp;
        }
        self.log += other.log;
        self.exact &= other.exact;
    }

    pub fn div_assign(&mut self, other: &PosValue) {
        self.num *= &other.den;
        self.den *= &other.num;
        if !other.exp.is_zero() {
            self.exp -= &other.exp;
        }
        self.log -= other.log;
        self.exact &= other.exact;
    }

    pub fn div(&self, other: &PosValue) -> PosValue {
        let mut out = self.clone();
        out.div_assign(other);
        out
    }

    pub fn recip(&self) -> PosValue {
        PosValue {
            num: self.den.clone(),
            den: self.num.clone(),
            exp: -self.exp.clone(),
            log: -self.log,
            exact: self.exact,
        }
    }

    pub fn powi(&self, k: i64) -> PosValue {
        let e = k.unsigned_abs() as u32;
        let (num, den) = if k >= 0 {
            (self.num.pow(e), self.den.pow(e))
        } else {
            (self.den.pow(e), self.num.pow(e))
        };
        PosValue {
            num,
            den,
            exp: &self.exp * BigRational::from_integer(BigInt::from(k)),
            log: self.log * k as f64,
            exact: self.exact,
        }
    }

    /// `self^r`. Integer `r` stays exact; other exponents move to the log domain.
    pub fn pow(&self, r: &BigRational) -> PosValue {
        if r.is_integer() {
            if let Some(k) = r.to_integer().to_i64() {
                return self.powi(k);
            }
        }
        let rf = r.to_f64().unwrap_or(f64::NAN);
        PosValue::from_ln(self.ln() * rf)
    }

    /// Natural logarithm in double precision.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.num) - ln_biguint(&self.den) + self.exp.to_f64().unwrap_or(0.0) + self.log
    }

    /// Exact when both sides are exact, otherwise relative comparison of logs.
    pub fn approx_eq(&self, other: &PosValue) -> bool {
        if self.exact && other.exact {
            return self.exp == other.exp && &self.num * &other.den == &self.den * &other.num;
        }
        let (a, b) = (self.ln(), other.ln());
        (a - b).abs() <= LOG_RELATIVE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
    }

    pub fn is_one(&self) -> bool {
        if self.exact {
            return self.exp.is_zero() && self.num == self.den;
        }
        let rational = ln_biguint(&self.num) - ln_biguint(&self.den) + self.exp.to_f64().unwrap_or(0.0);
        let scale = rational.abs().max(self.log.abs()).max(1.0);
        (rational + self.log).abs() <= LOG_RELATIVE_TOLERANCE * scale
    }

    /// Reduces the stored fraction to lowest terms.
    pub fn normalize(&mut self) {
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num /= &g;
            self.den /= &g;
        }
    }
}

impl PartialEq for PosValue {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Display for PosValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        if self.exact {
            let mut base = self.clone();
            base.exp = BigRational::zero();
            let r = base.to_rational().expect("exact");
            if r.is_one() {
                return write!(f, "exp({})", self.exp);
            }
            return write!(f, "{r}*exp({})", self.exp);
        }
        write!(f, "exp({})", self.ln())
    }
}

pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn ln_rational(r: &BigRational) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}
