//! Exact scalars: arbitrary-precision rationals and prime-field residues.
//!
//! [`ExactScalar`] is the stored, public representation. Elimination kernels
//! work on the leaner [`Rat`] and raw `u64` residues through [`FieldOps`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Coefficient field of a matrix or complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl FieldKind {
    /// Builds a prime field, rejecting composite or trivial moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(LabError::InvalidParameter(format!("{p} is not prime")))
        }
    }

    pub fn zero(self) -> ExactScalar {
        self.from_int(0)
    }

    pub fn one(self) -> ExactScalar {
        self.from_int(1)
    }

    /// Image of an integer in this field.
    pub fn from_int(self, v: i64) -> ExactScalar {
        match self {
            FieldKind::Rational => ExactScalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldKind::Prime(p) => ExactScalar::Residue {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(FieldKind::Rational);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| LabError::Parse(format!("unknown field tag `{s}`")))?;
        FieldKind::prime(p)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A rational in lowest terms or a residue modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl ExactScalar {
    pub fn rational(num: i64, den: i64) -> Self {
        ExactScalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn residue(value: i64, modulus: u64) -> Self {
        ExactScalar::Residue {
            value: value.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }

    pub fn field(&self) -> FieldKind {
        match self {
            ExactScalar::Rational(_) => FieldKind::Rational,
            ExactScalar::Residue { modulus, .. } => FieldKind::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(q) => q.is_zero(),
            ExactScalar::Residue { value, .. } => *value == 0,
        }
    }

    /// Parses a value token (`num/den`, integer, or residue) in the given field.
    pub fn parse_in(field: FieldKind, token: &str) -> Result<Self> {
        match field {
            FieldKind::Rational => {
                let q = match token.split_once('/') {
                    Some((n, d)) => {
                        let n: BigInt = n.parse().map_err(|_| bad_value(token))?;
                        let d: BigInt = d.parse().map_err(|_| bad_value(token))?;
                        if d.is_zero() {
                            return Err(bad_value(token));
                        }
                        BigRational::new(n, d)
                    }
                    None => BigRational::from_integer(token.parse().map_err(|_| bad_value(token))?),
                };
                Ok(ExactScalar::Rational(q))
            }
            FieldKind::Prime(p) => {
                let v: i64 = token.parse().map_err(|_| bad_value(token))?;
                Ok(ExactScalar::residue(v, p))
            }
        }
    }
}

fn bad_value(token: &str) -> LabError {
    LabError::Parse(format!("bad scalar `{token}`"))
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            ExactScalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            ExactScalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Rational with an overflow-checked machine-word fast path.
///
/// The representation is canonical: a value is `Small` whenever numerator and
/// denominator fit in `i64`, so derived equality is value equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rat {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rat {
    pub fn from_int(v: i64) -> Self {
        Rat::Small(Ratio::from_integer(v))
    }

    pub fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            // i64::MIN has no negation, keep it out of the fast path.
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rat::Small(Ratio::new_raw(n, d)),
            _ => Rat::Big(q),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rat::Big(q) => q.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_zero(),
            Rat::Big(q) => q.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_integer(),
            Rat::Big(q) => q.is_integer(),
        }
    }

    pub fn abs(&self) -> Rat {
        match self {
            Rat::Small(r) => Rat::Small(r.abs()),
            Rat::Big(q) => Rat::Big(q.abs()),
        }
    }

    fn binop(
        &self,
        other: &Rat,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(r) = small(a, b) {
                if *r.numer() != i64::MIN && *r.denom() != i64::MIN {
                    return Rat::Small(r);
                }
            }
        }
        Rat::from_big(big(self.to_big(), other.to_big()))
    }

    pub fn add(&self, other: &Rat) -> Rat {
        self.binop(other, |a, b| a.checked_add(b), |a, b| a + b)
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        self.binop(other, |a, b| a.checked_sub(b), |a, b| a - b)
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        self.binop(other, |a, b| a.checked_mul(b), |a, b| a * b)
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(r) => Rat::Small(-r),
            Rat::Big(q) => Rat::from_big(-q),
        }
    }

    pub fn inv(&self) -> Rat {
        match self {
            Rat::Small(r) => Rat::Small(r.recip()),
            Rat::Big(q) => Rat::from_big(q.recip()),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ExactScalar::Rational(self.to_big()).fmt(f)
    }
}

/// Arithmetic context for the elimination kernels.
pub trait FieldOps: Sync {
    type Elem: Clone + PartialEq + Send + Sync + fmt::Debug;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn lift(&self, s: &ExactScalar) -> Self::Elem;
    fn to_scalar(&self, a: &Self::Elem) -> ExactScalar;
    fn lift_int(&self, v: i64) -> Self::Elem;
    /// Preference weight when choosing pivots; smaller is better.
    fn weight(&self, _a: &Self::Elem) -> u32 {
        0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RationalField;

impl FieldOps for RationalField {
    type Elem = Rat;

    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn zero(&self) -> Rat {
        Rat::from_int(0)
    }
    fn one(&self) -> Rat {
        Rat::from_int(1)
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a.add(b)
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a.sub(b)
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a.mul(b)
    }
    fn neg(&self, a: &Rat) -> Rat {
        a.neg()
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.inv()
    }
    fn lift(&self, s: &ExactScalar) -> Rat {
        match s {
            ExactScalar::Rational(q) => Rat::from_big(q.clone()),
            ExactScalar::Residue { value, .. } => Rat::from_int(*value as i64),
        }
    }
    fn to_scalar(&self, a: &Rat) -> ExactScalar {
        ExactScalar::Rational(a.to_big())
    }
    fn lift_int(&self, v: i64) -> Rat {
        Rat::from_int(v)
    }
    fn weight(&self, a: &Rat) -> u32 {
        match a {
            Rat::Small(r) if r.is_integer() && r.numer().abs() == 1 => 0,
            Rat::Small(r) if r.is_integer() => 1,
            Rat::Small(_) => 2,
            Rat::Big(_) => 3,
        }
    }
}

/// Arithmetic modulo a prime `p < 2^32`.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(is_prime(p) && p < (1 << 32));
        PrimeField { p }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        self.pow(*a, self.p - 2)
    }
    fn lift(&self, s: &ExactScalar) -> u64 {
        match s {
            ExactScalar::Residue { value, .. } => value % self.p,
            ExactScalar::Rational(q) => {
                let n = (q.numer() % BigInt::from(self.p)).to_i64().unwrap_or(0);
                let d = (q.denom() % BigInt::from(self.p)).to_i64().unwrap_or(0);
                let n = n.rem_euclid(self.p as i64) as u64;
                let d = d.rem_euclid(self.p as i64) as u64;
                self.mul(&n, &self.inv(&d))
            }
        }
    }
    fn to_scalar(&self, a: &u64) -> ExactScalar {
        ExactScalar::Residue {
            value: *a,
            modulus: self.p,
        }
    }
    fn lift_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

/// Greatest common divisor of two machine integers, always nonnegative.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced_with_positive_denominator() {
        let s = ExactScalar::rational(4, -6);
        assert_eq!(s.to_string(), "-2/3");
        match s {
            ExactScalar::Rational(q) => assert!(q.denom().is_positive()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn residues_land_in_range() {
        assert_eq!(ExactScalar::residue(-1, 5), ExactScalar::Residue { value: 4, modulus: 5 });
        assert_eq!(FieldKind::Prime(7).from_int(15).to_string(), "1");
    }

    #[test]
    fn composite_moduli_rejected() {
        assert!(FieldKind::prime(4).is_err());
        assert!(FieldKind::prime(1).is_err());
        assert!(FieldKind::prime(13).is_ok());
        assert_eq!("F13".parse::<FieldKind>().unwrap(), FieldKind::Prime(13));
        assert!("F9".parse::<FieldKind>().is_err());
    }

    #[test]
    fn rat_overflow_promotes_and_demotes() {
        let big = Rat::from_int(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Rat::Big(_)));
        let back = sq.mul(&big.inv()).mul(&big.inv());
        assert_eq!(back, Rat::from_int(1));
    }

    #[test]
    fn prime_inverse() {
        let f = PrimeField::new(7);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }
}
