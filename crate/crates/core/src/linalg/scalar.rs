//! Exact field elements: arbitrary-precision rationals and prime-field residues.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primes::is_prime_u64;
use super::LinalgError;

/// The field a [`Scalar`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    /// Residues modulo an odd prime below 2^63.
    Prime(u64),
}

impl Field {
    /// Validated constructor for a prime field.
    pub fn prime(p: u64) -> Result<Self, LinalgError> {
        if p < 3 || p.is_multiple_of(2) || p >= 1 << 63 || !is_prime_u64(p) {
            return Err(LinalgError::InvalidPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn is_rational(self) -> bool {
        matches!(self, Field::Rational)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with a positive denominator (guaranteed by
/// `BigRational`); residues are always reduced into `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, prime: u64 },
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by Fermat's little theorem; `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Reduces an arbitrary integer into `[0, p)`.
pub(crate) fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

impl Scalar {
    pub fn zero(field: Field) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Self {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => {
                let value = (v as i128).rem_euclid(p as i128) as u64;
                Scalar::Residue { value, prime: p }
            }
        }
    }

    pub fn from_bigint(field: Field, v: &BigInt) -> Self {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Residue { value: bigint_mod(v, p), prime: p },
        }
    }

    /// Maps a rational into `field`. Fails when the denominator vanishes mod p.
    pub fn from_rational(field: Field, v: &BigRational) -> Result<Self, LinalgError> {
        match field {
            Field::Rational => Ok(Scalar::Rational(v.clone())),
            Field::Prime(p) => {
                let den = bigint_mod(v.denom(), p);
                if den == 0 {
                    return Err(LinalgError::DenominatorDivisible { prime: p });
                }
                let num = bigint_mod(v.numer(), p);
                Ok(Scalar::Residue { value: mul_mod(num, inv_mod(den, p), p), prime: p })
            }
        }
    }

    /// Uniform residue constructor; `value` is reduced.
    pub fn residue(value: u64, prime: u64) -> Self {
        Scalar::Residue { value: value % prime, prime }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    /// Reduces a rational scalar modulo `p`; residues must already live in `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Scalar, LinalgError> {
        match self {
            Scalar::Rational(q) => Scalar::from_rational(Field::Prime(p), q),
            Scalar::Residue { prime, .. } if *prime == p => Ok(self.clone()),
            Scalar::Residue { prime, .. } => {
                Err(LinalgError::FieldMismatch { left: Field::Prime(*prime), right: Field::Prime(p) })
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, prime } => Scalar::Residue { value: inv_mod(*value, *prime), prime: *prime },
        })
    }

    /// True when the value is a (negative or positive) integer, or any residue.
    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_integer(),
            Scalar::Residue { .. } => true,
        }
    }

    fn check_same(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "scalar field mismatch: {} vs {}", self.field(), other.field());
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: add_mod(*a, *b, *prime), prime: *prime }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: sub_mod(*a, *b, *prime), prime: *prime }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue { value: mul_mod(*a, *b, *prime), prime: *prime }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, prime } => Scalar::Residue { value: sub_mod(0, *value, *prime), prime: *prime },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => *a = add_mod(*a, *b, *prime),
            _ => unreachable!(),
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a -= b,
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => *a = sub_mod(*a, *b, *prime),
            _ => unreachable!(),
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a *= b,
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => *a = mul_mod(*a, *b, *prime),
            _ => unreachable!(),
        }
    }
}
