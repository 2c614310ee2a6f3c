//! Exact scalar values: arbitrary-precision integers and rationals, and
//! prime-field elements with the modulus carried alongside the value.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The coefficient domain of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    /// Arbitrary-precision integers (not a field; rank is rejected).
    Z,
    /// Arbitrary-precision rationals.
    Q,
    /// Prime field with the given modulus.
    Fp(u64),
}

impl FieldKind {
    /// Builds an `F_p` kind, checking primality of `p`.
    pub fn fp(p: u64) -> Result<FieldKind> {
        Self::check_prime(p)?;
        Ok(FieldKind::Fp(p))
    }

    pub(crate) fn check_prime(p: u64) -> Result<()> {
        if is_prime(p) {
            Ok(())
        } else {
            Err(Error::NotPrime(p))
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Z => write!(f, "Z"),
            FieldKind::Q => write!(f, "Q"),
            FieldKind::Fp(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= p) {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact scalar.  Arithmetic between mismatched kinds is a programming
/// error and panics; public entry points construct homogeneous data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Fp { val: u64, p: u64 },
}

impl Scalar {
    pub fn zero(kind: FieldKind) -> Scalar {
        match kind {
            FieldKind::Z => Scalar::Int(BigInt::zero()),
            FieldKind::Q => Scalar::Rat(BigRational::zero()),
            FieldKind::Fp(p) => Scalar::Fp { val: 0, p },
        }
    }

    pub fn one(kind: FieldKind) -> Scalar {
        match kind {
            FieldKind::Z => Scalar::Int(BigInt::one()),
            FieldKind::Q => Scalar::Rat(BigRational::one()),
            FieldKind::Fp(p) => Scalar::Fp { val: 1 % p, p },
        }
    }

    /// Converts an integer into the requested kind (reducing mod p for `F_p`).
    pub fn from_bigint(kind: FieldKind, v: &BigInt) -> Scalar {
        match kind {
            FieldKind::Z => Scalar::Int(v.clone()),
            FieldKind::Q => Scalar::Rat(BigRational::from(v.clone())),
            FieldKind::Fp(p) => {
                let pb = BigInt::from(p);
                let mut r = v % &pb;
                if r.is_negative() {
                    r += &pb;
                }
                Scalar::Fp { val: r.try_into().expect("residue fits"), p }
            }
        }
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Int(_) => FieldKind::Z,
            Scalar::Rat(_) => FieldKind::Q,
            Scalar::Fp { p, .. } => FieldKind::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, p: q }) if p == q => {
                Scalar::Fp { val: (a + b) % p, p: *p }
            }
            _ => panic!("scalar kind mismatch in add: {self:?} + {other:?}"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { val, p } => Scalar::Fp { val: (p - val) % p, p: *p },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, p: q }) if p == q => {
                Scalar::Fp { val: ((*a as u128 * *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => panic!("scalar kind mismatch in mul: {self:?} * {other:?}"),
        }
    }

    /// Multiplicative inverse where it exists (fields only, nonzero values).
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Int(_) => None,
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fp { val, p } => {
                if *val == 0 {
                    None
                } else {
                    let mut base = *val;
                    let mut exp = p - 2;
                    let mut acc: u64 = 1;
                    while exp > 0 {
                        if exp & 1 == 1 {
                            acc = ((acc as u128 * base as u128) % *p as u128) as u64;
                        }
                        base = ((base as u128 * base as u128) % *p as u128) as u64;
                        exp >>= 1;
                    }
                    Some(Scalar::Fp { val: acc, p: *p })
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) => write!(f, "{v}"),
            Scalar::Fp { val, p } => write!(f, "{val} (mod {p})"),
        }
    }
}
