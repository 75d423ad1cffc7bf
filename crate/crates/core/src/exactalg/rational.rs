//! Rational numbers with a machine-word fast path.
//!
//! Values are kept in a canonical form: a `Small` ratio whenever numerator
//! and denominator fit in `i64` (excluding `i64::MIN`), otherwise `Big`.
//! Canonicity makes the derived equality and hashing agree with numeric
//! equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rat {
    Small(Ratio<i64>),
    Big(BigRational),
}

fn fits(x: i64) -> bool {
    x != i64::MIN
}

impl Rat {
    pub fn zero() -> Self {
        Rat::Small(Ratio::zero())
    }

    pub fn one() -> Self {
        Rat::Small(Ratio::one())
    }

    pub fn from_i64(v: i64) -> Self {
        if fits(v) {
            Rat::Small(Ratio::from_integer(v))
        } else {
            Rat::Big(BigRational::from_integer(BigInt::from(v)))
        }
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) if fits(n) && fits(d) => Rat::Small(Ratio::new_raw(n, d)),
            _ => Rat::Big(b),
        }
    }

    fn from_small(r: Ratio<i64>) -> Self {
        if fits(*r.numer()) && fits(*r.denom()) {
            Rat::Small(r)
        } else {
            Rat::from_big(to_big_small(&r))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(r) => to_big_small(r),
            Rat::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_zero(),
            Rat::Big(b) => b.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_integer(),
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn add(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(c) = a.checked_add(b) {
                return Rat::from_small(c);
            }
        }
        Rat::from_big(self.to_big() + other.to_big())
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(c) = a.checked_sub(b) {
                return Rat::from_small(c);
            }
        }
        Rat::from_big(self.to_big() - other.to_big())
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(c) = a.checked_mul(b) {
                return Rat::from_small(c);
            }
        }
        Rat::from_big(self.to_big() * other.to_big())
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(r) => Rat::Small(-*r),
            Rat::Big(b) => Rat::from_big(-b.clone()),
        }
    }

    pub fn inv(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rat::Small(r) => {
                let one = Ratio::one();
                match one.checked_div(r) {
                    Some(c) => Rat::from_small(c),
                    None => Rat::from_big(to_big_small(r).recip()),
                }
            }
            Rat::Big(b) => Rat::from_big(b.recip()),
        })
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_negative(),
            Rat::Big(b) => b.is_negative(),
        }
    }
}

fn to_big_small(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(r) => write!(f, "{}", r),
            Rat::Big(b) => write!(f, "{}", b),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError(pub String);

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal {:?}", self.0)
    }
}

impl std::error::Error for ParseRatError {}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `"a"` or `"a/b"` with arbitrary-size integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRatError(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}
