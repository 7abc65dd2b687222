//! Exact scalars: arbitrary-precision rationals or a prime field GF(p).
//!
//! The field is a run-level choice. Mixing scalars of different fields is a
//! programming error and panics; elements created through one
//! [`FunctionAlgebra`](crate::function::FunctionAlgebra) never mix.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// GF(p); `p` must be prime and fit comfortably in 32 bits.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Gf { value: (n.rem_euclid(p as i64)) as u64, p },
        }
    }

    /// Maps an exact rational literal into this field.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            Field::Rational => Ok(Scalar::Rat(q.clone())),
            Field::Prime(p) => {
                let modulus = BigInt::from(p);
                let reduce = |n: &BigInt| n.mod_floor(&modulus).to_u64().expect("reduced below p");
                let den = reduce(q.denom());
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                let num = Scalar::Gf { value: reduce(q.numer()), p };
                let den = Scalar::Gf { value: den, p };
                Ok(&num * &den.inv().expect("nonzero"))
            }
        }
    }

    /// Parses `n`, `-n` or `n/d`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let q = parse_rational(text)?;
        self.from_rational(&q)
    }

    /// Every nonzero element for small primes; otherwise a fixed handful of
    /// rationals mapped into the field.
    pub fn sample_nonzero(&self) -> Vec<Scalar> {
        match *self {
            Field::Prime(p) if p <= 31 => (1..p as i64).map(|n| self.from_i64(n)).collect(),
            _ => {
                let mut out: Vec<Scalar> = Vec::new();
                for (n, d) in [(1, 1), (-1, 1), (2, 1), (1, 2), (3, 5)] {
                    let q = BigRational::new(BigInt::from(n), BigInt::from(d));
                    if let Ok(s) = self.from_rational(&q) {
                        if !s.is_zero() && !out.contains(&s) {
                            out.push(s);
                        }
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "gf:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        match s {
            "q" | "Q" | "rational" => Ok(Field::Rational),
            _ => match s.strip_prefix("gf:") {
                Some(p) => {
                    let p: u64 = p.parse().map_err(|_| Error::InvalidField(s.to_string()))?;
                    Field::prime(p)
                }
                None => Err(Error::InvalidField(s.to_string())),
            },
        }
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let syntax = |m: &str| Error::Syntax { position: 0, message: format!("{m}: `{text}`") };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| syntax("bad integer"))?;
    let den: BigInt = den.parse().map_err(|_| syntax("bad denominator"))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Gf { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Gf { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Gf { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Gf { value, .. } => *value == 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_negative(),
            Scalar::Gf { .. } => false,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Gf { value, p } => Scalar::Gf { value: pow_mod(*value, p - 2, *p), p: *p },
        })
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rat(q) => Scalar::Rat(q.abs()),
            other => other.clone(),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
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

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Gf { value: a, p }, Scalar::Gf { value: b, p: q }) if p == q => {
                Scalar::Gf { value: (a + b) % p, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Gf { value: a, p }, Scalar::Gf { value: b, p: q }) if p == q => {
                Scalar::Gf { value: mul_mod(*a, *b, *p), p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Gf { value, p } => Scalar::Gf { value: (p - value) % p, p: *p },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rat(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Gf { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf_inverse_and_literals() {
        let f = Field::prime(5).unwrap();
        let two = f.from_i64(2);
        assert_eq!(&two * &two.inv().unwrap(), f.one());
        // 2/3 = 2 * 2 = 4 mod 5
        assert_eq!(f.parse("2/3").unwrap(), f.from_i64(4));
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert!(matches!(f.parse("1/5"), Err(Error::DivisionByZero)));
    }

    #[test]
    fn field_parsing() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("gf:7".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("gf:8".parse::<Field>().is_err());
        assert!("r".parse::<Field>().is_err());
    }

    #[test]
    fn rational_display() {
        let q = Field::Rational;
        assert_eq!(q.parse("-4/6").unwrap().to_string(), "-2/3");
        assert_eq!(q.parse("3").unwrap().to_string(), "3");
    }

    #[test]
    fn samples_are_nonzero_and_distinct() {
        assert_eq!(Field::Rational.sample_nonzero().len(), 5);
        assert_eq!(Field::Prime(5).sample_nonzero().len(), 4);
        let big = Field::Prime(1_000_003).sample_nonzero();
        assert!(big.iter().all(|s| !s.is_zero()));
    }
}
