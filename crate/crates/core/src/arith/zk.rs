use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor::KFactorization;
use crate::error::{Error, Result};

/// A reduced rational number. Membership in `Z[1/k]` is checked against a
/// factorization with [`in_zk`] or [`ZkRational::checked`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ZkRational(BigRational);

/// `p`-adic valuation; `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self >= bound`, treating `Infinite` as larger than everything.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0);
    }
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&BigInt::from(p));
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Whether `p` divides `n`.
pub(crate) fn divides(p: u64, n: &BigInt) -> bool {
    (n % p).is_zero()
}

impl ZkRational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(ZkRational(BigRational::new(num, den)))
    }

    pub fn from_integer(n: i64) -> Self {
        ZkRational(BigRational::from_integer(n.into()))
    }

    /// `num/den`; panics on a zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        ZkRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        ZkRational(r)
    }

    pub fn zero() -> Self {
        ZkRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ZkRational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Self {
        ZkRational(self.0.abs())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `|self| < 1`.
    pub fn abs_lt_one(&self) -> bool {
        self.0.numer().magnitude() < self.0.denom().magnitude()
    }

    /// Largest integer not exceeding `|self|`.
    pub fn abs_floor(&self) -> BigInt {
        self.0.numer().abs() / self.0.denom()
    }

    /// Checks that the value lies in `Z[1/k]`.
    pub fn checked(self, fact: &KFactorization) -> Result<Self> {
        if in_zk(&self.0, fact) {
            Ok(self)
        } else {
            Err(Error::NotInZk(self.to_string()))
        }
    }

    /// Multiplies by the rational scalar `s`.
    pub fn scale(&self, s: &BigRational) -> Self {
        ZkRational(&self.0 * s)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Raw `p`-adic valuation for any prime `p`.
    pub fn valuation_at(&self, p: u64) -> Valuation {
        if self.0.is_zero() {
            return Valuation::Infinite;
        }
        let vn = int_valuation(self.0.numer(), p) as i64;
        let vd = int_valuation(self.0.denom(), p) as i64;
        Valuation::Finite(vn - vd)
    }
}

impl fmt::Display for ZkRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ZkRational {
    type Err = Error;

    /// Accepts `n` or `n/d` with an optional sign.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not a fraction"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n).map_err(|_| bad())?;
        let d = BigInt::from_str(d).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(ZkRational(BigRational::new(n, d)))
    }
}

impl Serialize for ZkRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ZkRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ZkRational {
            type Output = ZkRational;
            fn $m(self, rhs: ZkRational) -> ZkRational {
                ZkRational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ZkRational> for &'a ZkRational {
            type Output = ZkRational;
            fn $m(self, rhs: &'a ZkRational) -> ZkRational {
                ZkRational((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for ZkRational {
    type Output = ZkRational;
    fn neg(self) -> ZkRational {
        ZkRational(-self.0)
    }
}

impl Neg for &ZkRational {
    type Output = ZkRational;
    fn neg(self) -> ZkRational {
        ZkRational(-&self.0)
    }
}

impl From<i64> for ZkRational {
    fn from(n: i64) -> Self {
        ZkRational::from_integer(n)
    }
}

pub fn zk_add(x: &ZkRational, y: &ZkRational) -> ZkRational {
    x + y
}

pub fn zk_mul(x: &ZkRational, y: &ZkRational) -> ZkRational {
    x * y
}

pub fn zk_neg(x: &ZkRational) -> ZkRational {
    -x
}

/// True iff every prime of the denominator divides `k`.
pub fn in_zk(q: &BigRational, fact: &KFactorization) -> bool {
    let mut d = q.denom().clone();
    for pp in fact.primes() {
        if pp.prime == 2 {
            let tz = d.trailing_zeros().unwrap_or(0);
            d >>= tz;
            continue;
        }
        loop {
            let (quo, r) = d.div_rem(&BigInt::from(pp.prime));
            if !r.is_zero() {
                break;
            }
            d = quo;
        }
    }
    d.is_one()
}

/// `v_p(x)`; `p` must be one of the primes of `k`.
pub fn valuation(x: &ZkRational, p: u64, fact: &KFactorization) -> Result<Valuation> {
    if fact.index_of_prime(p).is_none() {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(x.valuation_at(p))
}

/// Smallest `e` with `den(x) | k^e`, or `None` outside `Z[1/k]`.
pub fn den_exponent(x: &ZkRational, fact: &KFactorization) -> Option<u32> {
    let d = x.denom();
    let mut rest = d.clone();
    let mut e = 0u32;
    for pp in fact.primes() {
        let v = int_valuation(&rest, pp.prime);
        if v > 0 {
            rest /= BigInt::from(pp.prime).pow(v as u32);
        }
        e = e.max((v as u32).div_ceil(pp.exp));
    }
    rest.is_one().then_some(e)
}

impl PartialOrd<i64> for ZkRational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer((*other).into())))
    }
}

impl PartialEq<i64> for ZkRational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use proptest::prelude::*;

    fn q(s: &str) -> ZkRational {
        s.parse().unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(zk_add(&q("1/6"), &q("5/6")), q("1"));
        assert_eq!(zk_mul(&q("1/2"), &q("1/3")), q("1/6"));
        let x = q("-7/36");
        assert!(zk_add(&x, &zk_neg(&x)).is_zero());
    }

    #[test]
    fn membership() {
        let f = factorize(6).unwrap();
        assert!(in_zk(q("7/36").as_big(), &f));
        assert!(!in_zk(q("1/5").as_big(), &f));
        assert!(in_zk(q("-123456789").as_big(), &f));
        assert!(q("1/10").checked(&f).is_err());
    }

    #[test]
    fn valuations() {
        let f = factorize(12).unwrap();
        assert_eq!(valuation(&q("1/2"), 2, &f), Ok(Valuation::Finite(-1)));
        assert_eq!(valuation(&q("12"), 2, &f), Ok(Valuation::Finite(2)));
        assert_eq!(valuation(&q("0"), 3, &f), Ok(Valuation::Infinite));
        assert_eq!(valuation(&q("5"), 5, &f), Err(Error::UnsupportedPrime(5)));
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
    }

    #[test]
    fn denominator_exponents() {
        let f = factorize(12).unwrap();
        assert_eq!(den_exponent(&q("5"), &f), Some(0));
        assert_eq!(den_exponent(&q("1/8"), &f), Some(2));
        assert_eq!(den_exponent(&q("1/27"), &f), Some(3));
        assert_eq!(den_exponent(&q("1/7"), &f), None);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q(" -6/4 ").to_string(), "-3/2");
        assert_eq!(q("8/4").to_string(), "2");
        assert!("1/0".parse::<ZkRational>().is_err());
        assert!("x".parse::<ZkRational>().is_err());
        let json = serde_json::to_string(&q("7/36")).unwrap();
        assert_eq!(json, "\"7/36\"");
        let back: ZkRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q("7/36"));
    }

    fn zk6() -> impl Strategy<Value = ZkRational> {
        (-10_000i64..10_000, 0u32..5, 0u32..5)
            .prop_map(|(n, a, b)| ZkRational::from_ratio(n, 2i64.pow(a) * 3i64.pow(b)))
    }

    proptest! {
        #[test]
        fn ring_axioms(x in zk6(), y in zk6(), z in zk6()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            let f = factorize(6).unwrap();
            prop_assert!(in_zk((&x * &y).as_big(), &f));
            prop_assert!(in_zk((&x + &y).as_big(), &f));
        }

        #[test]
        fn valuation_is_additive(x in zk6(), y in zk6()) {
            prop_assume!(!x.is_zero() && !y.is_zero());
            for p in [2u64, 3] {
                let vx = x.valuation_at(p).finite().unwrap();
                let vy = y.valuation_at(p).finite().unwrap();
                prop_assert_eq!((&x * &y).valuation_at(p), Valuation::Finite(vx + vy));
            }
        }
    }
}
