use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::factor::KFactorization;
use super::zk::{den_exponent, ZkRational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

/// Sign-magnitude base-`k` expansion `±c_r...c_0.c_{-1}...c_{-s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseKExpansion {
    pub k: u64,
    pub sign: Sign,
    /// Most significant digit first; empty for `|x| < 1`.
    pub int_digits: Vec<u64>,
    pub frac_digits: Vec<u64>,
}

pub const DEFAULT_DELIMITER: &str = ":";

impl BaseKExpansion {
    /// Renders with digits concatenated, or joined by `:` when some digit
    /// needs more than one character.
    pub fn render(&self) -> String {
        let wide = self
            .int_digits
            .iter()
            .chain(&self.frac_digits)
            .any(|d| *d >= 10);
        self.render_with(if wide { DEFAULT_DELIMITER } else { "" })
    }

    pub fn render_with(&self, delim: &str) -> String {
        if self.sign == Sign::Zero {
            return "0".to_string();
        }
        let join = |ds: &[u64]| {
            ds.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(delim)
        };
        let mut out = String::new();
        if self.sign == Sign::Minus {
            out.push('-');
        }
        if self.int_digits.is_empty() {
            out.push('0');
        } else {
            out.push_str(&join(&self.int_digits));
        }
        if !self.frac_digits.is_empty() {
            out.push('.');
            out.push_str(&join(&self.frac_digits));
        }
        out
    }

    /// Parses the format produced by [`render`](Self::render).
    pub fn parse(s: &str, k: u64) -> Result<Self> {
        let delim = if s.contains(DEFAULT_DELIMITER) {
            DEFAULT_DELIMITER
        } else {
            ""
        };
        Self::parse_with(s, k, delim)
    }

    pub fn parse_with(s: &str, k: u64, delim: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("base-{k} string `{s}`: {why}"));
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (ip, fp) = match body.split_once('.') {
            Some((a, b)) => (a, Some(b)),
            None => (body, None),
        };
        let digits = |part: &str| -> Result<Vec<u64>> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            let pieces: Vec<&str> = if delim.is_empty() {
                part.split("").filter(|c| !c.is_empty()).collect()
            } else {
                part.split(delim).collect()
            };
            pieces
                .into_iter()
                .map(|c| {
                    let d: u64 = c.parse().map_err(|_| bad("bad digit"))?;
                    if d >= k {
                        Err(bad("digit out of range"))
                    } else {
                        Ok(d)
                    }
                })
                .collect()
        };
        if ip.is_empty() {
            return Err(bad("missing integer part"));
        }
        if fp == Some("") {
            return Err(bad("empty fractional part"));
        }
        let mut int_digits = digits(ip)?;
        let mut frac_digits = match fp {
            Some(f) => digits(f)?,
            None => Vec::new(),
        };
        let lead = int_digits.iter().take_while(|d| **d == 0).count();
        int_digits.drain(..lead);
        while frac_digits.last() == Some(&0) {
            frac_digits.pop();
        }
        let sign = if int_digits.is_empty() && frac_digits.is_empty() {
            Sign::Zero
        } else if neg {
            Sign::Minus
        } else {
            Sign::Plus
        };
        Ok(BaseKExpansion {
            k,
            sign,
            int_digits,
            frac_digits,
        })
    }
}

impl fmt::Display for BaseKExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn big_digits(mut m: BigInt, k: u64) -> Vec<u64> {
    let kb = BigInt::from(k);
    let mut out = Vec::new();
    while !m.is_zero() {
        let (q, r) = m.div_rem(&kb);
        out.push(r.to_u64().expect("digit below k"));
        m = q;
    }
    out.reverse();
    out
}

/// Exact finite expansion of `x`; errors if `x` is outside `Z[1/k]`.
pub fn to_base_k(x: &ZkRational, fact: &KFactorization) -> Result<BaseKExpansion> {
    let k = fact.k();
    if x.is_zero() {
        return Ok(BaseKExpansion {
            k,
            sign: Sign::Zero,
            int_digits: Vec::new(),
            frac_digits: Vec::new(),
        });
    }
    let e = den_exponent(x, fact).ok_or_else(|| Error::NotInZk(x.to_string()))? as usize;
    let scaled = x.as_big().abs() * BigRational::from_integer(BigInt::from(k).pow(e as u32));
    debug_assert!(scaled.is_integer());
    let mut all = big_digits(scaled.to_integer(), k);
    if all.len() < e {
        let mut padded = vec![0; e - all.len()];
        padded.extend(all);
        all = padded;
    }
    let split = all.len() - e;
    let int_digits = all[..split].to_vec();
    let mut frac_digits = all[split..].to_vec();
    while frac_digits.last() == Some(&0) {
        frac_digits.pop();
    }
    Ok(BaseKExpansion {
        k,
        sign: if x.signum() < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        },
        int_digits,
        frac_digits,
    })
}

pub fn from_base_k(e: &BaseKExpansion, fact: &KFactorization) -> Result<ZkRational> {
    let k = fact.k();
    if e.k != k {
        return Err(Error::InvalidInput(format!(
            "expansion is in base {}, expected {k}",
            e.k
        )));
    }
    if e.sign == Sign::Zero {
        return Ok(ZkRational::zero());
    }
    let kb = BigInt::from(k);
    let mut m = BigInt::zero();
    for d in e.int_digits.iter().chain(&e.frac_digits) {
        if *d >= k {
            return Err(Error::Parse(format!("digit {d} out of range for base {k}")));
        }
        m = m * &kb + BigInt::from(*d);
    }
    if e.sign == Sign::Minus {
        m = -m;
    }
    ZkRational::new(m, kb.pow(e.frac_digits.len() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use proptest::prelude::*;

    fn expand(x: ZkRational, k: u64) -> String {
        to_base_k(&x, &factorize(k).unwrap()).unwrap().render()
    }

    #[test]
    fn worked_examples() {
        for k in [6i64, 10, 12] {
            assert_eq!(expand(ZkRational::from_ratio(1, k), k as u64), "0.1");
            let x = ZkRational::from_ratio(k.pow(5) + k.pow(3) + 1, k.pow(4));
            assert_eq!(expand(x, k as u64), "10.1001");
        }
        assert_eq!(expand(ZkRational::zero(), 6), "0");
    }

    #[test]
    fn wide_digits_use_delimiter() {
        // 1*12 + 11 + 0/12 + 5/144
        let x = ZkRational::from_ratio(23 * 144 + 5, 144);
        assert_eq!(expand(x.clone(), 12), "1:11.0:5");
        let f = factorize(12).unwrap();
        let parsed = BaseKExpansion::parse("1:11.0:5", 12).unwrap();
        assert_eq!(from_base_k(&parsed, &f).unwrap(), x);
        assert_eq!(expand(ZkRational::from_ratio(-1, 144), 12), "-0.01");
        assert_eq!(expand(ZkRational::from_ratio(-10, 144), 12), "-0.0:10");
    }

    #[test]
    fn negatives_and_integers() {
        assert_eq!(expand(ZkRational::from_ratio(-7, 36), 6), "-0.11");
        assert_eq!(expand(ZkRational::from_integer(36), 6), "100");
        assert_eq!(expand(ZkRational::from_ratio(-13, 2), 10), "-6.5");
    }

    #[test]
    fn parse_normalizes_and_rejects() {
        let e = BaseKExpansion::parse("007.10", 8).unwrap();
        assert_eq!(e.int_digits, vec![7]);
        assert_eq!(e.frac_digits, vec![1]);
        assert_eq!(BaseKExpansion::parse("-0.0", 6).unwrap().sign, Sign::Zero);
        assert!(BaseKExpansion::parse("7", 6).is_err());
        assert!(BaseKExpansion::parse(".5", 6).is_err());
        assert!(BaseKExpansion::parse("1.", 6).is_err());
        assert!(BaseKExpansion::parse("12:0", 12).is_err());
        assert_eq!(
            BaseKExpansion::parse("10.1001", 12).unwrap().int_digits,
            vec![1, 0]
        );
    }

    #[test]
    fn outside_ring_is_rejected() {
        let f = factorize(6).unwrap();
        assert!(to_base_k(&ZkRational::from_ratio(1, 5), &f).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(k in 2u64..40, n in -1_000_000i64..1_000_000, e in 0u32..6) {
            let f = factorize(k).unwrap();
            let x = ZkRational::from_ratio(n, (k as i64).pow(e));
            let exp = to_base_k(&x, &f).unwrap();
            prop_assert!(exp.int_digits.first() != Some(&0));
            prop_assert!(exp.frac_digits.last() != Some(&0));
            prop_assert_eq!(from_base_k(&exp, &f).unwrap(), x.clone());
            let reparsed = BaseKExpansion::parse(&exp.render(), k).unwrap();
            prop_assert_eq!(reparsed, exp);
        }
    }
}
