use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, in_zk, KFactorization, ZkRational};
use crate::error::{Error, Result};

/// An element `(r, z)` of `Z[1/k] ⋊ Z^n`, i.e. `a^r t_1^{z_1} ... t_n^{z_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub r: ZkRational,
    pub z: Vec<i64>,
}

impl GroupElement {
    pub fn new(r: ZkRational, z: Vec<i64>) -> Self {
        GroupElement { r, z }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.r, self.z)
    }
}

/// The group `G_k` attached to a factorization of `k`.
#[derive(Clone, Debug)]
pub struct Group {
    fact: KFactorization,
    powers: Vec<BigInt>,
}

impl Group {
    pub fn new(k: u64) -> Result<Self> {
        Ok(Self::from_fact(factorize(k)?))
    }

    pub fn from_fact(fact: KFactorization) -> Self {
        let powers = (0..fact.n())
            .map(|i| BigInt::from(fact.prime_power(i)))
            .collect();
        Group { fact, powers }
    }

    pub fn fact(&self) -> &KFactorization {
        &self.fact
    }

    pub fn k(&self) -> u64 {
        self.fact.k()
    }

    pub fn n(&self) -> usize {
        self.fact.n()
    }

    pub fn check_dim(&self, z: &[i64]) -> Result<()> {
        if z.len() == self.n() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.n(),
                got: z.len(),
            })
        }
    }

    /// Validates `r ∈ Z[1/k]` and the length of `z`.
    pub fn element(&self, r: ZkRational, z: Vec<i64>) -> Result<GroupElement> {
        self.check_dim(&z)?;
        let r = r.checked(&self.fact)?;
        Ok(GroupElement { r, z })
    }

    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        self.check_dim(&g.z)?;
        if in_zk(g.r.as_big(), &self.fact) {
            Ok(())
        } else {
            Err(Error::NotInZk(g.r.to_string()))
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(ZkRational::zero(), vec![0; self.n()])
    }

    /// The generator `a = (1, 0)`.
    pub fn a(&self) -> GroupElement {
        GroupElement::new(ZkRational::one(), vec![0; self.n()])
    }

    /// `t_i` for the 0-based index `i`.
    pub fn t(&self, i: usize) -> GroupElement {
        GroupElement::new(ZkRational::zero(), unit(self.n(), i, 1))
    }

    pub fn from_z(&self, z: Vec<i64>) -> GroupElement {
        GroupElement::new(ZkRational::zero(), z)
    }

    pub fn from_r(&self, r: ZkRational) -> GroupElement {
        GroupElement::new(r, vec![0; self.n()])
    }

    /// `λ(z) = ∏ (p_i^{m_i})^{z_i}`.
    pub fn lambda(&self, z: &[i64]) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (q, &e) in self.powers.iter().zip(z) {
            if e > 0 {
                num *= q.pow(e as u32);
            } else if e < 0 {
                den *= q.pow(e.unsigned_abs() as u32);
            }
        }
        BigRational::new_raw(num, den)
    }

    /// `γ(z)(x) = λ(z)·x`.
    pub fn gamma_act(&self, z: &[i64], x: &ZkRational) -> ZkRational {
        x.scale(&self.lambda(z))
    }

    /// `(r1, z1)(r2, z2) = (r1 + λ(z1) r2, z1 + z2)`.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let r = &g.r + &self.gamma_act(&g.z, &h.r);
        GroupElement::new(r, add(&g.z, &h.z))
    }

    /// `(r, z)^{-1} = (-λ(-z) r, -z)`.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let nz = neg(&g.z);
        let r = -self.gamma_act(&nz, &g.r);
        GroupElement::new(r, nz)
    }

    pub fn pow(&self, g: &GroupElement, e: i64) -> GroupElement {
        let base = if e < 0 { self.inverse(g) } else { g.clone() };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.multiply(&acc, &base);
        }
        acc
    }

    pub fn product<'a>(&self, gs: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        gs.into_iter()
            .fold(self.identity(), |acc, g| self.multiply(&acc, g))
    }
}

pub(crate) fn unit(n: usize, i: usize, s: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = s;
    v
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

pub(crate) fn scale(a: &[i64], s: i64) -> Vec<i64> {
    a.iter().map(|x| x * s).collect()
}
