use serde::Serialize;

use crate::error::{Error, Result};

/// One factor `p^m` of `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exp: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exp)
    }
}

/// Prime factorization `k = p_1^{m_1} ... p_n^{m_n}` with the primes in
/// increasing order. The order fixes the basis `t_1, ..., t_n` of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KFactorization {
    k: u64,
    primes: Vec<PrimePower>,
}

impl KFactorization {
    /// Factorizes `k` by trial division.
    pub fn new(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidModulus(k));
        }
        let mut primes = Vec::new();
        let mut rest = k;
        let mut p = 2u64;
        while p.saturating_mul(p) <= rest {
            if rest.is_multiple_of(p) {
                let mut exp = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    exp += 1;
                }
                primes.push(PrimePower { prime: p, exp });
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if rest > 1 {
            primes.push(PrimePower {
                prime: rest,
                exp: 1,
            });
        }
        Ok(KFactorization { k, primes })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Rank of the free abelian factor, i.e. the number of distinct primes.
    pub fn n(&self) -> usize {
        self.primes.len()
    }

    pub fn primes(&self) -> &[PrimePower] {
        &self.primes
    }

    /// `p_i^{m_i}` for the 0-based index `i`.
    pub fn prime_power(&self, i: usize) -> u64 {
        self.primes[i].value()
    }

    /// `k_i = k / p_i^{m_i}` for every index.
    pub fn cofactors(&self) -> Vec<u64> {
        (0..self.n())
            .map(|i| self.k / self.prime_power(i))
            .collect()
    }

    pub fn index_of_prime(&self, p: u64) -> Option<usize> {
        self.primes.iter().position(|pp| pp.prime == p)
    }

    /// Divisors `l` of `k` such that `p_i | l` forces `p_i^{m_i} | l`,
    /// sorted increasingly.
    pub fn full_divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for i in 0..self.n() {
            let q = self.prime_power(i);
            let extra: Vec<u64> = out.iter().map(|d| d * q).collect();
            out.extend(extra);
        }
        out.sort_unstable();
        out
    }

    /// Smallest `e` with `d | k^e`, or `None` when `d` has a prime factor
    /// not dividing `k`.
    pub fn exponent_of(&self, d: u64) -> Option<u32> {
        let mut rest = d;
        let mut e = 0u32;
        for pp in &self.primes {
            let mut v = 0u32;
            while rest.is_multiple_of(pp.prime) {
                rest /= pp.prime;
                v += 1;
            }
            e = e.max(v.div_ceil(pp.exp));
        }
        (rest == 1).then_some(e)
    }

    /// All divisors of `k^e`, increasing.
    pub fn divisors_of_power(&self, e: u32) -> Vec<u64> {
        let mut out = vec![1u64];
        for pp in &self.primes {
            let top = pp.exp * e;
            let mut next = Vec::with_capacity(out.len() * (top as usize + 1));
            for d in &out {
                let mut m = *d;
                for _ in 0..=top {
                    next.push(m);
                    m = m.saturating_mul(pp.prime);
                }
            }
            out = next;
        }
        out.sort_unstable();
        out
    }
}

pub fn factorize(k: u64) -> Result<KFactorization> {
    KFactorization::new(k)
}

pub fn full_divisors(fact: &KFactorization) -> Vec<u64> {
    fact.full_divisors()
}
