//! Confining subsets of `Z[1/k]`: a registry of named subsets behind the
//! [`ConfiningSubset`] trait, bounded verifiers for the three confining
//! conditions, strictness witnesses, closures and classification.

mod classify;
mod closure;
mod registry;
mod verify;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{KFactorization, ZkRational};
use crate::error::{Error, Result};
use crate::group::{Character, Group};
use crate::structures::QpModel;
use crate::words::AdditiveLength;

pub use classify::{classify, Classification};
pub use closure::{closure_with, Closure};
pub use registry::{registry, Full, QMinus, QPrime, Registry};
pub use verify::{
    strictness_witness, verify_condition_a, verify_condition_b, verify_condition_b_along,
    verify_condition_b_samples, verify_condition_c, CondAResult, CondBResult, CondCResult,
    Condition, StrictResult, VerifierReport, DEFAULT_SUMSET_BUDGET,
};

/// Enumeration bound: numerator magnitude at most `num`, denominator
/// dividing `k^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumBound {
    pub num: u64,
    pub exp: u32,
}

impl EnumBound {
    pub fn new(num: u64, exp: u32) -> Self {
        EnumBound { num, exp }
    }

    /// Rejects bounds whose denominators overflow 64 bits.
    pub fn validate(&self, fact: &KFactorization) -> Result<()> {
        fact.k()
            .checked_pow(self.exp)
            .map(|_| ())
            .ok_or_else(|| Error::InvalidInput(format!("k^{} overflows", self.exp)))
    }
}

/// A finite verification domain: an enumeration bound and a lattice box
/// `|z_i| <= z_box`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    pub bound: EnumBound,
    pub z_box: i64,
}

impl Domain {
    pub fn new(num: u64, exp: u32, z_box: i64) -> Self {
        Domain {
            bound: EnumBound::new(num, exp),
            z_box,
        }
    }
}

/// A symmetric subset `Q ⊆ Z[1/k]` containing 0, with the data needed to
/// check that it is confining.
pub trait ConfiningSubset: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn group(&self) -> &Group;

    fn contains(&self, x: &ZkRational) -> bool;

    /// Members within `bound`, in the canonical enumeration order.
    fn enumerate(&self, bound: &EnumBound) -> Vec<ZkRational> {
        enumerate_zk(self.group().fact(), bound)
            .into_iter()
            .filter(|x| self.contains(x))
            .collect()
    }

    /// Candidate `z_0` for condition (c).
    fn z0_hint(&self) -> Option<Vec<i64>> {
        None
    }

    /// Candidate `(q, z)` with `ρ(z) > 0` and `γ(z^{-1})(q) ∉ Q`.
    fn strictness_hint(&self) -> Option<(ZkRational, Vec<i64>)> {
        None
    }

    /// The character this subset is confining for; `None` means every
    /// character works.
    fn expected_class(&self) -> Option<Character> {
        None
    }

    /// The quasi-parabolic model realizing `[Q ∪ Z_ρ]`.
    fn model(&self) -> Option<QpModel> {
        None
    }

    /// Minimal number of members summing to `h`, when a closed form exists.
    fn additive_length(&self, _h: &ZkRational) -> Option<AdditiveLength> {
        None
    }

    /// Whether `x ∈ Q + γ(z)(Q)`, when a closed form exists.
    fn in_twisted_sum(&self, _x: &ZkRational, _z: &[i64]) -> Option<bool> {
        None
    }

    /// True when `Q + Q ⊆ Q` is structural, so condition (c) holds for
    /// every `z_0` with `ρ(z_0) >= 0`.
    fn closed_under_addition(&self) -> bool {
        false
    }
}

pub type SubsetRef = Arc<dyn ConfiningSubset>;

/// Denominators of `Z[1/k] ∩ {den | k^exp}` grouped by exponent.
fn denominators_by_exponent(fact: &KFactorization, exp: u32) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new(); exp as usize + 1];
    for d in fact.divisors_of_power(exp) {
        let e = fact.exponent_of(d).expect("divides k^exp");
        out[e as usize].push(d);
    }
    out
}

/// All of `Z[1/k]` within `bound`, ordered by denominator exponent, then
/// `|numerator|`, then sign (positive first), then denominator.
pub fn enumerate_zk(fact: &KFactorization, bound: &EnumBound) -> Vec<ZkRational> {
    let mut out = vec![ZkRational::zero()];
    for dens in denominators_by_exponent(fact, bound.exp) {
        for a in 1..=bound.num {
            for s in [1i64, -1] {
                for &d in &dens {
                    if a.gcd(&d) == 1 {
                        let n = BigInt::from(a) * s;
                        out.push(ZkRational::new(n, BigInt::from(d)).expect("nonzero"));
                    }
                }
            }
        }
    }
    out
}

/// Random elements of `Z[1/k]` within `bound`.
pub fn sample_zk(
    rng: &mut impl Rng,
    fact: &KFactorization,
    bound: &EnumBound,
    count: usize,
) -> Vec<ZkRational> {
    let dens = fact.divisors_of_power(bound.exp);
    let num = bound.num as i64;
    (0..count)
        .map(|_| {
            let d = dens[rng.gen_range(0..dens.len())];
            let n = rng.gen_range(-num..=num);
            ZkRational::from_ratio(n, d as i64)
        })
        .collect()
}
