use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{ConfiningSubset, SubsetRef};
use crate::arith::{divides, ZkRational};
use crate::error::{Error, Result};
use crate::group::{unit, Character, Group};
use crate::structures::QpModel;
use crate::words::AdditiveLength;

/// `Q = Z[1/k]`.
#[derive(Clone, Debug)]
pub struct Full {
    group: Group,
}

impl Full {
    pub fn new(group: Group) -> Self {
        Full { group }
    }
}

impl ConfiningSubset for Full {
    fn name(&self) -> String {
        "full".into()
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn contains(&self, _x: &ZkRational) -> bool {
        true
    }

    fn z0_hint(&self) -> Option<Vec<i64>> {
        Some(vec![0; self.group.n()])
    }

    fn additive_length(&self, h: &ZkRational) -> Option<AdditiveLength> {
        Some(AdditiveLength::Finite(if h.is_zero() { 0 } else { 1 }))
    }

    fn in_twisted_sum(&self, _x: &ZkRational, _z: &[i64]) -> Option<bool> {
        Some(true)
    }

    fn closed_under_addition(&self) -> bool {
        true
    }
}

/// `Q_i = Z[1/k_i]`, the elements with nonnegative `p_i`-adic valuation.
#[derive(Clone, Debug)]
pub struct QPrime {
    group: Group,
    i: usize,
    prime: u64,
}

impl QPrime {
    /// `i` is 0-based.
    pub fn new(group: Group, i: usize) -> Self {
        let prime = group.fact().primes()[i].prime;
        QPrime { group, i, prime }
    }

    pub fn index(&self) -> usize {
        self.i
    }
}

impl ConfiningSubset for QPrime {
    fn name(&self) -> String {
        format!("Q{}", self.i + 1)
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn contains(&self, x: &ZkRational) -> bool {
        !divides(self.prime, x.denom())
    }

    fn z0_hint(&self) -> Option<Vec<i64>> {
        Some(vec![0; self.group.n()])
    }

    fn strictness_hint(&self) -> Option<(ZkRational, Vec<i64>)> {
        Some((ZkRational::one(), unit(self.group.n(), self.i, 1)))
    }

    fn expected_class(&self) -> Option<Character> {
        Some(Character::plus(self.group.n(), self.i))
    }

    fn model(&self) -> Option<QpModel> {
        Some(QpModel::TreeI(self.i))
    }

    fn additive_length(&self, h: &ZkRational) -> Option<AdditiveLength> {
        Some(if h.is_zero() {
            AdditiveLength::Finite(0)
        } else if self.contains(h) {
            AdditiveLength::Finite(1)
        } else {
            AdditiveLength::Infinite
        })
    }

    /// `Q_i` and `γ(z)(Q_i)` are nested subgroups.
    fn in_twisted_sum(&self, x: &ZkRational, z: &[i64]) -> Option<bool> {
        Some(self.contains(x) || self.contains(&self.group.gamma_act(&crate::group::neg(z), x)))
    }
}

/// `Q_- = {x : |x| < 1}`, the numbers `±0.x_{-1}...x_{-m}` in base `k`.
#[derive(Clone, Debug)]
pub struct QMinus {
    group: Group,
    name: &'static str,
}

impl QMinus {
    pub fn new(group: Group) -> Self {
        QMinus {
            group,
            name: "Qminus",
        }
    }

    /// The same subset under the name used for `BS(1, k)`.
    pub fn c_minus(group: Group) -> Self {
        QMinus {
            group,
            name: "Cminus",
        }
    }
}

impl ConfiningSubset for QMinus {
    fn name(&self) -> String {
        self.name.into()
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn contains(&self, x: &ZkRational) -> bool {
        x.abs_lt_one()
    }

    fn z0_hint(&self) -> Option<Vec<i64>> {
        Some(vec![-1; self.group.n()])
    }

    /// `(1/k, z)` with `λ(z) = 1/(k p_1^{m_1}) < 1/k`.
    fn strictness_hint(&self) -> Option<(ZkRational, Vec<i64>)> {
        let mut z = vec![-1; self.group.n()];
        z[0] -= 1;
        let q = ZkRational::new(BigInt::from(1), BigInt::from(self.group.k())).expect("k >= 2");
        Some((q, z))
    }

    fn expected_class(&self) -> Option<Character> {
        Some(Character::minus(self.group.fact()))
    }

    fn model(&self) -> Option<QpModel> {
        Some(QpModel::Plane)
    }

    /// `⌊|h|⌋ + 1` for `h != 0`: each member has absolute value below 1,
    /// and `⌊|h|⌋` copies of `1 - ε` plus one remainder always suffice.
    fn additive_length(&self, h: &ZkRational) -> Option<AdditiveLength> {
        if h.is_zero() {
            return Some(AdditiveLength::Finite(0));
        }
        Some(match h.abs_floor().to_u64() {
            Some(f) => AdditiveLength::Finite(f + 1),
            None => AdditiveLength::Infinite,
        })
    }

    /// `|x| < 1 + λ(z)`: the open interval `(x - λ, x + λ) ∩ (-1, 1)` then
    /// contains a point of `Z[1/k]`.
    fn in_twisted_sum(&self, x: &ZkRational, z: &[i64]) -> Option<bool> {
        let bound = self.group.lambda(z) + num_rational::BigRational::from_integer(1.into());
        Some(x.abs().as_big() < &bound)
    }
}

/// Named confining subsets for one group.
#[derive(Clone, Debug)]
pub struct Registry {
    entries: Vec<SubsetRef>,
}

impl Registry {
    pub fn get(&self, name: &str) -> Result<SubsetRef> {
        self.entries
            .iter()
            .find(|s| s.name().eq_ignore_ascii_case(name))
            .cloned()
            .ok_or_else(|| Error::Unknown {
                kind: "subset",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SubsetRef> {
        self.entries.iter()
    }

    pub fn register(&mut self, subset: SubsetRef) {
        self.entries.retain(|s| s.name() != subset.name());
        self.entries.push(subset);
    }
}

/// `full`, `Q1..Qn`, `Qminus`, and `Cminus` when `n = 1`.
pub fn registry(group: &Group) -> Registry {
    let mut entries: Vec<SubsetRef> = vec![Arc::new(Full::new(group.clone()))];
    for i in 0..group.n() {
        entries.push(Arc::new(QPrime::new(group.clone(), i)));
    }
    entries.push(Arc::new(QMinus::new(group.clone())));
    if group.n() == 1 {
        entries.push(Arc::new(QMinus::c_minus(group.clone())));
    }
    Registry { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confining::{enumerate_zk, EnumBound};

    fn q(s: &str) -> ZkRational {
        s.parse().unwrap()
    }

    #[test]
    fn names_and_lookup() {
        let g = Group::new(6).unwrap();
        let r = registry(&g);
        assert_eq!(r.names(), vec!["full", "Q1", "Q2", "Qminus"]);
        assert!(r.get("qminus").is_ok());
        assert!(r.get("Q3").is_err());
        let r8 = registry(&Group::new(8).unwrap());
        assert_eq!(r8.names(), vec!["full", "Q1", "Qminus", "Cminus"]);
    }

    #[test]
    fn membership_examples() {
        let g = Group::new(6).unwrap();
        let r = registry(&g);
        let q1 = r.get("Q1").unwrap();
        assert!(q1.contains(&q("1/3")));
        assert!(!q1.contains(&q("1/2")));
        let qm = r.get("Qminus").unwrap();
        assert!(qm.contains(&q("1/6")));
        assert!(!qm.contains(&q("1")));
        assert!(!qm.contains(&q("-1")));
        let full = r.get("full").unwrap();
        assert!(full.contains(&q("-1000/7776")));
    }

    #[test]
    fn symmetric_and_consistent_enumeration() {
        for k in [6u64, 12, 8] {
            let g = Group::new(k).unwrap();
            let b = EnumBound::new(60, 2);
            let all = enumerate_zk(g.fact(), &b);
            for s in registry(&g).iter() {
                assert!(s.contains(&ZkRational::zero()));
                let listed = s.enumerate(&b);
                for x in &all {
                    assert_eq!(s.contains(x), s.contains(&-x), "{} at {x}", s.name());
                    assert_eq!(s.contains(x), listed.contains(x));
                }
            }
        }
    }

    #[test]
    fn hints() {
        let g = Group::new(6).unwrap();
        let r = registry(&g);
        assert_eq!(r.get("Qminus").unwrap().z0_hint(), Some(vec![-1, -1]));
        assert_eq!(
            r.get("Qminus").unwrap().strictness_hint(),
            Some((q("1/6"), vec![-2, -1]))
        );
        assert_eq!(
            r.get("Q2").unwrap().strictness_hint(),
            Some((q("1"), vec![0, 1]))
        );
        assert_eq!(r.get("full").unwrap().strictness_hint(), None);
    }
}
