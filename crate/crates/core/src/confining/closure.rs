use std::cmp::Ordering;

use super::{ConfiningSubset, SubsetRef};
use crate::arith::ZkRational;
use crate::error::{Error, Result};
use crate::group::{scale, Character, Group};
use crate::structures::QpModel;

/// `Q̄ = Q ∪ ⋃_{ρ(z) >= 0} γ(z)(S)` for a finite symmetric `S`.
#[derive(Clone, Debug)]
pub struct Closure {
    base: SubsetRef,
    extra: Vec<ZkRational>,
    rho: Character,
    attract: Vec<i64>,
}

impl Closure {
    pub fn extra(&self) -> &[ZkRational] {
        &self.extra
    }

    /// A `z` with `ρ(z) >= 0` and `γ(z)(S) ⊆ Q`, found when the closure was
    /// built.
    pub fn attracting_twist(&self) -> &[i64] {
        &self.attract
    }

    /// The unique `z` with `λ(z) = x`, if any.
    fn log_lambda(group: &Group, x: &ZkRational) -> Option<Vec<i64>> {
        let fact = group.fact();
        let mut z = Vec::with_capacity(group.n());
        for pp in fact.primes() {
            let v = x.valuation_at(pp.prime).finite()?;
            if v % pp.exp as i64 != 0 {
                return None;
            }
            z.push(v / pp.exp as i64);
        }
        let back = ZkRational::from_big(group.lambda(&z));
        (&back == x).then_some(z)
    }
}

impl ConfiningSubset for Closure {
    fn name(&self) -> String {
        format!("closure({})", self.base.name())
    }

    fn group(&self) -> &Group {
        self.base.group()
    }

    fn contains(&self, x: &ZkRational) -> bool {
        if self.base.contains(x) {
            return true;
        }
        let group = self.base.group();
        self.extra.iter().filter(|s| !s.is_zero()).any(|s| {
            let ratio = ZkRational::from_big(x.as_big() / s.as_big());
            Self::log_lambda(group, &ratio).is_some_and(|z| self.rho.sign(&z) != Ordering::Less)
        })
    }

    fn z0_hint(&self) -> Option<Vec<i64>> {
        self.base.z0_hint()
    }

    fn strictness_hint(&self) -> Option<(ZkRational, Vec<i64>)> {
        self.base.strictness_hint()
    }

    fn expected_class(&self) -> Option<Character> {
        Some(self.rho.clone())
    }

    fn model(&self) -> Option<QpModel> {
        self.base.model()
    }
}

/// Builds `Q̄` after checking that some `j·y` (`j <= search`) moves all of
/// `S` into `Q`. `S` is symmetrized.
pub fn closure_with(
    base: SubsetRef,
    s: &[ZkRational],
    rho: &Character,
    search: u32,
) -> Result<Closure> {
    let group = base.group().clone();
    rho.check_dim(group.n())?;
    let mut extra: Vec<ZkRational> = Vec::new();
    for x in s {
        group.validate(&group.from_r(x.clone()))?;
        for y in [x.clone(), -x] {
            if !extra.contains(&y) {
                extra.push(y);
            }
        }
    }
    let y = rho.y_dir();
    let attract = (0..=search as i64)
        .map(|j| scale(&y, j))
        .find(|z| extra.iter().all(|x| base.contains(&group.gamma_act(z, x))))
        .ok_or_else(|| {
            Error::BoundExhausted(format!(
                "no z = j*{y:?} with j <= {search} moves S into {}",
                base.name()
            ))
        })?;
    Ok(Closure {
        base,
        extra,
        rho: rho.clone(),
        attract,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confining::{registry, EnumBound};

    fn q(s: &str) -> ZkRational {
        s.parse().unwrap()
    }

    #[test]
    fn closure_of_q_minus() {
        let g = Group::new(6).unwrap();
        let r = registry(&g);
        let minus = Character::minus(g.fact());
        let c = closure_with(r.get("Qminus").unwrap(), &[q("1")], &minus, 5).unwrap();
        assert_eq!(c.attracting_twist(), &[0, -1]);
        // λ(z) = 3 would need ρ_-(z) = -log 3 < 0.
        assert!(!c.contains(&q("3")));
        assert!(c.contains(&q("1")));
        assert!(c.contains(&q("-1/2")));
        assert!(c.contains(&q("1/6")));
        assert!(!c.contains(&q("5/2")));
    }

    #[test]
    fn closure_contains_base_and_is_symmetric() {
        let g = Group::new(12).unwrap();
        let r = registry(&g);
        let plus = Character::plus(2, 0);
        let base = r.get("Q1").unwrap();
        let c = closure_with(base.clone(), &[q("1/2"), q("5/4")], &plus, 5).unwrap();
        for x in crate::confining::enumerate_zk(g.fact(), &EnumBound::new(30, 2)) {
            if base.contains(&x) {
                assert!(c.contains(&x));
            }
            assert_eq!(c.contains(&x), c.contains(&-&x));
        }
        assert!(c.contains(&q("1/2")));
        assert!(c.contains(&q("2")));
    }

    #[test]
    fn absorbed_when_s_inside_q() {
        let g = Group::new(6).unwrap();
        let r = registry(&g);
        let base = r.get("Q2").unwrap();
        let c = closure_with(base.clone(), &[q("1/2")], &Character::plus(2, 1), 3).unwrap();
        for x in crate::confining::enumerate_zk(g.fact(), &EnumBound::new(40, 2)) {
            assert_eq!(c.contains(&x), base.contains(&x));
        }
    }

    #[test]
    fn refuses_unreachable_sets() {
        let g = Group::new(6).unwrap();
        let r = registry(&g);
        let res = closure_with(
            r.get("Q1").unwrap(),
            &[q("1/2")],
            &Character::plus(2, 1),
            10,
        );
        assert!(matches!(res, Err(Error::BoundExhausted(_))));
    }
}
