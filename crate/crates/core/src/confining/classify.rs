use super::{verify_condition_a, CondAResult, ConfiningSubset, Domain};
use crate::error::{Error, Result};
use crate::group::Character;
use crate::structures::HypStructure;

/// The structure `[Q ∪ Z_ρ]` or evidence that `Q` is not confining for `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Structure(HypStructure),
    /// A condition (a) violation.
    Refuted(CondAResult),
    /// No violation inside the domain.
    Inconclusive {
        checked: usize,
    },
}

/// Classifies a registered subset against `ρ`. Equivalent characters give
/// the subset's model; any other character is refuted by a bounded search
/// for a condition (a) counterexample.
pub fn classify(q: &dyn ConfiningSubset, rho: &Character, dom: &Domain) -> Result<Classification> {
    let fact = q.group().fact();
    rho.check_dim(fact.n())?;
    let Some(expected) = q.expected_class() else {
        return Ok(Classification::Structure(HypStructure::lineal(rho)));
    };
    if rho.equivalent(&expected) {
        let model = q
            .model()
            .ok_or_else(|| Error::Unsupported(format!("{} has no model", q.name())))?;
        return Ok(Classification::Structure(HypStructure::quasi_parabolic(
            model, fact,
        )));
    }
    Ok(match verify_condition_a(q, rho, dom) {
        CondAResult::Pass { checked } => Classification::Inconclusive { checked },
        ce => Classification::Refuted(ce),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ZkRational;
    use crate::confining::registry;
    use crate::group::Group;
    use crate::structures::QpModel;

    #[test]
    fn examples() {
        let g = Group::new(6).unwrap();
        let r = registry(&g);
        let dom = Domain::new(100, 3, 4);
        let f = g.fact();
        let q1 = r.get("Q1").unwrap();
        assert_eq!(
            classify(q1.as_ref(), &Character::plus(2, 0), &dom).unwrap(),
            Classification::Structure(HypStructure::quasi_parabolic(QpModel::TreeI(0), f))
        );
        assert_eq!(
            classify(
                r.get("Qminus").unwrap().as_ref(),
                &Character::minus(f),
                &dom
            )
            .unwrap(),
            Classification::Structure(HypStructure::quasi_parabolic(QpModel::Plane, f))
        );
        let rho = Character::linear_int(&[3, 1]).unwrap();
        assert_eq!(
            classify(r.get("full").unwrap().as_ref(), &rho, &dom).unwrap(),
            Classification::Structure(HypStructure::lineal(&rho))
        );
        match classify(q1.as_ref(), &Character::plus(2, 1), &dom).unwrap() {
            Classification::Refuted(CondAResult::Counterexample { z, q, image }) => {
                assert_eq!(z, vec![-1, 0]);
                assert_eq!(q, ZkRational::one());
                assert_eq!(image, ZkRational::from_ratio(1, 2));
            }
            other => panic!("{other:?}"),
        }
        // Scaled characters are still recognized.
        let scaled = Character::linear_int(&[5, 0]).unwrap();
        assert!(matches!(
            classify(q1.as_ref(), &scaled, &dom).unwrap(),
            Classification::Structure(_)
        ));
    }
}
