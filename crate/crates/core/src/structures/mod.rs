//! The poset `H(G_k)` of hyperbolic structures and the BNS invariant.

mod export;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::KFactorization;
use crate::error::{Error, Result};
use crate::group::{Character, CharacterClass};

pub use export::{export_poset, PosetFormat};

/// The space a quasi-parabolic structure acts on. Tree indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QpModel {
    TreeI(usize),
    Plane,
}

impl QpModel {
    /// `[ρ_i^+]` for the tree `T_i`, `[ρ_-]` for the plane.
    pub fn busemann_class(&self, fact: &KFactorization) -> CharacterClass {
        match self {
            QpModel::TreeI(i) => Character::plus(fact.n(), *i).class(),
            QpModel::Plane => Character::minus(fact).class(),
        }
    }

    pub fn id(&self) -> String {
        match self {
            QpModel::TreeI(i) => format!("qp:tree:{}", i + 1),
            QpModel::Plane => "qp:plane".into(),
        }
    }
}

impl fmt::Display for QpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QpModel::TreeI(i) => write!(f, "T_{}", i + 1),
            QpModel::Plane => f.write_str("H^2"),
        }
    }
}

/// An element of `H(G_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HypStructure {
    Elliptic,
    Lineal(CharacterClass),
    QuasiParabolic {
        model: QpModel,
        busemann: CharacterClass,
    },
}

/// Result of comparing two structures under domination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PosetOrdering {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl PosetOrdering {
    pub fn reverse(self) -> Self {
        match self {
            PosetOrdering::Less => PosetOrdering::Greater,
            PosetOrdering::Greater => PosetOrdering::Less,
            o => o,
        }
    }
}

impl From<Ordering> for PosetOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => PosetOrdering::Less,
            Ordering::Equal => PosetOrdering::Equal,
            Ordering::Greater => PosetOrdering::Greater,
        }
    }
}

impl HypStructure {
    pub fn lineal(rho: &Character) -> Self {
        HypStructure::Lineal(rho.class())
    }

    pub fn quasi_parabolic(model: QpModel, fact: &KFactorization) -> Self {
        HypStructure::QuasiParabolic {
            model,
            busemann: model.busemann_class(fact),
        }
    }

    pub fn busemann_class(&self) -> Option<&CharacterClass> {
        match self {
            HypStructure::Elliptic => None,
            HypStructure::Lineal(c) => Some(c),
            HypStructure::QuasiParabolic { busemann, .. } => Some(busemann),
        }
    }

    pub fn is_quasi_parabolic(&self) -> bool {
        matches!(self, HypStructure::QuasiParabolic { .. })
    }

    /// Node name used in exported diagrams.
    pub fn id(&self) -> String {
        match self {
            HypStructure::Elliptic => "elliptic".into(),
            HypStructure::Lineal(c) => format!("lineal:{}", c.label()),
            HypStructure::QuasiParabolic { model, .. } => model.id(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            HypStructure::Elliptic => json!({"kind": "elliptic"}),
            HypStructure::Lineal(c) => json!({"kind": "lineal", "class": c.to_json()}),
            HypStructure::QuasiParabolic { model, busemann } => json!({
                "kind": "quasi_parabolic",
                "model": model.id(),
                "busemann_class": busemann.to_json(),
            }),
        }
    }
}

impl fmt::Display for HypStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Elliptic, the quasi-parabolic structures, then the `n+1` distinguished
/// lineal classes.
pub fn all_canonical_structures(fact: &KFactorization) -> Vec<HypStructure> {
    let mut out = vec![HypStructure::Elliptic];
    let models: Vec<QpModel> = (0..fact.n())
        .map(QpModel::TreeI)
        .chain([QpModel::Plane])
        .collect();
    out.extend(
        models
            .iter()
            .map(|m| HypStructure::quasi_parabolic(*m, fact)),
    );
    out.extend(
        models
            .iter()
            .map(|m| HypStructure::Lineal(m.busemann_class(fact))),
    );
    out
}

/// Domination order: elliptic at the bottom, lineal classes pairwise
/// incomparable, each quasi-parabolic above exactly its Busemann class.
pub fn compare(a: &HypStructure, b: &HypStructure) -> PosetOrdering {
    use HypStructure::*;
    match (a, b) {
        (Elliptic, Elliptic) => PosetOrdering::Equal,
        (Elliptic, _) => PosetOrdering::Less,
        (_, Elliptic) => PosetOrdering::Greater,
        (Lineal(x), Lineal(y)) => {
            if x == y {
                PosetOrdering::Equal
            } else {
                PosetOrdering::Incomparable
            }
        }
        (Lineal(c), QuasiParabolic { busemann, .. }) => {
            if c == busemann {
                PosetOrdering::Less
            } else {
                PosetOrdering::Incomparable
            }
        }
        (QuasiParabolic { .. }, Lineal(_)) => compare(b, a).reverse(),
        (QuasiParabolic { model: m1, .. }, QuasiParabolic { model: m2, .. }) => {
            if m1 == m2 {
                PosetOrdering::Equal
            } else {
                PosetOrdering::Incomparable
            }
        }
    }
}

/// The classes `[ρ_1^+], ..., [ρ_n^+]` missing from the BNS invariant.
pub fn bns_complement(fact: &KFactorization) -> Vec<CharacterClass> {
    (0..fact.n())
        .map(|i| Character::plus(fact.n(), i).class())
        .collect()
}

pub fn in_bns(chi: &Character, fact: &KFactorization) -> Result<bool> {
    chi.check_dim(fact.n())?;
    let c = chi.class();
    if let CharacterClass::Linear(v) = &c {
        if v.iter().all(|x| x == &0.into()) {
            return Err(Error::InvalidCharacter("zero character".into()));
        }
    }
    Ok(!bns_complement(fact).contains(&c))
}
