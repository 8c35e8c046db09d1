//! Registry of orbit models used for four-point `δ` estimates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::confining::{sample_zk, EnumBound};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::numeric;
use crate::plane::Plane;
use crate::tree::Tree;
use crate::words::four_point_delta_sampled;

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub model: String,
    pub points: usize,
    pub samples: usize,
    pub delta: f64,
}

/// A space with a `G_k` action and a base point.
pub trait OrbitModel: Send + Sync {
    fn name(&self) -> &'static str;

    /// Sampled four-point `δ` over the orbit of the base point under
    /// `points` random elements.
    fn delta(
        &self,
        group: &Group,
        points: usize,
        samples: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<DeltaReport>;
}

const ORBIT_BOUND: EnumBound = EnumBound { num: 50, exp: 2 };
const ORBIT_BOX: i64 = 3;

fn random_elements(group: &Group, count: usize, rng: &mut ChaCha8Rng) -> Vec<GroupElement> {
    let rs = sample_zk(rng, group.fact(), &ORBIT_BOUND, count);
    rs.into_iter()
        .map(|r| {
            let z = (0..group.n())
                .map(|_| rng.gen_range(-ORBIT_BOX..=ORBIT_BOX))
                .collect();
            GroupElement::new(r, z)
        })
        .collect()
}

struct TreeModel;

impl OrbitModel for TreeModel {
    fn name(&self) -> &'static str {
        "tree"
    }

    fn delta(
        &self,
        group: &Group,
        points: usize,
        samples: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<DeltaReport> {
        let tree = Tree::new(group.clone(), 0)?;
        let base = tree.base();
        let orbit: Vec<_> = random_elements(group, points, rng)
            .iter()
            .map(|g| tree.act(g, &base))
            .collect();
        let delta =
            four_point_delta_sampled(&orbit, |u, v| tree.distance(u, v) as f64, rng, samples)?;
        Ok(DeltaReport {
            model: self.name().into(),
            points,
            samples,
            delta,
        })
    }
}

struct PlaneModel;

impl OrbitModel for PlaneModel {
    fn name(&self) -> &'static str {
        "plane"
    }

    fn delta(
        &self,
        group: &Group,
        points: usize,
        samples: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<DeltaReport> {
        let plane = Plane::new(group.clone(), numeric::DEFAULT_DIGITS)?;
        let base = plane.base();
        let orbit: Vec<_> = random_elements(group, points, rng)
            .iter()
            .map(|g| plane.act(g, &base))
            .collect();
        let dist =
            |u: &_, v: &_| numeric::to_f64(&plane.distance(u, v).expect("orbit points are valid"));
        let delta = four_point_delta_sampled(&orbit, dist, rng, samples)?;
        Ok(DeltaReport {
            model: self.name().into(),
            points,
            samples,
            delta,
        })
    }
}

pub fn orbit_models() -> Vec<Box<dyn OrbitModel>> {
    vec![Box::new(TreeModel), Box::new(PlaneModel)]
}

pub fn orbit_model(name: &str) -> Result<Box<dyn OrbitModel>> {
    orbit_models()
        .into_iter()
        .find(|m| m.name() == name)
        .ok_or_else(|| Error::Unknown {
            kind: "model",
            name: name.into(),
        })
}
