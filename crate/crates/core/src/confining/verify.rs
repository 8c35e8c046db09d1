use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{ConfiningSubset, Domain, EnumBound};
use crate::arith::ZkRational;
use crate::error::{Error, Result};
use crate::group::{lattice_shells, scale, Character};

/// Upper limit on the word operations spent building a sumset for
/// condition (c).
pub const DEFAULT_SUMSET_BUDGET: u64 = 4_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "strict")]
    Strict,
}

/// Serializable verifier outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifierReport {
    pub subset: String,
    pub character: Value,
    pub condition: Condition,
    pub result: &'static str,
    pub witness: Value,
    pub domain: Value,
}

impl VerifierReport {
    pub fn passed(&self) -> bool {
        self.result == "pass"
    }
}

fn report(
    q: &dyn ConfiningSubset,
    rho: &Character,
    condition: Condition,
    pass: bool,
    witness: Value,
    domain: Value,
) -> VerifierReport {
    VerifierReport {
        subset: q.name(),
        character: rho.to_json(),
        condition,
        result: if pass { "pass" } else { "fail" },
        witness,
        domain,
    }
}

fn domain_json(d: &Domain) -> Value {
    json!({"num": d.bound.num, "exp": d.bound.exp, "z_box": d.z_box})
}

/// Outcome of checking `γ(z)(Q) ⊆ Q` for `ρ(z) >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondAResult {
    Pass {
        checked: usize,
    },
    Counterexample {
        z: Vec<i64>,
        q: ZkRational,
        image: ZkRational,
    },
}

impl CondAResult {
    pub fn is_pass(&self) -> bool {
        matches!(self, CondAResult::Pass { .. })
    }

    pub fn to_report(
        &self,
        q: &dyn ConfiningSubset,
        rho: &Character,
        dom: &Domain,
    ) -> VerifierReport {
        let witness = match self {
            CondAResult::Pass { checked } => json!({"checked": checked}),
            CondAResult::Counterexample { z, q, image } => {
                json!({"z": z, "q": q, "image": image})
            }
        };
        report(
            q,
            rho,
            Condition::A,
            self.is_pass(),
            witness,
            domain_json(dom),
        )
    }
}

/// Checks `γ(z)(q) ∈ Q` for every enumerated `q ∈ Q` and every `z` in the
/// box with `ρ(z) >= 0`. Iterates `q` in enumeration order and `z` by
/// shells; the first violation in that order is returned.
pub fn verify_condition_a(q: &dyn ConfiningSubset, rho: &Character, dom: &Domain) -> CondAResult {
    let group = q.group();
    let zs: Vec<(Vec<i64>, BigRational)> = lattice_shells(group.n(), dom.z_box)
        .into_iter()
        .filter(|z| rho.sign(z) != Ordering::Less)
        .map(|z| {
            let l = group.lambda(&z);
            (z, l)
        })
        .collect();
    let qs = q.enumerate(&dom.bound);
    let hit = qs.par_iter().find_map_first(|x| {
        zs.iter().find_map(|(z, l)| {
            let image = x.scale(l);
            (!q.contains(&image)).then(|| CondAResult::Counterexample {
                z: z.clone(),
                q: x.clone(),
                image,
            })
        })
    });
    hit.unwrap_or(CondAResult::Pass {
        checked: qs.len() * zs.len(),
    })
}

/// Searches `z = j·y` (`ρ(y) = C_ρ`, `j = 0..=search`) for `γ(z)(h) ∈ Q`.
pub fn verify_condition_b(
    q: &dyn ConfiningSubset,
    rho: &Character,
    h: &ZkRational,
    search: u32,
) -> Option<Vec<i64>> {
    verify_condition_b_along(q, h, &rho.y_dir(), search)
}

/// As [`verify_condition_b`] along an explicit ray direction.
pub fn verify_condition_b_along(
    q: &dyn ConfiningSubset,
    h: &ZkRational,
    dir: &[i64],
    search: u32,
) -> Option<Vec<i64>> {
    let group = q.group();
    (0..=search as i64)
        .map(|j| scale(dir, j))
        .find(|z| q.contains(&group.gamma_act(z, h)))
}

/// Outcome of condition (b) over a sample of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondBResult {
    Pass { samples: usize, max_steps: u32 },
    Counterexample { h: ZkRational, search: u32 },
}

impl CondBResult {
    pub fn is_pass(&self) -> bool {
        matches!(self, CondBResult::Pass { .. })
    }

    pub fn to_report(
        &self,
        q: &dyn ConfiningSubset,
        rho: &Character,
        dom: &Domain,
    ) -> VerifierReport {
        let witness = match self {
            CondBResult::Pass { samples, max_steps } => {
                json!({"samples": samples, "max_steps": max_steps})
            }
            CondBResult::Counterexample { h, search } => json!({"h": h, "search": search}),
        };
        report(
            q,
            rho,
            Condition::B,
            self.is_pass(),
            witness,
            domain_json(dom),
        )
    }
}

/// Runs [`verify_condition_b`] on every sample; the first `h` without a
/// witness is returned.
pub fn verify_condition_b_samples(
    q: &dyn ConfiningSubset,
    rho: &Character,
    hs: &[ZkRational],
    search: u32,
) -> CondBResult {
    let steps: Vec<Option<u32>> = hs
        .par_iter()
        .map(|h| {
            verify_condition_b(q, rho, h, search).map(|z| {
                let y = rho.y_dir();
                let i = y.iter().position(|&c| c != 0).expect("nonzero direction");
                (z[i] / y[i]) as u32
            })
        })
        .collect();
    match steps.iter().position(Option::is_none) {
        Some(i) => CondBResult::Counterexample {
            h: hs[i].clone(),
            search,
        },
        None => CondBResult::Pass {
            samples: hs.len(),
            max_steps: steps.into_iter().flatten().max().unwrap_or(0),
        },
    }
}

/// Outcome of checking `γ(z_0)(Q + Q) ⊆ Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondCResult {
    Pass {
        z0: Vec<i64>,
        sums_checked: usize,
        /// The subset is closed under addition, so no sums were enumerated.
        structural: bool,
    },
    Counterexample {
        z0: Vec<i64>,
        q1: ZkRational,
        q2: ZkRational,
        image: ZkRational,
    },
}

impl CondCResult {
    pub fn is_pass(&self) -> bool {
        matches!(self, CondCResult::Pass { .. })
    }

    pub fn z0(&self) -> &[i64] {
        match self {
            CondCResult::Pass { z0, .. } | CondCResult::Counterexample { z0, .. } => z0,
        }
    }

    pub fn to_report(
        &self,
        q: &dyn ConfiningSubset,
        rho: &Character,
        dom: &Domain,
    ) -> VerifierReport {
        let witness = match self {
            CondCResult::Pass {
                z0,
                sums_checked,
                structural,
            } => json!({"z0": z0, "sums_checked": sums_checked, "structural": structural}),
            CondCResult::Counterexample { z0, q1, q2, image } => {
                json!({"z0": z0, "q1": q1, "q2": q2, "image": image})
            }
        };
        report(
            q,
            rho,
            Condition::C,
            self.is_pass(),
            witness,
            domain_json(dom),
        )
    }
}

/// The enumerated members scaled to integers by a common denominator.
struct Scaled {
    den: BigInt,
    values: Vec<i64>,
    min: i64,
    bits: Vec<u64>,
}

impl Scaled {
    fn new(xs: &[ZkRational]) -> Result<Self> {
        let den = xs.iter().fold(BigInt::from(1), |l, x| l.lcm(x.denom()));
        let values = xs
            .iter()
            .map(|x| {
                (x.numer() * (&den / x.denom()))
                    .to_i64()
                    .filter(|v| v.unsigned_abs() < (1 << 60))
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::BoundExhausted("scaled members overflow 60 bits".into()))?;
        let min = *values.iter().min().unwrap_or(&0);
        let max = *values.iter().max().unwrap_or(&0);
        let mut bits = vec![0u64; ((max - min) as usize >> 6) + 1];
        for v in &values {
            let i = (v - min) as usize;
            bits[i >> 6] |= 1 << (i & 63);
        }
        Ok(Scaled {
            den,
            values,
            min,
            bits,
        })
    }

    fn contains(&self, v: i64) -> bool {
        let i = v - self.min;
        i >= 0
            && (i as usize >> 6) < self.bits.len()
            && self.bits[i as usize >> 6] >> (i & 63) & 1 == 1
    }

    /// Bitset of `A + A`, offset by `2·min`.
    fn sumset(&self, budget: u64) -> Result<Vec<u64>> {
        let words = self.bits.len();
        let cost = self.values.len() as u64 * words as u64;
        if cost > budget {
            return Err(Error::BoundExhausted(format!(
                "sumset needs {cost} word operations, budget is {budget}"
            )));
        }
        let mut out = vec![0u64; 2 * words + 1];
        for v in &self.values {
            let shift = (v - self.min) as usize;
            let (ws, bs) = (shift >> 6, shift & 63);
            for (i, &w) in self.bits.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                out[i + ws] |= w << bs;
                if bs > 0 {
                    out[i + ws + 1] |= w >> (64 - bs);
                }
            }
        }
        Ok(out)
    }
}

/// Validates `z0_hint`, then `j·y` for `j = 0..=search`, against every
/// pairwise sum of enumerated members. Errors with `BoundExhausted` when
/// the sumset exceeds `budget`.
pub fn verify_condition_c(
    q: &dyn ConfiningSubset,
    rho: &Character,
    bound: &EnumBound,
    search: u32,
    budget: u64,
) -> Result<CondCResult> {
    let group = q.group();
    let mut candidates: Vec<Vec<i64>> = q.z0_hint().into_iter().collect();
    let y = rho.y_dir();
    for j in 0..=search as i64 {
        let z = scale(&y, j);
        if !candidates.contains(&z) {
            candidates.push(z);
        }
    }
    if q.closed_under_addition() {
        if let Some(z0) = candidates.iter().find(|z| rho.sign(z) != Ordering::Less) {
            return Ok(CondCResult::Pass {
                z0: z0.clone(),
                sums_checked: 0,
                structural: true,
            });
        }
    }
    let xs = q.enumerate(bound);
    let scaled = Scaled::new(&xs)?;
    let sums = scaled.sumset(budget)?;
    let offset = 2 * scaled.min;
    let sum_values: Vec<i64> = sums
        .iter()
        .enumerate()
        .flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| (wi * 64 + b) as i64 + offset)
        })
        .collect();
    let mut first_failure = None;
    for z0 in &candidates {
        let l = group.lambda(z0) / BigRational::from_integer(scaled.den.clone());
        let bad = sum_values.par_iter().find_first(|&&s| {
            let x = ZkRational::from_big(BigRational::from_integer(s.into()) * &l);
            !q.contains(&x)
        });
        match bad {
            None => {
                return Ok(CondCResult::Pass {
                    z0: z0.clone(),
                    sums_checked: sum_values.len(),
                    structural: false,
                })
            }
            Some(&s) if first_failure.is_none() => {
                let (i, a) = scaled
                    .values
                    .iter()
                    .enumerate()
                    .find(|(_, &a)| scaled.contains(s - a))
                    .expect("s is a sum");
                let j = scaled
                    .values
                    .iter()
                    .position(|&b| b == s - a)
                    .expect("member");
                let image = ZkRational::from_big(BigRational::from_integer(s.into()) * &l);
                first_failure = Some(CondCResult::Counterexample {
                    z0: z0.clone(),
                    q1: xs[i].clone(),
                    q2: xs[j].clone(),
                    image,
                });
            }
            Some(_) => {}
        }
    }
    Ok(first_failure.expect("at least one candidate"))
}

/// A strictness witness or its absence within the search region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrictResult {
    Witness {
        q: ZkRational,
        z: Vec<i64>,
        image: ZkRational,
        from_hint: bool,
    },
    NoneFound,
}

impl StrictResult {
    pub fn is_witness(&self) -> bool {
        matches!(self, StrictResult::Witness { .. })
    }

    pub fn to_report(
        &self,
        q: &dyn ConfiningSubset,
        rho: &Character,
        dom: &Domain,
    ) -> VerifierReport {
        let witness = match self {
            StrictResult::Witness {
                q,
                z,
                image,
                from_hint,
            } => json!({"q": q, "z": z, "image": image, "from_hint": from_hint}),
            StrictResult::NoneFound => Value::Null,
        };
        report(
            q,
            rho,
            Condition::Strict,
            self.is_witness(),
            witness,
            domain_json(dom),
        )
    }
}

/// Finds `(q, z)` with `q ∈ Q`, `ρ(z) > 0` and `γ(z^{-1})(q) ∉ Q`, which
/// shows `γ(z)(Q) ⊊ Q`. The hint is tried first.
pub fn strictness_witness(q: &dyn ConfiningSubset, rho: &Character, dom: &Domain) -> StrictResult {
    let group = q.group();
    let check = |x: &ZkRational, z: &[i64]| -> Option<ZkRational> {
        if rho.sign(z) != Ordering::Greater || !q.contains(x) {
            return None;
        }
        let image = group.gamma_act(&scale(z, -1), x);
        (!q.contains(&image)).then_some(image)
    };
    if let Some((x, z)) = q.strictness_hint() {
        if let Some(image) = check(&x, &z) {
            return StrictResult::Witness {
                q: x,
                z,
                image,
                from_hint: true,
            };
        }
    }
    let zs: Vec<Vec<i64>> = lattice_shells(group.n(), dom.z_box)
        .into_iter()
        .filter(|z| rho.sign(z) == Ordering::Greater)
        .collect();
    for x in q.enumerate(&dom.bound) {
        for z in &zs {
            if let Some(image) = check(&x, z) {
                return StrictResult::Witness {
                    q: x,
                    z: z.clone(),
                    image,
                    from_hint: false,
                };
            }
        }
    }
    StrictResult::NoneFound
}
