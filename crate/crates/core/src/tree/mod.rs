//! The Bass–Serre tree `T_i`: vertices are classes `(x, h)` with
//! `(x, h) ~ (y, h)` iff `v_p(x - y) >= m h` for `p^m = p_i^{m_i}`.

mod window;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{Valuation, ZkRational};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};

pub use window::{bfs_distance, TreeWindow};

/// A vertex in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    x: ZkRational,
    h: i64,
}

impl TreeVertex {
    pub fn x(&self) -> &ZkRational {
        &self.x
    }

    pub fn h(&self) -> i64 {
        self.h
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ElementType {
    Elliptic,
    Loxodromic { translation_length: u64 },
}

impl ElementType {
    pub fn translation_length(&self) -> u64 {
        match self {
            ElementType::Elliptic => 0,
            ElementType::Loxodromic { translation_length } => *translation_length,
        }
    }
}

/// The tree `T_i` for one prime of `k`. `i` is 0-based.
#[derive(Clone, Debug)]
pub struct Tree {
    group: Group,
    i: usize,
    p: u64,
    m: u32,
}

impl Tree {
    pub fn new(group: Group, i: usize) -> Result<Self> {
        let pp = *group.fact().primes().get(i).ok_or_else(|| Error::Unknown {
            kind: "tree index",
            name: (i + 1).to_string(),
        })?;
        Ok(Tree {
            group,
            i,
            p: pp.prime,
            m: pp.exp,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn index(&self) -> usize {
        self.i
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.m
    }

    fn val(&self, x: &ZkRational) -> Valuation {
        x.valuation_at(self.p)
    }

    /// The canonical representative of the class of `(x, h)`.
    pub fn vertex(&self, x: ZkRational, h: i64) -> TreeVertex {
        let bound = self.m as i64 * h;
        let v = match self.val(&x) {
            Valuation::Infinite => return TreeVertex { x, h },
            Valuation::Finite(v) if v >= bound => {
                return TreeVertex {
                    x: ZkRational::zero(),
                    h,
                }
            }
            Valuation::Finite(v) => v,
        };
        let p = BigInt::from(self.p);
        let pv = pow_rational(&p, v);
        // x = p^v · a/b with p ∤ ab.
        let unit = x.as_big() / &pv;
        let modulus = p.pow((bound - v) as u32);
        let inv = mod_inverse(unit.denom(), &modulus);
        let c = (unit.numer() * inv).mod_floor(&modulus);
        TreeVertex {
            x: ZkRational::from_big(pv * BigRational::from_integer(c)),
            h,
        }
    }

    pub fn parse_vertex(&self, v: &Value) -> Result<TreeVertex> {
        let x: ZkRational = v
            .get("x")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("vertex needs a string \"x\": {v}")))?
            .parse()?;
        let x = x.checked(self.group.fact())?;
        let h = v
            .get("h")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse(format!("vertex needs an integer \"h\": {v}")))?;
        if let Some(t) = v.get("tree") {
            if t.as_u64() != Some(self.i as u64 + 1) {
                return Err(Error::InvalidInput(format!(
                    "vertex belongs to tree {t}, not {}",
                    self.i + 1
                )));
            }
        }
        Ok(self.vertex(x, h))
    }

    pub fn vertex_json(&self, v: &TreeVertex) -> Value {
        json!({"x": v.x.to_string(), "h": v.h, "tree": self.i + 1})
    }

    /// `(r, z)·(x, h) = (λ(z) x + r, h + z_i)`.
    pub fn act(&self, g: &GroupElement, v: &TreeVertex) -> TreeVertex {
        let x = &self.group.gamma_act(&g.z, &v.x) + &g.r;
        self.vertex(x, v.h + g.z[self.i])
    }

    /// Height of the meet of `u` and `v`.
    fn meet(&self, u: &TreeVertex, v: &TreeVertex) -> i64 {
        let lo = u.h.min(v.h);
        match self.val(&(&u.x - &v.x)) {
            Valuation::Infinite => lo,
            Valuation::Finite(d) => lo.min(d.div_euclid(self.m as i64)),
        }
    }

    pub fn distance(&self, u: &TreeVertex, v: &TreeVertex) -> u64 {
        let l = self.meet(u, v);
        ((u.h - l) + (v.h - l)) as u64
    }

    pub fn element_type(&self, g: &GroupElement) -> ElementType {
        match g.z[self.i].unsigned_abs() {
            0 => ElementType::Elliptic,
            t => ElementType::Loxodromic {
                translation_length: t,
            },
        }
    }

    pub fn translation_length(&self, g: &GroupElement) -> u64 {
        self.element_type(g).translation_length()
    }

    /// `d(v, g^n v) / n` at the base vertex.
    pub fn orbit_rate(&self, g: &GroupElement, n: u32) -> f64 {
        let v0 = self.base();
        let mut v = v0.clone();
        for _ in 0..n {
            v = self.act(g, &v);
        }
        self.distance(&v0, &v) as f64 / n as f64
    }

    /// `(0, 0)`.
    pub fn base(&self) -> TreeVertex {
        self.vertex(ZkRational::zero(), 0)
    }

    /// Busemann value toward the end `h → -∞` from the base vertex.
    pub fn busemann_tree(&self, g: &GroupElement) -> i64 {
        g.z[self.i]
    }

    /// `d(g·x, x_depth) - d(x, x_depth)` with `x = (0, 0)` and
    /// `x_depth = (0, -depth)`.
    pub fn busemann_estimate(&self, g: &GroupElement, depth: u64) -> i64 {
        let x = self.base();
        let xn = self.vertex(ZkRational::zero(), -(depth as i64));
        self.distance(&self.act(g, &x), &xn) as i64 - self.distance(&x, &xn) as i64
    }

    /// A depth beyond which [`Tree::busemann_estimate`] equals the exact value.
    pub fn busemann_threshold(&self, g: &GroupElement) -> u64 {
        let v = match self.val(&g.r) {
            Valuation::Infinite => 0,
            Valuation::Finite(v) => v.div_euclid(self.m as i64),
        };
        (-g.z[self.i]).max(-v).max(0) as u64
    }

    pub fn stabilizes(&self, g: &GroupElement, v: &TreeVertex) -> bool {
        &self.act(g, v) == v
    }
}

fn pow_rational(p: &BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(p.pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), p.pow((-e) as u32))
    }
}

/// Inverse of `b` modulo `m` for `gcd(b, m) = 1`.
fn mod_inverse(b: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = b.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    let x = e.x.mod_floor(m);
    if x.is_negative() {
        x + m
    } else {
        x
    }
}
