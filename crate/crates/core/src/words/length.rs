use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::bfs::{word_length_bfs, Truncation};
use super::letter::WordContext;
use crate::arith::ZkRational;
use crate::confining::{ConfiningSubset, EnumBound};
use crate::error::{Error, Result};
use crate::group::{lattice_box, neg, sub, GroupElement};

/// Minimal number of `Q` members summing to an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdditiveLength {
    Finite(u64),
    /// The search stopped; the value is at least this.
    AtLeast(u64),
    Infinite,
}

impl AdditiveLength {
    pub fn finite(self) -> Option<u64> {
        match self {
            AdditiveLength::Finite(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for AdditiveLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdditiveLength::Finite(n) => write!(f, "{n}"),
            AdditiveLength::AtLeast(n) => write!(f, ">={n}"),
            AdditiveLength::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for AdditiveLength {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            AdditiveLength::Finite(n) => s.serialize_u64(*n),
            AdditiveLength::AtLeast(n) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("at_least", n)?;
                m.end()
            }
            AdditiveLength::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Enumeration bound and depth for subsets without a closed form.
pub const DEFAULT_ADDITIVE_BOUND: EnumBound = EnumBound { num: 200, exp: 3 };
pub const DEFAULT_ADDITIVE_DEPTH: u32 = 3;

/// `min s` with `h = q_1 + ... + q_s`, `q_j ∈ Q`. Uses the subset's closed
/// form when it has one, otherwise iterative deepening over members within
/// `bound`.
pub fn q_additive_length(
    h: &ZkRational,
    q: &dyn ConfiningSubset,
    bound: &EnumBound,
    depth: u32,
) -> AdditiveLength {
    if let Some(l) = q.additive_length(h) {
        return l;
    }
    if h.is_zero() {
        return AdditiveLength::Finite(0);
    }
    if q.contains(h) {
        return AdditiveLength::Finite(1);
    }
    let members: Vec<ZkRational> = q
        .enumerate(bound)
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    fn reach(h: &ZkRational, q: &dyn ConfiningSubset, members: &[ZkRational], left: u32) -> bool {
        if left == 1 {
            return q.contains(h);
        }
        members
            .iter()
            .any(|m| reach(&(h - m), q, members, left - 1))
    }
    for s in 2..=depth {
        if reach(h, q, &members, s) {
            return AdditiveLength::Finite(s as u64);
        }
    }
    AdditiveLength::AtLeast(depth.max(1) as u64 + 1)
}

/// Decomposes `h` into `floor(|h|) + 1` members of `{|x| < 1}`: `floor(|h|)`
/// copies of `1 - k^{-e}` and one remainder.
pub fn unit_ball_split(h: &ZkRational, k: u64) -> Vec<ZkRational> {
    if h.is_zero() {
        return Vec::new();
    }
    let a = h.abs();
    let f = a.abs_floor();
    let frac = &a - &ZkRational::from_big(num_rational::BigRational::from_integer(f.clone()));
    let one = ZkRational::one();
    let gap = &one - &frac;
    let fv = ZkRational::from_big(num_rational::BigRational::from_integer(f.clone()));
    let mut e = 0u32;
    let mut eps = one.clone();
    // Need f·k^{-e} < 1 - frac.
    while f != 0.into() && (&fv * &eps).as_big() >= gap.as_big() {
        e += 1;
        eps = ZkRational::new(1.into(), num_bigint::BigInt::from(k).pow(e)).expect("nonzero");
    }
    let piece = &one - &eps;
    let count: usize = num_traits::ToPrimitive::to_usize(&f).expect("small");
    let mut out = vec![piece.clone(); count];
    let rem = &a - &(&fv * &piece);
    if !rem.is_zero() || out.is_empty() {
        out.push(rem);
    }
    if h.signum() < 0 {
        out = out.iter().map(|x| -x).collect();
    }
    out
}

/// Result of minimizing over `τ`-forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauLength {
    pub length: u64,
    pub z_minus: Vec<i64>,
    pub z_plus: Vec<i64>,
    /// `z_-` ranged over `[-lattice_bound, lattice_bound]^n`.
    pub lattice_bound: i64,
}

/// `min ‖z_-‖ + |γ(-z_-)(r)|_Q + ‖z_+‖` over splits `z = z_- + z_+` with
/// `z_- = 0` or `ρ(z_-) < 0`, and `ρ(z_+) >= 0`. Ties go to the `z_-` of
/// least `ℓ¹` norm, then the lexicographically first.
pub fn word_length_tau(
    g: &GroupElement,
    ctx: &WordContext,
    lattice_bound: i64,
) -> Result<TauLength> {
    let group = ctx.group();
    group.validate(g)?;
    let n = group.n();
    let mut best: Option<TauLength> = None;
    for zm in lattice_box(n, lattice_bound) {
        let zero = zm.iter().all(|c| *c == 0);
        if !zero && ctx.rho.sign(&zm) != Ordering::Less {
            continue;
        }
        let zp = sub(&g.z, &zm);
        if ctx.rho.sign(&zp) == Ordering::Less {
            continue;
        }
        let lz = (ctx.rho.zrho_length(&zm) + ctx.rho.zrho_length(&zp)) as u64;
        if best.as_ref().is_some_and(|b| lz > b.length) {
            continue;
        }
        let h = group.gamma_act(&neg(&zm), &g.r);
        let Some(lq) = q_additive_length(
            &h,
            ctx.q.as_ref(),
            &DEFAULT_ADDITIVE_BOUND,
            DEFAULT_ADDITIVE_DEPTH,
        )
        .finite() else {
            continue;
        };
        let total = lz + lq;
        let norm = |v: &[i64]| v.iter().map(|c| c.unsigned_abs()).sum::<u64>();
        if best
            .as_ref()
            .is_none_or(|b| (total, norm(&zm)) < (b.length, norm(&b.z_minus)))
        {
            best = Some(TauLength {
                length: total,
                z_minus: zm,
                z_plus: zp,
                lattice_bound,
            });
        }
    }
    best.ok_or_else(|| {
        Error::BoundExhausted(format!(
            "no finite decomposition of {g} with |z_-| <= {lattice_bound}"
        ))
    })
}

/// The geodesic control constant and the length it was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct K0Bound {
    pub ell0: u64,
    pub k0: u64,
}

/// `k_0 = ceil(2 κ ℓ_0) + 2` with `κ = 4 log2(ℓ_0 + 2)` and `ℓ_0` the word
/// length of `z_0`.
pub fn k0_from_ell0(ell0: u64) -> u64 {
    let x = 8.0 * ell0 as f64 * ((ell0 + 2) as f64).log2();
    let r = x.round();
    let c = if (x - r).abs() < 1e-9 { r } else { x.ceil() };
    c as u64 + 2
}

pub fn k0_bound(ctx: &WordContext, z0: &[i64]) -> Result<K0Bound> {
    let group = ctx.group();
    group.check_dim(z0)?;
    let expect = ctx.rho.zrho_length(z0) as u32;
    let t = Truncation::new(
        1,
        3,
        z0.iter().map(|c| c.abs()).max().unwrap_or(0).max(1),
        expect + 2,
    );
    let b = word_length_bfs(&group.from_z(z0.to_vec()), ctx, &t, false)?;
    let ell0 = b
        .length
        .ok_or_else(|| Error::BoundExhausted(format!("word length of z0 = {z0:?}")))?
        as u64;
    Ok(K0Bound {
        ell0,
        k0: k0_from_ell0(ell0),
    })
}

/// `2((i - 1)ρ(z) - k_0 ρ(z_0))/C_ρ + 1`.
pub fn focal_lower_bound(ctx: &WordContext, z: &[i64], i: u64, z0: &[i64], k0: u64) -> Result<f64> {
    let group = ctx.group();
    group.check_dim(z)?;
    group.check_dim(z0)?;
    if ctx.rho.sign(z) != Ordering::Greater {
        return Err(Error::InvalidInput(format!("ρ({z:?}) must be positive")));
    }
    let c = ctx.rho.c_rho_f64();
    let rz = ctx.rho.eval_f64(z);
    let rz0 = ctx.rho.eval_f64(z0);
    Ok(2.0 * ((i as f64 - 1.0) * rz - k0 as f64 * rz0) / c + 1.0)
}
