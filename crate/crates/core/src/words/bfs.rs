use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::letter::WordContext;
use super::short;
use crate::arith::{den_exponent, ZkRational};
use crate::confining::EnumBound;
use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Finite part of the generating set used by the search oracle, and the
/// search depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    /// `Q` letters have denominators dividing `k^q_exp`.
    pub q_exp: u32,
    /// `Q` letters have numerators of magnitude at most `q_num`.
    pub q_num: u64,
    /// `Z_ρ` letters have coordinates in `[-z_box, z_box]`.
    pub z_box: i64,
    pub depth: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            q_exp: 3,
            q_num: 500,
            z_box: 4,
            depth: 6,
        }
    }
}

impl Truncation {
    pub fn new(q_exp: u32, q_num: u64, z_box: i64, depth: u32) -> Self {
        Truncation {
            q_exp,
            q_num,
            z_box,
            depth,
        }
    }

    /// Twice the generator bounds at the same depth.
    pub fn doubled(&self) -> Self {
        Truncation {
            q_exp: self.q_exp * 2,
            q_num: self.q_num * 2,
            z_box: self.z_box * 2,
            depth: self.depth,
        }
    }
}

const Z_BITS: u32 = 16;
const Z_OFFSET: i64 = 1 << (Z_BITS - 1);

/// A group element as `(num, e, z)` with `r = num / k^e` in lowest terms
/// (`e = 0` or `k ∤ num`) and `z` packed into a machine word.
type State = (i128, u8, u64);

#[derive(Clone, Debug)]
enum Gen {
    /// `r` is shifted by `λ(z)·a / k^q_exp`.
    Q(i128),
    Z(Vec<i64>),
}

/// Breadth-first search in the Cayley graph over a truncated generating
/// set, on a compact encoding of group elements.
pub(crate) struct Engine<'a> {
    ctx: &'a WordContext,
    gens: Vec<Gen>,
    q_exp: u32,
    k: i128,
    /// `k^j` for `j < 128` while it fits.
    pow_k: Vec<i128>,
    /// `z ↦ (L, s)` with `λ(z) = L / k^s`.
    factor_cache: HashMap<u64, (i128, u32)>,
}

impl<'a> Engine<'a> {
    /// `reach` bounds `max |z_i|` of every state visited.
    pub(crate) fn new(ctx: &'a WordContext, t: &Truncation, reach: i64) -> Result<Self> {
        let n = ctx.group().n();
        if n * Z_BITS as usize > 64 {
            return Err(Error::Unsupported(format!("search needs n <= 4, got {n}")));
        }
        if reach >= Z_OFFSET {
            return Err(Error::BoundExhausted(format!(
                "lattice reach {reach} too large"
            )));
        }
        let fact = ctx.group().fact();
        let k = BigInt::from(fact.k());
        let dk = k.pow(t.q_exp);
        let mut gens = Vec::new();
        for x in ctx.q.enumerate(&EnumBound::new(t.q_num, t.q_exp)) {
            if x.is_zero() {
                continue;
            }
            let v = (x.as_big() * BigRational::from_integer(dk.clone())).to_integer();
            gens.push(Gen::Q(v.to_i128().ok_or_else(overflow)?));
        }
        for z in ctx.rho.zrho_box(t.z_box) {
            gens.push(Gen::Z(z));
        }
        let kk = fact.k() as i128;
        let mut pow_k = vec![1i128];
        while let Some(next) = pow_k.last().unwrap().checked_mul(kk) {
            pow_k.push(next);
        }
        Ok(Engine {
            ctx,
            gens,
            q_exp: t.q_exp,
            k: kk,
            pow_k,
            factor_cache: HashMap::new(),
        })
    }

    fn pack(z: &[i64]) -> u64 {
        z.iter().enumerate().fold(0u64, |acc, (i, &c)| {
            acc | (((c + Z_OFFSET) as u64) << (Z_BITS * i as u32))
        })
    }

    fn unpack(&self, key: u64) -> Vec<i64> {
        (0..self.ctx.group().n())
            .map(|i| ((key >> (Z_BITS * i as u32)) & ((1 << Z_BITS) - 1)) as i64 - Z_OFFSET)
            .collect()
    }

    fn pow(&self, e: u32) -> Result<i128> {
        self.pow_k.get(e as usize).copied().ok_or_else(overflow)
    }

    /// Reduces `num / k^e` to lowest terms.
    fn reduce(&self, mut num: i128, mut e: u32) -> Result<(i128, u8)> {
        if num == 0 {
            return Ok((0, 0));
        }
        while e > 0 && num % self.k == 0 {
            num /= self.k;
            e -= 1;
        }
        Ok((num, u8::try_from(e).map_err(|_| overflow())?))
    }

    pub(crate) fn encode(&self, g: &GroupElement) -> Result<State> {
        let e = den_exponent(&g.r, self.ctx.group().fact())
            .ok_or_else(|| Error::NotInZk(g.r.to_string()))?;
        let k = BigInt::from(self.ctx.group().k());
        let num = (g.r.as_big() * BigRational::from_integer(k.pow(e))).to_integer();
        let (num, e) = self.reduce(num.to_i128().ok_or_else(overflow)?, e)?;
        Ok((num, e, Self::pack(&g.z)))
    }

    pub(crate) fn decode(&self, s: &State) -> GroupElement {
        let k = BigInt::from(self.ctx.group().k());
        let r = BigRational::new(BigInt::from(s.0), k.pow(s.1 as u32));
        GroupElement::new(ZkRational::from_big(r), self.unpack(s.2))
    }

    /// `(L, s)` with `λ(z) = L / k^s` and `L` an integer.
    fn factor(&mut self, key: u64) -> Result<(i128, u32)> {
        if let Some(f) = self.factor_cache.get(&key) {
            return Ok(*f);
        }
        let z = self.unpack(key);
        let s = z.iter().map(|c| (-c).max(0)).max().unwrap_or(0) as u32;
        let k = BigInt::from(self.ctx.group().k());
        let v = self.ctx.group().lambda(&z) * BigRational::from_integer(k.pow(s));
        debug_assert!(v.is_integer());
        let f = (v.to_integer().to_i128().ok_or_else(overflow)?, s);
        self.factor_cache.insert(key, f);
        Ok(f)
    }

    /// `num1 / k^e1 + num2 / k^e2` in lowest terms.
    fn add(&self, num1: i128, e1: u32, num2: i128, e2: u32) -> Result<(i128, u8)> {
        let e = e1.max(e2);
        let a = num1.checked_mul(self.pow(e - e1)?).ok_or_else(overflow)?;
        let b = num2.checked_mul(self.pow(e - e2)?).ok_or_else(overflow)?;
        self.reduce(a.checked_add(b).ok_or_else(overflow)?, e)
    }

    fn neighbours(&mut self, s: &State, out: &mut Vec<State>) -> Result<()> {
        out.clear();
        let (l, sh) = self.factor(s.2)?;
        for gi in 0..self.gens.len() {
            match &self.gens[gi] {
                Gen::Q(a) => {
                    let term = l.checked_mul(*a).ok_or_else(overflow)?;
                    let (num, e) = self.add(s.0, s.1 as u32, term, sh + self.q_exp)?;
                    out.push((num, e, s.2));
                }
                Gen::Z(dz) => {
                    let mut z = self.unpack(s.2);
                    for (c, d) in z.iter_mut().zip(dz) {
                        *c += d;
                        if c.abs() >= Z_OFFSET {
                            return Err(overflow());
                        }
                    }
                    out.push((s.0, s.1, Self::pack(&z)));
                }
            }
        }
        Ok(())
    }

    fn identity(&self) -> State {
        (0, 0, Self::pack(&vec![0; self.ctx.group().n()]))
    }

    /// All states within `radius` of the identity, with their distances.
    pub(crate) fn ball(&mut self, radius: u32) -> Result<HashMap<State, u32>> {
        let start = self.identity();
        let mut dist = HashMap::from([(start, 0u32)]);
        let mut frontier = vec![start];
        let mut buf = Vec::new();
        for d in 1..=radius {
            let mut next = Vec::new();
            for s in &frontier {
                self.neighbours(s, &mut buf)?;
                for t in buf.drain(..) {
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(t) {
                        e.insert(d);
                        next.push(t);
                    }
                }
            }
            frontier = next;
        }
        Ok(dist)
    }

    /// Bidirectional search from the identity and from `target`. Returns
    /// the distance if it is at most `depth`.
    pub(crate) fn distance(&mut self, target: &GroupElement, depth: u32) -> Result<Option<u32>> {
        let start = self.identity();
        let goal = self.encode(target)?;
        if start == goal {
            return Ok(Some(0));
        }
        let mut seen = [
            HashMap::from([(start, 0u32)]),
            HashMap::from([(goal, 0u32)]),
        ];
        let mut frontier = [vec![start], vec![goal]];
        let mut radius = [0u32, 0u32];
        let mut buf = Vec::new();
        while radius[0] + radius[1] < depth {
            let side = usize::from(frontier[1].len() < frontier[0].len());
            if frontier[side].is_empty() {
                return Ok(None);
            }
            radius[side] += 1;
            let mut next = Vec::new();
            let mut best: Option<u32> = None;
            for s in std::mem::take(&mut frontier[side]) {
                self.neighbours(&s, &mut buf)?;
                for t in buf.drain(..) {
                    if seen[side].contains_key(&t) {
                        continue;
                    }
                    seen[side].insert(t, radius[side]);
                    if let Some(&o) = seen[1 - side].get(&t) {
                        let total = radius[side] + o;
                        best = Some(best.map_or(total, |b| b.min(total)));
                    }
                    next.push(t);
                }
            }
            if let Some(b) = best {
                return Ok((b <= depth).then_some(b));
            }
            frontier[side] = next;
        }
        Ok(None)
    }
}

fn overflow() -> Error {
    Error::BoundExhausted("search state exceeds 128-bit range".into())
}

/// Outcome of the search oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BfsLength {
    /// Distance over the truncated generators, if within depth.
    pub length: Option<u32>,
    /// Lower bound on the truncated distance when the depth ran out.
    pub lower_bound: u32,
    pub certified: bool,
    pub truncation: Truncation,
}

pub(crate) fn reach_for(target: &GroupElement, t: &Truncation) -> i64 {
    target.z.iter().map(|c| c.abs()).max().unwrap_or(0) + t.z_box * t.depth as i64
}

/// Exact distance in the Cayley graph over the truncated generating set.
/// The value is certified when it is below the depth, doubling the
/// generator bounds finds nothing shorter, and the exact test for lengths
/// up to 2 agrees.
pub fn word_length_bfs(
    g: &GroupElement,
    ctx: &WordContext,
    t: &Truncation,
    certify: bool,
) -> Result<BfsLength> {
    ctx.group().validate(g)?;
    let mut eng = Engine::new(ctx, t, reach_for(g, t))?;
    let length = eng.distance(g, t.depth)?;
    let Some(l) = length else {
        return Ok(BfsLength {
            length: None,
            lower_bound: t.depth + 1,
            certified: false,
            truncation: *t,
        });
    };
    let mut certified = false;
    if certify && l < t.depth {
        let d = t.doubled();
        let shorter = if l == 0 {
            None
        } else {
            let mut eng2 = Engine::new(ctx, &d, reach_for(g, &d))?;
            eng2.distance(g, l - 1)?
        };
        certified = shorter.is_none() && short::consistent(short::short_length(g, ctx), l);
    }
    Ok(BfsLength {
        length,
        lower_bound: l,
        certified,
        truncation: *t,
    })
}

/// Elements within `radius` of the identity over `t`, with distances.
/// Each entry also records whether it is certified as in [`word_length_bfs`].
pub fn bfs_ball(
    ctx: &WordContext,
    t: &Truncation,
    radius: u32,
) -> Result<Vec<(GroupElement, u32, bool)>> {
    let reach = t.z_box * radius as i64;
    let mut eng = Engine::new(ctx, t, 2 * reach)?;
    let ball = eng.ball(radius)?;
    let d = t.doubled();
    let mut eng2 = Engine::new(ctx, &d, 2 * reach)?;
    let ball2 = eng2.ball(radius)?;
    let mut out: Vec<(GroupElement, u32, bool)> = ball
        .iter()
        .map(|(s, &dist)| {
            let g = eng.decode(s);
            let certified = ball2.get(s) == Some(&dist)
                && short::consistent(short::short_length(&g, ctx), dist);
            (g, dist, certified)
        })
        .collect();
    out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confining::registry;
    use crate::group::{lattice_box, Character, Group};

    fn ctx(k: u64, subset: &str, rho: &str) -> WordContext {
        let g = Group::new(k).unwrap();
        let rho = Character::parse_spec(rho, g.fact()).unwrap();
        WordContext::new(registry(&g).get(subset).unwrap(), rho).unwrap()
    }

    #[test]
    fn single_generators() {
        let c = ctx(6, "Qminus", "minus");
        let t = Truncation::new(1, 3, 1, 4);
        let g = c.group();
        for x in ["1/6", "-1/2", "2/3"] {
            let e = g.from_r(x.parse().unwrap());
            assert_eq!(word_length_bfs(&e, &c, &t, false).unwrap().length, Some(1));
        }
        assert_eq!(
            word_length_bfs(&g.identity(), &c, &t, true).unwrap().length,
            Some(0)
        );
    }

    #[test]
    fn fiber_matches_zrho_length() {
        for (subset, rho) in [("Qminus", "minus"), ("Q1", "plus1")] {
            let c = ctx(6, subset, rho);
            // Remainder letters such as (-3, 1) need the wider box.
            let t = Truncation::new(1, 3, 3, 6);
            for z in lattice_box(2, 3) {
                let e = c.group().from_z(z.clone());
                let b = word_length_bfs(&e, &c, &t, false).unwrap();
                assert_eq!(b.length, Some(c.rho.zrho_length(&z) as u32), "{z:?}");
            }
        }
    }

    #[test]
    fn two_in_q_minus() {
        let c = ctx(6, "Qminus", "minus");
        let e = c.group().from_r(ZkRational::from_integer(2));
        let b = word_length_bfs(&e, &c, &Truncation::new(2, 36, 2, 6), true).unwrap();
        let l = b.length.unwrap();
        // 2 is neither a Q letter nor in the fiber, and t·q·t^{-1} has length 3.
        assert!((2..=2 * c.rho.zrho_length(&[1, 1]) as u32 + 1).contains(&l));
        assert_eq!(l, 3);
    }

    #[test]
    fn exhausted_depth_reports_lower_bound() {
        let c = ctx(6, "Q1", "plus1");
        let e = c.group().from_r(ZkRational::from_ratio(1, 32));
        let b = word_length_bfs(&e, &c, &Truncation::new(0, 1, 1, 6), false).unwrap();
        assert_eq!(b.length, None);
        assert_eq!(b.lower_bound, 7);
    }

    #[test]
    fn ball_distances_match_pointwise_search() {
        let c = ctx(6, "Q1", "plus1");
        let t = Truncation::new(1, 3, 1, 4);
        let ball = bfs_ball(&c, &t, 2).unwrap();
        assert!(ball.iter().any(|(_, d, _)| *d == 2));
        for (g, d, _) in ball.iter().step_by(7) {
            let b = word_length_bfs(g, &c, &t, false).unwrap();
            assert_eq!(b.length, Some(*d));
        }
    }
}
