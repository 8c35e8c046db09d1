use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::ZkRational;
use crate::confining::SubsetRef;
use crate::error::{Error, Result};
use crate::group::{add, neg, Character, Group, GroupElement};

/// A generator from `Q ∪ Z_ρ`. Serializes as `{"q": "a/b"}` or
/// `{"z": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    #[serde(rename = "q")]
    Q(ZkRational),
    #[serde(rename = "z")]
    Z(Vec<i64>),
}

impl Letter {
    pub fn element(&self, group: &Group) -> GroupElement {
        match self {
            Letter::Q(x) => group.from_r(x.clone()),
            Letter::Z(z) => group.from_z(z.clone()),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Q(x) => write!(f, "q({x})"),
            Letter::Z(z) => write!(f, "z{z:?}"),
        }
    }
}

/// The ambient data of a word: the subset `Q` and the character `ρ`.
#[derive(Clone, Debug)]
pub struct WordContext {
    pub q: SubsetRef,
    pub rho: Character,
}

/// Which side a `Z_ρ` letter ends up on after commuting past a `Q` letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `z·q = q'·z` with `q' = γ(z)(q)`; needs `ρ(z) >= 0`.
    Right,
    /// `q·z = z·q''` with `q'' = γ(z^{-1})(q)`; needs `ρ(z) <= 0`.
    Left,
}

/// A word in `τ_1 τ_2 τ_3` form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub tau1: Vec<Vec<i64>>,
    pub tau2: Vec<ZkRational>,
    pub tau3: Vec<Vec<i64>>,
}

impl NormalForm {
    pub fn letters(&self) -> Vec<Letter> {
        self.tau1
            .iter()
            .cloned()
            .map(Letter::Z)
            .chain(self.tau2.iter().cloned().map(Letter::Q))
            .chain(self.tau3.iter().cloned().map(Letter::Z))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.tau1.len() + self.tau2.len() + self.tau3.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl WordContext {
    pub fn new(q: SubsetRef, rho: Character) -> Result<Self> {
        rho.check_dim(q.group().n())?;
        Ok(WordContext { q, rho })
    }

    pub fn group(&self) -> &Group {
        self.q.group()
    }

    pub fn check_letter(&self, l: &Letter) -> Result<()> {
        let ok = match l {
            Letter::Q(x) => self.q.contains(x),
            Letter::Z(z) => {
                self.group().check_dim(z)?;
                self.rho.in_zrho(z)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLetter(l.to_string()))
        }
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        w.iter().try_for_each(|l| self.check_letter(l))
    }

    /// Product of the letters, left to right.
    pub fn eval_word(&self, w: &[Letter]) -> GroupElement {
        let g = self.group();
        w.iter()
            .fold(g.identity(), |acc, l| g.multiply(&acc, &l.element(g)))
    }

    pub fn commute(&self, z: &[i64], q: &ZkRational, dir: Direction) -> Result<ZkRational> {
        let s = self.rho.sign(z);
        let (ok, twist) = match dir {
            Direction::Right => (s != Ordering::Less, z.to_vec()),
            Direction::Left => (s != Ordering::Greater, neg(z)),
        };
        if !ok {
            return Err(Error::SignCondition(z.to_vec()));
        }
        Ok(self.group().gamma_act(&twist, q))
    }

    /// Moves letters with `ρ >= 0` to the right and letters with `ρ < 0` to
    /// the left of every `Q` letter, then replaces the negative block by a
    /// `Z_ρ` geodesic of its sum. Evaluation is preserved and the length
    /// never grows.
    pub fn normal_form(&self, w: &[Letter]) -> Result<NormalForm> {
        self.check_word(w)?;
        let n = self.group().n();
        let mut tau1 = Vec::new();
        let mut tau3 = Vec::new();
        // Sum of the nonnegative letters already passed.
        let mut pos = vec![0; n];
        let mut pending: Vec<(ZkRational, Vec<i64>)> = Vec::new();
        for l in w {
            match l {
                Letter::Q(x) => pending.push((x.clone(), pos.clone())),
                Letter::Z(z) if self.rho.sign(z) == Ordering::Less => tau1.push(z.clone()),
                Letter::Z(z) => {
                    pos = add(&pos, z);
                    tau3.push(z.clone());
                }
            }
        }
        // Negative letters after each Q letter, accumulated from the right.
        let mut neg_after = vec![vec![0; n]; pending.len()];
        let mut acc = vec![0; n];
        let mut qi = pending.len();
        for l in w.iter().rev() {
            match l {
                Letter::Q(_) => {
                    qi -= 1;
                    neg_after[qi] = acc.clone();
                }
                Letter::Z(z) if self.rho.sign(z) == Ordering::Less => acc = add(&acc, z),
                Letter::Z(_) => {}
            }
        }
        let mut tau2 = Vec::with_capacity(pending.len());
        for ((x, p), na) in pending.into_iter().zip(neg_after) {
            let y = self.commute(
                &neg(&na),
                &self.commute(&p, &x, Direction::Right)?,
                Direction::Right,
            )?;
            if !self.q.contains(&y) {
                return Err(Error::InvalidLetter(format!(
                    "{y} left {} while rewriting; it is not confining for {}",
                    self.q.name(),
                    self.rho
                )));
            }
            tau2.push(y);
        }
        let total = tau1.iter().fold(vec![0; n], |a, z| add(&a, z));
        let geo = self.rho.zrho_geodesic(&total).letters;
        if geo.len() <= tau1.len() && geo.iter().all(|z| self.rho.sign(z) == Ordering::Less) {
            tau1 = geo;
        }
        Ok(NormalForm { tau1, tau2, tau3 })
    }
}
