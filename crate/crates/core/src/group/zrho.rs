use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use super::character::Character;
use super::element::{scale, sub};

/// Word length of `z` over `Z_ρ` together with a realizing word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZrhoWord {
    pub letters: Vec<Vec<i64>>,
    /// True when the closed form was used; false when the bounded search
    /// fallback produced the word.
    pub closed_form: bool,
}

/// Coordinates searched by the fallback are kept within this box.
const FALLBACK_BOX: i64 = 12;

impl Character {
    /// `‖z‖_{Z_ρ}`: zero for `z = 0`, otherwise `max(1, ceil(|ρ(z)|/C_ρ))`.
    pub fn zrho_length(&self, z: &[i64]) -> usize {
        self.zrho_geodesic(z).letters.len()
    }

    /// A geodesic word: `len - 1` copies of `±y` followed by one remainder
    /// letter, every letter having the sign of `ρ(z)`.
    pub fn zrho_geodesic(&self, z: &[i64]) -> ZrhoWord {
        if z.iter().all(|x| *x == 0) {
            return ZrhoWord {
                letters: Vec::new(),
                closed_form: true,
            };
        }
        let len = self.ceil_ratio(z).max(1) as usize;
        let dir = match self.sign(z) {
            Ordering::Less => scale(&self.y_dir(), -1),
            _ => self.y_dir(),
        };
        let rem = sub(z, &scale(&dir, len as i64 - 1));
        if self.in_zrho(&rem) {
            let mut letters = vec![dir; len - 1];
            letters.push(rem);
            return ZrhoWord {
                letters,
                closed_form: true,
            };
        }
        let letters = self
            .zrho_bfs(z, FALLBACK_BOX)
            .expect("target inside the fallback box");
        ZrhoWord {
            letters,
            closed_form: false,
        }
    }

    /// Breadth-first search in the Cayley graph of `Z^n` with generators
    /// `Z_ρ ∩ [-b, b]^n`, restricted to vertices in `[-2b, 2b]^n`.
    pub fn zrho_bfs(&self, target: &[i64], b: i64) -> Option<Vec<Vec<i64>>> {
        let n = target.len();
        let gens = self.zrho_box(b);
        let start = vec![0; n];
        let mut prev: HashMap<Vec<i64>, (Vec<i64>, usize)> = HashMap::new();
        let mut queue = VecDeque::from([start.clone()]);
        prev.insert(start.clone(), (start.clone(), usize::MAX));
        while let Some(v) = queue.pop_front() {
            if v == target {
                let mut word = Vec::new();
                let mut cur = v;
                while cur != start {
                    let (p, gi) = prev[&cur].clone();
                    word.push(gens[gi].clone());
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for (gi, g) in gens.iter().enumerate() {
                let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| a + b).collect();
                if w.iter().any(|x| x.abs() > 2 * b) || prev.contains_key(&w) {
                    continue;
                }
                prev.insert(w.clone(), (v.clone(), gi));
                queue.push_back(w);
            }
        }
        None
    }

    /// Nonzero elements of `Z_ρ` with coordinates in `[-b, b]`, in
    /// lexicographic order.
    pub fn zrho_box(&self, b: i64) -> Vec<Vec<i64>> {
        lattice_box(self.dim(), b)
            .into_iter()
            .filter(|z| z.iter().any(|x| *x != 0) && self.in_zrho(z))
            .collect()
    }
}

/// All points of `[-b, b]^n` in lexicographic order.
pub fn lattice_box(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-b..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Points of `[-b, b]^n` ordered by `max |z_i|`, then lexicographically.
pub fn lattice_shells(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut pts = lattice_box(n, b);
    pts.sort_by_key(|z| (z.iter().map(|x| x.abs()).max().unwrap_or(0), z.clone()));
    pts
}

pub fn zrho_length(rho: &Character, z: &[i64]) -> usize {
    rho.zrho_length(z)
}

pub fn in_zrho(rho: &Character, z: &[i64]) -> bool {
    rho.in_zrho(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use num_rational::BigRational;

    fn chars6() -> Vec<Character> {
        vec![
            Character::plus(2, 0),
            Character::minus(&factorize(6).unwrap()),
            Character::linear_int(&[2, 3]).unwrap(),
        ]
    }

    #[test]
    fn examples() {
        let p1 = Character::plus(2, 0);
        assert_eq!(p1.zrho_length(&[3, -5]), 3);
        assert_eq!(p1.zrho_length(&[0, 0]), 0);
        assert_eq!(p1.zrho_length(&[0, 17]), 1);
        let m = Character::minus(&factorize(6).unwrap());
        assert_eq!(m.zrho_length(&[-1, -1]), 2);
    }

    /// Distances in `Γ(Z^2, Z_ρ)` from an independent breadth-first search
    /// over a generous window.
    #[test]
    fn closed_form_matches_search() {
        for rho in chars6() {
            let gens = rho.zrho_box(8);
            let mut dist: HashMap<Vec<i64>, usize> = HashMap::from([(vec![0, 0], 0)]);
            let mut queue = VecDeque::from([vec![0i64, 0]]);
            while let Some(v) = queue.pop_front() {
                let d = dist[&v];
                for g in &gens {
                    let w = vec![v[0] + g[0], v[1] + g[1]];
                    if w.iter().all(|x| x.abs() <= 16) && !dist.contains_key(&w) {
                        dist.insert(w.clone(), d + 1);
                        queue.push_back(w);
                    }
                }
            }
            for z in lattice_box(2, 6) {
                let word = rho.zrho_geodesic(&z);
                assert!(word.closed_form);
                assert_eq!(word.letters.len(), dist[&z], "{rho} at {z:?}");
                let mut total = vec![0, 0];
                for l in &word.letters {
                    assert!(rho.in_zrho(l));
                    if rho.sign(&z) != Ordering::Equal {
                        assert_eq!(rho.sign(l), rho.sign(&z));
                    }
                    total = vec![total[0] + l[0], total[1] + l[1]];
                }
                assert_eq!(total, z);
            }
        }
    }

    #[test]
    fn fallback_search_agrees() {
        let rho = Character::linear(vec![
            BigRational::new(3.into(), 2.into()),
            BigRational::new((-1).into(), 1.into()),
        ])
        .unwrap();
        for z in lattice_box(2, 3) {
            let bfs = rho.zrho_bfs(&z, 6).unwrap();
            assert_eq!(bfs.len(), rho.zrho_length(&z));
        }
    }

    #[test]
    fn shells_start_at_origin() {
        let s = lattice_shells(2, 1);
        assert_eq!(s[0], vec![0, 0]);
        assert_eq!(s[1], vec![-1, -1]);
        assert_eq!(s.len(), 9);
    }
}
