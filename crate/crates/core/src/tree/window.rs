use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Tree, TreeVertex};
use crate::arith::{Valuation, ZkRational};
use crate::error::{Error, Result};

/// The finite subtree of vertices `(x, h)` with `h_min <= h <= h_max` and
/// `x ∈ p^{-m·exp} Z`, with edges `(x, h) -- (x, h - 1)`.
#[derive(Clone, Debug)]
pub struct TreeWindow {
    h_min: i64,
    h_max: i64,
    exp: u32,
    vertices: Vec<TreeVertex>,
    index: HashMap<TreeVertex, usize>,
    adj: Vec<Vec<u32>>,
}

impl TreeWindow {
    pub fn new(tree: &Tree, h_min: i64, h_max: i64, exp: u32) -> Result<Self> {
        if h_min > h_max {
            return Err(Error::InvalidInput(format!(
                "empty height window [{h_min}, {h_max}]"
            )));
        }
        let m = tree.exponent() as i64;
        let p = BigInt::from(tree.prime());
        let den = p.pow(m as u32 * exp);
        let mut vertices = Vec::new();
        let mut index = HashMap::new();
        for h in h_min..=h_max {
            let count = if h + exp as i64 > 0 {
                let c = (tree.prime() as u128).checked_pow((m * (h + exp as i64)) as u32);
                match c {
                    Some(c) if c <= 1 << 24 => c as u64,
                    _ => {
                        return Err(Error::BoundExhausted(format!(
                            "window at height {h} is too large"
                        )))
                    }
                }
            } else {
                1
            };
            for c in 0..count {
                let x = ZkRational::from_big(BigRational::new(BigInt::from(c), den.clone()));
                let v = tree.vertex(x, h);
                if !index.contains_key(&v) {
                    index.insert(v.clone(), vertices.len());
                    vertices.push(v);
                }
            }
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        for (i, v) in vertices.iter().enumerate() {
            if v.h() == h_min {
                continue;
            }
            let parent = tree.vertex(v.x().clone(), v.h() - 1);
            let j = index[&parent];
            adj[i].push(j as u32);
            adj[j].push(i as u32);
        }
        Ok(TreeWindow {
            h_min,
            h_max,
            exp,
            vertices,
            index,
            adj,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn index_of(&self, v: &TreeVertex) -> Result<usize> {
        self.index.get(v).copied().ok_or_else(|| {
            Error::OutOfWindow(format!(
                "{v} not in heights [{}, {}] with denominator exponent {}",
                self.h_min, self.h_max, self.exp
            ))
        })
    }

    /// Edge distances from vertex `from`; `u32::MAX` marks unreachable vertices.
    pub fn bfs_from(&self, from: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        dist[from] = 0;
        queue.push_back(from);
        while let Some(i) = queue.pop_front() {
            for &j in &self.adj[i] {
                let j = j as usize;
                if dist[j] == u32::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        dist
    }
}

/// Shortest path length between `u` and `v` inside `window`.
pub fn bfs_distance(
    tree: &Tree,
    u: &TreeVertex,
    v: &TreeVertex,
    window: &TreeWindow,
) -> Result<u64> {
    let (u, v) = (
        tree.vertex(u.x().clone(), u.h()),
        tree.vertex(v.x().clone(), v.h()),
    );
    for w in [&u, &v] {
        if let Valuation::Finite(e) = w.x().valuation_at(tree.prime()) {
            if e < -(tree.exponent() as i64 * window.exp as i64) {
                return Err(Error::OutOfWindow(format!(
                    "{w} has denominator beyond the window"
                )));
            }
        }
    }
    let (i, j) = (window.index_of(&u)?, window.index_of(&v)?);
    match window.bfs_from(i)[j] {
        u32::MAX => Err(Error::OutOfWindow(format!(
            "no path from {u} to {v} inside the window"
        ))),
        d => Ok(d as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn q(s: &str) -> ZkRational {
        s.parse().unwrap()
    }

    #[test]
    fn reproduces_distance_examples() {
        let t = Tree::new(Group::new(6).unwrap(), 0).unwrap();
        let w = TreeWindow::new(&t, -3, 3, 3).unwrap();
        let v = t.vertex(q("1/3"), 2);
        assert_eq!(bfs_distance(&t, &v, &v, &w).unwrap(), 0);
        assert_eq!(
            bfs_distance(&t, &t.base(), &t.vertex(q("1/2"), 0), &w).unwrap(),
            2
        );
        assert_eq!(
            bfs_distance(&t, &t.vertex(q("0"), -2), &t.vertex(q("0"), 3), &w).unwrap(),
            5
        );
    }

    #[test]
    fn window_sizes() {
        let t = Tree::new(Group::new(6).unwrap(), 0).unwrap();
        let w = TreeWindow::new(&t, -3, 3, 3).unwrap();
        assert_eq!(w.len(), (0..=6).map(|e| 1usize << e).sum::<usize>());
    }

    #[test]
    fn out_of_window() {
        let t = Tree::new(Group::new(6).unwrap(), 0).unwrap();
        let w = TreeWindow::new(&t, -3, 3, 3).unwrap();
        let far = t.vertex(q("0"), 4);
        assert!(matches!(
            bfs_distance(&t, &t.base(), &far, &w),
            Err(Error::OutOfWindow(_))
        ));
        let fine = t.vertex(q("1/16"), 0);
        assert!(matches!(
            bfs_distance(&t, &t.base(), &fine, &w),
            Err(Error::OutOfWindow(_))
        ));
    }

    #[test]
    fn closed_form_matches_small_window() {
        for (k, i) in [(6u64, 0usize), (6, 1), (12, 0), (12, 1)] {
            let t = Tree::new(Group::new(k).unwrap(), i).unwrap();
            let w = TreeWindow::new(&t, -2, 2, 2).unwrap();
            for a in 0..w.len() {
                let d = w.bfs_from(a);
                for (b, db) in d.iter().enumerate() {
                    assert_eq!(*db as u64, t.distance(&w.vertices()[a], &w.vertices()[b]));
                }
            }
        }
    }
}
