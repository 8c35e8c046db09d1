use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Half the gap between the largest and the middle of the three pair sums
/// `d(w,x)+d(y,z)`, `d(w,y)+d(x,z)`, `d(w,z)+d(x,y)`.
pub fn four_point_defect(d: impl Fn(usize, usize) -> f64, q: [usize; 4]) -> f64 {
    let [w, x, y, z] = q;
    let mut s = [d(w, x) + d(y, z), d(w, y) + d(x, z), d(w, z) + d(x, y)];
    s.sort_by(f64::total_cmp);
    (s[2] - s[1]) / 2.0
}

fn pairwise<P: Sync>(points: &[P], dist: &(impl Fn(&P, &P) -> f64 + Sync)) -> Vec<Vec<f64>> {
    points
        .par_iter()
        .map(|a| points.iter().map(|b| dist(a, b)).collect())
        .collect()
}

/// Four-point `δ` over every quadruple of `points`.
pub fn four_point_delta<P: Sync>(points: &[P], dist: impl Fn(&P, &P) -> f64 + Sync) -> Result<f64> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 points, got {n}"
        )));
    }
    let m = pairwise(points, &dist);
    let d = |i: usize, j: usize| m[i][j];
    let best = (0..n)
        .into_par_iter()
        .map(|w| {
            let mut best = 0.0f64;
            for x in w + 1..n {
                for y in x + 1..n {
                    for z in y + 1..n {
                        best = best.max(four_point_defect(d, [w, x, y, z]));
                    }
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Four-point `δ` over `samples` random quadruples of distinct points.
pub fn four_point_delta_sampled<P: Sync>(
    points: &[P],
    dist: impl Fn(&P, &P) -> f64 + Sync,
    rng: &mut impl Rng,
    samples: usize,
) -> Result<f64> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 points, got {n}"
        )));
    }
    let quads: Vec<[usize; 4]> = (0..samples)
        .map(|_| {
            let v = sample(rng, n, 4).into_vec();
            [v[0], v[1], v[2], v[3]]
        })
        .collect();
    let best = quads
        .par_iter()
        .map(|q| four_point_defect(|i, j| dist(&points[i], &points[j]), *q))
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn collinear_and_equal_points() {
        let line = [0.0f64, 1.0, 3.0, 7.0, 8.0];
        assert_eq!(four_point_delta(&line, |a, b| (a - b).abs()).unwrap(), 0.0);
        let same = [5.0f64; 6];
        assert_eq!(four_point_delta(&same, |a, b| (a - b).abs()).unwrap(), 0.0);
        assert!(four_point_delta(&line[..3], |a, b| (a - b).abs()).is_err());
    }

    #[test]
    fn square_cycle() {
        // Four vertices of a 4-cycle: sums 2, 2, 4.
        let d = [
            [0.0, 1.0, 2.0, 1.0],
            [1.0, 0.0, 1.0, 2.0],
            [2.0, 1.0, 0.0, 1.0],
            [1.0, 2.0, 1.0, 0.0],
        ];
        let pts = [0usize, 1, 2, 3];
        assert_eq!(four_point_delta(&pts, |a, b| d[*a][*b]).unwrap(), 1.0);
    }

    #[test]
    fn sampled_is_below_exhaustive() {
        let pts: Vec<(f64, f64)> = (0..12)
            .map(|i| ((i * 7 % 5) as f64, (i * 3 % 4) as f64))
            .collect();
        let dist =
            |a: &(f64, f64), b: &(f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        let full = four_point_delta(&pts, dist).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = four_point_delta_sampled(&pts, dist, &mut rng, 200).unwrap();
        assert!(s <= full + 1e-12 && s > 0.0);
    }
}
