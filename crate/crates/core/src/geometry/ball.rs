use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{dist, dot, PointCloud};

const SHUFFLE_SEED: u64 = 0x5eed_ba11;

/// A closed Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn covers(&self, p: &[f64]) -> bool {
        dist(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-12
    }
}

/// Smallest ball through all of `support` (at most `d + 1` points).
fn circumball(support: &[&[f64]]) -> Ball {
    let p0 = support[0];
    let dim = p0.len();
    let k = support.len() - 1;
    if k == 0 {
        return Ball {
            center: p0.to_vec(),
            radius: 0.0,
        };
    }
    let q: Vec<Vec<f64>> = support[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    // Gram system G lambda = b with b_j = |q_j|^2 / 2.
    let mut m: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| dot(&q[i], &q[j])).collect();
            row.push(dot(&q[i], &q[i]) / 2.0);
            row
        })
        .collect();
    let scale = (0..k).map(|i| m[i][i]).fold(0.0, f64::max);
    let mut singular = false;
    for c in 0..k {
        let piv = (c..k)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .unwrap();
        if m[piv][c].abs() <= 1e-14 * scale {
            singular = true;
            break;
        }
        m.swap(c, piv);
        for r in 0..k {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..=k {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    let center: Vec<f64> = if singular {
        let mut c = vec![0.0; dim];
        for p in support {
            for (ci, pi) in c.iter_mut().zip(p.iter()) {
                *ci += pi / support.len() as f64;
            }
        }
        c
    } else {
        let mut c = p0.to_vec();
        for (j, qj) in q.iter().enumerate() {
            let lambda = m[j][k] / m[j][j];
            for (ci, qi) in c.iter_mut().zip(qj) {
                *ci += lambda * qi;
            }
        }
        c
    };
    let radius = support.iter().map(|p| dist(&center, p)).fold(0.0, f64::max);
    Ball { center, radius }
}

fn move_to_front<'a>(pts: &mut Vec<&'a [f64]>, end: usize, support: &mut Vec<&'a [f64]>, dim: usize) -> Ball {
    let mut ball = if support.is_empty() {
        Ball {
            center: pts[0].to_vec(),
            radius: 0.0,
        }
    } else {
        circumball(support)
    };
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        let p = pts[i];
        if !ball.covers(p) {
            support.push(p);
            ball = move_to_front(pts, i, support, dim);
            support.pop();
            pts.remove(i);
            pts.insert(0, p);
        }
    }
    ball
}

/// Smallest enclosing ball of a cloud (Welzl's algorithm with move-to-front,
/// on a fixed-seed shuffle of the points).
pub fn min_enclosing_ball(cloud: &PointCloud) -> Ball {
    let mut pts: Vec<&[f64]> = cloud.points().collect();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    let n = pts.len();
    let mut ball = move_to_front(&mut pts, n, &mut Vec::new(), cloud.dim());
    // Repair any float slack so the ball provably encloses every point.
    ball.radius = cloud
        .points()
        .map(|p| dist(&ball.center, p))
        .fold(ball.radius, f64::max);
    ball
}

/// Radius of the smallest enclosing ball.
pub fn circumradius(cloud: &PointCloud) -> f64 {
    if cloud.len() == 1 {
        return 0.0;
    }
    min_enclosing_ball(cloud).radius
}
