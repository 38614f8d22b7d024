use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::net::{check_epsilon, greedy_net};
use crate::geometry::{minkowski_combination, ConvexBody};
use crate::{Error, Result};

const MAX_GRID_POINTS: usize = 200_000;
const VERIFY_SAMPLES: usize = 1_000;
const VERIFY_SEED: u64 = 0;

/// An ε-net of the convex hull of a family of convex bodies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MazurConet {
    pub epsilon: f64,
    /// Family indices of the ε/2-net `A_1, ..., A_p`.
    pub base: Vec<usize>,
    /// Simplex grid denominator `K`: weights are multiples of `1/K`.
    pub resolution: usize,
    /// Weight vector over `base` for each member.
    pub weights: Vec<Vec<f64>>,
    pub members: Vec<ConvexBody>,
    /// Largest distance from a sampled convex combination to the net.
    pub verified_gap: f64,
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// All compositions of `total` into `parts` nonnegative integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl MazurConet {
    /// Distance from `body` to the nearest member.
    pub fn distance(&self, body: &ConvexBody) -> Result<f64> {
        let mut best = f64::INFINITY;
        for m in &self.members {
            best = best.min(m.hausdorff(body)?);
        }
        Ok(best)
    }

    /// Largest distance from `samples` random convex combinations of one to
    /// three family members to the net.
    pub fn verify(&self, family: &[ConvexBody], samples: usize, seed: u64) -> Result<f64> {
        let gaps: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(s as u64);
                let k = rng.random_range(1..=3.min(family.len()));
                let picks = sample(&mut rng, family.len(), k);
                let raw: Vec<f64> = (0..k).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
                let total: f64 = raw.iter().sum();
                let terms: Vec<(f64, &ConvexBody)> = picks
                    .iter()
                    .zip(&raw)
                    .map(|(i, w)| (w / total, &family[i]))
                    .collect();
                self.distance(&minkowski_combination(&terms)?)
            })
            .collect::<Result<_>>()?;
        Ok(gaps.into_iter().fold(0.0, f64::max))
    }
}

/// ε-net of `co(family)`: an ε/2-net `A_i` of the family, then the images
/// `sum_i a_i A_i` of a simplex grid fine enough that neighbouring images are
/// within ε/2.
pub fn mazur_conet(family: &[ConvexBody], epsilon: f64) -> Result<MazurConet> {
    check_epsilon(epsilon)?;
    let dim = family.first().ok_or(Error::Empty)?.dim();
    for b in family {
        b.vertices().check_dim(dim)?;
    }
    let base = greedy_net(
        family.len(),
        |i, j| family[i].hausdorff(&family[j]).expect("dimensions checked"),
        epsilon / 2.0,
    );
    let p = base.len();
    let max_norm = base.iter().map(|&i| family[i].norm()).fold(0.0, f64::max);
    let resolution = if max_norm == 0.0 {
        1
    } else {
        (2.0 * max_norm * p as f64 / epsilon).ceil() as usize
    };
    let count = binomial(resolution + p - 1, p - 1).unwrap_or(usize::MAX);
    if count > MAX_GRID_POINTS {
        return Err(Error::InvalidArgument(format!(
            "simplex grid with {count} points exceeds {MAX_GRID_POINTS}; raise epsilon"
        )));
    }
    let weights: Vec<Vec<f64>> = compositions(resolution, p)
        .into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / resolution as f64).collect())
        .collect();
    let members = weights
        .par_iter()
        .map(|w| {
            let terms: Vec<(f64, &ConvexBody)> = w.iter().zip(&base).map(|(&a, &i)| (a, &family[i])).collect();
            minkowski_combination(&terms)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut net = MazurConet {
        epsilon,
        base,
        resolution,
        weights,
        members,
        verified_gap: 0.0,
    };
    net.verified_gap = net.verify(family, VERIFY_SAMPLES, VERIFY_SEED)?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, PointCloud};

    fn segment(a: f64, b: f64) -> ConvexBody {
        convex_hull(&PointCloud::new(1, vec![vec![a], vec![b]]).unwrap())
    }

    #[test]
    fn single_body() {
        let net = mazur_conet(&[segment(0.0, 1.0)], 0.3).unwrap();
        assert_eq!(net.base, vec![0]);
        assert!(net.members.iter().all(|m| m == &segment(0.0, 1.0)));
        assert_eq!(net.verified_gap, 0.0);
    }

    #[test]
    fn segment_and_origin() {
        let family = [segment(0.0, 1.0), segment(0.0, 0.0)];
        let net = mazur_conet(&family, 0.3).unwrap();
        assert_eq!(net.base.len(), 2);
        // Oracle: co family = {a[0,1] : a in [0,1]} and h(a[0,1], b[0,1]) = |a - b|.
        for k in 0..=1000 {
            let a = k as f64 / 1000.0;
            assert!(net.distance(&segment(0.0, a)).unwrap() <= 0.3);
        }
        assert!(net.verified_gap <= 0.3);
    }

    #[test]
    fn planar_family_coverage() {
        let tri = convex_hull(&PointCloud::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap());
        let bar = convex_hull(&PointCloud::new(2, vec![vec![-1.0, 0.5], vec![1.0, 0.5]]).unwrap());
        let dot = ConvexBody::point(&crate::geometry::Vector::new(vec![0.5, -0.5]).unwrap());
        let family = [tri, bar, dot];
        let net = mazur_conet(&family, 0.5).unwrap();
        assert!(net.verified_gap <= 0.5);
        assert!(net.verify(&family, 300, 9).unwrap() <= 0.5);
    }

    #[test]
    fn grid_helpers() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(compositions(3, 2), vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        assert_eq!(compositions(2, 3).len(), 6);
    }
}
