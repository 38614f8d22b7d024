//! Built-in sequences and random sets used by demos, tests and the CLI.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convergence::{Generator, SetSequence};
use crate::convexification::averages_sequence;
use crate::geometry::{PointCloud, PruneBudget, Vector};
use crate::random_sets::SimpleRandomSet;
use crate::Result;

fn line(points: &[f64]) -> PointCloud {
    PointCloud::new(1, points.iter().map(|&x| vec![x]).collect()).expect("finite points")
}

fn generator(name: &str, params: &[(&str, f64)]) -> Option<Generator> {
    Some(Generator {
        name: name.into(),
        params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
    })
}

/// `({0}, 1/2), ({1}, 1/2)` on the line.
pub fn coin_flip() -> SimpleRandomSet {
    SimpleRandomSet::from_pairs(vec![(0.5, line(&[0.0])), (0.5, line(&[1.0]))]).expect("valid")
}

/// `({0, 1}, 1/2), ({0, 2}, 1/2)`: nonconvex atoms with `E(F) = [0, 3/2]`.
pub fn nonconvex_pair() -> SimpleRandomSet {
    SimpleRandomSet::from_pairs(vec![(0.5, line(&[0.0, 1.0])), (0.5, line(&[0.0, 2.0]))]).expect("valid")
}

/// `([0, 1], 1/2), ([1, 2], 1/2)`: convex atoms with `E(F) = [1/2, 3/2]`.
pub fn translated_segments() -> SimpleRandomSet {
    SimpleRandomSet::from_pairs(vec![(0.5, line(&[0.0, 1.0])), (0.5, line(&[1.0, 2.0]))]).expect("valid")
}

/// `D[1], ..., D[n_max]` for a finite `D`, unpruned.
pub fn averaging(d: &PointCloud, n_max: usize) -> Result<SetSequence> {
    let terms = averages_sequence(d, n_max, &mut PruneBudget::exact())?;
    Ok(SetSequence::new(terms)?.with_generator(generator("averaging", &[("n_max", n_max as f64)])))
}

/// Random `D` of multiples of 1/8 in `[0, 1]` that contains both ends, and
/// its averages `D[1..=n_max]`.
pub fn rational_averaging(seed: u64, n_max: usize) -> Result<(PointCloud, SetSequence)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![0.0, 1.0];
    for _ in 0..rng.random_range(0..=3) {
        pts.push(rng.random_range(1..8) as f64 / 8.0);
    }
    let d = line(&pts);
    let seq = averaging(&d, n_max)?.with_generator(generator(
        "rational_averaging",
        &[("seed", seed as f64), ("n_max", n_max as f64)],
    ));
    Ok((d, seq))
}

/// A random cloud `X` (dimension 1 to 3, 3 to 6 points in the unit box) and
/// terms `X_n` moving each point by at most `c / n` with `c` in `[0.1, 1]`.
pub fn jittered(seed: u64, n_max: usize) -> Result<(PointCloud, SetSequence)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.random_range(1..=3);
    let k = rng.random_range(3..=6);
    let base: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..dim).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    let c = rng.random_range(0.1..=1.0);
    let terms = (1..=n_max)
        .map(|n| {
            let moved = base
                .iter()
                .map(|p| {
                    let r = c / n as f64 * rng.random_range(0.0..=1.0) / (dim as f64).sqrt();
                    p.iter().map(|x| x + r * rng.random_range(-1.0..=1.0)).collect()
                })
                .collect();
            PointCloud::new(dim, moved)
        })
        .collect::<Result<Vec<_>>>()?;
    let seq = SetSequence::new(terms)?.with_generator(generator(
        "jittered",
        &[("seed", seed as f64), ("n_max", n_max as f64), ("c", c)],
    ));
    Ok((PointCloud::new(dim, base)?, seq))
}

/// Random oracle instance: dimension 1 to 3, 1 to 6 terms of 1 to 5 points
/// in the unit box.
pub fn random_terms(seed: u64) -> Vec<PointCloud> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.random_range(1..=3);
    let n = rng.random_range(1..=6);
    (0..n)
        .map(|_| {
            let k = rng.random_range(1..=5);
            let pts = (0..k)
                .map(|_| (0..dim).map(|_| rng.random_range(0.0..1.0)).collect())
                .collect();
            PointCloud::new(dim, pts).expect("finite points")
        })
        .collect()
}

/// `m` equally spaced points on the circle of radius `r`.
pub fn circle(r: f64, m: usize) -> PointCloud {
    PointCloud::new(
        2,
        (0..m)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / m as f64;
                vec![r * t.cos(), r * t.sin()]
            })
            .collect(),
    )
    .expect("finite points")
}

/// `m` points of a Fibonacci sphere of radius `r` in R^3.
pub fn fibonacci_sphere(r: f64, m: usize) -> Vec<Vec<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..m)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / m as f64;
            let s = (1.0 - z * z).sqrt();
            let t = golden * k as f64;
            vec![r * s * t.cos(), r * s * t.sin(), r * z]
        })
        .collect()
}

/// The twelve unit vertex directions of an icosahedron: a finite stand-in for
/// an orthonormal sequence (pairwise at least 63 degrees apart).
pub fn icosahedron() -> Vec<Vector> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let norm = (1.0 + phi * phi).sqrt();
    let mut out = Vec::with_capacity(12);
    for a in [-1.0, 1.0] {
        for b in [-phi, phi] {
            for (x, y, z) in [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)] {
                out.push(Vector::new(vec![x / norm, y / norm, z / norm]).expect("finite"));
            }
        }
    }
    out
}

/// Truncated spike sequence in R^3: `X_n = B ∪ {lambda e_n}` where `B` samples
/// the unit sphere and contains every `e_k`, so `B` and `X_n` generate the
/// unit ball and the spiked body.
#[derive(Debug, Clone)]
pub struct Spikes {
    pub lambda: f64,
    pub directions: Vec<Vector>,
    pub ball: PointCloud,
    pub sequence: SetSequence,
}

impl Spikes {
    /// Probes `2 e_k`, one per term.
    pub fn far_probes(&self) -> Vec<Vector> {
        self.directions
            .iter()
            .map(|e| Vector::new(e.as_slice().iter().map(|x| 2.0 * x).collect()).expect("finite"))
            .collect()
    }
}

pub fn spikes(lambda: f64, sphere_points: usize) -> Result<Spikes> {
    let directions = icosahedron();
    let mut ball_pts = fibonacci_sphere(1.0, sphere_points);
    ball_pts.extend(directions.iter().map(|e| e.as_slice().to_vec()));
    let ball = PointCloud::new(3, ball_pts)?;
    let terms = directions
        .iter()
        .map(|e| {
            let tip = Vector::new(e.as_slice().iter().map(|x| lambda * x).collect())?;
            ball.union(&PointCloud::singleton(&tip))
        })
        .collect::<Result<Vec<_>>>()?;
    let sequence = SetSequence::new(terms)?.with_generator(generator(
        "spikes",
        &[("lambda", lambda), ("sphere_points", sphere_points as f64)],
    ));
    Ok(Spikes {
        lambda,
        directions,
        ball,
        sequence,
    })
}
