//! Convex bodies as vectors of support values on a direction grid.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{dot, minkowski_combination, ConvexBody, Vector};
use crate::random_sets::{aumann_expectation, SimpleRandomSet};
use crate::{Error, Result};

const MONTE_CARLO_PROBES: usize = 20_000;
/// The Monte Carlo covering radius only sees sampled directions; this factor
/// absorbs the part of the sphere the sample missed.
const MONTE_CARLO_SAFETY: f64 = 1.25;

/// Unit directions plus their angular covering radius on the sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionGrid {
    dim: usize,
    directions: Vec<Vector>,
    resolution: f64,
}

fn gaussian_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = dot(&v, &v).sqrt();
        if n > 1e-9 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

impl DirectionGrid {
    /// `count` directions: the two signs on the line, equally spaced angles
    /// in the plane, a Fibonacci sphere in 3D and seeded Gaussian directions
    /// beyond.
    pub fn new(dim: usize, count: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if count == 0 || (dim > 1 && count < 2) {
            return Err(Error::InvalidArgument(format!("{count} directions cannot cover the sphere")));
        }
        let raw: Vec<Vec<f64>> = match dim {
            1 => vec![vec![-1.0], vec![1.0]],
            2 => (0..count)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / count as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect(),
            3 => {
                let golden = PI * (3.0 - 5f64.sqrt());
                (0..count)
                    .map(|k| {
                        let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                        let r = (1.0 - z * z).sqrt();
                        let t = golden * k as f64;
                        vec![r * t.cos(), r * t.sin(), z]
                    })
                    .collect()
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| gaussian_unit(&mut rng, dim)).collect()
            }
        };
        let directions = raw.into_iter().map(Vector::new).collect::<Result<Vec<_>>>()?;
        let mut grid = Self {
            dim,
            directions,
            resolution: 0.0,
        };
        grid.resolution = match dim {
            1 => 0.0,
            2 => PI / count as f64,
            _ => MONTE_CARLO_SAFETY * grid.estimate_covering_radius(MONTE_CARLO_PROBES, seed ^ 0xc0ffee),
        };
        Ok(grid)
    }

    /// Largest angle from a random unit vector to its nearest direction.
    pub fn estimate_covering_radius(&self, probes: usize, seed: u64) -> f64 {
        (0..probes)
            .into_par_iter()
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(s as u64);
                let u = gaussian_unit(&mut rng, self.dim);
                let best = self
                    .directions
                    .iter()
                    .map(|d| dot(d.as_slice(), &u))
                    .fold(-1.0, f64::max);
                best.clamp(-1.0, 1.0).acos()
            })
            .reduce(|| 0.0, f64::max)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    /// Angular covering radius; 0 on the line where two signs cover exactly.
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// A grid extended by extra directions; the recorded resolution keeps the
    /// old (valid, since covering only improves) value.
    pub fn refined(&self, extra: &[Vector]) -> Result<Self> {
        let mut directions = self.directions.clone();
        for d in extra {
            if d.dim() != self.dim || (d.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument("extra directions must be unit vectors".into()));
            }
            directions.push(d.clone());
        }
        Ok(Self {
            dim: self.dim,
            directions,
            resolution: self.resolution,
        })
    }
}

/// Support values `sup_x <u_k, x>` of a body on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportVector {
    grid: Arc<DirectionGrid>,
    values: Vec<f64>,
}

impl SupportVector {
    pub fn grid(&self) -> &Arc<DirectionGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn check_grid(&self, other: &SupportVector) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `sum_k w_k v_k`, the support vector of the matching Minkowski combination.
    pub fn combine(terms: &[(f64, &SupportVector)]) -> Result<SupportVector> {
        let first = terms.first().ok_or(Error::Empty)?.1;
        let mut values = vec![0.0; first.values.len()];
        for &(w, v) in terms {
            first.check_grid(v)?;
            for (acc, x) in values.iter_mut().zip(&v.values) {
                *acc += w * x;
            }
        }
        Ok(SupportVector {
            grid: first.grid.clone(),
            values,
        })
    }

    /// One row per direction: the components, then the value.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let cols: Vec<String> = (0..self.grid.dim).map(|k| format!("u{k}")).collect();
        writeln!(out, "{},value", cols.join(",")).expect("string write");
        for (d, v) in self.grid.directions.iter().zip(&self.values) {
            for c in d.as_slice() {
                write!(out, "{c},").expect("string write");
            }
            writeln!(out, "{v}").expect("string write");
        }
        out
    }
}

/// Exact support values of `body` on `grid`.
pub fn embed(body: &ConvexBody, grid: &Arc<DirectionGrid>) -> Result<SupportVector> {
    body.vertices().check_dim(grid.dim)?;
    let values = grid.directions.par_iter().map(|u| body.support(u.as_slice())).collect();
    Ok(SupportVector {
        grid: grid.clone(),
        values,
    })
}

/// Sup-norm distance between support vectors; never exceeds the Hausdorff
/// distance of the bodies and approaches it as the grid refines.
pub fn embedded_distance(a: &SupportVector, b: &SupportVector) -> Result<f64> {
    a.check_grid(b)?;
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// `max_k |J(lambda x + mu y) - lambda J(x) - mu J(y)|`.
pub fn linearity_check(
    x: &ConvexBody,
    y: &ConvexBody,
    lambda: f64,
    mu: f64,
    grid: &Arc<DirectionGrid>,
) -> Result<f64> {
    let combined = embed(&minkowski_combination(&[(lambda, x), (mu, y)])?, grid)?;
    let (jx, jy) = (embed(x, grid)?, embed(y, grid)?);
    let rhs = SupportVector::combine(&[(lambda, &jx), (mu, &jy)])?;
    embedded_distance(&combined, &rhs)
}

/// When `x + z` and `y + z` embed within `tolerance`, so must `x` and `y`.
/// Returns whether that implication held.
pub fn cancellation_check(
    x: &ConvexBody,
    y: &ConvexBody,
    z: &ConvexBody,
    grid: &Arc<DirectionGrid>,
    tolerance: f64,
) -> Result<bool> {
    let xz = embed(&minkowski_combination(&[(1.0, x), (1.0, z)])?, grid)?;
    let yz = embed(&minkowski_combination(&[(1.0, y), (1.0, z)])?, grid)?;
    if embedded_distance(&xz, &yz)? > tolerance {
        return Ok(true);
    }
    Ok(embedded_distance(&embed(x, grid)?, &embed(y, grid)?)? <= tolerance)
}

/// `max_k |J(E F) - sum_i p_i J(co A_i)|`.
pub fn expectation_commutes(rs: &SimpleRandomSet, grid: &Arc<DirectionGrid>) -> Result<f64> {
    let lhs = embed(&aumann_expectation(rs)?.body, grid)?;
    let atoms = rs
        .atoms()
        .iter()
        .map(|a| Ok((a.prob, embed(&crate::geometry::convex_hull(&a.value), grid)?)))
        .collect::<Result<Vec<_>>>()?;
    let terms: Vec<(f64, &SupportVector)> = atoms.iter().map(|(p, v)| (*p, v)).collect();
    embedded_distance(&lhs, &SupportVector::combine(&terms)?)
}
