//! Simple random sets: finitely many set values with fixed probabilities.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convergence::SetSequence;
use crate::geometry::{
    convex_hull, excess_body_to_cloud, minkowski_combination, minkowski_sum, ConvexBody, PointCloud, Vector,
};
use crate::{Error, Result};

/// Slack on the probability total.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub prob: f64,
    pub value: PointCloud,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetRepr", into = "SetRepr")]
pub struct SimpleRandomSet {
    dim: usize,
    atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    dim: usize,
    atoms: Vec<AtomRepr>,
}

#[derive(Serialize, Deserialize)]
struct AtomRepr {
    prob: f64,
    points: Vec<Vec<f64>>,
}

impl TryFrom<SetRepr> for SimpleRandomSet {
    type Error = Error;
    fn try_from(r: SetRepr) -> Result<Self> {
        let atoms = r
            .atoms
            .into_iter()
            .map(|a| {
                Ok(Atom {
                    prob: a.prob,
                    value: PointCloud::new(r.dim, a.points)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SimpleRandomSet::new(atoms)
    }
}

impl From<SimpleRandomSet> for SetRepr {
    fn from(s: SimpleRandomSet) -> Self {
        SetRepr {
            dim: s.dim,
            atoms: s
                .atoms
                .into_iter()
                .map(|a| AtomRepr {
                    prob: a.prob,
                    points: a.value.to_vectors().into_iter().map(Vector::into_inner).collect(),
                })
                .collect(),
        }
    }
}

impl SimpleRandomSet {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let dim = atoms.first().ok_or(Error::Empty)?.value.dim();
        let mut total = 0.0;
        for a in &atoms {
            a.value.check_dim(dim)?;
            if !(a.prob > 0.0) || !a.prob.is_finite() {
                return Err(Error::InvalidProbabilities(format!(
                    "atom probability {} is not positive",
                    a.prob
                )));
            }
            total += a.prob;
        }
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!("probabilities sum to {total}")));
        }
        Ok(Self { dim, atoms })
    }

    /// Convenience constructor from `(prob, cloud)` pairs.
    pub fn from_pairs(pairs: Vec<(f64, PointCloud)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(prob, value)| Atom { prob, value }).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn values(&self) -> Vec<PointCloud> {
        self.atoms.iter().map(|a| a.value.clone()).collect()
    }

    /// `E ||F|| = sum_i p_i ||A_i||`.
    pub fn mean_norm(&self) -> f64 {
        self.atoms.iter().map(|a| a.prob * crate::geometry::set_norm(&a.value)).sum()
    }

    /// Atom indices of `n` independent draws.
    pub fn sample_indices(&self, n: usize, seed: u64) -> Vec<usize> {
        let dist = WeightedIndex::new(self.atoms.iter().map(|a| a.prob)).expect("validated probabilities");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| dist.sample(&mut rng)).collect()
    }
}

/// `n` independent draws as a set sequence.
pub fn sample_iid(rs: &SimpleRandomSet, n: usize, seed: u64) -> Result<SetSequence> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let terms = rs
        .sample_indices(n, seed)
        .into_iter()
        .map(|i| rs.atoms[i].value.clone())
        .collect();
    SetSequence::new(terms)
}

/// Atom-wise Minkowski sum of two independent simple random sets.
pub fn independent_sum(a: &SimpleRandomSet, b: &SimpleRandomSet) -> Result<SimpleRandomSet> {
    let mut atoms = Vec::with_capacity(a.atoms.len() * b.atoms.len());
    for x in &a.atoms {
        for y in &b.atoms {
            atoms.push(Atom {
                prob: x.prob * y.prob,
                value: minkowski_sum(&x.value, &y.value)?,
            });
        }
    }
    SimpleRandomSet::new(atoms)
}

/// `sum_i p_i A_i` over convex atom values. With `convexify` each value is
/// replaced by its hull first; without it every value must already list only
/// extreme points.
pub fn hukuhara_integral(rs: &SimpleRandomSet, convexify: bool) -> Result<ConvexBody> {
    let hulls: Vec<ConvexBody> = rs.atoms.iter().map(|a| convex_hull(&a.value)).collect();
    if !convexify {
        if let Some(index) = hulls
            .iter()
            .zip(&rs.atoms)
            .position(|(h, a)| h.vertices().len() != a.value.len())
        {
            return Err(Error::NonConvexAtom { index });
        }
    }
    let terms: Vec<(f64, &ConvexBody)> = rs.atoms.iter().map(|a| a.prob).zip(&hulls).collect();
    minkowski_combination(&terms)
}

/// The expectation `E(F)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationBody {
    pub body: ConvexBody,
}

/// `E(F) = sum_i p_i co A_i`.
pub fn aumann_expectation(rs: &SimpleRandomSet) -> Result<ExpectationBody> {
    Ok(ExpectationBody {
        body: hukuhara_integral(rs, true)?,
    })
}

/// Integral of one selection over an `m`-cell subdivision of every atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionIntegral {
    pub value: Vector,
    pub subdivision: usize,
    /// Per atom, how many of the `m` cells picked each of its points.
    pub counts: Vec<Vec<u32>>,
}

/// Uniformly random way to hand `m` cells to `k` points (stars and bars).
fn random_composition(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Vec<u32> {
    if k == 1 {
        return vec![m as u32];
    }
    let mut bars = sample(rng, m + k - 1, k - 1).into_vec();
    bars.sort_unstable();
    let mut counts = Vec::with_capacity(k);
    let mut prev = 0;
    for (i, &b) in bars.iter().enumerate() {
        counts.push((b - i - prev) as u32);
        prev = b - i;
    }
    counts.push((m - prev) as u32);
    counts
}

/// Draws `count` selection integrals. Each atom's probability is split into
/// `m` equal cells; a sample assigns cells to the atom's points through a
/// uniformly random composition of `m`, so every lattice point of
/// `sum_i p_i A_i[m]` is equally likely.
pub fn selection_integral_sample(
    rs: &SimpleRandomSet,
    m: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<SelectionIntegral>> {
    if m == 0 {
        return Err(Error::InvalidArgument("subdivision m must be at least 1".into()));
    }
    let expectation = aumann_expectation(rs)?.body;
    let scale = expectation.norm().max(1.0);
    let dim = rs.dim;
    (0..count)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let mut value = vec![0.0; dim];
            let mut counts = Vec::with_capacity(rs.atoms.len());
            for atom in &rs.atoms {
                let c = random_composition(&mut rng, m, atom.value.len());
                for (j, &cj) in c.iter().enumerate() {
                    if cj > 0 {
                        let w = atom.prob * cj as f64 / m as f64;
                        for (v, x) in value.iter_mut().zip(atom.value.point(j)) {
                            *v += w * x;
                        }
                    }
                }
                counts.push(c);
            }
            let value = Vector::new(value)?;
            let gap = expectation.distance(&value)?;
            assert!(gap <= 1e-9 * scale, "selection integral left E(F) by {gap}");
            Ok(SelectionIntegral {
                value,
                subdivision: m,
                counts,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyGaps {
    /// Farthest sample from `E(F)`.
    pub inner_gap: f64,
    /// `e(E(F), samples)`: how much of `E(F)` the samples leave uncovered.
    pub outer_gap: f64,
}

pub fn expectation_consistency(rs: &SimpleRandomSet, m: usize, count: usize, seed: u64) -> Result<ConsistencyGaps> {
    let expectation = aumann_expectation(rs)?.body;
    let samples = selection_integral_sample(rs, m, count, seed)?;
    let cloud = PointCloud::from_vectors(&samples.iter().map(|s| s.value.clone()).collect::<Vec<_>>())?;
    Ok(ConsistencyGaps {
        inner_gap: expectation.excess_of_cloud(&cloud)?,
        outer_gap: excess_body_to_cloud(&expectation, &cloud)?.upper,
    })
}
