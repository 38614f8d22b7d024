use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convergence::SetSequence;
use crate::geometry::{convex_hull, hausdorff, minkowski_combination, ConvexBody, PointCloud};
use crate::{Error, Result};

/// Slack on the simplex sum.
const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Greedy farthest-point selection: start from member 0 and keep adding the
/// member farthest from the chosen ones until all lie strictly within `eps`.
pub(crate) fn greedy_net(count: usize, dist: impl Fn(usize, usize) -> f64 + Sync, eps: f64) -> Vec<usize> {
    let mut chosen = vec![0];
    let mut gap: Vec<f64> = (0..count).into_par_iter().map(|i| dist(i, 0)).collect();
    loop {
        let (far, &worst) = gap
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty family");
        if worst < eps {
            return chosen;
        }
        chosen.push(far);
        let fresh: Vec<f64> = (0..count).into_par_iter().map(|i| dist(i, far)).collect();
        for (g, f) in gap.iter_mut().zip(fresh) {
            *g = g.min(f);
        }
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")))
    }
}

/// Finitely many family members covering the family in Hausdorff distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyNet {
    pub epsilon: f64,
    pub centers: Vec<PointCloud>,
    /// Family index of each center.
    pub provenance: Vec<usize>,
}

impl FamilyNet {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Smallest center index strictly within epsilon of `x`, with its distance.
    pub fn assign(&self, x: &PointCloud) -> Result<Option<(usize, f64)>> {
        for (i, c) in self.centers.iter().enumerate() {
            let h = hausdorff(c, x)?;
            if h < self.epsilon {
                return Ok(Some((i, h)));
            }
        }
        Ok(None)
    }

    /// Largest distance from a family member to its nearest center.
    pub fn covering_radius(&self, family: &[PointCloud]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in family {
            let mut best = f64::INFINITY;
            for c in &self.centers {
                best = best.min(hausdorff(c, x)?);
            }
            worst = worst.max(best);
        }
        Ok(worst)
    }
}

/// Greedy farthest-point ε-net of a finite family of sets.
pub fn build_family_net(family: &[PointCloud], epsilon: f64) -> Result<FamilyNet> {
    check_epsilon(epsilon)?;
    let dim = family.first().ok_or(Error::Empty)?.dim();
    for x in family {
        x.check_dim(dim)?;
    }
    let provenance = greedy_net(
        family.len(),
        |i, j| hausdorff(&family[i], &family[j]).expect("dimensions checked"),
        epsilon,
    );
    let net = FamilyNet {
        epsilon,
        centers: provenance.iter().map(|&i| family[i].clone()).collect(),
        provenance,
    };
    debug_assert!(net.covering_radius(family).expect("dimensions checked") < epsilon);
    Ok(net)
}

/// Each term replaced by its net center, with running center counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedSequence {
    /// Center index per term.
    pub assignments: Vec<usize>,
    /// Per term `n`, the number of the first `n` terms assigned to each center.
    pub counts: Vec<Vec<u64>>,
    /// `h(X_n, C'_n)` per term.
    pub errors: Vec<f64>,
}

impl QuantizedSequence {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// `p^i_n / n` for 1-based `n`.
    pub fn fractions(&self, n: usize) -> Vec<f64> {
        self.counts[n - 1].iter().map(|&c| c as f64 / n as f64).collect()
    }

    /// `(1/n) sum_{i <= n} h(X_i, C'_i)`.
    pub fn averaged_error(&self, n: usize) -> f64 {
        self.errors[..n].iter().sum::<f64>() / n as f64
    }
}

/// Assigns every term to the smallest-index center strictly within epsilon.
pub fn quantize(seq: &SetSequence, net: &FamilyNet) -> Result<QuantizedSequence> {
    let picks: Vec<Option<(usize, f64)>> = seq
        .terms()
        .par_iter()
        .map(|x| net.assign(x))
        .collect::<Result<_>>()?;
    let mut assignments = Vec::with_capacity(picks.len());
    let mut errors = Vec::with_capacity(picks.len());
    let mut counts = Vec::with_capacity(picks.len());
    let mut running = vec![0u64; net.len()];
    for (i, pick) in picks.into_iter().enumerate() {
        let (center, err) = pick.ok_or(Error::NotCovered { index: i + 1 })?;
        running[center] += 1;
        assignments.push(center);
        errors.push(err);
        counts.push(running.clone());
    }
    Ok(QuantizedSequence {
        assignments,
        counts,
        errors,
    })
}

/// `sum_i lambda_i co C_i` for a point `lambda` of the simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaLimit {
    pub weights: Vec<f64>,
    pub body: ConvexBody,
}

pub(crate) fn check_simplex(weights: &[f64], expected: usize) -> Result<()> {
    if weights.len() != expected {
        return Err(Error::OffSimplex(format!(
            "expected {expected} weights, got {}",
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::OffSimplex(format!("negative or non-finite weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(Error::OffSimplex(format!("weights sum to {total}")));
    }
    Ok(())
}

pub fn gamma_limit(net: &FamilyNet, weights: &[f64]) -> Result<GammaLimit> {
    check_simplex(weights, net.len())?;
    let hulls: Vec<ConvexBody> = net.centers.iter().map(convex_hull).collect();
    let terms: Vec<(f64, &ConvexBody)> = weights.iter().copied().zip(&hulls).collect();
    Ok(GammaLimit {
        weights: weights.to_vec(),
        body: minkowski_combination(&terms)?,
    })
}
