use serde::{Deserialize, Serialize};

use super::{dist, PointCloud};
use crate::{Error, Result};

/// Per-step Hausdorff tolerance plus the running sum of errors actually spent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruneBudget {
    pub delta: f64,
    pub accumulated: f64,
}

impl PruneBudget {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "prune delta must be finite and nonnegative, got {delta}"
            )));
        }
        Ok(Self {
            delta,
            accumulated: 0.0,
        })
    }

    /// A budget that never prunes.
    pub fn exact() -> Self {
        Self {
            delta: 0.0,
            accumulated: 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.delta == 0.0
    }
}

/// True when some pair of points is within `tol`; a sweep on the first
/// coordinate keeps this near-linear for spread-out clouds.
fn has_close_pair(x: &PointCloud, tol: f64) -> bool {
    // Canonical clouds are sorted lexicographically, so the first coordinate
    // is already nondecreasing.
    let n = x.len();
    for i in 0..n {
        let a = x.point(i);
        for j in i + 1..n {
            let b = x.point(j);
            if b[0] - a[0] > tol {
                break;
            }
            if dist(a, b) <= tol {
                return true;
            }
        }
    }
    false
}

/// Greedy farthest-point subset with Hausdorff error at most `tol`.
/// Returns the subset and the achieved error.
pub(crate) fn prune_with_tolerance(x: &PointCloud, tol: f64) -> (PointCloud, f64) {
    if tol <= 0.0 || x.len() <= 1 || !has_close_pair(x, tol) {
        return (x.clone(), 0.0);
    }
    let n = x.len();
    let mut chosen = vec![0usize];
    let mut gap: Vec<f64> = (0..n).map(|i| dist(x.point(i), x.point(0))).collect();
    loop {
        let (far, &worst) = gap
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        if worst <= tol {
            chosen.sort_unstable();
            return (x.select(&chosen), worst);
        }
        chosen.push(far);
        let p = x.point(far);
        for (i, g) in gap.iter_mut().enumerate() {
            let d = dist(x.point(i), p);
            if d < *g {
                *g = d;
            }
        }
    }
}

/// Thins `x` to a subset within `budget.delta` in Hausdorff distance and adds
/// the achieved error to `budget.accumulated`.
pub fn prune(x: &PointCloud, budget: &mut PruneBudget) -> PointCloud {
    let (out, err) = prune_with_tolerance(x, budget.delta);
    budget.accumulated += err;
    out
}
