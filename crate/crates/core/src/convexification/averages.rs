use serde::{Deserialize, Serialize};

use crate::geometry::{minkowski_sum, prune_with_tolerance, PointCloud, PruneBudget, Vector};
use crate::{Error, Result};

/// Largest cloud an unpruned iterated sum may produce.
pub const EXACT_CAP: usize = 2_000_000;

/// `S + D`, refusing to materialize more than [`EXACT_CAP`] candidate points
/// when the budget does not prune.
pub(crate) fn grow_sum(s: &PointCloud, d: &PointCloud, budget: &PruneBudget) -> Result<PointCloud> {
    let size = s.len().saturating_mul(d.len());
    if budget.is_exact() && size > EXACT_CAP {
        return Err(Error::CardinalityOverflow {
            size,
            cap: EXACT_CAP,
        });
    }
    minkowski_sum(s, d)
}

/// One step of a pruned running sum whose final average is taken over
/// `horizon` terms: tolerance `delta * horizon` in sum space is `delta` in
/// average space, and the achieved error is booked in average units.
pub(crate) fn step_sum(
    s: &PointCloud,
    d: &PointCloud,
    budget: &mut PruneBudget,
    horizon: usize,
) -> Result<PointCloud> {
    let grown = grow_sum(s, d, budget)?;
    let (pruned, err) = prune_with_tolerance(&grown, budget.delta * horizon as f64);
    budget.accumulated += err / horizon as f64;
    Ok(pruned)
}

/// `s / n`, dividing rather than multiplying so grid points come out exact.
pub(crate) fn average(s: &PointCloud, n: usize) -> PointCloud {
    let data = s.as_flat().iter().map(|x| x / n as f64).collect();
    PointCloud::canonical(s.dim(), data)
}

/// `D[n] = (D + ... + D) / n`, pruned per `budget`.
pub fn repeated_average(d: &PointCloud, n: usize, budget: &mut PruneBudget) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut s = d.clone();
    for _ in 1..n {
        s = step_sum(&s, d, budget, n)?;
    }
    Ok(average(&s, n))
}

/// `D[1], ..., D[n_max]` from one running sum; each average carries the
/// pruning done on the way to it.
pub fn averages_sequence(d: &PointCloud, n_max: usize, budget: &mut PruneBudget) -> Result<Vec<PointCloud>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(n_max);
    let mut s = d.clone();
    out.push(d.clone());
    for n in 2..=n_max {
        s = step_sum(&s, d, budget, n_max)?;
        out.push(average(&s, n));
    }
    Ok(out)
}

/// A point of `D[n]` together with how many copies of each point of `D`
/// were averaged to produce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vector,
    /// The rational combination `z` being approximated.
    pub target: Vector,
    /// Copies of `D`'s points, indexed like `D`; sums to `n`.
    pub multiplicities: Vec<u64>,
}

/// With `z = sum_i (p_i / p) x_i` given as `(index, p_i)` pairs, returns
/// `c_n = (k * sum_i p_i x_i + j * c) / n` for `n = k p + j`, where `c` is the
/// anchor (default: the lexicographically smallest point of `D`).
pub fn rational_witness(
    d: &PointCloud,
    weights: &[(usize, u64)],
    n: usize,
    anchor: Option<usize>,
) -> Result<Option<Witness>> {
    let anchor = anchor.unwrap_or(0);
    if anchor >= d.len() {
        return Err(Error::InvalidArgument(format!("anchor index {anchor} out of range")));
    }
    let p: u64 = weights.iter().map(|w| w.1).sum();
    if p == 0 {
        return Err(Error::InvalidArgument("weights must have a positive total".into()));
    }
    let mut numerators = vec![0u64; d.len()];
    for &(i, w) in weights {
        let slot = numerators
            .get_mut(i)
            .ok_or_else(|| Error::InvalidArgument(format!("point index {i} out of range")))?;
        *slot += w;
    }
    let dim = d.dim();
    let mut target = vec![0.0; dim];
    for (i, &w) in numerators.iter().enumerate() {
        for (t, x) in target.iter_mut().zip(d.point(i)) {
            *t += w as f64 * x / p as f64;
        }
    }
    let target = Vector::new(target)?;
    if (n as u64) < p {
        return Ok(None);
    }
    let k = n as u64 / p;
    let j = n as u64 % p;
    let mut multiplicities: Vec<u64> = numerators.iter().map(|w| k * w).collect();
    multiplicities[anchor] += j;
    let mut point = vec![0.0; dim];
    for (i, &m) in multiplicities.iter().enumerate() {
        for (c, x) in point.iter_mut().zip(d.point(i)) {
            *c += m as f64 * x;
        }
    }
    point.iter_mut().for_each(|c| *c /= n as f64);
    Ok(Some(Witness {
        point: Vector::new(point)?,
        target,
        multiplicities,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, excess_body_to_cloud};

    fn line(points: &[f64]) -> PointCloud {
        PointCloud::new(1, points.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn first_averages() {
        let d = line(&[0.0, 1.0]);
        let mut b = PruneBudget::exact();
        assert_eq!(repeated_average(&d, 1, &mut b).unwrap(), d);
        assert_eq!(repeated_average(&d, 2, &mut b).unwrap(), line(&[0.0, 0.5, 1.0]));
        assert!(repeated_average(&d, 0, &mut b).is_err());
    }

    #[test]
    fn two_point_average_is_the_grid() {
        let d = line(&[0.0, 1.0]);
        let hull = convex_hull(&d);
        for n in 1..=20 {
            let avg = repeated_average(&d, n, &mut PruneBudget::exact()).unwrap();
            // Oracle: D[n] = {k/n : 0 <= k <= n}.
            assert_eq!(avg, line(&(0..=n).map(|k| k as f64 / n as f64).collect::<Vec<_>>()));
            let gap = excess_body_to_cloud(&hull, &avg).unwrap().upper;
            assert!((gap - 0.5 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_mode_overflows() {
        let d = PointCloud::new(
            3,
            (0..40)
                .map(|i| vec![(i as f64).sin(), (i as f64 * 1.3).cos(), i as f64 * 0.01])
                .collect(),
        )
        .unwrap();
        assert!(matches!(
            repeated_average(&d, 5, &mut PruneBudget::exact()),
            Err(Error::CardinalityOverflow { .. })
        ));
    }

    #[test]
    fn pruned_average_respects_budget() {
        let d = PointCloud::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.31, 0.17]],
        )
        .unwrap();
        let exact = repeated_average(&d, 12, &mut PruneBudget::exact()).unwrap();
        let mut b = PruneBudget::new(0.02).unwrap();
        let pruned = repeated_average(&d, 12, &mut b).unwrap();
        assert!(pruned.len() < exact.len());
        let h = crate::geometry::hausdorff(&pruned, &exact).unwrap();
        assert!(h <= b.accumulated + 1e-12, "{h} > {}", b.accumulated);
        assert!(b.accumulated <= 11.0 * 0.02 + 1e-12);
    }

    #[test]
    fn sequence_matches_individual_averages() {
        let d = line(&[0.0, 0.25, 1.0]);
        let seq = averages_sequence(&d, 9, &mut PruneBudget::exact()).unwrap();
        for (i, avg) in seq.iter().enumerate() {
            let direct = repeated_average(&d, i + 1, &mut PruneBudget::exact()).unwrap();
            assert!(crate::geometry::hausdorff(avg, &direct).unwrap() < 1e-12);
        }
    }

    #[test]
    fn witness_examples() {
        let d = line(&[0.0, 1.0]);
        let half = [(0, 1), (1, 1)];
        let w4 = rational_witness(&d, &half, 4, None).unwrap().unwrap();
        assert_eq!(w4.point.as_slice(), &[0.5]);
        assert_eq!(w4.multiplicities, vec![2, 2]);
        let w5 = rational_witness(&d, &half, 5, None).unwrap().unwrap();
        assert!((w5.point[0] - 0.4).abs() < 1e-15);
        assert!(((w5.point[0] - 0.5).abs() - 0.1).abs() < 1e-15);
        assert!(rational_witness(&d, &half, 1, None).unwrap().is_none());
        // Unit mass on a point with that point as anchor.
        for n in 1..6 {
            let w = rational_witness(&d, &[(1, 1)], n, Some(1)).unwrap().unwrap();
            assert_eq!(w.point.as_slice(), &[1.0]);
        }
    }

    #[test]
    fn witness_lies_in_the_average_and_obeys_the_padding_bound() {
        let d = line(&[0.0, 0.5, 2.0]);
        let weights = [(0, 1), (1, 2), (2, 4)];
        let p = 7.0;
        for n in 7..40 {
            let w = rational_witness(&d, &weights, n, None).unwrap().unwrap();
            assert_eq!(w.multiplicities.iter().sum::<u64>(), n as u64);
            let avg = repeated_average(&d, n, &mut PruneBudget::exact()).unwrap();
            assert!(avg.distance_to(w.point.as_slice()) < 1e-12);
            let bound = p / n as f64 * (w.target.norm() + 0.0);
            assert!((w.point[0] - w.target[0]).abs() <= bound + 1e-12);
        }
    }
}
