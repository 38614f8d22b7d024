use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::averages::{average, step_sum};
use crate::geometry::{circumradius, convex_hull, excess_body_to_cloud, minkowski_combination, ConvexBody, PruneBudget};
use crate::geometry::PointCloud;
use crate::{Error, Result};

/// Rounding slack in the gap assertion.
const SLACK: f64 = 1e-9;

/// Convexification gap of one average against the Shapley–Folkman–Starr bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SfGap {
    pub n: usize,
    /// `h((X_1 + ... + X_n)/n, (co X_1 + ... + co X_n)/n)`.
    pub raw_gap: f64,
    /// `(sqrt(d) / n) * max_i radius(X_i)`.
    pub bound: f64,
    pub budget_accumulated: f64,
    pub holds: bool,
}

/// Raw average against convexified average, with the classical bound.
pub fn shapley_folkman_gap(terms: &[PointCloud], budget: &mut PruneBudget) -> Result<SfGap> {
    let first = terms.first().ok_or(Error::Empty)?;
    let dim = first.dim();
    for t in terms {
        t.check_dim(dim)?;
    }
    let n = terms.len();
    let mut sum = first.clone();
    for t in &terms[1..] {
        sum = step_sum(&sum, t, budget, n)?;
    }
    let raw = average(&sum, n);
    let hulls: Vec<ConvexBody> = terms.iter().map(convex_hull).collect();
    let weighted: Vec<(f64, &ConvexBody)> = hulls.iter().map(|h| (1.0 / n as f64, h)).collect();
    let convex = minkowski_combination(&weighted)?;
    let raw_gap = convex
        .excess_of_cloud(&raw)?
        .max(excess_body_to_cloud(&convex, &raw)?.upper);
    let radius = terms.iter().map(circumradius).fold(0.0, f64::max);
    let bound = (dim as f64).sqrt() / n as f64 * radius;
    Ok(SfGap {
        n,
        raw_gap,
        bound,
        budget_accumulated: budget.accumulated,
        holds: raw_gap <= bound + budget.accumulated + SLACK,
    })
}

/// Oracle rows as CSV: `n,raw_gap,bound,budget_accumulated`.
pub fn oracle_csv(rows: &[SfGap]) -> String {
    let mut out = String::from("n,raw_gap,bound,budget_accumulated\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.n, r.raw_gap, r.bound, r.budget_accumulated).expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> PointCloud {
        PointCloud::new(1, points.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn four_copies_of_two_points() {
        let d = line(&[0.0, 1.0]);
        let gap = shapley_folkman_gap(&vec![d; 4], &mut PruneBudget::exact()).unwrap();
        assert!((gap.raw_gap - 0.125).abs() < 1e-15);
        assert!((gap.bound - 0.125).abs() < 1e-15);
        assert!(gap.holds);
    }

    #[test]
    fn single_term() {
        let x = PointCloud::new(2, vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let gap = shapley_folkman_gap(&[x.clone()], &mut PruneBudget::exact()).unwrap();
        // h(X, co X) for a triangle: the incenter-free bound is the farthest
        // hull point from the vertices, reached at the hypotenuse midpoint.
        assert!((gap.raw_gap - 2f64.sqrt()).abs() < 1e-8);
        assert!((gap.bound - 2f64.sqrt() * circumradius(&x)).abs() < 1e-12);
        assert!(gap.holds);
    }

    #[test]
    fn dense_segments_have_tiny_gaps() {
        let seg = line(&(0..=100).map(|k| k as f64 / 100.0).collect::<Vec<_>>());
        let gap = shapley_folkman_gap(&vec![seg; 3], &mut PruneBudget::exact()).unwrap();
        assert!(gap.raw_gap <= 0.005 + 1e-12);
    }

    #[test]
    fn csv_rows() {
        let gap = shapley_folkman_gap(&vec![line(&[0.0, 1.0]); 2], &mut PruneBudget::exact()).unwrap();
        assert_eq!(oracle_csv(&[gap]), "n,raw_gap,bound,budget_accumulated\n2,0.25,0.25,0\n");
    }
}
