use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{ConvexBody, PointCloud};
use crate::Result;

const MAX_CELLS: usize = 500_000;

/// Two-sided enclosure of a quantity computed by search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn exact(value: f64) -> Self {
        Self {
            lower: value,
            upper: value,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

struct Cell {
    lo: Vec<f64>,
    hi: Vec<f64>,
    upper: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.upper == other.upper
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

/// `e(body, cloud) = sup_{x in body} d(x, cloud)`.
///
/// On the line the supremum is attained at an end or at a midpoint between
/// neighbouring cloud points, so the answer is exact. Elsewhere a
/// branch-and-bound over boxes uses that `d(., cloud)` is 1-Lipschitz; the
/// bracket is tight to `1e-9 * max(1, diameter)` unless the cell cap is hit.
pub fn excess_body_to_cloud(body: &ConvexBody, cloud: &PointCloud) -> Result<Bracket> {
    body.vertices().check_dim(cloud.dim())?;
    if body.dim() == 1 {
        return Ok(Bracket::exact(excess_on_line(body, cloud)));
    }
    Ok(branch_and_bound(body, cloud))
}

fn excess_on_line(body: &ConvexBody, cloud: &PointCloud) -> f64 {
    let v = body.vertices().as_flat();
    let (lo, hi) = (v[0], v[v.len() - 1]);
    let pts = cloud.as_flat();
    let mut best = cloud.distance_to(&[lo]).max(cloud.distance_to(&[hi]));
    for w in pts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if mid > lo && mid < hi {
            best = best.max(0.5 * (w[1] - w[0]));
        }
    }
    best
}

fn branch_and_bound(body: &ConvexBody, cloud: &PointCloud) -> Bracket {
    let (lo, hi) = body.vertices().bounding_box();
    let diam = body.vertices().diameter().max(cloud.diameter());
    let tol = 1e-9 * diam.max(1.0);
    let f = |x: &[f64]| cloud.distance_to(x);

    let mut lower = body
        .vertices()
        .points()
        .map(f)
        .fold(0.0, f64::max);
    let mut heap = BinaryHeap::new();
    let evaluate = |lo: Vec<f64>, hi: Vec<f64>, lower: &mut f64| -> Option<Cell> {
        let c: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let r = 0.5
            * lo.iter()
                .zip(&hi)
                .map(|(a, b)| (b - a) * (b - a))
                .sum::<f64>()
                .sqrt();
        let (dk, q) = body.project_slice(&c);
        if dk > r * (1.0 + 1e-12) + 1e-15 {
            return None;
        }
        let fq = f(&q);
        if fq > *lower {
            *lower = fq;
        }
        let upper = (f(&c) + r).min(fq + r + dk);
        Some(Cell { lo, hi, upper })
    };
    if let Some(root) = evaluate(lo, hi, &mut lower) {
        heap.push(root);
    }
    let mut popped = 0;
    while let Some(cell) = heap.peek() {
        if cell.upper <= lower + tol || popped >= MAX_CELLS {
            break;
        }
        let cell = heap.pop().expect("peeked");
        popped += 1;
        let axis = (0..cell.lo.len())
            .max_by(|&a, &b| (cell.hi[a] - cell.lo[a]).total_cmp(&(cell.hi[b] - cell.lo[b])))
            .expect("dim >= 1");
        let mid = 0.5 * (cell.lo[axis] + cell.hi[axis]);
        let mut left_hi = cell.hi.clone();
        left_hi[axis] = mid;
        let mut right_lo = cell.lo.clone();
        right_lo[axis] = mid;
        for (a, b) in [(cell.lo.clone(), left_hi), (right_lo, cell.hi)] {
            if let Some(child) = evaluate(a, b, &mut lower) {
                if child.upper > lower + tol {
                    heap.push(child);
                }
            }
        }
    }
    let upper = heap.peek().map_or(lower, |c| c.upper.max(lower));
    Bracket {
        lower,
        upper: upper.max(lower),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::convex_hull;

    #[test]
    fn line_grid_against_segment() {
        let grid = PointCloud::new(1, (0..=4).map(|k| vec![k as f64 / 4.0]).collect()).unwrap();
        let seg = convex_hull(&PointCloud::new(1, vec![vec![0.0], vec![1.0]]).unwrap());
        assert_eq!(excess_body_to_cloud(&seg, &grid).unwrap(), Bracket::exact(0.125));
        let wide = convex_hull(&PointCloud::new(1, vec![vec![-1.0], vec![1.0]]).unwrap());
        assert_eq!(excess_body_to_cloud(&wide, &grid).unwrap().upper, 1.0);
    }

    #[test]
    fn square_against_its_corners() {
        let corners = PointCloud::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let b = excess_body_to_cloud(&convex_hull(&corners), &corners).unwrap();
        let truth = 2f64.sqrt() / 2.0;
        assert!(b.lower <= truth + 1e-12 && b.upper >= truth - 1e-12);
        assert!(b.width() <= 1e-8);
    }

    #[test]
    fn triangle_against_dense_grid_oracle() {
        let tri = convex_hull(
            &PointCloud::new(2, vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 2.0]]).unwrap(),
        );
        let cloud = PointCloud::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![3.0, 0.0], vec![0.2, 1.7]],
        )
        .unwrap();
        let b = excess_body_to_cloud(&tri, &cloud).unwrap();
        // Oracle: fine sampling of the triangle only ever under-estimates.
        let mut sampled: f64 = 0.0;
        let m = 600;
        for i in 0..=m {
            for j in 0..=m - i {
                let x = 3.0 * i as f64 / m as f64;
                let y = 2.0 * j as f64 / m as f64;
                if x / 3.0 + y / 2.0 <= 1.0 {
                    sampled = sampled.max(cloud.distance_to(&[x, y]));
                }
            }
        }
        assert!(b.upper >= sampled - 1e-12);
        assert!(b.upper - sampled < 1e-2);
        assert!(b.width() <= 1e-8);
    }
}
