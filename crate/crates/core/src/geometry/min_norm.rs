//! Wolfe's active-set method for the minimum-norm point of a polytope.
//!
//! Used for point-to-hull distances, projections and extreme-point tests in
//! dimensions where no dedicated planar code exists.

use super::dot;

const OPTIMALITY: f64 = 1e-14;
const POSITIVE: f64 = 1e-12;

fn row(points: &[f64], dim: usize, i: usize) -> &[f64] {
    &points[i * dim..(i + 1) * dim]
}

/// Weights of the minimum-norm point of the affine hull of the corral, or
/// `None` when the corral is affinely dependent.
fn affine_minimizer(points: &[f64], dim: usize, corral: &[usize]) -> Option<Vec<f64>> {
    let k = corral.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    let p0 = row(points, dim, corral[0]);
    let diffs: Vec<Vec<f64>> = corral[1..]
        .iter()
        .map(|&i| row(points, dim, i).iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let m = k - 1;
    // Normal equations (D^T D) beta = -D^T p0, augmented column last.
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = dot(&diffs[i], &diffs[j]);
        }
        a[i][m] = -dot(&diffs[i], p0);
    }
    let trace: f64 = (0..m).map(|i| a[i][i]).sum();
    if trace <= 0.0 {
        return None;
    }
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[pivot][col].abs() <= 1e-13 * trace {
            return None;
        }
        a.swap(col, pivot);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=m {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    let beta: Vec<f64> = (0..m).map(|i| a[i][m] / a[i][i]).collect();
    let mut alpha = Vec::with_capacity(k);
    alpha.push(1.0 - beta.iter().sum::<f64>());
    alpha.extend(beta);
    Some(alpha)
}

fn combine(points: &[f64], dim: usize, corral: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (&i, &w) in corral.iter().zip(weights) {
        for (xk, pk) in x.iter_mut().zip(row(points, dim, i)) {
            *xk += w * pk;
        }
    }
    x
}

/// Minimum-norm point of the convex hull of the row-major `points`.
pub fn min_norm_point(points: &[f64], dim: usize) -> Vec<f64> {
    let n = points.len() / dim;
    assert!(n > 0, "min_norm_point needs at least one point");
    let norms: Vec<f64> = (0..n)
        .map(|i| dot(row(points, dim, i), row(points, dim, i)))
        .collect();
    let scale = norms.iter().cloned().fold(0.0, f64::max);
    if scale == 0.0 {
        return vec![0.0; dim];
    }
    let start = (0..n).min_by(|&a, &b| norms[a].total_cmp(&norms[b])).unwrap();
    let mut corral = vec![start];
    let mut lambda = vec![1.0];
    let mut x = row(points, dim, start).to_vec();

    'major: for _ in 0..(100 + 20 * n) {
        let xx = dot(&x, &x);
        let (j, xp) = (0..n)
            .map(|i| (i, dot(&x, row(points, dim, i))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - xp <= OPTIMALITY * scale || corral.contains(&j) {
            break;
        }
        corral.push(j);
        lambda.push(0.0);
        loop {
            let Some(alpha) = affine_minimizer(points, dim, &corral) else {
                corral.pop();
                lambda.pop();
                break 'major;
            };
            if alpha.iter().all(|&a| a > POSITIVE) {
                lambda = alpha;
                x = combine(points, dim, &corral, &lambda);
                break;
            }
            let mut theta = 1.0;
            let mut blocking = None;
            for i in 0..corral.len() {
                if alpha[i] <= POSITIVE {
                    let denom = lambda[i] - alpha[i];
                    if denom > 0.0 && lambda[i] / denom < theta {
                        theta = lambda[i] / denom;
                        blocking = Some(i);
                    }
                }
            }
            for i in 0..corral.len() {
                lambda[i] = theta * alpha[i] + (1.0 - theta) * lambda[i];
            }
            if let Some(b) = blocking {
                lambda[b] = 0.0;
            }
            let mut keep_c = Vec::with_capacity(corral.len());
            let mut keep_l = Vec::with_capacity(corral.len());
            for (&c, &l) in corral.iter().zip(&lambda) {
                if l > POSITIVE {
                    keep_c.push(c);
                    keep_l.push(l);
                }
            }
            if keep_c.is_empty() {
                // Numerical collapse; restart from the newest point.
                keep_c.push(*corral.last().unwrap());
                keep_l.push(1.0);
            }
            let total: f64 = keep_l.iter().sum();
            keep_l.iter_mut().for_each(|l| *l /= total);
            corral = keep_c;
            lambda = keep_l;
            x = combine(points, dim, &corral, &lambda);
        }
    }
    x
}

/// Distance from `z` to the hull of `points` and the projection of `z`.
pub(crate) fn project_onto_hull(points: &[f64], dim: usize, z: &[f64]) -> (f64, Vec<f64>) {
    let shifted: Vec<f64> = points
        .chunks_exact(dim)
        .flat_map(|p| p.iter().zip(z).map(|(a, b)| a - b))
        .collect();
    let x = min_norm_point(&shifted, dim);
    let d = dot(&x, &x).sqrt();
    let proj = x.iter().zip(z).map(|(a, b)| a + b).collect();
    (d, proj)
}
