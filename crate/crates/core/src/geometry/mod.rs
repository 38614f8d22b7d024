//! Finite point sets, convex bodies and the metrics between them.

mod ball;
mod cloud;
mod excess;
mod hull;
mod min_norm;
mod prune;
mod vector;

pub use ball::{circumradius, min_enclosing_ball, Ball};
pub use cloud::{
    directed_excess, dist_point_set, hausdorff, minkowski_sum, scale, set_norm, PointCloud,
    DEDUP_TOLERANCE,
};
pub use excess::{excess_body_to_cloud, Bracket};
pub use hull::{convex_hull, minkowski_combination, ConvexBody, MEMBERSHIP_TOLERANCE};
pub use min_norm::min_norm_point;
pub use prune::{prune, PruneBudget};
pub(crate) use prune::prune_with_tolerance;
pub use vector::Vector;

/// Squared Euclidean distance between two coordinate slices.
#[inline]
pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance; exact absolute difference on the line.
#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    if a.len() == 1 {
        (a[0] - b[0]).abs()
    } else {
        dist_sq(a, b).sqrt()
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    if a.len() == 1 {
        a[0].abs()
    } else {
        dot(a, a).sqrt()
    }
}
