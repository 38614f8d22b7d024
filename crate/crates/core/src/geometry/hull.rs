use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cloud::{minkowski_sum, scale, set_norm};
use super::min_norm::project_onto_hull;
use super::{dist, dot, PointCloud, Vector};
use crate::{Error, Result};

/// Absolute slack for hull membership.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-10;

const COLLINEAR: f64 = 1e-12;

#[derive(Debug, Clone)]
enum Shape {
    Interval(f64, f64),
    /// Counter-clockwise vertex loop.
    Polygon(Vec<[f64; 2]>),
    General,
}

/// A convex compact set stored by its extreme points.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "PointCloud", into = "PointCloud")]
pub struct ConvexBody {
    vertices: PointCloud,
    shape: Shape,
}

impl PartialEq for ConvexBody {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl From<PointCloud> for ConvexBody {
    fn from(c: PointCloud) -> Self {
        convex_hull(&c)
    }
}

impl From<ConvexBody> for PointCloud {
    fn from(b: ConvexBody) -> Self {
        b.vertices
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn turns_left(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    let la = ((a[0] - o[0]).powi(2) + (a[1] - o[1]).powi(2)).sqrt();
    let lb = ((b[0] - o[0]).powi(2) + (b[1] - o[1]).powi(2)).sqrt();
    cross(o, a, b) > COLLINEAR * la * lb
}

/// Andrew's monotone chain over lexicographically sorted points.
fn monotone_chain(sorted: &[[f64; 2]]) -> Vec<[f64; 2]> {
    if sorted.len() <= 1 {
        return sorted.to_vec();
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in sorted {
        while lower.len() >= 2 && !turns_left(lower[lower.len() - 2], lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in sorted.iter().rev() {
        while upper.len() >= 2 && !turns_left(upper[upper.len() - 2], upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Indices of extreme points, by eliminating every point that lies in the
/// hull of the surviving others.
fn extreme_indices(cloud: &PointCloud) -> Vec<usize> {
    let dim = cloud.dim();
    let n = cloud.len();
    let (lo, hi) = cloud.bounding_box();
    let span = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
    let tol = MEMBERSHIP_TOLERANCE * span.max(1.0);
    let mut alive: Vec<usize> = (0..n).collect();
    let mut i = 0;
    while i < alive.len() && alive.len() > 1 {
        let me = alive[i];
        let others: Vec<f64> = alive
            .iter()
            .filter(|&&j| j != me)
            .flat_map(|&j| cloud.point(j).iter().copied())
            .collect();
        let (d, _) = project_onto_hull(&others, dim, cloud.point(me));
        if d <= tol {
            alive.remove(i);
        } else {
            i += 1;
        }
    }
    alive
}

/// Convex hull of a cloud, represented by its extreme points.
pub fn convex_hull(cloud: &PointCloud) -> ConvexBody {
    let dim = cloud.dim();
    match dim {
        1 => {
            let lo = cloud.point(0)[0];
            let hi = cloud.point(cloud.len() - 1)[0];
            let vertices = PointCloud::canonical(1, vec![lo, hi]);
            ConvexBody {
                vertices,
                shape: Shape::Interval(lo, hi),
            }
        }
        2 => {
            let pts: Vec<[f64; 2]> = cloud.points().map(|p| [p[0], p[1]]).collect();
            let ring = monotone_chain(&pts);
            let vertices = PointCloud::canonical(2, ring.iter().flat_map(|p| *p).collect());
            ConvexBody {
                vertices,
                shape: Shape::Polygon(ring),
            }
        }
        _ => {
            let keep = extreme_indices(cloud);
            ConvexBody {
                vertices: cloud.select(&keep),
                shape: Shape::General,
            }
        }
    }
}

fn segment_projection(a: [f64; 2], b: [f64; 2], z: [f64; 2]) -> [f64; 2] {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return a;
    }
    let t = (((z[0] - a[0]) * ab[0] + (z[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    [a[0] + t * ab[0], a[1] + t * ab[1]]
}

fn polygon_projection(ring: &[[f64; 2]], z: [f64; 2]) -> (f64, [f64; 2]) {
    let k = ring.len();
    let d = |p: [f64; 2]| ((p[0] - z[0]).powi(2) + (p[1] - z[1]).powi(2)).sqrt();
    if k == 1 {
        return (d(ring[0]), ring[0]);
    }
    if k >= 3 && (0..k).all(|i| cross(ring[i], ring[(i + 1) % k], z) >= 0.0) {
        return (0.0, z);
    }
    let edges = if k == 2 { 1 } else { k };
    let mut best = (f64::INFINITY, ring[0]);
    for i in 0..edges {
        let p = segment_projection(ring[i], ring[(i + 1) % k], z);
        let dp = d(p);
        if dp < best.0 {
            best = (dp, p);
        }
    }
    best
}

impl ConvexBody {
    /// Wraps a cloud whose points are already in convex position.
    pub fn from_vertices(vertices: PointCloud) -> Result<Self> {
        let body = convex_hull(&vertices);
        if body.vertices.len() != vertices.len() {
            return Err(Error::InvalidArgument(format!(
                "{} of {} points are not extreme",
                vertices.len() - body.vertices.len(),
                vertices.len()
            )));
        }
        Ok(body)
    }

    pub fn point(v: &Vector) -> Self {
        convex_hull(&PointCloud::singleton(v))
    }

    pub fn dim(&self) -> usize {
        self.vertices.dim()
    }

    pub fn vertices(&self) -> &PointCloud {
        &self.vertices
    }

    pub fn into_vertices(self) -> PointCloud {
        self.vertices
    }

    /// `sup |x|` over the body.
    pub fn norm(&self) -> f64 {
        set_norm(&self.vertices)
    }

    /// Support value `sup <u, x>`.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .points()
            .map(|p| dot(p, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn project_slice(&self, z: &[f64]) -> (f64, Vec<f64>) {
        match &self.shape {
            Shape::Interval(lo, hi) => {
                let p = z[0].clamp(*lo, *hi);
                ((z[0] - p).abs(), vec![p])
            }
            Shape::Polygon(ring) => {
                let (d, p) = polygon_projection(ring, [z[0], z[1]]);
                (d, p.to_vec())
            }
            Shape::General => {
                if self.vertices.len() == 1 {
                    let v = self.vertices.point(0);
                    return (dist(v, z), v.to_vec());
                }
                project_onto_hull(self.vertices.as_flat(), self.dim(), z)
            }
        }
    }

    pub(crate) fn distance_to(&self, z: &[f64]) -> f64 {
        self.project_slice(z).0
    }

    pub fn distance(&self, z: &Vector) -> Result<f64> {
        self.vertices.check_dim(z.dim())?;
        Ok(self.distance_to(z.as_slice()))
    }

    /// Nearest point of the body to `z`.
    pub fn project(&self, z: &Vector) -> Result<Vector> {
        self.vertices.check_dim(z.dim())?;
        Ok(Vector::from_slice(&self.project_slice(z.as_slice()).1))
    }

    pub fn contains(&self, z: &Vector) -> Result<bool> {
        Ok(self.distance(z)? <= MEMBERSHIP_TOLERANCE)
    }

    /// `e(self, other)`; exact because distance to a convex set is convex, so
    /// its maximum over a polytope sits at a vertex.
    pub fn excess_over(&self, other: &ConvexBody) -> Result<f64> {
        self.vertices.check_dim(other.dim())?;
        Ok(self
            .vertices
            .points()
            .map(|v| other.distance_to(v))
            .fold(0.0, f64::max))
    }

    pub fn hausdorff(&self, other: &ConvexBody) -> Result<f64> {
        Ok(self.excess_over(other)?.max(other.excess_over(self)?))
    }

    /// `e(cloud, self)`: how far the cloud sticks out of the body.
    pub fn excess_of_cloud(&self, cloud: &PointCloud) -> Result<f64> {
        self.vertices.check_dim(cloud.dim())?;
        Ok(cloud
            .points()
            .map(|p| self.distance_to(p))
            .fold(0.0, f64::max))
    }

    /// Deterministic points of the body: the vertices, then seeded convex
    /// combinations of one to three vertices (an even grid on the line).
    pub fn sample(&self, count: usize, seed: u64) -> PointCloud {
        let dim = self.dim();
        if let Shape::Interval(lo, hi) = self.shape {
            let m = count.max(2);
            let data = (0..m)
                .map(|k| lo + (hi - lo) * k as f64 / (m - 1) as f64)
                .collect();
            return PointCloud::canonical(1, data);
        }
        let mut data = self.vertices.as_flat().to_vec();
        let nv = self.vertices.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let extra = count.saturating_sub(nv);
        for _ in 0..extra {
            let k = rng.random_range(1..=3.min(nv));
            let picks: Vec<usize> = (0..k).map(|_| rng.random_range(0..nv)).collect();
            let w: Vec<f64> = (0..k).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
            let total: f64 = w.iter().sum();
            let mut p = vec![0.0; dim];
            for (&i, wi) in picks.iter().zip(&w) {
                for (pk, vk) in p.iter_mut().zip(self.vertices.point(i)) {
                    *pk += wi / total * vk;
                }
            }
            data.extend(p);
        }
        PointCloud::canonical(dim, data)
    }
}

/// `sum_i w_i * body_i` for nonnegative weights, as a convex body.
pub fn minkowski_combination(terms: &[(f64, &ConvexBody)]) -> Result<ConvexBody> {
    let dim = terms.first().ok_or(Error::Empty)?.1.dim();
    let mut acc = PointCloud::origin(dim);
    for &(w, body) in terms {
        acc.check_dim(body.dim())?;
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::NegativeScale(w));
        }
        if w == 0.0 {
            continue;
        }
        let scaled = scale(&body.vertices, w)?;
        acc = convex_hull(&minkowski_sum(&acc, &scaled)?).vertices;
    }
    Ok(convex_hull(&acc))
}
