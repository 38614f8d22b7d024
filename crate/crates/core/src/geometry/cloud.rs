use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{dist, norm, Vector};
use crate::{Error, Result};

/// Per-coordinate tolerance under which two points are the same point.
pub const DEDUP_TOLERANCE: f64 = 1e-12;

/// A finite nonempty set of points in `R^d`.
///
/// Points are kept in canonical form: sorted lexicographically with
/// near-duplicates (every coordinate within [`DEDUP_TOLERANCE`]) removed, so
/// structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CloudRepr", into = "CloudRepr")]
pub struct PointCloud {
    dim: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CloudRepr {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl TryFrom<CloudRepr> for PointCloud {
    type Error = Error;

    fn try_from(r: CloudRepr) -> Result<Self> {
        PointCloud::new(r.dim, r.points)
    }
}

impl From<PointCloud> for CloudRepr {
    fn from(c: PointCloud) -> Self {
        CloudRepr {
            dim: c.dim,
            points: c.points().map(<[f64]>::to_vec).collect(),
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn near(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= DEDUP_TOLERANCE)
}

impl PointCloud {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut data = Vec::with_capacity(points.len() * dim);
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            data.extend_from_slice(p);
        }
        Self::from_flat(dim, data)
    }

    /// Builds a cloud from row-major coordinates.
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if data.is_empty() {
            return Err(Error::Empty);
        }
        if data.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: data.len() % dim,
            });
        }
        if let Some(&bad) = data.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Self::canonical(dim, data))
    }

    pub fn from_vectors(points: &[Vector]) -> Result<Self> {
        let dim = points.first().ok_or(Error::Empty)?.dim();
        Self::new(dim, points.iter().map(|v| v.as_slice().to_vec()).collect())
    }

    pub fn singleton(point: &Vector) -> Self {
        PointCloud {
            dim: point.dim(),
            data: point.as_slice().to_vec(),
        }
    }

    /// The set `{0}`.
    pub fn origin(dim: usize) -> Self {
        PointCloud {
            dim,
            data: vec![0.0; dim],
        }
    }

    /// Sorts and deduplicates; input must already be validated.
    pub(crate) fn canonical(dim: usize, data: Vec<f64>) -> Self {
        let n = data.len() / dim;
        let sorted = {
            let rows = |i: usize| &data[i * dim..(i + 1) * dim];
            if (1..n).all(|i| lex_cmp(rows(i - 1), rows(i)) != Ordering::Greater) {
                None
            } else {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&i, &j| lex_cmp(rows(i), rows(j)));
                let mut out = Vec::with_capacity(data.len());
                for i in order {
                    out.extend_from_slice(rows(i));
                }
                Some(out)
            }
        };
        let data = sorted.unwrap_or(data);
        let mut out: Vec<f64> = Vec::with_capacity(data.len());
        for p in data.chunks_exact(dim) {
            let dup = out.len() >= dim && near(&out[out.len() - dim..], p);
            if !dup {
                out.extend_from_slice(p);
            }
        }
        PointCloud { dim, data: out }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn to_vectors(&self) -> Vec<Vector> {
        self.points().map(Vector::from_slice).collect()
    }

    /// Lexicographically smallest point.
    pub fn first(&self) -> &[f64] {
        self.point(0)
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        self.points().any(|p| near(p, z))
    }

    /// The subset at the given (sorted or unsorted) indices.
    pub(crate) fn select(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.point(i));
        }
        Self::canonical(self.dim, data)
    }

    pub fn translate(&self, shift: &[f64]) -> Result<Self> {
        self.check_dim(shift.len())?;
        let data = self
            .points()
            .flat_map(|p| p.iter().zip(shift).map(|(x, s)| x + s))
            .collect();
        Self::from_flat(self.dim, data)
    }

    pub fn union(&self, other: &PointCloud) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self::canonical(self.dim, data))
    }

    /// Coordinate-wise (min, max) corners.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, p) in self.points().enumerate() {
            for q in self.points().skip(i + 1) {
                best = best.max(dist(p, q));
            }
        }
        best
    }

    pub fn centroid(&self) -> Vector {
        let n = self.len() as f64;
        let mut c = vec![0.0; self.dim];
        for p in self.points() {
            for (ck, pk) in c.iter_mut().zip(p) {
                *ck += pk;
            }
        }
        c.iter_mut().for_each(|x| *x /= n);
        Vector::from_slice(&c)
    }

    /// Distance from `z` to the nearest point.
    pub(crate) fn distance_to(&self, z: &[f64]) -> f64 {
        if self.dim == 1 {
            // Sorted on the line: only the neighbours of the insertion point matter.
            let x = z[0];
            let i = self.data.partition_point(|&p| p < x);
            let mut best = f64::INFINITY;
            if i < self.data.len() {
                best = best.min((self.data[i] - x).abs());
            }
            if i > 0 {
                best = best.min((self.data[i - 1] - x).abs());
            }
            return best;
        }
        // Points are sorted by first coordinate: scan outward from z's slot and
        // stop each direction once that coordinate alone exceeds the best.
        let dim = self.dim;
        let n = self.len();
        let start = {
            let (mut lo, mut hi) = (0, n);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if self.data[mid * dim] < z[0] {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        let mut best = f64::INFINITY;
        for i in start..n {
            let gap = self.data[i * dim] - z[0];
            if gap * gap > best {
                break;
            }
            best = best.min(super::dist_sq(self.point(i), z));
        }
        for i in (0..start).rev() {
            let gap = z[0] - self.data[i * dim];
            if gap * gap > best {
                break;
            }
            best = best.min(super::dist_sq(self.point(i), z));
        }
        best.sqrt()
    }

    /// `sup_{x in self} d(x, other)` without dimension checks.
    pub(crate) fn excess_over(&self, other: &PointCloud) -> f64 {
        self.points()
            .map(|p| other.distance_to(p))
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            })
        } else {
            Ok(())
        }
    }
}

/// Exact Minkowski sum `{x + y}`, deduplicated.
pub fn minkowski_sum(a: &PointCloud, b: &PointCloud) -> Result<PointCloud> {
    a.check_dim(b.dim)?;
    let dim = a.dim;
    let mut data = Vec::with_capacity(a.data.len() * b.len());
    // Each `a + y` is a sorted run, which keeps the canonical sort cheap.
    for q in b.points() {
        for p in a.points() {
            data.extend(p.iter().zip(q).map(|(x, y)| x + y));
        }
    }
    Ok(PointCloud::canonical(dim, data))
}

/// `lambda * a`; `lambda = 0` collapses to the origin.
pub fn scale(a: &PointCloud, lambda: f64) -> Result<PointCloud> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::NegativeScale(lambda));
    }
    if lambda == 0.0 {
        return Ok(PointCloud::origin(a.dim));
    }
    let data = a.data.iter().map(|x| x * lambda).collect();
    Ok(PointCloud::canonical(a.dim, data))
}

pub fn dist_point_set(z: &Vector, x: &PointCloud) -> Result<f64> {
    x.check_dim(z.dim())?;
    Ok(x.distance_to(z.as_slice()))
}

/// `e(x, y) = sup_{p in x} d(p, y)`.
pub fn directed_excess(x: &PointCloud, y: &PointCloud) -> Result<f64> {
    x.check_dim(y.dim)?;
    Ok(x.excess_over(y))
}

pub fn hausdorff(x: &PointCloud, y: &PointCloud) -> Result<f64> {
    x.check_dim(y.dim)?;
    Ok(x.excess_over(y).max(y.excess_over(x)))
}

/// `sup_{p in x} |p|`.
pub fn set_norm(x: &PointCloud) -> f64 {
    x.points().map(norm).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> PointCloud {
        PointCloud::new(1, points.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn plane(points: &[[f64; 2]]) -> PointCloud {
        PointCloud::new(2, points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn square() -> PointCloud {
        plane(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    }

    #[test]
    fn canonical_form_sorts_and_dedups() {
        let c = plane(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1e-14], [0.0, 1.0]]);
        assert_eq!(c.len(), 2);
        assert_eq!(c.point(0), &[0.0, 1.0]);
        assert_eq!(c, plane(&[[0.0, 1.0], [1.0, 0.0]]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(PointCloud::new(2, vec![]), Err(Error::Empty)));
        assert!(matches!(
            PointCloud::new(2, vec![vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            PointCloud::new(1, vec![vec![f64::NAN]]),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(PointCloud::new(0, vec![]), Err(Error::ZeroDimension)));
    }

    #[test]
    fn json_shape() {
        let c = plane(&[[1.0, 2.0], [0.5, 0.0]]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"dim":2,"points":[[0.5,0.0],[1.0,2.0]]}"#);
        let back: PointCloud = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<PointCloud>(r#"{"dim":2,"points":[[1.0]]}"#).is_err());
    }

    #[test]
    fn minkowski_identity_and_enumeration() {
        let b = square();
        assert_eq!(minkowski_sum(&PointCloud::origin(2), &b).unwrap(), b);
        let s = minkowski_sum(&line(&[0.0, 1.0]), &line(&[0.0, 2.0])).unwrap();
        assert_eq!(s, line(&[0.0, 1.0, 2.0, 3.0]));
    }

    #[test]
    fn half_square_sum_is_nine_point_grid() {
        let sq = square();
        let s = scale(&minkowski_sum(&sq, &sq).unwrap(), 0.5).unwrap();
        // Oracle: enumerate all 16 pairwise sums by hand and deduplicate.
        let mut expected = Vec::new();
        for a in [0.0, 1.0] {
            for b in [0.0, 1.0] {
                for c in [0.0, 1.0] {
                    for d in [0.0, 1.0] {
                        expected.push(vec![(a + c) / 2.0, (b + d) / 2.0]);
                    }
                }
            }
        }
        let expected = PointCloud::new(2, expected).unwrap();
        assert_eq!(expected.len(), 9);
        assert_eq!(s, expected);
    }

    #[test]
    fn scale_cases() {
        let x = square();
        assert_eq!(scale(&x, 1.0).unwrap(), x);
        assert_eq!(scale(&x, 0.0).unwrap(), PointCloud::origin(2));
        assert_eq!(scale(&plane(&[[1.0, 1.0]]), 2.0).unwrap(), plane(&[[2.0, 2.0]]));
        assert!(matches!(scale(&x, -1.0), Err(Error::NegativeScale(_))));
    }

    #[test]
    fn distances() {
        let z = Vector::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(dist_point_set(&z, &PointCloud::origin(2)).unwrap(), 5.0);
        let half = Vector::new(vec![0.5]).unwrap();
        assert_eq!(dist_point_set(&half, &line(&[0.0, 1.0])).unwrap(), 0.5);
        assert_eq!(
            dist_point_set(&Vector::new(vec![1.0]).unwrap(), &line(&[0.0, 1.0])).unwrap(),
            0.0
        );
        assert!(dist_point_set(&half, &square()).is_err());
    }

    #[test]
    fn excess_is_asymmetric() {
        let two = plane(&[[0.0, 0.0], [2.0, 0.0]]);
        let one = PointCloud::origin(2);
        assert_eq!(directed_excess(&two, &one).unwrap(), 2.0);
        assert_eq!(directed_excess(&one, &two).unwrap(), 0.0);
        assert_eq!(hausdorff(&one, &two).unwrap(), 2.0);
    }

    #[test]
    fn hausdorff_examples() {
        let x = square();
        assert_eq!(hausdorff(&x, &x).unwrap(), 0.0);
        assert_eq!(
            hausdorff(&PointCloud::origin(2), &plane(&[[3.0, 4.0]])).unwrap(),
            5.0
        );
        // Oracle: the 4x1 distance matrix from the corners to the centre.
        let centre = plane(&[[0.5, 0.5]]);
        let brute = x
            .points()
            .map(|p| ((p[0] - 0.5).powi(2) + (p[1] - 0.5).powi(2)).sqrt())
            .fold(0.0, f64::max);
        let h = hausdorff(&x, &centre).unwrap();
        assert_eq!(h, brute);
        assert!((h - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn set_norm_examples() {
        assert_eq!(set_norm(&PointCloud::origin(3)), 0.0);
        assert_eq!(set_norm(&square()), 2f64.sqrt());
        let x = plane(&[[1.0, -2.0], [0.5, 0.25]]);
        assert!((set_norm(&scale(&x, 3.0).unwrap()) - 3.0 * set_norm(&x)).abs() < 1e-15);
    }

    #[test]
    fn line_distance_uses_both_neighbours() {
        let c = line(&[-1.0, 0.0, 4.0]);
        assert_eq!(c.distance_to(&[1.5]), 1.5);
        assert_eq!(c.distance_to(&[3.0]), 1.0);
        assert_eq!(c.distance_to(&[-7.0]), 6.0);
        assert_eq!(c.distance_to(&[9.0]), 5.0);
    }
}
