//! Finite-prefix diagnostics for Hausdorff, Fisher and Wijsman convergence.

mod metrics;
pub(crate) mod report;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{excess_body_to_cloud, ConvexBody, PointCloud, Vector};
use crate::{Error, Result};

pub use metrics::{
    diagnose, diagnose_with, fisher_metrics, hausdorff_metrics, wijsman_characterization, wijsman_metrics,
    Characterization, DiagnosticsConfig, FisherRow, ProbeKind, ProbeOutcome, Quantifier,
};
pub use report::{verdict, ConvergenceReport, ModeVerdict, ReportRow, Verdicts};

pub const DEFAULT_TOLERANCE: f64 = 1e-2;
pub const DEFAULT_WINDOW: usize = 8;
pub const DEFAULT_PROBE_COUNT: usize = 64;

/// Named scenario and parameters that regenerate a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

/// A finite prefix `X_1, ..., X_N` of a set sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceRepr", into = "SequenceRepr")]
pub struct SetSequence {
    dim: usize,
    terms: Vec<PointCloud>,
    generator: Option<Generator>,
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    dim: usize,
    terms: Vec<PointCloud>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<Generator>,
}

impl TryFrom<SequenceRepr> for SetSequence {
    type Error = Error;
    fn try_from(r: SequenceRepr) -> Result<Self> {
        let seq = SetSequence::new(r.terms)?;
        if seq.dim != r.dim {
            return Err(Error::DimensionMismatch {
                expected: r.dim,
                found: seq.dim,
            });
        }
        Ok(seq.with_generator(r.generator))
    }
}

impl From<SetSequence> for SequenceRepr {
    fn from(s: SetSequence) -> Self {
        SequenceRepr {
            dim: s.dim,
            terms: s.terms,
            generator: s.generator,
        }
    }
}

impl SetSequence {
    pub fn new(terms: Vec<PointCloud>) -> Result<Self> {
        let dim = terms.first().ok_or(Error::Empty)?.dim();
        for t in &terms {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: t.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            terms,
            generator: None,
        })
    }

    pub fn with_generator(mut self, generator: Option<Generator>) -> Self {
        self.generator = generator;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[PointCloud] {
        &self.terms
    }

    /// Term `X_n` with 1-based `n`.
    pub fn term(&self, n: usize) -> &PointCloud {
        &self.terms[n - 1]
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }
}

/// Candidate limit of a sequence: a finite set or a convex body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "set", rename_all = "snake_case")]
pub enum Limit {
    Cloud(PointCloud),
    Body(ConvexBody),
}

impl From<PointCloud> for Limit {
    fn from(c: PointCloud) -> Self {
        Limit::Cloud(c)
    }
}

impl From<ConvexBody> for Limit {
    fn from(b: ConvexBody) -> Self {
        Limit::Body(b)
    }
}

impl Limit {
    pub fn dim(&self) -> usize {
        self.points().dim()
    }

    /// The stored points (vertices for a body).
    pub fn points(&self) -> &PointCloud {
        match self {
            Limit::Cloud(c) => c,
            Limit::Body(b) => b.vertices(),
        }
    }

    pub(crate) fn distance_to(&self, z: &[f64]) -> f64 {
        match self {
            Limit::Cloud(c) => c.distance_to(z),
            Limit::Body(b) => b.distance_to(z),
        }
    }

    /// `e(x, limit)`.
    pub(crate) fn excess_of(&self, x: &PointCloud) -> f64 {
        match self {
            Limit::Cloud(c) => x.excess_over(c),
            Limit::Body(b) => b.excess_of_cloud(x).expect("dimension checked"),
        }
    }

    /// `e(limit, x)`; an upper bound of width `1e-9 * scale` for bodies in d >= 2.
    pub(crate) fn excess_into(&self, x: &PointCloud) -> f64 {
        match self {
            Limit::Cloud(c) => c.excess_over(x),
            Limit::Body(b) => excess_body_to_cloud(b, x).expect("dimension checked").upper,
        }
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        self.points().check_dim(found)
    }
}

/// Points at which distance functions are compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSet {
    probes: Vec<Vector>,
}

impl ProbeSet {
    pub fn new(probes: Vec<Vector>) -> Result<Self> {
        let dim = probes.first().ok_or(Error::Empty)?.dim();
        for p in &probes {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        Ok(Self { probes })
    }

    pub fn from_cloud(cloud: &PointCloud) -> Self {
        Self {
            probes: cloud.to_vectors(),
        }
    }

    pub fn dim(&self) -> usize {
        self.probes[0].dim()
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn probes(&self) -> &[Vector] {
        &self.probes
    }

    pub fn union(&self, other: &ProbeSet) -> Result<ProbeSet> {
        let mut probes = self.probes.clone();
        probes.extend(other.probes.iter().cloned());
        ProbeSet::new(probes)
    }

    /// Points of the limit, plus `count` interior samples when it is convex.
    pub fn limit_probes(limit: &Limit, count: usize, seed: u64) -> Self {
        match limit {
            Limit::Cloud(c) => Self::from_cloud(c),
            Limit::Body(b) => Self::from_cloud(&b.sample(b.vertices().len() + count, seed)),
        }
    }

    /// Seeded uniform sample of `count` points in the bounding box of the
    /// limit and the terms, inflated by half its size.
    pub fn exterior_probes(seq: &SetSequence, limit: &Limit, count: usize, seed: u64) -> Result<Self> {
        limit.check_dim(seq.dim())?;
        let (mut lo, mut hi) = limit.points().bounding_box();
        for t in seq.terms() {
            let (a, b) = t.bounding_box();
            for k in 0..lo.len() {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pad: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| if b > a { 0.25 * (b - a) } else { 0.5 })
            .collect();
        let probes = (0..count.max(1))
            .map(|_| {
                let coords = (0..lo.len())
                    .map(|k| rng.random_range(lo[k] - pad[k]..=hi[k] + pad[k]))
                    .collect();
                Vector::new(coords).expect("finite box")
            })
            .collect();
        ProbeSet::new(probes)
    }

    /// Ambient probes: an exterior sample, the limit probes and up to
    /// `count` points of the final term (these expose a wrong candidate limit).
    pub fn ambient_probes(seq: &SetSequence, limit: &Limit, count: usize, seed: u64) -> Result<Self> {
        let mut all = Self::exterior_probes(seq, limit, count, seed)?;
        all = all.union(&Self::limit_probes(limit, count, seed ^ 0x9e37_79b9))?;
        let last = seq.term(seq.len());
        let stride = last.len().div_ceil(count.max(1));
        let tail: Vec<Vector> = last
            .points()
            .step_by(stride.max(1))
            .map(|p| Vector::new(p.to_vec()).expect("finite"))
            .collect();
        all.union(&ProbeSet::new(tail)?)
    }
}
