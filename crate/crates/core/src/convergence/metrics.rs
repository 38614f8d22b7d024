use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{verdict, ConvergenceReport, ReportRow};
use super::{Limit, ProbeSet, SetSequence, DEFAULT_PROBE_COUNT, DEFAULT_TOLERANCE, DEFAULT_WINDOW};
use crate::{Error, Result};

/// Distances below this count as "the probe lies in the limit".
const ON_LIMIT: f64 = 1e-12;

/// Which probe family feeds which mode.
///
/// `Corrected` takes Fisher's pointwise condition over points of the limit and
/// Wijsman's over the ambient space; `Literal` swaps the two quantifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    #[default]
    Corrected,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiagnosticsConfig {
    pub tolerance: f64,
    pub window: usize,
    pub probe_count: usize,
    pub seed: u64,
    pub quantifier: Quantifier,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            window: DEFAULT_WINDOW,
            probe_count: DEFAULT_PROBE_COUNT,
            seed: 0,
            quantifier: Quantifier::Corrected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherRow {
    /// `e(X_n, X)`.
    pub excess: f64,
    /// `max_z d(z, X_n)` over the probes.
    pub probe_deficit: f64,
}

fn check(seq: &SetSequence, limit: &Limit, probes: Option<&ProbeSet>) -> Result<()> {
    limit.check_dim(seq.dim())?;
    if let Some(p) = probes {
        limit.check_dim(p.dim())?;
    }
    Ok(())
}

/// `h(X_n, X)` for every term.
pub fn hausdorff_metrics(seq: &SetSequence, limit: &Limit) -> Result<Vec<f64>> {
    check(seq, limit, None)?;
    Ok(seq
        .terms()
        .par_iter()
        .map(|x| limit.excess_of(x).max(limit.excess_into(x)))
        .collect())
}

/// `e(X_n, X)` and the largest probe distance `d(z, X_n)` for every term.
pub fn fisher_metrics(seq: &SetSequence, limit: &Limit, probes: &ProbeSet) -> Result<Vec<FisherRow>> {
    check(seq, limit, Some(probes))?;
    Ok(seq
        .terms()
        .par_iter()
        .map(|x| FisherRow {
            excess: limit.excess_of(x),
            probe_deficit: probes
                .probes()
                .iter()
                .map(|z| x.distance_to(z.as_slice()))
                .fold(0.0, f64::max),
        })
        .collect())
}

/// `max_z |d(z, X_n) - d(z, X)|` for every term.
pub fn wijsman_metrics(seq: &SetSequence, limit: &Limit, probes: &ProbeSet) -> Result<Vec<f64>> {
    check(seq, limit, Some(probes))?;
    let base: Vec<f64> = probes
        .probes()
        .iter()
        .map(|z| limit.distance_to(z.as_slice()))
        .collect();
    Ok(seq
        .terms()
        .par_iter()
        .map(|x| {
            probes
                .probes()
                .iter()
                .zip(&base)
                .map(|(z, b)| (x.distance_to(z.as_slice()) - b).abs())
                .fold(0.0, f64::max)
        })
        .collect())
}

/// Runs all three modes with explicit probe families.
pub fn diagnose_with(
    seq: &SetSequence,
    limit: &Limit,
    fisher_probes: &ProbeSet,
    wijsman_probes: &ProbeSet,
    tolerance: f64,
    window: usize,
) -> Result<ConvergenceReport> {
    let h = hausdorff_metrics(seq, limit)?;
    let f = fisher_metrics(seq, limit, fisher_probes)?;
    let w = wijsman_metrics(seq, limit, wijsman_probes)?;
    let rows: Vec<ReportRow> = (0..seq.len())
        .map(|i| ReportRow {
            n: i + 1,
            e_excess: f[i].excess,
            fisher_probe_deficit: f[i].probe_deficit,
            wijsman_error: w[i],
            hausdorff: h[i],
        })
        .collect();
    let verdicts = verdict(&rows, tolerance, window)?;
    Ok(ConvergenceReport { rows, verdicts })
}

/// Runs all three modes with the default probe construction.
pub fn diagnose(seq: &SetSequence, limit: &Limit, cfg: &DiagnosticsConfig) -> Result<ConvergenceReport> {
    check(seq, limit, None)?;
    let on_limit = ProbeSet::limit_probes(limit, cfg.probe_count, cfg.seed);
    let ambient = ProbeSet::ambient_probes(seq, limit, cfg.probe_count, cfg.seed)?;
    let (fisher, wijsman) = match cfg.quantifier {
        Quantifier::Corrected => (on_limit, ambient),
        Quantifier::Literal => (ambient, on_limit),
    };
    diagnose_with(seq, limit, &fisher, &wijsman, cfg.tolerance, cfg.window)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    /// `d(z, X) > 0`: no late term may enter `B(z, d(z, X) - epsilon)`.
    Exterior,
    /// `z` in the limit: late terms must come within `epsilon` of `z`.
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub probe: usize,
    pub kind: ProbeKind,
    /// First index after which every term behaves; `None` when skipped.
    pub n0: Option<usize>,
    pub holds: bool,
    /// Set when `epsilon >= d(z, X)` for an exterior probe.
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Characterization {
    pub epsilon: f64,
    pub window: usize,
    pub outcomes: Vec<ProbeOutcome>,
}

impl Characterization {
    /// Every probe that was not skipped holds.
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(|o| o.skipped || o.holds)
    }

    pub fn skipped(&self) -> usize {
        self.outcomes.iter().filter(|o| o.skipped).count()
    }
}

/// Per-probe test of the ball-avoidance / approach characterization of
/// Wijsman limits. A probe holds when the good behaviour starts early enough
/// to cover at least the final `window` terms.
pub fn wijsman_characterization(
    seq: &SetSequence,
    limit: &Limit,
    probes: &ProbeSet,
    epsilon: f64,
    window: usize,
) -> Result<Characterization> {
    check(seq, limit, Some(probes))?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let n = seq.len();
    if window == 0 || window > n {
        return Err(Error::InvalidWindow { window, rows: n });
    }
    let outcomes = probes
        .probes()
        .par_iter()
        .enumerate()
        .map(|(i, z)| {
            let z = z.as_slice();
            let dz = limit.distance_to(z);
            let kind = if dz > ON_LIMIT {
                ProbeKind::Exterior
            } else {
                ProbeKind::Limit
            };
            if kind == ProbeKind::Exterior && epsilon >= dz {
                return ProbeOutcome {
                    probe: i,
                    kind,
                    n0: None,
                    holds: false,
                    skipped: true,
                };
            }
            let bad = |x: &crate::geometry::PointCloud| {
                let d = x.distance_to(z);
                match kind {
                    ProbeKind::Exterior => d < dz - epsilon,
                    ProbeKind::Limit => d > epsilon,
                }
            };
            let n0 = seq.terms().iter().rposition(bad).map_or(1, |last| last + 2);
            ProbeOutcome {
                probe: i,
                kind,
                n0: Some(n0),
                holds: n0 + window <= n + 1,
                skipped: false,
            }
        })
        .collect();
    Ok(Characterization {
        epsilon,
        window,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{PointCloud, Vector};

    fn line(points: &[f64]) -> PointCloud {
        PointCloud::new(1, points.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn probes(points: &[f64]) -> ProbeSet {
        ProbeSet::new(points.iter().map(|&x| Vector::new(vec![x]).unwrap()).collect()).unwrap()
    }

    #[test]
    fn constant_sequence_is_zero_everywhere() {
        let x = line(&[0.0, 1.0, 3.0]);
        let seq = SetSequence::new(vec![x.clone(); 5]).unwrap();
        let limit = Limit::Cloud(x);
        let cfg = DiagnosticsConfig {
            window: 5,
            ..Default::default()
        };
        let report = diagnose(&seq, &limit, &cfg).unwrap();
        for r in &report.rows {
            assert_eq!((r.e_excess, r.fisher_probe_deficit, r.wijsman_error, r.hausdorff), (0.0, 0.0, 0.0, 0.0));
        }
        let ch = wijsman_characterization(&seq, &limit, &probes(&[-2.0, 0.0, 2.0]), 0.3, 5).unwrap();
        assert!(ch.all_hold());
        assert!(ch.outcomes.iter().all(|o| o.n0 == Some(1)));
    }

    #[test]
    fn reciprocal_sequence_characterization() {
        let seq = SetSequence::new((1..=10).map(|n| line(&[1.0 / n as f64])).collect()).unwrap();
        let limit = Limit::Cloud(line(&[0.0]));
        let ch = wijsman_characterization(&seq, &limit, &probes(&[1.0]), 0.4, 1).unwrap();
        assert_eq!(ch.outcomes[0].kind, ProbeKind::Exterior);
        assert_eq!(ch.outcomes[0].n0, Some(3));
        assert!(ch.outcomes[0].holds);
    }

    #[test]
    fn oscillation_into_the_ball_fails() {
        let seq = SetSequence::new(
            (1..=12)
                .map(|n| line(&[if n % 2 == 0 { 0.9 } else { 0.0 }]))
                .collect(),
        )
        .unwrap();
        let limit = Limit::Cloud(line(&[0.0]));
        let ch = wijsman_characterization(&seq, &limit, &probes(&[1.0]), 0.4, 2).unwrap();
        assert!(!ch.outcomes[0].holds);
        assert!(!ch.all_hold());
    }

    #[test]
    fn epsilon_beyond_probe_distance_is_skipped() {
        let seq = SetSequence::new(vec![line(&[0.0]); 3]).unwrap();
        let limit = Limit::Cloud(line(&[0.0]));
        let ch = wijsman_characterization(&seq, &limit, &probes(&[0.5, 0.0]), 0.6, 1).unwrap();
        assert!(ch.outcomes[0].skipped);
        assert_eq!(ch.outcomes[1].kind, ProbeKind::Limit);
        assert_eq!(ch.skipped(), 1);
        assert!(wijsman_characterization(&seq, &limit, &probes(&[0.5]), 0.1, 4).is_err());
    }

    #[test]
    fn quantifier_switch_swaps_probe_roles() {
        let seq = SetSequence::new(vec![line(&[0.0]), line(&[0.0, 1.0])]).unwrap();
        let limit = Limit::Cloud(line(&[0.0, 1.0]));
        let corrected = diagnose(
            &seq,
            &limit,
            &DiagnosticsConfig {
                window: 2,
                ..Default::default()
            },
        )
        .unwrap();
        let literal = diagnose(
            &seq,
            &limit,
            &DiagnosticsConfig {
                quantifier: Quantifier::Literal,
                window: 2,
                ..Default::default()
            },
        )
        .unwrap();
        // Limit probes see the missing point 1 at n = 1 in both roles.
        assert_eq!(corrected.rows[0].fisher_probe_deficit, 1.0);
        assert_eq!(literal.rows[0].wijsman_error, 1.0);
        assert_eq!(corrected.rows[1].hausdorff, 0.0);
    }
}
