use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode};
use crate::convergence::report::judge;
use crate::convergence::{Limit, ModeVerdict, ProbeSet, SetSequence};
use crate::convexification::averages::{average, step_sum};
use crate::convexification::{build_family_net, gamma_limit, quantize};
use crate::geometry::{
    circumradius, convex_hull, excess_body_to_cloud, minkowski_combination, ConvexBody, PointCloud, PruneBudget,
};
use crate::radstrom::{embed, DirectionGrid};
use crate::random_sets::aumann_expectation;
use crate::{Error, Result};

/// Rounding slack granted to every asserted inequality.
const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub n: usize,
    /// `h(convexified average, E(F))`.
    pub h_convex: f64,
    /// `e(raw average, E(F))`.
    pub fisher_e: Option<f64>,
    pub fisher_probe_deficit: Option<f64>,
    pub wijsman_error: Option<f64>,
    /// `h(raw average, E(F))`.
    pub h_raw: Option<f64>,
    pub prune_error_bound: f64,
    /// Seconds since the run started.
    pub wall_time: f64,
}

/// One asserted inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub n: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InvariantCheck {
    fn new(name: &str, n: Option<usize>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            n,
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaRow {
    pub epsilon: f64,
    /// Family indices of the net centers.
    pub centers: Vec<usize>,
    /// Empirical center fractions at `n_max`.
    pub fractions: Vec<f64>,
    /// `h(E(F), Gamma)`.
    pub h_expectation_gamma: f64,
    /// `h(convexified average at n_max, Gamma)`.
    pub h_average_gamma: f64,
    /// Largest running mean of per-term assignment errors.
    pub max_averaged_error: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunVerdicts {
    pub convex_hausdorff: Option<ModeVerdict>,
    pub general_fisher: Option<ModeVerdict>,
    pub general_hausdorff: Option<ModeVerdict>,
    pub general_wijsman: Option<ModeVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    pub mode: Mode,
    pub rows: Vec<RunRow>,
    pub gamma: Option<GammaRow>,
    pub verdicts: RunVerdicts,
    pub invariants: Vec<InvariantCheck>,
    /// Draws of each atom among the first `n_max`.
    pub atom_counts: Vec<u64>,
}

impl RunReport {
    pub fn invariants_hold(&self) -> bool {
        self.invariants.iter().all(|c| c.holds) && self.gamma.as_ref().is_none_or(|g| g.holds)
    }

    pub fn failed_invariants(&self) -> Vec<&InvariantCheck> {
        self.invariants.iter().filter(|c| !c.holds).collect()
    }

    /// The headline verdicts of the run's mode are all consistent.
    pub fn passed(&self) -> bool {
        let ok = |v: Option<ModeVerdict>| v.is_some_and(|v| v.consistent);
        match self.mode {
            Mode::Convex => ok(self.verdicts.convex_hausdorff),
            Mode::General => ok(self.verdicts.general_fisher),
            Mode::Both => ok(self.verdicts.convex_hausdorff) && ok(self.verdicts.general_fisher),
        }
    }
}

struct Setup {
    expectation: ConvexBody,
    hulls: Vec<ConvexBody>,
    max_radius: f64,
    draws: Vec<usize>,
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup> {
    cfg.validate()?;
    let rs = &cfg.random_set;
    Ok(Setup {
        expectation: aumann_expectation(rs)?.body,
        hulls: rs.atoms().iter().map(|a| convex_hull(&a.value)).collect(),
        max_radius: rs.atoms().iter().map(|a| circumradius(&a.value)).fold(0.0, f64::max),
        draws: rs.sample_indices(cfg.n_max, cfg.seed),
    })
}

/// `sum_i (counts_i / n) co A_i`.
fn convex_average(hulls: &[ConvexBody], counts: &[u64], n: usize) -> Result<ConvexBody> {
    let terms: Vec<(f64, &ConvexBody)> = counts
        .iter()
        .zip(hulls)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, h)| (c as f64 / n as f64, h))
        .collect();
    minkowski_combination(&terms)
}

fn execute(cfg: &ExperimentConfig, mode: Mode) -> Result<RunReport> {
    let start = Instant::now();
    let s = setup(cfg)?;
    let rs = &cfg.random_set;
    let dim = rs.dim();
    let limit = Limit::Body(s.expectation.clone());
    let e_norm = s.expectation.norm();

    let grid = Arc::new(DirectionGrid::new(dim, cfg.direction_count, 0)?);
    let atom_support: Vec<Vec<f64>> = s
        .hulls
        .iter()
        .map(|h| embed(h, &grid).map(|v| v.values().to_vec()))
        .collect::<Result<_>>()?;
    let e_support = embed(&s.expectation, &grid)?.values().to_vec();

    let limit_probes = ProbeSet::limit_probes(&limit, cfg.probe_count, cfg.seed);
    let atoms = SetSequence::new(rs.values())?;
    let ambient = ProbeSet::exterior_probes(&atoms, &limit, cfg.probe_count, cfg.seed)?.union(&limit_probes)?;
    let ambient_base: Vec<f64> = ambient
        .probes()
        .iter()
        .map(|z| s.expectation.distance_to(z.as_slice()))
        .collect();

    let checkpoints = cfg.checkpoints();
    let mut next = 0;
    let mut counts = vec![0u64; rs.atoms().len()];
    let mut support_sum = vec![0.0; grid.len()];
    let mut sum: Option<PointCloud> = None;
    let mut budget = PruneBudget::new(cfg.prune_delta / cfg.n_max as f64)?;
    let mut rows = Vec::with_capacity(checkpoints.len());
    let mut invariants = Vec::new();
    let mut sf_bounds = Vec::with_capacity(checkpoints.len());

    for (k, &atom) in s.draws.iter().enumerate() {
        let n = k + 1;
        counts[atom] += 1;
        for (acc, v) in support_sum.iter_mut().zip(&atom_support[atom]) {
            *acc += v;
        }
        if mode.general() {
            let x = &rs.atoms()[atom].value;
            sum = Some(match sum.take() {
                None => x.clone(),
                Some(t) => step_sum(&t, x, &mut budget, n)?,
            });
        }
        if checkpoints.get(next) != Some(&n) {
            continue;
        }
        next += 1;

        let avg = convex_average(&s.hulls, &counts, n)?;
        let h_convex = avg.hausdorff(&s.expectation)?;
        let grid_gap = support_sum
            .iter()
            .zip(&e_support)
            .map(|(a, e)| (a / n as f64 - e).abs())
            .fold(0.0, f64::max);
        invariants.push(InvariantCheck::new("support_grid_below_hausdorff", Some(n), grid_gap, h_convex + SLACK));
        invariants.push(InvariantCheck::new(
            "support_grid_bracket",
            Some(n),
            h_convex,
            grid_gap + grid.resolution() * (avg.norm() + e_norm) + SLACK,
        ));

        let prune = budget.accumulated;
        let sf = (dim as f64).sqrt() / n as f64 * s.max_radius;
        sf_bounds.push(sf + prune);
        let mut row = RunRow {
            n,
            h_convex,
            fisher_e: None,
            fisher_probe_deficit: None,
            wijsman_error: None,
            h_raw: None,
            prune_error_bound: prune,
            wall_time: 0.0,
        };
        if let Some(t) = &sum {
            let raw = average(t, n);
            let fisher_e = s.expectation.excess_of_cloud(&raw)?;
            let h_raw = fisher_e.max(excess_body_to_cloud(&s.expectation, &raw)?.upper);
            let deficit = limit_probes
                .probes()
                .par_iter()
                .map(|z| raw.distance_to(z.as_slice()))
                .reduce(|| 0.0, f64::max);
            let wijsman = ambient
                .probes()
                .par_iter()
                .zip(&ambient_base)
                .map(|(z, b)| (raw.distance_to(z.as_slice()) - b).abs())
                .reduce(|| 0.0, f64::max);
            invariants.push(InvariantCheck::new("raw_dominates_convex", Some(n), h_convex - prune, h_raw + SLACK));
            invariants.push(InvariantCheck::new("convexification_squeeze", Some(n), h_raw - h_convex, sf + prune + SLACK));
            invariants.push(InvariantCheck::new("raw_excess_below_convex", Some(n), fisher_e, h_convex + prune + SLACK));
            row.fisher_e = Some(fisher_e);
            row.fisher_probe_deficit = Some(deficit);
            row.wijsman_error = Some(wijsman);
            row.h_raw = Some(h_raw);
        }
        row.wall_time = start.elapsed().as_secs_f64();
        rows.push(row);
    }

    let window = cfg.window.min(rows.len());
    let series = |f: &dyn Fn(&RunRow) -> Option<f64>| -> Option<Vec<f64>> { rows.iter().map(f).collect() };
    let verdict_of = |v: Option<Vec<f64>>| -> Result<Option<ModeVerdict>> {
        v.map(|v| judge(&v, cfg.tolerance, window)).transpose()
    };
    let verdicts = RunVerdicts {
        convex_hausdorff: if mode.convex() {
            verdict_of(series(&|r| Some(r.h_convex)))?
        } else {
            None
        },
        general_fisher: verdict_of(series(&|r| Some(r.fisher_e?.max(r.fisher_probe_deficit?))))?,
        general_hausdorff: verdict_of(series(&|r| r.h_raw))?,
        general_wijsman: verdict_of(series(&|r| r.wijsman_error))?,
    };
    if mode == Mode::Both {
        if let (Some(c), Some(f)) = (verdicts.convex_hausdorff, verdicts.general_fisher) {
            // A consistent convex path forces the raw Fisher metric below the
            // tolerance plus the convexification and pruning slack.
            let slack = sf_bounds[sf_bounds.len() - window..].iter().copied().fold(0.0, f64::max);
            let bound = if c.consistent { cfg.tolerance + slack } else { f64::INFINITY };
            invariants.push(InvariantCheck::new("hull_consistent_implies_fisher", None, f.worst, bound));
        }
    }

    let gamma = match cfg.quantization_epsilon {
        Some(eps) => Some(quantization(cfg, &s, eps)?),
        None => None,
    };
    Ok(RunReport {
        seed: cfg.seed,
        mode,
        rows,
        gamma,
        verdicts,
        invariants,
        atom_counts: counts,
    })
}

fn quantization(cfg: &ExperimentConfig, s: &Setup, epsilon: f64) -> Result<GammaRow> {
    let values = cfg.random_set.values();
    let net = build_family_net(&values, epsilon)?;
    let seq = SetSequence::new(s.draws.iter().map(|&i| values[i].clone()).collect())?;
    let q = quantize(&seq, &net)?;
    let n = cfg.n_max;
    let fractions = q.fractions(n);
    let gamma = gamma_limit(&net, &fractions)?;
    let mut counts = vec![0u64; values.len()];
    for &i in &s.draws {
        counts[i] += 1;
    }
    let avg = convex_average(&s.hulls, &counts, n)?;
    let h_expectation_gamma = s.expectation.hausdorff(&gamma.body)?;
    let h_average_gamma = avg.hausdorff(&gamma.body)?;
    let mut running = 0.0;
    let mut max_averaged_error: f64 = 0.0;
    for (k, e) in q.errors.iter().enumerate() {
        running += e;
        max_averaged_error = max_averaged_error.max(running / (k + 1) as f64);
    }
    let bound = epsilon + cfg.tolerance;
    Ok(GammaRow {
        epsilon,
        centers: net.provenance.clone(),
        fractions,
        h_expectation_gamma,
        h_average_gamma,
        max_averaged_error,
        holds: h_expectation_gamma <= bound && h_average_gamma <= bound && max_averaged_error < epsilon,
    })
}

/// Convex path only: averages of hulled draws against `E(F)`.
pub fn run_convex_slln(cfg: &ExperimentConfig) -> Result<RunReport> {
    if !cfg.mode.convex() {
        return Err(Error::InvalidConfig("mode does not include the convex path".into()));
    }
    execute(cfg, Mode::Convex)
}

/// Raw path: pruned Minkowski averages of the draws against `E(F)`.
pub fn run_general_slln(cfg: &ExperimentConfig) -> Result<RunReport> {
    if !cfg.mode.general() {
        return Err(Error::InvalidConfig("mode does not include the general path".into()));
    }
    execute(cfg, Mode::General)
}

/// Whatever the configured mode asks for.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    execute(cfg, cfg.mode)
}

/// Net over the atoms, quantized draws, and the resulting `Gamma` at `n_max`.
pub fn run_quantization_pipeline(cfg: &ExperimentConfig, epsilon: f64) -> Result<GammaRow> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    quantization(cfg, &setup(cfg)?, epsilon)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub runs: Vec<RunReport>,
    pub passed: usize,
    pub required_fraction: f64,
    /// At least `required_fraction` of the seeds passed.
    pub almost_sure: bool,
    pub invariants_hold: bool,
}

/// Independent runs of `cfg` under each seed.
pub fn sweep(cfg: &ExperimentConfig, seeds: &[u64]) -> Result<SweepReport> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("a sweep needs at least one seed".into()));
    }
    let runs = seeds
        .par_iter()
        .map(|&seed| {
            let mut c = cfg.clone();
            c.seed = seed;
            run_experiment(&c)
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = runs.iter().filter(|r| r.passed()).count();
    Ok(SweepReport {
        passed,
        required_fraction: cfg.pass_fraction,
        almost_sure: passed as f64 >= cfg.pass_fraction * runs.len() as f64 - 1e-9,
        invariants_hold: runs.iter().all(RunReport::invariants_hold),
        runs,
    })
}
