use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::convergence::{DEFAULT_PROBE_COUNT, DEFAULT_TOLERANCE, DEFAULT_WINDOW};
use crate::random_sets::SimpleRandomSet;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Averages of hulled draws only.
    Convex,
    /// Raw Minkowski averages (the convex average is still tracked for checks).
    General,
    #[default]
    Both,
}

impl Mode {
    pub fn convex(self) -> bool {
        matches!(self, Mode::Convex | Mode::Both)
    }

    pub fn general(self) -> bool {
        matches!(self, Mode::General | Mode::Both)
    }
}

/// Powers of two below `n_max`, then `n_max`.
pub fn default_checkpoints(n_max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(1usize), |&k| k.checked_mul(2))
        .take_while(|&k| k < n_max)
        .collect();
    out.push(n_max);
    out
}

fn default_probe_count() -> usize {
    DEFAULT_PROBE_COUNT
}
fn default_direction_count() -> usize {
    720
}
fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}
fn default_window() -> usize {
    DEFAULT_WINDOW
}
fn default_pass_fraction() -> f64 {
    0.9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub random_set: SimpleRandomSet,
    pub n_max: usize,
    /// Omitted means powers of two plus `n_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<usize>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub prune_delta: f64,
    #[serde(default = "default_probe_count")]
    pub probe_count: usize,
    #[serde(default = "default_direction_count")]
    pub direction_count: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default)]
    pub mode: Mode,
    /// Net radius for the quantization pipeline; skipped when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantization_epsilon: Option<f64>,
    /// Share of a seed sweep that must pass.
    #[serde(default = "default_pass_fraction")]
    pub pass_fraction: f64,
}

impl ExperimentConfig {
    pub fn new(random_set: SimpleRandomSet, n_max: usize) -> Self {
        Self {
            random_set,
            n_max,
            checkpoints: None,
            seed: 0,
            prune_delta: 0.0,
            probe_count: default_probe_count(),
            direction_count: default_direction_count(),
            tolerance: default_tolerance(),
            window: default_window(),
            mode: Mode::Both,
            quantization_epsilon: None,
            pass_fraction: default_pass_fraction(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn checkpoints(&self) -> Vec<usize> {
        self.checkpoints
            .clone()
            .unwrap_or_else(|| default_checkpoints(self.n_max))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_max == 0 {
            return bad("n_max must be at least 1".into());
        }
        let cps = self.checkpoints();
        if cps.is_empty() {
            return bad("checkpoints must not be empty".into());
        }
        if cps[0] == 0 || cps.windows(2).any(|w| w[0] >= w[1]) {
            return bad("checkpoints must be positive and strictly increasing".into());
        }
        if *cps.last().expect("nonempty") != self.n_max {
            return bad(format!("last checkpoint must equal n_max = {}", self.n_max));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.window == 0 {
            return bad("window must be at least 1".into());
        }
        if !(self.prune_delta >= 0.0) || !self.prune_delta.is_finite() {
            return bad(format!("prune_delta must be nonnegative, got {}", self.prune_delta));
        }
        if self.probe_count == 0 {
            return bad("probe_count must be at least 1".into());
        }
        if self.direction_count < 2 {
            return bad("direction_count must be at least 2".into());
        }
        if !(self.pass_fraction > 0.0 && self.pass_fraction <= 1.0) {
            return bad(format!("pass_fraction must lie in (0, 1], got {}", self.pass_fraction));
        }
        if let Some(eps) = self.quantization_epsilon {
            if !(eps > 0.0) || !eps.is_finite() {
                return bad(format!("quantization_epsilon must be positive, got {eps}"));
            }
        }
        Ok(())
    }
}
