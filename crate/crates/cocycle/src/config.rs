//! Run configuration, read from a JSON file.
//!
//! Every field is optional; missing ones take the library defaults. The
//! default file is named by the `COCYCLE_CONFIG` environment variable.

use std::path::Path;

use anyhow::Context;
use cocycle_core::cycles::DragSchedule;
use cocycle_core::sweep::SweepConfig;
use cocycle_core::ToleranceSet;
use serde::{Deserialize, Serialize};

pub const CONFIG_ENV: &str = "COCYCLE_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub embed: f64,
    pub root: f64,
    pub dedup: f64,
    pub tail: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        ToleranceSet::default().into()
    }
}

impl From<ToleranceSet> for Tolerances {
    fn from(t: ToleranceSet) -> Self {
        Self { embed: t.embed, root: t.root, dedup: t.dedup, tail: t.tail }
    }
}

impl From<Tolerances> for ToleranceSet {
    fn from(t: Tolerances) -> Self {
        Self { embed: t.embed, root: t.root, dedup: t.dedup, tail: t.tail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Grid samples over the whole cycle.
    pub samples: usize,
    pub seed: Option<u64>,
    pub retries: u32,
    pub perturbation: f64,
    /// Sweep threads; 0 uses all cores. Results do not depend on it.
    pub workers: usize,
    pub min_width: f64,
    pub tol: Tolerances,
    /// Drag timing and bead size.
    pub delta: f64,
    pub bead_fraction: f64,
}

impl Default for Config {
    fn default() -> Self {
        let s = SweepConfig::default();
        let d = DragSchedule::default();
        Self {
            samples: s.samples,
            seed: s.seed,
            retries: s.retries,
            perturbation: s.perturbation,
            workers: s.workers,
            min_width: s.min_width,
            tol: s.tol.into(),
            delta: d.delta,
            bead_fraction: d.bead_fraction,
        }
    }
}

impl Config {
    pub fn tolerances(&self) -> ToleranceSet {
        self.tol.into()
    }

    pub fn sweep(&self) -> SweepConfig {
        SweepConfig {
            samples: self.samples,
            tol: self.tolerances(),
            seed: self.seed,
            retries: self.retries,
            perturbation: self.perturbation,
            workers: self.workers,
            min_width: self.min_width,
            ..SweepConfig::default()
        }
    }

    pub fn schedule(&self) -> DragSchedule {
        DragSchedule { delta: self.delta, bead_fraction: self.bead_fraction }
    }

    pub fn parse(json: &str) -> anyhow::Result<Self> {
        let c: Config = serde_json::from_str(json).context("invalid config JSON")?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("loading {}", path.display()))
    }

    /// The file named by `COCYCLE_CONFIG` if set, else the defaults.
    pub fn from_env() -> anyhow::Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(self.samples >= 16, "samples must be at least 16, got {}", self.samples);
        anyhow::ensure!(self.min_width > 0.0, "min_width must be positive");
        anyhow::ensure!(self.perturbation >= 0.0, "perturbation must be non-negative");
        anyhow::ensure!(self.delta > 0.0 && self.delta < 0.5, "delta must lie in (0, 0.5)");
        anyhow::ensure!(self.bead_fraction > 0.0 && self.bead_fraction < 1.0, "bead_fraction must lie in (0, 1)");
        let t = &self.tol;
        anyhow::ensure!(
            [t.embed, t.root, t.dedup, t.tail].iter().all(|&x| x > 0.0 && x < 1.0),
            "tolerances must lie in (0, 1)"
        );
        Ok(())
    }
}
