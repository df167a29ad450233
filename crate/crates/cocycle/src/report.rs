//! Cocycle reports: the sweep, the closed-form prediction and, for drag
//! paths, the event classification with its identities.
//!
//! Reports hold no timings or host details, so equal inputs and config give
//! byte-identical JSON.

use std::path::Path;

use anyhow::Context;
use cocycle_core::cycles::{CycleKind, CycleRecipe};
use cocycle_core::diagram::{compute_crossings, writhe};
use cocycle_core::invariants::{v2_count, v2_signed_of};
use cocycle_core::oracle::{classify_event_table1, drag_checks, predicted_value, Table1Line};
use cocycle_core::sweep::{cocycle_value_mod2, Counts, EventRecord};
use cocycle_core::{LongKnot, ToleranceSet};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::knot_file::resolve_knot;

/// A cycle named by kind and constituents. Knots are catalog names or
/// paths to knot files ending in `.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSpec {
    pub kind: String,
    pub knots: Vec<String>,
    /// Overrides the ambient config for this cycle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<Config>,
}

impl CycleSpec {
    pub fn new(kind: &str, knots: &[&str]) -> Self {
        Self { kind: kind.to_string(), knots: knots.iter().map(|s| s.to_string()).collect(), config: None }
    }

    pub fn recipe(&self, cfg: &Config) -> anyhow::Result<CycleRecipe> {
        let kind = CycleKind::parse(&self.kind)?;
        let tol = cfg.tolerances();
        let knots = self.knots.iter().map(|k| resolve_knot(k, &tol)).collect::<anyhow::Result<Vec<_>>>()?;
        Ok(CycleRecipe::new(kind, knots)?.with_schedule(cfg.schedule()))
    }
}

/// A report file holds one spec or a list of them.
pub fn load_specs(path: &Path) -> anyhow::Result<Vec<CycleSpec>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_specs(&text).with_context(|| format!("loading {}", path.display()))
}

pub fn parse_specs(json: &str) -> anyhow::Result<Vec<CycleSpec>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(CycleSpec),
        Many(Vec<CycleSpec>),
    }
    Ok(match serde_json::from_str(json).context("invalid cycle spec JSON")? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCounts {
    pub i: u64,
    pub ii: u64,
    pub iii: u64,
}

impl From<Counts> for ConditionCounts {
    fn from(c: Counts) -> Self {
        Self { i: c.i, ii: c.ii, iii: c.iii }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventOut {
    pub s: f64,
    pub kind: String,
    pub phase: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drag: Option<usize>,
    pub witness: Vec<f64>,
    pub mults: ConditionCounts,
    /// Table lines of the counted configurations, for drag events.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<String>,
}

impl From<&EventRecord> for EventOut {
    fn from(e: &EventRecord) -> Self {
        let lines = if e.drag.is_some() {
            classify_event_table1(e, |t| e.membership(t)).iter().map(|l| l.as_str().to_string()).collect()
        } else {
            Vec::new()
        };
        Self {
            s: e.s,
            kind: e.kind.as_str().to_string(),
            phase: e.phase.as_str().to_string(),
            drag: e.drag,
            witness: e.witness.clone(),
            mults: ConditionCounts { i: e.mult_i as u64, ii: e.mult_ii as u64, iii: e.mult_iii as u64 },
            lines,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueOut {
    pub parity: u8,
    pub counts: ConditionCounts,
    pub events: Vec<EventOut>,
    pub retries: u32,
    pub births: usize,
    pub deaths: usize,
    pub diagrams: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescriptorOut {
    pub kind: String,
    pub knots: Vec<String>,
    pub framing: Vec<i32>,
    pub v2: Vec<u8>,
}

/// Counts of the six table lines and of unclassified configurations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    #[serde(rename = "I")]
    pub i: u64,
    #[serde(rename = "II")]
    pub ii: u64,
    #[serde(rename = "III")]
    pub iii: u64,
    #[serde(rename = "IV")]
    pub iv: u64,
    #[serde(rename = "V")]
    pub v: u64,
    #[serde(rename = "VI")]
    pub vi: u64,
    #[serde(rename = "UNCLASSIFIED")]
    pub unclassified: u64,
}

impl Histogram {
    fn from_counts(c: &[u64; 7]) -> Self {
        let n = |l: Table1Line| c[Table1Line::ALL.iter().position(|&x| x == l).unwrap()];
        Self {
            i: n(Table1Line::I),
            ii: n(Table1Line::II),
            iii: n(Table1Line::III),
            iv: n(Table1Line::IV),
            v: n(Table1Line::V),
            vi: n(Table1Line::VI),
            unclassified: n(Table1Line::Unclassified),
        }
    }

    fn add(&mut self, o: &Histogram) {
        self.i += o.i;
        self.ii += o.ii;
        self.iii += o.iii;
        self.iv += o.iv;
        self.v += o.v;
        self.vi += o.vi;
        self.unclassified += o.unclassified;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DragOut {
    pub drag: usize,
    pub host: String,
    pub bead: String,
    pub writhe_b: i32,
    pub arf_s: u8,
    pub parity: u8,
    pub lines: Histogram,
    pub i_plus_v_even: bool,
    pub ii_iv_vi_even: bool,
    pub iii_matches: bool,
}

impl DragOut {
    pub fn identities_hold(&self) -> bool {
        self.i_plus_v_even && self.ii_iv_vi_even && self.iii_matches && self.lines.unclassified == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotSummary {
    pub name: String,
    pub crossings: usize,
    pub writhe: i32,
    pub v2: i64,
    pub v2_mod2: u8,
}

pub fn knot_summary(k: &LongKnot, tol: &ToleranceSet) -> KnotSummary {
    let cs = compute_crossings(k, tol);
    KnotSummary {
        name: k.name().to_string(),
        crossings: cs.len(),
        writhe: writhe(&cs),
        v2: v2_signed_of(&cs),
        v2_mod2: (v2_count(&cs) % 2) as u8,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub cycle: DescriptorOut,
    pub config: Config,
    pub value: ValueOut,
    /// Closed-form value; absent for drag paths, which are not loops.
    pub prediction: Option<u8>,
    pub agreement: Option<bool>,
    /// Table line counts over all drag paths.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lines: Option<Histogram>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub drags: Vec<DragOut>,
    pub knots: Vec<KnotSummary>,
}

impl CocycleReport {
    /// Agreement with the prediction, or for a drag path the identities.
    pub fn passed(&self) -> bool {
        match self.agreement {
            Some(a) => a,
            None => self.drags.iter().all(DragOut::identities_hold),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Build, sweep, predict and classify one cycle.
pub fn run_report(spec: &CycleSpec, ambient: &Config) -> anyhow::Result<CocycleReport> {
    let cfg = spec.config.clone().unwrap_or_else(|| ambient.clone());
    let recipe = spec.recipe(&cfg)?;
    let tol = cfg.tolerances();
    let what = || format!("{} {}", spec.kind, spec.knots.join(" "));
    let value = cocycle_value_mod2(&recipe, &cfg.sweep()).with_context(|| format!("sweeping {}", what()))?;
    let cycle = recipe.build(&tol).with_context(|| format!("building {}", what()))?;
    let d = &cycle.descriptor;
    let prediction = if d.kind.is_loop() { Some(predicted_value(d)?) } else { None };

    let drags: Vec<DragOut> = drag_checks(&cycle, &value, &tol)
        .into_iter()
        .map(|c| DragOut {
            drag: c.drag,
            host: c.host,
            bead: c.bead,
            writhe_b: c.writhe_b,
            arf_s: c.arf_s,
            parity: value.drag_parity(c.drag),
            lines: Histogram::from_counts(&c.check.counts),
            i_plus_v_even: c.check.i_plus_v_even,
            ii_iv_vi_even: c.check.ii_iv_vi_even,
            iii_matches: c.check.iii_matches,
        })
        .collect();
    let lines = (!drags.is_empty()).then(|| {
        let mut h = Histogram::default();
        drags.iter().for_each(|x| h.add(&x.lines));
        h
    });

    Ok(CocycleReport {
        cycle: DescriptorOut {
            kind: d.kind.as_str().to_string(),
            knots: d.knots.clone(),
            framing: d.framing.clone(),
            v2: d.v2.clone(),
        },
        value: ValueOut {
            parity: value.parity,
            counts: value.counts.into(),
            events: value.events.iter().map(EventOut::from).collect(),
            retries: value.retries,
            births: value.births,
            deaths: value.deaths,
            diagrams: value.diagrams,
        },
        agreement: prediction.map(|p| p == value.parity),
        prediction,
        lines,
        drags,
        knots: recipe.knots.iter().map(|k| knot_summary(k, &tol)).collect(),
        config: cfg,
    })
}

/// Reports for independent cycles, swept concurrently, in input order.
pub fn run_suite(specs: &[CycleSpec], ambient: &Config) -> Vec<anyhow::Result<CocycleReport>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = specs.iter().map(|spec| s.spawn(move || run_report(spec, ambient))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(anyhow::anyhow!("sweep thread panicked"))))
            .collect()
    })
}
