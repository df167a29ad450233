use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use cocycle::config::{Config, CONFIG_ENV};
use cocycle::diagram_io::{dump_crossings, render_svg, SvgStyle};
use cocycle::knot_file::resolve_knot;
use cocycle::report::{knot_summary, load_specs, run_report, run_suite, CocycleReport, CycleSpec};
use cocycle_core::catalog::{make_catalog_knot, NAMES};
use cocycle_core::genericity::validate_generic;
use serde::Serialize;

/// Evaluate the order-3 one-dimensional knot cocycle mod 2 on loops of long
/// knots and compare with its closed-form values.
///
/// Exit status: 0 when the sweep agrees with the prediction (or a drag
/// path satisfies its identities), 2 when it does not, 1 on error.
#[derive(Parser, Debug)]
#[command(name = "cocycle", version)]
struct Cli {
    /// JSON config file.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the catalog knots with their basic invariants.
    Catalog,
    /// Crossings, writhe and order-2 invariant of one knot.
    Invariants {
        /// Catalog name or knot file.
        knot: String,
        /// Also dump the crossing list.
        #[arg(long)]
        crossings: bool,
    },
    /// Build a cycle and describe its legs without sweeping it.
    BuildCycle {
        kind: String,
        #[arg(required = true)]
        knots: Vec<String>,
    },
    /// Sweep a cycle and report its value.
    Evaluate {
        kind: String,
        #[arg(required = true)]
        knots: Vec<String>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Sweep the drag path of `bead` along `host` and classify its events.
    Classify {
        host: String,
        bead: String,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Run every cycle of a spec file (one spec or a list).
    Report {
        spec: PathBuf,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// SVG of the projection of a knot, or of a cycle at given parameters.
    Svg {
        #[arg(required = true)]
        names: Vec<String>,
        /// Treat the first name as a cycle kind and draw it at these `s`.
        #[arg(long = "at", num_args = 1..)]
        at: Vec<f64>,
        /// Output file; with several `--at` values, a directory.
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args, Debug, Default)]
struct SweepArgs {
    /// Grid samples over the whole cycle.
    #[arg(long)]
    ns: Option<usize>,
    /// Root tolerance, relative to the knot diameter.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl SweepArgs {
    fn apply(&self, mut cfg: Config) -> Config {
        if let Some(n) = self.ns {
            cfg.samples = n;
        }
        if let Some(t) = self.tol {
            cfg.tol.root = t;
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        cfg
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_config(path: Option<&Path>) -> anyhow::Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn evaluate(spec: CycleSpec, sweep: &SweepArgs, cfg: Config) -> anyhow::Result<bool> {
    let cfg = sweep.apply(cfg);
    let report = run_report(&spec, &cfg)?;
    emit(&report.to_json(), sweep.output.as_deref())?;
    Ok(report.passed())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = load_config(cli.config.as_deref())?;
    let tol = cfg.tolerances();
    match cli.cmd {
        Cmd::Catalog => {
            for name in NAMES {
                let k = make_catalog_knot(name)?;
                let s = knot_summary(&k, &tol);
                println!("{:<16} crossings {:>2}  writhe {:>3}  v2 {:>3}  v2 mod 2 {}", name, s.crossings, s.writhe, s.v2, s.v2_mod2);
            }
            Ok(true)
        }
        Cmd::Invariants { knot, crossings } => {
            #[derive(Serialize)]
            struct Out {
                #[serde(flatten)]
                summary: cocycle::report::KnotSummary,
                generic: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                crossings: Option<Vec<cocycle::diagram_io::CrossingDump>>,
            }
            let k = resolve_knot(&knot, &tol)?;
            let out = Out {
                summary: knot_summary(&k, &tol),
                generic: validate_generic(&k, &tol).generic,
                crossings: crossings.then(|| dump_crossings(&k, &tol)),
            };
            println!("{}", json(&out));
            Ok(true)
        }
        Cmd::BuildCycle { kind, knots } => {
            #[derive(Serialize)]
            struct LegOut {
                phase: &'static str,
                weight: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                drag: Option<usize>,
            }
            #[derive(Serialize)]
            struct Out {
                kind: &'static str,
                knots: Vec<String>,
                framing: Vec<i32>,
                v2: Vec<u8>,
                legs: Vec<LegOut>,
                closure_gap: f64,
            }
            let names: Vec<&str> = knots.iter().map(String::as_str).collect();
            let cycle = CycleSpec::new(&kind, &names).recipe(&cfg)?.build(&tol)?;
            let d = &cycle.descriptor;
            let out = Out {
                kind: d.kind.as_str(),
                knots: d.knots.clone(),
                framing: d.framing.clone(),
                v2: d.v2.clone(),
                legs: cycle.legs.iter().map(|l| LegOut { phase: l.phase.as_str(), weight: l.weight, drag: l.drag }).collect(),
                closure_gap: cycle.check_closed(&tol)?,
            };
            println!("{}", json(&out));
            Ok(true)
        }
        Cmd::Evaluate { kind, knots, sweep } => {
            let names: Vec<&str> = knots.iter().map(String::as_str).collect();
            evaluate(CycleSpec::new(&kind, &names), &sweep, cfg)
        }
        Cmd::Classify { host, bead, sweep } => evaluate(CycleSpec::new("drag_path", &[&host, &bead]), &sweep, cfg),
        Cmd::Report { spec, sweep } => {
            let cfg = sweep.apply(cfg);
            let specs = load_specs(&spec)?;
            let mut reports: Vec<CocycleReport> = Vec::with_capacity(specs.len());
            for (s, r) in specs.iter().zip(run_suite(&specs, &cfg)) {
                reports.push(r.with_context(|| format!("{} {}", s.kind, s.knots.join(" ")))?);
            }
            let text = if reports.len() == 1 { reports[0].to_json() } else { json(&reports) };
            emit(&text, sweep.output.as_deref())?;
            Ok(reports.iter().all(CocycleReport::passed))
        }
        Cmd::Svg { names, at, output } => {
            let style = SvgStyle::default();
            if at.is_empty() {
                if names.len() != 1 {
                    bail!("svg takes one knot, or a cycle with --at");
                }
                let k = resolve_knot(&names[0], &tol)?;
                emit(&render_svg(&k, &tol, &style), Some(&output))?;
                return Ok(true);
            }
            let knots: Vec<&str> = names[1..].iter().map(String::as_str).collect();
            let cycle = CycleSpec::new(&names[0], &knots).recipe(&cfg)?.build(&tol)?;
            if at.len() > 1 {
                std::fs::create_dir_all(&output).with_context(|| format!("creating {}", output.display()))?;
            }
            for &s in &at {
                if !(0.0..=1.0).contains(&s) {
                    bail!("cycle parameter {s} outside [0, 1]");
                }
                let k = cycle.knot_at(s);
                let path = if at.len() > 1 { output.join(format!("s{s:.6}.svg")) } else { output.clone() };
                emit(&render_svg(&k, &tol, &style), Some(&path))?;
            }
            Ok(true)
        }
    }
}
