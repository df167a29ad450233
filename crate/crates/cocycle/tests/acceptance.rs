//! The eight acceptance criteria, one line each.
//!
//! Predictions are computed here from independent oracles: the order-2
//! invariant by brute force over arrow pairs of the Gauss diagram, and the
//! Arf invariant from the knot determinant (`det ≡ ±1 mod 8` exactly when
//! Arf = 0), computed from the colouring matrix of the closed diagram.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cocycle_core::catalog::make_catalog_knot;
use cocycle_core::cycles::{CycleKind, CycleRecipe};
use cocycle_core::diagram::{gauss_diagram, Arrow};
use cocycle_core::oracle::{drag_checks, Table1Line};
use cocycle_core::sweep::{cocycle_value_mod2, CocycleValue, SweepConfig};
use cocycle_core::{LongKnot, ToleranceSet};

/// Runtime limits.
const ARF_LIMIT: Duration = Duration::from_secs(1);
const ROTATION_LIMIT: Duration = Duration::from_secs(180);
const BRACKET_LIMIT: Duration = Duration::from_secs(300);

const DEFAULT_SAMPLES: usize = 2048;
const SEEDS: [u64; 2] = [7, 11];
const WORKERS: [usize; 2] = [1, 3];

fn knot(name: &str) -> LongKnot {
    make_catalog_knot(name).unwrap_or_else(|e| panic!("catalog knot {name}: {e}"))
}

fn arrows(k: &LongKnot) -> Vec<Arrow> {
    gauss_diagram(k, &ToleranceSet::default()).arrows
}

/// Pairs of arrows `x = (a → c)`, `y = (d → b)` with `a < b < c < d`.
fn v2_brute(arrows: &[Arrow]) -> u64 {
    let mut n = 0;
    for x in arrows {
        for y in arrows {
            if x.from < y.to && y.to < x.to && x.to < y.from {
                n += 1;
            }
        }
    }
    n
}

fn writhe_of(arrows: &[Arrow]) -> i32 {
    arrows.iter().map(|a| a.sign as i32).sum()
}

/// Determinant of the closed diagram from its colouring matrix.
fn determinant(arrows: &[Arrow]) -> i128 {
    let n = arrows.len();
    if n == 0 {
        return 1;
    }
    let mut unders: Vec<f64> = arrows.iter().map(|a| a.to).collect();
    unders.sort_by(f64::total_cmp);
    // arc k runs from the k-th under point to the next; the last one closes
    // up through the tails
    let arc_after = |t: f64| (unders.iter().filter(|&&u| u <= t).count() + n - 1) % n;
    let mut m = vec![vec![0i128; n]; n];
    for (r, a) in arrows.iter().enumerate() {
        let out = arc_after(a.to);
        let inc = (out + n - 1) % n;
        m[r][arc_after(a.from)] += 2;
        m[r][inc] -= 1;
        m[r][out] -= 1;
    }
    let minor: Vec<Vec<i128>> = m[1..].iter().map(|row| row[1..].to_vec()).collect();
    bareiss(minor).abs()
}

fn bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn arf_from_determinant(k: &LongKnot) -> u8 {
    match determinant(&arrows(k)).rem_euclid(8) {
        1 | 7 => 0,
        3 | 5 => 1,
        d => panic!("even determinant residue {d} for {}", k.name()),
    }
}

struct Run {
    value: CocycleValue,
    elapsed: Duration,
}

#[derive(Default)]
struct Lab {
    runs: HashMap<String, Run>,
}

impl Lab {
    fn cfg() -> SweepConfig {
        SweepConfig { samples: DEFAULT_SAMPLES, ..SweepConfig::default() }
    }

    fn sweep(kind: CycleKind, names: &[&str], cfg: &SweepConfig) -> Result<Run, String> {
        let recipe = CycleRecipe::from_names(kind, names).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let value = cocycle_value_mod2(&recipe, cfg).map_err(|e| format!("{} {}: {e}", kind.as_str(), names.join(",")))?;
        Ok(Run { value, elapsed: t.elapsed() })
    }

    /// Baseline sweep at the default configuration, computed once.
    fn base(&mut self, kind: CycleKind, names: &[&str]) -> Result<&Run, String> {
        let key = label(kind, names);
        if !self.runs.contains_key(&key) {
            let r = Self::sweep(kind, names, &Self::cfg())?;
            self.runs.insert(key.clone(), r);
        }
        Ok(&self.runs[&key])
    }
}

fn label(kind: CycleKind, names: &[&str]) -> String {
    format!("{}({})", kind.as_str(), names.join(","))
}

type Outcome = Result<String, String>;
type Criterion<'a> = (&'a str, &'a dyn Fn(&mut Lab) -> Outcome);

fn criterion_1() -> Outcome {
    let want = [("unknot", 0u8), ("trefoil", 1), ("figure-eight", 1), ("trefoil#trefoil", 0)];
    let tol = ToleranceSet::default();
    let dets: Vec<i128> = ["unknot", "trefoil", "figure-eight"].iter().map(|n| determinant(&arrows(&knot(n)))).collect();
    if dets != [1, 3, 5] {
        return Err(format!("determinants of unknot, trefoil, figure-eight: {dets:?}"));
    }
    let mut notes = Vec::new();
    for (name, expected) in want {
        let t = Instant::now();
        let k = knot(name);
        let lib = cocycle_core::invariants::v2_mod2(&k, &tol);
        let elapsed = t.elapsed();
        let brute = (v2_brute(&arrows(&k)) % 2) as u8;
        let det = arf_from_determinant(&k);
        if lib != expected || brute != expected || det != expected {
            return Err(format!("{name}: library {lib}, brute force {brute}, determinant {det}, expected {expected}"));
        }
        if elapsed > ARF_LIMIT {
            return Err(format!("{name}: {elapsed:?} over {ARF_LIMIT:?}"));
        }
        notes.push(format!("{name}={lib}"));
    }
    Ok(notes.join(" "))
}

const ROTATIONS: [&str; 5] = ["unknot", "trefoil", "trefoil-mirror", "figure-eight", "trefoil#figure-eight"];

fn criterion_2(lab: &mut Lab) -> Outcome {
    let mut notes = Vec::new();
    for name in ROTATIONS {
        let expected = arf_from_determinant(&knot(name));
        let r = lab.base(CycleKind::Rotation, &[name])?;
        if r.value.parity != expected {
            return Err(format!("rotation({name}) = {}, Arf = {expected}", r.value.parity));
        }
        if r.elapsed > ROTATION_LIMIT {
            return Err(format!("rotation({name}) took {:?}", r.elapsed));
        }
        notes.push(format!("{name}={}", r.value.parity));
    }
    Ok(notes.join(" "))
}

const BRACKETS: [(CycleKind, &[&str]); 4] = [
    (CycleKind::Bracket, &["unknot", "trefoil"]),
    (CycleKind::Bracket, &["trefoil", "trefoil-mirror"]),
    (CycleKind::Bracket, &["trefoil", "figure-eight"]),
    (CycleKind::SelfDrag, &["trefoil"]),
];

fn criterion_3(lab: &mut Lab) -> Outcome {
    let mut notes = Vec::new();
    for (kind, names) in BRACKETS {
        let r = lab.base(kind, names)?;
        if r.value.parity != 0 {
            return Err(format!("{} = {}", label(kind, names), r.value.parity));
        }
        if r.elapsed > BRACKET_LIMIT {
            return Err(format!("{} took {:?}", label(kind, names), r.elapsed));
        }
        notes.push(format!("{}={}", label(kind, names), r.value.parity));
    }
    Ok(notes.join(" "))
}

const FRAMED: [(CycleKind, &[&str]); 5] = [
    (CycleKind::FramedDragLoop, &["kink+", "trefoil"]),
    (CycleKind::FramedDragLoop, &["kink-", "trefoil"]),
    (CycleKind::FramedDragLoop, &["kink+", "figure-eight"]),
    (CycleKind::FramedDragLoop, &["kink+", "kink-"]),
    (CycleKind::FramedSelfDrag, &["trefoil"]),
];

fn framed_prediction(kind: CycleKind, names: &[&str]) -> u8 {
    let k: Vec<LongKnot> = names.iter().map(|n| knot(n)).collect();
    let n = |i: usize| writhe_of(&arrows(&k[i])) as i64;
    let v = |i: usize| arf_from_determinant(&k[i]) as i64;
    let s = match kind {
        CycleKind::FramedSelfDrag => n(0) * v(0),
        _ => n(0) * v(1) + n(1) * v(0),
    };
    s.rem_euclid(2) as u8
}

fn criterion_4(lab: &mut Lab) -> Outcome {
    let mut notes = Vec::new();
    for (kind, names) in FRAMED {
        let expected = framed_prediction(kind, names);
        let r = lab.base(kind, names)?;
        if r.value.parity != expected {
            return Err(format!("{} = {}, formula {expected}", label(kind, names), r.value.parity));
        }
        notes.push(format!("{}={}", label(kind, names), r.value.parity));
    }
    if framed_prediction(CycleKind::FramedDragLoop, &["kink+", "trefoil"]) != 1 {
        return Err("formula for (kink+, trefoil) is not 1".into());
    }
    if writhe_of(&arrows(&knot("trefoil"))).abs() != 3 {
        return Err("native trefoil writhe is not ±3".into());
    }
    Ok(notes.join(" "))
}

fn criterion_5(lab: &mut Lab) -> Outcome {
    let mut notes = Vec::new();
    for name in ["unknot", "trefoil", "figure-eight"] {
        let rot = lab.base(CycleKind::Rotation, &[name])?.value.parity;
        let hat = lab.base(CycleKind::HatFlat, &[name])?.value.parity;
        if rot != hat {
            return Err(format!("{name}: rotation {rot}, flat representation {hat}"));
        }
        notes.push(format!("{name}={rot}"));
    }
    Ok(notes.join(" "))
}

fn stability_suite() -> Vec<(CycleKind, Vec<&'static str>)> {
    let mut v: Vec<(CycleKind, Vec<&str>)> = ROTATIONS.iter().map(|n| (CycleKind::Rotation, vec![*n])).collect();
    v.extend(BRACKETS.iter().map(|(k, n)| (*k, n.to_vec())));
    v.extend(FRAMED.iter().map(|(k, n)| (*k, n.to_vec())));
    v
}

fn criterion_6(lab: &mut Lab) -> Outcome {
    let base = Lab::cfg();
    let mut variants: Vec<(String, SweepConfig)> =
        vec![(format!("N_s={}", 2 * DEFAULT_SAMPLES), SweepConfig { samples: 2 * DEFAULT_SAMPLES, ..base })];
    variants.extend(SEEDS.iter().map(|&s| (format!("seed {s}"), SweepConfig { seed: Some(s), ..base })));
    variants.extend(WORKERS.iter().map(|&w| (format!("{w} workers"), SweepConfig { workers: w, ..base })));
    let suite = stability_suite();
    for (kind, names) in &suite {
        let p0 = lab.base(*kind, names)?.value.parity;
        for (what, cfg) in &variants {
            let p = Lab::sweep(*kind, names, cfg)?.value.parity;
            if p != p0 {
                return Err(format!("{} parity {p} under {what}, baseline {p0}", label(*kind, names)));
            }
        }
    }
    Ok(format!("{} cycles x {} variants", suite.len(), variants.len()))
}

fn criterion_7(lab: &mut Lab) -> Outcome {
    let tol = ToleranceSet::default();
    let mut paths = 0;
    for (kind, names) in BRACKETS.iter().chain(FRAMED.iter()) {
        let value = lab.base(*kind, names)?.value.clone();
        let cycle = CycleRecipe::from_names(*kind, names).and_then(|r| r.build(&tol)).map_err(|e| e.to_string())?;
        for d in drag_checks(&cycle, &value, &tol) {
            let (host, bead) = cycle.drag_members(d.drag).expect("drag members");
            let c = |l: Table1Line| d.check.count(l);
            let expected_iii = (writhe_of(&arrows(host)).rem_euclid(2) as u8) * arf_from_determinant(bead);
            let at = format!("{} drag {} ({} along {})", label(*kind, names), d.drag, d.bead, d.host);
            if (c(Table1Line::I) + c(Table1Line::V)) % 2 != 0 {
                return Err(format!("{at}: I+V odd {:?}", d.check.counts));
            }
            if (c(Table1Line::II) + c(Table1Line::IV) + c(Table1Line::VI)) % 2 != 0 {
                return Err(format!("{at}: II+IV+VI odd {:?}", d.check.counts));
            }
            if (c(Table1Line::III) % 2) as u8 != expected_iii {
                return Err(format!("{at}: III = {}, writhe·Arf = {expected_iii}", c(Table1Line::III)));
            }
            if c(Table1Line::Unclassified) != 0 {
                return Err(format!("{at}: {} unclassified", c(Table1Line::Unclassified)));
            }
            paths += 1;
        }
    }
    Ok(format!("{paths} drag paths"))
}

fn criterion_8(lab: &mut Lab) -> Outcome {
    let prim = lab.base(CycleKind::Primitivity, &["trefoil", "figure-eight"])?.value.parity;
    let rot = lab.base(CycleKind::Rotation, &["trefoil"])?.value.parity;
    if prim != rot {
        return Err(format!("with summand {prim}, alone {rot}"));
    }
    Ok(format!("trefoil with figure-eight summand = {prim}"))
}

fn main() -> ExitCode {
    let mut lab = Lab::default();
    let criteria: [Criterion; 8] = [
        ("arf oracle", &|_| criterion_1()),
        ("rotation equals Arf", &criterion_2),
        ("brackets vanish", &criterion_3),
        ("framed drag formula", &criterion_4),
        ("representative independence", &criterion_5),
        ("stability", &criterion_6),
        ("table identities", &criterion_7),
        ("primitivity", &criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f(&mut lab);
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("criterion {} {name}: PASS ({secs:.1}s) {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({secs:.1}s) {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
