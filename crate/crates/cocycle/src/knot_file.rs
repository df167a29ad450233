//! JSON knot files.
//!
//! ```json
//! {"name": "trefoil", "kind": "catalog"}
//! {"name": "mine", "kind": "controls", "controls": [[x, y, z], ...], "support": [tmin, tmax]}
//! ```
//!
//! Controls are the uniform cubic B-spline control points at
//! `tmin + i·h`, `h = (tmax - tmin) / (n - 1)`. The two first and two last
//! must lie on the tail line at their own parameters.

use std::path::Path;

use anyhow::{bail, Context};
use cocycle_core::catalog::make_catalog_knot;
use cocycle_core::curve::Shape;
use cocycle_core::genericity::validate_generic;
use cocycle_core::math::Vec3;
use cocycle_core::{LongKnot, SplinePiece, ToleranceSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnotFileKind {
    Catalog,
    Controls,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotFile {
    pub name: String,
    pub kind: KnotFileKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<[f64; 2]>,
}

impl KnotFile {
    pub fn catalog(name: &str) -> Self {
        Self { name: name.to_string(), kind: KnotFileKind::Catalog, controls: Vec::new(), support: None }
    }

    /// Controls form of a single-spline knot.
    pub fn from_knot(k: &LongKnot) -> anyhow::Result<Self> {
        let Shape::Spline(p) = k.shape() else {
            bail!("knot {} is not a single spline and has no controls form", k.name());
        };
        let (a, b) = p.support();
        Ok(Self {
            name: k.name().to_string(),
            kind: KnotFileKind::Controls,
            controls: p.controls().iter().map(|c| [c.x, c.y, c.z]).collect(),
            support: Some([a, b]),
        })
    }

    /// Build the knot and check the tail condition and genericity.
    pub fn to_knot(&self, tol: &ToleranceSet) -> anyhow::Result<LongKnot> {
        let k = match self.kind {
            KnotFileKind::Catalog => make_catalog_knot(&self.name)?,
            KnotFileKind::Controls => {
                let [a, b] = self.support.context("controls knot needs \"support\"")?;
                let n = self.controls.len();
                if n < 5 {
                    bail!("controls knot needs at least 5 controls, got {n}");
                }
                if !(b > a) {
                    bail!("empty support [{a}, {b}]");
                }
                let h = (b - a) / (n - 1) as f64;
                let ctrl = self.controls.iter().map(|c| Vec3::new(c[0], c[1], c[2])).collect();
                let piece = SplinePiece::new(a, h, ctrl, tol.tail * (b - a).max(1.0))?;
                LongKnot::from_spline(self.name.clone(), piece)
            }
        };
        let report = validate_generic(&k, tol);
        if !report.generic {
            bail!("knot {} is not generic: {}", self.name, report.issues.join("; "));
        }
        Ok(k)
    }
}

pub fn parse_knot(json: &str, tol: &ToleranceSet) -> anyhow::Result<LongKnot> {
    let f: KnotFile = serde_json::from_str(json).context("invalid knot JSON")?;
    f.to_knot(tol)
}

pub fn load_knot(path: &Path, tol: &ToleranceSet) -> anyhow::Result<LongKnot> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_knot(&text, tol).with_context(|| format!("loading {}", path.display()))
}

/// A catalog name, or a path to a knot file when it ends in `.json`.
pub fn resolve_knot(arg: &str, tol: &ToleranceSet) -> anyhow::Result<LongKnot> {
    if arg.ends_with(".json") {
        load_knot(Path::new(arg), tol)
    } else {
        KnotFile::catalog(arg).to_knot(tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_round_trip() {
        let tol = ToleranceSet::default();
        let k = make_catalog_knot("trefoil").unwrap();
        let f = KnotFile::from_knot(&k).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back = parse_knot(&text, &tol).unwrap();
        for i in 0..50 {
            let t = -4.0 + 0.16 * i as f64;
            assert!((back.eval(t) - k.eval(t)).norm() < 1e-12);
        }
    }

    #[test]
    fn off_axis_tail_rejected() {
        let tol = ToleranceSet::default();
        let text = r#"{"name": "bad", "kind": "controls", "support": [0, 4],
            "controls": [[0,0,0],[1,1,0],[2,2,1],[3,3,0],[4,4,0]]}"#;
        assert!(parse_knot(text, &tol).is_ok());
        let text = r#"{"name": "bad", "kind": "controls", "support": [0, 4],
            "controls": [[0,0,0],[1,1,0.5],[2,2,1],[3,3,0],[4,4,0]]}"#;
        assert!(parse_knot(text, &tol).is_err());
    }

    #[test]
    fn unknown_catalog_name() {
        assert!(resolve_knot("granny", &ToleranceSet::default()).is_err());
    }
}
