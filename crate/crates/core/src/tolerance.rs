//! Numerical tolerances shared by every stage of the pipeline.

/// Scale-relative tolerances. Each value is multiplied by the diameter of
/// the knot under consideration before use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceSet {
    /// Minimum 3d distance between points that are far apart on the curve.
    pub embed: f64,
    /// Residual accepted for refined roots (crossings, events).
    pub root: f64,
    /// Parameter distance under which two crossings are the same crossing.
    pub dedup: f64,
    /// Deviation allowed from the tail line outside the support.
    pub tail: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            embed: 1e-6,
            root: 1e-8,
            dedup: 1e-6,
            tail: 1e-6,
        }
    }
}

impl ToleranceSet {
    pub fn halved_root(self) -> Self {
        Self {
            root: 0.5 * self.root,
            ..self
        }
    }
}
