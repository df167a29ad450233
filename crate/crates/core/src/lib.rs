//! Mod-2 evaluation of the order-3 one-dimensional cocycle `v₃¹` of the
//! space of long knots on explicit loops of knots.
//!
//! The crate builds long knots as piecewise cubic splines, computes their
//! plane diagrams and order-2 invariants, constructs the standard loops
//! (axis rotation, bead drags, framed drags, commutator brackets) and
//! evaluates the cocycle by sweeping the loop and counting the codimension-1
//! events of its combinatorial formula.
//!
//! It is `no_std` with `alloc`; enable `std` for `std::error::Error` style
//! integration and `parallel` for multithreaded sweeping.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod catalog;
pub mod curve;
pub mod cycles;
pub mod diagram;
pub mod error;
pub mod genericity;
pub mod invariants;
pub mod math;
pub mod oracle;
pub mod sweep;
pub mod tolerance;

pub use curve::{LongKnot, SplinePiece};
pub use error::{Error, Result};
pub use tolerance::ToleranceSet;
