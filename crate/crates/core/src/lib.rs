//! Path-complete Lyapunov functions with copositive norms.
//!
//! * [`graph`]: labeled graphs, path-completeness, SCCs and simulations.
//! * [`lifts`]: sum, max, min, composition and De Bruijn graph lifts.
//! * [`copositive`]: primal and dual copositive norms, certificates and their
//!   transport along lifts.
//! * [`lp`]: feasibility of the edge inequalities and the bisection bound.
//! * [`jsr`]: product bounds, the De Bruijn hierarchy and common functions.
//! * [`io`]: JSON and CSV formats.

pub mod copositive;
pub mod error;
pub mod graph;
pub mod io;
pub mod jsr;
pub mod lifts;
pub mod lp;

pub use copositive::{Certificate, Flavor, MatrixSet, PositiveVector};
pub use error::{Error, Result};
pub use graph::{LabeledGraph, NodeId};
pub use lifts::LiftKind;
