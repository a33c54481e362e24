//! Multi-index regularity-structure machinery for the renormalized 3D
//! Yang-Mills Langevin equation on a periodic parabolic grid.
//!
//! The crate is organized around the pipeline
//!
//! * [`indexcalc`] — exact multi-index arithmetic, symbolic homogeneities and
//!   enumeration of the populated index set,
//! * [`tensoralg`] — the Lie-algebra data, symmetric tensor spaces `W_beta`
//!   and the quadratic/cubic nonlinearity tensors,
//! * [`fieldgrid`] — periodic parabolic grids, white noise, mollification,
//!   the cut-off massive heat kernel and convolution/pairing primitives,
//! * [`model`] — the canonical lift, recentering automorphisms `F_x`,
//!   recentered maps and the structure group `G_xy`,
//! * [`renorm`] — Monte-Carlo counterterm fixing (generalized BPHZ),
//! * [`verify`] — algebraic identity suites and statistical estimates,
//! * [`langevin`] — an experimental time integrator for the renormalized
//!   equation consuming the fixed counterterm.

pub mod error;
pub mod fieldgrid;
pub mod indexcalc;
pub mod io;
pub mod langevin;
pub mod model;
pub mod renorm;
pub mod tensoralg;
pub mod verify;

pub use error::{Error, Result};
