//! A desk-scale spectral laboratory for the stability of 2D Couette flow.
//!
//! The library evolves the perturbation vorticity of plane Couette flow on a
//! doubly periodic domain, carries the exact linearized solution, the
//! time-dependent ghost-weight multipliers, the nonlinear change of
//! coordinates and the echo toy model, and measures every bound that can be
//! sampled numerically at this scale. The `couette` binary in the companion
//! crate exposes the whole thing as subcommands.

pub mod config;
pub mod coords;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod fit;
pub mod lemmas;
pub mod linear;
pub mod multiplier;
pub mod output;
pub mod solver;
pub mod spectral;
pub mod sweep;
pub mod toy;

pub use error::{Error, Result};
