//! Ergodic and symbolic dynamics of backward economic maps.
//!
//! The crate is organised bottom-up:
//!
//! * [`maps`]: map families, derivatives, unimodal analysis, chaos criteria.
//! * [`symbolic`]: words, itinerary coding of the logistic Cantor set, periodic points.
//! * [`invlim`]: truncated inverse-limit points, the product metric, shadowing.
//! * [`thermo`]: utility potentials, pressure, equilibrium measures.
//! * [`verify`]: numerical certificates for the main results, as JSON reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod invlim;
pub mod maps;
pub mod symbolic;
pub mod thermo;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use tol::Tolerances;
