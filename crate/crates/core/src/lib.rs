//! Cavity field of a laser-driven equidistant three-level ladder emitter.
//!
//! Two laser-dressed transitions of the emitter share one cavity mode. Their
//! coupling amplitudes carry the laser phases, so for matched phases and
//! Rabi-frequency ratio `omega2 / omega1 = g1 / g2` they cancel and the
//! cavity stays empty although the emitter is continuously pumped.
//!
//! * [`model`]: parameters, dressed-basis constants, secular diagnostic.
//! * [`dressed`]: reduced five-variable dynamics on a truncated Fock ladder.
//! * [`oracle`]: full master equation on the bare-level x Fock basis.
//! * [`observables`]: `<n>`, `g2(0)`, photon distributions.
//! * [`sweep`]: parallel two-parameter maps of the steady cavity field.
//! * [`cli`]: config files, CSV output and the command-line front end.

pub mod banded;
pub mod cli;
pub mod dressed;
pub mod error;
pub mod model;
pub mod observables;
pub mod ode;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Result};
