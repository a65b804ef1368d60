//! Simulator core for pre- and post-selected photons in a two-path interferometer.
//!
//! The crate is `no_std` and only needs `alloc`. Modules build on each other
//! in this order:
//!
//! - [`qcore`]: labeled complex state vectors and operators.
//! - [`prepost`]: weak values, ABL probabilities, and the three-box scenario.
//! - [`optics`]: half-wave plates, the two-path interferometer, and the
//!   polarization shift and restoration angles.
//! - [`weakmeas`]: the normalized readout, seeded photon-count synthesis, and
//!   least-squares extrapolation of the weak value.
//! - [`hom`]: Hong-Ou-Mandel visibility between two corrected photons.
#![no_std]

extern crate alloc;

pub mod error;
pub mod hom;
pub mod optics;
pub mod prepost;
pub mod qcore;
pub mod weakmeas;

pub use error::{Error, Result};
pub use optics::{InterferometerRun, MeasurementStrength, PathArm};
pub use prepost::{PrePostSelection, ThreeBox, WeakValueResult};
pub use qcore::{ComplexAmplitude, Operator, StateVector};
