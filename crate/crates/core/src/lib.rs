//! Detection of outer rotational misalignment between 3D vector fields by
//! iterating the rotor encoded in their geometric cross-correlation.
//!
//! * [`ga3`]: Cl(3,0) multivectors, rotors and projections.
//! * [`field`]: sampled vector fields, linear fields, outer rotations.
//! * [`corr`]: geometric cross-correlation at the origin.
//! * [`detect`]: the plain and the accelerated iterative detector.
//! * [`imageio`]: RGB images as color-space vector fields, PPM I/O.
//! * [`experiment`]: the experiment drivers behind the `geocorr` binary.

pub mod corr;
pub mod detect;
pub mod error;
pub mod experiment;
pub mod field;
pub mod ga3;
pub mod imageio;

pub use error::{Error, Result};
