//! Forward and inverse resonance engine for half-line Schrödinger operators
//! with Robin boundary data and compactly supported potentials, as arising
//! from Love waves in a vertically inhomogeneous half-space.
//!
//! Shear profiles and potentials are generic over [`Real`]; the complex
//! analytic machinery (Jost functions, zero finding, scattering data,
//! Marchenko solves) works in `f64`. The aliases below fix the scalar to
//! `f64` for everyday use.

pub mod error;
pub mod inversion;
pub mod io;
pub mod jost;
pub mod marchenko;
pub mod numeric;
pub mod profile;
pub mod resonances;
pub mod scattering;
pub mod scalar;
pub mod sheet;

pub use error::{Error, Result, Stage};
pub use jost::{ForwardJost, JostEval, JostEvaluator};
pub use resonances::{Rect, ResonanceSet, Zero};
pub use scalar::Real;
pub use sheet::{Sheet, SheetPoint};

pub use num_complex::Complex64;

pub type ShearProfile = profile::ShearProfile<f64>;
pub type PotentialProfile = profile::PotentialProfile<f64>;
pub type ShearProfileF32 = profile::ShearProfile<f32>;
pub type PotentialProfileF32 = profile::PotentialProfile<f32>;
