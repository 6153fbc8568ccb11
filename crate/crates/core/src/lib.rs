//! Nonadiabatic ImF ring-polymer instanton rates.
//!
//! The crate evaluates semiclassical barrier-crossing rates on three
//! ring-polymer surfaces — the lower-adiabat (Born-Oppenheimer) surface, the
//! mean-field trace of ordered matrix exponentials, and the zero-hop-corrected
//! surface — together with exact quantum-scattering and limiting-case
//! reference rates for desk-scale verification.
//!
//! Modules follow the pipeline: [`models`] defines diabatic potentials,
//! [`rp`] evaluates ring-polymer energies/gradients/Hessians, [`saddle`]
//! locates stationary points and crossover temperatures, [`rates`] assembles
//! rate coefficients, and [`oracles`] provides independent references.

pub mod error;
pub mod linalg;
pub mod mat2;
pub mod models;
pub mod oracles;
pub mod rates;
pub mod rp;
pub mod saddle;

pub use error::{Error, Result};
