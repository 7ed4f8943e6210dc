//! Numerical laboratory for heteroclinic fronts of the generalized
//! dispersive-diffusive Burgers equation `u_t - u_xx + u u_x = L u`,
//! where `L` is a Fourier multiplier.
//!
//! The crate is organised as a pipeline:
//!
//! * [`symbol`] parses and validates multiplier symbols `l(k)`;
//! * [`spectral`] provides the periodic grid, spectral calculus and norms;
//! * [`front`] computes steady front profiles (closed form, shooting, Newton);
//! * [`certify`] counts negative eigenvalues of the Schrödinger operator
//!   `-(1-eps) d^2 + phi'/2`;
//! * [`evolution`] integrates the modulated perturbation equation and
//!   provides the Cole–Hopf oracle;
//! * [`diagnostics`] turns trajectories into norm series, decay-rate fits
//!   and theorem envelope verdicts.
//!
//! Interchangeable algorithms (front methods, time schemes, operator
//! presets) sit behind traits and are looked up by name in a [`Registry`].

pub mod certify;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod front;
pub mod registry;
pub mod spectral;
pub mod symbol;

pub use error::{Error, Result};
pub use registry::Registry;

pub use num_complex::Complex64;
