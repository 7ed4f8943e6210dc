//! Periodic grids approximating the line, Fourier multipliers, quadrature
//! norms, band projections and semigroup kernels.

mod field;
mod grid;
pub mod io;
mod kernel;
mod norms;
mod ops;

pub use field::Field;
pub use grid::{make_grid, Grid, MIN_POINTS};
pub use kernel::{
    fractional_kernel_check, kernel_positivity_check, semigroup_kernel, KernelReport, KERNEL_TOL,
};
pub use norms::{inner, l2_norm, lp_norm, weighted_l2};
pub use ops::{
    apply_multiplier, band_measure, band_project, dealias, dealiased, dealiased_product,
    derivative, interpolate, shift, upsample, Multiplier, HERMITIAN_TOL,
};
