//! Statistical mechanics of the one-dimensional XY ring with unit coupling,
//! solved with the transfer matrix whose eigenvalues are `I_n(β)`.

pub mod bessel;
pub mod quadrature;
mod ring;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_i_scaled_orders, bessel_ratio_i1_i0};
pub use ring::{
    mean_energy_approx, mean_energy_exact, partition_function, relative_phase_pdf_approx,
    relative_phase_pdf_exact, RingSpec, DEFAULT_N_MAX,
};
