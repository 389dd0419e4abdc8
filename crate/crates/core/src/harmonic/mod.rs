//! Fourier analysis of exponential systems: closed-form indicator
//! transforms, Gram matrices, moment vectors and quadrature oracles.
//!
//! Transforms use the sign convention `∫ 1_S(x) e(+tx) dx`, so the Gram
//! entry `G_{jk}` is the transform at `λ_k − λ_j`.

mod gram;
pub mod quadrature;
mod system;
mod toeplitz;
mod transform;
mod weight;

pub use gram::{
    energy_quadratic_form, function_energy, gram_matrix, moment_vector, Domain, DomainTag, FunctionSpec, GramMatrix, GramStorage, Region,
};
pub use quadrature::{quadrature_oracle, Integrand};
pub use system::{Coefficients, ExponentialSystem, Frequencies, Frequency, Structure};
pub use toeplitz::HermitianToeplitz;
pub use transform::{bessel_j1, disk_ft, indicator_ft_1d, indicator_ft_disk, mollifier_ft};
pub use weight::WeightSpec;
