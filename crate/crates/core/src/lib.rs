//! Periodic Jacobi matrices: band structure, Marchenko-Ostrovsky spectral
//! data, its gradients and symplectic identities, and the inverse map.

pub mod cli;
pub mod error;
pub mod fd;
pub mod gradients;
pub mod inverse;
pub mod mo_map;
pub mod potential;
pub mod quasimomentum;
pub mod recurrence;
pub mod spectrum;
pub mod tridiag;
pub mod verify;

pub use error::{Error, Result};
pub use gradients::{GradField, MOJacobian};
pub use inverse::{solve_inverse, InverseOptions, InverseResult};
pub use mo_map::{mo_data, mo_map, MOData};
pub use potential::{FreeCoords, Potential};
pub use spectrum::{spectral_data, SpectralData};
