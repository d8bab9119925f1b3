//! The colourings and their canonical colour values.

pub mod maps;
pub mod registry;
pub mod value;

pub use maps::{alpha, alpha_prime, big_phi, big_phi_u64, mu, nu, nu_special_class, phi, psi, psi_prime, theta};
pub use registry::{Colouring, PairColouring, Registry};
pub use value::{AlphaPrime, AlphaValue, ColourValue, MuValue, NuClass, NuValue, PhiValue, ThetaValue};
