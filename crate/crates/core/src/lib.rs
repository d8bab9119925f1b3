//! Exact colourings of the positive rationals that defeat monochromatic
//! sum-product configurations, plus tools to check, search for and build
//! such configurations.

pub mod colour;
pub mod construct;
pub mod digits;
pub mod error;
pub mod numeric;
pub mod primes;
pub mod verify;

pub use colour::{Colouring, ColourValue, PairColouring, Registry};
pub use error::{Error, Result};
pub use numeric::Rational;
pub use primes::PrimeTable;
