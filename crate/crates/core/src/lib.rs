//! zhl-core: a numerical laboratory for the prime-density function Φ(x), the
//! zeta-zero residue sum Z(λ), their spectral comparison on a Chebyshev grid,
//! and a Newton-flow continuation root-finder for ζ(z).

pub mod density;
pub mod error;
pub mod flow;
pub mod pipeline;
pub mod primes;
pub mod spectrum;
pub mod specfun;
pub mod sum;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
