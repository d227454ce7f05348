//! Toeplitz quantization on weighted Fock spaces at desk scale: heat
//! transforms and mean oscillation against the Gaussian family μ_t,
//! truncated Toeplitz/Hankel operator matrices in the monomial basis, and
//! semi-commutator norm sweeps in the semiclassical limit t → 0.

pub mod error;
pub mod grid;
pub mod heat;
pub mod quad;
pub mod special;
pub mod symbol;

pub use error::{FockError, Result};
pub use symbol::Symbol;
