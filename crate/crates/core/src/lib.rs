//! Numerical laboratory for radial Dunkl processes of types A and B.
//!
//! Interacting Brownian motions (type A) and interacting Bessel processes
//! (type B) are simulated with a projected Euler scheme and compared against
//! exact densities, log-gas equilibria and generalized Bessel kernels.

pub mod equilibrium;
pub mod error;
pub mod intertwine;
pub mod orthopoly;
pub mod rootsys;
pub mod sde;
pub mod symfunc;

pub use error::{Error, Result};
pub use rootsys::{RootKind, RootSystemConfig};
