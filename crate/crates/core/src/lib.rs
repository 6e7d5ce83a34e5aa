//! Generalized Airy edge kernel of unitary ensembles with a |x|^{2α} root
//! singularity at a soft edge, computed from the Painlevé XXXIV transcendent
//! and its Lax pair.

pub mod cli;
pub mod error;
pub mod finiten;
pub mod fredholm;
pub mod io;
pub mod kernel;
pub mod lax;
pub mod ode;
pub mod p34;
pub mod psi;
pub mod rhcheck;
pub mod specfun;

pub use error::{Error, Result};
