//! Majorana stellar representation of pure spin-j states and matching
//! probabilities of oriented spin states.
//!
//! * [`spin`]: half-integer bookkeeping and the state vector type.
//! * [`stellar`]: state to polynomial to stars (and back).
//! * [`transition`]: matching probability `|d^j_{m'm}(alpha)|^2` by several
//!   independent routes, plus closed forms for small `j`.
//! * [`psi`]: numeric factorization of the probability families.
//! * [`scan`]: grid evaluation.
//! * [`io`]: JSON and CSV formats.
//! * [`verify`]: the invariant suite behind `majorana verify`.

pub mod error;
pub mod factorial;
pub mod io;
pub mod psi;
pub mod roots;
pub mod scan;
pub mod spin;
pub mod stellar;
pub mod transition;
pub mod verify;

pub use error::{Error, Result};
pub use spin::{HalfInt, SpinState};
pub use stellar::{SpherePoint, StarSet};
pub use transition::TransitionSpec;
