//! Construction, analysis and decoding of partially symmetric monomial codes.
//!
//! The crate is organised bottom-up:
//!
//! * [`bitmath`]: GF(2) vectors and matrices, GF(2^m) arithmetic.
//! * [`codes`]: monomial, Reed-Muller, polar and extended BCH codes.
//! * [`calculus`]: derivative codes, symmetry profiles, automorphism checks.
//! * [`bounds`]: lower bounds on derivative dimensions.
//! * [`construct`]: optimal t-symmetric monomial codes.
//! * [`channelconstruct`]: density evolution and layer-permutation ranking.
//! * [`decode`]: SC, SC-list, permutation and exhaustive ML decoders.
//! * [`sim`]: seeded Monte Carlo frame error rate estimation.

pub mod bitmath;
pub mod bounds;
pub mod calculus;
pub mod channelconstruct;
pub mod codes;
pub mod construct;
pub mod decode;
mod error;
pub mod sim;

pub use bitmath::{BitMatrix, BitVec, GF2mField};
pub use codes::{FrozenSpec, LinearCode, Monomial, MonomialCode};
pub use error::Error;
