//! Solver for systems of quadratic boolean polynomials.
//!
//! The solver specializes the last `k` variables, builds the boolean
//! Macaulay matrix of each specialized system and discards every branch for
//! which a linear combination of matrix rows yields the constant polynomial
//! `1`. Surviving branches are searched exhaustively. The consistency test is
//! either dense Gaussian elimination ([`gf2::dense`]) or a Las Vegas
//! Wiedemann solver over GF(2^64) ([`gf2::wiedemann`]); both return verified
//! witnesses, so the output never depends on which one is used.
//!
//! Alongside the solver the crate carries the complexity model used to pick
//! parameters: truncated Hilbert series ([`hilbert`]), asymptotic exponents,
//! concrete bit-operation counts, and the statistical experiments in
//! [`experiments`].

pub mod error;
pub mod experiments;
pub mod gf2;
pub mod hilbert;
pub mod macaulay;
pub mod monomial;
pub mod par;
pub mod poly;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use poly::{Assignment, QuadraticPoly, QuadraticSystem};
pub use rng::SplitMix64;
