//! Exact arithmetic and geometry of quartic del Pezzo surfaces and of
//! quartic del Pezzo fibrations over the projective line.
//!
//! Everything here is computed over the rationals or over finite fields of
//! odd characteristic, with no floating point anywhere: heights, Euler
//! characteristics and Hodge numbers of fibrations, determinantal quintics
//! and GIT stability of pencils of quadrics, binary-quintic invariants and
//! the weighted moduli point, the rank-6 Picard lattice with its Weyl-group
//! action, and brute-force point/section censuses over small fields.
//!
//! The crate is `no_std` (it allocates, it never does IO); file formats and
//! the command-line front end live in the companion `dp4kit` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod census;
pub mod error;
pub mod fibration;
pub mod lattice;
pub mod pencil;
pub mod quintic;

pub use error::Error;
