//! Exact generating functions for tiled surfaces and branched covers of
//! elliptic orbifolds.
//!
//! The crate is organised bottom-up: [`arith`] supplies exact rational and
//! cyclotomic arithmetic, [`partitions`] and [`characters`] the symmetric
//! group combinatorics, [`shifted`] and [`weights`] the shifted-symmetric
//! functions and the measure `w_N`, [`qseries`] and [`qmodular`] the
//! modular-form side, and [`hurwitz`] and [`volumes`] the counting problems
//! built on top. [`transfer`] is a modular-arithmetic engine for brackets at
//! orders where partition enumeration is out of reach.

pub mod arith;
pub mod characters;
pub mod error;
pub mod fock;
pub mod hurwitz;
pub mod partitions;
pub mod qmodular;
pub mod qseries;
pub mod selftest;
pub mod shifted;
pub mod transfer;
pub mod volumes;
pub mod weights;

pub use arith::{Cyclo, Rational};
pub use error::{Error, Result};
pub use partitions::Partition;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
