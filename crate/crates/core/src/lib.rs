//! Generalized happy numbers.
//!
//! For integers `e >= 1` and `b >= 2` the map `T_{e,b}` sends `n` to the sum of
//! the `e`-th powers of its base-`b` digits; `n` is `(e, b)`-happy when iterating
//! the map eventually produces `1`. This crate provides:
//!
//! - [`map`]: the digit map, trajectories, cycle sets and happiness classification;
//! - [`numtheory`]: factorization, primitive roots, discrete logs and CRT helpers;
//! - [`symbolic`]: [`TowerNat`], run-length numerals whose run counts are themselves
//!   numerals, for witnesses far too large to write down;
//! - [`constructor`]: builders for witnesses of arbitrarily long runs of consecutive
//!   happy numbers, emitted as checkable [`WitnessCertificate`]s;
//! - [`search`]: fast exhaustive scans for runs, residue witnesses and covers, with
//!   parallel chunking and resumable checkpoints;
//! - [`cli`]: the `happy` command line front end.

pub mod cli;
pub mod constructor;
mod error;
pub mod map;
pub mod numtheory;
pub mod search;
pub mod symbolic;

pub use constructor::{verify_certificate, Constructor, ConstructorConfig, WitnessCertificate};
pub use error::{Error, Result};
pub use map::{ClassifierCache, CycleSet, Params};
pub use symbolic::{Sym, TowerNat};
