//! Exact arithmetic over Q and F_q(T) for bounded-height point sets: heights
//! and places, prime windows, residue-class profiling, small solutions of
//! homogeneous linear systems, and low-degree polynomial fitting with
//! verifiable certificates.
//!
//! Everything numeric is exact; the one float concession is freezing log N
//! as a dyadic rational at parameter ingestion. All randomness flows from an
//! explicit seed, so every run is reproducible.

pub mod arith;
pub mod error;
pub mod factor;
pub mod field;
pub mod fit;
pub mod fqpoly;
pub mod heights;
pub mod io;
pub mod linalg;
pub mod parallel;
pub mod params;
pub mod poly;
pub mod primes;
pub mod probe;
pub mod residue;
pub mod siegel;

pub use error::{Error, Result};
