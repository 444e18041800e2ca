//! Extremal families for the Kruskal–Katona shadow bound.
//!
//! The crate is organised bottom-up: [`numeric`] (binomials and the three
//! decomposition kinds), [`setfam`] (bitmask k-set families, colex order,
//! shadows), [`hypergraph`] (minimal non-faces, blocking sets, extension
//! trees), [`bbw`] (the bins-balls-wall process), [`extremal`] (extremality
//! tests and the theorem-level predicates), [`construct`] (constructions A/B
//! and the decision procedure) and [`oracle`] (exhaustive ground truth).
//!
//! With the default `parallel` feature the exhaustive sweeps run on rayon;
//! without it they fall back to plain iterators with identical output.

pub mod bbw;
pub mod construct;
mod error;
pub mod extremal;
pub mod hypergraph;
pub mod io;
pub mod numeric;
pub mod oracle;
pub mod par;
pub mod setfam;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
