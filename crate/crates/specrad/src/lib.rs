//! Laboratory for the spectral radius of i.i.d. random matrices.
//!
//! The crate samples matrix ensembles with symmetric entry laws, computes and
//! bounds the spectral radius through trace moments and operator-norm powers,
//! implements the even-digraph combinatorics behind those bounds, and measures
//! dyadic cycle-weight statistics. Everything is built for desk scale:
//! exhaustive oracles where the state space is small, seeded Monte Carlo where
//! it is not, and deterministic outputs throughout.

pub mod cyclestats;
pub mod digraph;
pub mod dist;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod seeds;
pub mod spectral;

pub use error::{Error, Result};
