//! Exact machinery for flow polytopes of signed graphs.
//!
//! A signed graph on `[n+1]` attaches a type `C` root to every edge: a
//! negative edge `(i, j, -)` carries `e_i - e_j`, a positive edge `(i, j, +)`
//! carries `e_i + e_j`, and a loop `(i, i, +)` carries `2 e_i`.  The flow
//! polytope of a graph and a netflow vector is the set of nonnegative edge
//! flows whose incidence image equals the netflow.  This crate computes
//! normalized volumes of those polytopes by three independent routes —
//! Ehrhart interpolation of exact lattice-point counts, recursive reduction
//! subdivision, and dynamic Kostant partition functions — and verifies the
//! constant-term identities that govern the Chan-Robbins-Yuen families
//! `CRY`, `CRYD` and `CRYC`.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod ct;
pub mod dynflow;
mod error;
pub mod exact;
pub mod graphs;
pub mod kostant;
mod linalg;
pub mod reduce;

pub use error::{Error, Result};
