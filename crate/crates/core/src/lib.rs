//! Exact verification of finite algebraic identities for abelian `Z/L`-covers of surfaces.
//!
//! The crate builds the symplectic lattice `H_L = (Z/L)^{2g}`, the rational group
//! ring `Q[H_L]`, the homology of the universal abelian `Z/L`-cover of a surface
//! through Fox calculus, and the presented space `A_g` with its map `psi` into
//! `B_g`, and checks the finite identities relating them with exact arithmetic.

pub mod error;
pub mod fox;
pub mod group_ring;
pub mod lattice;
pub mod linalg;
pub mod presentation;
pub mod report;
pub mod verifier;

pub use error::{Error, Result};
pub use lattice::{LatticeParams, ZlVector};
