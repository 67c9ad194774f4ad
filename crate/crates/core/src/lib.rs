//! Exact computer algebra for the elliptic Hall algebra.

pub mod hopf;
pub mod kfield;
pub mod lattice;
pub mod linalg;
pub mod par;
pub mod presentation;
pub mod shuffle;
