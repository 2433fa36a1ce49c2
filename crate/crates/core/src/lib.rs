//! Exact enumerative computations around tropical covers.
//!
//! The crate counts tropical covers of the line and of the circle (tropical
//! double Hurwitz numbers and tropical simple Hurwitz numbers of an elliptic
//! curve), extracts coefficients of refined Feynman integrals from their
//! propagator expansion, computes the genus-0 chamber structure of double
//! Hurwitz numbers, builds Kontsevich's graph complex at small genus and the
//! combinatorial types of tropical moduli spaces. A symmetric-group
//! monodromy count serves as an independent classical reference.
//!
//! All arithmetic is exact. Enumerations that have independent branches run
//! on rayon when the `parallel` feature is enabled (the default).

pub mod error;
pub mod chambers;
pub mod elliptic_covers;
pub mod feynman_series;
pub mod graph_complex;
pub mod graphs;
pub mod line_covers;
mod linalg;
pub mod moduli_space;
pub mod par;
pub mod rational;
pub mod sym_oracle;

pub use error::{Error, Result};
pub use graphs::{Multigraph, Partition};
pub use rational::Rational;
