//! Exact computations with covering spectra of finite metric graphs.
//!
//! A length space is modeled as a connected graph with positive rational
//! edge lengths.  On top of that model the crate builds free-group words for
//! loops, normal-closure membership certificates, delta-covers and their
//! cut-off variants, spectrum extraction with exactness flags, grid
//! homotopies, and pointed-convergence experiments.

pub mod closure;
pub mod complex;
pub mod coset;
pub mod cover;
pub mod coverball;
pub mod family;
pub mod fileio;
pub mod graph;
pub mod homotopy;
pub mod lattice;
pub mod member;
pub mod rat;
pub mod spectrum;
pub mod stallings;
pub mod word;
pub mod zoo;

pub use graph::{Ball, ComplementComponent, ConjClass, Edge, EdgePath, MetricGraph, Step, VertexId};
pub use rat::{fmt_rat, parse_rat, rat, Rat};
pub use word::Word;
