//! Chain tracing through gates of colored triangulated grids.
//!
//! The unit square at resolution k is triangulated into 2k² lattice
//! triangles. A coloring assigns ±1 to every vertex; a face whose endpoints
//! disagree is a gate, and every triangle has zero or two of them. Entering
//! a gated triangle therefore forces the exit, and following that rule
//! traces deterministic chains: boundary-to-boundary paths on the square,
//! closed winding cycles on the torus identification.
//!
//! On top of the tracing core sit two falsification harnesses. The `mean`
//! harness hunts for finite obstructions in candidate symmetric means on
//! the circle (symmetry violations, retraction violations, or persistent
//! adjacent-vertex image jumps along traced cycles). The `borsuk` harness
//! does the same for candidate disk-to-boundary retractions via the
//! two-gate boundary pattern and its single connecting chain.
//!
//! Modules:
//! - [`grid`]: exact integer lattice, simplexes, faces, rectangles.
//! - [`coloring`]: ±1 colorings, gates, candidate sampling, diagnostics.
//! - [`chain`]: continuation, maximal chains, ≈/≃ partitions, witnesses.
//! - [`torus`]: seam identification, closed cycles, winding numbers.
//! - [`limits`]: upper-limit approximation and ε-connectivity of point sets.
//! - [`experiments`]: candidate registry and certificate harnesses.
//! - [`render`]: deterministic SVG pictures of colorings and chains.
//! - [`cli`]: the `gatewalk` command-line interface.

pub mod chain;
pub mod cli;
pub mod coloring;
pub mod experiments;
pub mod grid;
pub mod limits;
pub mod render;
pub mod torus;
mod util;
