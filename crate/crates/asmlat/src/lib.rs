//! Exact arithmetic for the lattice of alternating sign matrices.
//!
//! The crate is organized as a chain of increasingly specialized layers:
//!
//! * [`perms`] - permutations, Dyck paths, noncrossing partitions.
//! * [`asm_core`] - ASMs and their corner-sum and height-function encodings,
//!   the lattice operations, and the excedance statistics.
//! * [`birkhoff`] - generic finite posets, distributive lattices, lattice
//!   congruences, and Birkhoff duality.
//! * [`tetra`] - the tetrahedron and triangle posets whose lower sets encode
//!   ASMs, with the explicit (anti)bigrassmannian matrices of their points.
//! * [`catalan_congruence`] - walls, depth triangles, catalan triangles, and
//!   bicolored pipe dreams: the four cryptomorphic descriptions of the
//!   congruences of the ASM lattice with catalan quotients.
//! * [`extrema`] - depth antichains, covexillary maxima, essential points,
//!   nappes, and the counting theory of class extrema.
//! * [`tl_algebra`] - the Temperley-Lieb algebra TL_n(2) and the change of
//!   basis from congruence class maxima to 321-avoiding permutations.
//! * [`sym_posets`] - symmetrized powers of posets and the orders they
//!   induce on multisets.
//! * [`models_render`] - six-vertex states, fully packed loops, cliff
//!   diagrams, peak-pit diagrams, and deterministic SVG rendering.

pub mod asm_core;
pub mod birkhoff;
pub mod catalan_congruence;
pub mod error;
pub mod extrema;
pub mod perms;
pub mod tetra;
pub mod util;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
