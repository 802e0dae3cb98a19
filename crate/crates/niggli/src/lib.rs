//! Niggli reduction and the boundary geometry of the cone of reduced
//! cells in G6.
//!
//! A crystallographic unit cell with basis vectors a, b, c is encoded as
//! g = (a.a, b.b, c.c, 2 b.c, 2 a.c, 2 a.b) in R^6. The Niggli-reduced
//! cells form a cone in this space; this crate provides:
//!
//! - conversions between cell parameters and G6 ([`g6`]),
//! - reduction to the Niggli form with accumulated transforms ([`reduce`]),
//! - the catalog of the fifteen 5-D boundary polytopes of the cone with
//!   their exact transformation matrices and projectors ([`boundary`]),
//! - exact enumeration of the lattice of sub-polytopes formed by boundary
//!   intersections ([`enumerate`]),
//! - Monte Carlo probing of which transforms act near the boundaries
//!   ([`probe`]),
//! - classification of reduced cells against the lattice-character table
//!   ([`characters`]).

pub mod boundary;
pub mod characters;
pub mod cli;
pub mod error;
pub mod fuzz;
pub mod enumerate;
pub mod g6;
pub mod lp;
pub mod probe;
pub mod projector;
pub mod reduce;

pub use boundary::{BoundaryCase, Branch, CaseClass};
pub use error::{NiggliError, Result};
pub use fuzz::Fuzz;
pub use g6::{BasisTransform, CellParams, RatMat6, G6};
