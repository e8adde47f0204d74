//! Lattice polytopes of group-based phylogenetic models on claw trees.
//!
//! For a finite abelian group `G` and `n` leaves, `P_{G,n}` is the polytope
//! whose vertices are the indicator vectors of zero-sum `n`-tuples of group
//! elements. This crate builds these polytopes with exact integer
//! arithmetic, decides their normality (integer decomposition property in the
//! lattice spanned by the vertices), and produces certificates that can be
//! re-verified independently:
//!
//! * [`group`]: finite abelian groups as products of cyclic factors.
//! * [`polytope`]: vertices, the vertex lattice, exact dilation membership.
//! * [`normality`]: decomposition search, symmetry-reduced enumeration,
//!   simplicial covers, reports and certificates.
//! * [`graphs`]: edge-colored cubic graphs and good functions, which turn
//!   labelings of the truncated tetrahedron into non-normality witnesses.
//! * [`classify`]: the classification table for all groups up to an order.

pub mod classify;
pub mod config;
pub mod error;
pub mod graphs;
pub mod group;
pub mod lattice;
pub mod lp;
pub mod normality;
pub mod polytope;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec};
pub use polytope::{AmbientPoint, GPresentation, PolytopeModel};
