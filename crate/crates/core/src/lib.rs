//! Exact combinatorial invariants of nondegenerate curves in toric surfaces,
//! computed from Newton polygons.
//!
//! The crate is organized bottom-up:
//! - [`lattice`]: exact plane lattice geometry (hulls, widths, normal forms,
//!   outward shifts, column vectors);
//! - [`ring`] / [`poly`] / [`dyneval`]: exact polynomial arithmetic over the
//!   rationals, prime fields, polynomial extensions, and squarefree quotients
//!   (gcd, resultants, root finding);
//! - [`laurent`]: Laurent polynomials, their parser, and face restrictions;
//! - [`nondegen`]: the face-by-face nondegeneracy decision procedure;
//! - [`invariants`]: genus, gonality, and the scroll-related invariants;
//! - [`classify`]: the width-2 interior polygon families and verdicts;
//! - [`atlas`]: exhaustive enumeration of width-2 interior polygons;
//! - [`isocheck`]: finite-field verification of explicit curve isomorphisms.

pub mod atlas;
pub mod classify;
pub mod dyneval;
pub mod invariants;
pub mod isocheck;
pub mod lattice;
pub mod laurent;
pub mod nondegen;
pub mod poly;
pub mod ring;

pub use lattice::{LatticePoint, LatticePolygon, UnimodularMap};
