//! Equivariant matrix factorizations over graded hypersurface rings.
//!
//! This crate computes with matrix factorizations of a quasi-homogeneous
//! polynomial `f` over a graded polynomial ring, together with actions of a
//! finite group by graded ring automorphisms. The main capabilities:
//!
//! - exact linear and polynomial algebra over `Q`, prime fields, and simple
//!   extensions ([`field`], [`poly`], [`linalg`]);
//! - matrix factorizations, their morphism and stable morphism spaces, cones,
//!   shifts, and twists ([`mf`], [`morphism`], [`stable`]);
//! - finite-dimensional algebra structure theory: Jacobson radical,
//!   idempotent lifting, primitive decompositions ([`algebra`]);
//! - splitting of strict and homotopy idempotents with machine-checkable
//!   certificates, and Krull–Schmidt decomposition ([`splitting`]);
//! - induction/restriction between equivariant and plain factorizations,
//!   averaging splittings, and strictification of homotopy-coherent group
//!   actions ([`functors`]);
//! - eventually periodic graded free resolutions over the hypersurface ring
//!   and conversion of a periodic tail back into a matrix factorization
//!   ([`resolution`]).
//!
//! All arithmetic is exact; every nontrivial output carries a certificate
//! that can be re-verified independently ([`report`]).

pub mod algebra;
pub mod cancel;
pub mod error;
pub mod field;
pub mod functors;
pub mod graded;
pub mod group;
pub mod linalg;
pub mod linsys;
pub mod mf;
pub mod morphism;
pub mod stable;
pub mod unipoly;
pub mod poly;
pub mod rat;
pub mod report;
pub mod resolution;
pub mod ring;
pub mod serialize;
pub mod singularity;
pub mod splitting;

pub use error::{Error, Result};
