//! Library half of the `eqmf` command-line tool. The binary in `main.rs` is
//! a thin argument parser over these modules:
//!
//! - [`config`]: problem-config decoding and object resolution;
//! - [`tasks`]: one function per operation, each producing a certified
//!   JSON report;
//! - [`runner`]: task selection, the validate-before-compute phase split,
//!   atomic report writing, and exit-code mapping;
//! - [`gen`]: seeded random generators for objects, automorphisms, and
//!   idempotents (shared by the suite and the acceptance tests);
//! - [`suite`]: the built-in corpus run by `eqmf suite`.

pub mod config;
pub mod gen;
pub mod runner;
pub mod suite;
pub mod tasks;
