//! Spin-structure invariants and Dirac eigenvalue bounds on surfaces.
//!
//! The crate computes topological and metric invariants of closed oriented
//! surfaces carrying a spin structure:
//!
//! - [`gf2`]: symplectic GF(2) linear algebra, quadratic forms and their Arf
//!   invariants, including the constructive zero-Lagrangian basis algorithms.
//! - [`surface`]: triangulated surfaces with an edge-length metric, homology
//!   bases, mod-2 intersection numbers, cutting along curve systems and
//!   shortest cycles in a prescribed homology class.
//! - [`spin`]: spin structures encoded as quadratic forms on `H_1(M, Z_2)`,
//!   spin-cut search with verifiable certificates, and the torus of
//!   revolution with its induced spin structure.
//! - [`cutmetrics`]: cut-diameters of spin-cuts, certified lower bounds for
//!   the spin-cut diameter, and closed-form stable norms on flat tori.
//! - [`bounds`]: eigenvalue and Willmore lower-bound formulas with optimal
//!   `k` search.
//! - [`flattorus`]: the exact Dirac spectrum of a flat 2-torus, used as an
//!   oracle to verify the torus eigenvalue bound end to end.
//! - [`willmore`]: discrete Willmore energy of embedded meshes.
//! - [`fixtures`]: deterministic test meshes (grid tori, a genus-2 surface,
//!   icospheres).
//!
//! All types are immutable after construction and all operations are pure,
//! so values can be shared freely across threads.

pub mod bounds;
pub mod cutmetrics;
pub mod fixtures;
pub mod flattorus;
pub mod gf2;
pub mod spin;
pub mod surface;
pub mod willmore;
