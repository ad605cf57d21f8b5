//! Exact symbolic laboratory for cocycle-twisted stabilizer lattice models.
//!
//! Everything here is exact: scalars are roots of unity tracked as rationals
//! mod 1, traces live in cyclotomic integer rings, and ground-state degeneracy
//! comes out of integer linear algebra over residue rings. No floating point
//! enters any result.
//!
//! The crate is organized bottom-up:
//!
//! - [`phase`], [`cyclo`]: exact root-of-unity scalars and cyclotomic sums.
//! - [`group`], [`cocycle`]: finite abelian groups, their duals, 2-cocycles
//!   and slant products.
//! - [`site`]: the single-site monomial operator algebra (twisted shift and
//!   clock operators on the group algebra).
//! - [`lattice`]: square/cubic lattices with periodic or open boundaries.
//! - [`operator`], [`model`]: multi-site operators and the twisted Hamiltonian
//!   families (2D plaquette twists, both-direction twists, dual vertex twists,
//!   general abelian surface code, 3D surface code, X-cube).
//! - [`zmod`], [`engine`]: Howell-form linear algebra over Z_N and the
//!   stabilizer-group analysis built on it (degeneracy, membership, logicals).
//! - [`oracle`]: independent brute-force ground-space oracles used to validate
//!   the symbolic engine on small instances.
//! - [`strings`], [`analysis`]: excitation factories, syndromes, confinement
//!   scans, braiding, boundary condensation, fractal symmetry operators.
//! - [`peps`]: exact verification of the tensor-network identities.
//! - [`config`], [`report`], [`svg`]: batch-run configuration, JSON reports,
//!   diagram rendering.

pub mod analysis;
pub mod cocycle;
pub mod config;
pub mod cyclo;
pub mod engine;
pub mod group;
pub mod lattice;
pub mod model;
pub mod operator;
pub mod oracle;
pub mod peps;
pub mod phase;
pub mod report;
pub mod site;
pub mod strings;
pub mod svg;
pub mod zmod;

pub use cocycle::Cocycle;
pub use group::{FiniteAbelianGroup, GroupElement, Irrep};
pub use lattice::{Axis, Cell, CellKind, Edge, Lattice};
pub use model::{ModelInstance, Variant};
pub use operator::LatticeOperator;
pub use phase::Phase;
pub use site::{CommutationResult, SiteKind, SiteOperator};
