//! Weyl-Heisenberg and Clifford groups in finite dimension, and tests for
//! whether a finite matrix group is a unitary 2-design.
//!
//! The modules build on each other bottom-up:
//!
//! - [`matrix`]: dense complex matrices, Kronecker products, rank decisions.
//! - [`weyl`]: exact index arithmetic for `WH_d` and its multipartite form.
//! - [`clifford`]: projective unitaries, Clifford generators, closure enumeration.
//! - [`design`]: frame potentials, characters, commutant dimensions, order classes.
//! - [`twirl`]: exact 2-fold Haar twirl, group twirls, channel twirling.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and plain iteration otherwise.

pub mod clifford;
pub mod design;
pub mod error;
pub mod matrix;
pub mod par;
pub mod random;
pub mod twirl;
pub mod weyl;

pub use clifford::{
    canonicalize, clifford_generators, closure_enumerate, multipartite_clifford_generators, named_spec,
    normalizer_check, GroupKind, GroupSpec, ProjectiveUnitary,
};
pub use design::{DesignReport, OrderClassPartition, Verdict};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use twirl::ChoiMatrix;
pub use weyl::{MultiWHIndex, WHIndex};
