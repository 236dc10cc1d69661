//! Commutators of tensor products of Pauli matrices, local vs. global
//! compatibility of multiqubit observables, and Kochen-Specker style sign
//! paradoxes with their entangled eigenstates.

pub mod cli;
pub mod compatibility;
pub mod dense;
pub mod error;
pub mod paradox;
pub mod pauli;
pub mod states;
pub mod tensor;

pub use compatibility::{classify_pair, is_fully_nontrivial, CaseLabel, CompatibilityReport, Execution, SweepOutcome};
pub use dense::{apply, eigen_check, to_dense, DenseMatrix, StateVector};
pub use error::{Error, Result};
pub use paradox::{verify_ks, ParadoxCertificate, Partition};
pub use pauli::{anticommutes_single, commutes_single, single_product, PauliIndex, Phase};
pub use tensor::{BracketAssignment, BracketKind, DecompositionTerm, PauliString, ScaledPauli, SiteSet};
