//! Exact symbolic computation in the Cuntz algebras O_n and in matrix
//! algebras M_k(O_n), together with the fixed-point-algebra constructions
//! for the cyclic and exchange automorphisms and the verification suites
//! that re-derive their identities.

pub mod algebra;
pub mod construct;
pub mod error;
pub mod expr;
pub mod matrix;
pub mod morphism;
pub mod random;
pub mod report;
pub mod scalar;
pub mod suites;

pub use algebra::{Element, Monomial, Predicate, Rank, Word};
pub use error::{Error, Result};
pub use matrix::{ad_unitary, MatPredicate, MatVerdict, OpMatrix};
pub use report::{CheckRecord, CheckReport, Status};
pub use morphism::{cyclic_unitary, named_endo, CyclicAction, Endo, EndoKind};
pub use scalar::{Backend, BackendKind, CycloScalar, Exact, Numeric, NumericScalar, Scalar};
pub use expr::{format_element, parse_element, ParseError};
pub use suites::{compare_backends, run_suite, RunOptions, SuiteName};
