//! Annihilators of stable endomorphism rings of maximal Cohen–Macaulay
//! modules over hypersurfaces, computed from matrix factorizations with
//! exact linear algebra, and compactness verdicts for the Alexandrov
//! topology they induce.

pub mod alexandrov;
pub mod annihilator;
pub mod catalog;
pub mod error;
pub mod field;
pub mod ideal;
pub mod linalg;
pub mod mf;
pub mod normal_form;
pub mod poly;
pub mod report;
pub mod truncated;

pub use error::{Error, Result};
pub use field::{Field, FieldConfig, GaussianRationals, PrimeField, Rationals};
pub use ideal::IdealSpec;
pub use mf::{MatrixFactorization, PolyMatrix};
pub use poly::{Monomial, Polynomial};
pub use truncated::{RingSpec, TruncatedAlgebra};
