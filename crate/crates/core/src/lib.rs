//! Exact computation in truncated relatively free nonassociative algebras
//! over `Q(t1, ..., tm)`: varieties, verbal operation systems, ideal closure
//! and a case-splitting falsifier for geometric equivalence.

pub mod closure;
pub mod error;
pub mod freealg;
pub mod linalg;
pub mod parse;
pub mod scalars;
pub mod variety;
pub mod verbal;

pub use error::{Error, Result};
pub use freealg::{Element, Endomorphism, GeneratorSet, Monomial, ParamElement, SymbolicEndomorphism};
pub use scalars::{Coeff, FieldAutomorphism, FieldSpec, Indeterminate, ParamPoly, Scalar};
