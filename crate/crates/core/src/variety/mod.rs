//! Variety presentations and truncated relatively free algebras.

mod algebra;
mod identity;
mod presentation;

pub(crate) use algebra::add_into;
pub use algebra::{BuildOptions, ComponentInfo, Coords, TruncatedAlgebra};
pub use identity::{IdentityScheme, Multilinear};
pub use presentation::{Builtin, Tag, VarietyJson, VarietyPresentation};

use crate::error::Result;
use crate::freealg::{Element, GeneratorSet};
use crate::scalars::Coeff;

/// Builds `F_Θ(X) / F^{N+1}`.
pub fn build_truncated(theta: &VarietyPresentation, gens: &GeneratorSet, n: usize) -> Result<TruncatedAlgebra> {
    TruncatedAlgebra::build(theta, gens, n)
}

pub fn normal_form<C: Coeff>(a: &TruncatedAlgebra, e: &Element<C>) -> Result<Element<C>> {
    a.normal_form(e)
}

pub fn component_dims(a: &TruncatedAlgebra) -> Vec<usize> {
    a.component_dims()
}

pub fn check_identity(a: &TruncatedAlgebra, s: &IdentityScheme) -> Result<bool> {
    a.check_identity(s)
}
