use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ideal::TruncatedIdeal;
use crate::error::{Error, Result};
use crate::freealg::{linear_indeterminate, Monomial};
use crate::scalars::{Indeterminate, ParamPoly, Scalar};
use crate::variety::{Coords, TruncatedAlgebra};
use crate::verbal::VerbalSystem;

/// Name of the eigenvalue indeterminate in `α(σ(t)) = ρ·t`.
pub const RHO: &str = "rho";

/// One equation `coeff_b(α(σt)) - ρ·coeff_b(t) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub basis: String,
    #[serde(skip)]
    pub basis_index: usize,
    pub equation: ParamPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    pub equations: Vec<Constraint>,
    pub indeterminates: Vec<Indeterminate>,
    /// Non-rational scalars occurring as coefficients; all are nonzero in `k`.
    pub nonzero_scalars: Vec<Scalar>,
}

impl ConstraintSystem {
    pub fn polynomials(&self) -> Vec<ParamPoly> {
        self.equations.iter().map(|c| c.equation.clone()).collect()
    }
}

/// Coordinates of the generic linear endomorphism's generator images.
pub fn generic_images(ngens: usize) -> Vec<Coords<ParamPoly>> {
    (0..ngens)
        .map(|i| {
            (0..ngens)
                .map(|j| (j, ParamPoly::var(&linear_indeterminate(j, i))))
                .collect()
        })
        .collect()
}

/// Applies the generic linear endomorphism to `v`.
pub fn generic_apply(alg: &TruncatedAlgebra, v: &Coords<Scalar>) -> Coords<ParamPoly> {
    let lifted: Coords<ParamPoly> = v.iter().map(|(i, c)| (*i, ParamPoly::constant(c.clone()))).collect();
    alg.substitute(&generic_images(alg.ngens()), &lifted)
}

/// Equations on a linear `α` with `α(σ(t)) ∈ T` for `T = ⟨t, F^m⟩`, `t`
/// homogeneous of degree `m - 1`.
pub fn gen_constraints(ideal: &TruncatedIdeal, w: &VerbalSystem) -> Result<ConstraintSystem> {
    let alg = ideal.algebra();
    let m = ideal.tail();
    let t = match ideal.generators() {
        [t] => t,
        gs => {
            return Err(Error::Precondition(format!(
                "constraint generation needs exactly one ideal generator (got {})",
                gs.len()
            )))
        }
    };
    if t.is_zero() || !t.is_homogeneous() || t.max_degree() + 1 != m {
        return Err(Error::Precondition(format!(
            "the ideal generator must be homogeneous of degree {} (tail {m})",
            m.saturating_sub(1)
        )));
    }
    let tc = alg.coords(t)?;
    let image = generic_apply(alg, &w.sigma_coords(alg, &tc));
    let rho = ParamPoly::named(RHO);
    let mut equations = Vec::new();
    for b in alg.degree_range(m - 1) {
        let lhs = image.get(&b).cloned().unwrap_or_else(ParamPoly::zero);
        let rhs = match tc.get(&b) {
            Some(c) => rho.scale(c),
            None => ParamPoly::zero(),
        };
        let eq = lhs.sub(&rhs);
        if !eq.is_zero() {
            equations.push(Constraint {
                basis: render_monomial(alg, alg.basis_monomial(b)),
                basis_index: b,
                equation: eq,
            });
        }
    }
    let mut indeterminates: Vec<Indeterminate> = (0..alg.ngens())
        .flat_map(|i| (0..alg.ngens()).map(move |j| linear_indeterminate(j, i)))
        .collect();
    indeterminates.sort();
    indeterminates.push(Indeterminate::new(RHO));
    let mut nonzero: BTreeMap<String, Scalar> = BTreeMap::new();
    for c in &equations {
        for (_, s) in c.equation.terms() {
            if !s.is_rational() {
                nonzero.insert(s.to_string(), s.clone());
            }
        }
    }
    Ok(ConstraintSystem {
        equations,
        indeterminates,
        nonzero_scalars: nonzero.into_values().collect(),
    })
}

/// Basis monomial label helper shared with certificates.
pub(crate) fn render_monomial(alg: &TruncatedAlgebra, m: &Monomial) -> String {
    m.to_string_with(&|g| alg.generators().names()[g].clone())
}
