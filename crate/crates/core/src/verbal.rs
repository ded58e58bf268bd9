//! Verbal operation systems `W = (φ, a, b)`, the derived multiplication
//! `u × v = a·uv + b·vu`, the generator-fixing map `σ_F`, Op2 checks, the
//! scaling lemmas and the dilation search for inner automorphisms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{Element, GeneratorSet, Monomial};
use crate::linalg::Echelon;
use crate::scalars::{Coeff, FieldAutomorphism, Indeterminate, ParamPoly, Scalar};
use crate::variety::{add_into, Builtin, Coords, Multilinear, Tag, TruncatedAlgebra, VarietyPresentation};

/// The word system `{w0 = 0, w_λ(x) = φ(λ)x, w_+ = x1 + x2, w_· = a·x1x2 + b·x2x1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerbalSystem {
    phi: FieldAutomorphism,
    a: Scalar,
    b: Scalar,
}

/// JSON form: `{"phi": "id" | "swap:i,j", "a": "...", "b": "..."}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerbalJson {
    pub phi: String,
    pub a: Scalar,
    pub b: Scalar,
}

impl VerbalSystem {
    pub fn new(phi: FieldAutomorphism, a: Scalar, b: Scalar) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Precondition("(a, b) != (0, 0)".into()));
        }
        Ok(VerbalSystem { phi, a, b })
    }

    pub fn identity() -> Self {
        VerbalSystem {
            phi: FieldAutomorphism::identity(),
            a: Scalar::one(),
            b: Scalar::zero(),
        }
    }

    /// `(φ, 1, 0)`: only the scalar action changes.
    pub fn twisted(phi: FieldAutomorphism) -> Self {
        VerbalSystem {
            phi,
            a: Scalar::one(),
            b: Scalar::zero(),
        }
    }

    pub fn phi(&self) -> &FieldAutomorphism {
        &self.phi
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn to_json(&self) -> VerbalJson {
        VerbalJson {
            phi: self.phi.spec_string(),
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }

    pub fn from_json(j: &VerbalJson) -> Result<Self> {
        Self::new(FieldAutomorphism::parse_spec(&j.phi)?, j.a.clone(), j.b.clone())
    }

    /// `a·uv + b·vu` on coordinates.
    pub fn mul_coords<C: Coeff>(&self, alg: &TruncatedAlgebra, u: &Coords<C>, v: &Coords<C>) -> Coords<C> {
        let mut out = BTreeMap::new();
        if !self.a.is_zero() {
            for (k, c) in alg.mul_coords(u, v) {
                add_into(&mut out, k, c.scale(&self.a));
            }
        }
        if !self.b.is_zero() {
            for (k, c) in alg.mul_coords(v, u) {
                add_into(&mut out, k, c.scale(&self.b));
            }
        }
        out
    }

    /// Every product node of `m` replaced by the derived multiplication.
    pub fn word_coords(&self, alg: &TruncatedAlgebra, m: &Monomial) -> Coords<Scalar> {
        if m.degree() > alg.max_degree() {
            return BTreeMap::new();
        }
        match m.children() {
            None => BTreeMap::from([(m.as_leaf().unwrap(), Scalar::one())]),
            Some((l, r)) => {
                let a = self.word_coords(alg, l);
                let b = self.word_coords(alg, r);
                self.mul_coords(alg, &a, &b)
            }
        }
    }

    /// `σ_F` on coordinates: φ on coefficients, derived words on basis elements.
    pub fn sigma_coords(&self, alg: &TruncatedAlgebra, v: &Coords<Scalar>) -> Coords<Scalar> {
        let mut out = BTreeMap::new();
        for (i, c) in v {
            let img = self.word_coords(alg, alg.basis_monomial(*i));
            let fc = self.phi.apply(c);
            for (k, x) in img {
                add_into(&mut out, k, &x * &fc);
            }
        }
        out
    }
}

pub fn derived_mul(
    w: &VerbalSystem,
    u: &Element<Scalar>,
    v: &Element<Scalar>,
    alg: &TruncatedAlgebra,
) -> Result<Element<Scalar>> {
    Ok(alg.element(&w.mul_coords(alg, &alg.coords(u)?, &alg.coords(v)?)))
}

pub fn word_transform(w: &VerbalSystem, m: &Monomial, alg: &TruncatedAlgebra) -> Result<Element<Scalar>> {
    alg.generators().check(&Element::<Scalar>::monomial(m.clone()))?;
    Ok(alg.element(&w.word_coords(alg, m)))
}

pub fn sigma_apply(w: &VerbalSystem, alg: &TruncatedAlgebra, e: &Element<Scalar>) -> Result<Element<Scalar>> {
    Ok(alg.element(&w.sigma_coords(alg, &alg.coords(e)?)))
}

/// Outcome of [`check_op2`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Op2Report {
    pub pass: bool,
    /// Set when `x2x1` is a multiple of `x1x2` in the variety but `b != 0`:
    /// the word `w_·` is then not in its canonical one-term form.
    pub noncanonical_word: bool,
    pub failed_identity: Option<String>,
    /// Basis monomials substituted for the variables of the failed identity.
    pub witness: Option<Vec<String>>,
    /// `(multidegree, σ invertible there)`.
    pub sigma_invertible: Vec<(Vec<usize>, bool)>,
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Finds a tuple of basis elements on which `lin` does not vanish under `mul`.
fn identity_counterexample(
    alg: &TruncatedAlgebra,
    lin: &Multilinear,
    mul: &dyn Fn(&Coords<Scalar>, &Coords<Scalar>) -> Coords<Scalar>,
) -> Option<Vec<usize>> {
    for total in lin.arity..=alg.max_degree() {
        for comp in compositions(total, lin.arity) {
            let slots: Vec<Vec<usize>> = comp.iter().map(|&k| alg.degree_range(k).collect()).collect();
            if slots.iter().any(|s| s.is_empty()) {
                continue;
            }
            let mut choice = vec![0usize; lin.arity];
            loop {
                let tuple: Vec<usize> = choice.iter().zip(&slots).map(|(&c, s)| s[c]).collect();
                let values: Vec<Coords<Scalar>> = tuple.iter().map(|&b| BTreeMap::from([(b, Scalar::one())])).collect();
                let mut acc: Coords<Scalar> = BTreeMap::new();
                for (m, c) in &lin.terms {
                    for (k, x) in alg.evaluate_tree(m, &values, mul) {
                        add_into(&mut acc, k, x.scale_rational(c));
                    }
                }
                if !acc.is_empty() {
                    return Some(tuple);
                }
                let mut i = 0;
                loop {
                    if i == choice.len() {
                        break;
                    }
                    choice[i] += 1;
                    if choice[i] < slots[i].len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == choice.len() {
                    break;
                }
            }
        }
    }
    None
}

/// Verifies Op2 at truncation: the identities of `theta` hold for the derived
/// multiplication on all tuples of basis elements, and `σ_F` is invertible on
/// every multidegree component.
pub fn check_op2(theta: &VarietyPresentation, w: &VerbalSystem, n: usize, gens: &GeneratorSet) -> Result<Op2Report> {
    let ngens = gens.len().max(theta.max_arity()).max(2);
    let n = n.max(theta.max_identity_degree()).max(2);
    let alg = TruncatedAlgebra::build(theta, &GeneratorSet::new(ngens), n)?;
    Ok(check_op2_in(&alg, w))
}

/// [`check_op2`] inside an already built algebra.
pub fn check_op2_in(alg: &TruncatedAlgebra, w: &VerbalSystem) -> Op2Report {
    let x1x2 = alg.monomial_coords(&Monomial::product(&Monomial::leaf(0), &Monomial::leaf(1)));
    let x2x1 = alg.monomial_coords(&Monomial::product(&Monomial::leaf(1), &Monomial::leaf(0)));
    let dependent = {
        let mut e = Echelon::new();
        e.insert(&x1x2);
        x2x1.is_empty() || e.contains(&x2x1)
    };
    let noncanonical_word = dependent && !w.b().is_zero();

    let mul = |u: &Coords<Scalar>, v: &Coords<Scalar>| w.mul_coords(alg, u, v);
    let mut failed_identity = None;
    let mut witness = None;
    'ids: for s in alg.presentation().identities() {
        for lin in s.linearizations() {
            if let Some(t) = identity_counterexample(alg, &lin, &mul) {
                failed_identity = Some(s.to_text());
                witness = Some(t.iter().map(|&b| alg.basis_monomial(b).to_string()).collect());
                break 'ids;
            }
        }
    }

    let mut sigma_invertible = Vec::new();
    for (md, block) in alg.multidegree_blocks() {
        let mut e: Echelon<Scalar> = Echelon::new();
        for &b in &block {
            e.insert(&w.word_coords(alg, alg.basis_monomial(b)));
        }
        sigma_invertible.push((md, e.rank() == block.len()));
    }
    let pass = !noncanonical_word && failed_identity.is_none() && sigma_invertible.iter().all(|(_, ok)| *ok);
    Op2Report {
        pass,
        noncanonical_word,
        failed_identity,
        witness,
        sigma_invertible,
    }
}

/// The scaling lemma: `word_transform(m) = c^{deg m - 1} · m` with `c = a + b`
/// for power-associative words in one variable and `c = a` for
/// anticommutative varieties.
pub fn scaling_check(
    theta: &VarietyPresentation,
    w: &VerbalSystem,
    m: &Monomial,
    alg: &TruncatedAlgebra,
) -> Result<bool> {
    let c = if theta.builtin_kind() == Some(Builtin::PowerAssociative) {
        if m.leaves().iter().any(|&g| g != m.leaves()[0]) {
            return Err(Error::WrongVariety(
                "power-associative lemma needs a word in one variable".into(),
            ));
        }
        w.a() + w.b()
    } else if theta.has_tag(Tag::Anticommutative) {
        w.a().clone()
    } else {
        return Err(Error::WrongVariety(format!(
            "`{}` is neither power-associative nor anticommutative",
            theta.name()
        )));
    };
    let lhs = w.word_coords(alg, m);
    let factor = c.pow(m.degree() as i32 - 1)?;
    let rhs: Coords<Scalar> = alg
        .monomial_coords(m)
        .into_iter()
        .map(|(k, q)| (k, factor.scale_rational(&q)))
        .filter(|(_, x)| !x.is_zero())
        .collect();
    Ok(lhs == rhs)
}

/// Result of the dilation search for an inner witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InnerResult {
    Witness { mu: Scalar },
    Refuted { reason: String },
    Unknown { reason: String },
}

fn mu() -> Indeterminate {
    Indeterminate::new("mu")
}

/// `c(m)` for the dilation `x -> μx` extended through the derived product.
fn dilation(alg: &TruncatedAlgebra, w: &VerbalSystem, m: &Monomial) -> Coords<ParamPoly> {
    if m.degree() > alg.max_degree() {
        return BTreeMap::new();
    }
    match m.children() {
        None => BTreeMap::from([(m.as_leaf().unwrap(), ParamPoly::var(&mu()))]),
        Some((l, r)) => {
            let a = dilation(alg, w, l);
            let b = dilation(alg, w, r);
            w.mul_coords(alg, &a, &b)
        }
    }
}

fn strip_mu(p: &ParamPoly) -> ParamPoly {
    let v = mu();
    let k = p.terms().map(|(m, _)| m.exponent(&v)).min().unwrap_or(0);
    if k == 0 {
        return p.clone();
    }
    p.div_exact(&ParamPoly::var(&v).pow(k)).expect("divisible by mu^k")
}

fn univariate_gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.remainder(std::slice::from_ref(&b));
        a = b;
        b = r;
    }
    a.monic()
}

/// Searches for `c_F(x) = μx` natural on the probes `x -> x^2`, `x -> t1·x`,
/// `x -> x1x2` and the generator swap.
pub fn inner_witness(theta: &VarietyPresentation, w: &VerbalSystem, n: usize) -> Result<InnerResult> {
    let alg = TruncatedAlgebra::build(theta, &GeneratorSet::new(2), n.max(3))?;
    let x1 = Monomial::leaf(0);
    let x2 = Monomial::leaf(1);
    let x1x1 = Monomial::product(&x1, &x1);
    let x1x2 = Monomial::product(&x1, &x2);
    let lambda = Scalar::transcendental(0);
    let muv = ParamPoly::var(&mu());

    // Each probe gives c(ψ(x)) - μ·ψ(x) = 0.
    let mut residuals: Vec<Coords<ParamPoly>> = Vec::new();
    for m in [&x1x1, &x1x2, &x2] {
        let mut r = dilation(&alg, w, m);
        for (k, q) in alg.monomial_coords(m) {
            add_into(&mut r, k, muv.scale_rational(&q).neg());
        }
        residuals.push(r);
    }
    {
        let mut r: Coords<ParamPoly> = BTreeMap::new();
        add_into(&mut r, 0, muv.scale(&w.phi().apply(&lambda)));
        add_into(&mut r, 0, muv.scale(&lambda).neg());
        residuals.push(r);
    }
    // Homomorphism law c(uv) = c(u) × c(v), checked on small words.
    for (u, v) in [(&x1, &x2), (&x1x1, &x1), (&x2, &x1x2)] {
        let uv = Monomial::product(u, v);
        let lhs = dilation(&alg, w, &uv);
        let rhs = w.mul_coords(&alg, &dilation(&alg, w, u), &dilation(&alg, w, v));
        let mut r = lhs;
        for (k, x) in rhs {
            add_into(&mut r, k, x.neg());
        }
        residuals.push(r);
    }

    let equations: Vec<ParamPoly> = residuals
        .iter()
        .flat_map(|r| r.values().map(strip_mu))
        .filter(|p| !p.is_zero())
        .collect();
    if equations.is_empty() {
        return Ok(InnerResult::Witness { mu: Scalar::one() });
    }
    let g = equations
        .iter()
        .skip(1)
        .fold(equations[0].monic(), |g, e| univariate_gcd(&g, e));
    match g.degree_in(&mu()) {
        0 => Ok(InnerResult::Refuted {
            reason: format!(
                "naturality equations in mu are inconsistent ({} equations)",
                equations.len()
            ),
        }),
        1 => {
            let root = g
                .solve_linear_for(&mu())
                .and_then(|p| p.as_constant())
                .ok_or_else(|| Error::Precondition("univariate equation".into()))?;
            let vals = BTreeMap::from([(mu(), root.clone())]);
            let all_vanish = residuals
                .iter()
                .flat_map(|r| r.values())
                .all(|p| p.evaluate(&vals).map(|s| s.is_zero()).unwrap_or(false));
            if root.is_zero() || !all_vanish {
                Ok(InnerResult::Unknown {
                    reason: "candidate dilation does not satisfy every probe".into(),
                })
            } else {
                Ok(InnerResult::Witness { mu: root })
            }
        }
        d => Ok(InnerResult::Unknown {
            reason: format!("common factor of degree {d} in mu"),
        }),
    }
}
