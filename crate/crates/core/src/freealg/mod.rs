//! The absolutely free nonassociative algebra: monomials, elements,
//! grading and endomorphism substitution.

mod element;
mod monomial;

pub use element::{Element, ParamElement};
pub use monomial::{enumerate_monomials, shapes, Monomial};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Coeff, Indeterminate, ParamPoly, Scalar};

/// Ordered generator names `x1, x2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    names: Vec<String>,
}

impl GeneratorSet {
    pub fn new(count: usize) -> Self {
        GeneratorSet {
            names: (1..=count).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn with_names(names: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::ContextMismatch(format!("duplicate generator `{n}`")));
            }
        }
        Ok(GeneratorSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Errors unless every generator used by `e` belongs to this set.
    pub fn check<C: Coeff>(&self, e: &Element<C>) -> Result<()> {
        if e.generator_bound() > self.len() {
            return Err(Error::ContextMismatch(format!(
                "element uses generator x{} but the context has {}",
                e.generator_bound(),
                self.len()
            )));
        }
        Ok(())
    }

    pub fn render<C: Coeff>(&self, e: &Element<C>) -> String {
        e.to_string_with(&|g| self.names.get(g).cloned().unwrap_or_else(|| format!("x{}", g + 1)))
    }

    /// Context-checked product.
    pub fn mul<C: Coeff>(&self, a: &Element<C>, b: &Element<C>) -> Result<Element<C>> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.mul(b))
    }
}

/// Images of the generators under an endomorphism of the free algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Endomorphism<C: Coeff = Scalar> {
    images: Vec<Element<C>>,
}

/// An endomorphism with indeterminate coefficients.
pub type SymbolicEndomorphism = Endomorphism<ParamPoly>;

impl<C: Coeff> Endomorphism<C> {
    pub fn new(images: Vec<Element<C>>) -> Result<Self> {
        for (i, img) in images.iter().enumerate() {
            if img.terms().any(|(m, _)| m.degree() == 0) {
                return Err(Error::Precondition(format!("image of x{} has degree 0", i + 1)));
            }
            if img.generator_bound() > images.len() {
                return Err(Error::ContextMismatch(format!(
                    "image of x{} leaves the generator set",
                    i + 1
                )));
            }
        }
        Ok(Endomorphism { images })
    }

    pub fn identity(ngens: usize) -> Self {
        Endomorphism {
            images: (0..ngens).map(Element::generator).collect(),
        }
    }

    pub fn images(&self) -> &[Element<C>] {
        &self.images
    }

    pub fn ngens(&self) -> usize {
        self.images.len()
    }

    /// Homomorphic extension applied to `e`, truncated above degree `n`.
    pub fn apply(&self, e: &Element<Scalar>, n: usize) -> Element<C> {
        let mut memo: HashMap<Monomial, Element<C>> = HashMap::new();
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            if m.degree() > n {
                continue;
            }
            let img = self.apply_monomial(m, n, &mut memo);
            for (m2, c2) in img.terms() {
                out.add_term(m2.clone(), c2.scale(c));
            }
        }
        out
    }

    fn apply_monomial(&self, m: &Monomial, n: usize, memo: &mut HashMap<Monomial, Element<C>>) -> Element<C> {
        if let Some(e) = memo.get(m) {
            return e.clone();
        }
        let out = match m.children() {
            None => self.images[m.as_leaf().unwrap()].truncate(n),
            Some((l, r)) => {
                let a = self.apply_monomial(l, n, memo);
                let b = self.apply_monomial(r, n, memo);
                a.mul_truncated(&b, n)
            }
        };
        memo.insert(m.clone(), out.clone());
        out
    }
}

impl Endomorphism<ParamPoly> {
    /// The generic linear endomorphism `x_i -> sum_j a{j}{i} x_j`.
    pub fn generic_linear(ngens: usize) -> Self {
        let images = (0..ngens)
            .map(|i| {
                Element::from_terms(
                    (0..ngens).map(|j| (Monomial::leaf(j), ParamPoly::var(&linear_indeterminate(j, i)))),
                )
            })
            .collect();
        Endomorphism { images }
    }

    /// Indeterminates occurring in the images, in order.
    pub fn indeterminates(&self) -> Vec<Indeterminate> {
        let mut set = std::collections::BTreeSet::new();
        for img in &self.images {
            for (_, c) in img.terms() {
                set.extend(c.indeterminates());
            }
        }
        set.into_iter().collect()
    }

    /// Replaces indeterminates by Scalar values, giving a concrete endomorphism.
    pub fn specialize(
        &self,
        values: &std::collections::BTreeMap<Indeterminate, Scalar>,
    ) -> Option<Endomorphism<Scalar>> {
        let mut images = Vec::with_capacity(self.images.len());
        for img in &self.images {
            let mut e = Element::zero();
            for (m, c) in img.terms() {
                e.add_term(m.clone(), c.evaluate(values)?);
            }
            images.push(e);
        }
        Some(Endomorphism { images })
    }
}

/// Name of the coefficient of `x_{j+1}` in the image of `x_{i+1}`.
pub fn linear_indeterminate(j: usize, i: usize) -> Indeterminate {
    if j < 9 && i < 9 {
        Indeterminate::new(&format!("a{}{}", j + 1, i + 1))
    } else {
        Indeterminate::new(&format!("a{}_{}", j + 1, i + 1))
    }
}

/// Concrete substitution truncated above degree `n`.
pub fn substitute(alpha: &Endomorphism<Scalar>, e: &Element<Scalar>, n: usize) -> Element<Scalar> {
    alpha.apply(e, n)
}

/// Symbolic substitution truncated above degree `n`.
pub fn symbolic_substitute(alpha: &SymbolicEndomorphism, e: &Element<Scalar>, n: usize) -> ParamElement {
    alpha.apply(e, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;

    fn el(s: &str) -> Element {
        parse_element(s).unwrap()
    }

    #[test]
    fn identity_and_swap() {
        let e = el("t1 * (x1 x2) + (x2 x1)");
        assert_eq!(substitute(&Endomorphism::identity(2), &e, 5), e);
        let swap = Endomorphism::new(vec![el("x2"), el("x1")]).unwrap();
        assert_eq!(substitute(&swap, &el("(x1 x2)"), 5), el("(x2 x1)"));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let a = Endomorphism::new(vec![el("x1 + (x1 x1)"), el("x2")]).unwrap();
        assert_eq!(substitute(&a, &el("(x1 x2)"), 2), el("(x1 x2)"));
    }

    #[test]
    fn generic_linear_on_display() {
        let alpha = SymbolicEndomorphism::generic_linear(2);
        let st = el("t2 * (x1 x2) + (x2 x1)");
        let img = symbolic_substitute(&alpha, &st, 2);
        let c = img.coefficient(&el("(x1 x2)").terms().next().unwrap().0.clone());
        assert_eq!(c.to_string(), "t2*a11*a22 + a12*a21");
    }
}
