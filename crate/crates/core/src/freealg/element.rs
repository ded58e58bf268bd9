use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use super::Monomial;
use crate::scalars::{Coeff, Scalar};

/// A finite linear combination of monomials with coefficients in `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct Element<C: Coeff = Scalar> {
    terms: BTreeMap<Monomial, C>,
}

/// Elements with solver-indeterminate coefficients.
pub type ParamElement = Element<crate::scalars::ParamPoly>;

impl<C: Coeff> Default for Element<C> {
    fn default() -> Self {
        Element { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> Element<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(i: usize) -> Self {
        Self::monomial(Monomial::leaf(i))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.map_coeffs(|c| c.scale_rational(q))
    }

    pub fn scale_by(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul(c))
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Element<D> {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Product in the absolutely free algebra (tree joining).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(Monomial::product(m1, m2), c1.mul(c2));
            }
        }
        out
    }

    /// Product with every term of degree above `n` dropped.
    pub fn mul_truncated(&self, other: &Self, n: usize) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            if m1.degree() >= n {
                continue;
            }
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() <= n {
                    out.add_term(Monomial::product(m1, m2), c1.mul(c2));
                }
            }
        }
        out
    }

    pub fn truncate(&self, n: usize) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous component of the given total degree.
    pub fn component(&self, degree: usize) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Components keyed by multidegree (padded to `ngens`).
    pub fn multihomogeneous_components(&self, ngens: usize) -> BTreeMap<Vec<usize>, Self> {
        let mut out: BTreeMap<Vec<usize>, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.multidegree(ngens))
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    pub fn is_multihomogeneous(&self, ngens: usize) -> bool {
        self.multihomogeneous_components(ngens).len() <= 1
    }

    /// Number of generators referenced (largest index + 1).
    pub fn generator_bound(&self) -> usize {
        self.terms.keys().map(|m| m.max_generator() + 1).max().unwrap_or(0)
    }

    /// Renders with `names(g)` for generator `g`.
    pub fn to_string_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let simple = !cs.contains(' ') && !cs.contains('/');
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ if simple => (false, cs.clone()),
                _ => (false, format!("({cs})")),
            };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if body != "1" {
                out.push_str(&body);
                out.push_str(" * ");
            }
            out.push_str(&m.to_string_with(names));
        }
        out
    }
}

impl Element<Scalar> {
    /// Lifts the coefficients into another coefficient ring.
    pub fn lift<C: Coeff>(&self) -> Element<C> {
        self.map_coeffs(|c| C::from_scalar(c.clone()))
    }
}

impl<C: Coeff> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&|g| format!("x{}", g + 1)))
    }
}

impl<C: Coeff> fmt::Debug for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self)
    }
}

impl<C: Coeff> FromIterator<(Monomial, C)> for Element<C> {
    fn from_iter<I: IntoIterator<Item = (Monomial, C)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}
