use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::freealg::{Element, Monomial};
use crate::parse::parse_identity;
use crate::scalars::Scalar;

/// A polynomial identity over variables `y1..yr` (stored as generator slots
/// `0..r`) with rational coefficients.
#[derive(Clone, PartialEq)]
pub struct IdentityScheme {
    element: Element<Scalar>,
    arity: usize,
}

impl IdentityScheme {
    pub fn new(element: Element<Scalar>) -> Result<Self> {
        if element.is_zero() {
            return Err(Error::Variety("identity is zero".into()));
        }
        if let Some((m, c)) = element.terms().find(|(_, c)| !c.is_rational()) {
            return Err(Error::Variety(format!("coefficient {c} of {m} is not rational")));
        }
        if element.min_degree() < 2 {
            return Err(Error::Variety(
                "identities of degree below 2 collapse the variety".into(),
            ));
        }
        let arity = element.generator_bound();
        Ok(IdentityScheme { element, arity })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_identity(s)?)
    }

    pub fn element(&self) -> &Element<Scalar> {
        &self.element
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.element.max_degree()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.element.is_multihomogeneous(self.arity)
    }

    /// Full linearizations of the multihomogeneous components. Over a field
    /// of characteristic 0 they generate the same T-ideal as the identity.
    pub fn linearizations(&self) -> Vec<Multilinear> {
        self.element
            .multihomogeneous_components(self.arity)
            .into_iter()
            .map(|(md, comp)| linearize(&comp, &md))
            .filter(|m| !m.terms.is_empty())
            .collect()
    }

    pub fn to_text(&self) -> String {
        self.element.to_string_with(&|g| format!("y{}", g + 1))
    }
}

impl fmt::Display for IdentityScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for IdentityScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdentityScheme({})", self.to_text())
    }
}

/// A multilinear identity in `arity` variables, each occurring exactly once
/// in every term.
#[derive(Clone, Debug, PartialEq)]
pub struct Multilinear {
    pub arity: usize,
    pub terms: Vec<(Monomial, BigRational)>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn relabel_positions(m: &Monomial, labels: &[usize], pos: &mut usize) -> Monomial {
    match m.children() {
        None => {
            let l = labels[*pos];
            *pos += 1;
            Monomial::leaf(l)
        }
        Some((a, b)) => {
            let a = relabel_positions(a, labels, pos);
            let b = relabel_positions(b, labels, pos);
            Monomial::product(&a, &b)
        }
    }
}

fn linearize(f: &Element<Scalar>, md: &[usize]) -> Multilinear {
    let mut offsets = Vec::with_capacity(md.len());
    let mut n = 0;
    for d in md {
        offsets.push(n);
        n += d;
    }
    // Every way of assigning the d_i copies of y_i to fresh variables.
    let per_var: Vec<Vec<Vec<usize>>> = md.iter().map(|&d| permutations(d)).collect();
    let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
    for (m, c) in f.terms() {
        let c = c.as_rational().expect("checked rational");
        let leaves = m.leaves();
        let mut choice = vec![0usize; md.len()];
        loop {
            let mut seen = vec![0usize; md.len()];
            let labels: Vec<usize> = leaves
                .iter()
                .map(|&y| {
                    let k = seen[y];
                    seen[y] += 1;
                    offsets[y] + per_var[y][choice[y]][k]
                })
                .collect();
            let lm = relabel_positions(m, &labels, &mut 0);
            let e = acc.entry(lm).or_insert_with(|| BigRational::from_integer(0.into()));
            *e += &c;
            // next combination
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < per_var[i].len() {
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
    Multilinear {
        arity: n,
        terms: acc
            .into_iter()
            .filter(|(_, c)| *c != BigRational::from_integer(0.into()))
            .collect(),
    }
}
