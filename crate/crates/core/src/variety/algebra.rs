use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IdentityScheme, Multilinear, VarietyPresentation};
use crate::error::{Error, Result};
use crate::freealg::{Element, GeneratorSet, Monomial};
use crate::linalg::{Echelon, SparseVec};
use crate::scalars::Coeff;

/// Coordinates with respect to the basis of a [`TruncatedAlgebra`].
pub type Coords<C> = BTreeMap<usize, C>;

type Rewrite = Vec<(usize, BigRational)>;

#[derive(Clone, Debug)]
struct BasisElement {
    monomial: Monomial,
    degree: usize,
    multidegree: Vec<usize>,
}

/// Per-multidegree bookkeeping of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentInfo {
    pub multidegree: Vec<usize>,
    /// Products of lower basis elements spanning the component.
    pub spanning_products: usize,
    /// Rank of the consequences of the identities among those products.
    pub consequence_rank: usize,
    pub dimension: usize,
}

/// `F_Θ(X) / F^{N+1}` with a monomial basis and multiplication table.
///
/// Degree-`D` elements are spanned by products `b_i b_j` of lower basis
/// elements. The consequences of the identities in degree `D` are the values
/// of their full linearizations on tuples of basis elements, read as
/// combinations of such products; row reduction then selects the basis and
/// records a rewrite for every other product.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    gens: GeneratorSet,
    presentation: VarietyPresentation,
    max_degree: usize,
    basis: Vec<BasisElement>,
    index: HashMap<Monomial, usize>,
    by_degree: Vec<std::ops::Range<usize>>,
    products: HashMap<(usize, usize), Rewrite>,
    components: Vec<ComponentInfo>,
}

/// Options for [`TruncatedAlgebra::build_with`].
#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// Monomials to keep as basis elements whenever they are independent of
    /// the others; by default the basis consists of the earliest monomials.
    pub preferred: Vec<Monomial>,
}

impl TruncatedAlgebra {
    pub fn build(theta: &VarietyPresentation, gens: &GeneratorSet, n: usize) -> Result<Self> {
        Self::build_with(theta, gens, n, &BuildOptions::default())
    }

    pub fn build_with(theta: &VarietyPresentation, gens: &GeneratorSet, n: usize, opts: &BuildOptions) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("degree bound N >= 1".into()));
        }
        let ngens = gens.len();
        let preferred: HashSet<&Monomial> = opts.preferred.iter().collect();
        let mut alg = TruncatedAlgebra {
            gens: gens.clone(),
            presentation: theta.clone(),
            max_degree: n,
            basis: Vec::new(),
            index: HashMap::new(),
            by_degree: vec![0..0],
            products: HashMap::new(),
            components: Vec::new(),
        };
        for g in 0..ngens {
            let m = Monomial::leaf(g);
            let mut md = vec![0; ngens];
            md[g] = 1;
            alg.index.insert(m.clone(), g);
            alg.basis.push(BasisElement {
                monomial: m,
                degree: 1,
                multidegree: md.clone(),
            });
            alg.components.push(ComponentInfo {
                multidegree: md,
                spanning_products: 1,
                consequence_rank: 0,
                dimension: 1,
            });
        }
        alg.by_degree.push(0..ngens);
        let lins: Vec<Multilinear> = theta
            .identities()
            .iter()
            .flat_map(IdentityScheme::linearizations)
            .collect();
        for d in 2..=n {
            alg.build_degree(d, &lins, &preferred);
        }
        Ok(alg)
    }

    fn build_degree(&mut self, d: usize, lins: &[Multilinear], preferred: &HashSet<&Monomial>) {
        let ngens = self.gens.len();
        // Columns: all products of lower basis elements, grouped by multidegree.
        let mut groups: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for l in 1..d {
            for i in self.by_degree[l].clone() {
                for j in self.by_degree[d - l].clone() {
                    let md: Vec<usize> = (0..ngens)
                        .map(|g| self.basis[i].multidegree[g] + self.basis[j].multidegree[g])
                        .collect();
                    groups.entry(md).or_default().push((i, j));
                }
            }
        }
        // Relations, as combinations of pairs.
        let mut relations: BTreeMap<Vec<usize>, Vec<BTreeMap<(usize, usize), BigRational>>> = BTreeMap::new();
        for lin in lins {
            if lin.arity > d {
                continue;
            }
            for comp in compositions(d, lin.arity) {
                let slots: Vec<Vec<usize>> = comp.iter().map(|&k| self.by_degree[k].clone().collect()).collect();
                if slots.iter().any(|s| s.is_empty()) {
                    continue;
                }
                let mut choice = vec![0usize; lin.arity];
                'tuples: loop {
                    let tuple: Vec<usize> = choice.iter().zip(&slots).map(|(&c, s)| s[c]).collect();
                    let rel = self.eval_top(lin, &tuple);
                    if !rel.is_empty() {
                        let mut md = vec![0; ngens];
                        for &b in &tuple {
                            for g in 0..ngens {
                                md[g] += self.basis[b].multidegree[g];
                            }
                        }
                        relations.entry(md).or_default().push(rel);
                    }
                    let mut i = 0;
                    loop {
                        if i == choice.len() {
                            break 'tuples;
                        }
                        choice[i] += 1;
                        if choice[i] < slots[i].len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                }
            }
        }
        let mut new_basis: Vec<(Monomial, Vec<usize>)> = Vec::new();
        let mut pending: Vec<((usize, usize), Vec<((usize, usize), BigRational)>)> = Vec::new();
        for (md, mut pairs) in groups {
            let monos: HashMap<(usize, usize), Monomial> = pairs
                .iter()
                .map(|&(i, j)| {
                    (
                        (i, j),
                        Monomial::product(&self.basis[i].monomial, &self.basis[j].monomial),
                    )
                })
                .collect();
            // Column 0 is eliminated first: non-preferred before preferred,
            // later monomials before earlier ones.
            pairs.sort_by(|a, b| {
                let pa = preferred.contains(&monos[a]);
                let pb = preferred.contains(&monos[b]);
                pa.cmp(&pb).then_with(|| monos[b].cmp(&monos[a]))
            });
            let col: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, p)| (*p, k)).collect();
            let mut ech: Echelon<BigRational> = Echelon::new();
            for rel in relations.remove(&md).unwrap_or_default() {
                let v: SparseVec<BigRational> = rel.into_iter().map(|(p, c)| (col[&p], c)).collect();
                ech.insert(&v);
            }
            let rank = ech.rank();
            for (k, p) in pairs.iter().enumerate() {
                if !ech.is_pivot(k) {
                    new_basis.push((monos[p].clone(), md.clone()));
                }
            }
            for (pivot, row) in ech.rows() {
                let rw = row
                    .iter()
                    .filter(|(c, _)| **c != pivot)
                    .map(|(c, x)| (pairs[*c], -x.clone()))
                    .collect();
                pending.push((pairs[pivot], rw));
            }
            self.components.push(ComponentInfo {
                multidegree: md,
                spanning_products: pairs.len(),
                consequence_rank: rank,
                dimension: pairs.len() - rank,
            });
        }
        new_basis.sort_by(|a, b| a.0.cmp(&b.0));
        let start = self.basis.len();
        for (m, md) in new_basis {
            let idx = self.basis.len();
            let (l, r) = m.children().expect("degree >= 2");
            let pair = (self.index[l], self.index[r]);
            self.products.insert(pair, vec![(idx, BigRational::one())]);
            self.index.insert(m.clone(), idx);
            self.basis.push(BasisElement {
                monomial: m,
                degree: d,
                multidegree: md,
            });
        }
        self.by_degree.push(start..self.basis.len());
        for (pair, rw) in pending {
            let resolved = rw.into_iter().map(|(p, c)| (self.products[&p][0].0, c)).collect();
            self.products.insert(pair, resolved);
        }
    }

    /// Value of a multilinear identity on a tuple of basis elements, as a
    /// combination of top-level pairs.
    fn eval_top(&self, lin: &Multilinear, tuple: &[usize]) -> BTreeMap<(usize, usize), BigRational> {
        let mut out: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for (m, c) in &lin.terms {
            let (l, r) = m.children().expect("identities have degree >= 2");
            let a = self.eval_tree(l, tuple);
            let b = self.eval_tree(r, tuple);
            for (i, x) in &a {
                for (j, y) in &b {
                    let e = out.entry((*i, *j)).or_insert_with(BigRational::zero);
                    *e += c * x * y;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn eval_tree(&self, m: &Monomial, tuple: &[usize]) -> Coords<BigRational> {
        match m.children() {
            None => BTreeMap::from([(tuple[m.as_leaf().unwrap()], BigRational::one())]),
            Some((l, r)) => {
                let a = self.eval_tree(l, tuple);
                let b = self.eval_tree(r, tuple);
                self.mul_rational(&a, &b)
            }
        }
    }

    fn mul_rational(&self, a: &Coords<BigRational>, b: &Coords<BigRational>) -> Coords<BigRational> {
        let mut out = BTreeMap::new();
        for (i, x) in a {
            for (j, y) in b {
                if let Some(rw) = self.products.get(&(*i, *j)) {
                    for (k, c) in rw {
                        let e = out.entry(*k).or_insert_with(BigRational::zero);
                        *e += x * y * c;
                    }
                }
            }
        }
        out.retain(|_, c: &mut BigRational| !c.is_zero());
        out
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn presentation(&self) -> &VarietyPresentation {
        &self.presentation
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_monomial(&self, i: usize) -> &Monomial {
        &self.basis[i].monomial
    }

    pub fn basis_monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.basis.iter().map(|b| &b.monomial)
    }

    pub fn basis_degree(&self, i: usize) -> usize {
        self.basis[i].degree
    }

    pub fn basis_multidegree(&self, i: usize) -> &[usize] {
        &self.basis[i].multidegree
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Basis indices of the given total degree.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        self.by_degree.get(d).cloned().unwrap_or(0..0)
    }

    /// Dimensions of the graded components of degrees `1..=N`.
    pub fn component_dims(&self) -> Vec<usize> {
        (1..=self.max_degree).map(|d| self.degree_range(d).len()).collect()
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    /// Basis indices grouped by multidegree.
    pub fn multidegree_blocks(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            out.entry(b.multidegree.clone()).or_default().push(i);
        }
        out
    }

    /// Product of two basis elements; empty if the degree exceeds `N`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, BigRational)] {
        self.products.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn mul_coords<C: Coeff>(&self, a: &Coords<C>, b: &Coords<C>) -> Coords<C> {
        let mut out: Coords<C> = BTreeMap::new();
        for (i, x) in a {
            for (j, y) in b {
                let rw = self.basis_product(*i, *j);
                if rw.is_empty() {
                    continue;
                }
                let xy = x.mul(y);
                for (k, c) in rw {
                    add_into(&mut out, *k, xy.scale_rational(c));
                }
            }
        }
        out
    }

    /// Coordinates of a monomial (empty above degree `N`).
    pub fn monomial_coords(&self, m: &Monomial) -> Coords<BigRational> {
        if m.degree() > self.max_degree {
            return BTreeMap::new();
        }
        if let Some(&i) = self.index.get(m) {
            return BTreeMap::from([(i, BigRational::one())]);
        }
        match m.children() {
            None => BTreeMap::new(),
            Some((l, r)) => {
                let a = self.monomial_coords(l);
                let b = self.monomial_coords(r);
                self.mul_rational(&a, &b)
            }
        }
    }

    pub fn coords<C: Coeff>(&self, e: &Element<C>) -> Result<Coords<C>> {
        self.gens.check(e)?;
        let mut out = BTreeMap::new();
        for (m, c) in e.terms() {
            for (k, q) in self.monomial_coords(m) {
                add_into(&mut out, k, c.scale_rational(&q));
            }
        }
        Ok(out)
    }

    pub fn element<C: Coeff>(&self, v: &Coords<C>) -> Element<C> {
        Element::from_terms(v.iter().map(|(i, c)| (self.basis[*i].monomial.clone(), c.clone())))
    }

    /// Representative in the chosen basis, terms above degree `N` dropped.
    pub fn normal_form<C: Coeff>(&self, e: &Element<C>) -> Result<Element<C>> {
        Ok(self.element(&self.coords(e)?))
    }

    pub fn mul<C: Coeff>(&self, a: &Element<C>, b: &Element<C>) -> Result<Element<C>> {
        Ok(self.element(&self.mul_coords(&self.coords(a)?, &self.coords(b)?)))
    }

    /// Evaluates a tree over variable slots with the given values and
    /// multiplication.
    pub fn evaluate_tree<C: Coeff>(
        &self,
        m: &Monomial,
        values: &[Coords<C>],
        mul: &dyn Fn(&Coords<C>, &Coords<C>) -> Coords<C>,
    ) -> Coords<C> {
        match m.children() {
            None => values[m.as_leaf().unwrap()].clone(),
            Some((l, r)) => {
                let a = self.evaluate_tree(l, values, mul);
                let b = self.evaluate_tree(r, values, mul);
                mul(&a, &b)
            }
        }
    }

    /// Generic-point check: the identity holds iff `s(x1, ..., xr)` vanishes.
    pub fn check_identity(&self, s: &IdentityScheme) -> Result<bool> {
        if s.arity() > self.ngens() {
            return Err(Error::Arity {
                arity: s.arity(),
                gens: self.ngens(),
            });
        }
        Ok(self.coords(s.element())?.is_empty())
    }

    /// Image of `e` under the endomorphism sending generator `g` to
    /// `images[g]`, computed with the algebra's multiplication.
    pub fn substitute<C: Coeff>(&self, images: &[Coords<C>], e: &Coords<C>) -> Coords<C> {
        let mut memo: HashMap<usize, Coords<C>> = HashMap::new();
        let mut out = BTreeMap::new();
        for (i, c) in e {
            let img = self.substitute_basis(*i, images, &mut memo);
            for (k, x) in img {
                add_into(&mut out, k, x.mul(c));
            }
        }
        out
    }

    fn substitute_basis<C: Coeff>(
        &self,
        i: usize,
        images: &[Coords<C>],
        memo: &mut HashMap<usize, Coords<C>>,
    ) -> Coords<C> {
        if let Some(v) = memo.get(&i) {
            return v.clone();
        }
        let m = &self.basis[i].monomial;
        let v = match m.children() {
            None => images[m.as_leaf().unwrap()].clone(),
            Some((l, r)) => {
                let a = self.substitute_basis(self.index[l], images, memo);
                let b = self.substitute_basis(self.index[r], images, memo);
                self.mul_coords(&a, &b)
            }
        };
        memo.insert(i, v.clone());
        v
    }

    /// Coordinates restricted to basis elements of degree `d`.
    pub fn degree_part<C: Coeff>(&self, v: &Coords<C>, d: usize) -> Coords<C> {
        let r = self.degree_range(d);
        v.range(r).map(|(k, c)| (*k, c.clone())).collect()
    }
}

pub(crate) fn add_into<C: Coeff>(v: &mut Coords<C>, k: usize, c: C) {
    if c.is_zero() {
        return;
    }
    match v.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Ordered compositions of `total` into `parts` positive parts.
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
