use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freealg::{Element, Endomorphism};
use crate::linalg::{kernel, Echelon, SparseVec};
use crate::scalars::{Coeff, Scalar};
use crate::variety::{add_into, Coords, TruncatedAlgebra};
use crate::verbal::{check_op2_in, VerbalSystem};

/// The ideal `⟨gens, F^m⟩` of a truncated algebra, kept as a row-reduced
/// subspace per multidegree below the tail degree `m`.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    alg: Arc<TruncatedAlgebra>,
    generators: Vec<Element<Scalar>>,
    tail: usize,
    blocks: BTreeMap<Vec<usize>, Echelon<Scalar>>,
}

impl TruncatedIdeal {
    /// Generators must be multihomogeneous; `1 <= m <= N + 1`.
    pub fn build(alg: Arc<TruncatedAlgebra>, gens: &[Element<Scalar>], m: usize) -> Result<Self> {
        if m == 0 || m > alg.max_degree() + 1 {
            return Err(Error::Precondition(format!(
                "tail exponent in 1..={} (got {m})",
                alg.max_degree() + 1
            )));
        }
        let mut generators = Vec::new();
        let mut by_degree: Vec<Vec<Coords<Scalar>>> = vec![Vec::new(); m];
        for g in gens {
            let v = alg.coords(g)?;
            let nf = alg.element(&v);
            if !nf.is_multihomogeneous(alg.ngens()) {
                return Err(Error::Precondition(format!(
                    "ideal generator `{}` must be multihomogeneous",
                    alg.generators().render(g)
                )));
            }
            if let Some((&i, _)) = v.iter().next() {
                let d = alg.basis_degree(i);
                if d < m {
                    by_degree[d].push(v);
                }
            }
            generators.push(nf);
        }
        let mut blocks: BTreeMap<Vec<usize>, Echelon<Scalar>> = BTreeMap::new();
        for d in 1..m.min(alg.max_degree() + 1) {
            let mut fresh: Vec<Coords<Scalar>> = std::mem::take(&mut by_degree[d]);
            for d0 in 1..d {
                let rows: Vec<Coords<Scalar>> = blocks
                    .iter()
                    .filter(|(md, _)| md.iter().sum::<usize>() == d0)
                    .flat_map(|(_, e)| e.rows().map(|(_, r)| r.clone()).collect::<Vec<_>>())
                    .collect();
                for s in &rows {
                    for b in alg.degree_range(d - d0) {
                        let bv = BTreeMap::from([(b, Scalar::one())]);
                        fresh.push(alg.mul_coords(&bv, s));
                        fresh.push(alg.mul_coords(s, &bv));
                    }
                }
            }
            for v in fresh {
                if let Some((&i, _)) = v.iter().next() {
                    blocks.entry(alg.basis_multidegree(i).to_vec()).or_default().insert(&v);
                }
            }
        }
        Ok(TruncatedIdeal {
            alg,
            generators,
            tail: m,
            blocks,
        })
    }

    pub fn algebra(&self) -> &Arc<TruncatedAlgebra> {
        &self.alg
    }

    pub fn generators(&self) -> &[Element<Scalar>] {
        &self.generators
    }

    pub fn tail(&self) -> usize {
        self.tail
    }

    /// Dimension of the part of multidegree `md`.
    pub fn component_dim(&self, md: &[usize]) -> usize {
        if md.iter().sum::<usize>() >= self.tail {
            return self.alg.multidegree_blocks().get(md).map(|b| b.len()).unwrap_or(0);
        }
        self.blocks.get(md).map(|e| e.rank()).unwrap_or(0)
    }

    /// Total dimension inside `F / F^{N+1}`.
    pub fn dim(&self) -> usize {
        let tail: usize = (self.tail..=self.alg.max_degree())
            .map(|d| self.alg.degree_range(d).len())
            .sum();
        tail + self.blocks.values().map(|e| e.rank()).sum::<usize>()
    }

    /// Canonical remainder modulo the ideal (zero iff contained).
    pub fn reduce_coords<C: Coeff>(&self, v: &Coords<C>) -> Coords<C> {
        let mut out: Coords<C> = v
            .iter()
            .filter(|(i, _)| self.alg.basis_degree(**i) < self.tail)
            .map(|(i, c)| (*i, c.clone()))
            .collect();
        for (md, ech) in &self.blocks {
            let hits: Vec<(usize, C)> = out
                .iter()
                .filter(|(i, _)| ech.is_pivot(**i) && self.alg.basis_multidegree(**i) == md.as_slice())
                .map(|(i, c)| (*i, c.clone()))
                .collect();
            for (p, c) in hits {
                for (k, x) in ech.row(p).expect("pivot row") {
                    add_into(&mut out, *k, c.scale(x).neg());
                }
            }
        }
        out
    }

    pub fn contains_coords(&self, v: &Coords<Scalar>) -> bool {
        self.reduce_coords(v).is_empty()
    }

    pub fn contains(&self, e: &Element<Scalar>) -> Result<bool> {
        Ok(self.contains_coords(&self.alg.coords(e)?))
    }

    /// The ideal as a subspace of the whole truncated algebra.
    pub fn subspace(&self) -> Echelon<Scalar> {
        let mut e = Echelon::new();
        for block in self.blocks.values() {
            for (_, r) in block.rows() {
                e.insert(r);
            }
        }
        for d in self.tail..=self.alg.max_degree() {
            for i in self.alg.degree_range(d) {
                e.insert(&BTreeMap::from([(i, Scalar::one())]));
            }
        }
        e
    }
}

pub fn ideal_build(alg: Arc<TruncatedAlgebra>, gens: &[Element<Scalar>], m: usize) -> Result<TruncatedIdeal> {
    TruncatedIdeal::build(alg, gens, m)
}

pub fn ideal_contains(ideal: &TruncatedIdeal, e: &Element<Scalar>) -> Result<bool> {
    ideal.contains(e)
}

/// `s_F(I)`: the ideal generated by the σ-images of the generators, same tail.
pub fn sf_image(w: &VerbalSystem, ideal: &TruncatedIdeal) -> Result<TruncatedIdeal> {
    let alg = ideal.algebra();
    let report = check_op2_in(alg, w);
    if !report.pass {
        return Err(Error::Op2Failure(format!(
            "{} in `{}`",
            report
                .failed_identity
                .map(|s| format!("identity {s} fails"))
                .unwrap_or_else(|| "σ_F is not invertible or w_· is not canonical".into()),
            alg.presentation().name()
        )));
    }
    let gens: Vec<Element<Scalar>> = ideal
        .generators()
        .iter()
        .map(|g| Ok(alg.element(&w.sigma_coords(alg, &alg.coords(g)?))))
        .collect::<Result<_>>()?;
    TruncatedIdeal::build(alg.clone(), &gens, ideal.tail())
}

/// Intersection of `ker(τ ∘ α)` over the sample, as a subspace of the whole
/// truncated algebra. Every `α` must map the generators of `T` into `T`.
pub fn closure_sampled(ideal: &TruncatedIdeal, endos: &[Endomorphism<Scalar>]) -> Result<Echelon<Scalar>> {
    let alg = ideal.algebra();
    let dim = alg.dim();
    if endos.is_empty() {
        let mut full = Echelon::new();
        for i in 0..dim {
            full.insert(&BTreeMap::from([(i, Scalar::one())]));
        }
        return Ok(full);
    }
    let mut image_sets = Vec::with_capacity(endos.len());
    for (k, alpha) in endos.iter().enumerate() {
        if alpha.ngens() != alg.ngens() {
            return Err(Error::EndomorphismRejected {
                index: k,
                reason: format!("acts on {} generators, algebra has {}", alpha.ngens(), alg.ngens()),
            });
        }
        let images: Vec<Coords<Scalar>> = alpha.images().iter().map(|e| alg.coords(e)).collect::<Result<_>>()?;
        for g in ideal.generators() {
            let img = alg.substitute(&images, &alg.coords(g)?);
            if !ideal.contains_coords(&img) {
                return Err(Error::EndomorphismRejected {
                    index: k,
                    reason: format!("image of generator `{}` leaves the ideal", alg.generators().render(g)),
                });
            }
        }
        image_sets.push(images);
    }
    let rows: Vec<SparseVec<Scalar>> = (0..dim)
        .map(|i| {
            let unit = BTreeMap::from([(i, Scalar::one())]);
            let mut row = BTreeMap::new();
            for (k, images) in image_sets.iter().enumerate() {
                let r = ideal.reduce_coords(&alg.substitute(images, &unit));
                for (c, x) in r {
                    row.insert(k * dim + c, x);
                }
            }
            row
        })
        .collect();
    Ok(Echelon::span_of(&kernel(&rows)))
}
