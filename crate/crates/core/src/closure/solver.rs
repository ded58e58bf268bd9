use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::constraints::{ConstraintSystem, RHO};
use crate::error::Result;
use crate::scalars::{Indeterminate, ParamPoly, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchStatus {
    /// Equations remain that the solver could neither split nor absorb.
    Open,
    /// Every equation is implied by the branch hypotheses.
    Closed,
    /// The hypotheses are contradictory.
    Infeasible,
    /// The depth bound was reached.
    Stuck,
}

/// Hypotheses of one branch: substitutions, polynomials assumed zero,
/// polynomials assumed nonzero, and the equations still open.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub substitutions: BTreeMap<Indeterminate, ParamPoly>,
    pub vanishing: Vec<ParamPoly>,
    pub nonvanishing: Vec<ParamPoly>,
    pub residual: Vec<ParamPoly>,
    pub status: BranchStatus,
}

/// A split `polynomial = unit * prod(factors)`; the children take
/// `branched[i] = 0` together with `branched[j] != 0` for `j < i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub polynomial: ParamPoly,
    pub unit: Scalar,
    pub factors: Vec<ParamPoly>,
    pub branched: Vec<ParamPoly>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchNode {
    pub assumptions: Vec<String>,
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<BranchNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_verified: Option<bool>,
}

impl BranchNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaves(&self) -> Vec<&BranchNode> {
        if self.is_leaf() {
            return vec![self];
        }
        self.children.iter().flat_map(|c| c.leaves()).collect()
    }

    pub fn leaves_mut(&mut self) -> Vec<&mut BranchNode> {
        if self.children.is_empty() {
            return vec![self];
        }
        self.children.iter_mut().flat_map(|c| c.leaves_mut()).collect()
    }

    pub fn count(&self, status: BranchStatus) -> usize {
        self.leaves().iter().filter(|l| l.branch.status == status).count()
    }
}

struct State {
    subs: BTreeMap<Indeterminate, ParamPoly>,
    vanishing: Vec<ParamPoly>,
    nonvanishing: Vec<ParamPoly>,
    equations: Vec<ParamPoly>,
}

enum Simplified {
    Infeasible,
    Done,
}

struct Solver {
    hints: Vec<ParamPoly>,
    depth_bound: usize,
}

/// Case-splitting search over the constraint system. Every leaf is closed,
/// infeasible or stuck; the disjunction of the leaves is equivalent to the
/// system.
pub fn solve_cases(cs: &ConstraintSystem, hints: &[ParamPoly], depth_bound: usize) -> Result<BranchNode> {
    let solver = Solver {
        hints: hints.iter().filter(|h| !h.is_constant()).map(|h| h.monic()).collect(),
        depth_bound,
    };
    let state = State {
        subs: BTreeMap::new(),
        vanishing: vec![],
        nonvanishing: vec![],
        equations: cs.polynomials(),
    };
    solver.explore(state, vec![], 0)
}

impl Solver {
    fn explore(&self, mut st: State, assumptions: Vec<String>, depth: usize) -> Result<BranchNode> {
        let outcome = self.simplify(&mut st)?;
        let leaf = |st: State, status| BranchNode {
            assumptions: assumptions.clone(),
            branch: Branch {
                substitutions: st.subs,
                vanishing: st.vanishing,
                nonvanishing: st.nonvanishing,
                residual: st.equations,
                status,
            },
            split: None,
            children: vec![],
            kernel_verified: None,
        };
        if let Simplified::Infeasible = outcome {
            return Ok(leaf(st, BranchStatus::Infeasible));
        }
        if st.equations.is_empty() {
            return Ok(leaf(st, BranchStatus::Closed));
        }
        let Some((pos, fact, branched)) = self.pick_split(&st)? else {
            return Ok(leaf(st, BranchStatus::Open));
        };
        if depth >= self.depth_bound {
            return Ok(leaf(st, BranchStatus::Stuck));
        }
        let poly = st.equations[pos].clone();
        let mut children = Vec::with_capacity(branched.len());
        for (i, f) in branched.iter().enumerate() {
            let mut equations = st.equations.clone();
            equations.remove(pos);
            equations.push(f.clone());
            let mut nonvanishing = st.nonvanishing.clone();
            nonvanishing.extend(branched[..i].iter().cloned());
            let mut hyp: Vec<String> = branched[..i].iter().map(|g| format!("{g} != 0")).collect();
            hyp.push(format!("{f} = 0"));
            let child = State {
                subs: st.subs.clone(),
                vanishing: st.vanishing.clone(),
                nonvanishing,
                equations,
            };
            children.push(self.explore(child, hyp, depth + 1)?);
        }
        let mut node = leaf(st, BranchStatus::Open);
        node.split = Some(Split {
            polynomial: poly,
            unit: fact.0,
            factors: fact.1,
            branched,
        });
        node.children = children;
        Ok(node)
    }

    /// Factors of `p` (reduced) that are not known to be nonzero, deduplicated.
    fn open_factors(&self, st: &State, p: &ParamPoly) -> Result<(Scalar, Vec<ParamPoly>, Vec<ParamPoly>)> {
        let f = p.factor_for_branching(&self.hints);
        let nv: Vec<ParamPoly> = st
            .nonvanishing
            .iter()
            .map(|q| q.reduce(&st.subs, &st.vanishing))
            .collect::<Result<_>>()?;
        let mut open: Vec<ParamPoly> = Vec::new();
        for g in &f.factors {
            let known = nv.iter().any(|q| !q.is_zero() && q.div_exact(g).is_some());
            if !known && !open.contains(g) {
                open.push(g.clone());
            }
        }
        // hint factors first
        open.sort_by_key(|g| !self.hints.contains(g));
        Ok((f.unit, f.factors, open))
    }

    fn simplify(&self, st: &mut State) -> Result<Simplified> {
        loop {
            for q in &st.nonvanishing {
                if q.reduce(&st.subs, &st.vanishing)?.is_zero() {
                    return Ok(Simplified::Infeasible);
                }
            }
            let mut kept = Vec::new();
            let mut singles = Vec::new();
            let mut substituted = false;
            let pending = std::mem::take(&mut st.equations);
            for (k, e) in pending.iter().enumerate() {
                let r = e.reduce(&st.subs, &st.vanishing)?;
                if r.is_zero() {
                    continue;
                }
                let (_, _, open) = self.open_factors(st, &r)?;
                match open.as_slice() {
                    [] => return Ok(Simplified::Infeasible),
                    [g] => {
                        if let Some((v, val)) = self.pick_linear(g) {
                            st.subs.insert(v, val);
                            kept.extend(pending[k + 1..].iter().cloned());
                            kept.append(&mut st.vanishing);
                            substituted = true;
                            break;
                        }
                        singles.push(g.clone());
                    }
                    _ => kept.push(r),
                }
            }
            if substituted {
                kept.extend(singles);
                st.equations = kept;
                continue;
            }
            if singles.is_empty() {
                st.equations = kept;
                return Ok(Simplified::Done);
            }
            st.vanishing.extend(singles);
            st.equations = kept;
        }
    }

    /// `v = value` from a factor linear in `v` with scalar coefficient;
    /// `rho` first, then the other indeterminates in order.
    fn pick_linear(&self, g: &ParamPoly) -> Option<(Indeterminate, ParamPoly)> {
        let rho = Indeterminate::new(RHO);
        if let Some(val) = g.solve_linear_for(&rho) {
            return Some((rho, val));
        }
        g.indeterminates()
            .into_iter()
            .find_map(|v| g.solve_linear_for(&v).map(|val| (v, val)))
    }

    #[allow(clippy::type_complexity)]
    fn pick_split(&self, st: &State) -> Result<Option<(usize, (Scalar, Vec<ParamPoly>), Vec<ParamPoly>)>> {
        let mut best: Option<(usize, (Scalar, Vec<ParamPoly>), Vec<ParamPoly>)> = None;
        for (k, e) in st.equations.iter().enumerate() {
            let (unit, factors, open) = self.open_factors(st, e)?;
            if open.len() < 2 {
                continue;
            }
            let has_hint = open.iter().any(|g| self.hints.contains(g));
            let better = match &best {
                None => true,
                Some((_, _, b)) => {
                    let b_hint = b.iter().any(|g| self.hints.contains(g));
                    (has_hint && !b_hint) || (has_hint == b_hint && open.len() < b.len())
                }
            };
            if better {
                best = Some((k, (unit, factors), open));
            }
        }
        Ok(best)
    }
}
