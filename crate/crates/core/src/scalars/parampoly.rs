//! Polynomials over `k` in named solver indeterminates (`a11`, `a21`, `rho`, ...).
//!
//! Variables are ordered by name; a name that sorts earlier is the *larger*
//! variable for the graded-lexicographic term order, mirroring `t1 > t2`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::{Coeff, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Indeterminate(Arc<str>);

impl Indeterminate {
    pub fn new(name: &str) -> Self {
        Indeterminate(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Power product of indeterminates, sorted by name, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamMonomial(Vec<(Indeterminate, u32)>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn var(v: Indeterminate) -> Self {
        ParamMonomial(vec![(v, 1)])
    }

    pub fn from_powers<I: IntoIterator<Item = (Indeterminate, u32)>>(it: I) -> Self {
        let mut map: BTreeMap<Indeterminate, u32> = BTreeMap::new();
        for (v, e) in it {
            *map.entry(v).or_insert(0) += e;
        }
        ParamMonomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn powers(&self) -> &[(Indeterminate, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Indeterminate) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &ParamMonomial) -> ParamMonomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push(b.clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        out.push((a.0.clone(), a.1 + b.1));
                        i += 1;
                        j += 1;
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        ParamMonomial(out)
    }

    pub fn divides(&self, other: &ParamMonomial) -> bool {
        self.0.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &ParamMonomial) -> ParamMonomial {
        ParamMonomial(
            other
                .0
                .iter()
                .filter_map(|(v, e)| {
                    let r = e - self.exponent(v);
                    (r > 0).then(|| (v.clone(), r))
                })
                .collect(),
        )
    }

    pub fn gcd(&self, other: &ParamMonomial) -> ParamMonomial {
        ParamMonomial(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let m = (*e).min(other.exponent(v));
                    (m > 0).then(|| (v.clone(), m))
                })
                .collect(),
        )
    }

    pub fn vars(&self) -> impl Iterator<Item = &Indeterminate> {
        self.0.iter().map(|(v, _)| v)
    }
}

impl Ord for ParamMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Lex with earlier names as larger variables.
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match a.1.cmp(&b.1) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            o => return o,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for ParamMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial with `Scalar` coefficients in solver indeterminates.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, Scalar>,
}

/// Result of [`ParamPoly::factor_for_branching`]: `p = unit * prod(factors)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<ParamPoly>,
}

impl Factorization {
    pub fn product(&self) -> ParamPoly {
        self.factors
            .iter()
            .fold(ParamPoly::constant(self.unit.clone()), |acc, f| acc.mul(f))
    }
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(ParamMonomial::one(), c)
    }

    pub fn var(v: &Indeterminate) -> Self {
        Self::term(ParamMonomial::var(v.clone()), Scalar::one())
    }

    pub fn named(name: &str) -> Self {
        Self::var(&Indeterminate::new(name))
    }

    pub fn term(m: ParamMonomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (ParamMonomial, Scalar)>>(it: I) -> Self {
        let mut p = ParamPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ParamMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &ParamMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `Some(c)` when the polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&ParamMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<(&ParamMonomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Indeterminate) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn indeterminates(&self) -> BTreeSet<Indeterminate> {
        self.terms.keys().flat_map(|m| m.vars().cloned()).collect()
    }

    fn add_term(&mut self, m: ParamMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> ParamPoly {
        if s.is_zero() {
            return ParamPoly::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul_term(&self, m: &ParamMonomial, c: &Scalar) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m2, c2)| (m2.mul(m), c2 * c)).collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        if self.is_zero() || other.is_zero() {
            return ParamPoly::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading coefficient; returns `(lc, monic)`.
    pub fn split_unit(&self) -> (Scalar, ParamPoly) {
        match self.leading() {
            None => (Scalar::one(), ParamPoly::zero()),
            Some((_, lc)) => {
                let lc = lc.clone();
                let inv = lc.inv().expect("stored coefficients are nonzero");
                (lc, self.scale(&inv))
            }
        }
    }

    pub fn monic(&self) -> ParamPoly {
        self.split_unit().1
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c * &lc_inv;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Multivariate division remainder: no term of the result is divisible by
    /// the leading monomial of any (nonzero) divisor.
    pub fn remainder(&self, divisors: &[ParamPoly]) -> ParamPoly {
        let divs: Vec<(ParamMonomial, Scalar, &ParamPoly)> = divisors
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                let (m, c) = g.leading().expect("nonzero");
                (m.clone(), c.inv().expect("nonzero"), g)
            })
            .collect();
        if divs.is_empty() {
            return self.clone();
        }
        let mut p = self.clone();
        let mut r = ParamPoly::zero();
        while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if let Some((lm, inv, g)) = divs.iter().find(|(lm, _, _)| lm.divides(&m)) {
                let qm = lm.quotient_of(&m);
                p = p.sub(&g.mul_term(&qm, &(&c * inv)));
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        r
    }

    /// Replaces each indeterminate in `subs` by its image, once (not to a fixpoint).
    pub fn substitute(&self, subs: &BTreeMap<Indeterminate, ParamPoly>) -> ParamPoly {
        if subs.is_empty() || !self.terms.keys().any(|m| m.vars().any(|v| subs.contains_key(v))) {
            return self.clone();
        }
        let mut cache: HashMap<(Indeterminate, u32), ParamPoly> = HashMap::new();
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = ParamPoly::constant(c.clone());
            for (v, e) in m.powers() {
                match subs.get(v) {
                    Some(img) => {
                        let pw = cache.entry((v.clone(), *e)).or_insert_with(|| img.pow(*e)).clone();
                        acc = acc.mul(&pw);
                    }
                    None => kept.push((v.clone(), *e)),
                }
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            let km = ParamMonomial(kept);
            out = out.add(&acc.mul_term(&km, &Scalar::one()));
        }
        out
    }

    /// Evaluates all indeterminates; `None` if some indeterminate is unassigned.
    pub fn evaluate(&self, values: &BTreeMap<Indeterminate, Scalar>) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.powers() {
                let x = values.get(v)?;
                t = &t * &x.pow(*e as i32).expect("nonnegative power");
            }
            acc = &acc + &t;
        }
        Some(acc)
    }

    /// If `self = c*v + rest` with `c` a nonzero Scalar and `rest` free of `v`,
    /// returns `-rest/c` (the value of `v` on the zero set).
    pub fn solve_linear_for(&self, v: &Indeterminate) -> Option<ParamPoly> {
        let mut coeff = None;
        let mut rest = ParamPoly::zero();
        for (m, c) in &self.terms {
            match m.exponent(v) {
                0 => rest.add_term(m.clone(), c.clone()),
                1 if m.degree() == 1 => coeff = Some(c.clone()),
                _ => return None,
            }
        }
        let c = coeff?;
        Some(rest.scale(&(-&c).inv().ok()?))
    }

    /// Splits for case analysis: Scalar unit, monomial content (each
    /// indeterminate with multiplicity), then repeated exact division by the
    /// hints, then the non-constant remainder. All emitted factors are monic.
    pub fn factor_for_branching(&self, hints: &[ParamPoly]) -> Factorization {
        let (unit, monic) = self.split_unit();
        if monic.is_zero() {
            return Factorization {
                unit: Scalar::zero(),
                factors: vec![],
            };
        }
        let mut factors = Vec::new();
        let content = monic
            .terms
            .keys()
            .skip(1)
            .fold(monic.terms.keys().next().cloned().unwrap(), |acc, m| acc.gcd(m));
        for (v, e) in content.powers() {
            for _ in 0..*e {
                factors.push(ParamPoly::var(v));
            }
        }
        let mut rest = if content.is_one() {
            monic
        } else {
            ParamPoly {
                terms: monic
                    .terms
                    .iter()
                    .map(|(m, c)| (content.quotient_of(m), c.clone()))
                    .collect(),
            }
        };
        for h in hints {
            if h.is_constant() {
                continue;
            }
            let h = h.monic();
            while !rest.is_constant() {
                match rest.div_exact(&h) {
                    Some(q) => {
                        factors.push(h.clone());
                        rest = q;
                    }
                    None => break,
                }
            }
        }
        let mut unit = unit;
        if let Some(c) = rest.as_constant() {
            unit = &unit * &c;
        } else {
            let (u, m) = rest.split_unit();
            unit = &unit * &u;
            factors.push(m);
        }
        Factorization { unit, factors }
    }

    /// Applies `subs` to a fixpoint, then reduces modulo `vanishing`.
    pub fn reduce(&self, subs: &BTreeMap<Indeterminate, ParamPoly>, vanishing: &[ParamPoly]) -> Result<ParamPoly> {
        check_acyclic(subs)?;
        let p = substitute_fixpoint(self, subs);
        let van: Vec<ParamPoly> = vanishing
            .iter()
            .map(|g| substitute_fixpoint(g, subs))
            .filter(|g| !g.is_zero())
            .collect();
        Ok(p.remainder(&van))
    }

    pub fn to_element_string(&self) -> String {
        self.to_string()
    }
}

fn substitute_fixpoint(p: &ParamPoly, subs: &BTreeMap<Indeterminate, ParamPoly>) -> ParamPoly {
    let mut cur = p.clone();
    loop {
        let next = cur.substitute(subs);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn check_acyclic(subs: &BTreeMap<Indeterminate, ParamPoly>) -> Result<()> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: HashMap<&Indeterminate, u8> = HashMap::new();
    fn visit<'a>(
        v: &'a Indeterminate,
        subs: &'a BTreeMap<Indeterminate, ParamPoly>,
        state: &mut HashMap<&'a Indeterminate, u8>,
    ) -> Result<()> {
        match state.get(v) {
            Some(1) => return Err(Error::CyclicSubstitution(v.to_string())),
            Some(2) => return Ok(()),
            _ => {}
        }
        state.insert(v, 1);
        if let Some(img) = subs.get(v) {
            for m in img.terms.keys() {
                for (w, _) in m.powers() {
                    if let Some((k, _)) = subs.get_key_value(w) {
                        visit(k, subs, state)?;
                    }
                }
            }
        }
        state.insert(v, 2);
        Ok(())
    }
    for v in subs.keys() {
        visit(v, subs, &mut state)?;
    }
    Ok(())
}

fn coeff_is_simple(s: &str) -> bool {
    // A single signed term: no spaces and no fraction bar.
    !s.contains(' ') && !s.contains('/')
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, body) = if coeff_is_simple(&cs) {
                match cs.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, cs.clone()),
                }
            } else {
                (false, format!("({cs})"))
            };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&body)?;
            } else if body == "1" {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", body, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({})", self)
    }
}

impl Coeff for ParamPoly {
    fn zero() -> Self {
        ParamPoly::zero()
    }
    fn one() -> Self {
        ParamPoly::one()
    }
    fn is_zero(&self) -> bool {
        ParamPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        ParamPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ParamPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        ParamPoly::neg(self)
    }
    fn scale(&self, s: &Scalar) -> Self {
        ParamPoly::scale(self, s)
    }
    fn scale_rational(&self, q: &BigRational) -> Self {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.scale_rational(q)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }
    fn from_scalar(s: Scalar) -> Self {
        ParamPoly::constant(s)
    }
}

impl serde::Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ParamPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        crate::parse::parse_param_poly(&s).map_err(serde::de::Error::custom)
    }
}

impl serde::Serialize for Indeterminate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> serde::Deserialize<'de> for Indeterminate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        Ok(Indeterminate::new(&s))
    }
}
