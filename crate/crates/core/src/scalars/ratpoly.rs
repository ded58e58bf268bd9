//! Multivariate polynomials over the rationals in the transcendentals `t1..tm`.
//!
//! Exponent vectors are stored trimmed (no trailing zeros), so polynomials in
//! different numbers of variables compare and combine without a shared context.
//! Terms are kept in a `BTreeMap` ordered by graded-lexicographic order with
//! `t1 > t2 > ...`; the last entry is the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector with graded-lexicographic ordering.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Exponents(v)
    }

    pub fn one() -> Self {
        Exponents(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = 1;
        Exponents(v)
    }

    pub fn get(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Exponents) -> Exponents {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.get(i) + other.get(i)).collect();
        Exponents(v)
    }

    pub fn divides(&self, other: &Exponents) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e <= other.get(i))
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Exponents) -> Exponents {
        let n = other.0.len();
        Exponents::new((0..n).map(|i| other.get(i) - self.get(i)).collect())
    }

    pub fn gcd(&self, other: &Exponents) -> Exponents {
        let n = self.0.len().min(other.0.len());
        Exponents::new((0..n).map(|i| self.get(i).min(other.get(i))).collect())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `Q[t1, ..., tm]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    terms: BTreeMap<Exponents, BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponents::one(), c);
        }
        RatPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// The transcendental `t_{index+1}`.
    pub fn var(index: usize) -> Self {
        Self::monomial(Exponents::var(index), BigRational::one())
    }

    pub fn monomial(e: Exponents, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        RatPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, BigRational)>>(it: I) -> Self {
        let mut p = RatPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Exponents::one()))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Exponents::one()).is_some_and(|c| c.is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map(|(e, _)| e.degree()).unwrap_or(0)
    }

    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|e| e.nvars()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.get(var)).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        let mut out = RatPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul_term(&self, e: &Exponents, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            terms: self.terms.iter().map(|(e2, v)| (e2.mul(e), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> RatPoly {
        let mut acc = RatPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Makes the leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => RatPoly::zero(),
            Some((_, lc)) if lc.is_one() => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    /// Exact division. Returns `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &RatPoly) -> Option<RatPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (le, lc) = divisor.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = RatPoly::zero();
        while let Some((e, c)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if !le.divides(&e) {
                return None;
            }
            let qe = le.quotient_of(&e);
            let qc = &c / &lc;
            rem = rem.sub(&divisor.mul_term(&qe, &qc));
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Substitutes `t_i -> t_{perm[i]}`. Indices beyond `perm` are fixed.
    pub fn permute_vars(&self, perm: &[usize]) -> RatPoly {
        RatPoly::from_terms(self.terms.iter().map(|(e, c)| {
            let n = e.nvars().max(perm.iter().copied().max().map_or(0, |m| m + 1));
            let mut v = vec![0u32; n];
            for (i, &x) in e.as_slice().iter().enumerate() {
                let j = perm.get(i).copied().unwrap_or(i);
                v[j] += x;
            }
            (Exponents::new(v), c.clone())
        }))
    }

    /// Evaluates at rational points (missing variables are zero).
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.as_slice().iter().enumerate() {
                let v = point.get(i).cloned().unwrap_or_else(BigRational::zero);
                t *= num_traits::pow(v, x as usize);
            }
            acc += t;
        }
        acc
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of integer numerators (after the caller has cleared denominators).
    pub fn numerator_gcd(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    // --- recursive views used by the gcd -------------------------------

    /// Splits into coefficients of powers of `var`: `self = sum c_k * t_var^k`.
    fn coeffs_in(&self, var: usize) -> Vec<RatPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![RatPoly::zero(); deg + 1];
        for (e, c) in &self.terms {
            let k = e.get(var) as usize;
            let mut v = e.as_slice().to_vec();
            if var < v.len() {
                v[var] = 0;
            }
            out[k].add_term(Exponents::new(v), c.clone());
        }
        out
    }

    fn from_coeffs_in(coeffs: &[RatPoly], var: usize) -> RatPoly {
        let mut out = RatPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut v = vec![0u32; var + 1];
            v[var] = k as u32;
            let xk = Exponents::new(v);
            for (e, cc) in &c.terms {
                out.add_term(e.mul(&xk), cc.clone());
            }
        }
        out
    }

    fn content_in(&self, var: usize) -> RatPoly {
        self.coeffs_in(var)
            .iter()
            .filter(|c| !c.is_zero())
            .fold(RatPoly::zero(), |acc, c| gcd(&acc, c))
    }

    /// Scalar multiple with coprime integer coefficients.
    fn primitive_integer(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let cleared = self.scale(&BigRational::from_integer(self.denominator_lcm()));
        let g = cleared.numerator_gcd();
        cleared.scale(&BigRational::new(BigInt::one(), g))
    }

    /// Monic gcd over `Q`. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        gcd(self, other)
    }
}

fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return RatPoly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 || b.len() == 1 {
        // gcd with a monomial is the common monomial content
        let e = a
            .terms
            .keys()
            .chain(b.terms.keys())
            .skip(1)
            .fold(a.terms.keys().next().unwrap().clone(), |acc, e| acc.gcd(e));
        return RatPoly::monomial(e, BigRational::one());
    }
    // Pick the highest variable present in either.
    let nv = a.nvars().max(b.nvars());
    let var = (0..nv)
        .rev()
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .expect("non-constant polynomial has a variable");
    let (da, db) = (a.degree_in(var), b.degree_in(var));
    if da == 0 {
        return gcd(a, &b.content_in(var));
    }
    if db == 0 {
        return gcd(&a.content_in(var), b);
    }
    let ca = a.content_in(var);
    let cb = b.content_in(var);
    let g_content = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides").primitive_integer();
    let pb = b.div_exact(&cb).expect("content divides").primitive_integer();
    let (mut r0, mut r1) = if da >= db { (pa, pb) } else { (pb, pa) };
    loop {
        let r = pseudo_rem(&r0, &r1, var);
        if r.is_zero() {
            break;
        }
        if r.degree_in(var) == 0 {
            return g_content;
        }
        let cr = r.content_in(var);
        r0 = r1;
        r1 = r.div_exact(&cr).expect("content divides").primitive_integer();
    }
    g_content.mul(&r1).monic()
}

/// Pseudo-remainder of `a` by `b` viewed as univariate in `var`.
fn pseudo_rem(a: &RatPoly, b: &RatPoly, var: usize) -> RatPoly {
    let bc = b.coeffs_in(var);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut r = a.coeffs_in(var);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        if r[dr].is_zero() {
            r.pop();
            continue;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (k, bk) in bc.iter().enumerate() {
            let t = lr.mul(bk);
            r[k + shift] = r[k + shift].sub(&t);
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
    }
    RatPoly::from_coeffs_in(&r, var)
}

fn fmt_rational_abs(c: &BigRational) -> String {
    let c = c.abs();
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Formats a monomial in the transcendentals, e.g. `t1^2*t2`; empty for 1.
pub(crate) fn fmt_exponents(e: &Exponents, names: &dyn Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (i, &x) in e.as_slice().iter().enumerate() {
        match x {
            0 => {}
            1 => parts.push(names(i)),
            _ => parts.push(format!("{}^{}", names(i), x)),
        }
    }
    parts.join("*")
}

pub(crate) fn default_var_name(i: usize) -> String {
    format!("t{}", i + 1)
}

impl RatPoly {
    /// Writes the polynomial with terms in descending order. Coefficients are
    /// printed as given (callers clear denominators for the canonical form).
    pub(crate) fn write_terms(&self, f: &mut dyn fmt::Write) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono = fmt_exponents(e, &default_var_name);
            let abs = fmt_rational_abs(c);
            if mono.is_empty() {
                f.write_str(&abs)?;
            } else if c.abs().is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", abs, mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_terms(&mut s)?;
        f.write_str(&s)
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({})", self)
    }
}
