use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A nonassociative word: a full binary tree whose leaves are generator
/// indices (0-based).
#[derive(Clone)]
pub struct Monomial(Arc<Node>);

enum Node {
    Leaf(usize),
    Product {
        left: Monomial,
        right: Monomial,
        degree: usize,
        hash: u64,
    },
}

fn mix(a: u64, b: u64) -> u64 {
    let h = a.rotate_left(17) ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    h.wrapping_mul(0xff51_afd7_ed55_8ccd) ^ 0x5bd1
}

impl Monomial {
    pub fn leaf(generator: usize) -> Self {
        Monomial(Arc::new(Node::Leaf(generator)))
    }

    pub fn product(left: &Monomial, right: &Monomial) -> Self {
        let degree = left.degree() + right.degree();
        let hash = mix(left.structural_hash(), right.structural_hash());
        Monomial(Arc::new(Node::Product {
            left: left.clone(),
            right: right.clone(),
            degree,
            hash,
        }))
    }

    fn structural_hash(&self) -> u64 {
        match &*self.0 {
            Node::Leaf(g) => (*g as u64).wrapping_mul(0x2545_f491_4f6c_dd1d) ^ 0x71,
            Node::Product { hash, .. } => *hash,
        }
    }

    pub fn degree(&self) -> usize {
        match &*self.0 {
            Node::Leaf(_) => 1,
            Node::Product { degree, .. } => *degree,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(&*self.0, Node::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<usize> {
        match &*self.0 {
            Node::Leaf(g) => Some(*g),
            _ => None,
        }
    }

    pub fn children(&self) -> Option<(&Monomial, &Monomial)> {
        match &*self.0 {
            Node::Leaf(_) => None,
            Node::Product { left, right, .. } => Some((left, right)),
        }
    }

    /// Leaf labels from left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match &*self.0 {
            Node::Leaf(g) => out.push(*g),
            Node::Product { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    pub fn max_generator(&self) -> usize {
        self.leaves().into_iter().max().unwrap_or(0)
    }

    /// Per-generator leaf counts, padded to at least `ngens` entries.
    pub fn multidegree(&self, ngens: usize) -> Vec<usize> {
        let mut md = vec![0; ngens.max(self.max_generator() + 1)];
        for g in self.leaves() {
            md[g] += 1;
        }
        md
    }

    /// Replaces every leaf label `g` by `f(g)`.
    pub fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Monomial {
        match &*self.0 {
            Node::Leaf(g) => Monomial::leaf(f(*g)),
            Node::Product { left, right, .. } => Monomial::product(&left.relabel(f), &right.relabel(f)),
        }
    }

    fn shape_cmp(&self, other: &Monomial) -> Ordering {
        match (&*self.0, &*other.0) {
            (Node::Leaf(_), Node::Leaf(_)) => Ordering::Equal,
            (Node::Leaf(_), _) => Ordering::Less,
            (_, Node::Leaf(_)) => Ordering::Greater,
            (
                Node::Product {
                    left: l1, right: r1, ..
                },
                Node::Product {
                    left: l2, right: r2, ..
                },
            ) => l1
                .degree()
                .cmp(&l2.degree())
                .then_with(|| l1.shape_cmp(l2))
                .then_with(|| r1.shape_cmp(r2)),
        }
    }

    fn write_with(&self, f: &mut dyn fmt::Write, names: &dyn Fn(usize) -> String) -> fmt::Result {
        match &*self.0 {
            Node::Leaf(g) => f.write_str(&names(*g)),
            Node::Product { left, right, .. } => {
                f.write_char('(')?;
                left.write_with(f, names)?;
                f.write_char(' ')?;
                right.write_with(f, names)?;
                f.write_char(')')
            }
        }
    }

    /// Rendering with custom generator names, e.g. `y1` for identity schemes.
    pub fn to_string_with(&self, names: &dyn Fn(usize) -> String) -> String {
        let mut s = String::new();
        self.write_with(&mut s, names).expect("writing to a String");
        s
    }
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Node::Leaf(a), Node::Leaf(b)) => a == b,
            (
                Node::Product {
                    left: l1,
                    right: r1,
                    hash: h1,
                    ..
                },
                Node::Product {
                    left: l2,
                    right: r2,
                    hash: h2,
                    ..
                },
            ) => h1 == h2 && l1 == l2 && r1 == r2,
            _ => false,
        }
    }
}

impl Eq for Monomial {}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.structural_hash());
    }
}

impl Ord for Monomial {
    /// Degree, then tree shape (leaf before product, then left subtree
    /// degree, recursively), then the leaf word lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.shape_cmp(other))
            .then_with(|| self.leaves().cmp(&other.leaves()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|g| format!("x{}", g + 1))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All tree shapes with `degree` leaves, in canonical order, leaves labeled 0.
pub fn shapes(degree: usize) -> Vec<Monomial> {
    let mut table: Vec<Vec<Monomial>> = vec![Vec::new(), vec![Monomial::leaf(0)]];
    for d in 2..=degree {
        let mut row = Vec::new();
        for l in 1..d {
            for left in &table[l] {
                for right in &table[d - l] {
                    row.push(Monomial::product(left, right));
                }
            }
        }
        table.push(row);
    }
    if degree == 0 {
        return Vec::new();
    }
    table.swap_remove(degree)
}

fn label(shape: &Monomial, word: &[usize], pos: &mut usize) -> Monomial {
    match shape.children() {
        None => {
            let m = Monomial::leaf(word[*pos]);
            *pos += 1;
            m
        }
        Some((l, r)) => {
            let l = label(l, word, pos);
            let r = label(r, word, pos);
            Monomial::product(&l, &r)
        }
    }
}

/// Every monomial of the given degree over `ngens` generators in canonical
/// order; there are `Catalan(degree - 1) * ngens^degree` of them.
pub fn enumerate_monomials(ngens: usize, degree: usize) -> Vec<Monomial> {
    if degree == 0 || ngens == 0 {
        return Vec::new();
    }
    let shapes = shapes(degree);
    let words = ngens.pow(degree as u32);
    let mut out = Vec::with_capacity(shapes.len() * words);
    let mut word = vec![0usize; degree];
    for s in &shapes {
        for w in 0..words {
            let mut rest = w;
            for slot in word.iter_mut().rev() {
                *slot = rest % ngens;
                rest /= ngens;
            }
            out.push(label(s, &word, &mut 0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Monomial {
        Monomial::leaf(i)
    }

    fn p(a: &Monomial, b: &Monomial) -> Monomial {
        Monomial::product(a, b)
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_monomials(2, 1), vec![x(0), x(1)]);
        assert_eq!(enumerate_monomials(2, 2).len(), 4);
        assert_eq!(enumerate_monomials(2, 3).len(), 16);
        assert_eq!(enumerate_monomials(3, 4).len(), 5 * 81);
    }

    #[test]
    fn enumeration_is_sorted() {
        let all = enumerate_monomials(2, 4);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn right_comb_precedes_left_comb() {
        let a = p(&x(0), &p(&x(0), &x(1)));
        let b = p(&p(&x(0), &x(1)), &x(0));
        assert!(a < b);
        assert_eq!(b.to_string(), "((x1 x2) x1)");
    }

    #[test]
    fn multidegree_and_equality() {
        let m = p(&p(&x(0), &x(1)), &x(0));
        assert_eq!(m.multidegree(2), vec![2, 1]);
        assert_eq!(m, p(&p(&x(0), &x(1)), &x(0)));
        assert_ne!(m, p(&x(0), &p(&x(1), &x(0))));
    }
}
