#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vf_core::freealg::Monomial;
use vf_core::parse::parse_element;
use vf_core::Scalar;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(r: &mut impl Rng) -> Scalar {
    let n = r.gen_range(-7i64..=7);
    let d = r.gen_range(1i64..=4);
    Scalar::from_ratio(n, d)
}

pub fn nonzero_rational(r: &mut impl Rng) -> Scalar {
    loop {
        let s = small_rational(r);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random element of `Q(t1, t2)` of low degree.
pub fn small_scalar(r: &mut impl Rng) -> Scalar {
    let t1 = Scalar::transcendental(0);
    let t2 = Scalar::transcendental(1);
    let mut num = small_rational(r);
    if r.gen_bool(0.5) {
        num = &num + &(&small_rational(r) * &t1);
    }
    if r.gen_bool(0.3) {
        num = &num + &(&small_rational(r) * &t2);
    }
    if r.gen_bool(0.3) {
        let den = &Scalar::one() + &(&nonzero_rational(r) * &t2);
        num = num.div(&den).unwrap();
    }
    num
}

/// Rank of a dense rational matrix (plain Gaussian elimination).
pub fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in col..ncols {
                    let v = &rows[rank][c] * &f;
                    rows[i][c] = &rows[i][c] - &v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_one() -> BigRational {
    BigRational::one()
}

/// The fourteen bracketings spanning the free Lie algebra on two generators
/// modulo degree 6.
pub const LIE_BASIS: [&str; 14] = [
    "x1",
    "x2",
    "[x1, x2]",
    "[x1, [x1, x2]]",
    "[[x1, x2], x2]",
    "[x1, [x1, [x1, x2]]]",
    "[x1, [[x1, x2], x2]]",
    "[[[x1, x2], x2], x2]",
    "[x1, [x1, [x1, [x1, x2]]]]",
    "[x1, [x1, [[x1, x2], x2]]]",
    "[x1, [[[x1, x2], x2], x2]]",
    "[[x1, [x1, x2]], [x1, x2]]",
    "[[x1, x2], [[x1, x2], x2]]",
    "[[[[x1, x2], x2], x2], x2]",
];

pub fn lie_basis_monomials() -> Vec<Monomial> {
    LIE_BASIS
        .iter()
        .map(|s| parse_element(s).unwrap().terms().next().unwrap().0.clone())
        .collect()
}

/// The displayed images of the degree-5 basis elements under the generic
/// linear endomorphism, with `φ(λ)` written as `t2`.
pub const ALPHA_9_14: [&str; 6] = [
    "-t2*a11^2*a12*(a11*a22 - a12*a21)",
    "t2*a11*(a11*a22 - a12*a21)*(a11*a22 + 2*a12*a21)",
    "-t2*a21*(a11*a22 - a12*a21)*(2*a11*a22 + a12*a21)",
    "-a11*(a11*a22 - a12*a21)*(t2*a12*a21 - a11*a22 + a12*a21)",
    "a21*(a11*a22 - a12*a21)*(-t2*(a12*a21 + a11*a22) + (a11*a22 - a12*a21))",
    "t2*a21^2*a22*(a11*a22 - a12*a21)",
];
