//! Exact rational scalars and small combinatorial helpers.
//!
//! The coefficient field everywhere is the rationals, realized as
//! [`num_rational::BigRational`]: always in lowest terms with positive
//! denominator, which is exactly the canonical form the rest of the
//! crate relies on for hashing and deduplication.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, the scalar type of the crate.
pub type Rat = num_rational::BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact binomial coefficient C(n, k) for nonnegative integers.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Generalized binomial coefficient C(a, k) = a(a-1)...(a-k+1)/k! for
/// integer a of either sign, as used in Taylor expansions of (1+u)^a.
pub fn gen_binomial(a: i64, k: u64) -> Rat {
    let mut num = Rat::one();
    for i in 0..k {
        num *= rat(a - i as i64);
        num /= rat(i as i64 + 1);
    }
    num
}

/// Dimension of the space of degree-`m` homogeneous polynomials in
/// `n_vars` variables: C(m + n_vars - 1, n_vars - 1). Zero for m < 0.
pub fn dim_homogeneous(n_vars: usize, m: i64) -> usize {
    if m < 0 || n_vars == 0 {
        return if n_vars == 0 && m == 0 { 1 } else { 0 };
    }
    let b = binomial(m as u64 + n_vars as u64 - 1, n_vars as u64 - 1);
    b.try_into().expect("homogeneous dimension overflows usize")
}

/// Format a rational as "p" or "p/q" for report output.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact conversion to i64 when the rational is an integer in range.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if !r.denom().is_one() {
        return None;
    }
    r.numer().try_into().ok()
}

/// True when the rational is a (possibly negative) integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Sign-and-content normalization of an integer vector: divide by the gcd
/// and flip signs so the first nonzero entry is positive. Returns `None`
/// for the zero vector.
pub fn primitive_vector(v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    for x in v {
        g = num_integer::gcd(g, x.abs());
    }
    if g.is_zero() {
        return None;
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
    let first = out.iter().find(|x| !x.is_zero()).unwrap();
    if first.is_negative() {
        for x in &mut out {
            *x = -x.clone();
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(10, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }

    #[test]
    fn gen_binomial_negative_argument() {
        // C(-1, k) = (-1)^k, the geometric series coefficients.
        for k in 0..6 {
            assert_eq!(gen_binomial(-1, k), rat(if k % 2 == 0 { 1 } else { -1 }));
        }
        // C(-4, 2) = (-4)(-5)/2 = 10.
        assert_eq!(gen_binomial(-4, 2), rat(10));
    }

    #[test]
    fn homogeneous_dimension() {
        assert_eq!(dim_homogeneous(2, 3), 4);
        assert_eq!(dim_homogeneous(4, 0), 1);
        assert_eq!(dim_homogeneous(3, -1), 0);
        assert_eq!(dim_homogeneous(4, 5), 56);
    }

    #[test]
    fn primitive_vector_normalizes_sign_and_content() {
        let v = vec![BigInt::from(-2), BigInt::from(4), BigInt::from(-6)];
        let p = primitive_vector(&v).unwrap();
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(3)]);
        assert!(primitive_vector(&[BigInt::zero()]).is_none());
    }
}
