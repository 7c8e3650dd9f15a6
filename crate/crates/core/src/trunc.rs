//! Truncated polynomial ring Z[t]/(t^m) with rational coefficients, the
//! arithmetic home of Chern polynomials.

use crate::rat::{rat, Rat};
use num_traits::{One, Zero};

/// Element of k[t]/(t^modulus): exactly `modulus` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPoly {
    modulus: usize,
    coeffs: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TruncError {
    /// Inversion of an element with zero constant term.
    NotAUnit,
}

impl std::fmt::Display for TruncError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TruncError::NotAUnit => write!(f, "not a unit: zero constant term"),
        }
    }
}

impl std::error::Error for TruncError {}

impl TruncPoly {
    pub fn zero(modulus: usize) -> Self {
        assert!(modulus > 0, "modulus exponent must be positive");
        TruncPoly {
            modulus,
            coeffs: vec![Rat::zero(); modulus],
        }
    }

    pub fn one(modulus: usize) -> Self {
        Self::constant(modulus, Rat::one())
    }

    pub fn constant(modulus: usize, c: Rat) -> Self {
        let mut p = Self::zero(modulus);
        p.coeffs[0] = c;
        p
    }

    /// c * t^k; zero when k falls outside the ring.
    pub fn monomial(modulus: usize, c: Rat, k: usize) -> Self {
        let mut p = Self::zero(modulus);
        if k < modulus {
            p.coeffs[k] = c;
        }
        p
    }

    pub fn from_coeffs(modulus: usize, coeffs: &[Rat]) -> Self {
        let mut p = Self::zero(modulus);
        for (k, c) in coeffs.iter().take(modulus).enumerate() {
            p.coeffs[k] = c.clone();
        }
        p
    }

    pub fn from_ints(modulus: usize, coeffs: &[i64]) -> Self {
        let v: Vec<Rat> = coeffs.iter().map(|&c| rat(c)).collect();
        Self::from_coeffs(modulus, &v)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &TruncPoly) {
        assert_eq!(self.modulus, other.modulus, "mixed truncation moduli");
    }

    pub fn add(&self, other: &TruncPoly) -> TruncPoly {
        self.check(other);
        TruncPoly {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> TruncPoly {
        TruncPoly {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn sub(&self, other: &TruncPoly) -> TruncPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> TruncPoly {
        TruncPoly {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &TruncPoly) -> TruncPoly {
        self.check(other);
        let mut out = Self::zero(self.modulus);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= self.modulus {
                    break;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> TruncPoly {
        let mut acc = Self::one(self.modulus);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<TruncPoly, TruncError> {
        if self.coeffs[0].is_zero() {
            return Err(TruncError::NotAUnit);
        }
        let c0_inv = self.coeffs[0].recip();
        let mut out = Self::zero(self.modulus);
        out.coeffs[0] = c0_inv.clone();
        for k in 1..self.modulus {
            let mut s = Rat::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &out.coeffs[k - i];
            }
            out.coeffs[k] = -s * &c0_inv;
        }
        Ok(out)
    }

    /// Substitute t -> -t.
    pub fn flip_sign(&self) -> TruncPoly {
        TruncPoly {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// View as a plain polynomial (degree < modulus).
    pub fn to_upoly(&self) -> crate::upoly::UPoly {
        crate::upoly::UPoly::from_coeffs(self.coeffs.clone())
    }
}

impl std::fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_upoly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_of_one_plus_six_t() {
        let p = TruncPoly::from_ints(4, &[1, 6]);
        let q = p.invert().unwrap();
        assert_eq!(q, TruncPoly::from_ints(4, &[1, -6, 36, -216]));
        assert_eq!(p.mul(&q), TruncPoly::one(4));
    }

    #[test]
    fn inversion_of_identity() {
        for k in 1..6 {
            assert_eq!(TruncPoly::one(k).invert().unwrap(), TruncPoly::one(k));
        }
    }

    #[test]
    fn edelman_reiner_division_by_one_plus_t() {
        let pi = TruncPoly::from_ints(5, &[1, 15, 80, 170, 104]);
        let inv = TruncPoly::from_ints(5, &[1, 1]).invert().unwrap();
        let q = pi.mul(&inv);
        assert_eq!(q, TruncPoly::from_ints(5, &[1, 14, 66, 104, 0]));
    }

    #[test]
    fn zero_constant_term_is_not_a_unit() {
        let p = TruncPoly::from_ints(3, &[0, 1]);
        assert_eq!(p.invert(), Err(TruncError::NotAUnit));
    }

    #[test]
    fn sign_flip_is_an_involution() {
        let p = TruncPoly::from_ints(4, &[1, -14, 66, -104]);
        assert_eq!(p.flip_sign(), TruncPoly::from_ints(4, &[1, 14, 66, 104]));
        assert_eq!(p.flip_sign().flip_sign(), p);
    }
}
