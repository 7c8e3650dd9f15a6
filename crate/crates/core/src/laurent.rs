//! Laurent polynomials in one variable, the numerator type for Hilbert
//! series over the fixed denominator (1-X)^(n+1).

use crate::rat::{rat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Finitely many terms, exponents of either sign, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// c * X^e.
    pub fn monomial(c: i64, e: i64) -> Self {
        Self::monomial_rat(rat(c), e)
    }

    pub fn monomial_rat(c: Rat, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, &c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: i64) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: i64, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// (1 - X)^k for k >= 0.
    pub fn one_minus_x_pow(k: u32) -> LaurentPoly {
        let base = Self::from_terms([(0, rat(1)), (1, rat(-1))]);
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Sum of all coefficients, i.e. the value at X = 1.
    pub fn eval_at_one(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |a, c| a + c)
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c < &Rat::zero();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            use num_traits::One;
            if *e == 0 {
                write!(f, "{}", crate::rat::rat_string(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", crate::rat::rat_string(&abs))?;
                }
                if *e == 1 {
                    write!(f, "X")?;
                } else {
                    write!(f, "X^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        let p = LaurentPoly::from_terms([(-1, rat(4)), (0, rat(-1))]); // 4X^-1 - 1
        assert_eq!(p.coeff(-1), rat(4));
        assert_eq!(p.shift(1).coeff(0), rat(4));
        let q = p.mul(&LaurentPoly::monomial(1, 1));
        assert_eq!(q, p.shift(1));
        assert_eq!(p.eval_at_one(), rat(3));
    }

    #[test]
    fn one_minus_x_powers() {
        let p = LaurentPoly::one_minus_x_pow(2);
        assert_eq!(p.coeff(0), rat(1));
        assert_eq!(p.coeff(1), rat(-2));
        assert_eq!(p.coeff(2), rat(1));
    }
}
