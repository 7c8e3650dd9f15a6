//! Laurent series in the local variable u = X - 1 with coefficients in a
//! truncated polynomial ring in t. This is the carrier for every
//! limit-at-one evaluation: a rational function N(X)/(1-X)^k expands into
//! finitely many negative u-orders plus a truncated regular tail.

use crate::laurent::LaurentPoly;
use crate::rat::{gen_binomial, Rat};
use crate::trunc::TruncPoly;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Truncated Laurent series in u. Orders above `trunc_order` are unknown
/// and dropped; orders below `min_order` are identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct USeries {
    t_modulus: usize,
    trunc_order: i64,
    coeffs: BTreeMap<i64, TruncPoly>,
}

impl USeries {
    pub fn zero(t_modulus: usize, trunc_order: i64) -> Self {
        USeries {
            t_modulus,
            trunc_order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn t_modulus(&self) -> usize {
        self.t_modulus
    }

    pub fn trunc_order(&self) -> i64 {
        self.trunc_order
    }

    pub fn min_order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_order(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, order: i64) -> TruncPoly {
        self.coeffs
            .get(&order)
            .cloned()
            .unwrap_or_else(|| TruncPoly::zero(self.t_modulus))
    }

    pub fn orders(&self) -> impl Iterator<Item = (&i64, &TruncPoly)> {
        self.coeffs.iter()
    }

    pub fn add_coeff(&mut self, order: i64, c: &TruncPoly) {
        if order > self.trunc_order || c.is_zero() {
            return;
        }
        let entry = self
            .coeffs
            .entry(order)
            .or_insert_with(|| TruncPoly::zero(self.t_modulus));
        *entry = entry.add(c);
        if entry.is_zero() {
            self.coeffs.remove(&order);
        }
    }

    pub fn add(&self, other: &USeries) -> USeries {
        let mut out = self.clone();
        out.trunc_order = self.trunc_order.min(other.trunc_order);
        out.coeffs.retain(|k, _| *k <= out.trunc_order);
        for (o, c) in &other.coeffs {
            out.add_coeff(*o, c);
        }
        out
    }

    pub fn scale_trunc(&self, c: &TruncPoly) -> USeries {
        let mut out = USeries::zero(self.t_modulus, self.trunc_order);
        for (o, v) in &self.coeffs {
            out.add_coeff(*o, &v.mul(c));
        }
        out
    }

    /// Multiply by u^k.
    pub fn shift(&self, k: i64) -> USeries {
        USeries {
            t_modulus: self.t_modulus,
            trunc_order: self.trunc_order + k,
            coeffs: self.coeffs.iter().map(|(o, c)| (o + k, c.clone())).collect(),
        }
    }

    /// Full series product; the truncation order of the result is the
    /// tightest one supported by both factors.
    pub fn mul(&self, other: &USeries) -> USeries {
        let a_min = self.min_order().unwrap_or(0);
        let b_min = other.min_order().unwrap_or(0);
        let trunc = (self.trunc_order + b_min).min(other.trunc_order + a_min);
        let mut out = USeries::zero(self.t_modulus, trunc);
        for (o1, c1) in &self.coeffs {
            for (o2, c2) in &other.coeffs {
                out.add_coeff(o1 + o2, &c1.mul(c2));
            }
        }
        out
    }

    /// The strictly negative u-orders, i.e. the obstruction to a finite
    /// limit at X = 1.
    pub fn principal_part(&self) -> Vec<(i64, TruncPoly)> {
        self.coeffs
            .iter()
            .filter(|(o, _)| **o < 0)
            .map(|(o, c)| (*o, c.clone()))
            .collect()
    }
}

/// Expand num(X) / (1-X)^denom_power around X = 1: substitute X = 1 + u,
/// divide by (-u)^denom_power, and keep u-orders up to `order_cap`.
/// Negative exponents of X expand through the generalized binomial
/// series, so the result is exact to the stated truncation order.
pub fn expand_at_one(
    num: &LaurentPoly,
    denom_power: u32,
    t_modulus: usize,
    order_cap: i64,
) -> USeries {
    let dp = denom_power as i64;
    let mut out = USeries::zero(t_modulus, order_cap);
    // sign of 1/(-u)^dp
    let sign = if denom_power % 2 == 0 {
        Rat::from_integer(1.into())
    } else {
        Rat::from_integer((-1).into())
    };
    // coefficient of u^o needs the u^(o+dp) coefficient of num(1+u)
    for (e, c) in num.terms() {
        // (1+u)^e = sum_j C(e, j) u^j
        let max_j = order_cap + dp;
        let mut j: i64 = 0;
        while j <= max_j {
            if *e >= 0 && j > *e {
                break;
            }
            let b = gen_binomial(*e, j as u64);
            if !b.is_zero() {
                let coeff = &b * c * &sign;
                out.add_coeff(j - dp, &TruncPoly::constant(t_modulus, coeff));
            }
            j += 1;
        }
    }
    out
}

/// Reverse of `expand_at_one` for series known to be finite polynomials
/// in u: multiply back by (-u)^denom_power and substitute u = X - 1.
/// Only the constant (t-degree zero) part of each coefficient is used.
pub fn back_substitute(series: &USeries, denom_power: u32) -> LaurentPoly {
    let dp = denom_power as i64;
    let mut out = LaurentPoly::zero();
    let sign = if denom_power % 2 == 0 { 1 } else { -1 };
    for (o, c) in series.orders() {
        let k = o + dp;
        assert!(k >= 0, "principal part survives back substitution");
        // (X-1)^k
        let mut pow = LaurentPoly::one();
        let xm1 = LaurentPoly::from_terms([(1, crate::rat::rat(1)), (0, crate::rat::rat(-1))]);
        for _ in 0..k {
            pow = pow.mul(&xm1);
        }
        out = out.add(&pow.scale(&(c.coeff(0) * crate::rat::rat(sign))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn geometric_pole() {
        // 1/(1-X) = -u^{-1}
        let s = expand_at_one(&LaurentPoly::one(), 1, 2, 3);
        assert_eq!(s.coeff(-1), TruncPoly::from_ints(2, &[-1]));
        assert_eq!(s.min_order(), Some(-1));
        assert_eq!(s.max_order(), Some(-1));
    }

    #[test]
    fn x_over_one_minus_x_squared() {
        // X/(1-X)^2 = (1+u)/u^2 = u^{-2} + u^{-1}
        let s = expand_at_one(&LaurentPoly::monomial(1, 1), 2, 2, 3);
        assert_eq!(s.coeff(-2), TruncPoly::from_ints(2, &[1]));
        assert_eq!(s.coeff(-1), TruncPoly::from_ints(2, &[1]));
        assert!(s.coeff(0).is_zero());
    }

    #[test]
    fn edelman_reiner_numerator_leading_order() {
        // (X + 4X^5 - X^6)/(1-X)^4: constant term of num(1+u) is 1+4-1 = 4
        let num = LaurentPoly::from_terms([(1, rat(1)), (5, rat(4)), (6, rat(-1))]);
        let s = expand_at_one(&num, 4, 4, 2);
        assert_eq!(s.min_order(), Some(-4));
        assert_eq!(s.coeff(-4), TruncPoly::from_ints(4, &[4]));
        // u^{-3}: derivative coefficients 1 + 20 - 6 = 15
        assert_eq!(s.coeff(-3), TruncPoly::from_ints(4, &[15]));
    }

    #[test]
    fn negative_exponent_expansion() {
        // X^{-1}/(1-X) = -(u^{-1} - 1 + u - u^2 + ...)
        let s = expand_at_one(&LaurentPoly::monomial(1, -1), 1, 2, 2);
        assert_eq!(s.coeff(-1), TruncPoly::from_ints(2, &[-1]));
        assert_eq!(s.coeff(0), TruncPoly::from_ints(2, &[1]));
        assert_eq!(s.coeff(1), TruncPoly::from_ints(2, &[-1]));
        assert_eq!(s.coeff(2), TruncPoly::from_ints(2, &[1]));
    }

    #[test]
    fn round_trip_recovers_numerator() {
        let num = LaurentPoly::from_terms([(0, rat(2)), (3, rat(-5)), (7, rat(1))]);
        for dp in 0..4u32 {
            let s = expand_at_one(&num, dp, 1, 8);
            assert_eq!(back_substitute(&s, dp), num);
        }
    }
}
