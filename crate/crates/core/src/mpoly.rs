//! Sparse multivariate polynomials over the rationals with a canonical
//! graded-lexicographic term order.

use crate::rat::{dim_homogeneous, Rat};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exponent vector with graded-lexicographic ordering: higher total
/// degree first, ties broken lexicographically with earlier variables
/// dominating. This is the term order behind every deterministic
/// reduction in the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
            .reverse()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `n_vars` variables, in the
/// canonical term order.
pub fn monomials_of_degree(n_vars: usize, d: u32) -> Vec<Monomial> {
    fn rec(n_vars: usize, d: u32, idx: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == n_vars - 1 {
            cur.push(d);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=d).rev() {
            cur.push(e);
            rec(n_vars, d - e, idx + 1, cur, out);
            cur.pop();
        }
    }
    if n_vars == 0 {
        return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::with_capacity(dim_homogeneous(n_vars, d as i64));
    rec(n_vars, d, 0, &mut Vec::new(), &mut out);
    out
}

/// Sparse multivariate polynomial. No zero coefficients are stored and
/// all exponent vectors have length `n_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero(n_vars: usize) -> Self {
        MPoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rat::one())
    }

    pub fn constant(n_vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(n_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n_vars), c);
        }
        p
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut p = Self::zero(n_vars);
        p.terms.insert(Monomial::var(n_vars, i), Rat::one());
        p
    }

    /// Linear form with the given coefficient vector.
    pub fn linear(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(n, i), c.clone());
            }
        }
        p
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(n_vars);
        for (m, c) in terms {
            p.add_term(&m, &c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: &Monomial, c: &Rat) {
        debug_assert_eq!(m.0.len(), self.n_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m.clone()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        MPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = Self::zero(self.n_vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(&m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> MPoly {
        let mut out = Self::zero(self.n_vars);
        for (m1, c1) in &self.terms {
            out.add_term(&m1.mul(m), &(c1 * c));
        }
        out
    }

    pub fn partial(&self, i: usize) -> MPoly {
        let mut out = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] = e - 1;
                out.add_term(&m2, &(c * crate::rat::rat(e as i64)));
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Common degree of all terms; `None` if inhomogeneous or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Substitute each variable by a linear form (rows of `subs`), for
    /// coordinate changes and reductions modulo a hyperplane.
    pub fn substitute_linear(&self, subs: &[MPoly]) -> MPoly {
        assert_eq!(subs.len(), self.n_vars);
        let out_vars = subs.first().map_or(self.n_vars, |p| p.n_vars);
        let mut out = MPoly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&subs[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.n_vars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.n_vars);
        let (dm, dc) = divisor.terms.first_key_value()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        while !rem.is_zero() {
            let (rm, rc) = rem.terms.first_key_value().unwrap();
            let mut qe = Vec::with_capacity(self.n_vars);
            for (a, b) in rm.0.iter().zip(&dm.0) {
                if a < b {
                    return None;
                }
                qe.push(a - b);
            }
            let qm = Monomial(qe);
            let qc = rc / &dc;
            quot.add_term(&qm, &qc);
            rem = rem.sub(&divisor.mul_monomial(&qm, &qc));
        }
        Some(quot)
    }
}

impl std::fmt::Display for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
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
            let is_const = m.degree() == 0;
            if !abs.is_one() || is_const {
                write!(f, "{}", crate::rat::rat_string(&abs))?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut firstv = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !firstv {
                    write!(f, "*")?;
                }
                firstv = false;
                if e == 1 {
                    write!(f, "x{}", i)?;
                } else {
                    write!(f, "x{}^{}", i, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Indexed basis of the degree-`d` slice of the polynomial ring, mapping
/// monomials to contiguous column indices.
pub struct MonomialBasis {
    pub degree: u32,
    pub list: Vec<Monomial>,
    index: std::collections::HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(n_vars: usize, degree: u32) -> Self {
        let list = monomials_of_degree(n_vars, degree);
        let index = list
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            degree,
            list,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> usize {
        self.index[m]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn grlex_order_is_canonical() {
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0].0, vec![2, 0, 0]);
        assert_eq!(ms[5].0, vec![0, 0, 2]);
        assert!(Monomial(vec![2, 0]) < Monomial(vec![1, 1]));
        assert!(Monomial(vec![1, 1]) < Monomial(vec![0, 1]));
    }

    #[test]
    fn product_of_linear_forms() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let q = x.mul(&y).mul(&x.add(&y));
        // xy(x+y) = x^2 y + x y^2
        assert_eq!(q.coeff(&Monomial(vec![2, 1])), rat(1));
        assert_eq!(q.coeff(&Monomial(vec![1, 2])), rat(1));
        assert_eq!(q.homogeneous_degree(), Some(3));
    }

    #[test]
    fn partial_derivative() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let q = x.mul(&x).mul(&y); // x^2 y
        assert_eq!(q.partial(0), x.mul(&y).scale(&rat(2)));
        assert_eq!(q.partial(1), x.mul(&x));
    }

    #[test]
    fn exact_division() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let q = x.mul(&y).mul(&x.add(&y));
        assert_eq!(q.div_exact(&x.mul(&y)).unwrap(), x.add(&y));
        assert!(q.div_exact(&x.sub(&y)).is_none());
    }

    #[test]
    fn substitution_is_a_ring_map() {
        // p(x, y) = x^2 + y, substitute x -> u + v, y -> v
        let p = MPoly::var(2, 0).mul(&MPoly::var(2, 0)).add(&MPoly::var(2, 1));
        let u_plus_v = MPoly::var(2, 0).add(&MPoly::var(2, 1));
        let v = MPoly::var(2, 1);
        let q = p.substitute_linear(&[u_plus_v, v]);
        // (u+v)^2 + v
        assert_eq!(q.coeff(&Monomial(vec![2, 0])), rat(1));
        assert_eq!(q.coeff(&Monomial(vec![1, 1])), rat(2));
        assert_eq!(q.coeff(&Monomial(vec![0, 2])), rat(1));
        assert_eq!(q.coeff(&Monomial(vec![0, 1])), rat(1));
    }

    #[test]
    fn basis_indexing_roundtrip() {
        let b = MonomialBasis::new(4, 3);
        assert_eq!(b.len(), 20);
        for (i, m) in b.list.iter().enumerate() {
            assert_eq!(b.index_of(m), i);
        }
    }
}
