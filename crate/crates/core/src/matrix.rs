//! Exact linear algebra: sparse Gaussian elimination over the rationals
//! or over a word-sized prime field, reduced echelon forms, kernel bases.
//!
//! All graded-piece computations in the crate reduce to ranks and right
//! null spaces of these matrices. The elimination is field-generic so the
//! same code path serves the exact backend and the modular accelerator.

use crate::rat::Rat;
use num_traits::{One, Zero};

/// Field operations used by the eliminator. Implementations must be exact.
pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of an exact rational; `None` if it does not map (modular
    /// denominator hit), in which case the caller must change prime.
    fn from_rat(&self, r: &Rat) -> Option<Self::Elem>;
}

/// The rationals.
pub struct QQ;

impl Field for QQ {
    type Elem = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a.clone()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.recip()
    }
    fn from_rat(&self, r: &Rat) -> Option<Rat> {
        Some(r.clone())
    }
}

/// Prime field of word size, used by the probabilistic dimension backend.
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * b as u128) % self.p as u128) as u64;
            }
            b = ((b as u128 * b as u128) % self.p as u128) as u64;
            e >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        self.pow(*a, self.p - 2)
    }
    fn from_rat(&self, r: &Rat) -> Option<u64> {
        let p = num_bigint::BigInt::from(self.p);
        let num = ((r.numer() % &p) + &p) % &p;
        let den = ((r.denom() % &p) + &p) % &p;
        let num: u64 = num.try_into().ok()?;
        let den: u64 = den.try_into().ok()?;
        if den == 0 {
            return None;
        }
        Some(self.mul(&num, &self.inv(&den)))
    }
}

/// Sparse row: sorted (column, coefficient) pairs, no zero coefficients.
pub type SparseRow<E> = Vec<(u32, E)>;

fn row_axpy<F: Field>(f: &F, a: &SparseRow<F::Elem>, c: &F::Elem, b: &SparseRow<F::Elem>) -> SparseRow<F::Elem> {
    // a - c*b, merging sorted column lists
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = f.neg(&f.mul(c, &b[j].1));
            if !f.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.neg(&f.mul(c, &b[j].1)));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental echelon-form eliminator. Rows are fed one at a time and
/// reduced against the pivot rows accumulated so far; pivot columns are
/// always the leading column of a normalized row, so the final
/// `into_rref` output is the unique reduced row echelon form.
pub struct Eliminator<'f, F: Field> {
    field: &'f F,
    ncols: usize,
    /// pivot column -> row with leading coefficient 1 at that column
    pivots: std::collections::BTreeMap<u32, SparseRow<F::Elem>>,
}

impl<'f, F: Field> Eliminator<'f, F> {
    pub fn new(field: &'f F, ncols: usize) -> Self {
        Eliminator {
            field,
            ncols,
            pivots: std::collections::BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Feed a row; returns the new pivot column if the row was independent.
    pub fn add_row(&mut self, row: SparseRow<F::Elem>) -> Option<u32> {
        let f = self.field;
        let mut row = row;
        // forward reduction on the leading column only; full reduction of
        // trailing entries happens in into_rref
        loop {
            let Some(&(lead, ref c)) = row.first() else {
                return None;
            };
            match self.pivots.get(&lead) {
                Some(pivot_row) => {
                    let c = c.clone();
                    row = row_axpy(f, &row, &c, pivot_row);
                }
                None => {
                    let inv = f.inv(c);
                    let normalized: SparseRow<F::Elem> = row
                        .iter()
                        .map(|(j, v)| (*j, f.mul(v, &inv)))
                        .collect();
                    self.pivots.insert(lead, normalized);
                    return Some(lead);
                }
            }
        }
    }

    /// Back-substitute so every pivot row is zero on all other pivot
    /// columns, yielding the canonical reduced row echelon form as a map
    /// pivot column -> row.
    pub fn into_rref(mut self) -> std::collections::BTreeMap<u32, SparseRow<F::Elem>> {
        let f = self.field;
        let cols: Vec<u32> = self.pivots.keys().copied().collect();
        // eliminate from the last pivot upward
        for idx in (0..cols.len()).rev() {
            let pc = cols[idx];
            let pivot_row = self.pivots.get(&pc).unwrap().clone();
            for earlier in &cols[..idx] {
                let row = self.pivots.get_mut(earlier).unwrap();
                if let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) {
                    let c = row[pos].1.clone();
                    *row = row_axpy(f, row, &c, &pivot_row);
                }
            }
        }
        self.pivots
    }
}

/// Rank of a sparse matrix given as rows.
pub fn sparse_rank<F: Field>(field: &F, ncols: usize, rows: Vec<SparseRow<F::Elem>>) -> usize {
    let mut elim = Eliminator::new(field, ncols);
    for row in rows {
        elim.add_row(row);
    }
    elim.rank()
}

/// Canonical basis of the right null space of a sparse matrix: one vector
/// per free column, entry 1 at the free column, pivot entries filled from
/// the reduced echelon form. Vectors are ordered by free column, which is
/// the deterministic ordering used everywhere downstream.
pub fn sparse_kernel_basis(ncols: usize, rows: Vec<SparseRow<Rat>>) -> Vec<Vec<Rat>> {
    let field = QQ;
    let mut elim = Eliminator::new(&field, ncols);
    for row in rows {
        elim.add_row(row);
    }
    let rref = elim.into_rref();
    let pivot_cols: Vec<u32> = rref.keys().copied().collect();
    let is_pivot: std::collections::BTreeSet<u32> = pivot_cols.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols as u32 {
        if is_pivot.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free as usize] = Rat::one();
        for (&pc, row) in &rref {
            if let Ok(pos) = row.binary_search_by_key(&free, |e| e.0) {
                v[pc as usize] = -row[pos].1.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn sparse_rows(&self) -> Vec<SparseRow<Rat>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j as u32, v.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        sparse_rank(&QQ, self.cols, self.sparse_rows())
    }

    /// Basis of the right null space in reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        sparse_kernel_basis(self.cols, self.sparse_rows())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let field = QQ;
        let mut elim = Eliminator::new(&field, 2 * n);
        for i in 0..n {
            let mut row: SparseRow<Rat> = self
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j as u32, v.clone()))
                .collect();
            row.push(((n + i) as u32, Rat::one()));
            elim.add_row(row);
        }
        if elim.rank() != n {
            return None;
        }
        let rref = elim.into_rref();
        let mut out = RatMatrix::zero(n, n);
        for (&pc, row) in &rref {
            // with full rank the pivot columns are exactly 0..n
            if pc as usize >= n {
                return None;
            }
            for (j, v) in row {
                if *j as usize >= n {
                    out[(pc as usize, *j as usize - n)] = v.clone();
                }
            }
        }
        Some(out)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Deterministic word-sized prime for the modular backend, drawn from a
/// seeded generator so reports are reproducible.
pub fn modular_prime(seed: u64) -> u64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let candidate: u64 = rng.gen_range((1u64 << 31)..(1u64 << 32)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for u64
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let f = Fp::new(n);
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = f.mul(&x, &x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn m(rows: Vec<Vec<i64>>) -> RatMatrix {
        RatMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_of_proportional_rows() {
        let k = m(vec![vec![1, 1], vec![2, 2]]).kernel_basis();
        assert_eq!(k, vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(RatMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_map_is_full() {
        let k = m(vec![vec![0, 0, 0], vec![0, 0, 0]]).kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            let mut e = vec![rat(0); 3];
            e[i] = rat(1);
            assert_eq!(*v, e);
        }
    }

    #[test]
    fn kernel_vectors_are_exact_solutions() {
        let a = m(vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]);
        let k = a.kernel_basis();
        assert_eq!(a.rank() + k.len(), a.cols());
        for v in &k {
            assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(vec![vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let inv = a.inverse().unwrap();
        let mut prod = RatMatrix::zero(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = rat(0);
                for k in 0..3 {
                    s += &a[(i, k)] * &inv[(k, j)];
                }
                prod[(i, j)] = s;
            }
        }
        assert_eq!(prod, RatMatrix::identity(3));
        assert!(m(vec![vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    #[test]
    fn modular_rank_matches_exact_on_random_small_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = modular_prime(0);
        let f = Fp::new(p);
        for _ in 0..40 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let a = m((0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-4..5)).collect())
                .collect());
            let sparse_q = a.sparse_rows();
            let sparse_p: Vec<SparseRow<u64>> = sparse_q
                .iter()
                .map(|r| {
                    r.iter()
                        .filter_map(|(j, v)| f.from_rat(v).map(|x| (*j, x)))
                        .filter(|(_, x)| *x != 0)
                        .collect()
                })
                .collect();
            assert_eq!(a.rank(), sparse_rank(&f, cols, sparse_p));
        }
    }

    #[test]
    fn modular_prime_is_prime_and_deterministic() {
        let p = modular_prime(42);
        assert!(is_prime_u64(p));
        assert_eq!(p, modular_prime(42));
    }
}
