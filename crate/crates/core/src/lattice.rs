//! The intersection lattice of a central arrangement: canonical-form
//! elements, rank and order structure, the Möbius function, Poincaré and
//! characteristic polynomials, localization and essentialization.
//!
//! A lattice element is identified by the set of hyperplanes containing
//! it; its subspace is determined by the reduced echelon basis of the
//! spanned linear forms, and two elements are comparable exactly when the
//! member sets are nested. Member sets are kept as bitmasks, which bounds
//! the number of hyperplanes at 128 - far beyond anything the exact
//! linear algebra downstream can absorb.

use crate::arrangement::{Arrangement, ArrangementError};
use crate::matrix::{Eliminator, RatMatrix, SparseRow, QQ};
use crate::rat::{rat, Rat};
use crate::upoly::UPoly;
use num_traits::{One, Zero};

/// An element of the intersection lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeElement {
    /// Hyperplane indices whose forms vanish on the subspace.
    members: u128,
    /// Codimension of the subspace.
    rank: usize,
    /// Reduced echelon basis of the span of the defining forms.
    basis: Vec<Vec<Rat>>,
}

impl LatticeElement {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn member_indices(&self) -> Vec<usize> {
        (0..128).filter(|i| self.members >> i & 1 == 1).collect()
    }

    pub fn contains_hyperplane(&self, i: usize) -> bool {
        self.members >> i & 1 == 1
    }

    pub fn num_members(&self) -> usize {
        self.members.count_ones() as usize
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    fn key(&self) -> u128 {
        self.members
    }
}

/// The full intersection lattice with Möbius values.
#[derive(Clone, Debug)]
pub struct Lattice {
    n_vars: usize,
    /// Elements sorted by (rank, member bitmask); index 0 is the bottom.
    elements: Vec<LatticeElement>,
    mobius: Vec<i64>,
}

impl Lattice {
    pub fn elements(&self) -> &[LatticeElement] {
        &self.elements
    }

    pub fn mobius(&self, idx: usize) -> i64 {
        self.mobius[idx]
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn bottom(&self) -> &LatticeElement {
        &self.elements[0]
    }

    pub fn max_rank(&self) -> usize {
        self.elements.iter().map(|e| e.rank).max().unwrap_or(0)
    }

    /// Indices of elements of the given rank.
    pub fn rank_elements(&self, rank: usize) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&i| self.elements[i].rank == rank)
            .collect()
    }

    /// Number of elements per rank, bottom to top.
    pub fn rank_census(&self) -> Vec<usize> {
        let mut census = vec![0; self.max_rank() + 1];
        for e in &self.elements {
            census[e.rank] += 1;
        }
        census
    }

    /// Order relation: x <= y when span(x) is contained in span(y),
    /// equivalently when the member sets are nested.
    pub fn le(&self, x: usize, y: usize) -> bool {
        let (a, b) = (self.elements[x].members, self.elements[y].members);
        a & b == a
    }

    /// Multiset of Möbius values at the given rank, sorted descending.
    pub fn mu_multiset(&self, rank: usize) -> Vec<i64> {
        let mut mus: Vec<i64> = self
            .rank_elements(rank)
            .into_iter()
            .map(|i| self.mobius[i])
            .collect();
        mus.sort_unstable_by(|a, b| b.cmp(a));
        mus
    }

    /// Element index by member set, if present.
    pub fn find(&self, element: &LatticeElement) -> Option<usize> {
        self.elements.iter().position(|e| e.members == element.key())
    }

    /// The closed interval [bottom, top_idx] as (rank, mobius) pairs,
    /// used to compare localized lattices against intervals.
    pub fn interval_profile(&self, top_idx: usize) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = (0..self.elements.len())
            .filter(|&i| self.le(i, top_idx))
            .map(|i| (self.elements[i].rank, self.mobius[i]))
            .collect();
        out.sort_unstable();
        out
    }
}

fn echelon_basis(n_vars: usize, rows: impl IntoIterator<Item = Vec<Rat>>) -> Vec<Vec<Rat>> {
    let field = QQ;
    let mut elim = Eliminator::new(&field, n_vars);
    for row in rows {
        let sparse: SparseRow<Rat> = row
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u32, c))
            .collect();
        elim.add_row(sparse);
    }
    elim.into_rref()
        .into_values()
        .map(|row| {
            let mut dense = vec![Rat::zero(); n_vars];
            for (j, c) in row {
                dense[j as usize] = c;
            }
            dense
        })
        .collect()
}

/// Does `form` lie in the row span of the reduced echelon basis?
fn in_span(basis: &[Vec<Rat>], form: &[Rat]) -> bool {
    let mut residue = form.to_vec();
    for row in basis {
        let lead = row.iter().position(|c| !c.is_zero()).expect("echelon row");
        let c = residue[lead].clone();
        if !c.is_zero() {
            for (r, b) in residue.iter_mut().zip(row) {
                *r -= &c * b;
            }
        }
    }
    residue.iter().all(|c| c.is_zero())
}

/// Compute the full intersection lattice by iterated closure: start from
/// the ambient space and keep intersecting with hyperplanes, identifying
/// elements by their member sets.
pub fn intersection_lattice(a: &Arrangement) -> Lattice {
    assert!(
        a.num_hyperplanes() <= 128,
        "member bitmask carrier limits arrangements to 128 hyperplanes"
    );
    let n_vars = a.n_vars();
    let d = a.num_hyperplanes();
    let forms: Vec<Vec<Rat>> = (0..d).map(|i| a.form_rat(i)).collect();

    let mut seen = std::collections::HashMap::<u128, LatticeElement>::new();
    let bottom = LatticeElement {
        members: 0,
        rank: 0,
        basis: Vec::new(),
    };
    let mut queue = vec![bottom.clone()];
    seen.insert(0, bottom);

    while let Some(x) = queue.pop() {
        for i in 0..d {
            if x.contains_hyperplane(i) {
                continue;
            }
            let rows = x.basis.iter().cloned().chain([forms[i].clone()]);
            let basis = echelon_basis(n_vars, rows);
            let rank = basis.len();
            debug_assert_eq!(rank, x.rank + 1);
            let mut members = 0u128;
            for (j, f) in forms.iter().enumerate() {
                if in_span(&basis, f) {
                    members |= 1 << j;
                }
            }
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(members) {
                let elem = LatticeElement {
                    members,
                    rank,
                    basis,
                };
                e.insert(elem.clone());
                queue.push(elem);
            }
        }
    }

    let mut elements: Vec<LatticeElement> = seen.into_values().collect();
    elements.sort_by_key(|e| (e.rank, e.members));

    // Möbius recursion by increasing rank: mu(bottom) = 1,
    // mu(t) = -sum over s < t of mu(s).
    let mut mobius = vec![0i64; elements.len()];
    for i in 0..elements.len() {
        if elements[i].rank == 0 {
            mobius[i] = 1;
            continue;
        }
        let mut s = 0i64;
        for j in 0..elements.len() {
            if j != i && elements[j].members & elements[i].members == elements[j].members {
                s += mobius[j];
            }
        }
        mobius[i] = -s;
    }

    Lattice {
        n_vars,
        elements,
        mobius,
    }
}

/// Poincaré polynomial: sum of mu(X) (-t)^rank(X).
pub fn poincare_poly(lattice: &Lattice) -> UPoly {
    let mut coeffs = vec![Rat::zero(); lattice.max_rank() + 1];
    for (i, e) in lattice.elements().iter().enumerate() {
        let sign = if e.rank % 2 == 0 { 1 } else { -1 };
        coeffs[e.rank] += rat(sign * lattice.mobius(i));
    }
    UPoly::from_coeffs(coeffs)
}

/// Characteristic polynomial: sum of mu(X) t^dim(X).
pub fn characteristic_poly(lattice: &Lattice) -> UPoly {
    let n_vars = lattice.n_vars();
    let mut coeffs = vec![Rat::zero(); n_vars + 1];
    for (i, e) in lattice.elements().iter().enumerate() {
        coeffs[n_vars - e.rank] += rat(lattice.mobius(i));
    }
    UPoly::from_coeffs(coeffs)
}

/// A localized subarrangement together with the indices of its
/// hyperplanes inside the parent arrangement.
#[derive(Clone, Debug)]
pub struct Localization {
    pub arrangement: Arrangement,
    pub hyperplane_indices: Vec<usize>,
}

/// The subarrangement of hyperplanes containing the lattice element.
pub fn localize(a: &Arrangement, x: &LatticeElement) -> Localization {
    let hyperplane_indices = x.member_indices();
    let forms: Vec<Vec<i64>> = hyperplane_indices
        .iter()
        .map(|&i| a.forms()[i].clone())
        .collect();
    let arrangement = Arrangement::from_integer_forms(a.n_vars(), forms)
        .expect("localization of a valid arrangement is valid");
    Localization {
        arrangement,
        hyperplane_indices,
    }
}

/// An essentialization: the induced essential arrangement in rank many
/// variables, the dimension of the split-off empty factor, and the
/// invertible change of coordinates that realized it.
#[derive(Clone, Debug)]
pub struct Essentialization {
    pub arrangement: Arrangement,
    pub empty_factor_dim: usize,
    /// Row i is the image of the old i-th coordinate form basis; forms
    /// transform by right multiplication.
    pub transform: RatMatrix,
}

/// Apply an invertible change of coordinates so that all forms involve
/// only the first rank-many variables, and restrict to those.
pub fn essentialize(a: &Arrangement) -> Result<Essentialization, ArrangementError> {
    let n_vars = a.n_vars();
    let all_forms: Vec<Vec<Rat>> = (0..a.num_hyperplanes()).map(|i| a.form_rat(i)).collect();
    let basis = echelon_basis(n_vars, all_forms.clone());
    let r = basis.len();

    // complete the echelon basis to a square invertible matrix with unit
    // rows at the non-pivot columns
    let pivots: Vec<usize> = basis
        .iter()
        .map(|row| row.iter().position(|c| !c.is_zero()).unwrap())
        .collect();
    let mut square: Vec<Vec<Rat>> = basis.clone();
    for j in 0..n_vars {
        if !pivots.contains(&j) {
            let mut e = vec![Rat::zero(); n_vars];
            e[j] = Rat::one();
            square.push(e);
        }
    }
    let m = RatMatrix::from_rows(square);
    let t = m.inverse().expect("completed basis is invertible");

    // each form becomes form * T, supported on the first r coordinates
    let mut new_forms: Vec<Vec<Rat>> = Vec::with_capacity(a.num_hyperplanes());
    for form in &all_forms {
        let mut image = vec![Rat::zero(); n_vars];
        for (i, c) in form.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..n_vars {
                image[j] += c * &t[(i, j)];
            }
        }
        debug_assert!(image[r..].iter().all(|c| c.is_zero()));
        image.truncate(r);
        new_forms.push(image);
    }
    let mut arrangement = Arrangement::new(r, new_forms)?;
    if let Some(name) = a.name() {
        arrangement = arrangement.with_name(format!("{}'", name));
    }
    debug_assert!(arrangement.is_essential());
    Ok(Essentialization {
        arrangement,
        empty_factor_dim: n_vars - r,
        transform: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Family;

    fn three_lines() -> Arrangement {
        Arrangement::from_integer_forms(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn boolean_b2_lattice() {
        let a = Family::Boolean(2).build().unwrap();
        let lat = intersection_lattice(&a);
        assert_eq!(lat.rank_census(), vec![1, 2, 1]);
        let mut mus: Vec<i64> = (0..4).map(|i| lat.mobius(i)).collect();
        mus.sort_unstable();
        assert_eq!(mus, vec![-1, -1, 1, 1]);
    }

    #[test]
    fn three_lines_poincare_and_characteristic() {
        let lat = intersection_lattice(&three_lines());
        assert_eq!(poincare_poly(&lat), UPoly::from_ints(&[1, 3, 2]));
        assert_eq!(characteristic_poly(&lat), UPoly::from_ints(&[2, -3, 1]));
    }

    #[test]
    fn boolean_poincare_is_power_of_one_plus_t() {
        for m in 1..5 {
            let lat = intersection_lattice(&Family::Boolean(m).build().unwrap());
            let mut expect = UPoly::one();
            for _ in 0..m {
                expect = expect.mul(&UPoly::from_ints(&[1, 1]));
            }
            assert_eq!(poincare_poly(&lat), expect);
        }
    }

    #[test]
    fn generic_2_4_lattice_counts() {
        let a = Family::Generic { n: 2, d: 4, seed: 11 }.build().unwrap();
        let lat = intersection_lattice(&a);
        assert_eq!(lat.rank_census(), vec![1, 4, 6, 1]);
        let top = lat.rank_elements(3)[0];
        assert_eq!(lat.mobius(top), -3);
        assert_eq!(poincare_poly(&lat), UPoly::from_ints(&[1, 4, 6, 3]));
    }

    #[test]
    fn poincare_at_minus_one_vanishes() {
        for a in [
            Family::Boolean(3).build().unwrap(),
            Family::Braid(4).build().unwrap(),
            Family::EdelmanReiner.build().unwrap(),
            Family::NlfDemo.build().unwrap(),
            three_lines(),
        ] {
            let pi = poincare_poly(&intersection_lattice(&a));
            assert!(pi.eval(&rat(-1)).is_zero(), "pi(-1) != 0 for {:?}", a.name());
        }
    }

    #[test]
    fn characteristic_from_poincare_identity() {
        // chi(t) = t^{n+1} pi(-1/t) as polynomials
        for a in [Family::Braid(3).build().unwrap(), three_lines()] {
            let lat = intersection_lattice(&a);
            let pi = poincare_poly(&lat);
            let chi = characteristic_poly(&lat);
            let n1 = a.n_vars();
            let mut expect = vec![Rat::zero(); n1 + 1];
            for (k, c) in pi.coeffs().iter().enumerate() {
                // t^{n+1} * c * (-1/t)^k contributes c*(-1)^k to degree n+1-k
                let sign = if k % 2 == 0 { 1 } else { -1 };
                expect[n1 - k] += c * rat(sign);
            }
            assert_eq!(chi, UPoly::from_coeffs(expect));
        }
    }

    #[test]
    fn localization_is_an_interval() {
        let a = three_lines();
        let lat = intersection_lattice(&a);
        let top = lat.rank_elements(2)[0];
        let loc = localize(&a, &lat.elements()[top]);
        assert_eq!(loc.arrangement.num_hyperplanes(), 3);
        let loc_lat = intersection_lattice(&loc.arrangement);
        let mut loc_profile: Vec<(usize, i64)> = (0..loc_lat.elements().len())
            .map(|i| (loc_lat.elements()[i].rank(), loc_lat.mobius(i)))
            .collect();
        loc_profile.sort_unstable();
        assert_eq!(loc_profile, lat.interval_profile(top));
    }

    #[test]
    fn localize_at_bottom_is_empty() {
        let a = three_lines();
        let lat = intersection_lattice(&a);
        let loc = localize(&a, lat.bottom());
        assert_eq!(loc.arrangement.num_hyperplanes(), 0);
        let pi = poincare_poly(&intersection_lattice(&loc.arrangement));
        assert_eq!(pi, UPoly::one());
    }

    #[test]
    fn essentialize_braid_three() {
        let a = Family::Braid(3).build().unwrap();
        let ess = essentialize(&a).unwrap();
        assert_eq!(ess.arrangement.n_vars(), 2);
        assert_eq!(ess.empty_factor_dim, 1);
        assert!(ess.arrangement.is_essential());
        assert_eq!(ess.arrangement.num_hyperplanes(), 3);
        // the empty factor contributes pi = 1
        let pi_orig = poincare_poly(&intersection_lattice(&a));
        let pi_ess = poincare_poly(&intersection_lattice(&ess.arrangement));
        assert_eq!(pi_orig, pi_ess);
    }

    #[test]
    fn lattice_invariant_under_coordinate_change() {
        // recompute after an invertible integer change of coordinates:
        // same rank census and mu multisets
        let a = Family::Generic { n: 2, d: 5, seed: 3 }.build().unwrap();
        let lat = intersection_lattice(&a);
        // x -> (x0+x1, x1+2x2, x0-x2) has determinant != 0
        let m = [[1i64, 1, 0], [0, 1, 2], [1, 0, -1]];
        let changed: Vec<Vec<i64>> = a
            .forms()
            .iter()
            .map(|f| {
                (0..3)
                    .map(|j| (0..3).map(|i| f[i] * m[i][j]).sum())
                    .collect()
            })
            .collect();
        let b = Arrangement::from_integer_forms(3, changed).unwrap();
        let lat_b = intersection_lattice(&b);
        assert_eq!(lat.rank_census(), lat_b.rank_census());
        for r in 0..=lat.max_rank() {
            assert_eq!(lat.mu_multiset(r), lat_b.mu_multiset(r));
        }
    }
}
