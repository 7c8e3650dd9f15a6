//! Degreewise bases of graded submodules of free modules, behind a
//! common provider interface consumed by the generator-extraction and
//! syzygy machinery.

use super::{condition_matrix, ModuleSelector, Side};
use crate::arrangement::Arrangement;
use crate::matrix::{sparse_kernel_basis, SparseRow};
use crate::mpoly::{MonomialBasis, MPoly};
use crate::rat::Rat;
use num_traits::Zero;
use std::collections::HashMap;

/// Element of a graded free module: one polynomial per ambient
/// coordinate. At module degree m, coordinate c holds a homogeneous
/// polynomial of degree m + shift(c).
pub type GradedVec = Vec<MPoly>;

/// A graded submodule of a free S-module, presented degreewise.
pub trait PieceProvider {
    fn n_vars(&self) -> usize;
    /// Degree shifts of the ambient coordinates.
    fn coord_shifts(&self) -> Vec<i64>;
    /// A basis of the degree-m piece, in a canonical deterministic order.
    fn basis(&mut self, m: i64) -> Vec<GradedVec>;
}

/// Layout of the degree-m slice of the ambient free module: one monomial
/// block per coordinate, empty blocks for negative entry degrees.
pub struct SliceLayout {
    pub bases: Vec<Option<MonomialBasis>>,
    offsets: Vec<usize>,
    pub ncols: usize,
}

impl SliceLayout {
    pub fn new(n_vars: usize, coord_shifts: &[i64], m: i64) -> Self {
        let mut bases = Vec::with_capacity(coord_shifts.len());
        let mut offsets = Vec::with_capacity(coord_shifts.len());
        let mut ncols = 0;
        for &s in coord_shifts {
            offsets.push(ncols);
            let deg = m + s;
            if deg < 0 {
                bases.push(None);
            } else {
                let b = MonomialBasis::new(n_vars, deg as u32);
                ncols += b.len();
                bases.push(Some(b));
            }
        }
        SliceLayout {
            bases,
            offsets,
            ncols,
        }
    }

    pub fn flatten(&self, v: &[MPoly]) -> SparseRow<Rat> {
        let mut row: SparseRow<Rat> = Vec::new();
        for (c, poly) in v.iter().enumerate() {
            if poly.is_zero() {
                continue;
            }
            let basis = self.bases[c].as_ref().expect("degree admits this entry");
            for (mono, coef) in poly.terms() {
                row.push(((self.offsets[c] + basis.index_of(mono)) as u32, coef.clone()));
            }
        }
        row.sort_unstable_by_key(|e| e.0);
        row
    }

    pub fn unflatten(&self, n_vars: usize, flat: &[Rat]) -> GradedVec {
        let mut out = Vec::with_capacity(self.bases.len());
        for (c, basis) in self.bases.iter().enumerate() {
            let mut poly = MPoly::zero(n_vars);
            if let Some(b) = basis {
                for (k, mono) in b.list.iter().enumerate() {
                    let v = &flat[self.offsets[c] + k];
                    if !v.is_zero() {
                        poly.add_term(mono, v);
                    }
                }
            }
            out.push(poly);
        }
        out
    }
}

/// Degreewise bases of D^p, Omega^p, or D^1_0 of an arrangement, computed
/// as exact kernels of the membership condition matrices and cached.
pub struct ModulePieces<'a> {
    arrangement: &'a Arrangement,
    selector: ModuleSelector,
    cache: HashMap<i64, Vec<GradedVec>>,
}

impl<'a> ModulePieces<'a> {
    pub fn new(arrangement: &'a Arrangement, selector: ModuleSelector) -> Self {
        selector
            .validate(arrangement)
            .expect("selector validated by caller");
        ModulePieces {
            arrangement,
            selector,
            cache: HashMap::new(),
        }
    }

    pub fn arrangement(&self) -> &Arrangement {
        self.arrangement
    }

    pub fn selector(&self) -> ModuleSelector {
        self.selector
    }

    fn compute(&self, m: i64) -> Vec<GradedVec> {
        let a = self.arrangement;
        let n_vars = a.n_vars();
        let base = ModuleSelector {
            euler_complement: false,
            ..self.selector
        };
        let Some(cm) = condition_matrix(a, &base, m) else {
            return Vec::new();
        };
        let layout = SliceLayout::new(n_vars, &self.coord_shifts(), m);
        debug_assert_eq!(layout.ncols, cm.ncols);
        let kernel = sparse_kernel_basis(cm.ncols, cm.rows);
        let mut vectors: Vec<GradedVec> = kernel
            .iter()
            .map(|flat| layout.unflatten(n_vars, flat))
            .collect();
        if self.selector.euler_complement {
            vectors = euler_complement_basis(a, m, &vectors, &layout);
        }
        vectors
    }

    pub fn basis_ref(&mut self, m: i64) -> &[GradedVec] {
        if !self.cache.contains_key(&m) {
            let v = self.compute(m);
            self.cache.insert(m, v);
        }
        &self.cache[&m]
    }
}

impl<'a> PieceProvider for ModulePieces<'a> {
    fn n_vars(&self) -> usize {
        self.arrangement.n_vars()
    }

    fn coord_shifts(&self) -> Vec<i64> {
        let d = self.arrangement.num_hyperplanes() as i64;
        let shift = match self.selector.side {
            Side::Der => 0,
            Side::Form => d,
        };
        let coords = super::k_subsets(self.arrangement.n_vars(), self.selector.p).len();
        vec![shift; coords]
    }

    fn basis(&mut self, m: i64) -> Vec<GradedVec> {
        self.basis_ref(m).to_vec()
    }
}

/// For theta in D^1 of degree m, the cofactor h with theta(Q) = h Q,
/// computed as the sum of theta(l_i)/l_i. Exact by construction.
pub fn jacobian_cofactor(a: &Arrangement, theta: &[MPoly]) -> MPoly {
    let n_vars = a.n_vars();
    let mut h = MPoly::zero(n_vars);
    for i in 0..a.num_hyperplanes() {
        let form = &a.forms()[i];
        let mut applied = MPoly::zero(n_vars);
        for (j, &c) in form.iter().enumerate() {
            if c != 0 {
                applied = applied.add(&theta[j].scale(&crate::rat::rat(c)));
            }
        }
        if applied.is_zero() {
            continue;
        }
        let quotient = applied
            .div_exact(&a.form_poly(i))
            .expect("theta(l_i) divisible by l_i for members of D^1");
        h = h.add(&quotient);
    }
    h
}

/// Basis of the degree-m piece of D^1_0 = ker(theta -> theta(Q)) inside a
/// basis of D^1_m: solve the small linear system h_theta = 0 over the
/// degree-(m-1) monomials.
fn euler_complement_basis(
    a: &Arrangement,
    m: i64,
    d1_basis: &[GradedVec],
    layout: &SliceLayout,
) -> Vec<GradedVec> {
    if d1_basis.is_empty() {
        return Vec::new();
    }
    let n_vars = a.n_vars();
    if m < 1 {
        // no Euler multiples below degree 1; D^1_0 agrees with D^1
        return d1_basis.to_vec();
    }
    let hbasis = MonomialBasis::new(n_vars, (m - 1) as u32);
    let rows: Vec<SparseRow<Rat>> = {
        // transpose: conditions are rows over the h-monomials, unknowns are
        // the coefficients of a combination of the D^1 basis vectors
        let mut cols: Vec<Vec<(u32, Rat)>> = Vec::with_capacity(d1_basis.len());
        for theta in d1_basis {
            let h = jacobian_cofactor(a, theta);
            cols.push(
                h.terms()
                    .map(|(mono, c)| (hbasis.index_of(mono) as u32, c.clone()))
                    .collect(),
            );
        }
        let mut rows: Vec<SparseRow<Rat>> = vec![Vec::new(); hbasis.len()];
        for (j, col) in cols.iter().enumerate() {
            for (r, c) in col {
                rows[*r as usize].push((j as u32, c.clone()));
            }
        }
        rows.retain(|r| !r.is_empty());
        rows
    };
    let kernel = crate::matrix::sparse_kernel_basis(d1_basis.len(), rows);
    kernel
        .iter()
        .map(|combo| {
            let mut vec = vec![MPoly::zero(n_vars); layout.bases.len()];
            for (k, c) in combo.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (coord, poly) in d1_basis[k].iter().enumerate() {
                    vec[coord] = vec[coord].add(&poly.scale(c));
                }
            }
            vec
        })
        .collect()
}

/// Kernel of a graded map between free modules, presented degreewise.
/// Columns are elements of the target free module; the kernel lives in
/// the free module on the columns with shifts minus their degrees.
pub struct MapKernelPieces {
    n_vars: usize,
    /// Column vectors in the target ambient.
    columns: Vec<GradedVec>,
    /// Module degree of each column (its image generator degree).
    column_degrees: Vec<i64>,
    target_shifts: Vec<i64>,
    cache: HashMap<i64, Vec<GradedVec>>,
}

impl MapKernelPieces {
    pub fn new(
        n_vars: usize,
        columns: Vec<GradedVec>,
        column_degrees: Vec<i64>,
        target_shifts: Vec<i64>,
    ) -> Self {
        assert_eq!(columns.len(), column_degrees.len());
        MapKernelPieces {
            n_vars,
            columns,
            column_degrees,
            target_shifts,
            cache: HashMap::new(),
        }
    }

    pub fn columns(&self) -> &[GradedVec] {
        &self.columns
    }

    pub fn column_degrees(&self) -> &[i64] {
        &self.column_degrees
    }

    /// The map as a dense rational matrix after substituting a point for
    /// the variables, used for generic-rank certificates.
    pub fn evaluated_matrix(&self, point: &[Rat]) -> crate::matrix::RatMatrix {
        let coords = self.target_shifts.len();
        let mut rows: Vec<Vec<Rat>> = vec![vec![Rat::zero(); self.columns.len()]; coords];
        for (j, col) in self.columns.iter().enumerate() {
            for (c, poly) in col.iter().enumerate() {
                rows[c][j] = poly.eval(point);
            }
        }
        crate::matrix::RatMatrix::from_rows(rows)
    }

    fn compute(&self, m: i64) -> Vec<GradedVec> {
        let n_vars = self.n_vars;
        let source_layout = SliceLayout::new(n_vars, &self.coord_shifts(), m);
        if source_layout.ncols == 0 {
            return Vec::new();
        }
        let target_layout = SliceLayout::new(n_vars, &self.target_shifts, m);
        // rows of the constraint matrix: target slice coordinates; columns:
        // (source column g, monomial of degree m - deg g)
        let mut rows: Vec<SparseRow<Rat>> = vec![Vec::new(); target_layout.ncols];
        let mut col_index = 0u32;
        for (g, col) in self.columns.iter().enumerate() {
            let hdeg = m - self.column_degrees[g];
            if hdeg < 0 {
                continue;
            }
            let hbasis = &source_layout.bases[g].as_ref().expect("nonnegative degree").list;
            for mono in hbasis {
                // image of mono * column g
                for (c, poly) in col.iter().enumerate() {
                    if poly.is_zero() {
                        continue;
                    }
                    let tbasis = target_layout.bases[c].as_ref().expect("target slice");
                    for (pm, pc) in poly.terms() {
                        let target_mono = pm.mul(mono);
                        let r = target_layout.offsets[c] + tbasis.index_of(&target_mono);
                        rows[r].push((col_index, pc.clone()));
                    }
                }
                col_index += 1;
            }
        }
        debug_assert_eq!(col_index as usize, source_layout.ncols);
        rows.retain(|r| !r.is_empty());
        for row in &mut rows {
            row.sort_unstable_by_key(|e| e.0);
        }
        let kernel = sparse_kernel_basis(source_layout.ncols, rows);
        kernel
            .iter()
            .map(|flat| source_layout.unflatten(n_vars, flat))
            .collect()
    }
}

impl PieceProvider for MapKernelPieces {
    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn coord_shifts(&self) -> Vec<i64> {
        self.column_degrees.iter().map(|d| -d).collect()
    }

    fn basis(&mut self, m: i64) -> Vec<GradedVec> {
        if !self.cache.contains_key(&m) {
            let v = self.compute(m);
            self.cache.insert(m, v);
        }
        self.cache[&m].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Family;
    use crate::logmodules::Backend;
    use crate::rat::rat;

    #[test]
    fn b2_degree_one_derivation_basis() {
        let a = Family::Boolean(2).build().unwrap();
        let mut pieces = ModulePieces::new(&a, ModuleSelector::der(1));
        let basis = pieces.basis(1);
        assert_eq!(basis.len(), 2);
        // x d/dx and y d/dy, in canonical kernel order
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        assert!(basis.contains(&vec![x.clone(), MPoly::zero(2)]));
        assert!(basis.contains(&vec![MPoly::zero(2), y.clone()]));
    }

    #[test]
    fn piece_vectors_satisfy_membership() {
        // every basis vector theta of D^1 must have theta(l) divisible by l
        let a = Family::Generic { n: 2, d: 4, seed: 11 }.build().unwrap();
        let mut pieces = ModulePieces::new(&a, ModuleSelector::der(1));
        for m in 0..4i64 {
            for theta in pieces.basis(m) {
                for i in 0..a.num_hyperplanes() {
                    let mut applied = MPoly::zero(3);
                    for (j, &c) in a.forms()[i].iter().enumerate() {
                        applied = applied.add(&theta[j].scale(&rat(c)));
                    }
                    if !applied.is_zero() {
                        assert!(applied.div_exact(&a.form_poly(i)).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn euler_complement_piece_dimensions_match_split() {
        let a = Family::Boolean(3).build().unwrap();
        let mut d10 = ModulePieces::new(&a, ModuleSelector::der0());
        for m in 0..4i64 {
            let expected = crate::logmodules::graded_dim(&a, &ModuleSelector::der0(), m, Backend::Exact).unwrap();
            assert_eq!(d10.basis(m).len(), expected, "degree {}", m);
            // and each vector annihilates Q
            for theta in d10.basis(m) {
                assert!(jacobian_cofactor(&a, &theta).is_zero());
            }
        }
    }

    #[test]
    fn map_kernel_finds_the_koszul_relation() {
        // map S(-1)^2 -> S, (h1, h2) -> h1 x + h2 y: kernel generated by
        // (-y, x) in degree 2
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let mut kernel = MapKernelPieces::new(
            2,
            vec![vec![x.clone()], vec![y.clone()]],
            vec![1, 1],
            vec![0],
        );
        assert!(kernel.basis(1).is_empty());
        let deg2 = kernel.basis(2);
        assert_eq!(deg2.len(), 1);
        let v = &deg2[0];
        assert!(v[0].mul(&x).add(&v[1].mul(&y)).is_zero());
        assert!(!v[0].is_zero() && !v[1].is_zero());
        let deg3 = kernel.basis(3);
        assert_eq!(deg3.len(), 2);
    }
}
