//! Minimal generators of graded modules by degreewise basis extension,
//! wedge-image comparisons, and the free-case duality check.

use super::pieces::{GradedVec, ModulePieces, PieceProvider, SliceLayout};
use super::{graded_dim, Backend, ModuleSelector, SelectorError, Side};
use crate::arrangement::Arrangement;
use crate::matrix::{Eliminator, SparseRow, QQ};
use crate::mpoly::{MonomialBasis, MPoly};
use crate::rat::{rat_string, Rat};
use num_traits::Zero;

/// A minimal generator: its degree and its ambient coefficient vector.
#[derive(Clone, Debug)]
pub struct Generator {
    pub degree: i64,
    pub vector: GradedVec,
}

/// Minimal generators of a module up to a degree cutoff.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub selector: Option<ModuleSelector>,
    pub cutoff: i64,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = self
            .generators
            .iter()
            .map(|g| {
                let coords: Vec<serde_json::Value> = g
                    .vector
                    .iter()
                    .enumerate()
                    .flat_map(|(c, poly)| {
                        poly.terms()
                            .map(move |(mono, coef)| {
                                serde_json::json!([c, mono.0, rat_string(coef)])
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
                serde_json::json!({"degree": g.degree, "coeffs": coords})
            })
            .collect();
        serde_json::json!({
            "selector": self.selector,
            "cutoff": self.cutoff,
            "generators": gens,
        })
    }
}

/// Extract minimal generators degree by degree: at each degree, extend a
/// basis of S_1 times the previous piece inside the current piece; the
/// extension vectors are the minimal generators. Deterministic through
/// the canonical kernel ordering.
pub fn extract_generators<P: PieceProvider>(provider: &mut P, lo: i64, hi: i64) -> Vec<Generator> {
    let n_vars = provider.n_vars();
    let shifts = provider.coord_shifts();
    let field = QQ;
    let mut out = Vec::new();
    for m in lo..=hi {
        let current = provider.basis(m);
        if current.is_empty() {
            continue;
        }
        let layout = SliceLayout::new(n_vars, &shifts, m);
        let mut elim = Eliminator::new(&field, layout.ncols);
        for prev in provider.basis(m - 1) {
            for j in 0..n_vars {
                let xj = MPoly::var(n_vars, j);
                let shifted: GradedVec = prev.iter().map(|p| p.mul(&xj)).collect();
                elim.add_row(layout.flatten(&shifted));
            }
        }
        for vector in current {
            let row = layout.flatten(&vector);
            if elim.add_row(row).is_some() {
                out.push(Generator { degree: m, vector });
            }
        }
    }
    out
}

/// Minimal generators of the selected module of the arrangement up to
/// the cutoff degree.
pub fn minimal_generators(
    a: &Arrangement,
    sel: &ModuleSelector,
    cutoff: i64,
) -> Result<GeneratorSet, SelectorError> {
    sel.validate(a)?;
    let mut pieces = ModulePieces::new(a, *sel);
    let lo = sel.min_degree(a);
    let generators = extract_generators(&mut pieces, lo, cutoff);
    Ok(GeneratorSet {
        selector: Some(*sel),
        cutoff,
        generators,
    })
}

/// Wedge product of module elements in coefficient representation. On
/// the derivation side the wedge coefficients are p x p minors; on the
/// form side the same minors are divided by Q^(p-1), which is exact for
/// logarithmic forms.
pub fn wedge_vectors(
    a: &Arrangement,
    side: Side,
    elements: &[&GradedVec],
    wedge_p: &[Vec<usize>],
    wedge_1: &[Vec<usize>],
) -> GradedVec {
    let n_vars = a.n_vars();
    let p = elements.len();
    debug_assert!(wedge_1.iter().all(|w| w.len() == 1));
    let mut out = Vec::with_capacity(wedge_p.len());
    for subset in wedge_p {
        // det of the p x p matrix with rows the elements, columns the
        // coordinates in `subset`
        let det = minor_det(elements, subset, wedge_1, n_vars);
        out.push(det);
    }
    if side == Side::Form && p >= 2 {
        let q = a.defining_polynomial();
        let mut divisor = MPoly::one(n_vars);
        for _ in 1..p {
            divisor = divisor.mul(&q);
        }
        return out
            .into_iter()
            .map(|c| {
                if c.is_zero() {
                    c
                } else {
                    c.div_exact(&divisor)
                        .expect("wedge of logarithmic forms is divisible by Q^(p-1)")
                }
            })
            .collect();
    }
    out
}

fn minor_det(elements: &[&GradedVec], cols: &[usize], wedge_1: &[Vec<usize>], n_vars: usize) -> MPoly {
    let p = elements.len();
    // Laplace expansion along the first row; p stays tiny
    fn rec(
        elements: &[&GradedVec],
        rows: &[usize],
        cols: &[usize],
        col_of: &dyn Fn(usize) -> usize,
        n_vars: usize,
    ) -> MPoly {
        if rows.is_empty() {
            return MPoly::one(n_vars);
        }
        let r = rows[0];
        let rest_rows = &rows[1..];
        let mut acc = MPoly::zero(n_vars);
        for (k, &c) in cols.iter().enumerate() {
            let entry = &elements[r][col_of(c)];
            if entry.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&x| x != c)
                .collect();
            let sub = rec(elements, rest_rows, &rest_cols, col_of, n_vars);
            let signed = if k % 2 == 0 { sub } else { sub.neg() };
            acc = acc.add(&entry.mul(&signed));
        }
        acc
    }
    let col_of = |c: usize| -> usize {
        wedge_1
            .iter()
            .position(|w| w[0] == c)
            .expect("coordinate index")
    };
    let rows: Vec<usize> = (0..p).collect();
    rec(elements, &rows, cols, &col_of, n_vars)
}

/// Dimension of the image of Lambda^p of the degree-1 module inside the
/// degree-m piece, paired with the directly computed graded dimension.
pub fn wedge_compare(
    a: &Arrangement,
    side: Side,
    p: usize,
    m: i64,
    gen_cutoff: i64,
    backend: Backend,
) -> Result<(usize, usize), SelectorError> {
    let sel1 = ModuleSelector { side, p: 1, euler_complement: false };
    let selp = ModuleSelector { side, p, euler_complement: false };
    selp.validate(a)?;
    let direct = graded_dim(a, &selp, m, backend)?;
    if p == 1 {
        return Ok((direct, direct));
    }
    let gens = minimal_generators(a, &sel1, gen_cutoff)?;
    let n_vars = a.n_vars();
    let wedge_p = super::k_subsets(n_vars, p);
    let wedge_1 = super::k_subsets(n_vars, 1);
    let shifts = ModulePieces::new(a, selp).coord_shifts();
    let layout = SliceLayout::new(n_vars, &shifts, m);
    if layout.ncols == 0 {
        return Ok((0, direct));
    }

    let mut rows: Vec<SparseRow<Rat>> = Vec::new();
    let subsets = super::k_subsets(gens.generators.len(), p);
    for subset in &subsets {
        let degree_sum: i64 = subset.iter().map(|&g| gens.generators[g].degree).sum();
        let room = m - degree_sum;
        if room < 0 {
            continue;
        }
        let chosen: Vec<&GradedVec> = subset.iter().map(|&g| &gens.generators[g].vector).collect();
        let wedge = wedge_vectors(a, side, &chosen, &wedge_p, &wedge_1);
        if wedge.iter().all(|c| c.is_zero()) {
            continue;
        }
        for mono in &MonomialBasis::new(n_vars, room as u32).list {
            let shifted: GradedVec = wedge
                .iter()
                .map(|c| c.mul_monomial(mono, &Rat::from_integer(1.into())))
                .collect();
            rows.push(layout.flatten(&shifted));
        }
    }
    let image_rank = backend.rank(layout.ncols, rows);
    Ok((image_rank, direct))
}

/// For a free arrangement, minimal generator degrees of Omega^p must be
/// exactly the negatives of those of D^p.
pub fn duality_check_free(a: &Arrangement, p: usize, exponents: &[i64]) -> Result<bool, SelectorError> {
    let mut sums: Vec<i64> = super::k_subsets(exponents.len(), p)
        .iter()
        .map(|s| s.iter().map(|&i| exponents[i]).sum())
        .collect();
    sums.sort_unstable();
    let der_cutoff = sums.last().copied().unwrap_or(0);
    let form_cutoff = -sums.first().copied().unwrap_or(0);
    let der = minimal_generators(a, &ModuleSelector::der(p), der_cutoff)?;
    let form = minimal_generators(a, &ModuleSelector::form(p), form_cutoff)?;
    let mut der_degrees = der.degrees();
    der_degrees.sort_unstable();
    let mut form_degrees: Vec<i64> = form.degrees().iter().map(|d| -d).collect();
    form_degrees.sort_unstable();
    Ok(der_degrees == sums && form_degrees == sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Family;

    #[test]
    fn boolean_b2_generator_degrees() {
        let a = Family::Boolean(2).build().unwrap();
        let gens = minimal_generators(&a, &ModuleSelector::der(1), 3).unwrap();
        assert_eq!(gens.degrees(), vec![1, 1]);
    }

    #[test]
    fn ziegler_generators_for_generic_2_4_forms() {
        let a = Family::Generic { n: 2, d: 4, seed: 11 }.build().unwrap();
        let gens = minimal_generators(&a, &ModuleSelector::form(1), 2).unwrap();
        assert_eq!(gens.degrees(), vec![-1, -1, -1, -1]);
    }

    #[test]
    fn wedge_compare_is_equal_for_p_one() {
        let a = Family::Boolean(3).build().unwrap();
        let (img, dim) = wedge_compare(&a, Side::Der, 1, 2, 2, Backend::Exact).unwrap();
        assert_eq!(img, dim);
    }

    #[test]
    fn wedge_compare_generic_2_4_forms() {
        let a = Family::Generic { n: 2, d: 4, seed: 11 }.build().unwrap();
        let (img, dim) = wedge_compare(&a, Side::Form, 2, -2, 0, Backend::Exact).unwrap();
        assert_eq!((img, dim), (6, 6));
        let (img, dim) = wedge_compare(&a, Side::Form, 2, -1, 0, Backend::Exact).unwrap();
        assert_eq!((img, dim), (14, 14));
    }

    #[test]
    fn duality_for_boolean_and_braid() {
        let a = Family::Boolean(3).build().unwrap();
        assert!(duality_check_free(&a, 1, &[1, 1, 1]).unwrap());
        assert!(duality_check_free(&a, 2, &[1, 1, 1]).unwrap());
        let braid = crate::lattice::essentialize(&Family::Braid(3).build().unwrap())
            .unwrap()
            .arrangement;
        assert!(duality_check_free(&braid, 1, &[1, 2]).unwrap());
    }
}
