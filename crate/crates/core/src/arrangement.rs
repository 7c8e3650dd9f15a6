//! Central hyperplane arrangements: construction, normalization, the
//! built-in families, and the JSON ingestion format.

use crate::mpoly::MPoly;
use crate::rat::{primitive_vector, rat, Rat};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrangementError {
    /// A defining form is zero.
    DegenerateForm { index: usize },
    /// Two forms cut out the same hyperplane.
    DuplicateHyperplane { first: usize, second: usize },
    /// Form vector of the wrong length.
    BadFormLength { index: usize, expected: usize },
    /// Family parameters out of range.
    InvalidFamily(String),
    /// Form coefficients exceed the machine-integer range after clearing
    /// denominators.
    CoefficientOverflow { index: usize },
}

impl std::fmt::Display for ArrangementError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArrangementError::DegenerateForm { index } => {
                write!(f, "degenerate form at index {}", index)
            }
            ArrangementError::DuplicateHyperplane { first, second } => {
                write!(f, "duplicate hyperplane: forms {} and {} are proportional", first, second)
            }
            ArrangementError::BadFormLength { index, expected } => {
                write!(f, "form {} does not have {} coordinates", index, expected)
            }
            ArrangementError::InvalidFamily(msg) => write!(f, "invalid family: {}", msg),
            ArrangementError::CoefficientOverflow { index } => {
                write!(f, "form {} has coefficients too large for the integer carrier", index)
            }
        }
    }
}

impl std::error::Error for ArrangementError {}

/// A central arrangement: pairwise non-proportional nonzero linear forms
/// in `n_vars` variables, stored as primitive integer vectors with the
/// first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    n_vars: usize,
    forms: Vec<Vec<i64>>,
    name: Option<String>,
    essential: bool,
}

impl Arrangement {
    /// Build from rational coefficient vectors, normalizing each to a
    /// primitive integer vector and rejecting zero or duplicate forms.
    pub fn new(n_vars: usize, forms: Vec<Vec<Rat>>) -> Result<Self, ArrangementError> {
        assert!(n_vars >= 1, "need at least one variable");
        let mut normalized: Vec<Vec<i64>> = Vec::with_capacity(forms.len());
        for (index, form) in forms.iter().enumerate() {
            if form.len() != n_vars {
                return Err(ArrangementError::BadFormLength {
                    index,
                    expected: n_vars,
                });
            }
            let mut denom_lcm = BigInt::from(1);
            for c in form {
                denom_lcm = num_integer::lcm(denom_lcm, c.denom().abs());
            }
            let ints: Vec<BigInt> = form.iter().map(|c| c.numer() * &denom_lcm / c.denom()).collect();
            let prim = primitive_vector(&ints).ok_or(ArrangementError::DegenerateForm { index })?;
            let small: Option<Vec<i64>> = prim.iter().map(|x| x.try_into().ok()).collect();
            let small = small.ok_or(ArrangementError::CoefficientOverflow { index })?;
            if let Some(first) = normalized.iter().position(|f| *f == small) {
                return Err(ArrangementError::DuplicateHyperplane {
                    first,
                    second: index,
                });
            }
            normalized.push(small);
        }
        Ok(Self::from_primitive(n_vars, normalized, None))
    }

    pub fn from_integer_forms(n_vars: usize, forms: Vec<Vec<i64>>) -> Result<Self, ArrangementError> {
        let rational = forms
            .into_iter()
            .map(|f| f.into_iter().map(rat).collect())
            .collect();
        Self::new(n_vars, rational)
    }

    fn from_primitive(n_vars: usize, forms: Vec<Vec<i64>>, name: Option<String>) -> Self {
        let essential = rank_of_forms(n_vars, &forms) == n_vars;
        Arrangement {
            n_vars,
            forms,
            name,
            essential,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Number of hyperplanes, written d throughout.
    pub fn num_hyperplanes(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Vec<i64>] {
        &self.forms
    }

    pub fn form_rat(&self, i: usize) -> Vec<Rat> {
        self.forms[i].iter().map(|&c| rat(c)).collect()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn is_essential(&self) -> bool {
        self.essential
    }

    /// The defining polynomial Q, product of the linear forms.
    pub fn defining_polynomial(&self) -> MPoly {
        let mut q = MPoly::one(self.n_vars);
        for i in 0..self.forms.len() {
            q = q.mul(&MPoly::linear(&self.form_rat(i)));
        }
        q
    }

    /// The linear form of hyperplane i as a polynomial.
    pub fn form_poly(&self, i: usize) -> MPoly {
        MPoly::linear(&self.form_rat(i))
    }

    /// True when every subset of at most n_vars forms is independent.
    pub fn is_generic(&self) -> bool {
        self.generic_violation().is_none()
    }

    /// A dependent subset of size <= n_vars if one exists.
    pub fn generic_violation(&self) -> Option<Vec<usize>> {
        let d = self.forms.len();
        let k = self.n_vars.min(d);
        // checking all k-subsets suffices: subsets of independent sets
        // are independent, and any smaller subset extends to a k-subset
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let rows: Vec<Vec<i64>> = subset.iter().map(|&i| self.forms[i].clone()).collect();
            if rank_of_forms(self.n_vars, &rows) < k {
                // shrink to a minimal dependent witness
                return Some(minimal_dependent(self, &subset));
            }
            // next k-combination of 0..d
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if subset[i] != i + d - k {
                    subset[i] += 1;
                    for j in i + 1..k {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

fn minimal_dependent(a: &Arrangement, subset: &[usize]) -> Vec<usize> {
    let mut witness: Vec<usize> = subset.to_vec();
    loop {
        let mut shrunk = false;
        for drop in 0..witness.len() {
            let mut trial = witness.clone();
            trial.remove(drop);
            let rows: Vec<Vec<i64>> = trial.iter().map(|&i| a.forms[i].clone()).collect();
            if rank_of_forms(a.n_vars, &rows) < trial.len() {
                witness = trial;
                shrunk = true;
                break;
            }
        }
        if !shrunk {
            return witness;
        }
    }
}

pub(crate) fn rank_of_forms(n_vars: usize, forms: &[Vec<i64>]) -> usize {
    use crate::matrix::{sparse_rank, SparseRow, QQ};
    let rows: Vec<SparseRow<Rat>> = forms
        .iter()
        .map(|f| {
            f.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(j, &c)| (j as u32, rat(c)))
                .collect()
        })
        .collect();
    sparse_rank(&QQ, n_vars, rows)
}

/// Built-in arrangement families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Coordinate hyperplanes in k^m.
    Boolean(usize),
    /// All x_i - x_j, i < j, in k^m. Central but not essential.
    Braid(usize),
    /// d seeded random integer forms in k^(n+1), redrawn until every
    /// subset of <= n+1 forms has full rank.
    Generic { n: usize, d: usize, seed: u64 },
    /// The fifteen nonzero 0/1 vectors in k^4.
    EdelmanReiner,
    /// {x0, x1, x2, x0+x1+x2, x3} in k^4, essential but not locally free.
    NlfDemo,
}

impl Family {
    pub fn build(&self) -> Result<Arrangement, ArrangementError> {
        match self {
            Family::Boolean(m) => {
                if *m == 0 {
                    return Err(ArrangementError::InvalidFamily("boolean(0)".into()));
                }
                let forms = (0..*m)
                    .map(|i| {
                        let mut v = vec![0i64; *m];
                        v[i] = 1;
                        v
                    })
                    .collect();
                Ok(Arrangement::from_primitive(*m, forms, Some(format!("boolean({})", m))))
            }
            Family::Braid(m) => {
                if *m < 2 {
                    return Err(ArrangementError::InvalidFamily("braid(m) needs m >= 2".into()));
                }
                let mut forms = Vec::new();
                for i in 0..*m {
                    for j in i + 1..*m {
                        let mut v = vec![0i64; *m];
                        v[i] = 1;
                        v[j] = -1;
                        forms.push(v);
                    }
                }
                Ok(Arrangement::from_primitive(*m, forms, Some(format!("braid({})", m))))
            }
            Family::Generic { n, d, seed } => {
                let n_vars = n + 1;
                if *d < n_vars {
                    return Err(ArrangementError::InvalidFamily(format!(
                        "generic({}, {}): needs d >= n+1 = {} to be essential",
                        n, d, n_vars
                    )));
                }
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                loop {
                    let candidate: Vec<Vec<i64>> = (0..*d)
                        .map(|_| (0..n_vars).map(|_| rng.gen_range(-9..=9)).collect())
                        .collect();
                    let Ok(arr) = Arrangement::from_integer_forms(n_vars, candidate) else {
                        continue;
                    };
                    if arr.is_generic() {
                        return Ok(arr.with_name(format!("generic({},{},{})", n, d, seed)));
                    }
                }
            }
            Family::EdelmanReiner => {
                let mut forms = Vec::new();
                for mask in 1u32..16 {
                    forms.push((0..4).map(|b| ((mask >> b) & 1) as i64).collect());
                }
                Ok(Arrangement::from_primitive(4, forms, Some("edelman-reiner".into())))
            }
            Family::NlfDemo => {
                let forms = vec![
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![1, 1, 1, 0],
                    vec![0, 0, 0, 1],
                ];
                Ok(Arrangement::from_primitive(4, forms, Some("nlf-demo".into())))
            }
        }
    }

    /// Parse a family spec like "boolean:3", "generic:2,4,11",
    /// "edelman-reiner". Hyphens and underscores are interchangeable.
    pub fn parse(spec: &str) -> Result<Family, ArrangementError> {
        let (name, params) = match spec.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (spec, None),
        };
        let name = name.replace('_', "-").to_lowercase();
        let nums = |p: Option<&str>| -> Result<Vec<i64>, ArrangementError> {
            p.unwrap_or("")
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map_err(|_| ArrangementError::InvalidFamily(format!("bad parameter {:?}", s)))
                })
                .collect()
        };
        match name.as_str() {
            "boolean" => match nums(params)?.as_slice() {
                [m] if *m >= 1 => Ok(Family::Boolean(*m as usize)),
                _ => Err(ArrangementError::InvalidFamily("boolean:M".into())),
            },
            "braid" => match nums(params)?.as_slice() {
                [m] if *m >= 2 => Ok(Family::Braid(*m as usize)),
                _ => Err(ArrangementError::InvalidFamily("braid:M".into())),
            },
            "generic" => match nums(params)?.as_slice() {
                [n, d] if *n >= 1 && *d >= 1 => Ok(Family::Generic {
                    n: *n as usize,
                    d: *d as usize,
                    seed: 0,
                }),
                [n, d, seed] if *n >= 1 && *d >= 1 => Ok(Family::Generic {
                    n: *n as usize,
                    d: *d as usize,
                    seed: *seed as u64,
                }),
                _ => Err(ArrangementError::InvalidFamily("generic:N,D[,SEED]".into())),
            },
            "edelman-reiner" => Ok(Family::EdelmanReiner),
            "nlf-demo" => Ok(Family::NlfDemo),
            other => Err(ArrangementError::InvalidFamily(format!("unknown family {:?}", other))),
        }
    }
}

/// On-disk arrangement format: {"n_vars": int, "forms": [[int,...]], "name": string?}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrangementFile {
    pub n_vars: usize,
    pub forms: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl ArrangementFile {
    pub fn from_arrangement(a: &Arrangement) -> Self {
        ArrangementFile {
            n_vars: a.n_vars(),
            forms: a.forms().to_vec(),
            name: a.name().map(String::from),
        }
    }

    pub fn into_arrangement(self) -> Result<Arrangement, ArrangementError> {
        let mut a = Arrangement::from_integer_forms(self.n_vars, self.forms)?;
        if let Some(name) = self.name {
            a = a.with_name(name);
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::Monomial;

    #[test]
    fn boolean_b2_is_essential() {
        let a = Arrangement::from_integer_forms(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(a.num_hyperplanes(), 2);
        assert!(a.is_essential());
    }

    #[test]
    fn three_lines_defining_polynomial() {
        let a = Arrangement::from_integer_forms(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(a.is_essential());
        let q = a.defining_polynomial();
        // xy(x+y) = x^2 y + x y^2
        assert_eq!(q.coeff(&Monomial(vec![2, 1])), rat(1));
        assert_eq!(q.coeff(&Monomial(vec![1, 2])), rat(1));
    }

    #[test]
    fn proportional_forms_are_rejected() {
        let err = Arrangement::from_integer_forms(4, vec![vec![1, 0, 0, 0], vec![2, 0, 0, 0]])
            .unwrap_err();
        assert_eq!(err, ArrangementError::DuplicateHyperplane { first: 0, second: 1 });
    }

    #[test]
    fn zero_form_is_rejected() {
        let err = Arrangement::from_integer_forms(2, vec![vec![0, 0]]).unwrap_err();
        assert_eq!(err, ArrangementError::DegenerateForm { index: 0 });
    }

    #[test]
    fn rational_input_normalizes_to_primitive() {
        use crate::rat::ratio;
        let a = Arrangement::new(2, vec![vec![ratio(-1, 2), ratio(-3, 2)]]).unwrap();
        assert_eq!(a.forms()[0], vec![1, 3]);
    }

    #[test]
    fn edelman_reiner_has_fifteen_forms() {
        let a = Family::EdelmanReiner.build().unwrap();
        assert_eq!(a.num_hyperplanes(), 15);
        assert_eq!(a.n_vars(), 4);
        assert!(a.is_essential());
    }

    #[test]
    fn braid_three_is_not_essential() {
        let a = Family::Braid(3).build().unwrap();
        assert_eq!(a.num_hyperplanes(), 3);
        assert!(!a.is_essential());
        assert_eq!(rank_of_forms(3, a.forms()), 2);
    }

    #[test]
    fn generic_family_is_deterministic_and_generic() {
        let a = Family::Generic { n: 2, d: 4, seed: 11 }.build().unwrap();
        let b = Family::Generic { n: 2, d: 4, seed: 11 }.build().unwrap();
        assert_eq!(a, b);
        assert!(a.is_generic());
        assert!(a.is_essential());
        assert!(Family::Generic { n: 3, d: 2, seed: 0 }.build().is_err());
    }

    #[test]
    fn nlf_demo_is_essential_but_not_generic() {
        let a = Family::NlfDemo.build().unwrap();
        assert!(a.is_essential());
        let witness = a.generic_violation().unwrap();
        assert_eq!(witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn family_spec_parsing() {
        assert_eq!(Family::parse("boolean:3").unwrap(), Family::Boolean(3));
        assert_eq!(
            Family::parse("generic:2,4,7").unwrap(),
            Family::Generic { n: 2, d: 4, seed: 7 }
        );
        assert_eq!(Family::parse("edelman_reiner").unwrap(), Family::EdelmanReiner);
        assert_eq!(Family::parse("nlf-demo").unwrap(), Family::NlfDemo);
        assert!(Family::parse("frobnicate").is_err());
    }

    #[test]
    fn file_format_roundtrip() {
        let a = Family::EdelmanReiner.build().unwrap();
        let file = ArrangementFile::from_arrangement(&a);
        let json = serde_json::to_string(&file).unwrap();
        let back: ArrangementFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_arrangement().unwrap(), a);
    }
}
