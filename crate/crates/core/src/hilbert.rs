//! Hilbert series: Laurent numerator over the fixed denominator
//! (1-X)^(n+1), plus the free-module constructor.

use crate::laurent::LaurentPoly;
use crate::rat::{dim_homogeneous, rat_string, Rat};
use serde::Serialize;

/// Numerator/denominator presentation of a Hilbert series, together with
/// the stabilization data from the computation that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertSeries {
    pub numerator: LaurentPoly,
    /// Power of (1-X) in the denominator, always n+1 for these modules.
    pub denom_power: u32,
    /// Largest degree whose dimension entered the computation; `None`
    /// when the series came from a closed form.
    pub cutoff: Option<i64>,
    /// Width of the trailing zero window that certified stabilization.
    pub window: u32,
    /// True when a modular dimension backend was involved.
    pub probabilistic: bool,
}

impl HilbertSeries {
    pub fn closed_form(numerator: LaurentPoly, denom_power: u32) -> Self {
        HilbertSeries {
            numerator,
            denom_power,
            cutoff: None,
            window: 0,
            probabilistic: false,
        }
    }

    /// Graded dimension at degree m implied by the series, by expanding
    /// 1/(1-X)^k degreewise. Exact for every m.
    pub fn dim_at(&self, m: i64) -> Rat {
        let mut acc = Rat::from_integer(0.into());
        for (e, c) in self.numerator.terms() {
            // coefficient of X^(m-e) in 1/(1-X)^dp
            let d = dim_homogeneous(self.denom_power as usize, m - e);
            acc += c * Rat::from_integer((d as i64).into());
        }
        acc
    }

    /// Value of the numerator at X = 1, the rank of the module sheaf.
    pub fn generic_rank(&self) -> Rat {
        self.numerator.eval_at_one()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let min = self.numerator.min_exp().unwrap_or(0);
        let max = self.numerator.max_exp().unwrap_or(0);
        let coeffs: Vec<String> = (min..=max)
            .map(|e| rat_string(&self.numerator.coeff(e)))
            .collect();
        serde_json::json!({
            "numerator": {"min_exp": min, "coeffs": coeffs},
            "denominator_power": self.denom_power,
            "cutoff": self.cutoff,
            "stabilization_window": self.window,
            "probabilistic": self.probabilistic,
        })
    }
}

impl std::fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) / (1-X)^{}", self.numerator, self.denom_power)
    }
}

/// Error for a degreewise series computation whose numerator failed to
/// stabilize within the requested cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct CutoffTooSmall {
    pub cutoff: i64,
    pub partial_dims: Vec<(i64, u64)>,
}

impl std::fmt::Display for CutoffTooSmall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cutoff too small: numerator not stabilized by degree {}", self.cutoff)
    }
}

impl std::error::Error for CutoffTooSmall {}

/// Hilbert series of the graded free module with the given twists over a
/// polynomial ring in n+1 variables: P(⊕S(a); X) = Σ X^{-a} / (1-X)^{n+1}.
pub fn hilbert_series_free(twists: &[i64], n: u32) -> HilbertSeries {
    let mut num = LaurentPoly::zero();
    for &a in twists {
        num = num.add(&LaurentPoly::monomial(1, -a));
    }
    HilbertSeries::closed_form(num, n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn free_module_series() {
        // P(S; X) in two variables
        let s = hilbert_series_free(&[0], 1);
        assert_eq!(s.numerator, LaurentPoly::one());
        assert_eq!(s.denom_power, 2);

        // S(1)^4 in three variables: 4X^{-1}/(1-X)^3
        let s = hilbert_series_free(&[1, 1, 1, 1], 2);
        assert_eq!(s.numerator, LaurentPoly::monomial(4, -1));
        assert_eq!(s.denom_power, 3);

        // S^4(-5) in four variables: 4X^5/(1-X)^4
        let s = hilbert_series_free(&[-5, -5, -5, -5], 3);
        assert_eq!(s.numerator, LaurentPoly::monomial(4, 5));
        assert_eq!(s.denom_power, 4);
    }

    #[test]
    fn degreewise_dimensions_match_binomials() {
        // ⊕_a S(a): dim at m is Σ_a C(m+a+n, n)
        let twists = [0i64, -2, 1];
        let n = 2u32;
        let s = hilbert_series_free(&twists, n);
        for m in -3..8i64 {
            let expect: i64 = twists
                .iter()
                .map(|&a| dim_homogeneous(n as usize + 1, m + a) as i64)
                .sum();
            assert_eq!(s.dim_at(m), rat(expect));
        }
    }

    #[test]
    fn generic_rank_counts_summands() {
        let s = hilbert_series_free(&[3, -1, 0, 2], 3);
        assert_eq!(s.generic_rank(), rat(4));
    }
}
