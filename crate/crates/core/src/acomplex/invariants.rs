use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use super::{default_depth, map_v, realize, Truncation};
use crate::cfk::{KnotComplex, Region};
use crate::homology::GradedGroup;
use crate::{rat, Error, Rational, Result};

/// `\widehat{HFK}(K, s) = H(C{(0, s)})`.
pub fn hfk_hat(k: &KnotComplex, s: i64) -> Result<GradedGroup> {
    realize(k, Region::Single { i: 0, j: s }, Truncation::None)?.homology()
}

/// Largest `s ≥ 0` with nonzero knot homology in Alexander grading `s`.
pub fn genus(k: &KnotComplex) -> i64 {
    let (_, hi) = k.alexander_range();
    (1..=hi)
        .rev()
        .find(|&s| hfk_hat(k, s).is_ok_and(|h| !h.is_zero()))
        .unwrap_or(0)
}

/// Integer Laurent polynomial in `t`, stored as exponent → coefficient
/// without zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn from_coeffs(items: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in items {
            *coeffs.entry(e).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        LaurentPoly { coeffs }
    }

    pub fn coefficient(&self, exponent: i64) -> i64 {
        self.coeffs.get(&exponent).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, *c))
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(e, c)| self.coefficient(-e) == *c)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// `f''(1) = Σ c·e·(e − 1)`.
    pub fn second_derivative_at_one(&self) -> i64 {
        self.coeffs.iter().map(|(e, c)| c * e * (e - 1)).sum()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let (sign, abs) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            match (n, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let mono = match e {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{e}"),
            };
            match (abs, mono.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (1, false) => f.write_str(&mono)?,
                _ => write!(f, "{abs}{mono}")?,
            }
        }
        Ok(())
    }
}

fn euler_characteristic(h: &GradedGroup) -> i64 {
    h.iter()
        .map(|(d, g)| {
            let r = g.summand.free_rank as i64;
            if d.to_integer().is_even() {
                r
            } else {
                -r
            }
        })
        .sum()
}

/// `Σ_s χ(\widehat{HFK}(K, s))·tˢ`, required to be symmetric.
pub fn alexander_polynomial(k: &KnotComplex) -> Result<LaurentPoly> {
    let (lo, hi) = k.alexander_range();
    let mut terms = Vec::new();
    for s in lo.min(-hi)..=hi.max(-lo) {
        terms.push((s, euler_characteristic(&hfk_hat(k, s)?)));
    }
    let poly = LaurentPoly::from_coeffs(terms);
    if !poly.is_symmetric() {
        return Err(Error::AsymmetricAlexander(poly.to_string()));
    }
    Ok(poly)
}

fn check_stable<T: PartialEq + fmt::Debug>(what: &str, a: T, b: T) -> Result<T> {
    if a == b {
        Ok(a)
    } else {
        Err(Error::NotStabilized(format!("{what}: {a:?} at depth N, {b:?} at depth 2N")))
    }
}

/// Free rank of the kernel of `v⁺ₛ` on homology, confirmed at depths `n`
/// and `2n`.
pub fn kernel_rank_v(k: &KnotComplex, s: i64, n: Option<i64>) -> Result<usize> {
    let n = n.unwrap_or_else(|| default_depth(k));
    let a = map_v(k, s, n)?.induced()?.kernel_rank();
    let b = map_v(k, s, 2 * n)?.induced()?.kernel_rank();
    check_stable("kernel rank of v", a, b)
}

/// Comparison of `ker v⁺_{g−1}` with `\widehat{HFK}(K, g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub genus: i64,
    pub surjective: bool,
    pub kernel_ranks: BTreeMap<Rational, usize>,
    pub hfk_ranks: BTreeMap<Rational, usize>,
    /// `c` with `kernel_ranks[d + c] = hfk_ranks[d]` for all `d`, if any.
    pub shift: Option<Rational>,
}

impl ExactnessReport {
    pub fn kernel_rank(&self) -> usize {
        self.kernel_ranks.values().sum()
    }

    pub fn hfk_rank(&self) -> usize {
        self.hfk_ranks.values().sum()
    }

    pub fn holds(&self) -> bool {
        self.surjective && self.shift.is_some()
    }
}

fn uniform_shift(a: &BTreeMap<Rational, usize>, b: &BTreeMap<Rational, usize>) -> Option<Rational> {
    if a.len() != b.len() {
        return None;
    }
    let (Some((da, _)), Some((db, _))) = (a.iter().next(), b.iter().next()) else {
        return Some(rat(0));
    };
    let c = da - db;
    b.iter()
        .all(|(d, r)| a.get(&(d + c)) == Some(r))
        .then_some(c)
}

/// For genus `g ≥ 1`: whether `v⁺_{g−1}` is surjective on homology and its
/// kernel matches the top knot homology degreewise up to one grading shift.
pub fn exactness_at_genus(k: &KnotComplex, n: Option<i64>) -> Result<ExactnessReport> {
    let g = genus(k);
    if g < 1 {
        return Err(Error::InvalidArgument("genus 0 has no top filtration level to compare".into()));
    }
    let n = n.unwrap_or_else(|| default_depth(k));
    let v = map_v(k, g - 1, n)?.induced()?;
    let kernel_ranks = v.kernel_ranks();
    let hfk_ranks: BTreeMap<Rational, usize> = hfk_hat(k, g)?
        .iter()
        .map(|(d, h)| (*d, h.summand.free_rank))
        .filter(|(_, r)| *r > 0)
        .collect();
    let shift = uniform_shift(&kernel_ranks, &hfk_ranks);
    Ok(ExactnessReport {
        genus: g,
        surjective: v.is_surjective(),
        kernel_ranks,
        hfk_ranks,
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::{builtin, BUILTIN_NAMES};

    fn poly(name: &str) -> LaurentPoly {
        alexander_polynomial(&builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn hfk_values() {
        let u = builtin("unknot").unwrap();
        let h = hfk_hat(&u, 0).unwrap();
        assert_eq!(h.free_rank(rat(0)), 1);
        assert_eq!(h.total_free_rank(), 1);
        assert!(hfk_hat(&u, 1).unwrap().is_zero());
        assert_eq!(hfk_hat(&builtin("trefoil_right").unwrap(), 1).unwrap().total_free_rank(), 1);
        assert_eq!(hfk_hat(&builtin("figure_eight").unwrap(), 0).unwrap().total_free_rank(), 3);
    }

    #[test]
    fn genera() {
        let g = |n| genus(&builtin(n).unwrap());
        assert_eq!(g("unknot"), 0);
        assert_eq!(g("trefoil_left"), 1);
        assert_eq!(g("trefoil_right"), 1);
        assert_eq!(g("figure_eight"), 1);
        assert_eq!(g("torus_2_5"), 2);
    }

    #[test]
    fn alexander_polynomials() {
        assert_eq!(poly("unknot").to_string(), "1");
        assert_eq!(poly("trefoil_right").to_string(), "t - 1 + t^-1");
        assert_eq!(poly("trefoil_left").to_string(), "t - 1 + t^-1");
        assert_eq!(poly("figure_eight").to_string(), "-t + 3 - t^-1");
        assert_eq!(poly("torus_2_5").to_string(), "t^2 - t + 1 - t^-1 + t^-2");
        for name in BUILTIN_NAMES {
            assert_eq!(poly(name).eval_at_one(), 1, "{name}");
        }
        assert_eq!(poly("torus_2_5").second_derivative_at_one(), 6);
    }

    #[test]
    fn kernel_ranks_at_zero() {
        let r = |n| kernel_rank_v(&builtin(n).unwrap(), 0, None).unwrap();
        assert_eq!(r("unknot"), 0);
        assert_eq!(r("trefoil_left"), 1);
        assert_eq!(r("trefoil_right"), 1);
        assert_eq!(r("figure_eight"), 1);
    }

    #[test]
    fn exactness_for_genus_one_knots() {
        for name in ["trefoil_right", "trefoil_left", "figure_eight"] {
            let rep = exactness_at_genus(&builtin(name).unwrap(), None).unwrap();
            assert!(rep.holds(), "{name}: {rep:?}");
            assert_eq!(rep.kernel_rank(), 1);
            assert_eq!(rep.hfk_rank(), 1);
        }
    }

    #[test]
    fn display_of_zero_and_constants() {
        assert_eq!(LaurentPoly::default().to_string(), "0");
        assert_eq!(LaurentPoly::from_coeffs([(0, -2), (3, 1)]).to_string(), "t^3 - 2");
    }
}
