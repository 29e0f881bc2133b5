//! Genus-one detection from surgery invariants: the rank/correction-term
//! diagnostic, profile matching against the bundled knots, graded
//! comparison of results, and the Casson surgery formula.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::acomplex::{alexander_polynomial, kernel_rank_v};
use crate::cfk::{builtin, KnotComplex};
use crate::homology::Summand;
use crate::surgery::{hf_plus, HFResult, Slope, SpinCResult};
use crate::{rat, Error, Rational, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub slope: Slope,
    pub total_reduced_rank: usize,
    /// `Σᵢ (d(S³_{p/q}(K), i) − d(S³_{p/q}(O), i)) / 2`
    pub d_deficit: Rational,
    /// `total_reduced_rank − d_deficit`
    pub score: Rational,
    pub per_index: Vec<(i64, usize, Rational)>,
}

impl Diagnostic {
    pub fn is_integral(&self) -> bool {
        self.score.is_integer()
    }
}

fn profile_cache() -> &'static Mutex<HashMap<(&'static str, i64, i64), HFResult>> {
    static CACHE: OnceLock<Mutex<HashMap<(&'static str, i64, i64), HFResult>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `hf_plus` of a bundled knot, memoized.
pub fn reference_profile(name: &'static str, p: i64, q: i64) -> Result<HFResult> {
    if let Some(r) = profile_cache().lock().expect("cache lock").get(&(name, p, q)) {
        return Ok(r.clone());
    }
    let r = hf_plus(&builtin(name)?, p, q)?;
    profile_cache()
        .lock()
        .expect("cache lock")
        .insert((name, p, q), r.clone());
    Ok(r)
}

fn positive_slope(p: i64, q: i64) -> Result<Slope> {
    let s = Slope::new(p, q)?;
    if !s.is_positive() {
        return Err(Error::InvalidSlope(format!("diagnostics need p/q > 0, got {s}")));
    }
    Ok(s)
}

/// Diagnostic computed from an existing result for `K`.
pub fn diagnostic_from(result: &HFResult) -> Result<Diagnostic> {
    let Slope { p, q } = result.slope;
    let baseline = reference_profile("unknot", p, q)?;
    let mut per_index = Vec::new();
    let mut deficit = rat(0);
    for r in &result.spin_c {
        let o = baseline
            .get(r.index)
            .ok_or_else(|| Error::InvalidArgument(format!("no unknot value for index {}", r.index)))?;
        let half = (r.d - o.d) / rat(2);
        deficit += half;
        per_index.push((r.index, r.reduced_rank(), half));
    }
    let total = result.total_reduced_rank();
    Ok(Diagnostic {
        slope: result.slope,
        total_reduced_rank: total,
        d_deficit: deficit,
        score: rat(total as i64) - deficit,
        per_index,
    })
}

pub fn diagnostic_sum(k: &KnotComplex, p: i64, q: i64) -> Result<Diagnostic> {
    let slope = positive_slope(p, q)?;
    diagnostic_from(&hf_plus(k, slope.p, slope.q)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Unknot,
    TrefoilRight,
    TrefoilLeft,
    FigureEight,
    /// The score and the kernel of `v⁺₀` disagree.
    Inconsistent,
    /// No bundled profile matches.
    Unknown,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Unknot => "unknot",
            Classification::TrefoilRight => "trefoil_right",
            Classification::TrefoilLeft => "trefoil_left",
            Classification::FigureEight => "figure_eight",
            Classification::Inconsistent => "inconsistent",
            Classification::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const CANDIDATES: [(&str, Classification); 4] = [
    ("unknot", Classification::Unknot),
    ("trefoil_right", Classification::TrefoilRight),
    ("trefoil_left", Classification::TrefoilLeft),
    ("figure_eight", Classification::FigureEight),
];

/// Identifies `K` among the unknot, the trefoils and the figure eight from
/// its `p/q` surgery.
///
/// A score below `2q` forces `v⁺ₛ` to be an isomorphism for `s > 0`; then
/// `q · rank ker v⁺₀` must equal the score. The complete graded result is
/// finally matched against each candidate's.
pub fn classify_surgery(k: &KnotComplex, p: i64, q: i64) -> Result<Classification> {
    let slope = positive_slope(p, q)?;
    let result = hf_plus(k, slope.p, slope.q)?;
    let diag = diagnostic_from(&result)?;
    if diag.score < rat(2 * q) {
        let kernel = kernel_rank_v(k, 0, None)? as i64;
        if rat(q * kernel) != diag.score {
            return Ok(Classification::Inconsistent);
        }
    }
    let mut matches = Vec::new();
    for (name, class) in CANDIDATES {
        let reference = reference_profile(name, slope.p, slope.q)?;
        if compare(&result, &reference)? == Comparison::GradedIsomorphic {
            matches.push(class);
        }
    }
    Ok(match matches.as_slice() {
        [one] => *one,
        _ => Classification::Unknown,
    })
}

/// First invariant on which two results differ.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    DInvariants { a: Vec<Rational>, b: Vec<Rational> },
    ReducedRank { a: usize, b: usize },
    Parity { a: (usize, usize), b: (usize, usize) },
    Torsion,
    ReducedGrading,
}

impl Witness {
    pub fn name(&self) -> &'static str {
        match self {
            Witness::DInvariants { .. } => "d-invariants",
            Witness::ReducedRank { .. } => "reduced rank",
            Witness::Parity { .. } => "parity",
            Witness::Torsion => "torsion",
            Witness::ReducedGrading => "reduced grading",
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        match self {
            Witness::DInvariants { a, b } => write!(f, "d-invariants {{{}}} vs {{{}}}", list(a), list(b)),
            Witness::ReducedRank { a, b } => write!(f, "reduced rank {a} vs {b}"),
            Witness::Parity { a, b } => {
                write!(f, "parity (even {}, odd {}) vs (even {}, odd {})", a.0, a.1, b.0, b.1)
            }
            Witness::Torsion => f.write_str("torsion in reduced homology"),
            Witness::ReducedGrading => f.write_str("gradings of reduced homology"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Comparison {
    /// Some bijection of indices matches `d` and graded `HF_red` exactly.
    GradedIsomorphic,
    /// Orientations differ; `d` (negated where needed) and reduced ranks agree.
    Compatible,
    Distinct(Witness),
}

type Key = (Rational, Vec<(Rational, Summand)>);

fn key(r: &SpinCResult) -> Key {
    (r.d, r.hf_red.summands().into_iter().collect())
}

fn sorted_d(r: &HFResult) -> Vec<Rational> {
    let mut v = r.d_values();
    v.sort();
    v
}

fn torsion_orders(r: &HFResult) -> Vec<String> {
    let mut v: Vec<String> = r
        .spin_c
        .iter()
        .flat_map(|s| s.hf_red.summands().into_values().flat_map(|x| x.torsion))
        .map(|t| t.to_string())
        .collect();
    v.sort();
    v
}

/// Graded comparison of two surgery results up to relabelling Spin^c
/// structures.
pub fn compare(a: &HFResult, b: &HFResult) -> Result<Comparison> {
    if a.slope.abs() != b.slope.abs() {
        return Err(Error::SlopeMismatch(format!("{} vs {}", a.slope, b.slope)));
    }
    if a.spin_c.len() != b.spin_c.len() {
        return Err(Error::SlopeMismatch("results cover different Spin^c sets".into()));
    }
    let (da, db) = (sorted_d(a), sorted_d(b));
    if da != db {
        return Ok(Comparison::Distinct(Witness::DInvariants { a: da, b: db }));
    }
    let (ra, rb) = (a.total_reduced_rank(), b.total_reduced_rank());
    if ra != rb {
        return Ok(Comparison::Distinct(Witness::ReducedRank { a: ra, b: rb }));
    }
    if a.orientation != b.orientation {
        return Ok(Comparison::Compatible);
    }
    if a.parity() != b.parity() {
        return Ok(Comparison::Distinct(Witness::Parity {
            a: a.parity(),
            b: b.parity(),
        }));
    }
    if torsion_orders(a) != torsion_orders(b) {
        return Ok(Comparison::Distinct(Witness::Torsion));
    }
    let mut ka: Vec<Key> = a.spin_c.iter().map(key).collect();
    let mut kb: Vec<Key> = b.spin_c.iter().map(key).collect();
    ka.sort();
    kb.sort();
    Ok(if ka == kb {
        Comparison::GradedIsomorphic
    } else {
        Comparison::Distinct(Witness::ReducedGrading)
    })
}

/// A center `c` such that index `i` and `c − i (mod p)` carry identical
/// `(d, HF_red)`; the involution realizing Spin^c conjugation.
pub fn conjugation_center(r: &HFResult) -> Option<i64> {
    let p = r.slope.p.abs();
    if r.spin_c.len() as i64 != p {
        return None;
    }
    let keys: HashMap<i64, Key> = r.spin_c.iter().map(|s| (s.index, key(s))).collect();
    (0..p).find(|c| (0..p).all(|i| keys[&i] == keys[&(c - i).rem_euclid(p)]))
}

/// `(n/2)·Δ″(1)`, the Casson invariant of `1/n` surgery.
pub fn casson_surgery(k: &KnotComplex, n: i64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be nonzero".into()));
    }
    let delta = alexander_polynomial(k)?;
    Ok(Rational::new(n * delta.second_derivative_at_one(), 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(name: &str) -> KnotComplex {
        builtin(name).unwrap()
    }

    #[test]
    fn scores() {
        assert_eq!(diagnostic_sum(&k("unknot"), 3, 2).unwrap().score, rat(0));
        assert_eq!(diagnostic_sum(&k("trefoil_right"), 5, 1).unwrap().score, rat(1));
        assert!(diagnostic_sum(&k("torus_2_5"), 3, 2).unwrap().score >= rat(4));
    }

    #[test]
    fn classification() {
        assert_eq!(classify_surgery(&k("figure_eight"), 1, 1).unwrap(), Classification::FigureEight);
        assert_eq!(classify_surgery(&k("unknot"), 3, 2).unwrap(), Classification::Unknot);
        assert_eq!(classify_surgery(&k("trefoil_right"), 5, 1).unwrap(), Classification::TrefoilRight);
        assert_eq!(classify_surgery(&k("torus_2_5"), 3, 2).unwrap(), Classification::Unknown);
    }

    #[test]
    fn comparisons() {
        let tl = reference_profile("trefoil_left", 1, 1).unwrap();
        let s = reference_profile("figure_eight", 1, 1).unwrap();
        let tr = reference_profile("trefoil_right", 1, 1).unwrap();
        assert_eq!(compare(&tl, &tl).unwrap(), Comparison::GradedIsomorphic);
        match compare(&tl, &s).unwrap() {
            Comparison::Distinct(w) => assert_eq!(w.name(), "parity"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            compare(&tr, &tl).unwrap(),
            Comparison::Distinct(Witness::DInvariants { .. })
        ));
        let other = reference_profile("unknot", 2, 1).unwrap();
        assert!(matches!(compare(&tl, &other), Err(Error::SlopeMismatch(_))));
    }

    #[test]
    fn casson() {
        assert_eq!(casson_surgery(&k("unknot"), 5).unwrap(), rat(0));
        assert_eq!(casson_surgery(&k("trefoil_right"), 1).unwrap(), rat(1));
        assert_eq!(casson_surgery(&k("figure_eight"), 1).unwrap(), rat(-1));
        assert!(casson_surgery(&k("unknot"), 0).is_err());
    }

    #[test]
    fn conjugation_exists() {
        let r = reference_profile("figure_eight", 7, 3).unwrap();
        assert!(conjugation_center(&r).is_some());
    }
}
