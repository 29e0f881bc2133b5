//! Rational surgery through the truncated mapping cone.
//!
//! For a slope `p/q > 0` and Spin^c index `i`, the cone has summands
//! `A⁺_{k_s}` with `k_s = ⌊(i + ps)/q⌋` for `|s| ≤ σ` and copies of `B⁺` for
//! `−σ < s ≤ σ`, joined by `v⁺` and `h⁺`. Its homology is
//! `HF⁺(S³_{p/q}(K), i)` up to an overall grading shift, which is fixed by
//! running the same cone for the unknot and matching lens space
//! correction terms.

mod cone;
mod hf;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

pub use cone::{build_mapping_cone, ConeSummand, MappingCone, SummandKind};
pub use hf::{
    cone_homology, hf_plus, hf_plus_with, ConeHomology, HFResult, Orientation, SpinCResult, SurgeryOptions,
};

use crate::acomplex::genus;
use crate::cfk::KnotComplex;
use crate::{Error, Rational, Result};

/// A nonzero slope `p/q` in lowest terms with `q ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSlope("denominator must be nonzero".into()));
        }
        if p == 0 {
            return Err(Error::InvalidSlope("slope must be nonzero".into()));
        }
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidSlope(format!("{p}/{q} is not in lowest terms")));
        }
        Ok(Slope { p, q })
    }

    pub fn is_positive(&self) -> bool {
        self.p > 0
    }

    /// `|p|/q`
    pub fn abs(&self) -> Slope {
        Slope {
            p: self.p.abs(),
            q: self.q,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSlope(format!("expected p/q, got `{s}`"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

/// Shape of one truncated cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurgeryDescriptor {
    pub p: i64,
    pub q: i64,
    /// Spin^c index in `0..p`.
    pub spin_c: i64,
    pub sigma: i64,
    /// Number of `U`-levels kept above the bottom of every summand.
    pub depth: i64,
}

impl SurgeryDescriptor {
    pub fn new(slope: Slope, spin_c: i64, sigma: i64, depth: i64) -> Result<Self> {
        if !slope.is_positive() {
            return Err(Error::InvalidSlope(format!("cone needs p > 0, got {slope}")));
        }
        if sigma < 1 || depth < 1 {
            return Err(Error::InvalidArgument(format!("sigma {sigma} and depth {depth} must be positive")));
        }
        Ok(SurgeryDescriptor {
            p: slope.p,
            q: slope.q,
            spin_c: spin_c.rem_euclid(slope.p),
            sigma,
            depth,
        })
    }

    /// `k_s = ⌊(i + ps)/q⌋`
    pub fn k(&self, s: i64) -> i64 {
        Integer::div_floor(&(self.spin_c + self.p * s), &self.q)
    }
}

/// Smallest `σ ≥ 1` such that `k_s ≥ g` for all `s > σ` and `k_s ≤ −g`
/// for all `s < −σ`, where `g` is the genus.
pub fn truncation_sigma(k: &KnotComplex, p: i64, q: i64, i: i64) -> Result<i64> {
    sigma_for_genus(genus(k), p, q, i)
}

pub(crate) fn sigma_for_genus(g: i64, p: i64, q: i64, i: i64) -> Result<i64> {
    if p <= 0 || q <= 0 {
        return Err(Error::InvalidSlope(format!("σ needs p, q > 0, got {p}/{q}")));
    }
    let k = |s: i64| Integer::div_floor(&(i + p * s), &q);
    let mut sigma = 1;
    while k(sigma + 1) < g || k(-sigma - 1) > -g {
        sigma += 1;
    }
    Ok(sigma)
}

/// Correction term `d(S³_{p/q}(O), i)` of the lens space obtained by
/// surgery on the unknot, via the reciprocity recursion
/// `d(p, q, i) = ((2i + 1 − p − q)² − pq)/(4pq) − d(q, p mod q, i mod q)`.
pub fn lens_d_oracle(p: i64, q: i64, i: i64) -> Result<Rational> {
    if p < 1 || q < 0 || (q == 0 && p != 1) || p.gcd(&q) != 1 {
        return Err(Error::InvalidArgument(format!("lens space parameters {p}, {q}")));
    }
    if !(0..p).contains(&i) {
        return Err(Error::InvalidArgument(format!("index {i} outside 0..{p}")));
    }
    Ok(lens_d(p, q, i))
}

fn lens_d(p: i64, q: i64, i: i64) -> Rational {
    if p == 1 {
        return Rational::from_integer(0);
    }
    let num = (2 * i + 1 - p - q).pow(2) - p * q;
    Rational::new(num, 4 * p * q) - lens_d(q, p % q, i % q)
}
