//! Concrete truncated realizations of `C{region}` for a knot complex, the
//! maps `v⁺ₛ, h⁺ₛ : A⁺ₛ → B⁺`, and knot invariants read off from them.

mod invariants;

use std::collections::HashMap;

pub use invariants::{
    alexander_polynomial, exactness_at_genus, genus, hfk_hat, kernel_rank_v, ExactnessReport, LaurentPoly,
};

use crate::cfk::{KnotComplex, Region};
use crate::homology::{graded_homology, induced_map, ChainMap, GradedComplex, GradedGroup, InducedMap};
use crate::{rat, Error, Result};

/// How an infinite upward-closed region is cut down to a finite complex.
/// Both choices keep a subcomplex, so homology is exact below a known degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Keep elements at height `0 ..= N` above the region boundary.
    Depth(i64),
    /// Keep elements of Maslov grading at most `D`.
    DegreeCap(i64),
    /// Finite regions only.
    None,
}

/// `C{region}` realized on the basis of `U`-translates `(x, k) = U⁻ᵏ·x`,
/// which sit at `(i_x + k, j_x + k)` in grading `m_x + 2k`.
#[derive(Debug, Clone)]
pub struct RealizedRegion {
    pub region: Region,
    pub truncation: Truncation,
    pub complex: GradedComplex,
    elements: Vec<(usize, i64)>,
    index: HashMap<(usize, i64), usize>,
}

impl RealizedRegion {
    /// `(generator index, translate)` of a basis element.
    pub fn element(&self, id: usize) -> (usize, i64) {
        self.elements[id]
    }

    pub fn id_of(&self, generator: usize, translate: i64) -> Option<usize> {
        self.index.get(&(generator, translate)).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn homology(&self) -> Result<GradedGroup> {
        graded_homology(&self.complex)
    }
}

/// Translate range `k_lo ..= k_hi` of generator `x` inside the region.
fn translate_range(k: &KnotComplex, x: usize, region: Region, trunc: Truncation) -> Result<Option<(i64, i64)>> {
    let g = k.generator(x);
    let m = k.maslov(x)?;
    let range = match (region, trunc) {
        (Region::Single { i, j }, Truncation::None) => {
            (i - g.i == j - g.j).then_some((i - g.i, i - g.i))
        }
        (Region::Box { i, j }, Truncation::None) => {
            let lo = (i.0 - g.i).max(j.0 - g.j);
            let hi = (i.1 - g.i).min(j.1 - g.j);
            (lo <= hi).then_some((lo, hi))
        }
        (r, Truncation::Depth(n)) if r.is_upward_closed() => {
            let lo = -r.height(g.i, g.j).expect("upward closed");
            Some((lo, lo + n))
        }
        (r, Truncation::DegreeCap(d)) if r.is_upward_closed() => {
            let lo = -r.height(g.i, g.j).expect("upward closed");
            let hi = (d - m).div_euclid(2);
            (lo <= hi).then_some((lo, hi))
        }
        (r, t) => {
            return Err(Error::RegionMismatch(format!(
                "truncation {t:?} does not apply to region {r}"
            )))
        }
    };
    Ok(range)
}

/// Builds the finite complex for `C{region}` under the given truncation.
/// Arrows leaving the realized basis are dropped, which is the induced
/// differential on a quotient (or subquotient) of `CFK∞`.
pub fn realize(k: &KnotComplex, region: Region, trunc: Truncation) -> Result<RealizedRegion> {
    if let Truncation::Depth(n) = trunc {
        if n < 0 {
            return Err(Error::InvalidArgument(format!("negative depth {n}")));
        }
    }
    let mut elements = Vec::new();
    for x in 0..k.len() {
        if let Some((lo, hi)) = translate_range(k, x, region, trunc)? {
            elements.extend((lo..=hi).map(|t| (x, t)));
        }
    }
    let grade = |&(x, t): &(usize, i64)| k.generators()[x].maslov.expect("checked") + 2 * t;
    elements.sort_by_key(|e| (grade(e), e.0, e.1));
    let index: HashMap<(usize, i64), usize> = elements.iter().enumerate().map(|(id, e)| (*e, id)).collect();
    let mut complex = GradedComplex::new(elements.iter().map(|e| rat(grade(e))).collect());
    for (id, &(x, t)) in elements.iter().enumerate() {
        for term in k.terms(x) {
            if let Some(&tgt) = index.get(&(term.target, t - term.u_exponent)) {
                complex.add_boundary(id, tgt, term.coefficient);
            }
        }
        if region.is_upward_closed() {
            if let Some(&tgt) = index.get(&(x, t - 1)) {
                complex.add_u(id, tgt, 1);
            }
        }
    }
    let trusted = match trunc {
        Truncation::Depth(n) => (0..k.len())
            .map(|x| {
                let g = k.generator(x);
                let lo = -region.height(g.i, g.j).expect("upward closed");
                g.maslov.expect("checked") + 2 * (lo + n + 1)
            })
            .min()
            .map(|q| rat(q - 2)),
        Truncation::DegreeCap(d) => Some(rat(d - 1)),
        Truncation::None => None,
    };
    complex.set_trusted_top(trusted);
    Ok(RealizedRegion {
        region,
        truncation: trunc,
        complex,
        elements,
        index,
    })
}

/// `v⁺ₛ` on realizations: keep `(x, k)` when `i_x + k ≥ 0`.
pub fn v_chain_map(k: &KnotComplex, a: &RealizedRegion, b: &RealizedRegion) -> ChainMap {
    let mut f = ChainMap::new(a.len(), rat(0));
    for (id, &(x, t)) in a.elements.iter().enumerate() {
        if k.generator(x).i + t >= 0 {
            if let Some(tgt) = b.id_of(x, t) {
                f.matrix.add(id, tgt, 1);
            }
        }
    }
    f
}

/// `h⁺ₛ` on realizations: keep `(x, k)` when `j_x + k ≥ s`, multiply by
/// `Uˢ` and apply the flip (scaled by the sign making it commute with `∂`).
pub fn h_chain_map(k: &KnotComplex, s: i64, a: &RealizedRegion, b: &RealizedRegion) -> Result<ChainMap> {
    let eps = flip_sign(k)?;
    let mut f = ChainMap::new(a.len(), rat(-2 * s));
    for (id, &(x, t)) in a.elements.iter().enumerate() {
        if k.generator(x).j + t >= s {
            let img = k.flip_of(x).ok_or(Error::MissingFlip)?;
            if let Some(tgt) = b.id_of(img.target, t - s) {
                f.matrix.add(id, tgt, eps * img.sign);
            }
        }
    }
    Ok(f)
}

pub(crate) fn flip_sign(k: &KnotComplex) -> Result<i64> {
    if !k.has_flip() {
        return Err(Error::MissingFlip);
    }
    k.flip_sign()
        .ok_or_else(|| Error::InvalidComplex(vec!["flip is not a chain map up to sign".into()]))
}

/// A chain map between two realizations, with both ends kept for
/// computing the induced map.
#[derive(Debug, Clone)]
pub struct RealizedMap {
    pub source: RealizedRegion,
    pub target: RealizedRegion,
    pub map: ChainMap,
}

impl RealizedMap {
    pub fn induced(&self) -> Result<InducedMap> {
        let hs = self.source.homology()?;
        let ht = self.target.homology()?;
        induced_map(&self.map, &self.source.complex, &self.target.complex, &hs, &ht)
    }
}

/// `v⁺ₛ : A⁺ₛ → B⁺` with both sides truncated at depth `n`.
pub fn map_v(k: &KnotComplex, s: i64, n: i64) -> Result<RealizedMap> {
    let a = realize(k, Region::a_plus(s), Truncation::Depth(n))?;
    let b = realize(k, Region::b_plus(), Truncation::Depth(n))?;
    let map = v_chain_map(k, &a, &b);
    map.check(&a.complex, &b.complex)?;
    Ok(RealizedMap { source: a, target: b, map })
}

/// `h⁺ₛ : A⁺ₛ → B⁺` with both sides truncated at depth `n`.
pub fn map_h(k: &KnotComplex, s: i64, n: i64) -> Result<RealizedMap> {
    let a = realize(k, Region::a_plus(s), Truncation::Depth(n))?;
    let b = realize(k, Region::b_plus(), Truncation::Depth(n))?;
    let map = h_chain_map(k, s, &a, &b)?;
    map.check(&a.complex, &b.complex)?;
    Ok(RealizedMap { source: a, target: b, map })
}

/// A depth at which `H(A⁺ₛ)` and `H(B⁺)` show the tower well above every
/// reduced class for `|s|` up to the Alexander range of `k`.
pub fn default_depth(k: &KnotComplex) -> i64 {
    let (lo, hi) = k.alexander_range();
    4 * (k.grading_spread() + hi.abs().max(lo.abs()) + 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::{builtin, BUILTIN_NAMES};
    use crate::homology::tower_decompose;

    #[test]
    fn unknot_tower() {
        let u = builtin("unknot").unwrap();
        let r = realize(&u, Region::b_plus(), Truncation::Depth(5)).unwrap();
        assert_eq!(r.len(), 6);
        let degrees: Vec<_> = r.complex.degrees().to_vec();
        assert_eq!(degrees, (0..6).map(|k| rat(2 * k)).collect::<Vec<_>>());
        assert_eq!(r.complex.boundary().nonzero_entries(), 0);
    }

    #[test]
    fn right_trefoil_a0_is_a_tower() {
        let k = builtin("trefoil_right").unwrap();
        let r = realize(&k, Region::a_plus(0), Truncation::Depth(8)).unwrap();
        let t = tower_decompose(&r.homology().unwrap(), 3).unwrap();
        assert!(t.reduced.is_zero());
        assert!(t.stabilized);
    }

    #[test]
    fn figure_eight_single_level() {
        let k = builtin("figure_eight").unwrap();
        let r = realize(&k, Region::Single { i: 0, j: 0 }, Truncation::None).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.homology().unwrap().total_free_rank(), 3);
    }

    #[test]
    fn truncation_must_fit_the_region() {
        let k = builtin("unknot").unwrap();
        assert!(matches!(
            realize(&k, Region::Single { i: 0, j: 0 }, Truncation::Depth(3)),
            Err(Error::RegionMismatch(_))
        ));
        assert!(matches!(
            realize(&k, Region::b_plus(), Truncation::None),
            Err(Error::RegionMismatch(_))
        ));
    }

    #[test]
    fn unknot_maps_are_identities() {
        let u = builtin("unknot").unwrap();
        for s in 0..3 {
            let v = map_v(&u, s, 6).unwrap();
            assert!(v.induced().unwrap().is_isomorphism());
        }
        let h = map_h(&u, 0, 6).unwrap();
        assert!(h.induced().unwrap().is_isomorphism());
    }

    #[test]
    fn right_trefoil_v0_is_multiplication_by_u() {
        let k = builtin("trefoil_right").unwrap();
        let v = map_v(&k, 0, 10).unwrap().induced().unwrap();
        assert_eq!(v.degree_shift, rat(0));
        // H(A₀) tower starts at −2, H(B⁺) at 0: v is U on the tower
        let ha = v.support();
        assert!(ha.contains(&rat(-2)));
        assert_eq!(v.kernel_rank(), 1);
        assert!(v.is_surjective());
    }

    #[test]
    fn figure_eight_v1_is_iso() {
        let k = builtin("figure_eight").unwrap();
        assert!(map_v(&k, 1, 10).unwrap().induced().unwrap().is_isomorphism());
    }

    #[test]
    fn left_trefoil_h_minus_2_is_iso() {
        let k = builtin("trefoil_left").unwrap();
        assert!(map_h(&k, -2, 12).unwrap().induced().unwrap().is_isomorphism());
    }

    #[test]
    fn large_s_iso_and_surjective_maps() {
        for name in BUILTIN_NAMES {
            let k = builtin(name).unwrap();
            let g = genus(&k);
            let n = default_depth(&k);
            for s in -3..=3 {
                let v = map_v(&k, s, n).unwrap().induced().unwrap();
                let h = map_h(&k, s, n).unwrap().induced().unwrap();
                assert!(v.is_surjective(), "{name} v{s}");
                assert!(h.is_surjective(), "{name} h{s}");
                if s >= g {
                    assert!(v.is_isomorphism(), "{name} v{s}");
                }
                if s <= -g {
                    assert!(h.is_isomorphism(), "{name} h{s}");
                }
            }
        }
    }
}
