use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{build_mapping_cone, lens_d, sigma_for_genus, Slope, SurgeryDescriptor};
use crate::acomplex::genus;
use crate::cfk::{builtin, mirror, KnotComplex};
use crate::homology::{graded_homology, tower_decompose, GradedGroup};
use crate::{par, Error, Rational, Result};

/// Which manifold the numbers describe. Negative slopes are computed as
/// `S³_{|p|/q}(mirror K) = −S³_{p/q}(K)`; only `d` is transported back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Standard,
    Reversed,
}

impl Orientation {
    pub fn label(&self) -> &'static str {
        match self {
            Orientation::Standard => "standard",
            Orientation::Reversed => "reversed",
        }
    }
}

/// `HF⁺` in one Spin^c structure.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinCResult {
    pub index: i64,
    /// Correction term: grading of the bottom of the tower.
    pub d: Rational,
    pub hf_red: GradedGroup,
    /// Free rank of `HF_red` in degrees `δ` with `δ − d` even, and odd.
    pub parity: (usize, usize),
}

impl SpinCResult {
    fn new(index: i64, d: Rational, hf_red: GradedGroup) -> Self {
        let mut parity = (0, 0);
        for (deg, h) in hf_red.iter() {
            let diff = deg - d;
            debug_assert!(diff.is_integer());
            if diff.to_integer().rem_euclid(2) == 0 {
                parity.0 += h.summand.free_rank;
            } else {
                parity.1 += h.summand.free_rank;
            }
        }
        SpinCResult {
            index,
            d,
            hf_red,
            parity,
        }
    }

    pub fn reduced_rank(&self) -> usize {
        self.hf_red.total_free_rank()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HFResult {
    /// The slope as requested.
    pub slope: Slope,
    pub orientation: Orientation,
    /// Half-width of the cone, shared by all indices.
    pub sigma: i64,
    /// `U`-truncation depth that passed the stabilization check.
    pub depth: i64,
    pub spin_c: Vec<SpinCResult>,
}

impl HFResult {
    pub fn total_reduced_rank(&self) -> usize {
        self.spin_c.iter().map(SpinCResult::reduced_rank).sum()
    }

    pub fn d_values(&self) -> Vec<Rational> {
        self.spin_c.iter().map(|r| r.d).collect()
    }

    pub fn get(&self, index: i64) -> Option<&SpinCResult> {
        self.spin_c.iter().find(|r| r.index == index)
    }

    /// Even and odd reduced ranks summed over all indices.
    pub fn parity(&self) -> (usize, usize) {
        self.spin_c
            .iter()
            .fold((0, 0), |acc, r| (acc.0 + r.parity.0, acc.1 + r.parity.1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurgeryOptions {
    /// `U`-depth; `None` picks one from the grading spread of the complex.
    pub depth: Option<i64>,
    /// Added to the minimal truncation width.
    pub extra_sigma: i64,
    /// Restrict to one Spin^c index.
    pub spin_c: Option<i64>,
    /// Grading of the `B_0` summand before calibration.
    pub base_offset: i64,
    /// How often the depth may double before giving up.
    pub max_doublings: u32,
}

impl Default for SurgeryOptions {
    fn default() -> Self {
        SurgeryOptions {
            depth: None,
            extra_sigma: 0,
            spin_c: None,
            base_offset: 0,
            max_doublings: 4,
        }
    }
}

/// Uncalibrated homology of one cone: tower bottom and reduced part in cone
/// degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeHomology {
    pub d_rel: Rational,
    pub reduced: GradedGroup,
}

pub fn cone_homology(k: &KnotComplex, d: &SurgeryDescriptor, base_offset: i64) -> Result<ConeHomology> {
    let cone = build_mapping_cone(k, d, base_offset)?;
    let h = graded_homology(&cone.complex)?;
    let t = tower_decompose(&h, 3)?;
    if !t.stabilized {
        return Err(Error::NotStabilized(format!(
            "cone for {}/{} index {} at depth {}",
            d.p, d.q, d.spin_c, d.depth
        )));
    }
    Ok(ConeHomology {
        d_rel: t.d_bottom,
        reduced: t.reduced,
    })
}

/// Same cone at depth `N` and `2N`; both must agree.
fn stable_cone(k: &KnotComplex, d: &SurgeryDescriptor, base_offset: i64) -> Result<ConeHomology> {
    let a = cone_homology(k, d, base_offset)?;
    let deeper = SurgeryDescriptor { depth: 2 * d.depth, ..*d };
    let b = cone_homology(k, &deeper, base_offset)?;
    if a != b {
        return Err(Error::NotStabilized(format!(
            "cone for {}/{} index {} differs between depth {} and {}",
            d.p, d.q, d.spin_c, d.depth, deeper.depth
        )));
    }
    Ok(a)
}

fn with_retries(
    k: &KnotComplex,
    d: &SurgeryDescriptor,
    base_offset: i64,
    doublings: u32,
) -> Result<(ConeHomology, i64)> {
    let mut d = *d;
    let mut attempt = 0;
    loop {
        match stable_cone(k, &d, base_offset) {
            Ok(h) => return Ok((h, d.depth)),
            Err(Error::NotStabilized(_)) if attempt < doublings => {
                attempt += 1;
                d.depth *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

type CalibrationKey = (i64, i64, i64, i64, i64);

fn calibration_cache() -> &'static Mutex<HashMap<CalibrationKey, Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<CalibrationKey, Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Amount to add to cone degrees of this shape to make them absolute: the
/// lens space correction term minus the unknot cone's tower bottom.
fn calibration(d: &SurgeryDescriptor, base_offset: i64) -> Result<Rational> {
    let key = (d.p, d.q, d.spin_c, d.sigma, base_offset);
    if let Some(c) = calibration_cache().lock().expect("cache lock").get(&key) {
        return Ok(*c);
    }
    let unknot = builtin("unknot")?;
    let shape = SurgeryDescriptor { depth: 8, ..*d };
    let (h, _) = with_retries(&unknot, &shape, base_offset, 4)?;
    if !h.reduced.is_zero() {
        return Err(Error::NotStabilized("unknot cone has reduced homology".into()));
    }
    let c = lens_d(d.p, d.q, d.spin_c) - h.d_rel;
    calibration_cache().lock().expect("cache lock").insert(key, c);
    Ok(c)
}

/// `HF⁺(S³_{p/q}(K))` for every Spin^c index.
pub fn hf_plus(k: &KnotComplex, p: i64, q: i64) -> Result<HFResult> {
    hf_plus_with(k, Slope::new(p, q)?, &SurgeryOptions::default())
}

pub fn hf_plus_with(k: &KnotComplex, slope: Slope, opts: &SurgeryOptions) -> Result<HFResult> {
    if !slope.is_positive() {
        let mut r = hf_plus_with(&mirror(k)?, slope.abs(), opts)?;
        r.slope = slope;
        r.orientation = Orientation::Reversed;
        for s in &mut r.spin_c {
            s.d = -s.d;
        }
        return Ok(r);
    }
    let Slope { p, q } = slope;
    let g = genus(k);
    let sigma = (0..p)
        .map(|i| sigma_for_genus(g, p, q, i))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .expect("p ≥ 1")
        + opts.extra_sigma.max(0);
    let depth = opts.depth.unwrap_or_else(|| 4 * (k.grading_spread() + 4));
    let indices: Vec<i64> = match opts.spin_c {
        Some(i) => vec![i.rem_euclid(p)],
        None => (0..p).collect(),
    };
    let computed = par::try_map(&indices, |&i| -> Result<(SpinCResult, i64)> {
        let d = SurgeryDescriptor::new(slope, i, sigma, depth)?;
        let (h, used) = with_retries(k, &d, opts.base_offset, opts.max_doublings)?;
        let c = calibration(&d, opts.base_offset)?;
        Ok((SpinCResult::new(i, h.d_rel + c, h.reduced.shifted(c)), used))
    })?;
    let depth = computed.iter().map(|(_, n)| *n).max().unwrap_or(depth);
    Ok(HFResult {
        slope,
        orientation: Orientation::Standard,
        sigma,
        depth,
        spin_c: computed.into_iter().map(|(r, _)| r).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn run(name: &str, p: i64, q: i64) -> HFResult {
        hf_plus(&builtin(name).unwrap(), p, q).unwrap()
    }

    #[test]
    fn unknot_one_surgery() {
        let r = run("unknot", 1, 1);
        assert_eq!(r.spin_c.len(), 1);
        assert_eq!(r.spin_c[0].d, rat(0));
        assert!(r.spin_c[0].hf_red.is_zero());
    }

    #[test]
    fn left_trefoil_one_surgery() {
        let r = run("trefoil_left", 1, 1);
        assert_eq!(r.spin_c[0].d, rat(0));
        assert_eq!(r.total_reduced_rank(), 1);
        assert_eq!(r.parity(), (1, 0));
    }

    #[test]
    fn right_trefoil_one_surgery() {
        let r = run("trefoil_right", 1, 1);
        assert_eq!(r.spin_c[0].d, rat(-2));
        assert_eq!(r.total_reduced_rank(), 0);
    }

    #[test]
    fn figure_eight_seven_thirds() {
        let r = run("figure_eight", 7, 3);
        assert_eq!(r.spin_c.len(), 7);
        assert_eq!(r.total_reduced_rank(), 3);
        assert_eq!(r.parity(), (0, 3));
    }

    #[test]
    fn gauge_shift_moves_relative_degrees_only() {
        let k = builtin("trefoil_left").unwrap();
        let d = SurgeryDescriptor::new(Slope::new(3, 2).unwrap(), 1, 2, 10).unwrap();
        let a = cone_homology(&k, &d, 0).unwrap();
        let b = cone_homology(&k, &d, 7).unwrap();
        assert_eq!(b.d_rel, a.d_rel + rat(7));
        assert_eq!(b.reduced, a.reduced.shifted(rat(7)));
        let opts = SurgeryOptions {
            base_offset: 7,
            ..SurgeryOptions::default()
        };
        let slope = Slope::new(3, 2).unwrap();
        assert_eq!(
            hf_plus_with(&k, slope, &opts).unwrap().d_values(),
            hf_plus(&k, 3, 2).unwrap().d_values()
        );
    }

    #[test]
    fn negative_slope_is_reversed() {
        let k = builtin("trefoil_right").unwrap();
        let r = hf_plus(&k, -1, 1).unwrap();
        assert_eq!(r.orientation, Orientation::Reversed);
        let l = hf_plus(&builtin("trefoil_left").unwrap(), 1, 1).unwrap();
        assert_eq!(r.d_values(), l.d_values().iter().map(|d| -d).collect::<Vec<_>>());
    }

    #[test]
    fn single_index() {
        let k = builtin("figure_eight").unwrap();
        let opts = SurgeryOptions {
            spin_c: Some(9),
            ..SurgeryOptions::default()
        };
        let r = hf_plus_with(&k, Slope::new(7, 3).unwrap(), &opts).unwrap();
        assert_eq!(r.spin_c.len(), 1);
        assert_eq!(r.spin_c[0].index, 2);
        assert_eq!(r.spin_c[0], run("figure_eight", 7, 3).spin_c[2]);
    }
}
