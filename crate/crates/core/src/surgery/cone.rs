use std::collections::BTreeMap;

use super::SurgeryDescriptor;
use crate::acomplex::{flip_sign, h_chain_map, realize, v_chain_map, RealizedRegion, Truncation};
use crate::cfk::{KnotComplex, Region};
use crate::homology::{ChainMap, GradedComplex};
use crate::{rat, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SummandKind {
    /// `A⁺_{k_s}`
    A,
    /// `B⁺`
    B,
}

#[derive(Debug, Clone)]
pub struct ConeSummand {
    pub kind: SummandKind,
    pub s: i64,
    /// Region parameter: `k_s` for `A`, `0` for `B`.
    pub k: i64,
    /// Added to the Maslov grading of every element.
    pub offset: i64,
    /// First id of this summand in the cone basis.
    pub start: usize,
    pub realization: RealizedRegion,
}

/// The truncated cone as one graded complex, with the summand layout.
#[derive(Debug, Clone)]
pub struct MappingCone {
    pub descriptor: SurgeryDescriptor,
    pub summands: Vec<ConeSummand>,
    pub complex: GradedComplex,
}

impl MappingCone {
    pub fn a_count(&self) -> usize {
        self.summands.iter().filter(|s| s.kind == SummandKind::A).count()
    }

    pub fn b_count(&self) -> usize {
        self.summands.iter().filter(|s| s.kind == SummandKind::B).count()
    }
}

/// Offsets making `v : A_s → B_s` and `h : A_s → B_{s+1}` drop the cone
/// degree by one, with `B_0` at `base_offset`. Every constraint is checked
/// once the system has been solved.
fn solve_offsets(d: &SurgeryDescriptor, base_offset: i64) -> Result<BTreeMap<(SummandKind, i64), i64>> {
    use SummandKind::{A, B};
    let sigma = d.sigma;
    // (a-summand s, b-summand t, required o_B − o_A)
    let mut edges = Vec::new();
    for s in -sigma..=sigma {
        if s > -sigma {
            edges.push((s, s, -1));
        }
        if s < sigma {
            edges.push((s, s + 1, 2 * d.k(s) - 1));
        }
    }
    let mut off: BTreeMap<(SummandKind, i64), i64> = BTreeMap::from([((B, 0), base_offset)]);
    let mut changed = true;
    while changed {
        changed = false;
        for &(s, t, diff) in &edges {
            match (off.get(&(A, s)).copied(), off.get(&(B, t)).copied()) {
                (Some(a), None) => {
                    off.insert((B, t), a + diff);
                    changed = true;
                }
                (None, Some(b)) => {
                    off.insert((A, s), b - diff);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    for &(s, t, diff) in &edges {
        match (off.get(&(A, s)), off.get(&(B, t))) {
            (Some(a), Some(b)) if b - a == diff => {}
            _ => {
                return Err(Error::OffsetInconsistency(format!(
                    "A_{s} → B_{t} does not drop the grading by one"
                )))
            }
        }
    }
    Ok(off)
}

fn bottom(k: &KnotComplex, region: Region) -> i64 {
    (0..k.len())
        .map(|x| {
            let g = k.generator(x);
            let lo = -region.height(g.i, g.j).expect("upward closed");
            g.maslov.expect("graded") + 2 * lo
        })
        .min()
        .expect("nonempty complex")
}

/// Assembles the truncated cone. Every summand is cut at one common cone
/// degree `C`, chosen so that the highest summand bottom still has `depth`
/// `U`-levels below it; homology is exact up to degree `C − 1`.
pub fn build_mapping_cone(k: &KnotComplex, d: &SurgeryDescriptor, base_offset: i64) -> Result<MappingCone> {
    use SummandKind::{A, B};
    flip_sign(k)?;
    if !k.has_gradings() {
        return Err(Error::MissingGradings(
            k.generators().iter().find(|g| g.maslov.is_none()).map(|g| g.name.clone()).unwrap_or_default(),
        ));
    }
    let offsets = solve_offsets(d, base_offset)?;
    let layout: Vec<(SummandKind, i64, i64, Region)> = (-d.sigma..=d.sigma)
        .map(|s| (A, s, d.k(s), Region::a_plus(d.k(s))))
        .chain((-d.sigma + 1..=d.sigma).map(|s| (B, s, 0, Region::b_plus())))
        .collect();
    let cap = layout
        .iter()
        .map(|(kind, s, _, region)| bottom(k, *region) + offsets[&(*kind, *s)])
        .max()
        .expect("σ ≥ 1")
        + 2 * d.depth;

    let mut summands = Vec::with_capacity(layout.len());
    let mut degrees = Vec::new();
    for (kind, s, kk, region) in layout {
        let offset = offsets[&(kind, s)];
        let realization = realize(k, region, Truncation::DegreeCap(cap - offset))?;
        let start = degrees.len();
        degrees.extend(realization.complex.degrees().iter().map(|g| g + rat(offset)));
        summands.push(ConeSummand {
            kind,
            s,
            k: kk,
            offset,
            start,
            realization,
        });
    }

    let mut complex = GradedComplex::new(degrees);
    let place = |complex: &mut GradedComplex, from: &ConeSummand, to: &ConeSummand, f: &ChainMap| {
        for src in 0..from.realization.len() {
            for &(tgt, c) in f.matrix.column(src) {
                complex.add_boundary(from.start + src, to.start + tgt, c);
            }
        }
    };
    let index: BTreeMap<(SummandKind, i64), usize> =
        summands.iter().enumerate().map(|(n, s)| ((s.kind, s.s), n)).collect();
    for sm in &summands {
        let inner = &sm.realization.complex;
        let sign = if sm.kind == A { -1 } else { 1 };
        for src in 0..inner.len() {
            for &(tgt, c) in inner.boundary().column(src) {
                complex.add_boundary(sm.start + src, sm.start + tgt, sign * c);
            }
            for &(tgt, c) in inner.u_action().column(src) {
                complex.add_u(sm.start + src, sm.start + tgt, c);
            }
        }
    }
    for sm in summands.iter().filter(|sm| sm.kind == A) {
        if let Some(&b) = index.get(&(B, sm.s)) {
            let v = v_chain_map(k, &sm.realization, &summands[b].realization);
            place(&mut complex, sm, &summands[b], &v);
        }
        if let Some(&b) = index.get(&(B, sm.s + 1)) {
            let h = h_chain_map(k, sm.k, &sm.realization, &summands[b].realization)?;
            place(&mut complex, sm, &summands[b], &h);
        }
    }
    complex.set_trusted_top(Some(rat(cap - 1)));
    Ok(MappingCone {
        descriptor: *d,
        summands,
        complex,
    })
}
