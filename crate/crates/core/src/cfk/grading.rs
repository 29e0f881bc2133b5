use std::collections::VecDeque;

use super::{validate, KnotComplex, ViolationKind};
use crate::acomplex::{realize, Truncation};
use crate::cfk::Region;
use crate::homology::{smith_normal_form_i64, tower_decompose, Matrix};
use crate::{Error, Result};

/// Connected components of the undirected arrow graph.
fn components(k: &KnotComplex) -> Vec<Vec<usize>> {
    let n = k.len();
    let mut adj = vec![Vec::new(); n];
    for (src, t) in k.arrows() {
        adj[src].push(t.target);
        adj[t.target].push(src);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// Relative gradings within one component, `rel[start] = 0`.
fn relative_gradings(k: &KnotComplex, comp: &[usize]) -> Result<Vec<(usize, i64)>> {
    let mut rel: Vec<Option<i64>> = vec![None; k.len()];
    rel[comp[0]] = Some(0);
    // arrows are few; relax until every member is reached
    let mut changed = true;
    while changed {
        changed = false;
        for (src, t) in k.arrows() {
            // m_y = m_x − 1 + 2n
            match (rel[src], rel[t.target]) {
                (Some(mx), None) => {
                    rel[t.target] = Some(mx - 1 + 2 * t.u_exponent);
                    changed = true;
                }
                (None, Some(my)) => {
                    rel[src] = Some(my + 1 - 2 * t.u_exponent);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    for (src, t) in k.arrows() {
        if let (Some(mx), Some(my)) = (rel[src], rel[t.target]) {
            if my - 2 * t.u_exponent != mx - 1 {
                return Err(Error::InconsistentGrading(format!(
                    "arrow {} → {} closes a cycle with nonzero grading drift",
                    k.generator(src).name,
                    k.generator(t.target).name
                )));
            }
        }
    }
    Ok(comp.iter().map(|&x| (x, rel[x].expect("connected"))).collect())
}

/// Rank of the homology of one component with `U` set to 1.
fn homology_rank_at_u_one(k: &KnotComplex, comp: &[usize]) -> usize {
    let pos = |x: usize| comp.binary_search(&x).expect("same component");
    let mut m = Matrix::<i64>::zeros(comp.len(), comp.len());
    for &x in comp {
        for t in k.terms(x) {
            m[(pos(t.target), pos(x))] += t.coefficient;
        }
    }
    comp.len() - 2 * smith_normal_form_i64(&m).rank
}

fn sub_complex(k: &KnotComplex, comp: &[usize], grading: impl Fn(usize) -> i64) -> KnotComplex {
    let mut out = KnotComplex::new();
    for &x in comp {
        let g = k.generator(x);
        out.add_generator(&g.name, g.i, g.j, Some(grading(x)));
    }
    let pos = |x: usize| comp.binary_search(&x).expect("same component");
    for &x in comp {
        for t in k.terms(x) {
            out.add_term_at(pos(x), t.coefficient, t.u_exponent, pos(t.target));
        }
    }
    out
}

/// Bottom grading of the tower in `H(C{i ≥ 0})`.
fn tower_bottom(k: &KnotComplex) -> Result<i64> {
    let spread = k.generators().iter().map(|g| (g.i - g.j).abs()).max().unwrap_or(0);
    let mut depth = 2 * (spread + k.len() as i64) + 4;
    for _ in 0..4 {
        let r = realize(k, Region::b_plus(), Truncation::Depth(depth))?;
        match tower_decompose(&r.homology()?, 3) {
            Ok(t) if t.stabilized => return Ok(t.d_bottom.to_integer()),
            Ok(_) | Err(Error::NotStabilized(_)) => depth *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotStabilized("tower of C{i ≥ 0} while solving gradings".into()))
}

/// Assigns Maslov gradings from the differential.
///
/// Each connected component of the arrow graph has its gradings fixed up to
/// a constant. Exactly one component carries homology (rank one with
/// `U = 1`); its constant is chosen so that the tower of `H(C{i ≥ 0})`
/// starts in grading 0. Acyclic components are placed so that their
/// smallest `i + j − m` equals that of the homology-carrying component.
/// Gradings already present are kept and must be consistent with this.
pub fn grading_solve(k: &KnotComplex) -> Result<KnotComplex> {
    let structural = validate(k).ignoring_gradings();
    let structural: Vec<String> = structural
        .into_iter()
        .filter(|m| !m.contains("flip changes the grading"))
        .collect();
    if !structural.is_empty() {
        return Err(Error::InvalidComplex(structural));
    }
    if k.is_empty() {
        return Err(Error::InvalidComplex(vec!["complex has no generators".into()]));
    }
    let comps = components(k);
    let mut rels = Vec::with_capacity(comps.len());
    for comp in &comps {
        rels.push(relative_gradings(k, comp)?);
    }
    let ranks: Vec<usize> = comps.iter().map(|c| homology_rank_at_u_one(k, c)).collect();
    let carriers: Vec<usize> = (0..comps.len()).filter(|&c| ranks[c] > 0).collect();
    let tower = match carriers.as_slice() {
        [c] if ranks[*c] == 1 => *c,
        [c] => {
            return Err(Error::InvalidComplex(vec![format!(
                "homology with U = 1 has rank {}, expected 1",
                ranks[*c]
            )]))
        }
        [] => return Err(Error::InvalidComplex(vec!["complex is acyclic with U = 1".into()])),
        _ => {
            return Err(Error::AmbiguousGrading(format!(
                "{} disconnected pieces carry homology",
                carriers.len()
            )))
        }
    };

    // constant per component from existing gradings, if any
    let anchor = |c: usize| -> Result<Option<i64>> {
        let mut found: Option<i64> = None;
        for &(x, r) in &rels[c] {
            if let Some(m) = k.generator(x).maslov {
                match found {
                    None => found = Some(m - r),
                    Some(f) if f != m - r => {
                        return Err(Error::InconsistentGrading(format!(
                            "given grading of {} disagrees with the differential",
                            k.generator(x).name
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(found)
    };

    let mut solved = vec![0i64; k.len()];
    let rel_of = |c: usize, x: usize| rels[c].iter().find(|(y, _)| *y == x).expect("member").1;
    let provisional = sub_complex(k, &comps[tower], |x| rel_of(tower, x));
    let normalizing = -tower_bottom(&provisional)?;
    if let Some(given) = anchor(tower)? {
        if given != normalizing {
            return Err(Error::InconsistentGrading(format!(
                "given gradings put the bottom of the tower of C{{i ≥ 0}} at {}, not 0",
                given - normalizing
            )));
        }
    }
    for &(x, r) in &rels[tower] {
        solved[x] = r + normalizing;
    }
    let delta = |x: usize, m: i64| k.generator(x).i + k.generator(x).j - m;
    let target_delta = rels[tower].iter().map(|&(x, _)| delta(x, solved[x])).min().expect("nonempty");
    for c in (0..comps.len()).filter(|&c| c != tower) {
        let constant = match anchor(c)? {
            Some(v) => v,
            None => {
                let min_delta = rels[c].iter().map(|&(x, r)| delta(x, r)).min().expect("nonempty");
                min_delta - target_delta
            }
        };
        for &(x, r) in &rels[c] {
            solved[x] = r + constant;
        }
    }
    let mut out = k.clone();
    for (x, m) in solved.into_iter().enumerate() {
        out.set_maslov(x, m);
    }
    let report = validate(&out);
    if report
        .violations
        .iter()
        .any(|v| matches!(v.kind, ViolationKind::Grading | ViolationKind::Flip))
    {
        return Err(Error::InconsistentGrading(report.messages().join("; ")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::builtin;

    #[test]
    fn unknot_gets_zero() {
        let mut k = KnotComplex::new();
        k.add_generator("a", 0, 0, None);
        assert_eq!(grading_solve(&k).unwrap().generator(0).maslov, Some(0));
    }

    #[test]
    fn two_isolated_generators_are_ambiguous() {
        let mut k = KnotComplex::new();
        k.add_generator("a", 0, 0, None);
        k.add_generator("b", 0, 0, None);
        let err = grading_solve(&k).unwrap_err();
        assert!(err.to_string().contains("ambiguous relative grading"), "{err}");
    }

    #[test]
    fn right_trefoil_tower_normalization() {
        let k = builtin("trefoil_right").unwrap();
        let r = realize(&k, Region::b_plus(), Truncation::Depth(10)).unwrap();
        let t = tower_decompose(&r.homology().unwrap(), 3).unwrap();
        assert_eq!(t.d_bottom, crate::rat(0));
        assert!(t.reduced.is_zero());
    }

    #[test]
    fn given_gradings_are_checked() {
        let mut k = KnotComplex::new();
        k.add_generator("a", 0, 0, Some(2));
        assert!(matches!(grading_solve(&k), Err(Error::InconsistentGrading(_))));
        let mut k = KnotComplex::new();
        k.add_generator("a", -1, 0, Some(-2));
        k.add_generator("b", 0, 0, Some(0));
        k.add_generator("c", 0, -1, None);
        k.add_term("b", 1, 0, "a").unwrap();
        k.add_term("b", 1, 0, "c").unwrap();
        assert!(matches!(grading_solve(&k), Err(Error::InconsistentGrading(_))));
    }

    #[test]
    fn inconsistent_cycle() {
        // a → b and a → U·b force two different gradings on b
        let mut k = KnotComplex::new();
        k.add_generator("a", 1, 1, None);
        k.add_generator("b", 0, 0, None);
        k.add_term("a", 1, 0, "b").unwrap();
        k.add_term("a", 1, 1, "b").unwrap();
        assert!(matches!(grading_solve(&k), Err(Error::InconsistentGrading(_))));
    }
}
