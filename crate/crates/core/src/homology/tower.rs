use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::group::{GradedGroup, Summand};
use super::matrix::{snf_checked, IntMatrix, Track};
use crate::{rat, Error, Rational, Result};

/// `H ≅ T⁺_(d_bottom) ⊕ reduced`.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerDecomposition {
    pub d_bottom: Rational,
    pub reduced: GradedGroup,
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Walk {
    bottom: Rational,
    reduced: Vec<(Rational, Summand)>,
}

fn cokernel_of_class(h: &Summand, class: &[BigInt]) -> Summand {
    let gens = h.torsion.len() + h.free_rank;
    let mut pres = IntMatrix::zeros(gens, h.torsion.len() + 1);
    for (k, t) in h.torsion.iter().enumerate() {
        pres[(k, k)] = t.clone();
    }
    for (r, v) in class.iter().enumerate() {
        pres[(r, h.torsion.len())] = v.clone();
    }
    let snf = snf_checked(pres, Track { left: false, right: false }).expect("BigInt");
    Summand {
        free_rank: gens - snf.rank,
        torsion: snf
            .invariant_factors()
            .into_iter()
            .filter(|f| f.abs() > BigInt::from(1))
            .collect(),
    }
}

fn is_zero_class(h: &Summand, class: &[BigInt]) -> bool {
    class.iter().enumerate().all(|(k, v)| match h.torsion.get(k) {
        Some(t) => v.mod_floor(t).is_zero(),
        None => v.is_zero(),
    })
}

fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .zip(v)
                .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

/// Follows the class generating `H_top` down the `U`-ladder.
fn walk(h: &GradedGroup, top: Rational) -> Result<Walk> {
    let two = rat(2);
    let summands = h.summands();
    let top_summand = &summands[&top];
    let mut class: Vec<BigInt> = vec![BigInt::from(1)];
    debug_assert!(top_summand.is_infinite_cyclic());
    let mut degree = top;
    let mut tower: Vec<(Rational, Vec<BigInt>)> = vec![(top, class.clone())];
    loop {
        let next = degree - two;
        let Some(m) = h.u_map(degree) else { break };
        class = mat_vec(m, &class);
        let s = &summands[&next];
        if is_zero_class(s, &class) {
            break;
        }
        let free_part_zero = class[s.torsion.len()..].iter().all(Zero::is_zero);
        if free_part_zero {
            return Err(Error::TorsionInTower(next));
        }
        tower.push((next, class.clone()));
        degree = next;
    }
    let bottom = tower.last().expect("top is on the tower").0;
    let mut reduced = Vec::new();
    for (d, s) in summands.range(..=top) {
        match tower.iter().find(|(td, _)| td == d) {
            Some((_, c)) => {
                let q = cokernel_of_class(s, c);
                if !q.is_zero() {
                    reduced.push((*d, q));
                }
            }
            None => reduced.push((*d, s.clone())),
        }
    }
    Ok(Walk { bottom, reduced })
}

/// Splits the homology of a truncated tower-bearing complex into the tower
/// `T⁺` and the reduced part.
///
/// The `width` highest degrees (counted down from the highest nonzero
/// degree) must look like the top of a tower: `ℤ` in every other degree,
/// zero in between, `U` an isomorphism from each `ℤ` to the next.
pub fn tower_decompose(h: &GradedGroup, width: usize) -> Result<TowerDecomposition> {
    let Some(top) = h.max_degree() else {
        return Err(Error::NotStabilized("homology is zero".into()));
    };
    let summands = h.summands();
    let two = rat(2);
    let width = width.max(3);
    let zero = Summand {
        free_rank: 0,
        torsion: Vec::new(),
    };
    for step in 0..width as i64 {
        let d = top - rat(step);
        let s = summands.get(&d).unwrap_or(&zero);
        if step % 2 == 0 {
            if !s.torsion.is_empty() {
                return Err(Error::TorsionInTower(d));
            }
            if !s.is_infinite_cyclic() {
                return Err(Error::NotStabilized(format!(
                    "expected ℤ in tower degree {d}, found rank {}",
                    s.free_rank
                )));
            }
            if step + 2 < width as i64 {
                let iso = h
                    .u_map(d)
                    .is_some_and(|m| m.rows() == 1 && m.cols() == 1 && m[(0, 0)].abs() == BigInt::from(1));
                if !iso {
                    return Err(Error::NotStabilized(format!(
                        "U is not an isomorphism out of degree {d}"
                    )));
                }
            }
        } else if !s.is_zero() {
            return Err(Error::NotStabilized(format!(
                "nonzero homology in degree {d} inside the top tower window"
            )));
        }
    }
    let full = walk(h, top)?;
    let lower = walk(&h.truncated_above(top - two), top - two)?;
    let stabilized = full.bottom == lower.bottom
        && full
            .reduced
            .iter()
            .filter(|(d, _)| *d <= top - two)
            .eq(lower.reduced.iter());
    Ok(TowerDecomposition {
        d_bottom: full.bottom,
        reduced: GradedGroup::from_summands(full.reduced),
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{graded_homology, GradedComplex};

    /// x_0, …, x_n in degrees bottom, bottom+2, … with U x_k = x_{k−1}.
    fn tower(bottom: i64, n: usize) -> GradedComplex {
        let mut c = GradedComplex::new((0..=n).map(|k| rat(bottom + 2 * k as i64)).collect());
        for k in 1..=n {
            c.add_u(k, k - 1, 1);
        }
        c
    }

    #[test]
    fn bare_tower() {
        let h = graded_homology(&tower(0, 8)).unwrap();
        let t = tower_decompose(&h, 4).unwrap();
        assert_eq!(t.d_bottom, rat(0));
        assert!(t.reduced.is_zero());
        assert!(t.stabilized);
    }

    #[test]
    fn tower_plus_extra_z() {
        // tower from 0, plus a U-killed class in degree 0
        let mut c = tower(0, 6);
        let mut degrees = c.degrees().to_vec();
        degrees.push(rat(0));
        let mut d = GradedComplex::new(degrees);
        for k in 1..=6 {
            d.add_u(k, k - 1, 1);
        }
        c = d;
        let h = graded_homology(&c).unwrap();
        let t = tower_decompose(&h, 4).unwrap();
        assert_eq!(t.d_bottom, rat(0));
        assert_eq!(t.reduced.summands()[&rat(0)].free_rank, 1);
    }

    #[test]
    fn u_to_a_second_copy_moves_the_bottom() {
        // tower from 2 whose bottom maps by U onto an extra class in degree 0
        let mut c = GradedComplex::new(vec![rat(0), rat(2), rat(4), rat(6), rat(8)]);
        for k in 1..5 {
            c.add_u(k, k - 1, 1);
        }
        let h = graded_homology(&c).unwrap();
        assert_eq!(tower_decompose(&h, 4).unwrap().d_bottom, rat(0));
    }

    #[test]
    fn torsion_at_the_top_is_an_error() {
        let mut c = GradedComplex::new(vec![rat(1), rat(0)]);
        c.add_boundary(0, 1, 2);
        let h = graded_homology(&c).unwrap();
        assert!(matches!(tower_decompose(&h, 4), Err(Error::TorsionInTower(_))));
    }
}
