use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::complex::{ChainMap, GradedComplex};
use super::matrix::{mul, add, snf_checked, IntMatrix, Int, Matrix, Overflow, Track};
use crate::{par, Error, Rational, Result};

/// A chain with arbitrary-precision coefficients, indexed by basis id.
pub type Chain = Vec<(usize, BigInt)>;

/// Isomorphism type of one graded piece: `ℤ^free_rank ⊕ ⊕ ℤ/tᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Summand {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Summand {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `ℤ`
    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }
}

#[derive(Debug, Clone)]
struct DegreeData<T> {
    basis: Vec<usize>,
    /// Rows: homology coordinates (before dropping trivial ones).
    projector: Matrix<T>,
    factors: Vec<T>,
    gens: Vec<usize>,
}

#[derive(Debug, Clone)]
enum Coordinates {
    Small(DegreeData<i64>),
    Big(DegreeData<BigInt>),
}

impl Coordinates {
    fn apply(&self, chain: &[(usize, BigInt)]) -> Vec<BigInt> {
        match self {
            Coordinates::Small(d) => apply_projector(d, chain),
            Coordinates::Big(d) => apply_projector(d, chain),
        }
    }
}

fn apply_projector<T: Int>(d: &DegreeData<T>, chain: &[(usize, BigInt)]) -> Vec<BigInt> {
    let mut dense = vec![BigInt::zero(); d.basis.len()];
    for (id, c) in chain {
        let pos = d
            .basis
            .binary_search(id)
            .expect("chain supported outside the degree being projected");
        dense[pos] += c;
    }
    d.gens
        .iter()
        .map(|&g| {
            let mut v = BigInt::zero();
            for (k, x) in dense.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let p: BigInt = d.projector[(g, k)].clone().into();
                v += p * x;
            }
            let f: BigInt = d.factors[g].clone().into();
            if f.is_zero() {
                v
            } else {
                v.mod_floor(&f)
            }
        })
        .collect()
}

/// Homology of one degree with the data needed to name classes.
#[derive(Debug, Clone)]
pub struct DegreeHomology {
    pub summand: Summand,
    /// One cycle per generator: torsion generators first, then free ones.
    pub representatives: Vec<Chain>,
    coords: Option<Coordinates>,
}

impl DegreeHomology {
    /// Number of homology generators (torsion + free).
    pub fn generators(&self) -> usize {
        self.summand.torsion.len() + self.summand.free_rank
    }

    /// Order of each generator, `0` for free ones.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut v = self.summand.torsion.clone();
        v.extend(std::iter::repeat_n(BigInt::zero(), self.summand.free_rank));
        v
    }
}

/// Graded homology: finitely many rational degrees, each a finitely
/// generated abelian group, with the `U`-action between degrees `d` and `d−2`.
#[derive(Debug, Clone, Default)]
pub struct GradedGroup {
    degrees: BTreeMap<Rational, DegreeHomology>,
    /// `u_map[d]`: matrix of `U: H_d → H_{d−2}` in generator coordinates,
    /// present when both degrees are nonzero.
    u_map: BTreeMap<Rational, IntMatrix>,
}

impl PartialEq for GradedGroup {
    fn eq(&self, other: &Self) -> bool {
        self.summands() == other.summands()
    }
}

impl GradedGroup {
    /// A group given only by its isomorphism type in each degree.
    pub fn from_summands(items: impl IntoIterator<Item = (Rational, Summand)>) -> Self {
        let degrees = items
            .into_iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|(d, summand)| {
                (
                    d,
                    DegreeHomology {
                        summand,
                        representatives: Vec::new(),
                        coords: None,
                    },
                )
            })
            .collect();
        GradedGroup {
            degrees,
            u_map: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Nonzero degrees in ascending order.
    pub fn summands(&self) -> BTreeMap<Rational, Summand> {
        self.degrees
            .iter()
            .map(|(d, h)| (*d, h.summand.clone()))
            .collect()
    }

    pub fn get(&self, degree: Rational) -> Option<&DegreeHomology> {
        self.degrees.get(&degree)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, &DegreeHomology)> {
        self.degrees.iter()
    }

    pub fn free_rank(&self, degree: Rational) -> usize {
        self.degrees.get(&degree).map_or(0, |h| h.summand.free_rank)
    }

    pub fn total_free_rank(&self) -> usize {
        self.degrees.values().map(|h| h.summand.free_rank).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.values().any(|h| !h.summand.torsion.is_empty())
    }

    pub fn min_degree(&self) -> Option<Rational> {
        self.degrees.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<Rational> {
        self.degrees.keys().next_back().copied()
    }

    /// Matrix of `U: H_d → H_{d−2}`; `None` when either side vanishes.
    pub fn u_map(&self, degree: Rational) -> Option<&IntMatrix> {
        self.u_map.get(&degree)
    }

    /// Homology coordinates of a cycle supported in `degree`.
    pub fn coordinates(&self, degree: Rational, cycle: &[(usize, BigInt)]) -> Vec<BigInt> {
        match self.degrees.get(&degree).and_then(|h| h.coords.as_ref()) {
            Some(c) => c.apply(cycle),
            None => Vec::new(),
        }
    }

    /// Every degree moved by `shift`.
    pub fn shifted(&self, shift: Rational) -> Self {
        GradedGroup {
            degrees: self.degrees.iter().map(|(d, h)| (d + shift, h.clone())).collect(),
            u_map: self.u_map.iter().map(|(d, m)| (d + shift, m.clone())).collect(),
        }
    }

    /// Restriction to degrees `≤ top`.
    pub fn truncated_above(&self, top: Rational) -> Self {
        GradedGroup {
            degrees: self.degrees.range(..=top).map(|(d, h)| (*d, h.clone())).collect(),
            u_map: self.u_map.range(..=top).map(|(d, m)| (*d, m.clone())).collect(),
        }
    }
}

fn dense_block<T: Int>(
    c: &GradedComplex,
    sources: &[usize],
    targets: &[usize],
) -> Matrix<T> {
    let mut m = Matrix::zeros(targets.len(), sources.len());
    for (col, &src) in sources.iter().enumerate() {
        for &(tgt, v) in c.boundary().column(src) {
            if let Ok(row) = targets.binary_search(&tgt) {
                m[(row, col)] = T::from(v);
            }
        }
    }
    m
}

struct DegreeResult<T> {
    data: DegreeData<T>,
    reps: Vec<Vec<T>>,
}

fn homology_in_degree<T: Int>(
    c: &GradedComplex,
    below: &[usize],
    here: &[usize],
    above: &[usize],
) -> std::result::Result<DegreeResult<T>, Overflow> {
    let outgoing: Matrix<T> = dense_block(c, here, below);
    let incoming: Matrix<T> = dense_block(c, above, here);
    let kernel = snf_checked(outgoing, Track { left: false, right: true })?;
    let r = kernel.rank;
    let basis_of_kernel = kernel.right.column_tail(r);
    let kernel_coords = kernel.right_inv.row_tail(r);
    let boundaries = kernel_coords.checked_mul(&incoming)?;
    let quotient = snf_checked(boundaries, Track { left: true, right: false })?;
    let z = basis_of_kernel.cols();
    let factors: Vec<T> = (0..z)
        .map(|i| {
            if i < quotient.rank {
                quotient.diag[(i, i)].clone()
            } else {
                T::zero()
            }
        })
        .collect();
    let gens: Vec<usize> = (0..z)
        .filter(|&i| i >= quotient.rank || !factors[i].is_one())
        .collect();
    let projector = quotient.left.checked_mul(&kernel_coords)?;
    let mut reps = Vec::with_capacity(gens.len());
    for &g in &gens {
        let mut v = vec![T::zero(); here.len()];
        for (row, slot) in v.iter_mut().enumerate() {
            let mut acc = T::zero();
            for k in 0..z {
                let a = &basis_of_kernel[(row, k)];
                let b = &quotient.left_inv[(k, g)];
                if !a.is_zero() && !b.is_zero() {
                    acc = add(&acc, &mul(a, b)?)?;
                }
            }
            *slot = acc;
        }
        reps.push(v);
    }
    Ok(DegreeResult {
        data: DegreeData {
            basis: here.to_vec(),
            projector,
            factors,
            gens,
        },
        reps,
    })
}

fn finish<T: Int>(res: DegreeResult<T>, wrap: fn(DegreeData<T>) -> Coordinates) -> DegreeHomology {
    let mut torsion = Vec::new();
    let mut free_rank = 0;
    for &g in &res.data.gens {
        let f: BigInt = res.data.factors[g].clone().into();
        if f.is_zero() {
            free_rank += 1;
        } else {
            torsion.push(f);
        }
    }
    let basis = res.data.basis.clone();
    let representatives = res
        .reps
        .into_iter()
        .map(|v| {
            v.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (basis[k], x.into()))
                .collect()
        })
        .collect();
    DegreeHomology {
        summand: Summand { free_rank, torsion },
        representatives,
        coords: Some(wrap(res.data)),
    }
}

/// Homology of a graded complex, degree by degree, with representatives and
/// the induced `U`-action. If the complex declares a trusted top degree only
/// degrees up to it are reported.
pub fn graded_homology(c: &GradedComplex) -> Result<GradedGroup> {
    c.validate()?;
    let groups = c.by_degree();
    let one = Rational::from_integer(1);
    let wanted: Vec<Rational> = groups
        .keys()
        .copied()
        .filter(|d| c.trusted_top().is_none_or(|t| *d <= t))
        .collect();
    let empty: Vec<usize> = Vec::new();
    let computed = par::map(&wanted, |d| {
        let here = &groups[d];
        let below = groups.get(&(d - one)).unwrap_or(&empty);
        let above = groups.get(&(d + one)).unwrap_or(&empty);
        let h = match homology_in_degree::<i64>(c, below, here, above) {
            Ok(r) => finish(r, Coordinates::Small),
            Err(Overflow) => finish(
                homology_in_degree::<BigInt>(c, below, here, above)
                    .expect("BigInt arithmetic cannot overflow"),
                Coordinates::Big,
            ),
        };
        (*d, h)
    });
    let degrees: BTreeMap<Rational, DegreeHomology> = computed
        .into_iter()
        .filter(|(_, h)| !h.summand.is_zero())
        .collect();
    let mut group = GradedGroup {
        degrees,
        u_map: BTreeMap::new(),
    };
    let two = Rational::from_integer(2);
    let mut u_map = BTreeMap::new();
    for (d, h) in &group.degrees {
        let Some(low) = group.degrees.get(&(d - two)) else { continue };
        let mut m = IntMatrix::zeros(low.generators(), h.generators());
        for (col, rep) in h.representatives.iter().enumerate() {
            let image = apply_big(c.u_action(), rep);
            let coords = low.coords.as_ref().expect("computed degree").apply(&image);
            for (row, v) in coords.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        u_map.insert(*d, m);
    }
    group.u_map = u_map;
    Ok(group)
}

pub(crate) fn apply_big(map: &super::complex::SparseMap, chain: &[(usize, BigInt)]) -> Chain {
    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (src, c) in chain {
        for &(tgt, v) in map.column(*src) {
            *acc.entry(tgt).or_default() += c * BigInt::from(v);
        }
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// A map on homology, one block per source degree. Block columns are
/// source generators, rows are target generators in degree `d + shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedMap {
    pub degree_shift: Rational,
    pub blocks: BTreeMap<Rational, IntMatrix>,
    source: BTreeMap<Rational, Summand>,
    target: BTreeMap<Rational, Summand>,
}

fn q_rank(m: &IntMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    snf_checked(m.clone(), Track { left: false, right: false })
        .expect("BigInt")
        .rank
}

impl InducedMap {
    fn zero_summand() -> Summand {
        Summand {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    fn source_at(&self, d: Rational) -> Summand {
        self.source.get(&d).cloned().unwrap_or_else(Self::zero_summand)
    }

    fn target_at(&self, d: Rational) -> Summand {
        self.target.get(&d).cloned().unwrap_or_else(Self::zero_summand)
    }

    fn block(&self, d: Rational) -> IntMatrix {
        let s = self.source_at(d);
        let t = self.target_at(d + self.degree_shift);
        self.blocks.get(&d).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(t.torsion.len() + t.free_rank, s.torsion.len() + s.free_rank)
        })
    }

    /// Degrees where the source or the target (shifted back) is nonzero.
    pub fn support(&self) -> Vec<Rational> {
        let mut ds: Vec<Rational> = self.source.keys().copied().collect();
        ds.extend(self.target.keys().map(|d| d - self.degree_shift));
        ds.sort();
        ds.dedup();
        ds
    }

    /// Free rank of the kernel in source degree `d`.
    pub fn kernel_rank_in(&self, d: Rational) -> usize {
        let s = self.source_at(d);
        let t = self.target_at(d + self.degree_shift);
        let m = self.block(d);
        let mut free = IntMatrix::zeros(t.free_rank, s.free_rank);
        for r in 0..t.free_rank {
            for c in 0..s.free_rank {
                free[(r, c)] = m[(t.torsion.len() + r, s.torsion.len() + c)].clone();
            }
        }
        s.free_rank - q_rank(&free)
    }

    /// Free rank of the kernel, summed over degrees.
    pub fn kernel_rank(&self) -> usize {
        self.support().into_iter().map(|d| self.kernel_rank_in(d)).sum()
    }

    /// Kernel free ranks per source degree (nonzero entries only).
    pub fn kernel_ranks(&self) -> BTreeMap<Rational, usize> {
        self.support()
            .into_iter()
            .map(|d| (d, self.kernel_rank_in(d)))
            .filter(|(_, r)| *r > 0)
            .collect()
    }

    pub fn is_surjective_in(&self, d: Rational) -> bool {
        let t = self.target_at(d + self.degree_shift);
        let rows = t.torsion.len() + t.free_rank;
        if rows == 0 {
            return true;
        }
        let m = self.block(d);
        let mut pres = IntMatrix::zeros(rows, m.cols() + t.torsion.len());
        for r in 0..rows {
            for c in 0..m.cols() {
                pres[(r, c)] = m[(r, c)].clone();
            }
        }
        for (k, f) in t.torsion.iter().enumerate() {
            pres[(k, m.cols() + k)] = f.clone();
        }
        let snf = snf_checked(pres, Track { left: false, right: false }).expect("BigInt");
        snf.rank == rows && snf.invariant_factors().iter().all(|f| f.abs().is_one())
    }

    pub fn is_surjective(&self) -> bool {
        self.support().into_iter().all(|d| self.is_surjective_in(d))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective()
            && self.support().into_iter().all(|d| {
                let s = self.source_at(d);
                let t = self.target_at(d + self.degree_shift);
                s.free_rank == t.free_rank && s.torsion == t.torsion
            })
    }

    /// Restriction to source degrees `≤ top`.
    pub fn truncated_above(&self, top: Rational) -> Self {
        InducedMap {
            degree_shift: self.degree_shift,
            blocks: self.blocks.range(..=top).map(|(d, m)| (*d, m.clone())).collect(),
            source: self.source.range(..=top).map(|(d, s)| (*d, s.clone())).collect(),
            target: self
                .target
                .range(..=top + self.degree_shift)
                .map(|(d, s)| (*d, s.clone()))
                .collect(),
        }
    }

    /// Compare as maps of small integers where possible.
    pub fn block_as_i64(&self, d: Rational) -> Vec<Vec<i64>> {
        let m = self.block(d);
        (0..m.rows())
            .map(|r| m.row(r).iter().map(|v| v.to_i64().expect("small entry")).collect())
            .collect()
    }
}

/// The map on homology induced by a chain map, in the representative bases
/// chosen by [`graded_homology`]. Degrees above either trusted window are
/// dropped.
pub fn induced_map(
    f: &ChainMap,
    source: &GradedComplex,
    target: &GradedComplex,
    hs: &GradedGroup,
    ht: &GradedGroup,
) -> Result<InducedMap> {
    f.check(source, target)?;
    let shift = f.degree_shift;
    let mut top: Option<Rational> = source.trusted_top();
    if let Some(t) = target.trusted_top() {
        let t = t - shift;
        top = Some(top.map_or(t, |s| s.min(t)));
    }
    let keep = |d: &Rational| top.is_none_or(|t| *d <= t);
    let mut blocks = BTreeMap::new();
    for (d, h) in hs.degrees.iter().filter(|(d, _)| keep(d)) {
        let Some(th) = ht.degrees.get(&(d + shift)) else { continue };
        let mut m = IntMatrix::zeros(th.generators(), h.generators());
        for (col, rep) in h.representatives.iter().enumerate() {
            let image = apply_big(&f.matrix, rep);
            let coords = th
                .coords
                .as_ref()
                .ok_or_else(|| Error::NotChainMap("target group has no coordinates".into()))?
                .apply(&image);
            for (row, v) in coords.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        blocks.insert(*d, m);
    }
    let source_summands = hs
        .degrees
        .iter()
        .filter(|(d, _)| keep(d))
        .map(|(d, h)| (*d, h.summand.clone()))
        .collect();
    let target_summands = ht
        .degrees
        .iter()
        .filter(|(d, _)| keep(&(**d - shift)))
        .map(|(d, h)| (*d, h.summand.clone()))
        .collect();
    Ok(InducedMap {
        degree_shift: shift,
        blocks,
        source: source_summands,
        target: target_summands,
    })
}
