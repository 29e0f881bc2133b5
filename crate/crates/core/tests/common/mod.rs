//! Helpers shared by the integration tests: the slope grid and oracles
//! that do not go through the library's own algorithms.
#![allow(dead_code)]

use std::collections::BTreeMap;

use knot_surgery::cfk::KnotComplex;
use knot_surgery::homology::GradedComplex;
use knot_surgery::{rat, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use proptest::prelude::*;

pub const GRID_KNOTS: [&str; 5] = ["unknot", "trefoil_right", "trefoil_left", "figure_eight", "torus_2_5"];

/// Coprime `(p, q)` with `1 ≤ p ≤ 10`, `1 ≤ q ≤ 5`.
pub fn grid() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in 1..=10i64 {
        for q in 1..=5i64 {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

type Q = Ratio<BigInt>;

/// Rank over ℚ by plain Gaussian elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() / m[rank][c].clone();
                for k in 0..cols {
                    let sub = f.clone() * m[rank][k].clone();
                    m[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Free rank of `H_d` for every degree, from ranks of boundary blocks.
pub fn rational_betti(c: &GradedComplex) -> BTreeMap<Rational, usize> {
    let groups = c.by_degree();
    let block = |from: &[usize], to: &[usize]| -> Vec<Vec<i64>> {
        to.iter()
            .map(|&t| from.iter().map(|&s| c.boundary().entry(s, t)).collect())
            .collect()
    };
    let empty = Vec::new();
    groups
        .iter()
        .map(|(d, ids)| {
            let below = groups.get(&(d - rat(1))).unwrap_or(&empty);
            let above = groups.get(&(d + rat(1))).unwrap_or(&empty);
            let out = rational_rank(&block(ids, below));
            let inc = rational_rank(&block(above, ids));
            (*d, ids.len() - out - inc)
        })
        .filter(|(_, r)| *r > 0)
        .collect()
}

/// A random complex with known homology: a direct sum of `ℤ` and
/// `ℤ --k--> ℤ` blocks, scrambled by unimodular changes of basis in each
/// degree.
#[derive(Debug, Clone)]
pub struct ScrambledComplex {
    pub complex: GradedComplex,
    pub free: BTreeMap<i64, usize>,
    pub torsion: BTreeMap<i64, Vec<i64>>,
}

#[derive(Debug, Clone)]
enum Block {
    Free(i64),
    Arrow(i64, i64),
}

fn block() -> impl Strategy<Value = Block> {
    prop_oneof![
        (0i64..4).prop_map(Block::Free),
        (1i64..4, 1i64..4).prop_map(|(d, k)| Block::Arrow(d, k)),
    ]
}

pub fn scrambled_complex() -> impl Strategy<Value = ScrambledComplex> {
    (
        prop::collection::vec(block(), 1..7),
        prop::collection::vec((0usize..16, 0usize..16, -2i64..=2), 0..24),
    )
        .prop_map(|(blocks, ops)| build_scrambled(&blocks, &ops))
}

fn build_scrambled(blocks: &[Block], ops: &[(usize, usize, i64)]) -> ScrambledComplex {
    let mut degrees = Vec::new();
    let mut arrows = Vec::new();
    let mut free: BTreeMap<i64, usize> = BTreeMap::new();
    let mut torsion: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for b in blocks {
        match *b {
            Block::Free(d) => {
                degrees.push(d);
                *free.entry(d).or_default() += 1;
            }
            Block::Arrow(d, k) => {
                degrees.push(d);
                degrees.push(d - 1);
                arrows.push((degrees.len() - 2, degrees.len() - 1, k));
                if k > 1 {
                    torsion.entry(d - 1).or_default().push(k);
                }
            }
        }
    }
    let n = degrees.len();
    // boundary as dense matrix: dense[t][s]
    let mut dense = vec![vec![0i64; n]; n];
    for &(s, t, k) in &arrows {
        dense[t][s] = k;
    }
    // new basis e'_a = e_a + c·e_b within one degree: ∂ ↦ P⁻¹ ∂ P
    for &(a, b, c) in ops {
        let (a, b) = (a % n, b % n);
        if a == b || degrees[a] != degrees[b] || c == 0 {
            continue;
        }
        // P = I + c·E_{b,a}: column a of ∂P gains c·(column b)
        for row in dense.iter_mut() {
            row[a] += c * row[b];
        }
        // P⁻¹ = I − c·E_{b,a}: row b of P⁻¹∂ loses c·(row a)
        for s in 0..n {
            dense[b][s] -= c * dense[a][s];
        }
    }
    let mut complex = GradedComplex::new(degrees.iter().map(|&d| rat(d)).collect());
    for (t, row) in dense.iter().enumerate() {
        for (s, &v) in row.iter().enumerate() {
            complex.add_boundary(s, t, v);
        }
    }
    ScrambledComplex { complex, free, torsion }
}

/// Correction terms of the lens space `L(p, q)` as the boundary of the
/// negative definite linear plumbing: `max (K² + n)/4` over characteristic
/// vectors in each class. Returned sorted.
pub fn plumbing_d_multiset(p: i64, q: i64) -> Vec<Rational> {
    let q = q.rem_euclid(p);
    if p == 1 {
        return vec![rat(0)];
    }
    // p/q = a1 − 1/(a2 − 1/(…)), all aᵢ ≥ 2
    let mut weights = Vec::new();
    let (mut num, mut den) = (p, q);
    while den != 0 {
        let a = Integer::div_ceil(&num, &den);
        weights.push(a);
        let next = a * den - num;
        num = den;
        den = next;
    }
    let n = weights.len();
    let mut form = vec![vec![Rational::from_integer(0); n]; n];
    for (k, a) in weights.iter().enumerate() {
        form[k][k] = rat(-a);
        if k + 1 < n {
            form[k][k + 1] = rat(1);
            form[k + 1][k] = rat(1);
        }
    }
    let inv = invert(&form);
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    let mut k = weights.iter().map(|a| -a).collect::<Vec<i64>>();
    loop {
        let y: Vec<Rational> = (0..n)
            .map(|r| (0..n).map(|c| inv[r][c] * rat(k[c])).sum())
            .collect();
        let square: Rational = (0..n).map(|r| y[r] * rat(k[r])).sum();
        let class: Vec<Rational> = y
            .iter()
            .map(|v| {
                let two = rat(2);
                *v - two * (*v / two).floor()
            })
            .collect();
        let d = (square + rat(n as i64)) / rat(4);
        let e = best.entry(class).or_insert(d);
        if d > *e {
            *e = d;
        }
        // odometer over Kᵢ ∈ {−aᵢ, −aᵢ + 2, …, aᵢ}
        let mut pos = 0;
        loop {
            if pos == n {
                let mut v: Vec<Rational> = best.into_values().collect();
                v.sort();
                assert_eq!(v.len() as i64, p, "one class per Spin^c structure");
                return v;
            }
            if k[pos] + 2 <= weights[pos] {
                k[pos] += 2;
                break;
            }
            k[pos] = -weights[pos];
            pos += 1;
        }
    }
}

fn invert(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v = row.clone();
            v.extend((0..n).map(|c| if c == r { rat(1) } else { rat(0) }));
            v
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| a[r][c] != rat(0)).expect("invertible");
        a.swap(c, p);
        let lead = a[c][c];
        for v in a[c].iter_mut() {
            *v /= lead;
        }
        for r in 0..n {
            if r != c && a[r][c] != rat(0) {
                let f = a[r][c];
                for k in 0..2 * n {
                    let sub = f * a[c][k];
                    a[r][k] -= sub;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// `V_k` for the bundled knots: the tower of `H(A⁺_k)` starts at `−2V_k`.
pub fn v_sequence(name: &str, k: i64) -> i64 {
    let nonneg = |k: i64| match name {
        "trefoil_right" => i64::from(k == 0),
        "torus_2_5" => i64::from(k <= 1),
        _ => 0,
    };
    if k >= 0 {
        nonneg(k)
    } else {
        nonneg(-k) - k
    }
}

/// `d(S³_{p/q}(K), i) = d(S³_{p/q}(O), i) − 2·max(V_{⌊i/q⌋}, V_{−⌊(i−p)/q⌋})`
/// for knots whose complex is determined by `V`.
pub fn d_from_v(name: &str, p: i64, q: i64, i: i64, lens: Rational) -> Rational {
    let a = v_sequence(name, Integer::div_floor(&i, &q));
    let b = v_sequence(name, -Integer::div_floor(&(i - p), &q));
    lens - rat(2 * a.max(b))
}

/// Genus-one complexes with `Δ = 1 + m·(−t + 2 − t⁻¹)` (`sign = +1`) or
/// `1 + m·(t − 2 + t⁻¹)` (`sign = −1`): an isolated generator plus `m`
/// acyclic squares whose gradings carry the sign.
pub fn square_sum(m: usize, sign: i64) -> KnotComplex {
    let mut k = KnotComplex::new();
    k.add_generator("e", 0, 0, Some(0));
    k.set_flip("e", 1, "e").unwrap();
    let shift = if sign > 0 { 0 } else { 1 };
    for n in 0..m {
        let name = |x: &str| format!("{x}{n}");
        k.add_generator(&name("a"), 1, 1, Some(2 + shift));
        k.add_generator(&name("b"), 0, 1, Some(1 + shift));
        k.add_generator(&name("c"), 1, 0, Some(1 + shift));
        k.add_generator(&name("d"), 0, 0, Some(shift));
        k.add_term(&name("a"), 1, 0, &name("b")).unwrap();
        k.add_term(&name("a"), 1, 0, &name("c")).unwrap();
        k.add_term(&name("b"), 1, 0, &name("d")).unwrap();
        k.add_term(&name("c"), -1, 0, &name("d")).unwrap();
        k.set_flip(&name("a"), 1, &name("a")).unwrap();
        k.set_flip(&name("b"), 1, &name("c")).unwrap();
        k.set_flip(&name("c"), 1, &name("b")).unwrap();
        k.set_flip(&name("d"), -1, &name("d")).unwrap();
    }
    k
}

