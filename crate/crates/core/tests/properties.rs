mod common;

use common::{d_from_v, scrambled_complex, GRID_KNOTS};
use knot_surgery::cfk::{builtin, isomorphic, mirror, parse_text, serialize_text, validate, KnotComplex};
use knot_surgery::homology::graded_homology;
use knot_surgery::surgery::{hf_plus, lens_d_oracle};
use knot_surgery::rat;
use proptest::prelude::*;

/// A grid knot (maybe mirrored) plus flip-symmetric acyclic squares at
/// arbitrary filtration offsets.
fn random_complex() -> impl Strategy<Value = KnotComplex> {
    (
        0usize..GRID_KNOTS.len(),
        any::<bool>(),
        prop::collection::vec((-3i64..=3, -3i64..=3, -4i64..=4), 0..4),
    )
        .prop_map(|(knot, mirrored, squares)| {
            let mut k = builtin(GRID_KNOTS[knot]).unwrap();
            if mirrored {
                k = mirror(&k).unwrap();
            }
            for (n, &(a, b, m)) in squares.iter().enumerate() {
                let mut offsets = vec![(a, b)];
                if a != b {
                    offsets.push((b, a));
                }
                for (half, &(x, y)) in offsets.iter().enumerate() {
                    let name = |g: &str| format!("{g}_{n}_{half}");
                    k.add_generator(&name("a"), x + 1, y + 1, Some(m + 2));
                    k.add_generator(&name("b"), x, y + 1, Some(m + 1));
                    k.add_generator(&name("c"), x + 1, y, Some(m + 1));
                    k.add_generator(&name("d"), x, y, Some(m));
                    k.add_term(&name("a"), 1, 0, &name("b")).unwrap();
                    k.add_term(&name("a"), 1, 0, &name("c")).unwrap();
                    k.add_term(&name("b"), 1, 0, &name("d")).unwrap();
                    k.add_term(&name("c"), -1, 0, &name("d")).unwrap();
                }
                let other = offsets.len() - 1;
                for half in 0..offsets.len() {
                    let here = |g: &str| format!("{g}_{n}_{half}");
                    let there = |g: &str| format!("{g}_{n}_{}", other - half);
                    k.set_flip(&here("a"), 1, &there("a")).unwrap();
                    k.set_flip(&here("b"), 1, &there("c")).unwrap();
                    k.set_flip(&here("c"), 1, &there("b")).unwrap();
                    k.set_flip(&here("d"), -1, &there("d")).unwrap();
                }
            }
            k
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn text_format_round_trips(k in random_complex()) {
        prop_assert!(validate(&k).is_empty(), "{:?}", validate(&k).messages());
        let text = serialize_text(&k);
        let back = parse_text(&text).unwrap();
        prop_assert_eq!(&back, &k);
        prop_assert_eq!(serialize_text(&back), text);
    }

    #[test]
    fn mirror_is_an_involution(k in random_complex()) {
        let m = mirror(&k).unwrap();
        prop_assert!(validate(&m).is_empty());
        prop_assert_eq!(&mirror(&m).unwrap(), &k);
        prop_assert!(isomorphic(&mirror(&m).unwrap(), &k));
    }
}

/// Prime powers of `⊕ ℤ/n`, sorted; equal iff the groups are isomorphic.
fn elementary_divisors(orders: &[i64]) -> Vec<i64> {
    let mut out = Vec::new();
    for &n in orders {
        let mut n = n.abs();
        let mut p = 2;
        while n > 1 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            if pk > 1 {
                out.push(pk);
            }
            p += 1;
        }
    }
    out.sort_unstable();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homology_recovers_planted_groups(s in scrambled_complex()) {
        prop_assert!(s.complex.validate().is_ok());
        let h = graded_homology(&s.complex).unwrap();
        for (d, piece) in h.iter() {
            let d = d.to_integer();
            prop_assert_eq!(piece.summand.free_rank, s.free.get(&d).copied().unwrap_or(0));
            let found: Vec<i64> = piece.summand.torsion.iter().map(|t| t.to_string().parse().unwrap()).collect();
            let planted: Vec<i64> = s.torsion.get(&d).cloned().unwrap_or_default();
            prop_assert_eq!(elementary_divisors(&found), elementary_divisors(&planted));
        }
        for (d, r) in &s.free {
            prop_assert_eq!(h.summands().get(&rat(*d)).map_or(0, |x| x.free_rank), *r);
        }
    }
}

#[test]
fn d_invariants_match_the_v_function_formula() {
    let knots = ["unknot", "trefoil_right", "trefoil_left", "figure_eight", "torus_2_5"];
    let slopes = [(1, 1), (2, 1), (3, 1), (5, 2), (7, 3), (11, 4)];
    for name in knots {
        let k = builtin(name).unwrap();
        for (p, q) in slopes {
            let r = hf_plus(&k, p, q).unwrap();
            for s in &r.spin_c {
                let lens = lens_d_oracle(p, q, s.index).unwrap();
                assert_eq!(s.d, d_from_v(name, p, q, s.index, lens), "{name} {p}/{q} i={}", s.index);
            }
        }
    }
}
