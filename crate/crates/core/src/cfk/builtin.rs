use super::{grading_solve, KnotComplex};
use crate::{Error, Result};

pub const BUILTIN_NAMES: [&str; 5] = [
    "unknot",
    "trefoil_right",
    "trefoil_left",
    "figure_eight",
    "torus_2_5",
];

/// The bundled example complexes, with gradings solved.
pub fn builtin(name: &str) -> Result<KnotComplex> {
    let mut k = KnotComplex::new();
    match name {
        "unknot" => {
            k.add_generator("a", 0, 0, None);
            k.set_flip("a", 1, "a")?;
        }
        "trefoil_right" => {
            k.add_generator("a", -1, 0, None);
            k.add_generator("b", 0, 0, None);
            k.add_generator("c", 0, -1, None);
            k.add_term("b", 1, 0, "a")?;
            k.add_term("b", 1, 0, "c")?;
            swap(&mut k, &[("a", "c"), ("b", "b")])?;
        }
        "trefoil_left" => {
            k.add_generator("a", 0, 1, None);
            k.add_generator("b", 0, 0, None);
            k.add_generator("c", 1, 0, None);
            k.add_term("a", 1, 0, "b")?;
            k.add_term("c", 1, 0, "b")?;
            swap(&mut k, &[("a", "c"), ("b", "b")])?;
        }
        "figure_eight" => {
            k.add_generator("a", 1, 1, None);
            k.add_generator("b", 0, 1, None);
            k.add_generator("c", 1, 0, None);
            k.add_generator("d", 0, 0, None);
            k.add_generator("e", 0, 0, None);
            k.add_term("a", 1, 0, "b")?;
            k.add_term("a", 1, 0, "c")?;
            k.add_term("b", 1, 0, "d")?;
            k.add_term("c", -1, 0, "d")?;
            // b ↔ c alone anticommutes with ∂ on b; negating d repairs it
            swap(&mut k, &[("a", "a"), ("b", "c"), ("e", "e")])?;
            k.set_flip("d", -1, "d")?;
        }
        "torus_2_5" => {
            k.add_generator("x0", -2, 0, None);
            k.add_generator("y1", -1, 0, None);
            k.add_generator("x1", -1, -1, None);
            k.add_generator("y2", 0, -1, None);
            k.add_generator("x2", 0, -2, None);
            k.add_term("y1", 1, 0, "x0")?;
            k.add_term("y1", 1, 0, "x1")?;
            k.add_term("y2", 1, 0, "x1")?;
            k.add_term("y2", 1, 0, "x2")?;
            swap(&mut k, &[("x0", "x2"), ("y1", "y2"), ("x1", "x1")])?;
        }
        other => return Err(Error::UnknownKnot(other.to_string())),
    }
    grading_solve(&k)
}

fn swap(k: &mut KnotComplex, pairs: &[(&str, &str)]) -> Result<()> {
    for (a, b) in pairs {
        k.set_flip(a, 1, b)?;
        k.set_flip(b, 1, a)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gradings(k: &KnotComplex) -> Vec<(String, i64)> {
        k.generators()
            .iter()
            .map(|g| (g.name.clone(), g.maslov.unwrap()))
            .collect()
    }

    #[test]
    fn unknot_is_a_single_generator_in_grading_zero() {
        let u = builtin("unknot").unwrap();
        assert_eq!(gradings(&u), vec![("a".to_string(), 0)]);
        assert_eq!(u.arrows().count(), 0);
    }

    #[test]
    fn figure_eight_shape() {
        let s = builtin("figure_eight").unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.arrows().count(), 4);
        let b = s.index_of("b").unwrap();
        let c = s.index_of("c").unwrap();
        assert_eq!(s.terms(b)[0].coefficient, -s.terms(c)[0].coefficient);
    }

    #[test]
    fn solved_gradings() {
        let g = |n: &str| gradings(&builtin(n).unwrap());
        let v = |xs: &[(&str, i64)]| xs.iter().map(|(a, b)| (a.to_string(), *b)).collect::<Vec<_>>();
        assert_eq!(g("trefoil_right"), v(&[("a", -2), ("b", -1), ("c", -2)]));
        assert_eq!(g("trefoil_left"), v(&[("a", 2), ("b", 1), ("c", 2)]));
        assert_eq!(g("figure_eight"), v(&[("a", 2), ("b", 1), ("c", 1), ("d", 0), ("e", 0)]));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(builtin("granny"), Err(Error::UnknownKnot(_))));
    }
}
