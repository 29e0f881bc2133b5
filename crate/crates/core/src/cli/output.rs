use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::detect::Diagnostic;
use crate::homology::GradedGroup;
use crate::surgery::{HFResult, SpinCResult};
use crate::{Error, Rational, Result};

/// `"a/b"` with `b ≥ 1`, integers included (`"3/1"`).
pub fn fraction(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_fraction(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a fraction: `{s}`"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDoc {
    /// `builtin` or `file`
    pub kind: String,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorDoc {
    pub p: i64,
    pub q: i64,
    pub sigma: i64,
    pub depth: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedDoc {
    pub degree: String,
    pub rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityDoc {
    pub even: usize,
    pub odd: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinCDoc {
    pub index: i64,
    pub d: String,
    pub hf_red: Vec<ReducedDoc>,
    pub parity: ParityDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticDoc {
    pub score: String,
    pub total_reduced_rank: usize,
    pub d_deficit: String,
    /// `(index, reduced rank, (d_K − d_O)/2)` per Spin^c structure.
    pub deficits: Vec<(i64, usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub tool: String,
    pub version: String,
    pub input: InputDoc,
    pub descriptor: DescriptorDoc,
    pub orientation: String,
    pub spin_c: Vec<SpinCDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostic: Option<DiagnosticDoc>,
    pub timing_us: u64,
}

fn reduced_doc(g: &GradedGroup) -> Vec<ReducedDoc> {
    g.iter()
        .map(|(d, h)| ReducedDoc {
            degree: fraction(*d),
            rank: h.summand.free_rank,
            torsion: h.summand.torsion.iter().map(ToString::to_string).collect(),
        })
        .collect()
}

fn spin_doc(r: &SpinCResult) -> SpinCDoc {
    SpinCDoc {
        index: r.index,
        d: fraction(r.d),
        hf_red: reduced_doc(&r.hf_red),
        parity: ParityDoc {
            even: r.parity.0,
            odd: r.parity.1,
        },
    }
}

impl OutputDocument {
    pub fn new(input: InputDoc, result: &HFResult, diagnostic: Option<&Diagnostic>, timing_us: u64) -> Self {
        OutputDocument {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input,
            descriptor: DescriptorDoc {
                p: result.slope.p,
                q: result.slope.q,
                sigma: result.sigma,
                depth: result.depth,
            },
            orientation: result.orientation.label().to_string(),
            spin_c: result.spin_c.iter().map(spin_doc).collect(),
            diagnostic: diagnostic.map(|d| DiagnosticDoc {
                score: fraction(d.score),
                total_reduced_rank: d.total_reduced_rank,
                d_deficit: fraction(d.d_deficit),
                deficits: d.per_index.iter().map(|(i, r, x)| (*i, *r, fraction(*x))).collect(),
            }),
            timing_us,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad document: {e}")))
    }

    pub fn total_reduced_rank(&self) -> usize {
        self.spin_c.iter().flat_map(|s| &s.hf_red).map(|r| r.rank).sum()
    }
}

/// `Z^2 ⊕ Z/3` style rendering of one graded piece.
pub fn group_text(g: &GradedGroup) -> String {
    if g.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (d, h) in g.iter() {
        let mut s = String::new();
        match h.summand.free_rank {
            0 => {}
            1 => s.push('Z'),
            r => {
                let _ = write!(s, "Z^{r}");
            }
        }
        for t in &h.summand.torsion {
            if !s.is_empty() {
                s.push_str(" + ");
            }
            let _ = write!(s, "Z/{t}");
        }
        parts.push(format!("{s} in {d}"));
    }
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfk::builtin;
    use crate::surgery::hf_plus;

    #[test]
    fn fractions_round_trip() {
        for (n, d) in [(0, 1), (-1, 4), (7, 2), (-3, 1)] {
            let r = Rational::new(n, d);
            assert_eq!(parse_fraction(&fraction(r)).unwrap(), r);
        }
        assert_eq!(fraction(Rational::from_integer(2)), "2/1");
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
    }

    #[test]
    fn document_round_trip() {
        let r = hf_plus(&builtin("figure_eight").unwrap(), 7, 3).unwrap();
        let input = InputDoc {
            kind: "builtin".into(),
            name: "figure_eight".into(),
            sha256: None,
        };
        let doc = OutputDocument::new(input, &r, None, 12);
        let back = OutputDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.total_reduced_rank(), 3);
        for (s, orig) in back.spin_c.iter().zip(&r.spin_c) {
            assert_eq!(parse_fraction(&s.d).unwrap(), orig.d);
        }
    }
}
