use std::collections::BTreeMap;

use crate::{Error, Rational, Result};

/// Sparse integer matrix stored by columns: `columns[src]` lists
/// `(target, coefficient)` pairs, sorted by target, no zero entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMap {
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMap {
    pub fn new(sources: usize) -> Self {
        SparseMap {
            columns: vec![Vec::new(); sources],
        }
    }

    pub fn sources(&self) -> usize {
        self.columns.len()
    }

    /// Adds `coeff` to the entry `src → tgt`.
    pub fn add(&mut self, src: usize, tgt: usize, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let col = &mut self.columns[src];
        match col.binary_search_by_key(&tgt, |&(t, _)| t) {
            Ok(pos) => {
                col[pos].1 += coeff;
                if col[pos].1 == 0 {
                    col.remove(pos);
                }
            }
            Err(pos) => col.insert(pos, (tgt, coeff)),
        }
    }

    pub fn column(&self, src: usize) -> &[(usize, i64)] {
        &self.columns[src]
    }

    pub fn entry(&self, src: usize, tgt: usize) -> i64 {
        let col = &self.columns[src];
        col.binary_search_by_key(&tgt, |&(t, _)| t)
            .map_or(0, |pos| col[pos].1)
    }

    pub fn nonzero_entries(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Image of a sparse chain.
    pub fn apply(&self, chain: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for &(src, c) in chain {
            for &(tgt, d) in &self.columns[src] {
                *acc.entry(tgt).or_default() += c * d;
            }
        }
        acc.into_iter().filter(|&(_, v)| v != 0).collect()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &SparseMap) -> SparseMap {
        let mut out = SparseMap::new(other.sources());
        for src in 0..other.sources() {
            out.columns[src] = self.apply(other.column(src));
        }
        out
    }
}

/// A finite free chain complex over ℤ whose basis elements carry exact
/// rational degrees, together with a chain-level `U` of degree −2.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedComplex {
    degrees: Vec<Rational>,
    boundary: SparseMap,
    u_action: SparseMap,
    trusted_top: Option<Rational>,
}

impl GradedComplex {
    pub fn new(degrees: Vec<Rational>) -> Self {
        let n = degrees.len();
        GradedComplex {
            degrees,
            boundary: SparseMap::new(n),
            u_action: SparseMap::new(n),
            trusted_top: None,
        }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degree(&self, id: usize) -> Rational {
        self.degrees[id]
    }

    pub fn degrees(&self) -> &[Rational] {
        &self.degrees
    }

    pub fn boundary(&self) -> &SparseMap {
        &self.boundary
    }

    pub fn u_action(&self) -> &SparseMap {
        &self.u_action
    }

    pub fn add_boundary(&mut self, src: usize, tgt: usize, coeff: i64) {
        self.boundary.add(src, tgt, coeff);
    }

    pub fn add_u(&mut self, src: usize, tgt: usize, coeff: i64) {
        self.u_action.add(src, tgt, coeff);
    }

    /// Highest degree in which the homology of this finite complex agrees
    /// with the homology of the (infinite) complex it truncates. `None`
    /// means the complex is not a truncation.
    pub fn trusted_top(&self) -> Option<Rational> {
        self.trusted_top
    }

    pub fn set_trusted_top(&mut self, top: Option<Rational>) {
        self.trusted_top = top;
    }

    /// Basis ids grouped by degree.
    pub fn by_degree(&self) -> BTreeMap<Rational, Vec<usize>> {
        let mut out: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for (id, &d) in self.degrees.iter().enumerate() {
            out.entry(d).or_default().push(id);
        }
        out
    }

    /// Checks `∂² = 0`, `U∂ = ∂U` and the degree contract of both maps.
    pub fn validate(&self) -> Result<()> {
        let one = Rational::from_integer(1);
        let two = Rational::from_integer(2);
        for src in 0..self.len() {
            for &(tgt, _) in self.boundary.column(src) {
                if self.degrees[src] - self.degrees[tgt] != one {
                    return Err(Error::InvalidGradedComplex(format!(
                        "boundary {src} → {tgt} does not lower degree by 1"
                    )));
                }
            }
            for &(tgt, _) in self.u_action.column(src) {
                if self.degrees[src] - self.degrees[tgt] != two {
                    return Err(Error::InvalidGradedComplex(format!(
                        "U {src} → {tgt} does not lower degree by 2"
                    )));
                }
            }
        }
        let dd = self.boundary.compose(&self.boundary);
        if let Some(src) = (0..self.len()).find(|&s| !dd.column(s).is_empty()) {
            return Err(Error::InvalidGradedComplex(format!(
                "boundary squared is nonzero on basis element {src}"
            )));
        }
        let du = self.boundary.compose(&self.u_action);
        let ud = self.u_action.compose(&self.boundary);
        if du != ud {
            return Err(Error::InvalidGradedComplex(
                "U does not commute with the boundary".into(),
            ));
        }
        Ok(())
    }

    /// The same complex with every degree moved by `shift`.
    pub fn shifted(&self, shift: Rational) -> Self {
        let mut out = self.clone();
        for d in &mut out.degrees {
            *d += shift;
        }
        out.trusted_top = self.trusted_top.map(|t| t + shift);
        out
    }
}

/// An integer-linear map between the bases of two graded complexes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMap {
    pub matrix: SparseMap,
    /// Every nonzero entry maps degree `d` to degree `d + degree_shift`.
    pub degree_shift: Rational,
}

impl ChainMap {
    pub fn new(sources: usize, degree_shift: Rational) -> Self {
        ChainMap {
            matrix: SparseMap::new(sources),
            degree_shift,
        }
    }

    pub fn identity(c: &GradedComplex) -> Self {
        let mut f = ChainMap::new(c.len(), Rational::from_integer(0));
        for i in 0..c.len() {
            f.matrix.add(i, i, 1);
        }
        f
    }

    /// Verifies that `f∂ = ∂f` and that every entry has the declared degree.
    pub fn check(&self, source: &GradedComplex, target: &GradedComplex) -> Result<()> {
        if self.matrix.sources() != source.len() {
            return Err(Error::NotChainMap(format!(
                "map has {} columns but source has {} basis elements",
                self.matrix.sources(),
                source.len()
            )));
        }
        for src in 0..source.len() {
            for &(tgt, _) in self.matrix.column(src) {
                if tgt >= target.len() {
                    return Err(Error::NotChainMap(format!("target id {tgt} out of range")));
                }
                if target.degree(tgt) != source.degree(src) + self.degree_shift {
                    return Err(Error::NotChainMap(format!(
                        "entry {src} → {tgt} has the wrong degree"
                    )));
                }
            }
            let lhs = self.matrix.apply(source.boundary().column(src));
            let rhs = target.boundary().apply(self.matrix.column(src));
            if lhs != rhs {
                return Err(Error::NotChainMap(format!(
                    "f∂ ≠ ∂f on source basis element {src}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn sparse_add_cancels() {
        let mut m = SparseMap::new(2);
        m.add(0, 1, 3);
        m.add(0, 1, -3);
        assert!(m.column(0).is_empty());
        m.add(1, 0, 2);
        assert_eq!(m.entry(1, 0), 2);
    }

    #[test]
    fn validate_rejects_bad_degrees_and_nonzero_square() {
        let mut c = GradedComplex::new(vec![rat(2), rat(0)]);
        c.add_boundary(0, 1, 1);
        assert!(matches!(c.validate(), Err(Error::InvalidGradedComplex(_))));

        let mut c = GradedComplex::new(vec![rat(2), rat(1), rat(0)]);
        c.add_boundary(0, 1, 1);
        c.add_boundary(1, 2, 1);
        assert!(c.validate().is_err());
    }

    #[test]
    fn chain_map_check_detects_non_commuting() {
        let mut c = GradedComplex::new(vec![rat(1), rat(0)]);
        c.add_boundary(0, 1, 1);
        let mut f = ChainMap::new(2, rat(0));
        f.matrix.add(0, 0, 1);
        assert!(f.check(&c, &c).is_err());
        assert!(ChainMap::identity(&c).check(&c, &c).is_ok());
    }
}
