//! Finite models of the bifiltered complex `CFK∞(S³, K)`.
//!
//! A [`KnotComplex`] lists generators over `ℤ[U, U⁻¹]` with their
//! `(i, j)` filtration levels and Maslov gradings, a differential whose
//! entries are integer multiples of nonnegative powers of `U`, and an
//! optional flip: the involution exchanging the two filtrations that the
//! horizontal maps `h⁺ₛ` need.

mod builtin;
mod grading;
mod region;
mod text;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use builtin::{builtin, BUILTIN_NAMES};
pub use grading::grading_solve;
pub use region::Region;
pub use text::{parse_text, serialize_text};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Algebraic filtration level.
    pub i: i64,
    /// Alexander filtration level.
    pub j: i64,
    pub maslov: Option<i64>,
}

/// One entry `coefficient · U^u_exponent · target` of a differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct UTerm {
    pub target: usize,
    pub u_exponent: i64,
    pub coefficient: i64,
}

/// `flip(x) = sign · target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipImage {
    pub sign: i64,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnotComplex {
    generators: Vec<Generator>,
    differential: Vec<Vec<UTerm>>,
    flip: Option<Vec<Option<FlipImage>>>,
}

impl KnotComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_generator(&mut self, name: &str, i: i64, j: i64, maslov: Option<i64>) -> usize {
        self.generators.push(Generator {
            name: name.to_string(),
            i,
            j,
            maslov,
        });
        self.differential.push(Vec::new());
        if let Some(f) = &mut self.flip {
            f.push(None);
        }
        self.generators.len() - 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::InvalidComplex(vec![format!("unknown generator `{name}`")]))
    }

    /// Adds `coefficient · U^u_exponent · to` to `∂ from`, merging with an
    /// existing entry.
    pub fn add_term(&mut self, from: &str, coefficient: i64, u_exponent: i64, to: &str) -> Result<()> {
        let (src, tgt) = (self.require(from)?, self.require(to)?);
        self.add_term_at(src, coefficient, u_exponent, tgt);
        Ok(())
    }

    pub(crate) fn add_term_at(&mut self, src: usize, coefficient: i64, u_exponent: i64, tgt: usize) {
        let terms = &mut self.differential[src];
        match terms
            .iter_mut()
            .find(|t| t.target == tgt && t.u_exponent == u_exponent)
        {
            Some(t) => t.coefficient += coefficient,
            None => terms.push(UTerm {
                target: tgt,
                u_exponent,
                coefficient,
            }),
        }
        terms.retain(|t| t.coefficient != 0);
        terms.sort();
    }

    /// Declares `flip(from) = sign · to`.
    pub fn set_flip(&mut self, from: &str, sign: i64, to: &str) -> Result<()> {
        let (src, tgt) = (self.require(from)?, self.require(to)?);
        self.set_flip_at(src, sign, tgt);
        Ok(())
    }

    pub(crate) fn set_flip_at(&mut self, src: usize, sign: i64, tgt: usize) {
        let n = self.generators.len();
        let f = self.flip.get_or_insert_with(|| vec![None; n]);
        f[src] = Some(FlipImage { sign, target: tgt });
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, idx: usize) -> &Generator {
        &self.generators[idx]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn terms(&self, idx: usize) -> &[UTerm] {
        &self.differential[idx]
    }

    pub fn arrows(&self) -> impl Iterator<Item = (usize, UTerm)> + '_ {
        self.differential
            .iter()
            .enumerate()
            .flat_map(|(src, ts)| ts.iter().map(move |t| (src, *t)))
    }

    pub fn has_flip(&self) -> bool {
        self.flip.is_some()
    }

    pub fn flip_of(&self, idx: usize) -> Option<FlipImage> {
        self.flip.as_ref().and_then(|f| f[idx])
    }

    pub fn has_gradings(&self) -> bool {
        self.generators.iter().all(|g| g.maslov.is_some())
    }

    /// Maslov grading of a generator, required to be assigned.
    pub fn maslov(&self, idx: usize) -> Result<i64> {
        self.generators[idx]
            .maslov
            .ok_or_else(|| Error::MissingGradings(self.generators[idx].name.clone()))
    }

    pub(crate) fn set_maslov(&mut self, idx: usize, m: i64) {
        self.generators[idx].maslov = Some(m);
    }

    /// Sign `ε` with `flip ∘ ∂ = ε · ∂ ∘ flip`, when the flip is a chain map up
    /// to a global sign.
    pub fn flip_sign(&self) -> Option<i64> {
        flip_commutation(self).ok().flatten()
    }

    /// Difference between the largest and smallest of `m − 2i` and `m − 2j`
    /// over all generators: the height of the band in which a quotient
    /// complex differs from a bare tower.
    pub fn grading_spread(&self) -> i64 {
        let vals: Vec<i64> = self
            .generators
            .iter()
            .filter_map(|g| g.maslov.map(|m| [m - 2 * g.i, m - 2 * g.j]))
            .flatten()
            .collect();
        match (vals.iter().min(), vals.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Range of `j − i`: the Alexander gradings that can carry knot homology.
    pub fn alexander_range(&self) -> (i64, i64) {
        let a = self.generators.iter().map(|g| g.j - g.i);
        (a.clone().min().unwrap_or(0), a.max().unwrap_or(0))
    }
}

/// Symbolic `∂` applied to `U^shift · x`, as a map `(generator, U-power) → coefficient`.
type Symbolic = BTreeMap<(usize, i64), i64>;

fn apply_symbolic(k: &KnotComplex, input: &Symbolic) -> Symbolic {
    let mut out = Symbolic::new();
    for (&(x, n), &c) in input {
        for t in k.terms(x) {
            *out.entry((t.target, n + t.u_exponent)).or_default() += c * t.coefficient;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn apply_flip_symbolic(k: &KnotComplex, input: &Symbolic) -> Option<Symbolic> {
    let mut out = Symbolic::new();
    for (&(x, n), &c) in input {
        let f = k.flip_of(x)?;
        *out.entry((f.target, n)).or_default() += c * f.sign;
    }
    out.retain(|_, v| *v != 0);
    Some(out)
}

fn single(x: usize) -> Symbolic {
    Symbolic::from([((x, 0), 1)])
}

/// `Ok(Some(ε))` when `F∂ = ε∂F`, `Ok(None)` when both sides vanish
/// identically, `Err(x)` at the first generator where no global sign works.
fn flip_commutation(k: &KnotComplex) -> std::result::Result<Option<i64>, usize> {
    let mut eps: Option<i64> = None;
    for x in 0..k.len() {
        let Some(fd) = apply_flip_symbolic(k, &apply_symbolic(k, &single(x))) else {
            return Err(x);
        };
        let Some(fx) = apply_flip_symbolic(k, &single(x)) else {
            return Err(x);
        };
        let df = apply_symbolic(k, &fx);
        if fd == df && fd.is_empty() {
            continue;
        }
        let neg: Symbolic = df.iter().map(|(key, v)| (*key, -v)).collect();
        let here = if fd == df {
            1
        } else if fd == neg {
            -1
        } else {
            return Err(x);
        };
        match eps {
            None => eps = Some(here),
            Some(e) if e != here => return Err(x),
            _ => {}
        }
    }
    Ok(eps.or(Some(1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    DuplicateName,
    BadTerm,
    DSquaredNonzero,
    Filtration,
    Grading,
    Flip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Every violated axiom of a complex; empty iff the complex is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.message.contains(needle))
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(|v| v.message.clone()).collect()
    }

    fn push(&mut self, kind: ViolationKind, message: String) {
        self.violations.push(Violation { kind, message });
    }

    /// Violations that do not concern Maslov gradings.
    pub(crate) fn ignoring_gradings(&self) -> Vec<String> {
        self.violations
            .iter()
            .filter(|v| v.kind != ViolationKind::Grading)
            .map(|v| v.message.clone())
            .collect()
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidComplex(self.messages()))
        }
    }
}

/// Checks every axiom of a finite `CFK∞` model. Grading conditions are only
/// checked on arrows whose endpoints both carry a grading.
pub fn validate(k: &KnotComplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for g in &k.generators {
        *seen.entry(&g.name).or_default() += 1;
    }
    let mut dups: Vec<&&str> = seen.iter().filter(|(_, &c)| c > 1).map(|(n, _)| n).collect();
    dups.sort();
    for name in dups {
        report.push(ViolationKind::DuplicateName, format!("duplicate generator name `{name}`"));
    }

    for (src, t) in k.arrows() {
        let (x, y) = (&k.generators[src], &k.generators[t.target]);
        if t.u_exponent < 0 {
            report.push(
                ViolationKind::BadTerm,
                format!("negative U exponent on arrow {} → {}", x.name, y.name),
            );
        }
        if y.i - t.u_exponent > x.i || y.j - t.u_exponent > x.j {
            report.push(
                ViolationKind::Filtration,
                format!(
                    "filtration violated on arrow {} → U^{}·{}",
                    x.name, t.u_exponent, y.name
                ),
            );
        }
        if let (Some(mx), Some(my)) = (x.maslov, y.maslov) {
            if my - 2 * t.u_exponent != mx - 1 {
                report.push(
                    ViolationKind::Grading,
                    format!(
                        "grading violated on arrow {} → U^{}·{}",
                        x.name, t.u_exponent, y.name
                    ),
                );
            }
        }
    }

    for x in 0..k.len() {
        let dd = apply_symbolic(k, &apply_symbolic(k, &single(x)));
        if !dd.is_empty() {
            report.push(
                ViolationKind::DSquaredNonzero,
                format!("d-squared nonzero at {}", k.generators[x].name),
            );
        }
    }

    if k.flip.is_some() {
        validate_flip(k, &mut report);
    }
    report
}

fn validate_flip(k: &KnotComplex, report: &mut ValidationReport) {
    let mut complete = true;
    for x in 0..k.len() {
        let gx = &k.generators[x];
        let Some(f) = k.flip_of(x) else {
            report.push(ViolationKind::Flip, format!("flip missing for {}", gx.name));
            complete = false;
            continue;
        };
        if f.sign.abs() != 1 {
            report.push(ViolationKind::Flip, format!("flip of {} has sign other than ±1", gx.name));
        }
        let gy = &k.generators[f.target];
        if (gy.i, gy.j) != (gx.j, gx.i) {
            report.push(
                ViolationKind::Flip,
                format!("flip sends {} at ({},{}) to {} at ({},{})", gx.name, gx.i, gx.j, gy.name, gy.i, gy.j),
            );
        }
        if let (Some(a), Some(b)) = (gx.maslov, gy.maslov) {
            if a != b {
                report.push(ViolationKind::Flip, format!("flip changes the grading of {}", gx.name));
            }
        }
        match k.flip_of(f.target) {
            Some(back) if back.target == x && back.sign * f.sign == 1 => {}
            Some(_) => report.push(ViolationKind::Flip, format!("flip is not an involution at {}", gx.name)),
            None => {}
        }
    }
    if complete {
        if let Err(x) = flip_commutation(k) {
            report.push(
                ViolationKind::Flip,
                format!("flip is not a chain map up to sign at {}", k.generators[x].name),
            );
        }
    }
}

fn mirror_name(name: &str) -> String {
    match name.strip_suffix('\'') {
        Some(base) => base.to_string(),
        None => format!("{name}'"),
    }
}

/// The dual complex, modelling the mirror knot: `x@(i,j,m)` becomes
/// `x'@(−i,−j,−m)` and each arrow `x → c·Uⁿ·y` becomes `y' → c·Uⁿ·x'`.
/// Names toggle a trailing `'`, so mirroring twice is the identity.
pub fn mirror(k: &KnotComplex) -> Result<KnotComplex> {
    let mut out = KnotComplex::new();
    for (idx, g) in k.generators.iter().enumerate() {
        let m = k.maslov(idx)?;
        out.add_generator(&mirror_name(&g.name), -g.i, -g.j, Some(-m));
    }
    for (src, t) in k.arrows() {
        out.add_term_at(t.target, t.coefficient, t.u_exponent, src);
    }
    if k.has_flip() {
        for x in 0..k.len() {
            if let Some(f) = k.flip_of(x) {
                out.set_flip_at(x, f.sign, f.target);
            }
        }
    }
    Ok(out)
}

/// Whether two graded complexes agree after renaming generators, changing
/// their signs and replacing them by `U`-translates. Flip images are
/// compared up to sign.
pub fn isomorphic(a: &KnotComplex, b: &KnotComplex) -> bool {
    if a.len() != b.len() || a.has_flip() != b.has_flip() {
        return false;
    }
    // φ(x) = sign · U^{-shift} · y with shift = i_x − i_y
    type Map = Vec<Option<(usize, i64)>>;
    fn sig(k: &KnotComplex, x: usize) -> (i64, Option<i64>, usize) {
        let g = &k.generators[x];
        (g.j - g.i, g.maslov.map(|m| m - 2 * g.i), k.terms(x).len())
    }
    fn consistent(a: &KnotComplex, b: &KnotComplex, map: &Map) -> bool {
        let shift = |x: usize, y: usize| a.generators[x].i - b.generators[y].i;
        let mapped: Vec<bool> = {
            let mut v = vec![false; b.len()];
            for (y, _) in map.iter().flatten() {
                v[*y] = true;
            }
            v
        };
        for x in 0..a.len() {
            let Some((y, sx)) = map[x] else { continue };
            let mut expect: Vec<UTerm> = Vec::new();
            for t in a.terms(x) {
                let Some((z, sz)) = map[t.target] else { continue };
                expect.push(UTerm {
                    target: z,
                    u_exponent: t.u_exponent - shift(t.target, z) + shift(x, y),
                    coefficient: t.coefficient * sx * sz,
                });
            }
            let mut got: Vec<UTerm> = b.terms(y).iter().copied().filter(|t| mapped[t.target]).collect();
            expect.sort();
            got.sort();
            if expect != got {
                return false;
            }
            if let (Some(fa), Some(fb)) = (a.flip_of(x), b.flip_of(y)) {
                if map[fa.target].is_some_and(|(z, _)| z != fb.target) {
                    return false;
                }
            }
        }
        true
    }
    fn search(a: &KnotComplex, b: &KnotComplex, x: usize, map: &mut Map, used: &mut [bool]) -> bool {
        if x == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if used[y] || sig(a, x) != sig(b, y) {
                continue;
            }
            used[y] = true;
            for sign in [1, -1] {
                map[x] = Some((y, sign));
                if consistent(a, b, map) && search(a, b, x + 1, map, used) {
                    return true;
                }
            }
            map[x] = None;
            used[y] = false;
        }
        false
    }
    let mut map = vec![None; a.len()];
    let mut used = vec![false; b.len()];
    search(a, b, 0, &mut map, &mut used)
}
