use std::fmt;

/// A set of filtration levels `(i, j)`. The first two kinds are upward
/// closed, so `C{region}` is a quotient complex of `CFK∞`; the last two are
/// finite subquotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `i ≥ bound`
    MinI { bound: i64 },
    /// `max(i, j − s) ≥ bound`
    MaxIJ { s: i64, bound: i64 },
    /// `i_lo ≤ i ≤ i_hi` and `j_lo ≤ j ≤ j_hi`
    Box { i: (i64, i64), j: (i64, i64) },
    /// the single level `(i, j)`
    Single { i: i64, j: i64 },
}

impl Region {
    /// `B⁺ = C{i ≥ 0}`
    pub fn b_plus() -> Self {
        Region::MinI { bound: 0 }
    }

    /// `A⁺ₛ = C{max(i, j − s) ≥ 0}`
    pub fn a_plus(s: i64) -> Self {
        Region::MaxIJ { s, bound: 0 }
    }

    pub fn is_upward_closed(&self) -> bool {
        matches!(self, Region::MinI { .. } | Region::MaxIJ { .. })
    }

    /// Height of `(i, j)` above the defining boundary of an upward-closed
    /// region; `≥ 0` exactly on the region.
    pub fn height(&self, i: i64, j: i64) -> Option<i64> {
        match *self {
            Region::MinI { bound } => Some(i - bound),
            Region::MaxIJ { s, bound } => Some(i.max(j - s) - bound),
            _ => None,
        }
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        match *self {
            Region::Box { i: (il, ih), j: (jl, jh) } => il <= i && i <= ih && jl <= j && j <= jh,
            Region::Single { i: a, j: b } => (i, j) == (a, b),
            _ => self.height(i, j).is_some_and(|h| h >= 0),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Region::MinI { bound } => write!(f, "{{i ≥ {bound}}}"),
            Region::MaxIJ { s, bound } => write!(f, "{{max(i, j − {s}) ≥ {bound}}}"),
            Region::Box { i, j } => write!(f, "{{{} ≤ i ≤ {}, {} ≤ j ≤ {}}}", i.0, i.1, j.0, j.1),
            Region::Single { i, j } => write!(f, "{{({i}, {j})}}"),
        }
    }
}
