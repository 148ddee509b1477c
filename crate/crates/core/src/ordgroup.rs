//! Lex-ordered lattices Z^r, their convex subgroups, and the
//! Ostrowski-Kaplansky stabilization scan.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Result, VqError};

/// A value in Z^r (lex order) or the formal infinity carried by 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupValue {
    Fin(Vec<i64>),
    Inf,
}

impl GroupValue {
    pub fn zero(rank: usize) -> Self {
        GroupValue::Fin(vec![0; rank])
    }

    pub fn new(coords: Vec<i64>) -> Self {
        GroupValue::Fin(coords)
    }

    pub fn unit(rank: usize, j: usize) -> Self {
        let mut c = vec![0; rank];
        c[j] = 1;
        GroupValue::Fin(c)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, GroupValue::Inf)
    }

    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            GroupValue::Fin(c) => Some(c),
            GroupValue::Inf => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GroupValue::Fin(c) if c.iter().all(|&x| x == 0))
    }

    /// Strictly positive in lex order (INF counts as positive).
    pub fn is_positive(&self) -> bool {
        match self {
            GroupValue::Inf => true,
            GroupValue::Fin(c) => c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            GroupValue::Inf => false,
            GroupValue::Fin(c) => c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0),
        }
    }

    pub fn add(&self, o: &GroupValue) -> GroupValue {
        match (self, o) {
            (GroupValue::Fin(a), GroupValue::Fin(b)) => {
                assert_eq!(a.len(), b.len(), "rank mismatch in value addition");
                GroupValue::Fin(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => GroupValue::Inf,
        }
    }

    /// Difference of two finite values.
    pub fn sub(&self, o: &GroupValue) -> Option<GroupValue> {
        match (self, o) {
            (GroupValue::Fin(a), GroupValue::Fin(b)) => {
                Some(GroupValue::Fin(a.iter().zip(b).map(|(x, y)| x - y).collect()))
            }
            _ => None,
        }
    }

    pub fn scale(&self, k: i64) -> GroupValue {
        match self {
            GroupValue::Fin(a) => GroupValue::Fin(a.iter().map(|x| x * k).collect()),
            GroupValue::Inf => GroupValue::Inf,
        }
    }

    pub fn neg(&self) -> Option<GroupValue> {
        self.coords().map(|c| GroupValue::Fin(c.iter().map(|x| -x).collect()))
    }

    /// Restriction to the coordinate range `range`.
    pub fn slice(&self, from: usize, to: usize) -> GroupValue {
        match self {
            GroupValue::Fin(c) => GroupValue::Fin(c[from..to].to_vec()),
            GroupValue::Inf => GroupValue::Inf,
        }
    }

    pub fn min_of(a: GroupValue, b: GroupValue) -> GroupValue {
        if lex(&a, &b) == Ordering::Greater {
            b
        } else {
            a
        }
    }
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupValue::Inf => write!(f, "INF"),
            GroupValue::Fin(c) if c.len() == 1 => write!(f, "{}", c[0]),
            GroupValue::Fin(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl GroupValue {
    /// Tuple form `(c1,...,cr)` regardless of rank, as used in traces.
    pub fn tuple(&self) -> String {
        match self {
            GroupValue::Inf => "INF".into(),
            GroupValue::Fin(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    /// Parses `INF`, an integer, or a tuple `(a,b,...)`.
    pub fn parse(s: &str) -> Option<GroupValue> {
        let s = s.trim();
        if s == "INF" {
            return Some(GroupValue::Inf);
        }
        let inner = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
        let coords: std::result::Result<Vec<i64>, _> =
            inner.split(',').map(|p| p.trim().parse::<i64>()).collect();
        coords.ok().map(GroupValue::Fin)
    }
}

fn lex(a: &GroupValue, b: &GroupValue) -> Ordering {
    match (a, b) {
        (GroupValue::Inf, GroupValue::Inf) => Ordering::Equal,
        (GroupValue::Inf, _) => Ordering::Greater,
        (_, GroupValue::Inf) => Ordering::Less,
        (GroupValue::Fin(x), GroupValue::Fin(y)) => x.cmp(y),
    }
}

/// Same-rank values are totally ordered; mixing ranks is a caller bug the
/// `Ord` impl tolerates by comparing lengths first. Use [`lex_compare`] for
/// the checked form.
impl PartialOrd for GroupValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GroupValue::Fin(x), GroupValue::Fin(y)) if x.len() != y.len() => x.len().cmp(&y.len()),
            _ => lex(self, other),
        }
    }
}

fn rank_of(g: &GroupValue) -> Option<usize> {
    g.coords().map(|c| c.len())
}

pub fn lex_compare(a: &GroupValue, b: &GroupValue) -> Result<Ordering> {
    if let (Some(ra), Some(rb)) = (rank_of(a), rank_of(b)) {
        if ra != rb {
            return Err(VqError::RankMismatch(ra, rb));
        }
    }
    Ok(lex(a, b))
}

/// The suffix subgroup {0}^(r-level) x Z^level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConvexSubgroup {
    pub level: usize,
    pub rank: usize,
}

impl ConvexSubgroup {
    pub fn new(level: usize, rank: usize) -> Result<Self> {
        if level > rank {
            return Err(VqError::BadLevel(level, rank));
        }
        Ok(ConvexSubgroup { level, rank })
    }

    pub fn full(rank: usize) -> Self {
        ConvexSubgroup { level: rank, rank }
    }

    pub fn is_full(&self) -> bool {
        self.level == self.rank
    }

    pub fn contains(&self, g: &GroupValue) -> bool {
        match g {
            GroupValue::Inf => false,
            GroupValue::Fin(c) => c[..self.rank - self.level].iter().all(|&x| x == 0),
        }
    }
}

impl fmt::Display for ConvexSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.level)
    }
}

pub fn hull(g: &GroupValue) -> Result<ConvexSubgroup> {
    let c = g.coords().ok_or(VqError::DegenerateValue)?;
    let j = c.iter().position(|&x| x != 0).ok_or(VqError::DegenerateValue)?;
    Ok(ConvexSubgroup { level: c.len() - j, rank: c.len() })
}

pub fn hull_of_set(gs: &[GroupValue]) -> Result<ConvexSubgroup> {
    let first = gs.first().ok_or(VqError::EmptyInput)?;
    let mut best = hull(first)?;
    for g in &gs[1..] {
        let h = hull(g)?;
        if h.rank != best.rank {
            return Err(VqError::RankMismatch(best.rank, h.rank));
        }
        best = best.max(h);
    }
    Ok(best)
}

/// Result of [`ok_stabilize`]: `iota` is a 1-based index into gamma and
/// `order` lists term indices from smallest to largest value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stabilization {
    Stable { iota: usize, order: Vec<usize> },
    Inconclusive,
}

/// Strict ordering of the values `beta_k + t_k * gamma`, if all distinct.
fn strict_order(terms: &[(GroupValue, u64)], gamma: &GroupValue) -> Option<Vec<usize>> {
    let vals: Vec<GroupValue> =
        terms.iter().map(|(b, t)| b.add(&gamma.scale(*t as i64))).collect();
    let mut idx: Vec<usize> = (0..terms.len()).collect();
    idx.sort_by(|&a, &b| vals[a].cmp(&vals[b]));
    for w in idx.windows(2) {
        if vals[w[0]] == vals[w[1]] {
            return None;
        }
    }
    Some(idx)
}

/// Least index from which one strict order of `beta_k + t_k gamma_tau`
/// holds for every supplied later tau.
pub fn ok_stabilize(terms: &[(GroupValue, u64)], gamma: &[GroupValue]) -> Result<Stabilization> {
    if terms.is_empty() || gamma.is_empty() {
        return Err(VqError::EmptyInput);
    }
    let rank = rank_of(&terms[0].0).ok_or(VqError::DegenerateValue)?;
    for (b, _) in terms {
        match rank_of(b) {
            Some(r) if r == rank => {}
            Some(r) => return Err(VqError::RankMismatch(rank, r)),
            None => return Err(VqError::DegenerateValue),
        }
    }
    for g in gamma {
        match rank_of(g) {
            Some(r) if r == rank => {}
            Some(r) => return Err(VqError::RankMismatch(rank, r)),
            None => return Err(VqError::DegenerateValue),
        }
    }
    let mut ts: Vec<u64> = terms.iter().map(|(_, t)| *t).collect();
    ts.sort_unstable();
    if let Some(w) = ts.windows(2).find(|w| w[0] == w[1]) {
        return Err(VqError::DuplicateMultiplier(w[0]));
    }
    if let Some(i) = gamma.windows(2).position(|w| w[0] >= w[1]) {
        return Err(VqError::GammaNotIncreasing(i + 2));
    }
    let last = match strict_order(terms, gamma.last().unwrap()) {
        Some(o) => o,
        None => return Ok(Stabilization::Inconclusive),
    };
    let mut start = gamma.len() - 1;
    while start > 0 && strict_order(terms, &gamma[start - 1]).as_ref() == Some(&last) {
        start -= 1;
    }
    Ok(Stabilization::Stable { iota: start + 1, order: last })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> GroupValue {
        GroupValue::new(c.to_vec())
    }

    #[test]
    fn compare_examples() {
        assert_eq!(lex_compare(&v(&[0, 5]), &v(&[1, 0])).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(&v(&[2, -3]), &v(&[2, 0])).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(&GroupValue::Inf, &v(&[9, 9])).unwrap(), Ordering::Greater);
        assert!(lex_compare(&v(&[1]), &v(&[1, 0])).is_err());
    }

    #[test]
    fn hull_examples() {
        assert_eq!(hull(&v(&[0, 1])).unwrap().level, 1);
        assert_eq!(hull(&v(&[1, 0])).unwrap().level, 2);
        assert_eq!(hull(&v(&[0, 0, 7])).unwrap().level, 1);
        assert!(hull(&v(&[0, 0])).is_err());
        assert!(hull(&GroupValue::Inf).is_err());
    }

    #[test]
    fn hull_of_set_examples() {
        assert_eq!(hull_of_set(&[v(&[0, 3]), v(&[0, 6])]).unwrap().level, 1);
        assert_eq!(hull_of_set(&[v(&[0, 3]), v(&[1, 0])]).unwrap().level, 2);
        assert_eq!(hull_of_set(&[v(&[0, 0, 2]), v(&[0, 4, 0])]).unwrap().level, 2);
        assert!(hull_of_set(&[]).is_err());
        assert!(hull_of_set(&[v(&[0, 1]), v(&[0, 0])]).is_err());
    }

    #[test]
    fn ok_examples() {
        let gamma: Vec<_> = (1..=12).map(|i| v(&[i])).collect();
        let r = ok_stabilize(&[(v(&[5]), 1), (v(&[0]), 2)], &gamma).unwrap();
        assert_eq!(r, Stabilization::Stable { iota: 6, order: vec![0, 1] });

        let gamma: Vec<_> = (1..=8).map(|i| v(&[0, i])).collect();
        let r = ok_stabilize(&[(v(&[3, 0]), 1), (v(&[0, 1]), 2)], &gamma).unwrap();
        assert_eq!(r, Stabilization::Stable { iota: 1, order: vec![1, 0] });

        let r = ok_stabilize(&[(v(&[4]), 3)], &[v(&[2])]).unwrap();
        assert_eq!(r, Stabilization::Stable { iota: 1, order: vec![0] });
    }

    #[test]
    fn ok_errors_and_inconclusive() {
        let gamma: Vec<_> = (1..=3).map(|i| v(&[i])).collect();
        assert!(matches!(
            ok_stabilize(&[(v(&[1]), 2), (v(&[0]), 2)], &gamma),
            Err(VqError::DuplicateMultiplier(2))
        ));
        assert!(matches!(
            ok_stabilize(&[(v(&[1]), 1)], &[v(&[2]), v(&[2])]),
            Err(VqError::GammaNotIncreasing(_))
        ));
        // 6 + g vs 2g ties at g = 6, the last supplied index
        let gamma: Vec<_> = (1..=6).map(|i| v(&[i])).collect();
        assert_eq!(
            ok_stabilize(&[(v(&[6]), 1), (v(&[0]), 2)], &gamma).unwrap(),
            Stabilization::Inconclusive
        );
    }
}
