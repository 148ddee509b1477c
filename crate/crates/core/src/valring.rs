//! Monomial valuations on Q[x1..xn] localized at the origin.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Result, VqError};
use crate::exactalg::{Frac, MPoly};
use crate::ordgroup::{ConvexSubgroup, GroupValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locality {
    Unit,
    MaximalIdeal,
    NotInR,
}

impl fmt::Display for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Locality::Unit => "UNIT",
            Locality::MaximalIdeal => "MAXIMAL_IDEAL",
            Locality::NotInR => "NOT_IN_R",
        })
    }
}

/// Values and local-ring membership for a coefficient type. Base fractions
/// answer syntactically; tower elements answer through their values.
pub trait ValueCtx<C> {
    fn rank(&self) -> usize;
    fn value(&self, x: &C) -> Result<GroupValue>;
    /// nu(x - y); contexts with a cheaper route than subtracting override it.
    fn value_diff(&self, x: &C, y: &C) -> Result<GroupValue>
    where
        C: crate::exactalg::Scalar,
    {
        let d = x.sub(y);
        if d.is_zero() {
            Ok(GroupValue::Inf)
        } else {
            self.value(&d)
        }
    }
    fn locality(&self, x: &C) -> Result<Locality>;
    fn show(&self, x: &C) -> String;
    fn names(&self) -> Vec<String>;
}

/// The ring R with its valuation. Each variable's weight is a positive
/// multiple of one basis vector of Z^r, and every basis direction is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedRing {
    names: Vec<String>,
    weights: Vec<Vec<i64>>,
    rank: usize,
}

impl ValuedRing {
    pub fn new(names: Vec<String>, weights: Vec<Vec<i64>>) -> Result<ValuedRing> {
        let rank = weights.first().map_or(0, |w| w.len());
        if names.is_empty() || rank == 0 {
            return Err(VqError::Fixture("ring needs at least one variable and rank >= 1".into()));
        }
        if names.len() != weights.len() {
            return Err(VqError::Fixture(format!(
                "{} variables but {} weights",
                names.len(),
                weights.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || n == "X" {
                return Err(VqError::Fixture(format!("bad variable name '{n}'")));
            }
            if names[..i].contains(n) {
                return Err(VqError::Fixture(format!("duplicate variable '{n}'")));
            }
        }
        let mut covered = vec![false; rank];
        for (n, w) in names.iter().zip(&weights) {
            if w.len() != rank {
                return Err(VqError::RankMismatch(rank, w.len()));
            }
            if !GroupValue::new(w.clone()).is_positive() {
                return Err(VqError::Fixture(format!("weight of {n} is not lex-positive")));
            }
            if w.iter().filter(|&&c| c != 0).count() > 1 {
                return Err(VqError::Fixture(format!("weight of {n} mixes blocks")));
            }
            covered[w.iter().position(|&c| c != 0).unwrap()] = true;
        }
        if let Some(k) = covered.iter().position(|c| !c) {
            return Err(VqError::Fixture(format!(
                "no variable has weight in coordinate {}; the weights do not span Z^{rank}",
                k + 1
            )));
        }
        Ok(ValuedRing { names, weights, rank })
    }

    /// Variable j gets the j-th standard basis vector.
    pub fn standard(names: &[&str]) -> Result<ValuedRing> {
        let r = names.len();
        let weights = (0..r).map(|j| GroupValue::unit(r, j).coords().unwrap().to_vec()).collect();
        ValuedRing::new(names.iter().map(|s| s.to_string()).collect(), weights)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    fn block(&self, j: usize) -> usize {
        self.weights[j].iter().position(|&c| c != 0).unwrap()
    }

    pub fn value_poly(&self, p: &MPoly) -> GroupValue {
        match p.value(&self.weights) {
            Some(v) => GroupValue::Fin(v),
            None => GroupValue::Inf,
        }
    }

    pub fn value_of(&self, x: &Frac) -> GroupValue {
        if x.is_zero() {
            return GroupValue::Inf;
        }
        self.value_poly(x.num())
            .sub(&self.value_poly(x.den()))
            .expect("denominator is nonzero")
    }

    fn term_value(&self, e: &[u32]) -> GroupValue {
        let mut v = vec![0i64; self.rank];
        for (x, w) in e.iter().zip(&self.weights) {
            for (a, b) in v.iter_mut().zip(w) {
                *a += *x as i64 * b;
            }
        }
        GroupValue::Fin(v)
    }

    /// Terms of value at most `t`, and the least value left out.
    fn low_part(&self, p: &MPoly, t: &GroupValue) -> (MPoly, Option<GroupValue>) {
        let mut rest: Option<GroupValue> = None;
        let mut keep = vec![];
        for (e, c) in p.terms() {
            let v = self.term_value(e);
            if &v <= t {
                keep.push((e.clone(), c.clone()));
            } else if rest.as_ref().is_none_or(|r| &v < r) {
                rest = Some(v);
            }
        }
        (MPoly::from_terms(p.nvars(), keep), rest)
    }

    /// nu(x - y). Only the low-value parts of the cross products are
    /// multiplied, widening the cutoff until the leading terms are known.
    pub fn value_of_difference(&self, x: &Frac, y: &Frac) -> GroupValue {
        if x.is_zero() || y.is_zero() {
            return self.value_of(if x.is_zero() { y } else { x });
        }
        let (a, b, c, d) = (x.num(), y.den(), y.num(), x.den());
        let (va, vb, vc, vd) = (self.value_poly(a), self.value_poly(b), self.value_poly(c), self.value_poly(d));
        let floor = va.add(&vb).min(vc.add(&vd));
        let den = vb.add(&vd);
        let mut t = floor.clone();
        loop {
            let cut = |p: &MPoly, other: &GroupValue| self.low_part(p, &t.sub(other).expect("finite"));
            let (a1, ra) = cut(a, &vb);
            let (b1, rb) = cut(b, &va);
            let (c1, rc) = cut(c, &vd);
            let (d1, rd) = cut(d, &vc);
            let diff = a1.mul(&b1).sub(&c1.mul(&d1));
            let low = diff.terms().map(|(e, _)| self.term_value(e)).filter(|v| v <= &t).min();
            if let Some(v) = low {
                return v.sub(&den).expect("finite");
            }
            let next = [(ra, &vb), (rb, &va), (rc, &vd), (rd, &vc)]
                .into_iter()
                .filter_map(|(r, o)| r.map(|r| r.add(o)))
                .min();
            let Some(next) = next else {
                return GroupValue::Inf;
            };
            let doubled = t.add(&t.sub(&floor).expect("finite"));
            t = next.max(doubled);
        }
    }

    pub fn is_local(&self, x: &Frac) -> Locality {
        let x = if x.den().constant_term().is_zero() { x.reduced() } else { x.clone() };
        if x.den().constant_term().is_zero() {
            Locality::NotInR
        } else if x.num().constant_term().is_zero() {
            Locality::MaximalIdeal
        } else {
            Locality::Unit
        }
    }

    pub fn in_eq(&self, x: &Frac, y: &Frac) -> bool {
        if x.is_zero() || y.is_zero() {
            return x.is_zero() && y.is_zero();
        }
        let vx = self.value_of(x);
        vx == self.value_of(y) && self.value_of(&x.sub(y)) > vx
    }

    /// The quotient R/p_Psi as a ring of rank `psi.level`.
    pub fn quotient(&self, psi: ConvexSubgroup) -> Result<Quotient> {
        if psi.rank != self.rank {
            return Err(VqError::RankMismatch(self.rank, psi.rank));
        }
        if psi.is_full() {
            return Err(VqError::FullLevel(psi.level));
        }
        if psi.level == 0 {
            return Err(VqError::BadLevel(0, self.rank));
        }
        let head = self.rank - psi.level;
        let kill: Vec<bool> = (0..self.nvars()).map(|j| self.block(j) < head).collect();
        let mut down = vec![None; self.nvars()];
        let mut up = vec![];
        let mut names = vec![];
        let mut weights = vec![];
        for j in 0..self.nvars() {
            if !kill[j] {
                down[j] = Some(up.len());
                up.push(Some(j));
                names.push(self.names[j].clone());
                weights.push(self.weights[j][head..].to_vec());
            }
        }
        let ring = ValuedRing::new(names, weights)?;
        Ok(Quotient { ring, level: psi.level, nvars: self.nvars(), kill, down, up })
    }

    pub fn residual_reduce(&self, x: &Frac, psi: ConvexSubgroup) -> Result<Frac> {
        self.quotient(psi)?.reduce(x)
    }

    /// Splits the value into its Phi/Psi part and, when that vanishes, the
    /// residual value in Psi.
    pub fn value_split(
        &self,
        x: &Frac,
        psi: ConvexSubgroup,
    ) -> Result<(GroupValue, Option<GroupValue>)> {
        if x.is_zero() {
            return Err(VqError::ZeroPoly);
        }
        let v = self.value_of(x);
        let head_len = self.rank - psi.level;
        let head = v.slice(0, head_len);
        if head.is_zero() {
            Ok((head, Some(v.slice(head_len, self.rank))))
        } else {
            Ok((head, None))
        }
    }

    /// Exponents of a Laurent monomial with value `g`.
    pub fn witness(&self, g: &GroupValue) -> Result<Vec<i64>> {
        let c = g.coords().ok_or_else(|| VqError::NotInLattice(g.to_string()))?;
        if c.len() != self.rank {
            return Err(VqError::RankMismatch(self.rank, c.len()));
        }
        let mut exps = vec![0i64; self.nvars()];
        for (k, &target) in c.iter().enumerate() {
            if target == 0 {
                continue;
            }
            let vars: Vec<usize> = (0..self.nvars()).filter(|&j| self.block(j) == k).collect();
            let mut g0 = self.weights[vars[0]][k];
            let mut coefs = vec![1i64];
            for &j in &vars[1..] {
                let e = g0.extended_gcd(&self.weights[j][k]);
                coefs.iter_mut().for_each(|x| *x *= e.x);
                coefs.push(e.y);
                g0 = e.gcd;
            }
            if target % g0 != 0 {
                return Err(VqError::NotInLattice(g.to_string()));
            }
            for (j, x) in vars.iter().zip(coefs) {
                exps[*j] += x * (target / g0);
            }
        }
        Ok(exps)
    }

    pub fn monomial_value(&self, exps: &[i64]) -> GroupValue {
        let mut v = vec![0i64; self.rank];
        for (e, w) in exps.iter().zip(&self.weights) {
            for (a, b) in v.iter_mut().zip(w) {
                *a += e * b;
            }
        }
        GroupValue::Fin(v)
    }

    pub fn monomial_string(&self, exps: &[i64]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .zip(&self.names)
            .filter(|(e, _)| **e != 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn show(&self, x: &Frac) -> String {
        x.fmt_with(&self.names)
    }
}

impl ValueCtx<Frac> for ValuedRing {
    fn rank(&self) -> usize {
        self.rank
    }
    fn value(&self, x: &Frac) -> Result<GroupValue> {
        Ok(self.value_of(x))
    }
    fn value_diff(&self, x: &Frac, y: &Frac) -> Result<GroupValue> {
        Ok(self.value_of_difference(x, y))
    }
    fn locality(&self, x: &Frac) -> Result<Locality> {
        Ok(self.is_local(x))
    }
    fn show(&self, x: &Frac) -> String {
        x.fmt_with(&self.names)
    }
    fn names(&self) -> Vec<String> {
        self.names.clone()
    }
}

/// R/p_Psi together with the projection from R and the inclusion back.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub ring: ValuedRing,
    pub level: usize,
    nvars: usize,
    kill: Vec<bool>,
    down: Vec<Option<usize>>,
    up: Vec<Option<usize>>,
}

impl Quotient {
    pub fn reduce(&self, x: &Frac) -> Result<Frac> {
        let x = x.reduced();
        if x.den().constant_term().is_zero() {
            return Err(VqError::NotInR);
        }
        let y = x.substitute_zero(&self.kill)?;
        Ok(y.remap(self.ring.nvars(), &self.down))
    }

    /// The variable-inclusion lift of a quotient element.
    pub fn lift(&self, x: &Frac) -> Frac {
        x.remap(self.nvars, &self.up)
    }

    pub fn killed(&self) -> &[bool] {
        &self.kill
    }
}
