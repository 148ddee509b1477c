//! Towers K ⊂ K[Y1]/(Q1) ⊂ K[Y1][Y2]/(Q2) ⊂ ... with exact arithmetic.

use std::fmt;
use std::sync::Arc;

use super::frac::Frac;
use super::upoly::UPoly;
use super::Scalar;
use crate::error::{Result, VqError};

/// One simple extension: adjoin a root `name` of the monic polynomial `q`
/// whose coefficients live in the level below.
#[derive(Debug)]
pub struct Level {
    depth: usize,
    name: String,
    q: UPoly<TowerElem>,
    parent: Option<Arc<Level>>,
    nvars: usize,
}

impl Level {
    pub fn new(
        parent: Option<Arc<Level>>,
        q: UPoly<TowerElem>,
        name: impl Into<String>,
    ) -> Result<Arc<Level>> {
        let depth = parent.as_ref().map_or(0, |p| p.depth) + 1;
        if q.degree().unwrap_or(0) < 1 || !q.is_monic() {
            return Err(VqError::TowerIntegrity("modulus must be monic of positive degree".into()));
        }
        for c in q.coeffs() {
            let ok = match c {
                TowerElem::Base(_) => true,
                TowerElem::Ext(l, _) => parent.as_ref().is_some_and(|p| p.has_ancestor(l)),
            };
            if !ok {
                return Err(VqError::TowerIntegrity("modulus coefficient from a foreign level".into()));
            }
        }
        let nvars = q.like().base_nvars();
        Ok(Arc::new(Level { depth, name: name.into(), q, parent, nvars }))
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> &UPoly<TowerElem> {
        &self.q
    }

    pub fn parent(&self) -> Option<&Arc<Level>> {
        self.parent.as_ref()
    }

    pub fn degree(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    fn has_ancestor(self: &Arc<Level>, l: &Arc<Level>) -> bool {
        let mut cur = Some(self);
        while let Some(c) = cur {
            if Arc::ptr_eq(c, l) {
                return true;
            }
            cur = c.parent.as_ref();
        }
        false
    }

    /// The adjoined root as an element of this level.
    pub fn generator(self: &Arc<Level>) -> TowerElem {
        let z = TowerElem::Base(Frac::zero_n(self.nvars));
        TowerElem::from_coeffs(self, vec![z.clone(), z.one_like()])
    }

    /// Names of the adjoined roots from the bottom up to this level.
    pub fn names(self: &Arc<Level>) -> Vec<String> {
        let mut v = vec![];
        let mut cur = Some(self);
        while let Some(c) = cur {
            v.push(c.name.clone());
            cur = c.parent.as_ref();
        }
        v.reverse();
        v
    }
}

/// Elements are kept reduced and at the lowest level that holds them.
#[derive(Clone, Debug)]
pub enum TowerElem {
    Base(Frac),
    Ext(Arc<Level>, Vec<TowerElem>),
}

impl TowerElem {
    pub fn depth(&self) -> usize {
        match self {
            TowerElem::Base(_) => 0,
            TowerElem::Ext(l, _) => l.depth,
        }
    }

    pub fn level(&self) -> Option<&Arc<Level>> {
        match self {
            TowerElem::Base(_) => None,
            TowerElem::Ext(l, _) => Some(l),
        }
    }

    pub fn base_nvars(&self) -> usize {
        match self {
            TowerElem::Base(f) => f.nvars(),
            TowerElem::Ext(l, _) => l.nvars,
        }
    }

    pub fn as_base(&self) -> Option<&Frac> {
        match self {
            TowerElem::Base(f) => Some(f),
            TowerElem::Ext(..) => None,
        }
    }

    /// Builds the class of sum c_i Y^i at `level`, reducing modulo Q.
    pub fn from_coeffs(level: &Arc<Level>, cs: Vec<TowerElem>) -> TowerElem {
        let z = TowerElem::Base(Frac::zero_n(level.nvars));
        let mut cs: Vec<TowerElem> = cs.iter().map(tower_reduce).collect();
        let d = level.degree();
        let q = level.q.coeffs();
        while cs.len() > d {
            let top = cs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = cs.len() - d;
            for (i, qi) in q.iter().take(d).enumerate() {
                cs[k + i] = cs[k + i].sub(&top.mul(qi));
            }
        }
        while cs.last().is_some_and(|c| c.is_zero()) {
            cs.pop();
        }
        match cs.len() {
            0 => z,
            1 => cs.pop().unwrap(),
            _ => TowerElem::Ext(level.clone(), cs),
        }
    }

    /// Coefficients in the top adjoined root of `level`.
    fn coeffs_at(&self, level: &Arc<Level>) -> Vec<TowerElem> {
        match self {
            TowerElem::Ext(l, cs) if Arc::ptr_eq(l, level) => cs.clone(),
            _ => vec![self.clone()],
        }
    }

    /// The higher of the two levels; panics if they belong to different towers.
    fn join<'a>(&'a self, o: &'a TowerElem) -> Option<&'a Arc<Level>> {
        match (self.level(), o.level()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => {
                let (hi, lo) = if a.depth >= b.depth { (a, b) } else { (b, a) };
                assert!(hi.has_ancestor(lo), "elements from different towers");
                Some(hi)
            }
        }
    }

    fn combine(&self, o: &TowerElem, sub: bool) -> TowerElem {
        if let (TowerElem::Base(a), TowerElem::Base(b)) = (self, o) {
            return TowerElem::Base(if sub { a.sub(b) } else { a.add(b) });
        }
        let l = self.join(o).unwrap().clone();
        let a = self.coeffs_at(&l);
        let b = o.coeffs_at(&l);
        let z = TowerElem::Base(Frac::zero_n(l.nvars));
        let n = a.len().max(b.len());
        let cs = (0..n)
            .map(|i| {
                let x = a.get(i).unwrap_or(&z);
                let y = b.get(i).unwrap_or(&z);
                if sub {
                    x.sub(y)
                } else {
                    x.add(y)
                }
            })
            .collect();
        TowerElem::from_coeffs(&l, cs)
    }
}

/// Normal form: every level reduced modulo its Q and collapsed downwards.
pub fn tower_reduce(e: &TowerElem) -> TowerElem {
    match e {
        TowerElem::Base(_) => e.clone(),
        TowerElem::Ext(l, cs) if cs.len() < l.degree() && cs.len() > 1 => {
            let cs2: Vec<TowerElem> = cs.iter().map(tower_reduce).collect();
            if cs2.last().is_some_and(|c| c.is_zero()) {
                TowerElem::from_coeffs(l, cs2)
            } else {
                TowerElem::Ext(l.clone(), cs2)
            }
        }
        TowerElem::Ext(l, cs) => TowerElem::from_coeffs(l, cs.clone()),
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, o: &TowerElem) -> bool {
        match (self, o) {
            (TowerElem::Base(a), TowerElem::Base(b)) => a == b,
            (TowerElem::Ext(l1, a), TowerElem::Ext(l2, b)) => Arc::ptr_eq(l1, l2) && a == b,
            _ => false,
        }
    }
}

impl Scalar for TowerElem {
    fn zero_like(&self) -> Self {
        TowerElem::Base(Frac::zero_n(self.base_nvars()))
    }
    fn one_like(&self) -> Self {
        TowerElem::Base(Frac::one_n(self.base_nvars()))
    }
    fn int_like(&self, k: i64) -> Self {
        TowerElem::Base(Frac::int(self.base_nvars(), k))
    }
    fn is_zero(&self) -> bool {
        matches!(self, TowerElem::Base(f) if f.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }
    fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }
    fn neg(&self) -> Self {
        match self {
            TowerElem::Base(f) => TowerElem::Base(f.neg()),
            TowerElem::Ext(l, cs) => TowerElem::Ext(l.clone(), cs.iter().map(|c| c.neg()).collect()),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        if let (TowerElem::Base(a), TowerElem::Base(b)) = (self, o) {
            return TowerElem::Base(a.mul(b));
        }
        let l = self.join(o).unwrap().clone();
        let a = self.coeffs_at(&l);
        let b = o.coeffs_at(&l);
        let z = TowerElem::Base(Frac::zero_n(l.nvars));
        let mut out = vec![z; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        TowerElem::from_coeffs(&l, out)
    }
    fn inv(&self) -> Result<Self> {
        let (l, cs) = match self {
            TowerElem::Base(f) => return Ok(TowerElem::Base(f.inv()?)),
            TowerElem::Ext(l, cs) => (l, cs),
        };
        // extended Euclid in (level below)[Y] against Q
        let z = TowerElem::Base(Frac::zero_n(l.nvars));
        let mut r0 = l.q.clone();
        let mut r1 = UPoly::new(cs.clone(), &z);
        let mut s0 = UPoly::zero(&z);
        let mut s1 = UPoly::constant(z.one_like());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1)?;
            let s = s0.sub(&qt.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != Some(0) {
            return Err(VqError::TowerIntegrity(format!(
                "element is a zero divisor modulo {}",
                l.q.pretty(&l.name, &[])
            )));
        }
        let g = r0.coeff(0).inv()?;
        let cs = s0.coeffs().iter().map(|c| c.mul(&g)).collect();
        Ok(TowerElem::from_coeffs(l, cs))
    }
    fn pretty(&self, names: &[String]) -> String {
        match self {
            TowerElem::Base(f) => f.fmt_with(names),
            TowerElem::Ext(l, cs) => UPoly::new(cs.clone(), &self.zero_like()).pretty(&l.name, names),
        }
    }
    fn needs_parens(&self) -> bool {
        match self {
            TowerElem::Base(f) => f.needs_parens(),
            TowerElem::Ext(..) => true,
        }
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.base_nvars()).map(|j| format!("x{j}")).collect();
        write!(f, "{}", self.pretty(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(f: Frac) -> TowerElem {
        TowerElem::Base(f)
    }

    fn level_q() -> Arc<Level> {
        // Q = Y^2 + Y - t over Q(t)
        let t = b(Frac::var(1, 0));
        let one = t.one_like();
        let q = UPoly::new(vec![t.neg(), one.clone(), one], &t);
        Level::new(None, q, "Y").unwrap()
    }

    #[test]
    fn reduces_square_of_generator() {
        let l = level_q();
        let y = l.generator();
        let t = b(Frac::var(1, 0));
        let expect = TowerElem::from_coeffs(&l, vec![t, y.int_like(-1)]);
        assert_eq!(y.mul(&y), expect);
        assert_eq!(tower_reduce(&expect), expect);
    }

    #[test]
    fn multiple_of_modulus_vanishes() {
        let l = level_q();
        let y = l.generator();
        let q = l.modulus().eval(&y);
        assert!(q.is_zero());
        assert!(y.mul(&q).is_zero());
    }

    #[test]
    fn base_elements_unchanged() {
        let x = b(Frac::var(1, 0).add(&Frac::int(1, 3)));
        assert_eq!(tower_reduce(&x), x);
    }

    #[test]
    fn inverse_of_generator() {
        let l = level_q();
        let y = l.generator();
        let inv = y.inv().unwrap();
        assert_eq!(y.mul(&inv), y.one_like());
    }

    #[test]
    fn reducible_modulus_is_detected() {
        // Q = Y^2 - 1 = (Y-1)(Y+1); Y - 1 has no inverse
        let one = b(Frac::one_n(1));
        let q = UPoly::new(vec![one.neg(), one.zero_like(), one.clone()], &one);
        let l = Level::new(None, q, "Y").unwrap();
        let e = l.generator().sub(&one);
        assert!(matches!(e.inv(), Err(VqError::TowerIntegrity(_))));
    }
}
