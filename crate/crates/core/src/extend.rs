//! Extending nu to the root of a Nagata polynomial: residual irreducibility,
//! good variables, algebraic towers and the approximation profile.

use std::cell::RefCell;
use std::rc::Rc;
use std::sync::Arc;

use crate::error::{Result, VqError};
use crate::exactalg::{Frac, Level, Scalar, TowerElem, UPoly};
use crate::nagata::{change_of_variable, fac_classify, fstar, is_nagata, FacSide, FactorSource, NagataPoly};
use crate::newton::{classify, psi_f, ClassKind, NewtonStep, NewtonTrace, PsiReport};
use crate::ordgroup::{hull, ConvexSubgroup, GroupValue};
use crate::valring::{Locality, Quotient, ValueCtx, ValuedRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub steps: usize,
    pub window: usize,
    pub max_depth: usize,
}

impl Budgets {
    pub fn new(steps: usize, window: usize, max_depth: usize) -> Self {
        Budgets { steps, window, max_depth }
    }

    pub fn for_ring(ring: &ValuedRing) -> Self {
        Budgets { steps: 8, window: 3, max_depth: ring.rank() }
    }
}

/// Reduction of F modulo p_Psi and its factorization over the quotient.
#[derive(Debug, Clone)]
pub struct Residual {
    pub irreducible: bool,
    pub reduction: UPoly<Frac>,
    pub factors: Vec<UPoly<Frac>>,
    pub quotient: Quotient,
}

pub fn reduce_poly(q: &Quotient, f: &UPoly<Frac>) -> Result<UPoly<Frac>> {
    let like = Frac::zero_n(q.ring.nvars());
    f.try_map(&like, |c| q.reduce(c))
}

pub fn lift_poly(q: &Quotient, f: &UPoly<Frac>, nvars: usize) -> UPoly<Frac> {
    f.map(&Frac::zero_n(nvars), |c| q.lift(c))
}

pub fn residually_irreducible(
    ring: &ValuedRing,
    f: &NagataPoly<Frac>,
    psi: ConvexSubgroup,
    oracle: &FactorSource,
) -> Result<Residual> {
    let quotient = ring.quotient(psi)?;
    let reduction = reduce_poly(&quotient, f.poly())?;
    if f.degree() == 1 {
        return Ok(Residual { irreducible: true, factors: vec![reduction.clone()], reduction, quotient });
    }
    let fac = oracle.factor(&reduction)?;
    let irreducible = fac.factors.len() == 1;
    Ok(Residual { irreducible, reduction, factors: fac.factors, quotient })
}

/// Newton steps until some correction has a full hull or the budget runs
/// out; Psi can only grow, so a full hull settles it.
/// Steps until the hull of nu(delta_i) is the full group, or has stayed at
/// one level for `window + 1` corrections, or the budget runs out.
fn psi_trace<C: NewtonStep, V: ValueCtx<C>>(
    ctx: &V,
    f: &NagataPoly<C>,
    b: &Budgets,
) -> Result<(NewtonTrace<C>, PsiReport)> {
    let mut trace = NewtonTrace::new(f.clone());
    let mut hulls = vec![];
    while trace.steps() < b.steps && !trace.is_exact() {
        trace.extend_to(ctx, trace.steps() + 1)?;
        if let Some(v) = trace.nu_delta.last() {
            let h = hull(v)?;
            if h.is_full() {
                break;
            }
            hulls.push(h.level);
            if hulls.len() > b.window && hulls[hulls.len() - b.window - 1..].iter().all(|&l| l == h.level) {
                break;
            }
        }
    }
    let psi = psi_f(&trace)?;
    Ok((trace, psi))
}

#[derive(Debug, Clone)]
pub struct GoodVariable {
    pub alpha: Frac,
    pub f_alpha: NagataPoly<Frac>,
    pub psi: PsiReport,
    pub trace: NewtonTrace<Frac>,
    /// Root shifts found in the residual reductions, then the partial sum.
    pub shifts: Vec<Frac>,
}

pub fn good_variable(
    ring: &ValuedRing,
    f: &NagataPoly<Frac>,
    b: &Budgets,
    oracle: &FactorSource,
) -> Result<GoodVariable> {
    let mut alpha = Frac::zero_n(ring.nvars());
    let mut cur = f.clone();
    let mut shifts = vec![];
    for _ in 0..=ring.rank() + f.degree() {
        let (trace, psi) = psi_trace(ring, &cur, b)?;
        let root = if psi.psi.is_full() {
            None
        } else {
            let q = ring.quotient(psi.psi)?;
            let fbar = reduce_poly(&q, cur.poly())?;
            let fac = oracle.factor(&fbar).map_err(|e| match e {
                VqError::OracleMissing(_) => VqError::RootSearchFailed(fbar.pretty("X", q.ring.names())),
                e => e,
            })?;
            fac.factors
                .iter()
                .find(|g| g.degree() == Some(1) && q.ring.is_local(&g.coeff(0)) == Locality::MaximalIdeal)
                .map(|g| q.lift(&g.coeff(0).neg()))
        };
        let Some(a) = root else {
            return settle(ring, cur, alpha, shifts, trace, psi, b);
        };
        alpha = alpha.add(&a);
        cur = change_of_variable(ring, &cur, &a)?;
        shifts.push(a);
    }
    Err(VqError::RootSearchFailed("residual roots keep appearing".into()))
}

/// Shifts by the partial sum where Psi is first attained, so that the hull
/// of the first correction is Psi itself.
fn settle(
    ring: &ValuedRing,
    cur: NagataPoly<Frac>,
    alpha: Frac,
    mut shifts: Vec<Frac>,
    trace: NewtonTrace<Frac>,
    psi: PsiReport,
    b: &Budgets,
) -> Result<GoodVariable> {
    if psi.reached_at == 0 {
        return Ok(GoodVariable { alpha, f_alpha: cur, psi, trace, shifts });
    }
    let s = trace.sigmas[psi.reached_at].clone();
    let f_alpha = change_of_variable(ring, &cur, &s)?;
    let (trace, psi2) = psi_trace(ring, &f_alpha, b)?;
    if hull(&trace.nu_delta[0])? != psi.psi {
        return Err(VqError::Precondition(format!(
            "shift by sigma_{} did not bring the first correction to level {}",
            psi.reached_at, psi.psi
        )));
    }
    shifts.push(s.clone());
    Ok(GoodVariable { alpha: alpha.add(&s), f_alpha, psi: psi2, trace, shifts })
}

/// One level of an algebraic tower: the generator's minimal polynomial Q
/// over the level below and Q's own Newton trace.
pub struct TowerLevel {
    pub level: Arc<Level>,
    pub q: NagataPoly<TowerElem>,
    pub psi_full: bool,
    trace: RefCell<NewtonTrace<TowerElem>>,
}

/// The base ring with the levels pushed so far. Elements of level j get
/// their value from classification along the Newton sequence of Q_j.
#[derive(Clone)]
pub struct Tower<'a> {
    pub base: &'a ValuedRing,
    pub levels: Vec<Rc<TowerLevel>>,
    pub budgets: Budgets,
}

impl<'a> Tower<'a> {
    pub fn new(base: &'a ValuedRing, budgets: Budgets) -> Self {
        Tower { base, levels: vec![], budgets }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    fn below(&self, depth: usize) -> Tower<'a> {
        Tower { base: self.base, levels: self.levels[..depth].to_vec(), budgets: self.budgets }
    }

    /// Appends a level generated by a root of `q`, whose coefficients live
    /// at the current top. `residual_ok` records that Q is residually
    /// irreducible when its Psi is not the full group.
    pub fn push(&mut self, q: &UPoly<TowerElem>, residual_ok: bool) -> Result<Arc<Level>> {
        let d = self.depth();
        if d + 1 > self.base.rank() || d + 1 > self.budgets.max_depth {
            return Err(VqError::DepthExceeded(d + 1, self.budgets.max_depth.min(self.base.rank())));
        }
        let qn = is_nagata(self, q)?;
        let (trace, psi) = psi_trace(self, &qn, &self.budgets)?;
        let psi_full = psi.psi.is_full();
        if !psi_full && !residual_ok {
            return Err(VqError::TowerIntegrity(format!("level {} is not residually irreducible", d + 1)));
        }
        let parent = self.levels.last().map(|l| l.level.clone());
        let level = Level::new(parent, q.clone(), format!("Y{}", d + 1))?;
        self.levels.push(Rc::new(TowerLevel {
            level: level.clone(),
            q: qn,
            psi_full,
            trace: RefCell::new(trace),
        }));
        Ok(level)
    }

    fn level_value(&self, e: &TowerElem) -> Result<GroupValue> {
        let TowerElem::Ext(l, cs) = e else {
            unreachable!("base elements are valued directly")
        };
        let d = l.depth();
        let data = self.levels[..d]
            .iter()
            .find(|x| Arc::ptr_eq(&x.level, l))
            .ok_or_else(|| VqError::TowerIntegrity("element from a foreign tower".into()))?
            .clone();
        let below = self.below(d - 1);
        let h = UPoly::new(cs.clone(), &e.zero_like());
        let mut trace = data.trace.borrow_mut();
        let (v, _) = value_along(&below, &mut trace, data.psi_full, &h, &self.budgets)?;
        Ok(v)
    }
}

impl ValueCtx<TowerElem> for Tower<'_> {
    fn rank(&self) -> usize {
        self.base.rank()
    }
    fn value(&self, x: &TowerElem) -> Result<GroupValue> {
        if x.is_zero() {
            return Ok(GroupValue::Inf);
        }
        match x {
            TowerElem::Base(f) => Ok(self.base.value_of(f)),
            TowerElem::Ext(..) => self.level_value(x),
        }
    }
    fn locality(&self, x: &TowerElem) -> Result<Locality> {
        match x {
            TowerElem::Base(f) => Ok(self.base.is_local(f)),
            TowerElem::Ext(..) => {
                let v = self.value(x)?;
                Ok(if v.is_positive() {
                    Locality::MaximalIdeal
                } else if v.is_zero() {
                    Locality::Unit
                } else {
                    Locality::NotInR
                })
            }
        }
    }
    fn show(&self, x: &TowerElem) -> String {
        x.pretty(self.base.names())
    }
    fn names(&self) -> Vec<String> {
        self.base.names().to_vec()
    }
}

/// Value of h at the limit of the trace's Newton sequence: classification
/// directly when Psi is full, otherwise after dividing out a coefficient of
/// minimal value.
fn value_along<C: NewtonStep, V: ValueCtx<C>>(
    ctx: &V,
    trace: &mut NewtonTrace<C>,
    psi_full: bool,
    h: &UPoly<C>,
    b: &Budgets,
) -> Result<(GroupValue, String)> {
    let (shift, target, note) = if psi_full {
        (GroupValue::zero(ctx.rank()), h.clone(), String::new())
    } else {
        let mut best: Option<(GroupValue, usize)> = None;
        for (j, c) in h.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = ctx.value(c)?;
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, j));
            }
        }
        let (v, j) = best.ok_or(VqError::ZeroPoly)?;
        let ht = h.coeff(j);
        let note = format!(" after dividing by h_{j} = {} of value {v}", ctx.show(&ht));
        (v, h.scale(&ht.inv()?), note)
    };
    let c = classify(ctx, trace, &target, b.steps, b.window, true)?;
    match c.kind {
        ClassKind::Stationary { phi, since } => {
            let v = shift.add(&phi);
            Ok((v, format!("STATIONARY({phi}) since {since}{note}")))
        }
        kind => Err(VqError::Inconclusive(format!(
            "{kind} for {} with values {}",
            target.pretty("X", &ctx.names()),
            c.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendResult {
    pub value: GroupValue,
    pub depth: usize,
    pub witness: Vec<i64>,
    pub witness_str: String,
    pub log: Vec<String>,
}

/// The extended value of h at the distinguished root of F.
pub fn extend_value(
    ring: &ValuedRing,
    f: &NagataPoly<Frac>,
    h: &UPoly<Frac>,
    b: &Budgets,
    oracle: &FactorSource,
) -> Result<ExtendResult> {
    let v = extend_opt(ring, f, h, b, oracle)?;
    let (value, depth, log) = v.ok_or_else(|| VqError::Precondition("h vanishes at the root".into()))?;
    let witness = ring.witness(&value)?;
    if ring.monomial_value(&witness) != value {
        return Err(VqError::NotInLattice(value.to_string()));
    }
    let witness_str = ring.monomial_string(&witness);
    Ok(ExtendResult { value, depth, witness, witness_str, log })
}

/// `None` when h vanishes at the root.
fn extend_opt(
    ring: &ValuedRing,
    f: &NagataPoly<Frac>,
    h: &UPoly<Frac>,
    b: &Budgets,
    oracle: &FactorSource,
) -> Result<Option<(GroupValue, usize, Vec<String>)>> {
    if h.is_zero() {
        return Err(VqError::ZeroPoly);
    }
    for c in h.coeffs() {
        if ring.is_local(c) == Locality::NotInR {
            return Err(VqError::Precondition(format!("coefficient {} of h is not in R", ring.show(c))));
        }
    }
    let names = ring.names();
    let mut log = vec![];
    let star = fstar(ring, f, oracle)?;
    log.push(format!("F* = {} ({})", star.poly.pretty("X", names), star.origin));
    let fs = is_nagata(ring, &star.poly)?;
    let h = if h.degree() >= fs.poly().degree() {
        let r = h.divrem(fs.poly())?.1;
        log.push(format!("h reduced modulo F* to {}", r.pretty("X", names)));
        r
    } else {
        h.clone()
    };
    if h.is_zero() {
        return Ok(None);
    }
    if fs.degree() == 1 {
        let root = fs.poly().coeff(0).neg();
        let y = h.eval(&root);
        log.push(format!("F* is linear with root {}", ring.show(&root)));
        return Ok(Some((ring.value_of(&y), 0, log)));
    }
    let (v, depth) = base_value(ring, &fs, &h, b, oracle, &mut log)?;
    Ok(Some((v, depth, log)))
}

fn base_value(
    ring: &ValuedRing,
    f: &NagataPoly<Frac>,
    h: &UPoly<Frac>,
    b: &Budgets,
    oracle: &FactorSource,
    log: &mut Vec<String>,
) -> Result<(GroupValue, usize)> {
    let names = ring.names();
    let gv = good_variable(ring, f, b, oracle)?;
    let h = h.shift(&gv.alpha);
    log.push(format!(
        "good variable: alpha = {}, psi level {} ({})",
        ring.show(&gv.alpha),
        gv.psi.psi,
        gv.psi.certainty
    ));
    let mut trace = gv.trace;
    if gv.psi.psi.is_full() {
        let (v, note) = value_along(ring, &mut trace, true, &h, b)?;
        log.push(format!("level 0: {note}"));
        return Ok((v, 0));
    }
    let res = residually_irreducible(ring, &gv.f_alpha, gv.psi.psi, oracle)?;
    let qnames = res.quotient.ring.names();
    if res.irreducible {
        log.push(format!("residually irreducible: {}", res.reduction.pretty("X", qnames)));
        let (v, note) = value_along(ring, &mut trace, false, &h, b)?;
        log.push(format!("level 0: {note}"));
        return Ok((v, 0));
    }
    let qring = &res.quotient.ring;
    let mut nag = None;
    let mut cof = UPoly::constant(Frac::one_n(qring.nvars()));
    for g in &res.factors {
        if qring.is_local(&g.coeff(0)) == Locality::MaximalIdeal && nag.is_none() {
            nag = Some(g.clone());
        } else {
            cof = cof.mul(g);
        }
    }
    let nag = nag.ok_or_else(|| VqError::FactorClassification("no residual factor vanishes at 0".into()))?;
    if fac_classify(qring, &cof, &nag)? != FacSide::SecondIsNagata {
        return Err(VqError::FactorClassification("residual Nagata factor is ambiguous".into()));
    }
    log.push(format!(
        "residual factorization: {}",
        res.factors.iter().map(|g| format!("({})", g.pretty("X", qnames))).collect::<String>()
    ));
    let q = lift_poly(&res.quotient, &nag, ring.nvars());
    if nag.degree() == Some(1) {
        let a = q.coeff(0).neg();
        log.push(format!("linear residual factor: shift by {}", ring.show(&a)));
        let f2 = change_of_variable(ring, &gv.f_alpha, &a)?;
        return base_value(ring, &f2, &h.shift(&a), b, oracle, log);
    }
    let qres = {
        let qn = is_nagata(ring, &q)?;
        let (_, psi) = psi_trace(ring, &qn, b)?;
        psi.psi.is_full() || residually_irreducible(ring, &qn, psi.psi, oracle)?.irreducible
    };
    let mut tower = Tower::new(ring, *b);
    let lift = |p: &UPoly<Frac>| p.map(&TowerElem::Base(Frac::zero_n(ring.nvars())), |c| TowerElem::Base(c.clone()));
    let level = tower.push(&lift(&q), qres)?;
    log.push(format!("push Y1: {}", q.pretty("Y1", names)));
    let y = level.generator();
    let f1 = lift(gv.f_alpha.poly()).shift(&y);
    let h1 = lift(&h).shift(&y);
    let v = tower_value(&tower, &f1, &h1, gv.psi.psi, log)?;
    Ok((v, tower.depth()))
}

fn tower_value(
    tower: &Tower,
    f: &UPoly<TowerElem>,
    h: &UPoly<TowerElem>,
    prev: ConvexSubgroup,
    log: &mut Vec<String>,
) -> Result<GroupValue> {
    let d = tower.depth();
    let fn_ = is_nagata(tower, f)?;
    let (mut trace, psi) = psi_trace(tower, &fn_, &tower.budgets)?;
    let first = hull(&trace.nu_delta[0])?;
    if first <= prev {
        return Err(VqError::TowerIntegrity(format!(
            "first correction at depth {d} stays inside level {prev}"
        )));
    }
    log.push(format!("depth {d}: nu(delta_0) = {}, psi level {}", trace.nu_delta[0], psi.psi));
    if !psi.psi.is_full() {
        return Err(VqError::OracleMissing(format!("residual analysis over depth {d}")));
    }
    let (v, note) = value_along(tower, &mut trace, true, h, &tower.budgets)?;
    log.push(format!("level {d}: {note}"));
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxPoint {
    pub c: Frac,
    pub value: GroupValue,
    /// Some i with value < d_i.
    pub below: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxProfile {
    pub d: Vec<GroupValue>,
    pub k: i64,
    pub phi: GroupValue,
    pub coset_certified: bool,
    pub psi: ConvexSubgroup,
    pub points: Vec<ApproxPoint>,
}

/// nu(z - c) for z = h(s)/q(s) at the root s, with c = a/b written over R:
/// nu(b h(s) - a q(s)) - nu(b) - nu(q(s)).
fn dist(
    ring: &ValuedRing,
    f: &NagataPoly<Frac>,
    z: (&UPoly<Frac>, &UPoly<Frac>),
    c: &Frac,
    b: &Budgets,
    oracle: &FactorSource,
) -> Result<GroupValue> {
    let n = ring.nvars();
    let (a, d) = (Frac::from_poly(c.num().clone()), Frac::from_poly(c.den().clone()));
    let big = z.0.scale(&d).sub(&z.1.scale(&a));
    if big.is_zero() {
        return Ok(GroupValue::Inf);
    }
    let Some((top, _, _)) = extend_opt(ring, f, &big, b, oracle)? else {
        return Ok(GroupValue::Inf);
    };
    let (bottom, _, _) = extend_opt(ring, f, z.1, b, oracle)?
        .ok_or_else(|| VqError::Precondition("the denominator of z vanishes".into()))?;
    let _ = n;
    Ok(top.sub(&ring.value_of(&d)).and_then(|x| x.sub(&bottom)).expect("finite values"))
}

/// Distances from z to its canonical approximants, the coset law they
/// follow, and the distances to the supplied points. Approximant i is used
/// while its distance certifies within the budget, i.e. i + window < steps.
pub fn approx_profile(
    ring: &ValuedRing,
    f: &NagataPoly<Frac>,
    z: Option<(&UPoly<Frac>, &UPoly<Frac>)>,
    cs: &[Frac],
    b: &Budgets,
    oracle: &FactorSource,
) -> Result<ApproxProfile> {
    let zero = Frac::zero_n(ring.nvars());
    let x = UPoly::x(&zero);
    let one = UPoly::constant(zero.one_like());
    let (zh, zq) = z.unwrap_or((&x, &one));
    if b.steps < b.window + 2 {
        return Err(VqError::BudgetTooSmall(format!("budget {} < window {} + 2", b.steps, b.window)));
    }
    let star = is_nagata(ring, &fstar(ring, f, oracle)?.poly)?;
    let (trace, _) = psi_trace(ring, &star, &Budgets::new(1, b.window, b.max_depth))?;
    let mut trace = trace;
    trace.extend_to(ring, b.steps)?;
    let psi = psi_f(&trace)?.psi;
    let last = b.steps - b.window - 1;
    let mut d = vec![];
    for i in 0..=last {
        let s = &trace.sigmas[i];
        let qs = zq.eval(s);
        if qs.is_zero() {
            return Err(VqError::Precondition(format!("q vanishes at sigma_{i}")));
        }
        let zi = zh.eval(s).div(&qs)?;
        d.push(dist(ring, &star, (zh, zq), &zi, b, oracle)?);
    }
    let w = b.window.min(last);
    let mut k = None;
    let mut ok = w >= 1;
    for i in last - w..last {
        let dd = d[i + 1].sub(&d[i]);
        let dn = trace.nu_delta[i + 1].sub(&trace.nu_delta[i]);
        let (Some(dd), Some(dn)) = (dd, dn) else {
            ok = false;
            continue;
        };
        let (dc, nc) = (dd.coords().unwrap().to_vec(), dn.coords().unwrap().to_vec());
        let Some(j) = nc.iter().position(|&x| x != 0) else {
            ok = false;
            continue;
        };
        if dc[j] % nc[j] != 0 {
            ok = false;
            continue;
        }
        let kk = dc[j] / nc[j];
        ok &= dn.scale(kk) == dd && k.is_none_or(|k0| k0 == kk);
        k.get_or_insert(kk);
    }
    let k = k.unwrap_or(0);
    let i0 = last - w;
    let phi = d[i0].sub(&trace.nu_delta[i0].scale(k)).ok_or(VqError::DegenerateValue)?;
    for i in i0..=last {
        ok &= d[i].sub(&trace.nu_delta[i].scale(k)).as_ref() == Some(&phi);
    }
    let mut points = vec![];
    for c in cs {
        let value = dist(ring, &star, (zh, zq), c, b, oracle)?;
        let below = d.iter().position(|di| value < *di);
        points.push(ApproxPoint { c: c.clone(), value, below });
    }
    Ok(ApproxProfile { d, k, phi, coset_certified: ok, psi, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> ValuedRing {
        ValuedRing::new(vec!["u".into(), "t".into()], vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    fn u() -> Frac {
        Frac::var(2, 0)
    }

    fn t() -> Frac {
        Frac::var(2, 1)
    }

    fn k(n: i64) -> Frac {
        Frac::int(2, n)
    }

    fn up(cs: Vec<Frac>) -> UPoly<Frac> {
        let z = cs[0].zero_like();
        UPoly::new(cs, &z)
    }

    fn fx2(r: &ValuedRing) -> NagataPoly<Frac> {
        let c = t().add(&t().mul(&t())).add(&u()).neg();
        is_nagata(r, &up(vec![c, k(1), k(1)])).unwrap()
    }

    fn gv(v: &[i64]) -> GroupValue {
        GroupValue::new(v.to_vec())
    }

    #[test]
    fn rank_two_pipeline() {
        let r = ring2();
        let f = fx2(&r);
        let b = Budgets::for_ring(&r);
        let o = FactorSource::new();
        let (_, psi) = psi_trace(&r, &f, &b).unwrap();
        assert_eq!(psi.psi.level, 1);
        let res = residually_irreducible(&r, &f, psi.psi, &o).unwrap();
        assert!(!res.irreducible);
        let g = good_variable(&r, &f, &b, &o).unwrap();
        assert_eq!(g.alpha, t());
        assert_eq!(g.f_alpha.poly(), &up(vec![u().neg(), k(1).add(&t().add(&t())), k(1)]));
        assert!(g.psi.psi.is_full());
        let e = extend_value(&r, &f, &up(vec![t().neg(), k(1)]), &b, &o).unwrap();
        assert_eq!((e.value.clone(), e.depth, e.witness_str.as_str()), (gv(&[1, 0]), 0, "u"));
        let e = extend_value(&r, &f, &up(vec![k(0), k(1)]), &b, &o).unwrap();
        assert_eq!(e.value, gv(&[0, 1]));
    }

    #[test]
    fn residually_irreducible_branch() {
        let r = ring2();
        let f = is_nagata(&r, &up(vec![t().add(&u()).neg(), k(1), k(1)])).unwrap();
        let b = Budgets::for_ring(&r);
        let o = FactorSource::new();
        let (_, psi) = psi_trace(&r, &f, &b).unwrap();
        assert_eq!(psi.psi.level, 1);
        assert!(residually_irreducible(&r, &f, psi.psi, &o).unwrap().irreducible);
        // sigma = w - w^2 + 2w^3 - ... with w = t + u, so sigma - t has
        // value (0,2) and sigma - (w - t^2) is led by 2t^3
        let e = extend_value(&r, &f, &up(vec![t().neg(), k(1)]), &b, &o).unwrap();
        assert_eq!(e.value, gv(&[0, 2]));
        let c = t().add(&u()).sub(&t().mul(&t()));
        let e = extend_value(&r, &f, &up(vec![c.neg(), k(1)]), &b, &o).unwrap();
        assert_eq!(e.value, gv(&[0, 3]));
        assert_eq!(e.witness_str, "t^3");
    }

    #[test]
    fn tower_example() {
        // F = X^3 + 2X^2 + (1-t)X - t + u reduces to (X+1)(X^2+X-t)
        let r = ring2();
        let fpoly = up(vec![t().neg().add(&u()), k(1).sub(&t()), k(2), k(1)]);
        let f = is_nagata(&r, &fpoly).unwrap();
        let mut o = FactorSource::new();
        o.add(fpoly.clone(), vec![fpoly.clone()]).unwrap();
        let b = Budgets::new(4, 1, 2);
        let h = up(vec![t().neg(), k(1), k(1)]);
        let e = extend_value(&r, &f, &h, &b, &o).unwrap();
        assert_eq!((e.value.clone(), e.depth), (gv(&[1, 0]), 1));
        let e = extend_value(&r, &f, &up(vec![k(0), k(1)]), &b, &o).unwrap();
        assert_eq!(e.value, gv(&[0, 1]));
        let shallow = Budgets::new(4, 1, 0);
        assert!(matches!(extend_value(&r, &f, &h, &shallow, &o), Err(VqError::DepthExceeded(1, 0))));
    }

    #[test]
    fn tower_arithmetic_values() {
        let r = ring2();
        let b = Budgets::new(6, 2, 2);
        let mut tw = Tower::new(&r, b);
        let base = |x: Frac| TowerElem::Base(x);
        let q = UPoly::new(vec![base(t().neg()), base(k(1)), base(k(1))], &base(k(0)));
        let l = tw.push(&q, true).unwrap();
        let y = l.generator();
        assert_eq!(tw.value(&y).unwrap(), gv(&[0, 1]));
        assert_eq!(tw.value(&y.add(&base(k(1)))).unwrap(), gv(&[0, 0]));
        assert_eq!(tw.locality(&y).unwrap(), Locality::MaximalIdeal);
        // Y - t = -Y^2 has value 2 nu(Y)
        assert_eq!(tw.value(&y.sub(&base(t()))).unwrap(), gv(&[0, 2]));
    }
}
