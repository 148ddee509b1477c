//! Newton iteration on Nagata polynomials, sequence classification and the
//! invariants the iteration is expected to satisfy.

use std::fmt;

use crate::error::{Result, VqError};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactalg::upoly::binomial;
use crate::exactalg::{tower::TowerElem, Frac, MPoly, Scalar, UPoly};
use crate::nagata::{is_nagata, NagataPoly};
use crate::ordgroup::{hull, ConvexSubgroup, GroupValue};
use crate::valring::{Locality, ValueCtx};

/// Output of one Newton step from sigma. `shifted` is F(X + sigma) when it
/// was built; otherwise `localities` classifies each of its coefficients.
pub struct StepOut<C: Scalar> {
    pub shifted: Option<UPoly<C>>,
    pub localities: Vec<Locality>,
    /// F(sigma), the constant coefficient of the shifted polynomial.
    pub f0: C,
    pub delta: C,
    pub next: C,
}

/// Coefficient rings that can run a Newton step. The default shifts F by
/// Taylor expansion; fractions override it with a cheaper homogeneous form
/// that builds the whole shifted polynomial only when `full` is set.
pub trait NewtonStep: Scalar {
    fn newton_step(f: &UPoly<Self>, sigma: &Self, _full: bool) -> Result<StepOut<Self>> {
        let shifted = f.shift(sigma);
        let c0 = shifted.coeff(0);
        if c0.is_zero() {
            return Ok(StepOut {
                shifted: Some(shifted),
                localities: vec![],
                f0: c0.clone(),
                delta: c0,
                next: sigma.clone(),
            });
        }
        let delta = c0.neg().div(&shifted.coeff(1))?;
        let next = sigma.add(&delta);
        Ok(StepOut { shifted: Some(shifted), localities: vec![], f0: c0, delta, next })
    }
}

impl NewtonStep for TowerElem {}

impl NewtonStep for Frac {
    fn newton_step(f: &UPoly<Frac>, sigma: &Frac, full: bool) -> Result<StepOut<Frac>> {
        // With G = L*F integral and sigma = p/q, every coefficient of
        // F(X + p/q) is hom_m / (L q^(n-m)) where
        // hom_m = sum_k C(k,m) G_k p^(k-m) q^(n-k).
        let n = f.degree().ok_or(VqError::ZeroPoly)?;
        let nv = sigma.nvars();
        let mut l = MPoly::one(nv);
        for c in f.coeffs() {
            if l.exact_div(c.den()).is_none() {
                let g = crate::exactalg::mpoly::gcd(&l, c.den());
                l = l.mul(&c.den().exact_div(&g).expect("gcd divides"));
            }
        }
        let g: Vec<MPoly> = f
            .coeffs()
            .iter()
            .map(|c| c.num().mul(&l.exact_div(c.den()).expect("lcm divides")))
            .collect();
        let p = sigma.num();
        let q = sigma.den();
        let mut qq = vec![MPoly::one(nv)];
        for k in 1..=n {
            qq.push(qq[k - 1].mul(q));
        }
        let q0 = q.constant_term();
        let l0 = l.constant_term();
        let full = full || q0.is_zero() || l0.is_zero();
        let homs: Vec<MPoly> = if full {
            let mut pp = vec![MPoly::one(nv)];
            for k in 1..=n {
                pp.push(pp[k - 1].mul(p));
            }
            (0..=n)
                .map(|m| {
                    let mut acc = MPoly::zero(nv);
                    for k in m..=n {
                        if g[k].is_zero() || (k > m && p.is_zero()) {
                            continue;
                        }
                        let mono = if k == m {
                            qq[n - k].clone()
                        } else if k == n {
                            pp[k - m].clone()
                        } else {
                            pp[k - m].mul(&qq[n - k])
                        };
                        let b = binomial(k, m);
                        let term = g[k].mul(&mono);
                        acc = acc.add(&if b == 1 { term } else { term.scale(&b.into()) });
                    }
                    acc
                })
                .collect()
        } else {
            // Horner in homogeneous form for the two coefficients Newton needs.
            (0..2)
                .map(|m| {
                    let mut acc = g[n].scale(&binomial(n, m).into());
                    for k in (m..n).rev() {
                        let b = binomial(k, m);
                        acc = acc.mul(p).add(&g[k].mul(&qq[n - k]).scale(&b.into()));
                    }
                    acc
                })
                .collect()
        };
        let like = Frac::zero_n(nv);
        let coeff = |m: usize| Frac::raw(homs[m].clone(), l.mul(&qq[n - m]));
        let (shifted, localities) = if full {
            let s = UPoly::new((0..=n).map(|m| Frac::new(homs[m].clone(), l.mul(&qq[n - m]))).collect::<Result<Vec<_>>>()?, &like);
            (Some(s), vec![])
        } else {
            // The denominator L q^(n-m) is a unit, so only hom_m(0) matters.
            let p0 = p.constant_term();
            let c: Vec<BigInt> = g.iter().map(|x| x.constant_term()).collect();
            let locs = (0..=n)
                .map(|m| {
                    let mut h0 = BigInt::zero();
                    for k in m..=n {
                        h0 += BigInt::from(binomial(k, m))
                            * &c[k]
                            * num_traits::pow(p0.clone(), k - m)
                            * num_traits::pow(q0.clone(), n - k);
                    }
                    if h0.is_zero() {
                        Locality::MaximalIdeal
                    } else {
                        Locality::Unit
                    }
                })
                .collect();
            (None, locs)
        };
        let f0 = coeff(0);
        if homs[0].is_zero() {
            return Ok(StepOut { shifted, localities, f0, delta: like, next: sigma.clone() });
        }
        if homs[1].is_zero() {
            return Err(VqError::DivisionByZero);
        }
        let qn1 = q.mul(&homs[1]);
        let delta = Frac::new(homs[0].neg(), qn1.clone())?;
        let next = Frac::new(p.mul(&homs[1]).sub(&homs[0]), qn1)?;
        Ok(StepOut { shifted, localities, f0, delta, next })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Termination {
    BudgetExhausted,
    ExactRoot { step: usize },
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::BudgetExhausted => f.write_str("BUDGET_EXHAUSTED"),
            Termination::ExactRoot { step } => write!(f, "EXACT_ROOT(sigma_{step})"),
        }
    }
}

/// Per-step invariant results; `None` where a check does not apply.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepFlags {
    pub nagata: bool,
    pub doubling: Option<bool>,
    pub fvalue: Option<bool>,
    pub congruence: Option<bool>,
    pub an_square: Option<bool>,
}

impl StepFlags {
    pub fn all_pass(&self) -> bool {
        self.nagata
            && [self.doubling, self.fvalue, self.congruence, self.an_square]
                .iter()
                .all(|f| f.unwrap_or(true))
    }
}

impl fmt::Display for StepFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut toks = vec![if self.nagata { "nagata" } else { "!nagata" }.to_string()];
        for (name, v) in [
            ("dbl", self.doubling),
            ("fval", self.fvalue),
            ("cong", self.congruence),
            ("an2", self.an_square),
        ] {
            if let Some(ok) = v {
                toks.push(if ok { name.to_string() } else { format!("!{name}") });
            }
        }
        f.write_str(&toks.join(","))
    }
}

/// The Newton data of F: delta_i and nu(delta_i) for i < steps, sigma_i for
/// i <= steps (sigma_0 = 0). Shifted polynomials are kept for i <= 1 only,
/// since late ones can be very large.
#[derive(Debug, Clone)]
pub struct NewtonTrace<C: Scalar> {
    pub f: NagataPoly<C>,
    pub deltas: Vec<C>,
    pub nu_delta: Vec<GroupValue>,
    pub sigmas: Vec<C>,
    pub shifted: Vec<UPoly<C>>,
    /// nu(F(sigma_i)) for every sigma_i a step was taken from.
    pub nu_f: Vec<GroupValue>,
    pub flags: Vec<StepFlags>,
    pub status: Termination,
}

impl<C: Scalar> NewtonTrace<C> {
    pub fn steps(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.status, Termination::ExactRoot { .. })
    }
}

impl<C: NewtonStep> NewtonTrace<C> {
    pub fn new(f: NagataPoly<C>) -> Self {
        let zero = f.poly().like().clone();
        NewtonTrace {
            f,
            deltas: vec![],
            nu_delta: vec![],
            sigmas: vec![zero],
            shifted: vec![],
            nu_f: vec![],
            flags: vec![],
            status: Termination::BudgetExhausted,
        }
    }


    /// Runs further steps until `steps` corrections exist or an exact root
    /// turns up.
    pub fn extend_to<V: ValueCtx<C>>(&mut self, ctx: &V, steps: usize) -> Result<()> {
        while self.deltas.len() < steps && !self.is_exact() {
            self.step(ctx)?;
        }
        Ok(())
    }

    fn step<V: ValueCtx<C>>(&mut self, ctx: &V) -> Result<()> {
        let i = self.deltas.len();
        let sigma = self.sigmas[i].clone();
        let out = C::newton_step(self.f.poly(), &sigma, i < 2)?;
        let c0 = out.f0.clone();
        let nagata = match &out.shifted {
            Some(s) => is_nagata(ctx, s).is_ok(),
            None => {
                let l = &out.localities;
                l.iter().all(|x| *x != Locality::NotInR)
                    && l[0] == Locality::MaximalIdeal
                    && l[1] == Locality::Unit
            }
        };
        let mut flags = StepFlags { nagata, ..Default::default() };
        let fv = ctx.value(&c0)?;
        self.nu_f.push(fv.clone());
        if i >= 1 {
            if c0.is_zero() {
                flags.fvalue = Some(true);
            } else {
                flags.fvalue = Some(fv == ctx.value(&out.delta)?);
            }
        }
        if i == 1 {
            let s = out.shifted.as_ref().ok_or(VqError::EmptyInput)?;
            let (cong, an2) = self.step_one_checks(ctx, s)?;
            flags.congruence = Some(cong);
            flags.an_square = Some(an2);
        }
        if i < 2 {
            self.shifted.push(out.shifted.clone().ok_or(VqError::EmptyInput)?);
        }
        if c0.is_zero() {
            self.flags.push(flags);
            self.status = Termination::ExactRoot { step: i };
            return Ok(());
        }
        let nu = ctx.value(&out.delta)?;
        if let Some(prev) = self.nu_delta.last() {
            flags.doubling = Some(nu >= prev.scale(2));
        }
        self.deltas.push(out.delta);
        self.nu_delta.push(nu);
        self.sigmas.push(out.next);
        self.flags.push(flags);
        Ok(())
    }

    /// Coefficient congruences mod delta_0 and divisibility of F1(0) by a_n^2.
    fn step_one_checks<V: ValueCtx<C>>(&self, ctx: &V, f1: &UPoly<C>) -> Result<(bool, bool)> {
        let d0 = &self.deltas[0];
        let f = self.f.poly();
        let mut cong = true;
        for j in 0..=self.f.degree() {
            let diff = f1.coeff(j).sub(&f.coeff(j));
            if diff.is_zero() {
                continue;
            }
            cong &= ctx.locality(&diff.div(d0)?)? != Locality::NotInR;
        }
        let an = self.f.a_n();
        let c = f1.coeff(0);
        let an2 = if c.is_zero() {
            true
        } else {
            let quotient_ok = ctx.locality(&c.div(&an.mul(&an))?)? != Locality::NotInR;
            quotient_ok && ctx.value(&c)? >= ctx.value(&an)?.scale(2)
        };
        Ok((cong, an2))
    }
}

pub fn newton_run<C: NewtonStep, V: ValueCtx<C>>(
    ctx: &V,
    f: &NagataPoly<C>,
    steps: usize,
) -> Result<NewtonTrace<C>> {
    if steps == 0 {
        return Err(VqError::BudgetTooSmall("need at least one step".into()));
    }
    let mut t = NewtonTrace::new(f.clone());
    t.extend_to(ctx, steps)?;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceReport {
    /// nu(y_{tau+1} - y_tau) for consecutive terms.
    pub nus: Vec<GroupValue>,
    pub pseudo_convergent: bool,
    /// nu(y - y_tau), when a candidate limit was supplied.
    pub limit_values: Vec<GroupValue>,
    pub is_limit: Option<bool>,
}

pub fn sequence_checks<C: Scalar, V: ValueCtx<C>>(
    ctx: &V,
    ys: &[C],
    y: Option<&C>,
) -> Result<SequenceReport> {
    if ys.len() < 3 {
        return Err(VqError::TooFewTerms(3));
    }
    let nus = ys
        .windows(2)
        .map(|w| ctx.value_diff(&w[1], &w[0]))
        .collect::<Result<Vec<_>>>()?;
    let pseudo_convergent = nus.iter().all(|v| !v.is_inf()) && nus.windows(2).all(|w| w[1] > w[0]);
    let mut limit_values = vec![];
    let mut is_limit = None;
    if let Some(y) = y {
        limit_values = ys.iter().map(|t| ctx.value_diff(y, t)).collect::<Result<Vec<_>>>()?;
        is_limit = Some(limit_values.iter().zip(&nus).all(|(a, b)| a >= b));
    }
    Ok(SequenceReport { nus, pseudo_convergent, limit_values, is_limit })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassKind {
    Stationary { phi: GroupValue, since: usize },
    Increasing { e: i64, since: usize },
    Inconclusive,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Stationary { phi, .. } => write!(f, "STATIONARY({phi})"),
            ClassKind::Increasing { e, .. } => write!(f, "INCREASING(e={e})"),
            ClassKind::Inconclusive => f.write_str("INCONCLUSIVE"),
        }
    }
}

/// `values[i-1]` is nu(h(sigma_i)); INF marks a zero of h.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: ClassKind,
    pub window: usize,
    pub values: Vec<GroupValue>,
    pub zeros: Vec<usize>,
}

/// Classifies nu(h(sigma_i)), i = 1..budget. With `early`, stops at the
/// first certified stationary window.
pub fn classify<C: NewtonStep, V: ValueCtx<C>>(
    ctx: &V,
    trace: &mut NewtonTrace<C>,
    h: &UPoly<C>,
    budget: usize,
    window: usize,
    early: bool,
) -> Result<Classification> {
    if h.is_zero() {
        return Err(VqError::ZeroPoly);
    }
    if window == 0 || budget < window + 2 {
        return Err(VqError::BudgetTooSmall(format!("budget {budget} < window {window} + 2")));
    }
    let deg = h.degree().unwrap();
    let mut values = vec![];
    let mut zeros = vec![];
    let mut start = 1;
    // h = F reuses F(sigma_i), which every step computes anyway.
    let is_f = h == trace.f.poly();
    let eval = |i: usize,
                    trace: &mut NewtonTrace<C>,
                    values: &mut Vec<GroupValue>,
                    zeros: &mut Vec<usize>,
                    start: &mut usize|
     -> Result<()> {
        trace.extend_to(ctx, i)?;
        if trace.sigmas.len() <= i {
            return Err(VqError::ExactRoot {
                step: trace.steps(),
                root: ctx.show(trace.sigmas.last().unwrap()),
            });
        }
        let nu = if is_f {
            trace.extend_to(ctx, i + 1)?;
            trace.nu_f[i].clone()
        } else {
            let y = h.eval(&trace.sigmas[i]);
            if y.is_zero() {
                GroupValue::Inf
            } else {
                ctx.value(&y)?
            }
        };
        if nu.is_inf() {
            zeros.push(i);
            *start = i + 1;
            if zeros.len() > deg {
                return Err(VqError::ClassifyAborted(format!(
                    "h vanishes at {} partial sums, more than its degree {deg}",
                    zeros.len()
                )));
            }
        }
        values.push(nu);
        Ok(())
    };
    let stationary = |values: &[GroupValue], start: usize, upto: usize| -> Option<ClassKind> {
        if upto + 1 < start + window + 1 {
            return None;
        }
        let tail = &values[upto - window - 1..upto];
        if tail.iter().all(|v| v == &tail[0]) {
            let mut since = upto - window;
            while since > start && values[since - 2] == tail[0] {
                since -= 1;
            }
            Some(ClassKind::Stationary { phi: tail[0].clone(), since })
        } else {
            None
        }
    };
    let last = if early { budget } else { budget - 1 };
    for i in 1..=last {
        eval(i, trace, &mut values, &mut zeros, &mut start)?;
        if early {
            if let Some(kind) = stationary(&values, start, i) {
                return Ok(Classification { kind, window, values, zeros });
            }
        }
    }
    if !early {
        // v_budget only matters for a stationary tail
        let upto = budget - 1;
        let w = &values[upto.saturating_sub(window)..upto];
        if upto >= start + window - 1 && w.iter().all(|v| v == &w[0]) {
            eval(budget, trace, &mut values, &mut zeros, &mut start)?;
            if let Some(kind) = stationary(&values, start, budget) {
                return Ok(Classification { kind, window, values, zeros });
            }
        }
    }
    trace.extend_to(ctx, budget)?;
    let kind = increasing(&values, &trace.nu_delta, start, budget - 1, window, deg)
        .unwrap_or(ClassKind::Inconclusive);
    Ok(Classification { kind, window, values, zeros })
}

/// v_{i+1} - v_i = e (nu(delta_{i+1}) - nu(delta_i)) over the last `window`
/// differences ending at index `upto`.
fn increasing(
    values: &[GroupValue],
    nu_delta: &[GroupValue],
    start: usize,
    upto: usize,
    window: usize,
    deg: usize,
) -> Option<ClassKind> {
    if upto < start + window || values.len() < upto {
        return None;
    }
    let mut e_found: Option<i64> = None;
    for i in upto - window..upto {
        let dv = values[i].sub(&values[i - 1])?;
        let dd = nu_delta.get(i + 1)?.sub(&nu_delta[i])?;
        let c = dd.coords()?;
        let k = c.iter().position(|&x| x != 0)?;
        let dvc = dv.coords()?;
        if dvc[k] % c[k] != 0 {
            return None;
        }
        let e = dvc[k] / c[k];
        if dd.scale(e) != dv || e_found.is_some_and(|x| x != e) {
            return None;
        }
        e_found = Some(e);
    }
    let e = e_found?;
    (1..=deg as i64).contains(&e).then(|| ClassKind::Increasing { e, since: upto - window })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    Exact,
    Observed,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Exact => "EXACT",
            Certainty::Observed => "OBSERVED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiReport {
    pub psi: ConvexSubgroup,
    pub certainty: Certainty,
    /// First step index whose hull equals psi.
    pub reached_at: usize,
    /// hull(nu(delta_i)) per step.
    pub hulls: Vec<ConvexSubgroup>,
    pub monotone: bool,
}

pub fn psi_f<C: Scalar>(trace: &NewtonTrace<C>) -> Result<PsiReport> {
    if trace.is_exact() {
        return Err(VqError::ExactRoot {
            step: trace.steps(),
            root: format!("sigma_{}", trace.steps()),
        });
    }
    let hulls = trace.nu_delta.iter().map(hull).collect::<Result<Vec<_>>>()?;
    let monotone = hulls.windows(2).all(|w| w[0] <= w[1]);
    let psi = *hulls.iter().max().ok_or(VqError::EmptyInput)?;
    let reached_at = hulls.iter().position(|h| *h == psi).unwrap();
    let certainty = if psi.is_full() { Certainty::Exact } else { Certainty::Observed };
    Ok(PsiReport { psi, certainty, reached_at, hulls, monotone })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaleCertificate {
    pub certified: bool,
    /// nu(h(y_tau)) and nu(y_{tau+1} - y_tau) over the window.
    pub lhs: Vec<GroupValue>,
    pub rhs: Vec<GroupValue>,
    /// Whether h, divided by its leading coefficient, is Nagata.
    pub h_nagata: Option<bool>,
}

pub fn etale_certificate<C: Scalar, V: ValueCtx<C>>(
    ctx: &V,
    ys: &[C],
    h: &UPoly<C>,
    window: usize,
) -> Result<EtaleCertificate> {
    let rep = sequence_checks(ctx, ys, None)?;
    if !rep.pseudo_convergent {
        return Err(VqError::NotPseudoConvergent);
    }
    let n = rep.nus.len();
    if window == 0 || window > n {
        return Err(VqError::BudgetTooSmall(format!("window {window} over {n} differences")));
    }
    let mut lhs = vec![];
    let mut rhs = vec![];
    for tau in n - window..n {
        lhs.push(ctx.value(&h.eval(&ys[tau]))?);
        rhs.push(rep.nus[tau].clone());
    }
    let certified = lhs == rhs;
    let h_nagata = if certified {
        let lc = h.lc().ok_or(VqError::ZeroPoly)?;
        Some(ctx.locality(lc)? == Locality::Unit && is_nagata(ctx, &h.scale(&lc.inv()?)).is_ok())
    } else {
        None
    };
    Ok(EtaleCertificate { certified, lhs, rhs, h_nagata })
}

#[derive(Debug, Clone)]
pub struct NonHenselianWitness<C: Scalar> {
    pub sigmas: Vec<C>,
    pub certificate: EtaleCertificate,
    /// Lower bounds nu(F(y)) >= nu(delta_i) any limit y in m_R would meet.
    pub forced: Vec<GroupValue>,
}

pub fn nonhenselian_witness<C: NewtonStep, V: ValueCtx<C>>(
    ctx: &V,
    f: &NagataPoly<C>,
    budget: usize,
    window: usize,
) -> Result<NonHenselianWitness<C>> {
    let t = newton_run(ctx, f, budget)?;
    if let Termination::ExactRoot { step } = t.status {
        return Err(VqError::ExactRoot { step, root: ctx.show(&t.sigmas[step]) });
    }
    let sigmas: Vec<C> = t.sigmas[1..].to_vec();
    let certificate = etale_certificate(ctx, &sigmas, f.poly(), window)?;
    Ok(NonHenselianWitness { sigmas, certificate, forced: t.nu_delta.clone() })
}
