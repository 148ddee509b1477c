//! Recognizing Nagata polynomials and isolating the factor F*.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, VqError};
use crate::exactalg::{Frac, Scalar, UPoly};
use crate::valring::{Locality, ValueCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    NotMonic,
    CoeffNotInR,
    ConstNotInM,
    LinearNotUnit,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rejection::NotMonic => "NOT_MONIC",
            Rejection::CoeffNotInR => "COEFF_NOT_IN_R",
            Rejection::ConstNotInM => "CONST_NOT_IN_M",
            Rejection::LinearNotUnit => "LINEAR_NOT_UNIT",
        })
    }
}

/// A monic F = X^n + ... + a_{n-1} X - a_n with a_n in m_R and a_{n-1} a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct NagataPoly<C: Scalar> {
    f: UPoly<C>,
    trivial: bool,
}

impl<C: Scalar> NagataPoly<C> {
    pub fn poly(&self) -> &UPoly<C> {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap_or(0)
    }

    /// a_n, the negated constant term.
    pub fn a_n(&self) -> C {
        self.f.coeff(0).neg()
    }

    /// a_{n-1}, the linear coefficient.
    pub fn a_lin(&self) -> C {
        self.f.coeff(1)
    }

    /// Set when a_n = 0: X is a root and the extension is trivial.
    pub fn trivial_hint(&self) -> bool {
        self.trivial
    }
}

pub fn is_nagata<C: Scalar, V: ValueCtx<C>>(ctx: &V, f: &UPoly<C>) -> Result<NagataPoly<C>> {
    let reject = |r| Err(VqError::NotNagata(r));
    if f.degree().unwrap_or(0) < 1 || !f.is_monic() {
        return reject(Rejection::NotMonic);
    }
    for c in f.coeffs() {
        if ctx.locality(c)? == Locality::NotInR {
            return reject(Rejection::CoeffNotInR);
        }
    }
    if ctx.locality(&f.coeff(0))? != Locality::MaximalIdeal {
        return reject(Rejection::ConstNotInM);
    }
    if ctx.locality(&f.coeff(1))? != Locality::Unit {
        return reject(Rejection::LinearNotUnit);
    }
    Ok(NagataPoly { f: f.clone(), trivial: f.coeff(0).is_zero() })
}

/// F(X' + alpha) for alpha in m_R.
pub fn change_of_variable<C: Scalar, V: ValueCtx<C>>(
    ctx: &V,
    f: &NagataPoly<C>,
    alpha: &C,
) -> Result<NagataPoly<C>> {
    if ctx.locality(alpha)? != Locality::MaximalIdeal {
        return Err(VqError::AlphaNotInMaximal);
    }
    is_nagata(ctx, &f.f.shift(alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacSide {
    FirstIsNagata,
    SecondIsNagata,
}

impl fmt::Display for FacSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FacSide::FirstIsNagata => "FIRST_IS_NAGATA",
            FacSide::SecondIsNagata => "SECOND_IS_NAGATA",
        })
    }
}

/// Which factor of a Nagata product G*Q carries the constant term in m_R.
pub fn fac_classify<C: Scalar, V: ValueCtx<C>>(
    ctx: &V,
    g: &UPoly<C>,
    q: &UPoly<C>,
) -> Result<FacSide> {
    for (name, p) in [("first", g), ("second", q)] {
        if !p.is_monic() {
            return Err(VqError::FactorClassification(format!("{name} factor is not monic")));
        }
        for c in p.coeffs() {
            if ctx.locality(c)? == Locality::NotInR {
                return Err(VqError::FactorNotInR(format!("{name} factor")));
            }
        }
    }
    is_nagata(ctx, &g.mul(q))?;
    let lg = ctx.locality(&g.coeff(0))?;
    let lq = ctx.locality(&q.coeff(0))?;
    let (side, nag) = match (lg, lq) {
        (Locality::MaximalIdeal, Locality::Unit) => (FacSide::FirstIsNagata, g),
        (Locality::Unit, Locality::MaximalIdeal) => (FacSide::SecondIsNagata, q),
        _ => {
            return Err(VqError::FactorClassification(
                "exactly one factor must have its constant term in m_R".into(),
            ))
        }
    };
    is_nagata(ctx, nag)?;
    Ok(side)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorOrigin {
    Builtin,
    Fixture,
    Declared,
}

impl fmt::Display for FactorOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorOrigin::Builtin => "builtin",
            FactorOrigin::Fixture => "fixture",
            FactorOrigin::Declared => "declared-irreducible",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub factors: Vec<UPoly<Frac>>,
    pub origin: FactorOrigin,
}

/// Factorizations of monic polynomials over K into monic irreducibles.
/// Fixture lists take precedence; a one-element list equal to the
/// polynomial itself declares it irreducible.
#[derive(Debug, Clone, Default)]
pub struct FactorSource {
    lists: Vec<(UPoly<Frac>, Vec<UPoly<Frac>>)>,
    names: Vec<String>,
}

impl FactorSource {
    pub fn new() -> Self {
        FactorSource::default()
    }

    /// Variable names used when reporting a polynomial that cannot be
    /// factored.
    pub fn with_names(names: &[String]) -> Self {
        FactorSource { lists: vec![], names: names.to_vec() }
    }

    /// Registers a factor list after checking it multiplies back to `f`.
    pub fn add(&mut self, f: UPoly<Frac>, factors: Vec<UPoly<Frac>>) -> Result<()> {
        let mut prod = UPoly::constant(f.like().one_like());
        for g in &factors {
            if !g.is_monic() {
                return Err(VqError::FactorMismatch(format!("factor {g} is not monic")));
            }
            prod = prod.mul(g);
        }
        if prod != f {
            return Err(VqError::FactorMismatch(f.to_string()));
        }
        self.lists.push((f, factors));
        Ok(())
    }

    pub fn factor(&self, f: &UPoly<Frac>) -> Result<Factorization> {
        for (g, fs) in &self.lists {
            if g.like().nvars() == f.like().nvars() && g == f {
                let origin = if fs.len() == 1 { FactorOrigin::Declared } else { FactorOrigin::Fixture };
                return Ok(Factorization { factors: fs.clone(), origin });
            }
        }
        builtin_factor(f)
            .map(|factors| Factorization { factors, origin: FactorOrigin::Builtin })
            .map_err(|e| match e {
                VqError::OracleMissing(_) if !self.names.is_empty() => {
                    VqError::OracleMissing(f.pretty("X", &self.names))
                }
                e => e,
            })
    }
}

/// Splits off constant rational roots, then settles what remains when its
/// degree is at most two. Anything else is beyond the built-in methods.
pub fn builtin_factor(f: &UPoly<Frac>) -> Result<Vec<UPoly<Frac>>> {
    if !f.is_monic() {
        return Err(VqError::Precondition("factoring needs a monic polynomial".into()));
    }
    let like = f.like().clone();
    let mut rest = f.clone();
    let mut out = vec![];
    'outer: while rest.degree().unwrap_or(0) > 2 {
        for c in constant_root_candidates(&rest)? {
            if rest.eval(&c).is_zero() {
                let lin = UPoly::new(vec![c.neg(), like.one_like()], &like);
                rest = rest.divrem(&lin)?.0;
                out.push(lin);
                continue 'outer;
            }
        }
        return Err(VqError::OracleMissing(f.to_string()));
    }
    match rest.degree() {
        Some(2) => match quadratic_roots(&rest) {
            Some((r1, r2)) => {
                out.push(UPoly::new(vec![r1.neg(), like.one_like()], &like));
                out.push(UPoly::new(vec![r2.neg(), like.one_like()], &like));
            }
            None => out.push(rest),
        },
        Some(1) => out.push(rest),
        _ => {}
    }
    Ok(out)
}

/// Roots of a monic quadratic in K, when its discriminant is a square.
pub fn quadratic_roots(f: &UPoly<Frac>) -> Option<(Frac, Frac)> {
    let b = f.coeff(1);
    let c = f.coeff(0);
    let disc = b.mul(&b).sub(&c.mul(&c.int_like(4)));
    let s = frac_sqrt(&disc)?;
    let half = Frac::ratio(b.nvars(), BigInt::one(), BigInt::from(2)).ok()?;
    let r1 = b.neg().add(&s).mul(&half);
    let r2 = b.neg().sub(&s).mul(&half);
    Some((r1, r2))
}

/// Exact square root in K.
pub fn frac_sqrt(x: &Frac) -> Option<Frac> {
    if x.is_zero() {
        return Some(x.clone());
    }
    // sqrt(n/d) = sqrt(n*d)/d
    let nd = x.num().mul(x.den());
    let r = nd.sqrt()?;
    Frac::new(r, x.den().clone()).ok()
}

/// Rational constants c with f0(c) = 0, where f0 is f with every ring
/// variable set to 0; constant roots of f are among them.
fn constant_root_candidates(f: &UPoly<Frac>) -> Result<Vec<Frac>> {
    let n = f.like().nvars();
    let kill = vec![true; n];
    let f0 = f.try_map(f.like(), |c| c.substitute_zero(&kill))?;
    // clear denominators to an integer polynomial
    let mut l = BigInt::one();
    for c in f0.coeffs() {
        l = l.lcm(&c.den().constant_term());
    }
    let ints: Vec<BigInt> = f0
        .coeffs()
        .iter()
        .map(|c| c.num().constant_term() * (&l / c.den().constant_term()))
        .collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut out = vec![];
    if low > 0 {
        out.push(Frac::zero_n(n));
    }
    let a0 = ints[low].abs();
    let an = ints.last().cloned().unwrap_or_else(BigInt::one).abs();
    let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) else {
        return Err(VqError::OracleMissing(format!("{f} (constant term too large to enumerate roots)")));
    };
    for p in &ps {
        for q in &qs {
            if p.gcd(q) != BigInt::one() {
                continue;
            }
            for sign in [1, -1] {
                let c = Frac::ratio(n, p * sign, q.clone())?;
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

fn divisors(x: &BigInt) -> Option<Vec<BigInt>> {
    let v = x.to_u64()?;
    if v > 1_000_000_000_000 {
        return None;
    }
    let mut out = vec![];
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// The distinguished factor F* with provenance of the factorization.
#[derive(Debug, Clone)]
pub struct FStar {
    pub poly: UPoly<Frac>,
    pub cofactor: UPoly<Frac>,
    pub origin: FactorOrigin,
    pub factors: Vec<UPoly<Frac>>,
}

pub fn fstar<V: ValueCtx<Frac>>(
    ctx: &V,
    f: &NagataPoly<Frac>,
    oracle: &FactorSource,
) -> Result<FStar> {
    let fac = oracle.factor(f.poly())?;
    let like = f.poly().like().clone();
    let mut prod = UPoly::constant(like.one_like());
    for g in &fac.factors {
        prod = prod.mul(g);
    }
    if &prod != f.poly() {
        return Err(VqError::FactorMismatch(ctx_show_poly(ctx, f.poly())));
    }
    let mut star = None;
    let mut cofactor = UPoly::constant(like.one_like());
    for g in &fac.factors {
        if ctx.value(&g.coeff(0))?.is_positive() {
            if star.is_some() {
                return Err(VqError::NonUnique);
            }
            star = Some(g.clone());
        } else {
            if !ctx.value(&g.coeff(0))?.is_zero() {
                return Err(VqError::FactorNotInR(ctx_show_poly(ctx, g)));
            }
            cofactor = cofactor.mul(g);
        }
    }
    let star = star.ok_or_else(|| {
        VqError::FactorClassification("no factor has a constant term of positive value".into())
    })?;
    for c in star.coeffs().iter().chain(cofactor.coeffs()) {
        if ctx.locality(c)? == Locality::NotInR {
            return Err(VqError::FactorNotInR(ctx_show_poly(ctx, &star)));
        }
    }
    Ok(FStar { poly: star, cofactor, origin: fac.origin, factors: fac.factors })
}

fn ctx_show_poly<C: Scalar, V: ValueCtx<C>>(ctx: &V, p: &UPoly<C>) -> String {
    p.pretty("X", &ctx.names())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valring::ValuedRing;

    fn ring1() -> ValuedRing {
        ValuedRing::standard(&["t"]).unwrap()
    }

    fn t1() -> Frac {
        Frac::var(1, 0)
    }

    fn k(n: i64) -> Frac {
        Frac::int(1, n)
    }

    fn up(cs: Vec<Frac>) -> UPoly<Frac> {
        let z = cs[0].zero_like();
        UPoly::new(cs, &z)
    }

    #[test]
    fn recognition() {
        let r = ring1();
        let f = up(vec![t1().neg(), k(1), k(1)]);
        assert!(!is_nagata(&r, &f).unwrap().trivial_hint());
        let g = up(vec![t1().neg(), t1(), k(1)]);
        assert_eq!(is_nagata(&r, &g).unwrap_err(), VqError::NotNagata(Rejection::LinearNotUnit));
        let lin = up(vec![k(0), k(1)]);
        assert!(is_nagata(&r, &lin).unwrap().trivial_hint());
        let nm = up(vec![t1().neg(), k(1), k(2)]);
        assert_eq!(is_nagata(&r, &nm).unwrap_err(), VqError::NotNagata(Rejection::NotMonic));
        let unit_const = up(vec![k(1), k(1), k(1)]);
        assert_eq!(is_nagata(&r, &unit_const).unwrap_err(), VqError::NotNagata(Rejection::ConstNotInM));
    }

    #[test]
    fn shift_of_quadratic() {
        let r = ring1();
        let f = is_nagata(&r, &up(vec![t1().neg(), k(1), k(1)])).unwrap();
        let g = change_of_variable(&r, &f, &t1()).unwrap();
        assert_eq!(g.poly(), &up(vec![t1().mul(&t1()), k(1).add(&t1().add(&t1())), k(1)]));
        assert_eq!(change_of_variable(&r, &f, &k(0)).unwrap(), f);
        assert_eq!(change_of_variable(&r, &f, &k(1)).unwrap_err(), VqError::AlphaNotInMaximal);
    }

    #[test]
    fn classification_of_factors() {
        let r = ring1();
        let g = up(vec![k(1).add(&t1()), k(1)]);
        let q = up(vec![t1().neg(), k(1)]);
        assert_eq!(fac_classify(&r, &g, &q).unwrap(), FacSide::SecondIsNagata);
        assert_eq!(fac_classify(&r, &q, &g).unwrap(), FacSide::FirstIsNagata);
        let g2 = up(vec![k(1), k(1)]);
        assert_eq!(fac_classify(&r, &g2, &q).unwrap(), FacSide::SecondIsNagata);
    }

    #[test]
    fn distinguished_factor() {
        let r = ring1();
        let cubic = up(vec![t1().neg(), k(1).sub(&t1()), k(2), k(1)]);
        let f = is_nagata(&r, &cubic).unwrap();
        let s = fstar(&r, &f, &FactorSource::new()).unwrap();
        assert_eq!(s.poly, up(vec![t1().neg(), k(1), k(1)]));
        assert_eq!(s.origin, FactorOrigin::Builtin);

        let quad = is_nagata(&r, &up(vec![t1().neg(), k(1), k(1)])).unwrap();
        assert_eq!(fstar(&r, &quad, &FactorSource::new()).unwrap().poly, *quad.poly());

        let mut src = FactorSource::new();
        src.add(quad.poly().clone(), vec![quad.poly().clone()]).unwrap();
        assert_eq!(fstar(&r, &quad, &src).unwrap().origin, FactorOrigin::Declared);
    }

    #[test]
    fn quartic_needs_a_list() {
        let r = ring1();
        let a = up(vec![t1().neg(), k(1), k(1)]);
        let b = up(vec![k(1), k(1), k(1)]);
        let f = is_nagata(&r, &a.mul(&b)).unwrap();
        assert!(matches!(fstar(&r, &f, &FactorSource::new()), Err(VqError::OracleMissing(_))));
        let mut src = FactorSource::new();
        src.add(f.poly().clone(), vec![b.clone(), a.clone()]).unwrap();
        assert_eq!(fstar(&r, &f, &src).unwrap().poly, a);
        assert!(src.add(f.poly().clone(), vec![a.clone()]).is_err());
    }
}
