//! Fractions of integer polynomials: elements of K = Q(x1..xn).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mpoly::{gcd, MPoly};
use super::Scalar;
use crate::error::{Result, VqError};

/// Full gcd cancellation is attempted only below this many terms; larger
/// fractions keep a cheaper normal form (content and monomial factors).
const GCD_TERM_LIMIT: usize = 48;

#[derive(Clone, Debug)]
pub struct Frac {
    num: MPoly,
    den: MPoly,
}

impl Frac {
    pub fn new(num: MPoly, den: MPoly) -> Result<Frac> {
        if den.is_zero() {
            return Err(VqError::DivisionByZero);
        }
        Ok(Frac::normalized(num, den))
    }

    /// A fraction kept exactly as given; for short-lived values whose
    /// normal form is never inspected.
    pub fn raw(num: MPoly, den: MPoly) -> Frac {
        debug_assert!(!den.is_zero());
        Frac { num, den }
    }

    fn normalized(num: MPoly, den: MPoly) -> Frac {
        let n = num.nvars();
        if num.is_zero() {
            return Frac { num, den: MPoly::one(n) };
        }
        let m1 = num.min_exponents();
        let m2 = den.min_exponents();
        let m: Vec<u32> = m1.iter().zip(&m2).map(|(a, b)| *a.min(b)).collect();
        let (mut num, mut den) = if m.iter().any(|&x| x > 0) {
            (num.div_monomial(&m), den.div_monomial(&m))
        } else {
            (num, den)
        };
        if !den.is_constant() && num.len() + den.len() <= GCD_TERM_LIMIT {
            let g = gcd(&num, &den);
            if !g.is_constant() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
            }
        }
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.div_int(&c);
            den = den.div_int(&c);
        }
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        Frac { num, den }
    }

    /// Reduces by the full polynomial gcd regardless of size.
    pub fn reduced(&self) -> Frac {
        if self.num.is_zero() || self.den.is_constant() {
            return self.clone();
        }
        let g = gcd(&self.num, &self.den);
        if g.is_constant() {
            return self.clone();
        }
        Frac::normalized(
            self.num.exact_div(&g).expect("gcd divides numerator"),
            self.den.exact_div(&g).expect("gcd divides denominator"),
        )
    }

    pub fn from_poly(p: MPoly) -> Frac {
        let n = p.nvars();
        Frac { num: p, den: MPoly::one(n) }
    }

    pub fn zero_n(nvars: usize) -> Frac {
        Frac::from_poly(MPoly::zero(nvars))
    }

    pub fn one_n(nvars: usize) -> Frac {
        Frac::from_poly(MPoly::one(nvars))
    }

    pub fn int(nvars: usize, k: i64) -> Frac {
        Frac::from_poly(MPoly::from_int(nvars, k))
    }

    pub fn ratio(nvars: usize, p: BigInt, q: BigInt) -> Result<Frac> {
        Frac::new(MPoly::constant(nvars, p), MPoly::constant(nvars, q))
    }

    pub fn var(nvars: usize, j: usize) -> Frac {
        Frac::from_poly(MPoly::var(nvars, j))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Frac) -> Frac {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Frac::normalized(self.num.add(&o.num), self.den.clone());
        }
        if o.den.is_constant() && self.den.len() > 1 || o.den.len() > self.den.len() {
            if let Some(k) = self.den.exact_div(&o.den) {
                return Frac::normalized(self.num.add(&o.num.mul(&k)), self.den.clone());
            }
        }
        if self.den.is_constant() && o.den.len() > 1 || self.den.len() > o.den.len() {
            if let Some(k) = o.den.exact_div(&self.den) {
                return Frac::normalized(self.num.mul(&k).add(&o.num), o.den.clone());
            }
        }
        Frac::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero_n(self.nvars());
        }
        // cancel structurally equal cross factors before multiplying
        let (n1, d2) = if self.num == o.den {
            (MPoly::one(self.nvars()), MPoly::one(self.nvars()))
        } else {
            (self.num.clone(), o.den.clone())
        };
        let (n2, d1) = if o.num == self.den {
            (MPoly::one(self.nvars()), MPoly::one(self.nvars()))
        } else {
            (o.num.clone(), self.den.clone())
        };
        Frac::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Result<Frac> {
        if self.is_zero() {
            return Err(VqError::DivisionByZero);
        }
        Ok(Frac::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Frac) -> Result<Frac> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: u32) -> Frac {
        Frac::normalized(self.num.pow(k), self.den.pow(k))
    }

    /// Membership in the localization at the origin: some representative
    /// has a denominator with nonzero constant term.
    pub fn in_local_ring(&self) -> bool {
        if !self.den.constant_term().is_zero() {
            return true;
        }
        !self.reduced().den.constant_term().is_zero()
    }

    /// Sets the flagged variables to zero in numerator and denominator.
    /// Meaningful for elements of the local ring whose denominator keeps a
    /// nonzero constant term.
    pub fn substitute_zero(&self, kill: &[bool]) -> Result<Frac> {
        let f = if self.den.constant_term().is_zero() { self.reduced() } else { self.clone() };
        Frac::new(f.num.substitute_zero(kill), f.den.substitute_zero(kill))
    }

    pub fn remap(&self, nvars: usize, map: &[Option<usize>]) -> Frac {
        Frac::normalized(self.num.remap(nvars, map), self.den.remap(nvars, map))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let n = self.num.fmt_with(names);
        if self.den.is_constant() && self.den.constant_term().is_one() {
            return n;
        }
        let d = self.den.fmt_with(names);
        let wrap = |s: String, p: &MPoly| {
            if p.len() > 1 || s.starts_with('-') && p.len() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        let nn = if self.num.len() > 1 { format!("({n})") } else { n };
        format!("{}/{}", nn, wrap(d, &self.den))
    }
}

impl PartialEq for Frac {
    fn eq(&self, o: &Frac) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|j| format!("x{j}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

impl Scalar for Frac {
    fn zero_like(&self) -> Self {
        Frac::zero_n(self.nvars())
    }
    fn one_like(&self) -> Self {
        Frac::one_n(self.nvars())
    }
    fn int_like(&self, k: i64) -> Self {
        Frac::int(self.nvars(), k)
    }
    fn is_zero(&self) -> bool {
        Frac::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Frac::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Frac::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Frac::mul(self, o)
    }
    fn neg(&self) -> Self {
        Frac::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        Frac::inv(self)
    }
    fn pretty(&self, names: &[String]) -> String {
        self.fmt_with(names)
    }
    fn needs_parens(&self) -> bool {
        self.num.len() > 1 || !(self.den.is_constant() && self.den.constant_term().is_one())
    }
}
