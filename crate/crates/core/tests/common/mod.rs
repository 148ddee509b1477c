//! Shared test helpers: fixture loading and a truncated power-series oracle
//! that works in Q[[x1..xn]] independently of the library's Newton code.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use valq::cli::Fixture;
use valq::exactalg::{Frac, MPoly, UPoly};
use valq::ordgroup::GroupValue;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_path(name: &str) -> String {
    fixtures_dir().join(format!("{name}.vq")).to_string_lossy().into_owned()
}

pub fn fixture(name: &str) -> Fixture {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    Fixture::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every shipped fixture, sorted by name.
pub fn all_fixtures() -> Vec<(String, Fixture)> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "vq").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), fixture(&n))).collect()
}

fn q(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// A power series truncated at total degree `prec` (exclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub nvars: usize,
    pub prec: u32,
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Series {
    pub fn zero(nvars: usize, prec: u32) -> Self {
        Series { nvars, prec, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, prec: u32, c: BigRational) -> Self {
        let mut s = Series::zero(nvars, prec);
        if !c.is_zero() {
            s.terms.insert(vec![0; nvars], c);
        }
        s
    }

    pub fn from_mpoly(p: &MPoly, prec: u32) -> Self {
        let mut s = Series::zero(p.nvars(), prec);
        for (e, c) in p.terms() {
            if e.iter().sum::<u32>() < prec {
                s.terms.insert(e.clone(), q(c));
            }
        }
        s
    }

    /// Expansion of a fraction whose denominator is a unit of the power
    /// series ring.
    pub fn from_frac(x: &Frac, prec: u32) -> Option<Self> {
        let den = Series::from_mpoly(x.den(), prec);
        Some(Series::from_mpoly(x.num(), prec).mul(&den.inv()?))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add(&self, o: &Series) -> Series {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let v = out.terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *v += c;
            if v.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> Series {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c = -c.clone());
        out
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Series {
        if k.is_zero() {
            return Series::zero(self.nvars, self.prec);
        }
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= k);
        out
    }

    pub fn mul(&self, o: &Series) -> Series {
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &o.terms {
                if da + eb.iter().sum::<u32>() >= self.prec {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Series { nvars: self.nvars, prec: self.prec, terms: acc }
    }

    /// Inverse by Newton's iteration y <- y (2 - x y).
    pub fn inv(&self) -> Option<Series> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        let two = Series::constant(self.nvars, self.prec, BigRational::from_integer(2.into()));
        let mut y = Series::constant(self.nvars, self.prec, c0.recip());
        loop {
            let next = y.mul(&two.sub(&self.mul(&y)));
            if next == y {
                return Some(y);
            }
            y = next;
        }
    }

    /// Order of vanishing in one variable.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Smallest monomial value among the known terms, and the sum of the
    /// terms attaining it.
    pub fn leading(&self, weights: &[Vec<i64>]) -> Option<(GroupValue, Series)> {
        let rank = weights.first()?.len();
        let val = |e: &Vec<u32>| -> Vec<i64> {
            let mut v = vec![0i64; rank];
            for (x, w) in e.iter().zip(weights) {
                for (a, b) in v.iter_mut().zip(w) {
                    *a += *x as i64 * b;
                }
            }
            v
        };
        let best = self.terms.keys().map(val).min()?;
        let mut init = Series::zero(self.nvars, self.prec);
        for (e, c) in &self.terms {
            if val(e) == best {
                init.terms.insert(e.clone(), c.clone());
            }
        }
        Some((GroupValue::Fin(best), init))
    }

    pub fn value(&self, weights: &[Vec<i64>]) -> Option<GroupValue> {
        self.leading(weights).map(|(v, _)| v)
    }

    /// The series as a polynomial fraction (exact when it is a polynomial).
    pub fn to_frac(&self) -> Frac {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let num = MPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), (c * q(&den)).to_integer())),
        );
        Frac::new(num, MPoly::constant(self.nvars, den)).unwrap()
    }

    pub fn show(&self) -> String {
        let mut parts = vec![];
        for (e, c) in self.terms.iter().take(6) {
            let sign = if c.is_negative() { "-" } else { "+" };
            parts.push(format!("{sign}{}*{e:?}", c.abs()));
        }
        parts.join(" ")
    }
}

/// h evaluated at a series argument.
pub fn eval_series(h: &UPoly<Frac>, x: &Series) -> Series {
    let mut acc = Series::zero(x.nvars, x.prec);
    for c in h.coeffs().iter().rev() {
        acc = acc.mul(x).add(&Series::from_frac(c, x.prec).expect("coefficient not in R"));
    }
    acc
}

/// Newton iterates of F from 0, computed in the series ring.
pub fn series_newton(f: &UPoly<Frac>, nvars: usize, prec: u32, steps: usize) -> Vec<Series> {
    let df = f.derivative();
    let mut out = vec![Series::zero(nvars, prec)];
    for _ in 0..steps {
        let s = out.last().unwrap();
        let d = eval_series(f, s).mul(&eval_series(&df, s).inv().expect("F' not a unit"));
        out.push(s.sub(&d));
    }
    out
}

/// The root of F in the maximal ideal of the series ring, to precision
/// `prec`.
pub fn series_root(f: &UPoly<Frac>, nvars: usize, prec: u32) -> Series {
    let df = f.derivative();
    let mut cur = Series::zero(nvars, prec);
    loop {
        let d = eval_series(f, &cur).mul(&eval_series(&df, &cur).inv().expect("F' not a unit"));
        if d.is_zero() {
            return cur;
        }
        cur = cur.sub(&d);
    }
}

/// nu~(h(z)) as read off the series oracle: the smallest monomial value of
/// h(z) truncated at `prec`.
pub fn oracle_value(fx: &Fixture, f: &UPoly<Frac>, h: &UPoly<Frac>, prec: u32) -> Option<GroupValue> {
    let z = series_root(f, fx.ring.nvars(), prec);
    eval_series(h, &z).value(fx.ring.weights())
}
