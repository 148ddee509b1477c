//! Dense univariate polynomials over any [`Scalar`].

use std::fmt;

use super::Scalar;
use crate::error::{Result, VqError};

#[derive(Clone, Debug)]
pub struct UPoly<C: Scalar> {
    coeffs: Vec<C>,
    zero: C,
}

impl<C: Scalar> PartialEq for UPoly<C> {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
    }
}

impl<C: Scalar> UPoly<C> {
    /// Coefficients low to high; `like` supplies the ring for zero.
    pub fn new(mut coeffs: Vec<C>, like: &C) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs, zero: like.zero_like() }
    }

    pub fn zero(like: &C) -> Self {
        UPoly::new(vec![], like)
    }

    pub fn constant(c: C) -> Self {
        let z = c.zero_like();
        UPoly::new(vec![c], &z)
    }

    /// The polynomial X.
    pub fn x(like: &C) -> Self {
        UPoly::new(vec![like.zero_like(), like.one_like()], like)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn like(&self) -> &C {
        &self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn lc(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|c| *c == c.one_like())
    }

    pub fn map<D: Scalar>(&self, like: &D, f: impl Fn(&C) -> D) -> UPoly<D> {
        UPoly::new(self.coeffs.iter().map(f).collect(), like)
    }

    pub fn try_map<D: Scalar>(&self, like: &D, f: impl Fn(&C) -> Result<D>) -> Result<UPoly<D>> {
        let cs: Result<Vec<D>> = self.coeffs.iter().map(f).collect();
        Ok(UPoly::new(cs?, like))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect(), &self.zero)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect(), &self.zero)
    }

    pub fn neg(&self) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.neg()).collect(), &self.zero)
    }

    pub fn scale(&self, k: &C) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.mul(k)).collect(), &self.zero)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(&self.zero);
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(out, &self.zero)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = UPoly::constant(self.zero.one_like());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        self.hasse(1)
    }

    /// The m-th Hasse-Schmidt derivative: sum_k C(k, m) c_k X^(k-m).
    pub fn hasse(&self, m: usize) -> Self {
        if self.coeffs.len() <= m {
            return UPoly::zero(&self.zero);
        }
        let out = (m..self.coeffs.len())
            .map(|k| self.coeffs[k].mul(&self.zero.int_like(binomial(k, m))))
            .collect();
        UPoly::new(out, &self.zero)
    }

    /// All h_m with h(X + a) = sum_m h_m(X) a^m, m = 0..deg h.
    pub fn taylor(&self) -> Vec<Self> {
        (0..self.coeffs.len()).map(|m| self.hasse(m)).collect()
    }

    /// The polynomial h(X + a).
    pub fn shift(&self, a: &C) -> Self {
        // repeated synthetic division by (X - (-a)) gives the coefficients
        // of h(X + a) from the lowest upwards
        let mut work = self.coeffs.clone();
        let n = work.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = work[j + 1].mul(a);
                work[j] = work[j].add(&t);
            }
        }
        UPoly::new(work, &self.zero)
    }

    /// Composition h(g(X)).
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = UPoly::zero(&self.zero);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// Division with remainder; the divisor's leading coefficient must be
    /// invertible.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(VqError::DivisionByZero)?;
        let inv = d.lc().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UPoly::zero(&self.zero), self.clone()));
        }
        let mut q = vec![self.zero.clone(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(dc));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((UPoly::new(q, &self.zero), UPoly::new(r, &self.zero)))
    }

    pub fn monic(&self) -> Result<Self> {
        let inv = self.lc().ok_or(VqError::ZeroPoly)?.inv()?;
        Ok(self.scale(&inv))
    }

    pub fn pretty(&self, var: &str, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let mut s = c.pretty(names);
            let mut neg = false;
            if !c.needs_parens() {
                if let Some(rest) = s.strip_prefix('-') {
                    neg = true;
                    s = rest.to_string();
                }
            } else if mono.is_empty() && s.starts_with('-') && !out.is_empty() {
                neg = true;
                s = format!("({})", c.neg().pretty(names));
            }
            let body = if mono.is_empty() {
                s
            } else if s == "1" {
                mono
            } else if c.needs_parens() {
                format!("({s})*{mono}")
            } else {
                format!("{s}*{mono}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl<C: Scalar> fmt::Display for UPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty("X", &[]))
    }
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}
