//! Sparse multivariate polynomials with integer coefficients.
//!
//! Rational data is carried one level up, in [`super::Frac`]; keeping the
//! polynomial layer over Z lets large products go through Kronecker
//! substitution into a single big-integer multiplication.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use rug::integer::Order;
use rug::Integer as BigZ;
use num_traits::{One, Signed, Zero};

pub type Exp = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exp, BigInt>,
}

const SCHOOLBOOK_LIMIT: usize = 6_000;
const KRONECKER_WORD_LIMIT: u128 = 1 << 25;

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, BigInt::one())
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        MPoly::constant(nvars, BigInt::from(c))
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        MPoly::monomial(e, BigInt::one())
    }

    pub fn monomial(exp: Exp, c: BigInt) -> Self {
        let mut p = MPoly::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Exp, BigInt)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exp, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_default()
    }

    /// Lex-largest term (variable 0 most significant).
    pub fn leading(&self) -> Option<(&Exp, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut r = big.clone();
        for (e, c) in &small.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }

    pub fn scale(&self, k: &BigInt) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, exp: &[u32]) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exp).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        if self.is_zero() || o.is_zero() {
            return MPoly::zero(self.nvars);
        }
        if self.len() == 1 || o.len() == 1 {
            let (mono, other) = if self.len() == 1 { (self, o) } else { (o, self) };
            let (e, c) = mono.leading().unwrap();
            return other.mul_monomial(e).scale(c);
        }
        if self.len().min(o.len()) > 4 && self.len().saturating_mul(o.len()) > SCHOOLBOOK_LIMIT {
            if let Some(p) = kronecker_mul(self, o) {
                return p;
            }
        }
        self.schoolbook(o)
    }

    fn schoolbook(&self, o: &MPoly) -> MPoly {
        let mut acc: HashMap<Exp, BigInt> = HashMap::with_capacity(self.len().saturating_mul(o.len()).min(1 << 16));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Exp = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        MPoly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, mut k: u32) -> MPoly {
        let mut base = self.clone();
        let mut r = MPoly::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Positive gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_int(&self, k: &BigInt) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / k)).collect(),
        }
    }

    /// Componentwise minimum exponent (the largest monomial dividing self).
    pub fn min_exponents(&self) -> Exp {
        let mut m: Option<Exp> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn div_monomial(&self, exp: &[u32]) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exp).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Coefficients with respect to variable `v`, lowest degree first.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, v: usize, cs: &[MPoly]) -> MPoly {
        let mut r = MPoly::zero(nvars);
        for (k, c) in cs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += k as u32;
                r.add_term(e2, x.clone());
            }
        }
        r
    }

    /// Sets every variable with `kill[j]` to zero.
    pub fn substitute_zero(&self, kill: &[bool]) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().zip(kill).all(|(x, k)| !*k || *x == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-indexes variables: variable j of self becomes variable `map[j]`
    /// of a ring with `nvars` variables. Variables mapped to `None` must not
    /// occur.
    pub fn remap(&self, nvars: usize, map: &[Option<usize>]) -> MPoly {
        let mut r = MPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (j, &x) in e.iter().enumerate() {
                if x > 0 {
                    let k = map[j].expect("remapped variable occurs in polynomial");
                    e2[k] += x;
                }
            }
            r.add_term(e2, c.clone());
        }
        r
    }

    /// Lex-minimum of `sum_j e_j * weights[j]` over the terms.
    pub fn value(&self, weights: &[Vec<i64>]) -> Option<Vec<i64>> {
        let rank = weights.first().map(|w| w.len()).unwrap_or(0);
        self.terms
            .keys()
            .map(|e| {
                let mut v = vec![0i64; rank];
                for (x, w) in e.iter().zip(weights) {
                    if *x > 0 {
                        for (vi, wi) in v.iter_mut().zip(w) {
                            *vi += *x as i64 * wi;
                        }
                    }
                }
                v
            })
            .min()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide self.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero(self.nvars));
        }
        let (de, dc) = d.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        if d.len() == 1 {
            let mut q = MPoly::zero(self.nvars);
            for (e, c) in &self.terms {
                if e.iter().zip(&de).any(|(a, b)| a < b) || !(c % &dc).is_zero() {
                    return None;
                }
                q.terms.insert(e.iter().zip(&de).map(|(a, b)| a - b).collect(), c / &dc);
            }
            return Some(q);
        }
        for v in 0..self.nvars {
            if d.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let mut r = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((re, rc)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, rem) = rc.div_rem(&dc);
            if !rem.is_zero() {
                return None;
            }
            let qe: Exp = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            for (e, c) in &d.terms {
                let e2: Exp = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                r.add_term(e2, -(c * &qc));
            }
            q.terms.insert(qe, qc);
        }
        Some(q)
    }

    /// Sign-normalized so the lex-leading coefficient is positive.
    pub fn normalize_sign(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Exact square root with positive leading coefficient, if one exists.
    pub fn sqrt(&self) -> Option<MPoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (le, lc) = self.leading().unwrap();
        if lc.is_negative() || le.iter().any(|x| x % 2 == 1) {
            return None;
        }
        let r0 = lc.sqrt();
        if &(&r0 * &r0) != lc {
            return None;
        }
        let s0e: Exp = le.iter().map(|x| x / 2).collect();
        let mins = self.min_exponents();
        let mut s = MPoly::monomial(s0e.clone(), r0.clone());
        let two_lc = &r0 * 2;
        let mut rem = self.sub(&s.mul(&s));
        let mut guard = 0usize;
        let limit: usize = (0..self.nvars).map(|v| self.degree_in(v) as usize / 2 + 1).product();
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            guard += 1;
            if guard > limit {
                return None;
            }
            if re.iter().zip(&s0e).any(|(a, b)| a < b) {
                return None;
            }
            let te: Exp = re.iter().zip(&s0e).map(|(a, b)| a - b).collect();
            if te.iter().zip(&mins).any(|(t, m)| 2 * t < *m) {
                return None;
            }
            let (tc, r) = rc.div_rem(&two_lc);
            if !r.is_zero() {
                return None;
            }
            let t = MPoly::monomial(te, tc);
            // (s + t)^2 = s^2 + 2 s t + t^2
            let upd = s.mul(&t).scale(&BigInt::from(2)).add(&t.mul(&t));
            rem = rem.sub(&upd);
            s = s.add(&t);
        }
        Some(s)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Exp> = self.terms.keys().collect();
        // graded: ascending total degree, earlier variables first within a degree
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (i, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mono = mono_string(e, names);
            let (neg, mag) = (c.is_negative(), c.abs());
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

pub fn mono_string(e: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (j, &x) in e.iter().enumerate() {
        let name = names.get(j).cloned().unwrap_or_else(|| format!("x{j}"));
        match x {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{x}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|j| format!("x{j}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

fn bit_len(x: &BigInt) -> u64 {
    x.bits()
}

/// Product through a single big-integer multiplication. Returns `None` when
/// the packed operands would be unreasonably large.
fn kronecker_mul(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    let n = a.nvars;
    let mut bound = vec![0u64; n];
    for v in 0..n {
        bound[v] = a.degree_in(v) as u64 + b.degree_in(v) as u64 + 1;
    }
    let mut strides = vec![1u128; n];
    let mut total: u128 = 1;
    for v in (0..n).rev() {
        strides[v] = total;
        total = total.checked_mul(bound[v] as u128)?;
    }
    let index = |e: &Exp| -> u128 { e.iter().zip(&strides).map(|(x, s)| *x as u128 * s).sum() };
    let ia: Vec<u128> = a.terms.keys().map(index).collect();
    let ib: Vec<u128> = b.terms.keys().map(index).collect();
    // compress when all exponents sit on a sublattice of the index line
    let mut g: u128 = 0;
    for &x in ia.iter().chain(ib.iter()) {
        g = gcd_u128(g, x);
    }
    if g == 0 {
        g = 1;
    }
    let maxa = ia.iter().max().copied().unwrap_or(0) / g;
    let maxb = ib.iter().max().copied().unwrap_or(0) / g;
    let slots = maxa + maxb + 1;
    let ba = a.terms.values().map(bit_len).max().unwrap_or(1);
    let bb = b.terms.values().map(bit_len).max().unwrap_or(1);
    let nmin = a.len().min(b.len()) as u64;
    let need = ba + bb + (64 - nmin.leading_zeros() as u64) + 2;
    let w = need.div_ceil(64) as usize;
    if slots * w as u128 > KRONECKER_WORD_LIMIT {
        return None;
    }
    let pa = pack(a, &ia, g, w, maxa as usize + 1);
    let pb = pack(b, &ib, g, w, maxb as usize + 1);
    let prod = BigZ::from(&pa * &pb);
    let coeffs = unpack(&prod, w, slots as usize);
    let mut out = MPoly::zero(n);
    for (k, c) in coeffs.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut idx = k as u128 * g;
        let mut e = vec![0u32; n];
        for v in 0..n {
            e[v] = (idx / strides[v]) as u32;
            idx %= strides[v];
        }
        out.terms.insert(e, c);
    }
    Some(out)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn pack(p: &MPoly, idx: &[u128], g: u128, w: usize, slots: usize) -> BigZ {
    let mut pos = vec![0u64; slots * w];
    let mut neg = vec![0u64; slots * w];
    let mut any_neg = false;
    for ((_, c), &i) in p.terms.iter().zip(idx) {
        let at = (i / g) as usize * w;
        let digits = c.magnitude().to_u64_digits();
        let dst = if c.is_negative() {
            any_neg = true;
            &mut neg
        } else {
            &mut pos
        };
        dst[at..at + digits.len()].copy_from_slice(&digits);
    }
    let p = BigZ::from_digits(&pos, Order::Lsf);
    if any_neg {
        p - BigZ::from_digits(&neg, Order::Lsf)
    } else {
        p
    }
}

/// Reads `slots` balanced coefficients of `w` limbs each.
fn unpack(x: &BigZ, w: usize, slots: usize) -> Vec<BigInt> {
    let negative = x.cmp0().is_lt();
    let limbs = x.as_abs().to_digits::<u64>(Order::Lsf);
    let mut out = Vec::with_capacity(slots);
    let mut carry = false;
    let mut buf = vec![0u64; w];
    for k in 0..slots {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = limbs.get(k * w + i).copied().unwrap_or(0);
        }
        let mut overflow = carry;
        for b in buf.iter_mut() {
            if !overflow {
                break;
            }
            let (s, o) = b.overflowing_add(1);
            *b = s;
            overflow = o;
        }
        let high = buf[w - 1] >> 63 == 1;
        if high {
            // two's complement: the slot holds s - 2^(64w)
            let mut one = true;
            for b in buf.iter_mut() {
                *b = !*b;
                if one {
                    let (s, o) = b.overflowing_add(1);
                    *b = s;
                    one = o;
                }
            }
        }
        carry = high || overflow;
        let mag = BigUint::new(buf.iter().flat_map(|&l| [l as u32, (l >> 32) as u32]).collect());
        let slot_neg = high != negative;
        out.push(BigInt::from_biguint(if slot_neg { Sign::Minus } else { Sign::Plus }, mag));
    }
    out
}

/// Greatest common divisor over Z[x1..xn], normalized with positive
/// lex-leading coefficient.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.normalize_sign();
    }
    if b.is_zero() {
        return a.normalize_sign();
    }
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let m: Exp = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let g = gcd_nomono(&a1, &b1);
    g.mul_monomial(&m).normalize_sign()
}

fn gcd_nomono(a: &MPoly, b: &MPoly) -> MPoly {
    let n = a.nvars;
    if a.is_constant() || b.is_constant() {
        let ca = a.content();
        let cb = b.content();
        return MPoly::constant(n, ca.gcd(&cb));
    }
    let v = (0..n).find(|&v| a.involves(v) || b.involves(v)).unwrap();
    if !a.involves(v) {
        return gcd_nomono(a, &content_in(b, v));
    }
    if !b.involves(v) {
        return gcd_nomono(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let gc = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break q;
        }
        if !r.involves(v) {
            break MPoly::one(n);
        }
        p = q;
        q = primitive_in(&r, v);
    };
    primitive_in(&g, v).mul(&gc).normalize_sign()
}

fn content_in(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero(p.nvars);
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() && g.constant_term().is_one() {
            break;
        }
    }
    g
}

fn primitive_in(p: &MPoly, v: usize) -> MPoly {
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides").normalize_sign()
}

/// Pseudo-remainder of `a` by `b` as polynomials in variable `v`.
fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let n = a.nvars;
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lc = bc[db].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) as usize >= db {
        let dr = r.degree_in(v) as usize;
        let lr = r.coeffs_in(v).swap_remove(dr);
        let mut shift = vec![0u32; n];
        shift[v] = (dr - db) as u32;
        r = r.mul(&lc).sub(&b.mul(&lr).mul_monomial(&shift));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, ts: &[(&[u32], i64)]) -> MPoly {
        MPoly::from_terms(n, ts.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a = p(2, &[(&[0, 0], 3), (&[1, 0], -7), (&[0, 2], 5), (&[3, 1], -1)]);
        let b = p(2, &[(&[0, 1], 2), (&[2, 0], -4), (&[1, 1], 9)]);
        let mut big_a = a.clone();
        let mut big_b = b.clone();
        for _ in 0..3 {
            big_a = big_a.mul(&a).add(&b);
            big_b = big_b.mul(&b).sub(&a);
        }
        let k = kronecker_mul(&big_a, &big_b).unwrap();
        assert_eq!(k, big_a.schoolbook(&big_b));
    }

    #[test]
    fn kronecker_on_sublattice() {
        // everything in the monomial x0*x1
        let a = p(2, &[(&[0, 0], 1), (&[1, 1], -3), (&[4, 4], 2)]);
        let b = p(2, &[(&[2, 2], 5), (&[3, 3], -1)]);
        assert_eq!(kronecker_mul(&a, &b).unwrap(), a.schoolbook(&b));
    }

    #[test]
    fn exact_division() {
        let a = p(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p(2, &[(&[0, 0], 1), (&[1, 0], -2), (&[0, 3], 1)]);
        let ab = a.mul(&b);
        assert_eq!(ab.exact_div(&a).unwrap(), b);
        assert!(b.exact_div(&a).is_none());
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let a = p(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 2], 1)]);
        let b = p(2, &[(&[0, 0], 1), (&[1, 0], -2)]);
        let c = p(2, &[(&[0, 1], 3), (&[2, 0], 1)]);
        let g = gcd(&a.mul(&b), &a.mul(&c));
        assert_eq!(g, a.normalize_sign());
        let t = p(1, &[(&[2], 1)]);
        assert_eq!(gcd(&t, &t), t);
        let one = gcd(&b, &c);
        assert!(one.is_constant());
    }

    #[test]
    fn square_roots() {
        let a = p(2, &[(&[0, 0], 1), (&[0, 1], 2), (&[1, 0], -3)]);
        assert_eq!(a.mul(&a).sqrt().unwrap(), a.normalize_sign());
        let d = p(1, &[(&[0], 1), (&[1], 4)]);
        assert!(d.sqrt().is_none());
        let sq = p(1, &[(&[0], 1), (&[1], 4), (&[2], 4)]);
        assert_eq!(sq.sqrt().unwrap(), p(1, &[(&[0], 1), (&[1], 2)]));
    }
}
