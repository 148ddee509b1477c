//! The line-oriented fixture format.
//!
//! ```text
//! ring rank=2 vars=u,t weights=(1,0);(0,1)
//! poly F = X^2 + X - (t + t^2 + u)
//! factors F = (X - t)(X + 1 + t)
//! expect extend h = (1,0)
//! ```

use num_bigint::BigInt;

use crate::error::{Result, VqError};
use crate::exactalg::{Frac, Scalar, UPoly};
use crate::nagata::FactorSource;
use crate::valring::ValuedRing;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expect {
    pub tag: String,
    pub name: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub ring: ValuedRing,
    pub polys: Vec<(String, UPoly<Frac>)>,
    pub factors: Vec<(String, Vec<UPoly<Frac>>)>,
    pub expects: Vec<Expect>,
}

pub const EXPECT_TAGS: [&str; 6] = ["newton", "psi", "fstar", "goodvar", "classify", "extend"];

fn perr(line: usize, col: usize, msg: impl Into<String>) -> VqError {
    VqError::Parse { line, col, msg: msg.into() }
}

impl Fixture {
    pub fn parse(text: &str) -> Result<Fixture> {
        let mut ring: Option<ValuedRing> = None;
        let mut polys: Vec<(String, UPoly<Frac>)> = vec![];
        let mut factors = vec![];
        let mut expects = vec![];
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = line.len() - trimmed.len();
            let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed.trim_end(), ""));
            let rest_col = indent + kw.len() + 2;
            match kw {
                "ring" => {
                    if ring.is_some() {
                        return Err(perr(ln, indent + 1, "second ring declaration"));
                    }
                    ring = Some(parse_ring(rest, ln, rest_col)?);
                }
                "poly" | "factors" | "expect" => {
                    let r = ring.as_ref().ok_or_else(|| perr(ln, indent + 1, "ring must come first"))?;
                    let (lhs, rhs) = rest
                        .split_once('=')
                        .ok_or_else(|| perr(ln, rest_col, "expected `NAME = ...`"))?;
                    let rhs_col = rest_col + lhs.len() + 1 + (rhs.len() - rhs.trim_start().len());
                    let words: Vec<&str> = lhs.split_whitespace().collect();
                    match (kw, words.as_slice()) {
                        ("poly", [name]) => {
                            check_name(name, r, ln, rest_col)?;
                            if polys.iter().any(|(n, _)| n == name) {
                                return Err(perr(ln, rest_col, format!("poly {name} defined twice")));
                            }
                            let p = Parser::new(rhs.trim_start(), ln, rhs_col, r, &polys).parse_all()?;
                            polys.push((name.to_string(), p));
                        }
                        ("factors", [name]) => {
                            let fs = parse_factor_list(rhs.trim(), ln, rhs_col, r, &polys)?;
                            factors.push((name.to_string(), fs));
                        }
                        ("expect", [tag, name]) => {
                            if !EXPECT_TAGS.contains(tag) {
                                return Err(perr(ln, rest_col, format!("unknown expect tag `{tag}`")));
                            }
                            expects.push(Expect {
                                tag: tag.to_string(),
                                name: name.to_string(),
                                value: rhs.trim().to_string(),
                                line: ln,
                            });
                        }
                        _ => return Err(perr(ln, rest_col, format!("malformed {kw} line"))),
                    }
                }
                other => return Err(perr(ln, indent + 1, format!("unknown key `{other}`"))),
            }
        }
        let ring = ring.ok_or_else(|| VqError::Fixture("no ring declaration".into()))?;
        let fx = Fixture { ring, polys, factors, expects };
        for (name, fs) in &fx.factors {
            let f = fx.poly(name)?;
            let mut prod = UPoly::constant(f.like().one_like());
            for g in fs {
                prod = prod.mul(g);
            }
            if &prod != f {
                return Err(VqError::FactorMismatch(format!("factors of {name}")));
            }
        }
        for e in &fx.expects {
            fx.poly(&e.name)?;
        }
        Ok(fx)
    }

    pub fn poly(&self, name: &str) -> Result<&UPoly<Frac>> {
        self.polys
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| VqError::Fixture(format!("no poly named {name}")))
    }

    /// Factor lists as an oracle; the lists are also verified here.
    pub fn oracle(&self) -> Result<FactorSource> {
        let mut o = FactorSource::with_names(self.ring.names());
        for (name, fs) in &self.factors {
            o.add(self.poly(name)?.clone(), fs.clone())?;
        }
        Ok(o)
    }

    pub fn names(&self) -> &[String] {
        self.ring.names()
    }

    pub fn show(&self, p: &UPoly<Frac>) -> String {
        p.pretty("X", self.ring.names())
    }

    /// Canonical text; parsing it gives back the same fixture.
    pub fn to_text(&self) -> String {
        let r = &self.ring;
        let ws: Vec<String> = r
            .weights()
            .iter()
            .map(|w| format!("({})", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let mut out = format!("ring rank={} vars={} weights={}\n", r.rank(), r.names().join(","), ws.join(";"));
        for (n, p) in &self.polys {
            out.push_str(&format!("poly {n} = {}\n", self.show(p)));
        }
        for (n, fs) in &self.factors {
            let body: String = fs.iter().map(|g| format!("({})", self.show(g))).collect();
            out.push_str(&format!("factors {n} = {body}\n"));
        }
        for e in &self.expects {
            out.push_str(&format!("expect {} {} = {}\n", e.tag, e.name, e.value));
        }
        out
    }
}

fn check_name(name: &str, r: &ValuedRing, ln: usize, col: usize) -> Result<()> {
    let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ok || name == "X" || r.names().iter().any(|v| v == name) {
        return Err(perr(ln, col, format!("invalid poly name `{name}`")));
    }
    Ok(())
}

fn parse_ring(rest: &str, ln: usize, col0: usize) -> Result<ValuedRing> {
    let mut rank = None;
    let mut vars: Option<(Vec<String>, usize)> = None;
    let mut weights: Option<Vec<Vec<i64>>> = None;
    let mut pos = 0;
    for tok in rest.split_whitespace() {
        let at = rest[pos..].find(tok).unwrap() + pos;
        pos = at + tok.len();
        let col = col0 + at;
        let (k, v) = tok.split_once('=').ok_or_else(|| perr(ln, col, format!("expected key=value, got `{tok}`")))?;
        let vcol = col + k.len() + 1;
        match k {
            "rank" => {
                rank = Some(v.parse::<usize>().map_err(|_| perr(ln, vcol, "rank must be a positive integer"))?)
            }
            "vars" => {
                let names: Vec<String> = v.split(',').map(str::to_string).collect();
                for n in &names {
                    let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok || n == "X" {
                        return Err(perr(ln, vcol, format!("invalid variable name `{n}`")));
                    }
                }
                vars = Some((names, vcol));
            }
            "weights" => weights = Some(parse_weights(v, ln, vcol)?),
            _ => return Err(perr(ln, col, format!("unknown ring key `{k}`"))),
        }
    }
    let rank = rank.ok_or_else(|| perr(ln, col0, "ring needs rank="))?;
    let (names, vcol) = vars.ok_or_else(|| perr(ln, col0, "ring needs vars="))?;
    let weights = match weights {
        Some(w) => w,
        None if names.len() == rank => {
            (0..rank).map(|j| (0..rank).map(|k| i64::from(j == k)).collect()).collect()
        }
        None => return Err(perr(ln, vcol, "weights= is required unless there is one variable per rank")),
    };
    if weights.iter().any(|w| w.len() != rank) {
        return Err(VqError::Fixture(format!("every weight needs {rank} entries")));
    }
    for w in &weights {
        if w.iter().find(|&&x| x != 0).is_none_or(|&x| x < 0) {
            return Err(VqError::Fixture(format!("weight {w:?} is not lex-positive")));
        }
    }
    ValuedRing::new(names, weights)
}

fn parse_weights(v: &str, ln: usize, col0: usize) -> Result<Vec<Vec<i64>>> {
    let b = v.as_bytes();
    let mut i = 0;
    let mut out = vec![];
    loop {
        if b.get(i) != Some(&b'(') {
            return Err(perr(ln, col0 + i, "expected `(` in weights"));
        }
        i += 1;
        let mut w = vec![];
        loop {
            let start = i;
            if b.get(i) == Some(&b'-') {
                i += 1;
            }
            while b.get(i).is_some_and(u8::is_ascii_digit) {
                i += 1;
            }
            let s = &v[start..i];
            let x = s.parse::<i64>().map_err(|_| perr(ln, col0 + start, "expected an integer in weights"))?;
            w.push(x);
            match b.get(i) {
                Some(b',') => i += 1,
                Some(b')') => {
                    i += 1;
                    break;
                }
                _ => return Err(perr(ln, col0 + i, "expected `,` or `)` in weights")),
            }
        }
        out.push(w);
        match b.get(i) {
            None => return Ok(out),
            Some(b';') => i += 1,
            _ => return Err(perr(ln, col0 + i, "expected `;` between weights")),
        }
    }
}

fn parse_factor_list(
    s: &str,
    ln: usize,
    col0: usize,
    r: &ValuedRing,
    polys: &[(String, UPoly<Frac>)],
) -> Result<Vec<UPoly<Frac>>> {
    let b = s.as_bytes();
    let mut out = vec![];
    let mut i = 0;
    while i < b.len() {
        if b[i] != b'(' {
            return Err(perr(ln, col0 + i, "expected `(` starting a factor"));
        }
        let mut depth = 0;
        let mut j = i;
        loop {
            match b.get(j) {
                Some(b'(') => depth += 1,
                Some(b')') => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                None => return Err(perr(ln, col0 + i, "unbalanced parenthesis")),
                _ => {}
            }
            j += 1;
        }
        out.push(Parser::new(&s[i + 1..j], ln, col0 + i + 1, r, polys).parse_all()?);
        i = j + 1;
        while b.get(i).is_some_and(u8::is_ascii_whitespace) {
            i += 1;
        }
    }
    if out.is_empty() {
        return Err(perr(ln, col0, "empty factor list"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

/// Recursive descent over + - * / ^ and parentheses.
struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ln: usize,
    end_col: usize,
    ring: &'a ValuedRing,
    polys: &'a [(String, UPoly<Frac>)],
    err: Option<VqError>,
}

impl<'a> Parser<'a> {
    fn new(s: &str, ln: usize, col0: usize, ring: &'a ValuedRing, polys: &'a [(String, UPoly<Frac>)]) -> Self {
        let mut toks = vec![];
        let mut err = None;
        let cs: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            let c = cs[i];
            let col = col0 + i;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = cs[st..i].iter().collect();
                toks.push((Tok::Num(txt.parse().unwrap()), col));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let st = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(cs[st..i].iter().collect()), col));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Op(c), col));
                i += 1;
            } else {
                err.get_or_insert(perr(ln, col, format!("unexpected character `{c}`")));
                i += 1;
            }
        }
        Parser { toks, pos: 0, ln, end_col: col0 + cs.len(), ring, polys, err }
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(perr(self.ln, self.col(), msg))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn zero(&self) -> Frac {
        Frac::zero_n(self.ring.nvars())
    }

    fn parse_all(mut self) -> Result<UPoly<Frac>> {
        if let Some(e) = self.err.take() {
            return Err(e);
        }
        if self.toks.is_empty() {
            return self.fail("empty expression");
        }
        let p = self.expr()?;
        if self.pos < self.toks.len() {
            return self.fail("unexpected token");
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<UPoly<Frac>> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<UPoly<Frac>> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let col = self.col();
            let t = self.unary()?;
            if op == '*' {
                acc = acc.mul(&t);
            } else {
                let c = match t.degree() {
                    Some(0) if t.coeff(0).is_constant() => t.coeff(0),
                    _ => return Err(perr(self.ln, col, "division only by a nonzero constant")),
                };
                acc = acc.scale(&c.inv()?);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<UPoly<Frac>> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<UPoly<Frac>> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some((Tok::Num(n), _)) => {
                    let e: u32 = n.try_into().map_err(|_| perr(self.ln, self.col(), "exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.fail("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<UPoly<Frac>> {
        let z = self.zero();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return self.fail("unexpected end of expression");
        };
        match tok {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(UPoly::constant(Frac::from_poly(crate::exactalg::MPoly::constant(self.ring.nvars(), n))))
            }
            Tok::Ident(name) => {
                let p = if name == "X" {
                    UPoly::x(&z)
                } else if let Some(j) = self.ring.names().iter().position(|v| *v == name) {
                    UPoly::constant(Frac::var(self.ring.nvars(), j))
                } else if let Some((_, p)) = self.polys.iter().find(|(n, _)| *n == name) {
                    p.clone()
                } else {
                    return self.fail(format!("unknown name `{name}`"));
                };
                self.pos += 1;
                Ok(p)
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op(c) => self.fail(format!("unexpected `{c}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_fixture() {
        let fx = Fixture::parse("ring rank=1 vars=t weights=(1)\npoly F = X^2 + X - t\n").unwrap();
        assert_eq!(fx.show(fx.poly("F").unwrap()), "X^2 + X - t");
    }

    #[test]
    fn weight_errors_have_positions() {
        let e = Fixture::parse("ring rank=1 vars=t weights=(1,\n").unwrap_err();
        assert_eq!(e, VqError::Parse { line: 1, col: 31, msg: "expected an integer in weights".into() });
        let e = Fixture::parse("ring rank=2 vars=u,t weights=(0,-1);(0,1)\n").unwrap_err();
        assert!(matches!(e, VqError::Fixture(_)));
    }

    #[test]
    fn expression_errors() {
        let head = "ring rank=1 vars=t\n";
        let e = Fixture::parse(&format!("{head}poly F = X^2 + * t\n")).unwrap_err();
        assert_eq!(e, VqError::Parse { line: 2, col: 16, msg: "unexpected `*`".into() });
        let e = Fixture::parse(&format!("{head}poly F = X/t\n")).unwrap_err();
        assert!(matches!(e, VqError::Parse { line: 2, col: 12, .. }));
        let e = Fixture::parse(&format!("{head}poly F = X + s\n")).unwrap_err();
        assert!(matches!(e, VqError::Parse { line: 2, col: 14, .. }));
        let e = Fixture::parse(&format!("{head}bogus F = X\n")).unwrap_err();
        assert!(matches!(e, VqError::Parse { line: 2, col: 1, .. }));
    }

    #[test]
    fn factors_are_verified() {
        let head = "ring rank=1 vars=t\npoly F = X^3 + 2*X^2 + (1 - t)*X - t\n";
        let fx = Fixture::parse(&format!("{head}factors F = (X+1)(X^2+X-t)\n")).unwrap();
        assert_eq!(fx.factors[0].1.len(), 2);
        let e = Fixture::parse(&format!("{head}factors F = (X+1)(X^2+X+t)\n")).unwrap_err();
        assert!(matches!(e, VqError::FactorMismatch(_)));
    }

    #[test]
    fn rationals_and_round_trip() {
        let text = "ring rank=2 vars=u,t weights=(1,0);(0,1) # comment\n\
                    poly F = X^2 + X - (t + t^2 + u)\n\
                    poly g = 1/2*X - (t+1)/3 + u^2*t/4\n\
                    poly h = X - t\n\
                    expect extend h = (1,0)\n";
        let fx = Fixture::parse(text).unwrap();
        let once = fx.to_text();
        let again = Fixture::parse(&once).unwrap().to_text();
        assert_eq!(once, again);
        assert_eq!(fx.poly("g").unwrap(), Fixture::parse(&once).unwrap().poly("g").unwrap());
    }
}
