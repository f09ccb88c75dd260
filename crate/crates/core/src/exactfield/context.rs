use std::collections::BTreeMap;

use super::field::{format_q, Field, Q};
use super::mono::Mono;
use super::poly::Poly;
use super::ratexpr::RatExpr;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarKind {
    /// Declared generator of the small field P.
    Small,
    /// Declared generator of the big field over P.
    Big,
    /// Engine-generated generic parameter living in P.
    Fresh,
    /// Placeholder bound inside a group law or action; always substituted away.
    Bound,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarInfo {
    pub name: String,
    pub kind: VarKind,
}

/// The ambient field pair in characteristic 0. Variable indices follow
/// declaration order (small variables first, then big ones), which seeds
/// the global grevlex term order; variables added later get higher indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TowerContext {
    vars: Vec<VarInfo>,
}

impl TowerContext {
    pub fn new<S: AsRef<str>>(small: &[S], big: &[S]) -> Result<TowerContext> {
        let mut ctx = TowerContext { vars: Vec::new() };
        for s in small {
            ctx.push(s.as_ref(), VarKind::Small)?;
        }
        for b in big {
            ctx.push(b.as_ref(), VarKind::Big)?;
        }
        Ok(ctx)
    }

    fn push(&mut self, name: &str, kind: VarKind) -> Result<usize> {
        if self.index(name).is_some() {
            return Err(Error::InvalidInput(format!("variable `{name}` declared twice")));
        }
        self.vars.push(VarInfo {
            name: name.to_string(),
            kind,
        });
        Ok(self.vars.len() - 1)
    }

    pub fn characteristic(&self) -> u32 {
        0
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn var(&self, name: &str) -> Result<RatExpr> {
        self.index(name)
            .map(RatExpr::var)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, index: usize) -> &str {
        &self.vars[index].name
    }

    pub fn kind(&self, index: usize) -> VarKind {
        self.vars[index].kind
    }

    pub fn vars(&self) -> &[VarInfo] {
        &self.vars
    }

    /// Small-field membership: declared small variables and fresh parameters.
    pub fn is_small(&self, index: usize) -> bool {
        matches!(self.vars[index].kind, VarKind::Small | VarKind::Fresh)
    }

    pub fn is_big(&self, index: usize) -> bool {
        self.vars[index].kind == VarKind::Big
    }

    pub fn small_vars(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_small(i)).collect()
    }

    pub fn declared(&self, kind: VarKind) -> Vec<&str> {
        self.vars
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.name.as_str())
            .collect()
    }

    /// Adds `count` fresh small-field parameters, returning their indices.
    pub fn with_fresh(&self, prefix: &str, count: usize) -> (TowerContext, Vec<usize>) {
        let mut ctx = self.clone();
        let mut out = Vec::with_capacity(count);
        let mut k = 0usize;
        while out.len() < count {
            let name = format!("{prefix}{k}");
            k += 1;
            if ctx.index(&name).is_some() {
                continue;
            }
            out.push(ctx.push(&name, VarKind::Fresh).expect("fresh name"));
        }
        (ctx, out)
    }

    pub fn with_bound(&self, names: &[String]) -> Result<(TowerContext, Vec<usize>)> {
        let mut ctx = self.clone();
        let mut out = Vec::new();
        for n in names {
            out.push(ctx.push(n, VarKind::Bound)?);
        }
        Ok((ctx, out))
    }

    /// Fails unless every variable of `e` is a small-field variable.
    pub fn require_small(&self, e: &RatExpr) -> Result<()> {
        for v in e.vars() {
            if !self.is_small(v) {
                return Err(Error::InvalidInput(format!(
                    "`{}` is not a small-field element",
                    self.display(e)
                )));
            }
        }
        Ok(())
    }

    pub fn require_unbound(&self, e: &RatExpr) -> Result<()> {
        for v in e.vars() {
            if self.kind(v) == VarKind::Bound {
                return Err(Error::InvalidInput(format!(
                    "placeholder `{}` escaped its scope",
                    self.name(v)
                )));
            }
        }
        Ok(())
    }

    pub fn display_poly(&self, p: &Poly<Q>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms().rev().enumerate() {
            let neg = c < &Q::from_int(0);
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.display_mono(m);
            if mono.is_empty() {
                out.push_str(&format_q(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", format_q(&abs), mono));
            }
        }
        out
    }

    fn display_mono(&self, m: &Mono) -> String {
        let parts: Vec<String> = m
            .vars()
            .map(|v| {
                let e = m.exp(v);
                let name = self.vars.get(v).map(|x| x.name.clone()).unwrap_or(format!("_v{v}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }

    pub fn display(&self, r: &RatExpr) -> String {
        let n = self.display_poly(r.numer());
        if r.denom().is_one() {
            return n;
        }
        let wrap = |s: String, p: &Poly<Q>| {
            if p.num_terms() > 1 || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        format!(
            "{}/{}",
            wrap(n, r.numer()),
            wrap(self.display_poly(r.denom()), r.denom())
        )
    }

    /// Parses an arithmetic expression over the context's variables.
    pub fn parse(&self, src: &str) -> Result<RatExpr> {
        let mut p = ExprParser {
            ctx: self,
            chars: src.chars().collect(),
            pos: 0,
            bindings: None,
        };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(Error::InvalidInput(format!("trailing input in `{src}`")));
        }
        Ok(e)
    }

    pub fn parse_with(&self, src: &str, bindings: &BTreeMap<String, RatExpr>) -> Result<RatExpr> {
        let mut p = ExprParser {
            ctx: self,
            chars: src.chars().collect(),
            pos: 0,
            bindings: Some(bindings),
        };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(Error::InvalidInput(format!("trailing input in `{src}`")));
        }
        Ok(e)
    }

    pub fn parse_tuple(&self, items: &[&str]) -> Result<Vec<RatExpr>> {
        items.iter().map(|s| self.parse(s)).collect()
    }
}

struct ExprParser<'a> {
    ctx: &'a TowerContext,
    chars: Vec<char>,
    pos: usize,
    bindings: Option<&'a BTreeMap<String, RatExpr>>,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::InvalidInput(format!("{msg} at offset {}", self.pos))
    }

    fn sum(&mut self) -> Result<RatExpr> {
        let mut acc = self.product()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<RatExpr> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                '/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatExpr> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = if self.peek() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e = if neg { -e } else { e };
            if e < 0 && base.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<RatExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let n: num_bigint::BigInt = s.parse().map_err(|_| self.err("bad number"))?;
                Ok(RatExpr::constant(Q::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if let Some(b) = self.bindings.and_then(|b| b.get(&name)) {
                    return Ok(b.clone());
                }
                self.ctx.var(&name)
            }
            _ => Err(self.err("expected expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_must_be_unique() {
        assert!(TowerContext::new(&["s1"], &["s1"]).is_err());
    }

    #[test]
    fn parse_and_display() {
        let ctx = TowerContext::new(&["s1"], &["t1", "t2"]).unwrap();
        let e = ctx.parse("(t1^2 - 1)/(t1 - 1)").unwrap();
        assert_eq!(ctx.display(&e), "t1 + 1");
        let f = ctx.parse("1/t1").unwrap();
        assert_eq!(ctx.display(&f), "1/t1");
        assert!(ctx.parse("u").is_err());
    }

    #[test]
    fn fresh_variables_are_small() {
        let ctx = TowerContext::new(&["s1"], &["t1"]).unwrap();
        let (ext, ids) = ctx.with_fresh("_g", 2);
        assert_eq!(ids, vec![2, 3]);
        assert!(ext.is_small(2) && ext.is_small(3));
        assert!(!ext.is_small(1));
    }
}
