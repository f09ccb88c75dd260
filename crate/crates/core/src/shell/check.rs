//! Name resolution and typing of scripts, and expansion of `load`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::ast::*;
use super::parser::parse_syntax;
use super::{Diagnostic, DiagnosticKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Var { small: bool },
    Let { small: bool },
    Group,
    Imaginary,
}

fn name_err(pos: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Name, pos, msg)
}

fn type_err(pos: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Type, pos, msg)
}

/// Replaces a leading `load "FILE";` by the context and statements of the
/// saved session.
pub fn expand_loads(script: Script, dir: Option<&Path>) -> Result<Script, Diagnostic> {
    let mut out = Vec::new();
    for (i, stmt) in script.stmts.into_iter().enumerate() {
        let StmtKind::Load(file) = &stmt.kind else {
            out.push(stmt);
            continue;
        };
        if i != 0 {
            return Err(Diagnostic::new(
                DiagnosticKind::Syntax,
                stmt.pos,
                "`load` must be the first statement",
            ));
        }
        let path = match dir {
            Some(d) => d.join(file),
            None => file.into(),
        };
        let fail = |m: String| Diagnostic::new(DiagnosticKind::Syntax, stmt.pos, m);
        let text = std::fs::read_to_string(&path).map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
        let json: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| fail(format!("{} is not a session: {e}", path.display())))?;
        let ctx = &json["context"];
        let names = |key: &str| -> Vec<String> {
            ctx[key]
                .as_array()
                .map(|a| a.iter().filter_map(|v| v.as_str().map(String::from)).collect())
                .unwrap_or_default()
        };
        let at = |kind| Stmt { kind, pos: stmt.pos };
        if let Some(p) = ctx["char"].as_u64() {
            out.push(at(StmtKind::Char(p as u32)));
        }
        let (small, big) = (names("small"), names("big"));
        if !small.is_empty() {
            out.push(at(StmtKind::Small(small)));
        }
        if !big.is_empty() {
            out.push(at(StmtKind::Big(big)));
        }
        let session = json["session"]
            .as_str()
            .ok_or_else(|| fail(format!("{} has no saved session", path.display())))?;
        let saved = parse_syntax(session).map_err(|d| fail(format!("saved session: {d}")))?;
        out.extend(saved.stmts.into_iter().map(|s| at(s.kind)));
    }
    Ok(Script { stmts: out })
}

struct Checker {
    names: BTreeMap<String, Kind>,
}

impl Checker {
    fn define(&mut self, name: &str, kind: Kind, pos: Pos) -> Result<(), Diagnostic> {
        if self.names.contains_key(name) {
            return Err(name_err(pos, format!("`{name}` is already defined")));
        }
        self.names.insert(name.to_string(), kind);
        Ok(())
    }

    /// Returns whether the expression lies in the small field.
    fn expr(&self, e: &Expr, local: &BTreeSet<String>, pos: Pos) -> Result<bool, Diagnostic> {
        match e {
            Expr::Num(_) => Ok(true),
            Expr::Name(n) if local.contains(n) => Ok(true),
            Expr::Name(n) => match self.names.get(n) {
                None => Err(name_err(pos, format!("`{n}` is not defined"))),
                Some(Kind::Var { small } | Kind::Let { small }) => Ok(*small),
                Some(Kind::Group) => Err(type_err(pos, format!("`{n}` is a group, not a field element"))),
                Some(Kind::Imaginary) => Err(type_err(pos, format!("`{n}` is an imaginary, not a field element"))),
            },
            Expr::Neg(x) | Expr::Pow(x, _) => self.expr(x, local, pos),
            Expr::Bin(_, l, r) => Ok(self.expr(l, local, pos)? & self.expr(r, local, pos)?),
        }
    }

    fn exprs(&self, es: &[Expr], local: &BTreeSet<String>, pos: Pos) -> Result<bool, Diagnostic> {
        let mut small = true;
        for e in es {
            small &= self.expr(e, local, pos)?;
        }
        Ok(small)
    }

    fn small_exprs(&self, es: &[Expr], local: &BTreeSet<String>, pos: Pos, what: &str) -> Result<(), Diagnostic> {
        for e in es {
            if !self.expr(e, local, pos)? {
                return Err(type_err(pos, format!("{what} must lie in P, but `{e}` involves a big-field variable")));
            }
        }
        Ok(())
    }

    fn binders(&self, names: &[String], local: &mut BTreeSet<String>, pos: Pos) -> Result<(), Diagnostic> {
        for n in names {
            if self.names.contains_key(n) {
                return Err(name_err(pos, format!("placeholder `{n}` shadows a defined name")));
            }
            if !local.insert(n.clone()) {
                return Err(name_err(pos, format!("placeholder `{n}` is bound twice")));
            }
        }
        Ok(())
    }

    fn map(&self, m: &MapAst, pos: Pos, what: &str) -> Result<(), Diagnostic> {
        let mut local = BTreeSet::new();
        self.binders(&m.first, &mut local, pos)?;
        self.binders(&m.second, &mut local, pos)?;
        self.small_exprs(&m.body, &local, pos, what)
    }

    fn group(&self, g: &GroupExpr, pos: Pos) -> Result<(), Diagnostic> {
        match g {
            GroupExpr::Ga(_) | GroupExpr::Gm(_) => Ok(()),
            GroupExpr::Product(parts) => parts.iter().try_for_each(|p| self.group(p, pos)),
            GroupExpr::Lattice(p, _) => self.group(p, pos),
            GroupExpr::Linear(p, rows) => {
                self.group(p, pos)?;
                rows.iter()
                    .try_for_each(|r| self.small_exprs(r, &BTreeSet::new(), pos, "linear relations"))
            }
            GroupExpr::Explicit(e) => {
                let mut local = BTreeSet::new();
                self.binders(&e.x, &mut local, pos)?;
                self.binders(&e.y, &mut local, pos)?;
                for part in [&e.eq, &e.mul, &e.inv, &e.id] {
                    self.small_exprs(part, &local, pos, "group laws")?;
                }
                if let Some(p) = &e.param {
                    self.map(p, pos, "the parametrization")?;
                }
                Ok(())
            }
            GroupExpr::Name(n) => match self.names.get(n) {
                None => Err(name_err(pos, format!("`{n}` is not defined"))),
                Some(Kind::Group) => Ok(()),
                Some(_) => Err(type_err(pos, format!("`{n}` is not a group"))),
            },
        }
    }

    fn imaginary_ref(&self, n: &str, pos: Pos) -> Result<(), Diagnostic> {
        match self.names.get(n) {
            None => Err(name_err(pos, format!("`{n}` is not defined"))),
            Some(Kind::Imaginary) => Ok(()),
            Some(_) => Err(type_err(pos, format!("`{n}` is not an imaginary"))),
        }
    }

    fn imaginary(&self, e: &ImagExpr, pos: Pos) -> Result<(), Diagnostic> {
        let none = BTreeSet::new();
        match e {
            ImagExpr::CosetAdd(a, g) | ImagExpr::CosetMul(a, g) => {
                self.exprs(a, &none, pos)?;
                g.as_ref().map_or(Ok(()), |g| self.group(g, pos))
            }
            ImagExpr::Real(a) => self.exprs(a, &none, pos).map(|_| ()),
            ImagExpr::Torsor(t) => {
                self.group(&t.group, pos)?;
                if let ActionAst::Map(m) = &t.action {
                    self.map(m, pos, "the action")?;
                }
                if let Some(s) = &t.solver {
                    self.map(s, pos, "the solver")?;
                }
                self.exprs(&t.witness, &none, pos)?;
                self.small_exprs(&t.base, &none, pos, "base parameters")?;
                if let Some(f) = &t.fiber {
                    let mut local = BTreeSet::new();
                    self.binders(&f.first, &mut local, pos)?;
                    self.small_exprs(&f.body, &local, pos, "fiber equations")?;
                }
                Ok(())
            }
        }
    }

    fn query(&self, q: &Query, pos: Pos) -> Result<(), Diagnostic> {
        let none = BTreeSet::new();
        match q {
            Query::Rank(of, given) => of.iter().chain(given.iter()).try_for_each(|n| self.imaginary_ref(n, pos)),
            Query::Indep(a, b, c) => {
                self.imaginary_ref(a, pos)?;
                if let Some(b) = b {
                    self.imaginary_ref(b, pos)?;
                }
                self.imaginary_ref(c, pos)
            }
            Query::SuReal(a, c) => {
                self.exprs(a, &none, pos)?;
                self.exprs(c, &none, pos).map(|_| ())
            }
            Query::Isogenous(g, h) => {
                self.group(g, pos)?;
                self.group(h, pos)
            }
            Query::Homogeny(s, g, h) => {
                self.group(s, pos)?;
                self.group(g, pos)?;
                self.group(h, pos)
            }
            Query::Validate(e) => self.imaginary_ref(e, pos),
        }
    }
}

/// Checks that the context comes first, that names are defined before use
/// and never redefined, and that P-valued positions hold P-elements.
pub fn check(script: &Script) -> Result<(), Diagnostic> {
    let mut c = Checker { names: BTreeMap::new() };
    let mut in_context = true;
    let mut seen_ctx: BTreeSet<&'static str> = BTreeSet::new();
    for s in &script.stmts {
        let ctx_kind = match &s.kind {
            StmtKind::Char(_) => Some("char"),
            StmtKind::Small(_) => Some("small"),
            StmtKind::Big(_) => Some("big"),
            _ => None,
        };
        if let Some(k) = ctx_kind {
            if !in_context || !seen_ctx.insert(k) {
                return Err(Diagnostic::new(
                    DiagnosticKind::Syntax,
                    s.pos,
                    "the context (`char`, `small`, `big`) must be declared once, before anything else",
                ));
            }
        } else {
            in_context = false;
        }
        match &s.kind {
            StmtKind::Char(p) if *p != 0 => {
                return Err(type_err(s.pos, "only characteristic 0 is supported"));
            }
            StmtKind::Char(_) | StmtKind::Load(_) => {}
            StmtKind::Small(v) => {
                for n in v {
                    c.define(n, Kind::Var { small: true }, s.pos)?;
                }
            }
            StmtKind::Big(v) => {
                for n in v {
                    c.define(n, Kind::Var { small: false }, s.pos)?;
                }
            }
            StmtKind::Let(n, e) => {
                let small = c.expr(e, &BTreeSet::new(), s.pos)?;
                c.define(n, Kind::Let { small }, s.pos)?;
            }
            StmtKind::Group(n, g) => {
                c.group(g, s.pos)?;
                c.define(n, Kind::Group, s.pos)?;
            }
            StmtKind::Imaginary(n, e) => {
                c.imaginary(e, s.pos)?;
                c.define(n, Kind::Imaginary, s.pos)?;
            }
            StmtKind::Query(q) => c.query(q, s.pos)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> Result<(), Diagnostic> {
        check(&parse_syntax(src).unwrap())
    }

    #[test]
    fn undefined_and_redefined_names() {
        let e = run("small s1; big t1; imaginary e = coset_add(u);").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::Name);
        assert_eq!(e.code, "NameError");
        let e = run("small s1; big s1;").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::Name);
        assert!(run("small s1; big t1; imaginary e1 = coset_add(t1);").is_ok());
    }

    #[test]
    fn big_elements_are_rejected_where_p_is_required() {
        let e = run("small s1; big t1; let b = t1 + s1; imaginary e = torsor{group = Ga(1), witness = (t1), base = (b)};")
            .unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::Type);
        let e = run("small s1; big t1; group G = linear(Ga(2), [[t1, 1]]);").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::Type);
        let e = run("small s1; big t1; imaginary e = coset_add(t1); query rank s1;").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::Type);
    }

    #[test]
    fn context_comes_first() {
        let e = run("small s1; let a = s1; big t1;").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::Syntax);
        assert_eq!(e.line, 1);
        assert_eq!(e.col, 23);
    }
}
