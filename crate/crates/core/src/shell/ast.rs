//! Syntax tree of scripts and its canonical printer.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Variables bound in a rational map: `(g1, g2; x1, x2) -> (...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapAst {
    pub first: Vec<String>,
    pub second: Vec<String>,
    pub body: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitAst {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub eq: Vec<Expr>,
    pub mul: Vec<Expr>,
    pub inv: Vec<Expr>,
    pub id: Vec<Expr>,
    /// `(u) -> (coords)`; `second` is unused.
    pub param: Option<MapAst>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Ga(usize),
    Gm(usize),
    Product(Vec<GroupExpr>),
    Lattice(Box<GroupExpr>, Vec<Vec<i64>>),
    Linear(Box<GroupExpr>, Vec<Vec<Expr>>),
    Explicit(Box<ExplicitAst>),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionAst {
    Coordinatewise,
    Map(MapAst),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorAst {
    pub group: GroupExpr,
    pub action: ActionAst,
    pub solver: Option<MapAst>,
    pub witness: Vec<Expr>,
    pub base: Vec<Expr>,
    /// `(x1, ..., xn) -> [equations]`; `second` is unused.
    pub fiber: Option<MapAst>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImagExpr {
    CosetAdd(Vec<Expr>, Option<GroupExpr>),
    CosetMul(Vec<Expr>, Option<GroupExpr>),
    Real(Vec<Expr>),
    Torsor(Box<TorsorAst>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    /// `rank e, f | g, h`: the rank of `ef` over `gh`.
    Rank(Vec<String>, Vec<String>),
    /// `indep e1 | e2 | e3`; the middle may be absent.
    Indep(String, Option<String>, String),
    SuReal(Vec<Expr>, Vec<Expr>),
    Isogenous(GroupExpr, GroupExpr),
    Homogeny(GroupExpr, GroupExpr, GroupExpr),
    Validate(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Char(u32),
    Small(Vec<String>),
    Big(Vec<String>),
    Load(String),
    Let(String, Expr),
    Group(String, GroupExpr),
    Imaginary(String, ImagExpr),
    Query(Query),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

impl Script {
    /// Structural equality ignoring source positions.
    pub fn same_shape(&self, other: &Script) -> bool {
        self.stmts.len() == other.stmts.len()
            && self.stmts.iter().zip(other.stmts.iter()).all(|(a, b)| a.kind == b.kind)
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(_) | Expr::Name(_) => 5,
    }
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let paren = prec(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Num(n) => {
            let _ = write!(out, "{n}");
        }
        Expr::Name(n) => out.push_str(n),
        Expr::Neg(x) => {
            out.push('-');
            write_expr(out, x, 3);
        }
        Expr::Bin(op, l, r) => {
            let p = prec(e);
            write_expr(out, l, p);
            out.push_str(match op {
                BinOp::Add => " + ",
                BinOp::Sub => " - ",
                BinOp::Mul => "*",
                BinOp::Div => "/",
            });
            write_expr(out, r, p + 1);
        }
        Expr::Pow(b, k) => {
            write_expr(out, b, 5);
            if *k < 0 {
                let _ = write!(out, "^({k})");
            } else {
                let _ = write!(out, "^{k}");
            }
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, 0);
        f.write_str(&s)
    }
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

fn tuple(items: &[Expr]) -> String {
    format!("({})", list(items))
}

impl fmt::Display for MapAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.second.is_empty() {
            write!(f, "({}) -> ", self.first.join(", "))?;
        } else {
            write!(f, "({}; {}) -> ", self.first.join(", "), self.second.join(", "))?;
        }
        write!(f, "{}", tuple(&self.body))
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Ga(n) => write!(f, "Ga({n})"),
            GroupExpr::Gm(n) => write!(f, "Gm({n})"),
            GroupExpr::Product(parts) => write!(f, "product({})", list(parts)),
            GroupExpr::Lattice(g, rows) => {
                let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", list(r))).collect();
                write!(f, "lattice({g}, [{}])", rows.join(", "))
            }
            GroupExpr::Linear(g, rows) => {
                let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", list(r))).collect();
                write!(f, "linear({g}, [{}])", rows.join(", "))
            }
            GroupExpr::Explicit(e) => {
                write!(
                    f,
                    "explicit{{x = ({}), y = ({}), eq = [{}], mul = {}, inv = {}, id = {}",
                    e.x.join(", "),
                    e.y.join(", "),
                    list(&e.eq),
                    tuple(&e.mul),
                    tuple(&e.inv),
                    tuple(&e.id)
                )?;
                if let Some(p) = &e.param {
                    write!(f, ", param = {p}")?;
                }
                write!(f, "}}")
            }
            GroupExpr::Name(n) => f.write_str(n),
        }
    }
}

impl fmt::Display for ImagExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coset = |f: &mut fmt::Formatter<'_>, name: &str, a: &[Expr], g: &Option<GroupExpr>| match g {
            None => write!(f, "{name}({})", list(a)),
            Some(g) => write!(f, "{name}({} in {g})", list(a)),
        };
        match self {
            ImagExpr::CosetAdd(a, g) => coset(f, "coset_add", a, g),
            ImagExpr::CosetMul(a, g) => coset(f, "coset_mul", a, g),
            ImagExpr::Real(a) => write!(f, "real({})", list(a)),
            ImagExpr::Torsor(t) => {
                write!(f, "torsor{{group = {}, action = ", t.group)?;
                match &t.action {
                    ActionAst::Coordinatewise => write!(f, "coordinatewise")?,
                    ActionAst::Map(m) => write!(f, "{m}")?,
                }
                if let Some(s) = &t.solver {
                    write!(f, ", solver = {s}")?;
                }
                write!(f, ", witness = {}, base = {}", tuple(&t.witness), tuple(&t.base))?;
                if let Some(fib) = &t.fiber {
                    write!(f, ", fiber = ({}) -> [{}]", fib.first.join(", "), list(&fib.body))?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Rank(of, given) if given.is_empty() => write!(f, "rank {}", of.join(", ")),
            Query::Rank(of, given) => write!(f, "rank {} | {}", of.join(", "), given.join(", ")),
            Query::Indep(a, None, c) => write!(f, "indep {a} | {c}"),
            Query::Indep(a, Some(b), c) => write!(f, "indep {a} | {b} | {c}"),
            Query::SuReal(a, c) if c.is_empty() => write!(f, "su_real {}", tuple(a)),
            Query::SuReal(a, c) => write!(f, "su_real {} | {}", tuple(a), tuple(c)),
            Query::Isogenous(g, h) => write!(f, "isogenous({g}, {h})"),
            Query::Homogeny(s, g, h) => write!(f, "homogeny({s}, {g}, {h})"),
            Query::Validate(e) => write!(f, "validate {e}"),
        }
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Char(p) => write!(f, "char {p};"),
            StmtKind::Small(v) => write!(f, "small {};", v.join(", ")),
            StmtKind::Big(v) => write!(f, "big {};", v.join(", ")),
            StmtKind::Load(p) => write!(f, "load {};", serde_json::to_string(p).map_err(|_| fmt::Error)?),
            StmtKind::Let(n, e) => write!(f, "let {n} = {e};"),
            StmtKind::Group(n, g) => write!(f, "group {n} = {g};"),
            StmtKind::Imaginary(n, e) => write!(f, "imaginary {n} = {e};"),
            StmtKind::Query(q) => write!(f, "query {q};"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}
