//! Lexer and recursive-descent parser for scripts.

use num_bigint::BigInt;

use super::ast::*;
use super::{Diagnostic, DiagnosticKind};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Punct(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
}

const PUNCT: [&str; 16] = ["->", ";", ",", "(", ")", "[", "]", "{", "}", "=", "+", "-", "*", "/", "^", "|"];

fn syntax(pos: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Syntax, pos, msg)
}

fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(digits.parse().expect("digits")),
                pos,
            });
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(syntax(pos, "unterminated string")),
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some('\\') if matches!(chars.get(i + 1), Some('"') | Some('\\')) => {
                        s.push(chars[i + 1]);
                        i += 2;
                        col += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), pos });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(*p)) {
            Some(p) => {
                i += p.len();
                col += p.len();
                out.push(Token { tok: Tok::Punct(p), pos });
            }
            None => return Err(syntax(pos, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

type P<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> P<()> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{p}`, found {}", self.describe())))
        }
    }

    fn ident(&mut self) -> P<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(syntax(self.pos(), format!("expected a name, found {}", self.describe()))),
        }
    }

    fn int(&mut self) -> P<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(syntax(self.pos(), format!("expected an integer, found {}", self.describe()))),
        }
    }

    fn small_int(&mut self) -> P<i64> {
        let pos = self.pos();
        let neg = self.eat("-");
        let n = self.int()?;
        let n: i64 = i64::try_from(&n).map_err(|_| syntax(pos, "integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn usize(&mut self) -> P<usize> {
        let pos = self.pos();
        let n = self.int()?;
        usize::try_from(&n).map_err(|_| syntax(pos, "integer out of range"))
    }

    fn names(&mut self) -> P<Vec<String>> {
        let mut v = vec![self.ident()?];
        while self.eat(",") {
            v.push(self.ident()?);
        }
        Ok(v)
    }

    fn script(&mut self) -> P<Script> {
        let mut stmts = Vec::new();
        while *self.peek() != Tok::Eof {
            stmts.push(self.stmt()?);
        }
        Ok(Script { stmts })
    }

    fn stmt(&mut self) -> P<Stmt> {
        let pos = self.pos();
        let word = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(syntax(pos, format!("expected a statement, found {}", self.describe()))),
        };
        self.bump();
        let kind = match word.as_str() {
            "char" => {
                let p = self.int()?;
                StmtKind::Char(u32::try_from(&p).map_err(|_| syntax(pos, "characteristic out of range"))?)
            }
            "small" => StmtKind::Small(self.names()?),
            "big" => StmtKind::Big(self.names()?),
            "load" => match self.peek().clone() {
                Tok::Str(s) => {
                    self.bump();
                    StmtKind::Load(s)
                }
                _ => return Err(syntax(self.pos(), "expected a file name in quotes")),
            },
            "let" => {
                let n = self.ident()?;
                self.expect("=")?;
                StmtKind::Let(n, self.expr()?)
            }
            "group" => {
                let n = self.ident()?;
                self.expect("=")?;
                StmtKind::Group(n, self.group()?)
            }
            "imaginary" => {
                let n = self.ident()?;
                self.expect("=")?;
                StmtKind::Imaginary(n, self.imaginary()?)
            }
            "query" => StmtKind::Query(self.query()?),
            other => return Err(syntax(pos, format!("unknown statement `{other}`"))),
        };
        self.expect(";")?;
        Ok(Stmt { kind, pos })
    }

    fn expr(&mut self) -> P<Expr> {
        let mut e = self.term()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(e);
            };
            e = Expr::Bin(op, Box::new(e), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> P<Expr> {
        let mut e = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinOp::Mul
            } else if self.eat("/") {
                BinOp::Div
            } else {
                return Ok(e);
            };
            e = Expr::Bin(op, Box::new(e), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> P<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat("^") {
            let k = if self.eat("(") {
                let k = self.small_int()?;
                self.expect(")")?;
                k
            } else {
                self.small_int()?
            };
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> P<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Name(s))
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => Err(syntax(self.pos(), format!("expected an expression, found {}", self.describe()))),
        }
    }

    /// `(e, ...)`, possibly empty.
    fn tuple(&mut self) -> P<Vec<Expr>> {
        self.expect("(")?;
        self.expr_list(")")
    }

    fn expr_list(&mut self, close: &str) -> P<Vec<Expr>> {
        let mut v = Vec::new();
        if self.eat(close) {
            return Ok(v);
        }
        loop {
            v.push(self.expr()?);
            if self.eat(close) {
                return Ok(v);
            }
            self.expect(",")?;
        }
    }

    fn binders(&mut self) -> P<Vec<String>> {
        self.expect("(")?;
        if self.eat(")") {
            return Ok(Vec::new());
        }
        let v = self.names()?;
        self.expect(")")?;
        Ok(v)
    }

    /// `(a, b; c, d) -> (exprs)` or `(a, b) -> (exprs)`.
    fn map(&mut self) -> P<MapAst> {
        self.expect("(")?;
        let first = if self.is(";") || self.is(")") { Vec::new() } else { self.names()? };
        let second = if self.eat(";") { self.names()? } else { Vec::new() };
        self.expect(")")?;
        self.expect("->")?;
        let body = self.tuple()?;
        Ok(MapAst { first, second, body })
    }

    fn group(&mut self) -> P<GroupExpr> {
        let pos = self.pos();
        let name = self.ident()?;
        match name.as_str() {
            "Ga" | "Gm" => {
                self.expect("(")?;
                let n = self.usize()?;
                self.expect(")")?;
                Ok(if name == "Ga" { GroupExpr::Ga(n) } else { GroupExpr::Gm(n) })
            }
            "product" => {
                self.expect("(")?;
                let mut parts = vec![self.group()?];
                while self.eat(",") {
                    parts.push(self.group()?);
                }
                self.expect(")")?;
                Ok(GroupExpr::Product(parts))
            }
            "lattice" | "linear" => {
                self.expect("(")?;
                let parent = Box::new(self.group()?);
                self.expect(",")?;
                self.expect("[")?;
                let mut int_rows = Vec::new();
                let mut expr_rows = Vec::new();
                if !self.eat("]") {
                    loop {
                        self.expect("[")?;
                        if name == "lattice" {
                            let mut row = Vec::new();
                            if !self.eat("]") {
                                loop {
                                    row.push(self.small_int()?);
                                    if self.eat("]") {
                                        break;
                                    }
                                    self.expect(",")?;
                                }
                            }
                            int_rows.push(row);
                        } else {
                            expr_rows.push(self.expr_list("]")?);
                        }
                        if self.eat("]") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                self.expect(")")?;
                Ok(if name == "lattice" {
                    GroupExpr::Lattice(parent, int_rows)
                } else {
                    GroupExpr::Linear(parent, expr_rows)
                })
            }
            "explicit" => self.explicit(pos),
            _ if self.is("(") => Err(syntax(pos, format!("unknown group constructor `{name}`"))),
            _ => Ok(GroupExpr::Name(name)),
        }
    }

    fn explicit(&mut self, pos: Pos) -> P<GroupExpr> {
        self.expect("{")?;
        let mut g = ExplicitAst {
            x: Vec::new(),
            y: Vec::new(),
            eq: Vec::new(),
            mul: Vec::new(),
            inv: Vec::new(),
            id: Vec::new(),
            param: None,
        };
        let mut seen = Vec::new();
        loop {
            let fpos = self.pos();
            let field = self.ident()?;
            if seen.contains(&field) {
                return Err(syntax(fpos, format!("field `{field}` given twice")));
            }
            self.expect("=")?;
            match field.as_str() {
                "x" => g.x = self.binders()?,
                "y" => g.y = self.binders()?,
                "eq" => {
                    self.expect("[")?;
                    g.eq = self.expr_list("]")?;
                }
                "mul" => g.mul = self.tuple()?,
                "inv" => g.inv = self.tuple()?,
                "id" => g.id = self.tuple()?,
                "param" => g.param = Some(self.map()?),
                other => return Err(syntax(fpos, format!("unknown field `{other}` of explicit"))),
            }
            seen.push(field);
            if self.eat("}") {
                break;
            }
            self.expect(",")?;
        }
        for required in ["x", "y", "mul", "inv", "id"] {
            if !seen.iter().any(|s| s == required) {
                return Err(syntax(pos, format!("explicit group is missing `{required}`")));
            }
        }
        Ok(GroupExpr::Explicit(Box::new(g)))
    }

    fn imaginary(&mut self) -> P<ImagExpr> {
        let pos = self.pos();
        let name = self.ident()?;
        match name.as_str() {
            "coset_add" | "coset_mul" => {
                self.expect("(")?;
                let mut a = vec![self.expr()?];
                while self.eat(",") {
                    a.push(self.expr()?);
                }
                let g = if self.is_word("in") {
                    self.bump();
                    Some(self.group()?)
                } else {
                    None
                };
                self.expect(")")?;
                Ok(if name == "coset_add" {
                    ImagExpr::CosetAdd(a, g)
                } else {
                    ImagExpr::CosetMul(a, g)
                })
            }
            "real" => Ok(ImagExpr::Real(self.tuple()?)),
            "torsor" => self.torsor(pos),
            other => Err(syntax(pos, format!("unknown imaginary constructor `{other}`"))),
        }
    }

    fn torsor(&mut self, pos: Pos) -> P<ImagExpr> {
        self.expect("{")?;
        let (mut group, mut action, mut solver, mut witness, mut base, mut fiber) =
            (None, ActionAst::Coordinatewise, None, None, Vec::new(), None);
        let mut seen: Vec<String> = Vec::new();
        loop {
            let fpos = self.pos();
            let field = self.ident()?;
            if seen.contains(&field) {
                return Err(syntax(fpos, format!("field `{field}` given twice")));
            }
            self.expect("=")?;
            match field.as_str() {
                "group" => group = Some(self.group()?),
                "action" => {
                    action = if self.is_word("coordinatewise") {
                        self.bump();
                        ActionAst::Coordinatewise
                    } else {
                        ActionAst::Map(self.map()?)
                    }
                }
                "solver" => solver = Some(self.map()?),
                "witness" => witness = Some(self.tuple()?),
                "base" => base = self.tuple()?,
                "fiber" => {
                    let first = self.binders()?;
                    self.expect("->")?;
                    self.expect("[")?;
                    let body = self.expr_list("]")?;
                    fiber = Some(MapAst {
                        first,
                        second: Vec::new(),
                        body,
                    });
                }
                other => return Err(syntax(fpos, format!("unknown field `{other}` of torsor"))),
            }
            seen.push(field);
            if self.eat("}") {
                break;
            }
            self.expect(",")?;
        }
        let group = group.ok_or_else(|| syntax(pos, "torsor is missing `group`"))?;
        let witness = witness.ok_or_else(|| syntax(pos, "torsor is missing `witness`"))?;
        Ok(ImagExpr::Torsor(Box::new(TorsorAst {
            group,
            action,
            solver,
            witness,
            base,
            fiber,
        })))
    }

    fn query(&mut self) -> P<Query> {
        let pos = self.pos();
        let word = self.ident()?;
        match word.as_str() {
            "rank" => {
                let of = self.names()?;
                let given = if self.eat("|") { self.names()? } else { Vec::new() };
                Ok(Query::Rank(of, given))
            }
            "indep" => {
                let a = self.ident()?;
                self.expect("|")?;
                let b = self.ident()?;
                if self.eat("|") {
                    let c = self.ident()?;
                    Ok(Query::Indep(a, Some(b), c))
                } else {
                    Ok(Query::Indep(a, None, b))
                }
            }
            "su_real" => {
                let a = self.tuple()?;
                let c = if self.eat("|") { self.tuple()? } else { Vec::new() };
                Ok(Query::SuReal(a, c))
            }
            "isogenous" => {
                self.expect("(")?;
                let g = self.group()?;
                self.expect(",")?;
                let h = self.group()?;
                self.expect(")")?;
                Ok(Query::Isogenous(g, h))
            }
            "homogeny" => {
                self.expect("(")?;
                let s = self.group()?;
                self.expect(",")?;
                let g = self.group()?;
                self.expect(",")?;
                let h = self.group()?;
                self.expect(")")?;
                Ok(Query::Homogeny(s, g, h))
            }
            "validate" => Ok(Query::Validate(self.ident()?)),
            other => Err(syntax(pos, format!("unknown query `{other}`"))),
        }
    }
}

/// Parses a script without resolving names.
pub fn parse_syntax(src: &str) -> Result<Script, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    p.script()
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.pos(), format!("unexpected {}", p.describe())));
    }
    Ok(e)
}
