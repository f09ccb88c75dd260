//! Evaluation of checked scripts into reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use super::ast::*;
use super::parser::parse_expr;
use super::{Diagnostic, REPORT_VERSION};
use crate::error::{Error, Result};
use crate::exactfield::{Field, Mono, Poly, RatExpr, TowerContext, Q};
use crate::forking::{joint_rank, star_conditions, su_real, theoremB_check};
use crate::galgebra::{
    homogeny_check, isogenous_catalog, CatalogGroup, ExplicitGroup, GroupPresentation, Homogeny,
    Parametrization, SplitGroup,
};
use crate::imaginaries::{
    as_imaginary, combine_pair, combine_triple, grank, pillay_form, validate_pillay, Action, CatalogTorsor,
    GeomRank, PillayImaginary, RationalMap2,
};
use crate::tdeg::groebner::{groebner, Budget, TermOrder};
use crate::tdeg::{lift_coefficients, FieldDesc, LocusIdeal, Oracle, TdEngine, DEFAULT_STEP_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub oracle: Oracle,
    pub seed: u64,
    pub budget: usize,
    /// Leaves timings out of the report.
    pub stable: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            oracle: Oracle::Jacobian,
            seed: TdEngine::default().seed,
            budget: DEFAULT_STEP_BUDGET,
            stable: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub text: Vec<String>,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("report serializes")
    }
}

enum Binding {
    Var(usize),
    Let(RatExpr),
    Group(GroupPresentation),
    Imaginary(PillayImaginary),
}

struct Env {
    ctx: TowerContext,
    names: BTreeMap<String, Binding>,
    engine: TdEngine,
    session: Vec<String>,
    placeholders: usize,
}

type Scope = BTreeMap<String, RatExpr>;

pub fn rank_json(r: GeomRank) -> Value {
    json!({"omega": r.omega, "finite": r.finite, "display": r.to_string()})
}

fn int_expr(n: &num_bigint::BigInt) -> RatExpr {
    RatExpr::constant(Q::from_integer(n.clone()))
}

impl Env {
    fn expr(&self, e: &Expr, scope: &Scope) -> Result<RatExpr> {
        Ok(match e {
            Expr::Num(n) => int_expr(n),
            Expr::Name(n) => match (scope.get(n), self.names.get(n)) {
                (Some(v), _) => v.clone(),
                (None, Some(Binding::Var(i))) => RatExpr::var(*i),
                (None, Some(Binding::Let(v))) => v.clone(),
                _ => return Err(Error::UnknownVariable(n.clone())),
            },
            Expr::Neg(x) => self.expr(x, scope)?.neg(),
            Expr::Bin(op, l, r) => {
                let (l, r) = (self.expr(l, scope)?, self.expr(r, scope)?);
                match op {
                    BinOp::Add => l.add(&r),
                    BinOp::Sub => l.sub(&r),
                    BinOp::Mul => l.mul(&r),
                    BinOp::Div => l.checked_div(&r)?,
                }
            }
            Expr::Pow(b, k) => {
                let b = self.expr(b, scope)?;
                if *k < 0 && b.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                b.pow(*k)
            }
        })
    }

    fn exprs(&self, es: &[Expr], scope: &Scope) -> Result<Vec<RatExpr>> {
        es.iter().map(|e| self.expr(e, scope)).collect()
    }

    /// Fresh placeholder variables standing for the given local names.
    fn bind(&mut self, names: &[String], scope: &mut Scope) -> Result<Vec<usize>> {
        self.placeholders += 1;
        let mangled: Vec<String> = names.iter().map(|n| format!("{n}__{}", self.placeholders)).collect();
        let (ctx, idx) = self.ctx.with_bound(&mangled)?;
        self.ctx = ctx;
        for (n, &i) in names.iter().zip(idx.iter()) {
            scope.insert(n.clone(), RatExpr::var(i));
        }
        Ok(idx)
    }

    fn map(&mut self, m: &MapAst) -> Result<RationalMap2> {
        let mut scope = Scope::new();
        let first = self.bind(&m.first, &mut scope)?;
        let second = self.bind(&m.second, &mut scope)?;
        Ok(RationalMap2 {
            first,
            second,
            map: self.exprs(&m.body, &scope)?,
        })
    }

    fn catalog(&mut self, g: &GroupExpr) -> Result<CatalogGroup> {
        match self.group(g)? {
            GroupPresentation::Catalog(c) => Ok(c),
            GroupPresentation::Explicit(_) => Err(Error::UnsupportedClass(
                "explicit groups cannot be combined with catalog constructors".into(),
            )),
        }
    }

    fn group(&mut self, g: &GroupExpr) -> Result<GroupPresentation> {
        Ok(GroupPresentation::Catalog(match g {
            GroupExpr::Ga(n) => CatalogGroup::Vector(*n),
            GroupExpr::Gm(n) => CatalogGroup::Torus(*n),
            GroupExpr::Product(parts) => {
                CatalogGroup::Product(parts.iter().map(|p| self.catalog(p)).collect::<Result<_>>()?)
            }
            GroupExpr::Lattice(p, rows) => CatalogGroup::Lattice {
                parent: Box::new(self.catalog(p)?),
                relations: crate::linalg::int_matrix(rows),
            },
            GroupExpr::Linear(p, rows) => CatalogGroup::Linear {
                parent: Box::new(self.catalog(p)?),
                relations: rows.iter().map(|r| self.exprs(r, &Scope::new())).collect::<Result<_>>()?,
            },
            GroupExpr::Name(n) => match self.names.get(n) {
                Some(Binding::Group(g)) => return Ok(g.clone()),
                _ => return Err(Error::InvalidInput(format!("`{n}` is not a group"))),
            },
            GroupExpr::Explicit(e) => {
                let mut scope = Scope::new();
                let x = self.bind(&e.x, &mut scope)?;
                let y = self.bind(&e.y, &mut scope)?;
                let parametrization = match &e.param {
                    Some(p) => {
                        let m = self.map(p)?;
                        Some(Parametrization {
                            params: m.first,
                            coords: m.map,
                        })
                    }
                    None => None,
                };
                let group = ExplicitGroup {
                    x,
                    y,
                    equations: self.exprs(&e.eq, &scope)?,
                    mul: self.exprs(&e.mul, &scope)?,
                    inv: self.exprs(&e.inv, &scope)?,
                    identity: self.exprs(&e.id, &scope)?,
                    parametrization,
                };
                return Ok(GroupPresentation::Explicit(Box::new(ExplicitGroup::new(&self.ctx, group)?)));
            }
        }))
    }

    fn fiber(&mut self, f: &MapAst, budget: usize) -> Result<LocusIdeal> {
        let mut scope = Scope::new();
        let idx = self.bind(&f.first, &mut scope)?;
        let mut map = vec![usize::MAX; self.ctx.len()];
        for (k, &v) in idx.iter().enumerate() {
            map[v] = k;
        }
        let gens: Vec<Poly<RatExpr>> = self
            .exprs(&f.body, &scope)?
            .iter()
            .map(|e| lift_coefficients(e.numer(), &|v| !idx.contains(&v), &map))
            .filter(|p| !p.is_zero())
            .collect();
        let gb = groebner(&gens, TermOrder::Grevlex, &mut Budget::new(budget))?;
        Ok(LocusIdeal {
            generators: gb.iter().map(|g| g.to_poly()).collect(),
            arity: idx.len(),
            order_tag: "grevlex",
        })
    }

    /// Returns the imaginary and a description of the chosen representative.
    fn imaginary(&mut self, e: &ImagExpr) -> Result<(PillayImaginary, Value)> {
        let ctx = self.ctx.clone();
        let show = |xs: &[RatExpr]| -> Vec<String> { xs.iter().map(|x| ctx.display(x)).collect() };
        match e {
            ImagExpr::CosetAdd(a, g) | ImagExpr::CosetMul(a, g) => {
                let a = self.exprs(a, &Scope::new())?;
                let group = match (g, e) {
                    (Some(g), _) => self.group(g)?.split()?,
                    (None, ImagExpr::CosetAdd(..)) => SplitGroup::vector(a.len()),
                    (None, _) => SplitGroup::torus(a.len()),
                };
                let declared = CatalogTorsor::new(&self.ctx, group, a)?;
                let form = pillay_form(&self.ctx, &declared, &self.engine)?;
                let im = PillayImaginary::from_form(&form);
                let info = json!({
                    "declared_group": declared.group.describe(&self.ctx),
                    "declared_witness": show(&declared.witness),
                    "shift": show(&form.shift),
                });
                Ok((im, info))
            }
            ImagExpr::Real(a) => {
                let a = self.exprs(a, &Scope::new())?;
                Ok((as_imaginary(&self.ctx, &a, &self.engine)?, json!({})))
            }
            ImagExpr::Torsor(t) => {
                let group = self.group(&t.group)?;
                let action = match &t.action {
                    ActionAst::Coordinatewise => Action::Coordinatewise,
                    ActionAst::Map(m) => Action::Explicit {
                        mu: self.map(m)?,
                        solver: t.solver.as_ref().map(|s| self.map(s)).transpose()?,
                    },
                };
                let fiber = t.fiber.as_ref().map(|f| self.fiber(f, self.engine.step_budget)).transpose()?;
                let im = PillayImaginary {
                    base: self.exprs(&t.base, &Scope::new())?,
                    fiber,
                    group,
                    action,
                    witness: self.exprs(&t.witness, &Scope::new())?,
                };
                Ok((im, json!({})))
            }
        }
    }

    fn imaginary_ref(&self, n: &str) -> Result<&PillayImaginary> {
        match self.names.get(n) {
            Some(Binding::Imaginary(e)) => Ok(e),
            _ => Err(Error::InvalidInput(format!("`{n}` is not an imaginary"))),
        }
    }

    fn show(&self, xs: &[RatExpr]) -> Vec<String> {
        xs.iter().map(|x| self.ctx.display(x)).collect()
    }

    /// Rank of a tuple of imaginaries, through the combination lemmas when
    /// they apply and the product torsor otherwise.
    fn joint(&self, items: &[&PillayImaginary]) -> Result<(GeomRank, Value)> {
        let ctx = &self.ctx;
        let e = &self.engine;
        let direct = || -> Result<(GeomRank, Value)> {
            Ok((joint_rank(ctx, items, e)?, json!({"route": "direct"})))
        };
        let fallback = |r: Result<(GeomRank, Value)>| match r {
            Err(Error::UnsupportedClass(_)) => direct(),
            other => other,
        };
        match items.len() {
            0 => Ok((GeomRank::ZERO, json!({"route": "empty"}))),
            1 => Ok((grank(ctx, items[0], e)?, json!({"route": "single"}))),
            2 => fallback((|| {
                let p = combine_pair(ctx, items[0], items[1], e)?;
                Ok((
                    p.rank,
                    json!({
                        "route": "pair",
                        "group": p.group.describe(ctx),
                        "witness": self.show(&p.witness),
                        "base": self.show(&p.base),
                    }),
                ))
            })()),
            3 => fallback((|| {
                let p = combine_pair(ctx, items[0], items[1], e)?;
                let q = combine_pair(ctx, items[1], items[2], e)?;
                let t = combine_triple(ctx, &p, &q, e)?;
                let conn = t.connector.as_ref().expect("triples carry a connector");
                Ok((
                    t.rank,
                    json!({
                        "route": "triple",
                        "rank_from": t.route,
                        "group": t.group.describe(ctx),
                        "witness": self.show(&t.witness),
                        "base": self.show(&t.base),
                        "g0": self.show(&conn.g0),
                        "dims": t.dims,
                    }),
                ))
            })()),
            _ => direct(),
        }
    }

    fn query(&mut self, q: &Query) -> Result<(Value, String)> {
        let ctx = self.ctx.clone();
        let e = self.engine;
        match q {
            Query::Rank(of, given) => {
                let mut all: Vec<&PillayImaginary> = Vec::new();
                for n in of.iter().chain(given.iter()) {
                    all.push(self.imaginary_ref(n)?);
                }
                let (joint, detail) = self.joint(&all)?;
                if given.is_empty() {
                    return Ok((json!({"rank": rank_json(joint), "joint": detail}), joint.to_string()));
                }
                let (base, base_detail) = self.joint(&all[of.len()..])?;
                let rel = joint.checked_relative(base, &q.to_string())?;
                Ok((
                    json!({
                        "rank": rank_json(rel),
                        "joint_rank": rank_json(joint),
                        "given_rank": rank_json(base),
                        "joint": detail,
                        "given": base_detail,
                    }),
                    rel.to_string(),
                ))
            }
            Query::Indep(a, b, c) => {
                let empty = crate::forking::fuzz::empty_imaginary();
                let e1 = self.imaginary_ref(a)?;
                let e2 = match b {
                    Some(b) => self.imaginary_ref(b)?,
                    None => &empty,
                };
                let e3 = self.imaginary_ref(c)?;
                let star = star_conditions(&ctx, e1, e2, e3, &e)?;
                let check = theoremB_check(&ctx, e1, e2, e3, &e)?;
                let text = format!(
                    "{} (a: {}, b: {}, c: {}; drop {})",
                    star.independent(),
                    star.cond_a,
                    star.cond_b,
                    star.cond_c,
                    check.drop
                );
                Ok((
                    json!({
                        "independent": star.independent(),
                        "star": star,
                        "rank_drop": rank_json(check.drop),
                        "theorem_b_agree": check.agree,
                    }),
                    text,
                ))
            }
            Query::SuReal(a, c) => {
                let a = self.exprs(a, &Scope::new())?;
                let c = self.exprs(c, &Scope::new())?;
                let r = su_real(&ctx, &a, &FieldDesc::of(c), &e)?;
                Ok((json!({"rank": rank_json(r)}), r.to_string()))
            }
            Query::Isogenous(g, h) => {
                let (g, h) = (self.group(g)?, self.group(h)?);
                let v = isogenous_catalog(&g, &h);
                let text = v.map_or("unknown".to_string(), |b| b.to_string());
                Ok((json!({"isogenous": v}), text))
            }
            Query::Homogeny(s, g, h) => {
                let hom = Homogeny {
                    s: self.group(s)?,
                    g: self.group(g)?,
                    h: self.group(h)?,
                };
                let r = homogeny_check(&self.ctx, &hom, &e)?;
                Ok((
                    json!({"is_homogeny": r.is_homogeny, "is_isogeny": r.is_isogeny}),
                    format!("homogeny {}, isogeny {}", r.is_homogeny, r.is_isogeny),
                ))
            }
            Query::Validate(n) => {
                let im = self.imaginary_ref(n)?;
                let r = validate_pillay(&ctx, im, &e);
                let text = if r.passed() {
                    "passed".to_string()
                } else {
                    format!("failed: {}", r.failures().join(", "))
                };
                Ok((json!({"passed": r.passed(), "checks": r.checks}), text))
            }
        }
    }

    fn catalog_ast(&self, g: &CatalogGroup) -> GroupExpr {
        match g {
            CatalogGroup::Vector(n) => GroupExpr::Ga(*n),
            CatalogGroup::Torus(n) => GroupExpr::Gm(*n),
            CatalogGroup::Product(p) => GroupExpr::Product(p.iter().map(|g| self.catalog_ast(g)).collect()),
            CatalogGroup::Lattice { parent, relations } => GroupExpr::Lattice(
                Box::new(self.catalog_ast(parent)),
                relations
                    .iter()
                    .map(|r| r.iter().map(|x| i64::try_from(x).expect("small relation")).collect())
                    .collect(),
            ),
            CatalogGroup::Linear { parent, relations } => GroupExpr::Linear(
                Box::new(self.catalog_ast(parent)),
                relations.iter().map(|r| r.iter().map(|x| self.ast(x)).collect()).collect(),
            ),
        }
    }

    fn ast(&self, x: &RatExpr) -> Expr {
        parse_expr(&self.ctx.display(x)).expect("displayed expressions parse")
    }

    fn fresh_names(&self, n: usize) -> Vec<String> {
        let mut prefix = "x".to_string();
        loop {
            let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
            if names.iter().all(|m| !self.names.contains_key(m)) {
                return names;
            }
            prefix.insert(0, '_');
        }
    }

    fn poly_ast(&self, p: &Poly<RatExpr>, names: &[String]) -> Expr {
        let mut terms: Vec<(&Mono, &RatExpr)> = p.terms().collect();
        terms.reverse();
        let mut out: Option<Expr> = None;
        for (m, c) in terms {
            let mut t = self.ast(c);
            for v in m.vars() {
                let x = Expr::Name(names[v].clone());
                let f = match m.exp(v) {
                    1 => x,
                    e => Expr::Pow(Box::new(x), e as i64),
                };
                t = Expr::Bin(BinOp::Mul, Box::new(t), Box::new(f));
            }
            out = Some(match out {
                None => t,
                Some(acc) => Expr::Bin(BinOp::Add, Box::new(acc), Box::new(t)),
            });
        }
        out.unwrap_or(Expr::Num(0.into()))
    }

    /// The imaginary as a `torsor{...}` statement over the catalog, or the
    /// declaration as written for explicit data.
    fn normalized(&self, name: &str, im: &PillayImaginary, written: &ImagExpr) -> String {
        let GroupPresentation::Catalog(c) = &im.group else {
            return StmtKind::Imaginary(name.into(), written.clone()).to_string();
        };
        if im.action != Action::Coordinatewise {
            return StmtKind::Imaginary(name.into(), written.clone()).to_string();
        }
        let fiber = im.fiber.as_ref().map(|f| {
            let names = self.fresh_names(f.arity);
            let body = f.generators.iter().map(|g| self.poly_ast(g, &names)).collect();
            MapAst {
                first: names,
                second: Vec::new(),
                body,
            }
        });
        let t = TorsorAst {
            group: self.catalog_ast(c),
            action: ActionAst::Coordinatewise,
            solver: None,
            witness: im.witness.iter().map(|x| self.ast(x)).collect(),
            base: im.base.iter().map(|x| self.ast(x)).collect(),
            fiber,
        };
        StmtKind::Imaginary(name.into(), ImagExpr::Torsor(Box::new(t))).to_string()
    }
}

fn context_json(small: &[String], big: &[String]) -> Value {
    json!({"char": 0, "small": small, "big": big})
}

/// Runs a checked script.
pub fn run(script: &Script, options: &Options) -> Report {
    let start = Instant::now();
    let engine = TdEngine {
        oracle: options.oracle,
        step_budget: options.budget,
        seed: options.seed,
    };
    let (mut small, mut big) = (Vec::new(), Vec::new());
    let mut first = 0;
    for s in &script.stmts {
        match &s.kind {
            StmtKind::Char(_) => {}
            StmtKind::Small(v) => small.extend(v.iter().cloned()),
            StmtKind::Big(v) => big.extend(v.iter().cloned()),
            _ => break,
        }
        first += 1;
    }
    let mut results = Vec::new();
    let mut declarations = Vec::new();
    let mut text = Vec::new();
    let mut errors: Vec<Diagnostic> = Vec::new();
    let ctx = match TowerContext::new(&small, &big) {
        Ok(c) => c,
        Err(e) => {
            let d = Diagnostic::engine(&e, Pos { line: 1, col: 1 }, 0);
            return finish(options, &start, &small, &big, results, declarations, vec![d], text, String::new());
        }
    };
    let mut env = Env {
        ctx,
        names: BTreeMap::new(),
        engine,
        session: Vec::new(),
        placeholders: 0,
    };
    for (i, n) in small.iter().chain(big.iter()).enumerate() {
        env.names.insert(n.clone(), Binding::Var(i));
    }
    let mut query_index = 0;
    for (i, s) in script.stmts.iter().enumerate().skip(first) {
        let t0 = Instant::now();
        let outcome: Result<()> = (|| {
            match &s.kind {
                StmtKind::Let(n, e) => {
                    let v = env.expr(e, &Scope::new())?;
                    env.session.push(format!("let {n} = {};", env.ctx.display(&v)));
                    env.names.insert(n.clone(), Binding::Let(v));
                }
                StmtKind::Group(n, g) => {
                    let v = env.group(g)?;
                    env.session.push(s.kind.to_string());
                    env.names.insert(n.clone(), Binding::Group(v));
                }
                StmtKind::Imaginary(n, e) => {
                    let (im, info) = env.imaginary(e)?;
                    let mut d = json!({
                        "name": n,
                        "group": im.group.describe(&env.ctx),
                        "witness": env.show(&im.witness),
                        "base": env.show(&im.base),
                    });
                    if let Some(f) = &im.fiber {
                        d["fiber"] = json!(f.display(&env.ctx));
                    }
                    if let Value::Object(extra) = info {
                        for (k, v) in extra {
                            d[k] = v;
                        }
                    }
                    declarations.push(d);
                    env.session.push(env.normalized(n, &im, e));
                    env.names.insert(n.clone(), Binding::Imaginary(im));
                }
                StmtKind::Query(q) => {
                    let label = q.to_string();
                    let mut r = match env.query(q) {
                        Ok((v, shown)) => {
                            text.push(format!("[{query_index}] {label} => {shown}"));
                            let mut v = v;
                            v["ok"] = json!(true);
                            v
                        }
                        Err(err) => {
                            let d = Diagnostic::engine(&err, s.pos, i);
                            text.push(format!("[{query_index}] {label} => error {}", d));
                            let v = json!({"ok": false, "error": {"code": d.code, "message": d.message}});
                            errors.push(d);
                            v
                        }
                    };
                    r["index"] = json!(query_index);
                    r["line"] = json!(s.pos.line);
                    r["query"] = json!(label);
                    if !options.stable {
                        r["elapsed_ms"] = json!(t0.elapsed().as_secs_f64() * 1e3);
                    }
                    results.push(r);
                    query_index += 1;
                }
                _ => {}
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            let d = Diagnostic::engine(&e, s.pos, i);
            text.push(format!("statement {i} ({}): error {}", s.pos, d));
            errors.push(d);
            break;
        }
    }
    let session = env.session.join("\n");
    finish(options, &start, &small, &big, results, declarations, errors, text, session)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    options: &Options,
    start: &Instant,
    small: &[String],
    big: &[String],
    results: Vec<Value>,
    declarations: Vec<Value>,
    errors: Vec<Diagnostic>,
    text: Vec<String>,
    session: String,
) -> Report {
    let exit_code = errors.iter().map(|d| d.exit_code()).max().unwrap_or(0);
    let oracle = match options.oracle {
        Oracle::Jacobian => "jacobian",
        Oracle::Elimination => "elim",
        Oracle::Both => "both",
    };
    let mut json = json!({
        "version": REPORT_VERSION,
        "context": context_json(small, big),
        "options": {"oracle": oracle, "seed": options.seed, "budget": options.budget},
        "declarations": declarations,
        "results": results,
        "errors": errors,
        "session": session,
    });
    if !options.stable {
        json["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    Report { json, text, exit_code }
}
