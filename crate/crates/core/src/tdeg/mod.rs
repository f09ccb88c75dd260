//! Transcendence degrees by two independent oracles (Jacobian rank and
//! elimination), loci over the small field, and canonical bases.

pub mod groebner;

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactfield::{random_point, Field, Mono, Poly, RatExpr, TowerContext, Q};
use crate::linalg;
use groebner::{groebner, Budget, TermOrder};

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// A subfield of the tower, given by generators over the prime field and
/// optionally the whole small field.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FieldDesc {
    pub generators: Vec<RatExpr>,
    pub include_small_field: bool,
}

impl FieldDesc {
    pub fn prime() -> FieldDesc {
        FieldDesc::default()
    }

    pub fn small() -> FieldDesc {
        FieldDesc {
            generators: Vec::new(),
            include_small_field: true,
        }
    }

    pub fn of(generators: Vec<RatExpr>) -> FieldDesc {
        FieldDesc {
            generators,
            include_small_field: false,
        }
    }

    pub fn over_small(generators: Vec<RatExpr>) -> FieldDesc {
        FieldDesc {
            generators,
            include_small_field: true,
        }
    }

    pub fn join(&self, extra: &[RatExpr]) -> FieldDesc {
        let mut generators = self.generators.clone();
        generators.extend(extra.iter().cloned());
        FieldDesc {
            generators,
            include_small_field: self.include_small_field,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    Jacobian,
    Elimination,
    Both,
}

impl std::str::FromStr for Oracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Oracle> {
        match s {
            "jacobian" => Ok(Oracle::Jacobian),
            "elim" | "elimination" => Ok(Oracle::Elimination),
            "both" => Ok(Oracle::Both),
            _ => Err(Error::InvalidInput(format!("unknown oracle `{s}`"))),
        }
    }
}

/// Transcendence-degree engine settings.
#[derive(Clone, Copy, Debug)]
pub struct TdEngine {
    pub oracle: Oracle,
    pub step_budget: usize,
    pub seed: u64,
}

impl Default for TdEngine {
    fn default() -> Self {
        TdEngine {
            oracle: Oracle::Jacobian,
            step_budget: DEFAULT_STEP_BUDGET,
            seed: 0x5eed,
        }
    }
}

impl TdEngine {
    pub fn with_oracle(oracle: Oracle) -> TdEngine {
        TdEngine {
            oracle,
            ..TdEngine::default()
        }
    }

    /// td of `base(A)` over `base`.
    pub fn td(&self, ctx: &TowerContext, a: &[RatExpr], base: &FieldDesc) -> Result<usize> {
        match self.oracle {
            Oracle::Jacobian => td_jacobian_seeded(ctx, a, base, self.seed),
            Oracle::Elimination => td_elim_budget(ctx, a, base, self.step_budget),
            Oracle::Both => {
                let j = td_jacobian_seeded(ctx, a, base, self.seed)?;
                let e = td_elim_budget(ctx, a, base, self.step_budget)?;
                if j != e {
                    return Err(Error::OracleDisagreement {
                        jacobian: j,
                        elimination: e,
                    });
                }
                Ok(j)
            }
        }
    }

    pub fn independent(
        &self,
        ctx: &TowerContext,
        a: &[RatExpr],
        b: &[RatExpr],
        over: &FieldDesc,
    ) -> Result<bool> {
        Ok(self.td(ctx, a, over)? == self.td(ctx, a, &over.join(b))?)
    }

    pub fn canonical_base_td(
        &self,
        ctx: &TowerContext,
        a: &[RatExpr],
        over: &FieldDesc,
    ) -> Result<usize> {
        let cb = canonical_base(ctx, a, self.step_budget)?;
        self.td(ctx, &cb.coefficients, over)
    }
}

fn differentiation_vars(ctx: &TowerContext, exprs: &[&RatExpr], base: &FieldDesc) -> Vec<usize> {
    let mut vars = BTreeSet::new();
    for e in exprs {
        vars.extend(e.vars());
    }
    vars.into_iter()
        .filter(|&v| !(base.include_small_field && ctx.is_small(v)))
        .collect()
}

/// Rank of a matrix of rational functions: a specialized lower bound first,
/// then fraction-free elimination when the bound is not already maximal.
fn expr_rank(rows: &[Vec<RatExpr>], ncols: usize, rng: &mut ChaCha8Rng) -> usize {
    let cap = rows.len().min(ncols);
    if cap == 0 {
        return 0;
    }
    let mut vars = BTreeSet::new();
    for r in rows {
        for e in r {
            vars.extend(e.vars());
        }
    }
    let vars: Vec<usize> = vars.into_iter().collect();
    for _ in 0..5 {
        let pt = random_point(&vars, rng);
        let spec: Option<Vec<Vec<Q>>> = rows
            .iter()
            .map(|r| r.iter().map(|e| e.specialize(&pt).ok()).collect())
            .collect();
        if let Some(spec) = spec {
            if linalg::rank(&spec, ncols) == cap {
                return cap;
            }
            break;
        }
    }
    bareiss_rank(rows, ncols)
}

fn bareiss_rank(rows: &[Vec<RatExpr>], ncols: usize) -> usize {
    let mut m: Vec<Vec<Poly<Q>>> = rows
        .iter()
        .map(|r| {
            let mut dens: Vec<Poly<Q>> = Vec::new();
            for e in r {
                if !e.denom().is_one() && !dens.contains(e.denom()) {
                    dens.push(e.denom().clone());
                }
            }
            let l = dens.iter().fold(Poly::one(), |acc, d| acc.mul(d));
            r.iter()
                .map(|e| e.numer().mul(&l.exact_div(e.denom()).expect("factor of product")))
                .collect()
        })
        .collect();
    let n = m.len();
    let mut prev = Poly::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..ncols {
                let v = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = Poly::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

fn jacobian_rows(exprs: &[&RatExpr], vars: &[usize]) -> Vec<Vec<RatExpr>> {
    exprs
        .iter()
        .map(|e| vars.iter().map(|&v| e.derivative(v)).collect())
        .collect()
}

pub fn td_jacobian(ctx: &TowerContext, a: &[RatExpr], base: &FieldDesc) -> Result<usize> {
    td_jacobian_seeded(ctx, a, base, TdEngine::default().seed)
}

fn td_jacobian_seeded(
    ctx: &TowerContext,
    a: &[RatExpr],
    base: &FieldDesc,
    seed: u64,
) -> Result<usize> {
    check_vars(ctx, a.iter().chain(base.generators.iter()))?;
    if a.is_empty() {
        return Ok(0);
    }
    let all: Vec<&RatExpr> = base.generators.iter().chain(a.iter()).collect();
    let vars = differentiation_vars(ctx, &all, base);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base_refs: Vec<&RatExpr> = base.generators.iter().collect();
    let r0 = expr_rank(&jacobian_rows(&base_refs, &vars), vars.len(), &mut rng);
    let r1 = expr_rank(&jacobian_rows(&all, &vars), vars.len(), &mut rng);
    Ok(r1 - r0)
}

fn check_vars<'a>(ctx: &TowerContext, exprs: impl Iterator<Item = &'a RatExpr>) -> Result<()> {
    for e in exprs {
        if let Some(v) = e.vars().into_iter().find(|&v| v >= ctx.len()) {
            return Err(Error::UnknownVariable(format!("#{v}")));
        }
    }
    Ok(())
}

pub fn td_elim(ctx: &TowerContext, a: &[RatExpr], base: &FieldDesc) -> Result<usize> {
    td_elim_budget(ctx, a, base, DEFAULT_STEP_BUDGET)
}

fn td_elim_budget(
    ctx: &TowerContext,
    a: &[RatExpr],
    base: &FieldDesc,
    budget: usize,
) -> Result<usize> {
    check_vars(ctx, a.iter().chain(base.generators.iter()))?;
    if a.is_empty() {
        return Ok(0);
    }
    let mut gens: Vec<RatExpr> = base.generators.clone();
    if base.include_small_field {
        let mut small = BTreeSet::new();
        for e in a.iter().chain(base.generators.iter()) {
            small.extend(e.vars().into_iter().filter(|&v| ctx.is_small(v)));
        }
        gens.extend(small.into_iter().map(RatExpr::var));
    }
    let mut budget = Budget::new(budget);
    let d0 = generated_td(&gens, &mut budget)?;
    gens.extend(a.iter().cloned());
    let d1 = generated_td(&gens, &mut budget)?;
    Ok(d1 - d0)
}

/// Builds the graph ideal `y_i * den_i - num_i`, `z * prod(den) - 1` in a
/// ring whose first block holds the tower variables (and `z`), so that
/// eliminating that block leaves the relations among the `y_i`.
/// Returns the generators, the block size and the `y` indices.
fn graph_ideal<F: Field>(
    exprs: &[RatExpr],
    tower_vars: &[usize],
    lift: &dyn Fn(&Poly<Q>, &[usize]) -> Poly<F>,
) -> (Vec<Poly<F>>, usize, Vec<usize>) {
    let width = tower_vars.iter().max().map_or(0, |m| m + 1);
    let mut map = vec![usize::MAX; width];
    for (i, &v) in tower_vars.iter().enumerate() {
        map[v] = i;
    }
    let k = tower_vars.len();
    let z = k;
    // later point variables rank higher, so x_n leads among equal degrees
    let n = exprs.len();
    let ys: Vec<usize> = (0..n).map(|i| k + n - i).collect();
    let mut ideal = Vec::new();
    let mut den_product = Poly::<F>::one();
    for (e, &y) in exprs.iter().zip(ys.iter()) {
        let num = lift(e.numer(), &map);
        let den = lift(e.denom(), &map);
        ideal.push(Poly::var(y).mul(&den).sub(&num));
        if !den.is_constant() && den_product.exact_div(&den).is_none() {
            den_product = den_product.mul(&den);
        }
    }
    if !den_product.is_constant() {
        ideal.push(Poly::var(z).mul(&den_product).sub(&Poly::one()));
    }
    (ideal, k + 1, ys)
}

/// Transcendence degree over the prime field of the field generated by
/// `exprs`: a transcendence basis is grown greedily, each candidate tested by
/// elimination, and the search stops once it has as many elements as there
/// are variables.
fn generated_td(exprs: &[RatExpr], budget: &mut Budget) -> Result<usize> {
    let mut vars = BTreeSet::new();
    for e in exprs {
        vars.extend(e.vars());
    }
    let mut basis: Vec<RatExpr> = Vec::new();
    for e in exprs {
        if basis.len() == vars.len() {
            break;
        }
        if e.is_constant() {
            continue;
        }
        basis.push(e.clone());
        if elimination_td(&basis, budget)? < basis.len() {
            basis.pop();
        }
    }
    Ok(basis.len())
}

fn elimination_td(exprs: &[RatExpr], budget: &mut Budget) -> Result<usize> {
    if exprs.is_empty() {
        return Ok(0);
    }
    let mut tower = BTreeSet::new();
    for e in exprs {
        tower.extend(e.vars());
    }
    let tower: Vec<usize> = tower.into_iter().collect();
    let lift = |p: &Poly<Q>, map: &[usize]| p.remap(map);
    let (ideal, block, ys) = graph_ideal::<Q>(exprs, &tower, &lift);
    let gb = groebner(&ideal, TermOrder::Block(block), budget)?;
    let lms: Vec<Mono> = gb
        .iter()
        .filter(|g| g.vars().iter().all(|&v| v >= block))
        .map(|g| g.lm().clone())
        .collect();
    krull(&lms, &ys)
}

fn krull(lms: &[Mono], vars: &[usize]) -> Result<usize> {
    groebner::krull_dimension(lms, vars)
        .ok_or_else(|| Error::VerificationFailed("relation ideal is the unit ideal".into()))
}

/// The prime ideal of relations of a tuple over the small field, as a
/// reduced grevlex basis in point variables `x_0..x_{n-1}` whose
/// coefficients are rational functions of small-field variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LocusIdeal {
    pub generators: Vec<Poly<RatExpr>>,
    pub arity: usize,
    pub order_tag: &'static str,
}

impl LocusIdeal {
    /// Krull dimension of the locus.
    pub fn dimension(&self) -> usize {
        // Bases from `locus_over_p` are reduced for the order with x_n
        // largest; reading monomials backwards turns that into plain grevlex.
        let reversed = self.order_tag.contains("x_n >");
        let flip = |m: &Mono| {
            let mut e: Vec<u32> = (0..self.arity).map(|i| m.exp(i)).collect();
            e.reverse();
            Mono::from_exps(e)
        };
        let lms: Vec<Mono> = self
            .generators
            .iter()
            .map(|g| match reversed {
                true => g.terms().map(|(m, _)| flip(m)).max().expect("nonzero"),
                false => g.leading().expect("nonzero").0.clone(),
            })
            .collect();
        let vars: Vec<usize> = (0..self.arity).collect();
        groebner::krull_dimension(&lms, &vars).unwrap_or(0)
    }

    /// Substitutes the tuple into every generator.
    pub fn vanishes_at(&self, a: &[RatExpr]) -> bool {
        let map: BTreeMap<usize, RatExpr> = a.iter().cloned().enumerate().collect();
        self.generators.iter().all(|g| {
            let mut acc = RatExpr::zero();
            for (m, c) in g.terms() {
                let mut t = c.clone();
                for v in m.vars() {
                    t = t.mul(&map[&v].pow(m.exp(v) as i64));
                }
                acc = acc.add(&t);
            }
            acc.is_zero()
        })
    }

    pub fn coefficients(&self) -> Vec<RatExpr> {
        let mut out: Vec<RatExpr> = Vec::new();
        for g in &self.generators {
            for (_, c) in g.terms().rev() {
                if !c.is_constant() && !out.contains(c) {
                    out.push(c.clone());
                }
            }
        }
        out
    }

    pub fn display(&self, ctx: &TowerContext) -> Vec<String> {
        self.generators
            .iter()
            .map(|g| {
                let rev: Vec<usize> = (0..self.arity).rev().collect();
                let mut terms: Vec<(&Mono, &RatExpr)> = g.terms().collect();
                terms.sort_by(|a, b| b.0.remap(&rev).cmp(&a.0.remap(&rev)));
                let mut parts = Vec::new();
                for (m, c) in terms {
                    let mono: Vec<String> = m
                        .vars()
                        .map(|v| match m.exp(v) {
                            1 => format!("x{}", v + 1),
                            e => format!("x{}^{}", v + 1, e),
                        })
                        .collect();
                    let coeff = ctx.display(c);
                    let coeff = if c.numer().num_terms() > 1 && !mono.is_empty() {
                        format!("({coeff})")
                    } else {
                        coeff
                    };
                    parts.push(match (mono.is_empty(), c.is_one()) {
                        (true, _) => coeff,
                        (false, true) => mono.join("*"),
                        (false, false) => format!("{coeff}*{}", mono.join("*")),
                    });
                }
                parts.join(" + ").replace("+ -", "- ")
            })
            .collect()
    }
}

/// Splits polynomial terms into a coefficient built from the variables
/// selected by `is_coeff` and a monomial in the remaining variables, which
/// are renumbered by `map`.
pub fn lift_coefficients(
    p: &Poly<Q>,
    is_coeff: &dyn Fn(usize) -> bool,
    map: &[usize],
) -> Poly<RatExpr> {
    let mut out: BTreeMap<Mono, Poly<Q>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut coeff = Mono::one();
        let mut rest = Mono::one();
        for v in m.vars() {
            if is_coeff(v) {
                coeff = coeff.mul(&Mono::var_pow(v, m.exp(v)));
            } else {
                rest = rest.mul(&Mono::var_pow(map[v], m.exp(v)));
            }
        }
        out.entry(rest)
            .or_insert_with(Poly::zero)
            .add_term(coeff, c.clone());
    }
    Poly::from_terms(
        out.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, RatExpr::from_poly(c))),
    )
}

/// Field generated by the small-field variables of `ctx` occurring in
/// `exprs`; variables added to `ctx` later are left out, so parameters
/// introduced afterwards count as transcendental over it.
pub fn declared_small_base(ctx: &TowerContext, exprs: &[RatExpr]) -> FieldDesc {
    let mut vars = BTreeSet::new();
    for e in exprs {
        vars.extend(e.vars().into_iter().filter(|&v| v < ctx.len() && ctx.is_small(v)));
    }
    FieldDesc::of(vars.into_iter().map(RatExpr::var).collect())
}

pub fn locus_over_p(ctx: &TowerContext, a: &[RatExpr]) -> Result<LocusIdeal> {
    locus_over_p_budget(ctx, a, DEFAULT_STEP_BUDGET)
}

pub fn locus_over_p_budget(ctx: &TowerContext, a: &[RatExpr], budget: usize) -> Result<LocusIdeal> {
    check_vars(ctx, a.iter())?;
    let mut tower = BTreeSet::new();
    for e in a {
        tower.extend(e.vars().into_iter().filter(|&v| !ctx.is_small(v)));
    }
    let tower: Vec<usize> = tower.into_iter().collect();
    let lift = |p: &Poly<Q>, map: &[usize]| {
        let mut full = map.to_vec();
        full.resize(ctx.len(), usize::MAX);
        lift_coefficients(p, &|v| ctx.is_small(v), &full)
    };
    let (ideal, block, ys) = graph_ideal::<RatExpr>(a, &tower, &lift);
    let mut budget = Budget::new(budget);
    let gb = groebner(&ideal, TermOrder::Block(block), &mut budget)?;
    let width = block + a.len();
    let mut remap = vec![usize::MAX; width];
    for (i, &y) in ys.iter().enumerate() {
        remap[y] = i;
    }
    let generators = gb
        .iter()
        .filter(|g| g.vars().iter().all(|&v| v >= block))
        .map(|g| g.to_poly().remap(&remap))
        .collect();
    Ok(LocusIdeal {
        generators,
        arity: a.len(),
        order_tag: "grevlex, x_n > ... > x_1",
    })
}

/// Generators of the field of definition of `Loc(a/P)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalBase {
    pub coefficients: Vec<RatExpr>,
}

pub fn canonical_base(ctx: &TowerContext, a: &[RatExpr], budget: usize) -> Result<CanonicalBase> {
    let locus = locus_over_p_budget(ctx, a, budget)?;
    Ok(CanonicalBase {
        coefficients: locus.coefficients(),
    })
}

pub fn canonical_base_td(ctx: &TowerContext, a: &[RatExpr], over: &FieldDesc) -> Result<usize> {
    TdEngine::default().canonical_base_td(ctx, a, over)
}

pub fn independent(
    ctx: &TowerContext,
    a: &[RatExpr],
    b: &[RatExpr],
    over: &FieldDesc,
) -> Result<bool> {
    TdEngine::default().independent(ctx, a, b, over)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> TowerContext {
        TowerContext::new(&["s1", "s2"], &["t1", "t2"]).unwrap()
    }

    fn p(c: &TowerContext, items: &[&str]) -> Vec<RatExpr> {
        c.parse_tuple(items).unwrap()
    }

    fn both(c: &TowerContext, a: &[RatExpr], base: &FieldDesc) -> usize {
        let j = td_jacobian(c, a, base).unwrap();
        let e = td_elim(c, a, base).unwrap();
        assert_eq!(j, e);
        j
    }

    #[test]
    fn td_examples() {
        let c = ctx();
        let a = p(&c, &["t1+t2", "t1*t2", "t1^2+t2^2"]);
        assert_eq!(both(&c, &a, &FieldDesc::prime()), 2);
        assert_eq!(both(&c, &p(&c, &["s1*t1"]), &FieldDesc::small()), 1);
        assert_eq!(both(&c, &[], &FieldDesc::small()), 0);
        assert_eq!(both(&c, &p(&c, &["t1", "t1^2"]), &FieldDesc::prime()), 1);
        let base = FieldDesc::of(p(&c, &["t1+t2"]));
        assert_eq!(both(&c, &p(&c, &["t1", "t2"]), &base), 1);
    }

    #[test]
    fn elimination_finds_the_symmetric_relation() {
        let c = ctx();
        let a = p(&c, &["t1+t2", "t1*t2", "t1^2+t2^2"]);
        let locus = locus_over_p(&c, &a).unwrap();
        assert_eq!(locus.generators.len(), 1);
        // x1^2 - 2 x2 - x3
        let x = |i| Poly::<RatExpr>::var(i);
        let rel = x(0).pow(2).sub(&x(1).scale(&RatExpr::int(2))).sub(&x(2));
        let g = &locus.generators[0];
        assert!(*g == rel || *g == rel.neg());
    }

    #[test]
    fn rational_inputs_are_saturated() {
        let c = ctx();
        let a = p(&c, &["1/t1", "t1"]);
        assert_eq!(both(&c, &a, &FieldDesc::prime()), 1);
        let locus = locus_over_p(&c, &a).unwrap();
        assert!(locus.vanishes_at(&a));
        assert_eq!(locus.dimension(), 1);
    }

    #[test]
    fn greedy_basis_matches_full_elimination() {
        let c = TowerContext::new(&["s1"], &["t1", "t2"]).unwrap();
        for items in [
            &["t1^2", "t1^3", "t1*t2"][..],
            &["s1*t1 + 1", "t1^2", "s1"],
            &["t1 + t2", "t1*t2", "t1^2 + t2^2", "s1/t1"],
            &["2", "t1 - t1"],
        ] {
            let a = p(&c, items);
            let mut b = Budget::new(DEFAULT_STEP_BUDGET);
            let full = elimination_td(&a, &mut b).unwrap();
            assert_eq!(generated_td(&a, &mut b).unwrap(), full, "{items:?}");
        }
    }

    #[test]
    fn locus_dimension_uses_the_basis_order() {
        let c = ctx();
        let a = p(&c, &["t1^3", "t1^2 + t1", "t1^3 + 3*t1"]);
        assert_eq!(locus_over_p(&c, &a).unwrap().dimension(), 1);
        let a = p(&c, &["t1*t2", "t2", "t1 + t2"]);
        assert_eq!(locus_over_p(&c, &a).unwrap().dimension(), 2);
    }

    #[test]
    fn locus_examples() {
        let c = ctx();
        let a = p(&c, &["t1", "s1*t1"]);
        let l = locus_over_p(&c, &a).unwrap();
        assert_eq!(l.display(&c), vec!["x2 - s1*x1"]);
        assert!(l.vanishes_at(&a));
        assert!(locus_over_p(&c, &p(&c, &["t1"])).unwrap().generators.is_empty());
        let l = locus_over_p(&c, &p(&c, &["s1"])).unwrap();
        assert_eq!(l.display(&c), vec!["x1 - s1"]);
    }

    #[test]
    fn canonical_base_examples() {
        let c = ctx();
        let prime = FieldDesc::prime();
        assert_eq!(canonical_base_td(&c, &p(&c, &["t1", "s1*t1"]), &prime).unwrap(), 1);
        assert_eq!(canonical_base_td(&c, &p(&c, &["t1"]), &prime).unwrap(), 0);
        let a = p(&c, &["t1", "t2", "s1*t1+s2*t2"]);
        assert_eq!(canonical_base_td(&c, &a, &prime).unwrap(), 2);
    }

    #[test]
    fn independence_examples() {
        let c = ctx();
        let prime = FieldDesc::prime();
        assert!(independent(&c, &p(&c, &["t1"]), &p(&c, &["t2"]), &prime).unwrap());
        assert!(!independent(&c, &p(&c, &["t1"]), &p(&c, &["t1^2"]), &prime).unwrap());
        let b = p(&c, &["s1*t1+s2"]);
        assert!(!independent(&c, &p(&c, &["t1"]), &b, &FieldDesc::small()).unwrap());
    }

    #[test]
    fn exact_rank_sees_through_unlucky_points() {
        let c = ctx();
        // rank-deficient Jacobian: both entries functions of t1+t2
        let a = p(&c, &["(t1+t2)^2", "(t1+t2)^3"]);
        assert_eq!(both(&c, &a, &FieldDesc::prime()), 1);
    }
}
