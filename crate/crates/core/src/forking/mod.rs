//! Forking independence of imaginaries: the conditions (★), rank drops,
//! and the agreement of the two (Theorem B).

pub mod fuzz;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{RatExpr, TowerContext};
use crate::galgebra::{connected, double_coset_dim, double_coset_point, DoubleCosetSpec};
use crate::imaginaries::{
    combine_pair, direct_rank, grank, CatalogTorsor, CombinedImaginary, GeomRank, PillayImaginary,
};
use crate::tdeg::{FieldDesc, TdEngine};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    /// `a1 ⫝ a3` over `a2 P`.
    pub cond_a: bool,
    /// `b12 ⫝ b23` over `b2`.
    pub cond_b: bool,
    /// Some point of `K = H1 g0 H3` is generic in `G2` over `b12 b23`.
    pub cond_c: bool,
    /// Set when `cond_a` fails and the other conditions were not evaluated.
    pub short_circuit: bool,
    pub j: Option<usize>,
    pub dim_k: Option<usize>,
    pub dim_g2: usize,
    /// `td(h3 g0 h1 / b12 b23)` for generic `h1 ∈ H1`, `h3 ∈ H3`.
    pub td_k_over_bases: Option<usize>,
    pub g0: Option<Vec<String>>,
}

impl StarReport {
    pub fn independent(&self) -> bool {
        self.cond_a && self.cond_b && self.cond_c
    }
}

fn small_with(extra: &[RatExpr]) -> FieldDesc {
    FieldDesc::small().join(extra)
}

fn concat(parts: &[&[RatExpr]]) -> Vec<RatExpr> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

pub fn star_conditions(
    ctx: &TowerContext,
    e1: &PillayImaginary,
    e2: &PillayImaginary,
    e3: &PillayImaginary,
    engine: &TdEngine,
) -> Result<StarReport> {
    if connected(&e2.group) != Some(true) {
        return Err(Error::UnknownConnectedness);
    }
    let middle = e2.group.split()?;
    let dim_g2 = middle.dim();
    let (a1, a2, a3) = (&e1.witness, &e2.witness, &e3.witness);
    let cond_a = engine.td(ctx, a1, &small_with(a2))? == engine.td(ctx, a1, &small_with(&concat(&[a2, a3])))?;
    if !cond_a {
        return Ok(StarReport {
            cond_a,
            cond_b: false,
            cond_c: false,
            short_circuit: true,
            j: None,
            dim_k: None,
            dim_g2,
            td_k_over_bases: None,
            g0: None,
        });
    }

    let e12 = combine_pair(ctx, e1, e2, engine)?;
    let e23 = combine_pair(ctx, e2, e3, engine)?;
    let (b12, b23, b2) = (&e12.base, &e23.base, &e2.base);
    let over_b2 = FieldDesc::of(b2.clone());
    let j = engine.td(ctx, b12, &over_b2)? - engine.td(ctx, b12, &over_b2.join(b23))?;

    let (spec, g0) = double_coset(&e12, &e23)?;
    let dim_k = double_coset_dim(ctx, &spec, &FieldDesc::over_small(g0.clone()), engine)?;
    let (ext, point) = double_coset_point(ctx, &spec);
    let td_k = engine.td(&ext, &point, &FieldDesc::of(concat(&[b12, b23])))?;
    Ok(StarReport {
        cond_a,
        cond_b: j == 0,
        cond_c: td_k == dim_g2,
        short_circuit: false,
        j: Some(j),
        dim_k: Some(dim_k),
        dim_g2,
        td_k_over_bases: Some(td_k),
        g0: Some(g0.iter().map(|x| ctx.display(x)).collect()),
    })
}

/// `K = H1 g0 H3` inside the middle group.
fn double_coset(e12: &CombinedImaginary, e23: &CombinedImaginary) -> Result<(DoubleCosetSpec, Vec<RatExpr>)> {
    let e2 = &e12.parts[1];
    let middle = e2.group.split()?;
    let n = middle.len();
    let m = e12.block_range(1);
    let x2 = &e12.witness[m.clone()];
    let y2 = &e23.witness[..n];
    let g0 = e2.solve(x2, y2)?;
    let h1 = e12.group.project(&m.collect::<Vec<_>>())?;
    let h3 = e23.group.project(&(0..n).collect::<Vec<_>>())?;
    Ok((
        DoubleCosetSpec {
            ambient: middle,
            h1,
            h3,
            g0: g0.clone(),
        },
        g0,
    ))
}

pub fn independent(
    ctx: &TowerContext,
    e1: &PillayImaginary,
    e2: &PillayImaginary,
    e3: &PillayImaginary,
    engine: &TdEngine,
) -> Result<bool> {
    Ok(star_conditions(ctx, e1, e2, e3, engine)?.independent())
}

fn declared(ctx: &TowerContext, parts: &[&PillayImaginary]) -> Result<CatalogTorsor> {
    let ts: Vec<CatalogTorsor> = parts
        .iter()
        .map(|e| CatalogTorsor::new(ctx, e.group.split()?, e.witness.clone()))
        .collect::<Result<_>>()?;
    Ok(CatalogTorsor::product(&ts.iter().collect::<Vec<_>>()))
}

/// `gR` of the tuple of imaginaries, straight from the rank formula on the
/// product torsor.
pub fn joint_rank(ctx: &TowerContext, parts: &[&PillayImaginary], engine: &TdEngine) -> Result<GeomRank> {
    direct_rank(ctx, &declared(ctx, parts)?, engine)
}

/// `gR(e1/e2) - gR(e1/e2e3)`, from ranks alone.
pub fn rank_drop(
    ctx: &TowerContext,
    e1: &PillayImaginary,
    e2: &PillayImaginary,
    e3: &PillayImaginary,
    engine: &TdEngine,
) -> Result<GeomRank> {
    let over_2 = joint_rank(ctx, &[e1, e2], engine)?.checked_relative(joint_rank(ctx, &[e2], engine)?, "gR(e1/e2)")?;
    let over_23 = joint_rank(ctx, &[e1, e2, e3], engine)?
        .checked_relative(joint_rank(ctx, &[e2, e3], engine)?, "gR(e1/e2e3)")?;
    over_2.checked_relative(over_23, "gR(e1/e2) - gR(e1/e2e3)")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremBCheck {
    pub agree: bool,
    pub drop: GeomRank,
    pub indep: bool,
}

#[allow(non_snake_case)]
pub fn theoremB_check(
    ctx: &TowerContext,
    e1: &PillayImaginary,
    e2: &PillayImaginary,
    e3: &PillayImaginary,
    engine: &TdEngine,
) -> Result<TheoremBCheck> {
    let drop = rank_drop(ctx, e1, e2, e3, engine)?;
    let indep = independent(ctx, e1, e2, e3, engine)?;
    Ok(TheoremBCheck {
        agree: (drop == GeomRank::ZERO) == indep,
        drop,
        indep,
    })
}

/// `SU^P(a/C) = ω·td(a/CP) + td(a^c/C)` for a real tuple.
pub fn su_real(ctx: &TowerContext, a: &[RatExpr], c: &FieldDesc, engine: &TdEngine) -> Result<GeomRank> {
    let over_cp = FieldDesc::over_small(c.generators.clone());
    let omega = engine.td(ctx, a, &over_cp)?;
    let finite = engine.canonical_base_td(ctx, a, c)?;
    Ok(GeomRank::new(omega as i64, finite as i64))
}

/// `gR(e/C)` for a finite set `C`, as `gR(eC) - gR(C)`.
pub fn grank_over_finite_set(
    ctx: &TowerContext,
    e: &PillayImaginary,
    c: &[PillayImaginary],
    engine: &TdEngine,
) -> Result<GeomRank> {
    if c.is_empty() {
        return grank(ctx, e, engine);
    }
    let mut all: Vec<&PillayImaginary> = vec![e];
    all.extend(c.iter());
    let rest: Vec<&PillayImaginary> = c.iter().collect();
    joint_rank(ctx, &all, engine)?.checked_relative(joint_rank(ctx, &rest, engine)?, "gR(e/C)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galgebra::{CoordKind, SplitGroup};
    use crate::imaginaries::as_imaginary;

    fn ctx() -> TowerContext {
        TowerContext::new(&["s1", "s2"], &["t1", "t2"]).unwrap()
    }

    fn add(c: &TowerContext, a: &str) -> PillayImaginary {
        PillayImaginary::catalog(vec![], None, &SplitGroup::vector(1), c.parse_tuple(&[a]).unwrap())
    }

    fn mul(c: &TowerContext, a: &str) -> PillayImaginary {
        PillayImaginary::catalog(vec![], None, &SplitGroup::torus(1), c.parse_tuple(&[a]).unwrap())
    }

    fn empty() -> PillayImaginary {
        PillayImaginary::catalog(vec![], None, &SplitGroup::trivial(vec![]), vec![])
    }

    #[test]
    fn worked_example() {
        let c = ctx();
        let e = TdEngine::default();
        let (e1, e2, e3) = (add(&c, "t1"), mul(&c, "t1"), add(&c, "s1*t1"));
        let r = star_conditions(&c, &e1, &e2, &e3, &e).unwrap();
        assert!(r.cond_a && r.cond_b && r.cond_c, "{r:?}");
        assert_eq!(r.j, Some(0));
        let t = theoremB_check(&c, &e1, &e2, &e3, &e).unwrap();
        assert!(t.agree && t.indep);
        assert_eq!(t.drop, GeomRank::ZERO);
        let set = [e2.clone(), e3.clone()];
        assert_eq!(grank_over_finite_set(&c, &e1, &set, &e).unwrap(), GeomRank::new(0, 1));
    }

    #[test]
    fn repeated_imaginary_forks() {
        let c = ctx();
        let e = TdEngine::default();
        let e1 = add(&c, "t1");
        let r = star_conditions(&c, &e1, &empty(), &e1, &e).unwrap();
        assert!(!r.cond_a && r.short_circuit);
        let t = theoremB_check(&c, &e1, &empty(), &e1, &e).unwrap();
        assert!(t.agree && !t.indep);
        assert_eq!(t.drop.to_string(), "ω-1");
    }

    #[test]
    fn algebraic_dependence_breaks_condition_a() {
        let c = ctx();
        let e = TdEngine::default();
        let a1 = as_imaginary(&c, &c.parse_tuple(&["t1"]).unwrap(), &e).unwrap();
        let a3 = as_imaginary(&c, &c.parse_tuple(&["t1^2"]).unwrap(), &e).unwrap();
        assert!(!star_conditions(&c, &a1, &empty(), &a3, &e).unwrap().cond_a);
    }

    #[test]
    fn independent_generics() {
        let c = ctx();
        let e = TdEngine::default();
        let a1 = as_imaginary(&c, &c.parse_tuple(&["t1"]).unwrap(), &e).unwrap();
        let a3 = as_imaginary(&c, &c.parse_tuple(&["t2"]).unwrap(), &e).unwrap();
        assert!(independent(&c, &a1, &empty(), &a3, &e).unwrap());
        assert_eq!(rank_drop(&c, &a1, &empty(), &a3, &e).unwrap(), GeomRank::ZERO);
    }

    #[test]
    fn su_rank_of_real_tuples() {
        let c = ctx();
        let e = TdEngine::default();
        let none = FieldDesc::prime();
        for (a, want) in [(vec!["t1"], "ω"), (vec!["t1", "s1*t1"], "ω+1"), (vec!["s1"], "1")] {
            let a = c.parse_tuple(&a).unwrap();
            let su = su_real(&c, &a, &none, &e).unwrap();
            assert_eq!(su.to_string(), want);
            assert_eq!(grank(&c, &as_imaginary(&c, &a, &e).unwrap(), &e).unwrap(), su);
        }
    }

    #[test]
    fn anti_reflexivity() {
        let c = ctx();
        let e = TdEngine::default();
        let e1 = mul(&c, "t1+s1");
        assert_eq!(grank_over_finite_set(&c, &e1, std::slice::from_ref(&e1), &e).unwrap(), GeomRank::ZERO);
        assert_eq!(grank_over_finite_set(&c, &e1, &[], &e).unwrap(), GeomRank::new(1, -1));
    }

    #[test]
    fn disconnected_middle_is_refused() {
        let c = ctx();
        let e = TdEngine::default();
        let mu2 = SplitGroup::new(vec![CoordKind::Mul], vec![], crate::linalg::int_matrix(&[vec![2]])).unwrap();
        let e2 = PillayImaginary::catalog(vec![], None, &mu2, c.parse_tuple(&["t1"]).unwrap());
        let r = star_conditions(&c, &add(&c, "t1"), &e2, &add(&c, "t2"), &e);
        assert!(matches!(r, Err(Error::UnknownConnectedness)));
    }
}
