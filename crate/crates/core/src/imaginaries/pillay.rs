//! Imaginaries of Pillay form `⌈G_b(P)*a⌉`, their validation and rank.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::catalog::PillayForm;
use super::rank::GeomRank;
use crate::error::{Error, Result};
use crate::exactfield::{RatExpr, TowerContext, VarKind};
use crate::galgebra::{connected, dim_group, CatalogGroup, CoordKind, GroupPresentation, SplitGroup};
use crate::tdeg::{canonical_base, locus_over_p_budget, FieldDesc, LocusIdeal, TdEngine};

/// A rational map over placeholder variables: `map(inputs[0], inputs[1])`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap2 {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub map: Vec<RatExpr>,
}

impl RationalMap2 {
    pub fn apply(&self, u: &[RatExpr], v: &[RatExpr]) -> Result<Vec<RatExpr>> {
        if u.len() != self.first.len() || v.len() != self.second.len() {
            return Err(Error::InvalidInput("rational map applied at the wrong arity".into()));
        }
        let mut bind: BTreeMap<usize, RatExpr> = self.first.iter().copied().zip(u.iter().cloned()).collect();
        bind.extend(self.second.iter().copied().zip(v.iter().cloned()));
        self.map.iter().map(|e| e.substitute(&bind)).collect()
    }
}

/// How the group acts on the fiber.
#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    /// Catalog groups: translation on additive coordinates, scaling on
    /// multiplicative ones.
    Coordinatewise,
    /// `mu(g, x)` and a solver `sigma(x, y)` with `mu(sigma(x, y), x) = y`.
    Explicit {
        mu: RationalMap2,
        solver: Option<RationalMap2>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PillayImaginary {
    pub base: Vec<RatExpr>,
    pub fiber: Option<LocusIdeal>,
    pub group: GroupPresentation,
    pub action: Action,
    pub witness: Vec<RatExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, outcome: Result<(bool, String)>) {
        let (passed, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(Check { name, passed, detail });
    }
}

impl PillayImaginary {
    /// A catalog group acting coordinatewise.
    pub fn catalog(
        base: Vec<RatExpr>,
        fiber: Option<LocusIdeal>,
        group: &SplitGroup,
        witness: Vec<RatExpr>,
    ) -> PillayImaginary {
        PillayImaginary {
            base,
            fiber,
            group: GroupPresentation::Catalog(CatalogGroup::from_split(group)),
            action: Action::Coordinatewise,
            witness,
        }
    }

    pub fn from_form(form: &PillayForm) -> PillayImaginary {
        PillayImaginary::catalog(form.base.clone(), Some(form.locus.clone()), &form.group, form.witness.clone())
    }

    pub fn act(&self, g: &[RatExpr], x: &[RatExpr]) -> Result<Vec<RatExpr>> {
        match &self.action {
            Action::Coordinatewise => {
                let s = self.group.split()?;
                if g.len() != s.len() || x.len() != s.len() {
                    return Err(Error::InvalidInput("action applied at the wrong arity".into()));
                }
                Ok(s.compose(g, x))
            }
            Action::Explicit { mu, .. } => mu.apply(g, x),
        }
    }

    /// The unique `g` with `g*x = y`.
    pub fn solve(&self, x: &[RatExpr], y: &[RatExpr]) -> Result<Vec<RatExpr>> {
        match &self.action {
            Action::Coordinatewise => self.group.split()?.solve(x, y),
            Action::Explicit { solver: Some(s), .. } => s.apply(x, y),
            Action::Explicit { solver: None, .. } => {
                Err(Error::UnsupportedClass("no solver for the action".into()))
            }
        }
    }

    fn group_mul(&self, g: &[RatExpr], h: &[RatExpr]) -> Result<Vec<RatExpr>> {
        match &self.group {
            GroupPresentation::Catalog(c) => Ok(c.split()?.compose(g, h)),
            GroupPresentation::Explicit(e) => e.compose(g, h),
        }
    }

    fn identity(&self) -> Result<Vec<RatExpr>> {
        match &self.group {
            GroupPresentation::Catalog(c) => Ok(c.split()?.identity()),
            GroupPresentation::Explicit(e) => Ok(e.identity.clone()),
        }
    }

    fn fiber_dim(&self) -> usize {
        self.fiber.as_ref().map_or(self.witness.len(), |f| f.dimension())
    }
}

fn declared_small(ctx: &TowerContext) -> Vec<RatExpr> {
    (0..ctx.len())
        .filter(|&v| ctx.kind(v) == VarKind::Small)
        .map(RatExpr::var)
        .collect()
}

/// Runs every check; failures are reported, never raised.
pub fn validate_pillay(ctx: &TowerContext, e: &PillayImaginary, engine: &TdEngine) -> ValidationReport {
    let mut r = ValidationReport { checks: Vec::new() };

    let base_vars: BTreeSet<usize> = e.base.iter().flat_map(|b| b.vars()).collect();
    let bad: Vec<&str> = base_vars
        .iter()
        .filter(|&&v| v >= ctx.len() || ctx.kind(v) != VarKind::Small)
        .map(|&v| if v < ctx.len() { ctx.name(v) } else { "?" })
        .collect();
    r.push("base_small", Ok((bad.is_empty(), bad.join(", "))));

    r.push(
        "fiber",
        Ok(match &e.fiber {
            None => (true, "no fiber equations".into()),
            Some(f) if f.arity != e.witness.len() => (false, "fiber arity differs from the witness".into()),
            Some(f) => (f.vanishes_at(&e.witness), String::new()),
        }),
    );

    r.push(
        "action_identity",
        e.identity()
            .and_then(|id| e.act(&id, &e.witness))
            .map(|y| (y == e.witness, String::new())),
    );

    r.push(
        "action_compat",
        (|| {
            let (c1, g1, _) = e.group.generic_point(ctx, "_g")?;
            let (c2, g2, _) = e.group.generic_point(&c1, "_h")?;
            let _ = c2;
            let lhs = e.act(&g1, &e.act(&g2, &e.witness)?)?;
            let rhs = e.act(&e.group_mul(&g1, &g2)?, &e.witness)?;
            Ok((lhs == rhs, String::new()))
        })(),
    );

    r.push(
        "freeness",
        (|| {
            let d = dim_group(ctx, &e.group, engine)?;
            let (ext, g, _) = e.group.generic_point(ctx, "_f")?;
            let y = e.act(&g, &e.witness)?;
            let mut over = declared_small(ctx);
            over.extend(e.witness.iter().cloned());
            let orbit = engine.td(&ext, &y, &FieldDesc::of(over))?;
            Ok((orbit == d, format!("orbit dim {orbit}, group dim {d}")))
        })(),
    );

    r.push(
        "canonical_base",
        (|| {
            let (ext, g, _) = e.group.generic_point(ctx, "_c")?;
            let y = e.act(&g, &e.witness)?;
            let cb = canonical_base(&ext, &y, engine.step_budget)?;
            let want = engine.td(&ext, &cb.coefficients, &FieldDesc::prime())?;
            let have = engine.td(ctx, &e.base, &FieldDesc::prime())?;
            Ok((want == have, format!("td(b) = {have}, canonical {want}")))
        })(),
    );

    r.push(
        "genericity",
        (|| {
            let have = engine.td(ctx, &e.witness, &FieldDesc::small().join(&e.base))?;
            let want = e.fiber_dim();
            Ok((have == want, format!("td(a/P b) = {have}, fiber dim {want}")))
        })(),
    );

    r.push(
        "connected",
        Ok(match (&e.group, connected(&e.group)) {
            (GroupPresentation::Catalog(_), _) => (true, "catalog identity component".into()),
            (_, Some(true)) => (true, String::new()),
            (_, _) => (false, "explicit group not certified connected".into()),
        }),
    );
    r
}

fn require_valid(ctx: &TowerContext, e: &PillayImaginary, engine: &TdEngine) -> Result<()> {
    let report = validate_pillay(ctx, e, engine);
    if !report.passed() {
        return Err(Error::VerificationFailed(format!(
            "Pillay validation failed: {}",
            report.failures().join(", ")
        )));
    }
    Ok(())
}

/// `gR(e) = (td(a/P), td(b) - dim G_b)`.
pub fn grank(ctx: &TowerContext, e: &PillayImaginary, engine: &TdEngine) -> Result<GeomRank> {
    require_valid(ctx, e, engine)?;
    grank_torsor(ctx, &e.group, &e.witness, &e.base, engine)
}

/// `gR(⌜X⌝) = ω·td(a/P) + td(b) - dim G`; catalog groups contribute the
/// dimension of their identity component.
pub fn grank_torsor(
    ctx: &TowerContext,
    group: &GroupPresentation,
    witness: &[RatExpr],
    base: &[RatExpr],
    engine: &TdEngine,
) -> Result<GeomRank> {
    let dim = match group {
        GroupPresentation::Catalog(c) => c.split()?.identity_component().dim(),
        GroupPresentation::Explicit(_) => {
            if connected(group) != Some(true) {
                return Err(Error::UnknownConnectedness);
            }
            dim_group(ctx, group, engine)?
        }
    };
    let omega = engine.td(ctx, witness, &FieldDesc::small())?;
    let td_b = engine.td(ctx, base, &FieldDesc::prime())?;
    Ok(GeomRank::new(omega as i64, td_b as i64 - dim as i64))
}

/// A real tuple as an imaginary with trivial group.
pub fn as_imaginary(ctx: &TowerContext, a: &[RatExpr], engine: &TdEngine) -> Result<PillayImaginary> {
    let locus = locus_over_p_budget(ctx, a, engine.step_budget)?;
    let base = locus.coefficients();
    let trivial = SplitGroup::trivial(vec![CoordKind::Add; a.len()]);
    Ok(PillayImaginary::catalog(base, Some(locus), &trivial, a.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::linalg::int_matrix;

    fn ctx() -> TowerContext {
        TowerContext::new(&["s1", "s2"], &["t1", "t2"]).unwrap()
    }

    fn tup(c: &TowerContext, items: &[&str]) -> Vec<RatExpr> {
        c.parse_tuple(items).unwrap()
    }

    fn coset(c: &TowerContext, a: &str) -> PillayImaginary {
        PillayImaginary::catalog(vec![], None, &SplitGroup::vector(1), tup(c, &[a]))
    }

    #[test]
    fn additive_coset_validates_with_rank_omega_minus_one() {
        let c = ctx();
        let e = TdEngine::default();
        let im = coset(&c, "t1");
        let rep = validate_pillay(&c, &im, &e);
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(grank(&c, &im, &e).unwrap().to_string(), "ω-1");
    }

    #[test]
    fn trivial_action_is_not_free() {
        let c = ctx();
        let (bc, b) = c.with_bound(&["g".into(), "x".into()]).unwrap();
        let mut im = coset(&bc, "t1");
        im.action = Action::Explicit {
            mu: RationalMap2 {
                first: vec![b[0]],
                second: vec![b[1]],
                map: vec![RatExpr::var(b[1])],
            },
            solver: None,
        };
        let rep = validate_pillay(&bc, &im, &TdEngine::default());
        assert_eq!(rep.check("freeness"), Some(false));
        assert_eq!(rep.check("action_identity"), Some(true));
        assert!(grank(&bc, &im, &TdEngine::default()).is_err());
    }

    #[test]
    fn fiber_violation_is_reported() {
        let c = ctx();
        let e = TdEngine::default();
        let fiber = locus_over_p_budget(&c, &tup(&c, &["t1", "s1*t1"]), e.step_budget).unwrap();
        let trivial = SplitGroup::trivial(vec![CoordKind::Add; 2]);
        let im = PillayImaginary::catalog(tup(&c, &["s1"]), Some(fiber), &trivial, tup(&c, &["t1", "t2"]));
        assert_eq!(validate_pillay(&c, &im, &e).check("fiber"), Some(false));
    }

    #[test]
    fn real_tuples_as_imaginaries() {
        let c = ctx();
        let e = TdEngine::default();
        for (a, want) in [
            (vec!["t1"], GeomRank::new(1, 0)),
            (vec!["t1", "s1*t1"], GeomRank::new(1, 1)),
            (vec!["s1"], GeomRank::new(0, 1)),
        ] {
            let im = as_imaginary(&c, &tup(&c, &a), &e).unwrap();
            assert_eq!(grank(&c, &im, &e).unwrap(), want, "{a:?}");
        }
    }

    #[test]
    fn disconnected_catalog_group_uses_identity_component() {
        // mu_2 x Ga acting on (1, t1)
        let c = ctx();
        let e = TdEngine::default();
        let g = GroupPresentation::Catalog(CatalogGroup::Lattice {
            parent: Box::new(CatalogGroup::Product(vec![CatalogGroup::Torus(1), CatalogGroup::Vector(1)])),
            relations: int_matrix(&[vec![2, 0]]),
        });
        assert_eq!(connected(&g), Some(false));
        let r = grank_torsor(&c, &g, &tup(&c, &["1", "t1"]), &[], &e).unwrap();
        assert_eq!(r, GeomRank::new(1, -1));
        let connected_case = grank(&c, &coset(&c, "t1"), &e).unwrap();
        assert_eq!(r, connected_case);
    }

    #[test]
    fn single_point_torsor() {
        let c = ctx();
        let e = TdEngine::default();
        let g = GroupPresentation::Catalog(CatalogGroup::from_split(&SplitGroup::trivial(vec![CoordKind::Add])));
        let b = tup(&c, &["s1"]);
        assert_eq!(grank_torsor(&c, &g, &b, &b, &e).unwrap(), GeomRank::new(0, 1));
    }

    #[test]
    fn solver_inverts_the_action() {
        let c = ctx();
        let im = PillayImaginary::catalog(vec![], None, &SplitGroup::torus(1), tup(&c, &["t1"]));
        let y = tup(&c, &["s1*t1"]);
        let g = im.solve(&im.witness, &y).unwrap();
        assert_eq!(g, tup(&c, &["s1"]));
        assert!(!g[0].is_zero());
    }
}
