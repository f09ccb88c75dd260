//! Groups given by equations and rational group laws over placeholder
//! coordinates.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactfield::{Field, Mono, Poly, RatExpr, TowerContext, VarKind};
use crate::tdeg::groebner::{self, groebner, reduce, Budget, OrderedPoly, TermOrder};
use crate::tdeg::{declared_small_base, lift_coefficients, TdEngine};

/// A dominant rational map from affine space onto the group.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    /// Placeholder variables of the source affine space.
    pub params: Vec<usize>,
    pub coords: Vec<RatExpr>,
}

/// All maps are expressions over placeholder (`Bound`) variables of the
/// context: `x` and `y` stand for two group elements.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitGroup {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub equations: Vec<RatExpr>,
    pub mul: Vec<RatExpr>,
    pub inv: Vec<RatExpr>,
    pub identity: Vec<RatExpr>,
    pub parametrization: Option<Parametrization>,
}

fn bind(vars: &[usize], vals: &[RatExpr]) -> BTreeMap<usize, RatExpr> {
    vars.iter().copied().zip(vals.iter().cloned()).collect()
}

fn subst_all(exprs: &[RatExpr], map: &BTreeMap<usize, RatExpr>) -> Result<Vec<RatExpr>> {
    exprs.iter().map(|e| e.substitute(map)).collect()
}

impl ExplicitGroup {
    /// Builds the group and verifies the identity and inverse laws on a
    /// generic point.
    pub fn new(ctx: &TowerContext, group: ExplicitGroup) -> Result<ExplicitGroup> {
        let n = group.x.len();
        if group.y.len() != n || group.mul.len() != n || group.inv.len() != n || group.identity.len() != n {
            return Err(Error::InvalidInput("group maps must have the ambient arity".into()));
        }
        for &v in group.x.iter().chain(group.y.iter()) {
            if ctx.kind(v) != VarKind::Bound {
                return Err(Error::InvalidInput(format!("`{}` is not a placeholder", ctx.name(v))));
            }
        }
        if let Some(p) = &group.parametrization {
            if p.coords.len() != n {
                return Err(Error::InvalidInput("parametrization has the wrong arity".into()));
            }
        }
        group.verify(ctx)?;
        Ok(group)
    }

    pub fn ambient_dim(&self) -> usize {
        self.x.len()
    }

    pub fn compose(&self, g: &[RatExpr], h: &[RatExpr]) -> Result<Vec<RatExpr>> {
        let mut map = bind(&self.x, g);
        map.extend(bind(&self.y, h));
        subst_all(&self.mul, &map)
    }

    pub fn inverse(&self, g: &[RatExpr]) -> Result<Vec<RatExpr>> {
        subst_all(&self.inv, &bind(&self.x, g))
    }

    pub fn satisfies_equations(&self, g: &[RatExpr]) -> Result<bool> {
        let vals = subst_all(&self.equations, &bind(&self.x, g))?;
        Ok(vals.iter().all(|v| v.is_zero()))
    }

    /// Generic point in fresh small-field parameters, when parametrized.
    pub fn generic_point(
        &self,
        ctx: &TowerContext,
        prefix: &str,
    ) -> Option<(TowerContext, Vec<RatExpr>, Vec<usize>)> {
        let p = self.parametrization.as_ref()?;
        let (ext, fresh) = ctx.with_fresh(prefix, p.params.len());
        let vals: Vec<RatExpr> = fresh.iter().map(|&v| RatExpr::var(v)).collect();
        let point = subst_all(&p.coords, &bind(&p.params, &vals)).ok()?;
        Some((ext, point, fresh))
    }

    fn verify(&self, ctx: &TowerContext) -> Result<()> {
        if !self.satisfies_equations(&self.identity)? {
            return Err(Error::VerificationFailed("identity violates the group equations".into()));
        }
        if let Some((_, g, _)) = self.generic_point(ctx, "_chk") {
            if !self.satisfies_equations(&g)? {
                return Err(Error::VerificationFailed("parametrization leaves the group".into()));
            }
            if self.compose(&self.identity, &g)? != g {
                return Err(Error::VerificationFailed("identity law fails".into()));
            }
            let inv = self.inverse(&g)?;
            if self.compose(&g, &inv)? != self.identity {
                return Err(Error::VerificationFailed("inverse law fails".into()));
            }
            return Ok(());
        }
        // without a parametrization, check the laws modulo the equations
        let xs: Vec<RatExpr> = self.x.iter().map(|&v| RatExpr::var(v)).collect();
        let left_id = self.compose(&self.identity, &xs)?;
        let right_inv = self.compose(&xs, &self.inverse(&xs)?)?;
        let mut checks = Vec::new();
        for i in 0..xs.len() {
            checks.push(left_id[i].sub(&xs[i]));
            checks.push(right_inv[i].sub(&self.identity[i]));
        }
        let (gb, map) = self.equation_basis(ctx, TdEngine::default().step_budget)?;
        let mut budget = Budget::new(TdEngine::default().step_budget);
        for c in checks {
            let lifted = lift_coefficients(c.numer(), &|v| !self.x.contains(&v), &map);
            let r = reduce(&OrderedPoly::from_poly(&lifted, TermOrder::Grevlex), &gb, TermOrder::Grevlex, &mut budget)?;
            if !r.is_zero() {
                return Err(Error::VerificationFailed("group law fails modulo the equations".into()));
            }
        }
        Ok(())
    }

    fn equation_basis(
        &self,
        ctx: &TowerContext,
        budget: usize,
    ) -> Result<(Vec<OrderedPoly<RatExpr>>, Vec<usize>)> {
        let mut map = vec![usize::MAX; ctx.len()];
        for (i, &v) in self.x.iter().enumerate() {
            map[v] = i;
        }
        let gens: Vec<Poly<RatExpr>> = self
            .equations
            .iter()
            .map(|e| lift_coefficients(e.numer(), &|v| !self.x.contains(&v), &map))
            .collect();
        let mut budget = Budget::new(budget);
        Ok((groebner(&gens, TermOrder::Grevlex, &mut budget)?, map))
    }

    /// Dimension through the parametrization when there is one, otherwise
    /// the Krull dimension of the equations.
    pub fn dim(&self, ctx: &TowerContext, engine: &TdEngine) -> Result<usize> {
        if let Some((ext, point, _)) = self.generic_point(ctx, "_dim") {
            let base = declared_small_base(ctx, &point);
            return engine.td(&ext, &point, &base);
        }
        if self.equations.is_empty() {
            return Ok(self.ambient_dim());
        }
        let (gb, _) = self.equation_basis(ctx, engine.step_budget)?;
        let lms: Vec<Mono> = gb.iter().map(|g| g.lm().clone()).collect();
        let vars: Vec<usize> = (0..self.ambient_dim()).collect();
        groebner::krull_dimension(&lms, &vars)
            .ok_or_else(|| Error::VerificationFailed("group equations are inconsistent".into()))
    }

    /// Certified only through a parametrization.
    pub fn connected(&self) -> Option<bool> {
        self.parametrization.as_ref().map(|_| true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The circle `x^2 + y^2 = 1` with the rotation law.
    fn circle() -> (TowerContext, ExplicitGroup) {
        let base = TowerContext::new(&["s1"], &["t1"]).unwrap();
        let names: Vec<String> = ["x1", "x2", "y1", "y2", "u"].iter().map(|s| s.to_string()).collect();
        let (ctx, b) = base.with_bound(&names).unwrap();
        let p = |s: &str| ctx.parse(s).unwrap();
        let g = ExplicitGroup {
            x: vec![b[0], b[1]],
            y: vec![b[2], b[3]],
            equations: vec![p("x1^2 + x2^2 - 1")],
            mul: vec![p("x1*y1 - x2*y2"), p("x1*y2 + x2*y1")],
            inv: vec![p("x1"), p("-x2")],
            identity: vec![p("1"), p("0")],
            parametrization: Some(Parametrization {
                params: vec![b[4]],
                coords: vec![p("(1 - u^2)/(1 + u^2)"), p("2*u/(1 + u^2)")],
            }),
        };
        (ctx, g)
    }

    #[test]
    fn circle_group_checks_and_dimension() {
        let (ctx, g) = circle();
        let g = ExplicitGroup::new(&ctx, g).unwrap();
        assert_eq!(g.dim(&ctx, &TdEngine::default()).unwrap(), 1);
        assert_eq!(g.connected(), Some(true));
    }

    #[test]
    fn unparametrized_group_uses_the_equations() {
        let (ctx, mut g) = circle();
        g.parametrization = None;
        let g = ExplicitGroup::new(&ctx, g).unwrap();
        assert_eq!(g.dim(&ctx, &TdEngine::default()).unwrap(), 1);
        assert_eq!(g.connected(), None);
    }

    #[test]
    fn broken_inverse_is_rejected() {
        let (ctx, mut g) = circle();
        g.inv = vec![ctx.parse("x1").unwrap(), ctx.parse("x2").unwrap()];
        assert!(matches!(ExplicitGroup::new(&ctx, g), Err(Error::VerificationFailed(_))));
    }
}
