//! Catalog torsors `⌈G(P)*a⌉` for split groups acting coordinatewise: the
//! direct rank formula and the search for a Pillay form with minimal base.

use std::collections::BTreeMap;

use super::rank::GeomRank;
use crate::error::{Error, Result};
use crate::exactfield::{Field, RatExpr, TowerContext, VarKind};
use crate::galgebra::{stabilizer_subgroup, CoordKind, SplitGroup, TorsorSubset};
use crate::tdeg::{canonical_base, locus_over_p_budget, FieldDesc, LocusIdeal, TdEngine};

/// The orbit of a witness under the small-field points of a split group.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogTorsor {
    pub group: SplitGroup,
    pub witness: Vec<RatExpr>,
}

impl CatalogTorsor {
    pub fn new(ctx: &TowerContext, group: SplitGroup, witness: Vec<RatExpr>) -> Result<CatalogTorsor> {
        if group.len() != witness.len() {
            return Err(Error::InvalidInput(format!(
                "witness has {} coordinates, group acts on {}",
                witness.len(),
                group.len()
            )));
        }
        for w in &witness {
            for v in w.vars() {
                if v >= ctx.len() {
                    return Err(Error::UnknownVariable(format!("#{v}")));
                }
                if ctx.kind(v) == VarKind::Bound {
                    return Err(Error::InvalidInput("witness uses a placeholder".into()));
                }
            }
        }
        for p in group.mul_positions() {
            if witness[p].is_zero() {
                return Err(Error::InvalidInput(
                    "multiplicative coordinate of the witness is zero".into(),
                ));
            }
        }
        Ok(CatalogTorsor { group, witness })
    }

    /// `⌈a + P^n⌉`.
    pub fn coset_add(ctx: &TowerContext, a: Vec<RatExpr>) -> Result<CatalogTorsor> {
        CatalogTorsor::new(ctx, SplitGroup::vector(a.len()), a)
    }

    /// `⌈a · (P^×)^n⌉`.
    pub fn coset_mul(ctx: &TowerContext, a: Vec<RatExpr>) -> Result<CatalogTorsor> {
        CatalogTorsor::new(ctx, SplitGroup::torus(a.len()), a)
    }

    /// A real tuple, acted on by the trivial group.
    pub fn real(ctx: &TowerContext, a: Vec<RatExpr>) -> Result<CatalogTorsor> {
        let kinds = vec![CoordKind::Add; a.len()];
        CatalogTorsor::new(ctx, SplitGroup::trivial(kinds), a)
    }

    pub fn product(parts: &[&CatalogTorsor]) -> CatalogTorsor {
        let groups: Vec<SplitGroup> = parts.iter().map(|p| p.group.clone()).collect();
        CatalogTorsor {
            group: SplitGroup::product(&groups),
            witness: parts.iter().flat_map(|p| p.witness.iter().cloned()).collect(),
        }
    }
}

/// `gR(⌈G(P)*a⌉) = (td(a/P), td(Cb(g*a/P)) - dim G)` for `g` generic in the
/// identity component over everything else. Works for any catalog torsor,
/// Pillay form or not.
pub fn direct_rank(ctx: &TowerContext, t: &CatalogTorsor, engine: &TdEngine) -> Result<GeomRank> {
    let omega = engine.td(ctx, &t.witness, &FieldDesc::small())?;
    let g0 = t.group.identity_component();
    let (ext, g, _) = g0.generic_point(ctx, "_d");
    let moved = g0.compose(&g, &t.witness);
    let cb = canonical_base(&ext, &moved, engine.step_budget)?;
    let td_cb = engine.td(&ext, &cb.coefficients, &FieldDesc::prime())?;
    Ok(GeomRank::new(omega as i64, td_cb as i64 - g0.dim() as i64))
}

/// A Pillay form of a catalog torsor: the stabilizer of the witness locus
/// acting on a translate of the witness whose locus has minimal field of
/// definition.
#[derive(Clone, Debug, PartialEq)]
pub struct PillayForm {
    pub group: SplitGroup,
    pub witness: Vec<RatExpr>,
    /// The element of the declared group moving the declared witness here.
    pub shift: Vec<RatExpr>,
    pub base: Vec<RatExpr>,
    pub locus: LocusIdeal,
    pub rank: GeomRank,
}

struct State {
    shift: Vec<RatExpr>,
    witness: Vec<RatExpr>,
    locus: LocusIdeal,
    coeffs: Vec<RatExpr>,
    td: usize,
}

fn evaluate(
    ctx: &TowerContext,
    group: &SplitGroup,
    point: &[RatExpr],
    pins: &BTreeMap<usize, RatExpr>,
    a: &[RatExpr],
    engine: &TdEngine,
) -> Result<Option<State>> {
    let mut shift = Vec::with_capacity(point.len());
    for c in point {
        match c.substitute(pins) {
            Ok(v) => shift.push(v),
            Err(Error::ZeroDenominator) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    if group.mul_positions().iter().any(|&p| shift[p].is_zero()) {
        return Ok(None);
    }
    let witness = group.compose(&shift, a);
    let locus = locus_over_p_budget(ctx, &witness, engine.step_budget)?;
    let coeffs = locus.coefficients();
    let td = engine.td(ctx, &coeffs, &FieldDesc::prime())?;
    Ok(Some(State {
        shift,
        witness,
        locus,
        coeffs,
        td,
    }))
}

/// Values of `p` making `c` equal to a small constant, when `c` is a
/// Möbius function of `p`.
fn solve_for(c: &RatExpr, p: usize) -> Vec<RatExpr> {
    let (n, d) = (c.numer(), c.denom());
    if n.degree_in(p) > 1 || d.degree_in(p) > 1 {
        return Vec::new();
    }
    let lift = RatExpr::from_poly;
    let (alpha, beta) = (lift(n.coeff_in(p, 1)), lift(n.coeff_in(p, 0)));
    let (gamma, delta) = (lift(d.coeff_in(p, 1)), lift(d.coeff_in(p, 0)));
    let mut out = Vec::new();
    for k in [1i64, -1, 0] {
        let kappa = RatExpr::int(k);
        let den = alpha.sub(&kappa.mul(&gamma));
        if den.is_zero() {
            continue;
        }
        let num = kappa.mul(&delta).sub(&beta);
        if let Ok(v) = num.checked_div(&den) {
            if !v.depends_on(p) {
                out.push(v);
            }
        }
    }
    out
}

fn stabilizer(ctx: &TowerContext, group: &SplitGroup, s: &State) -> Result<SplitGroup> {
    stabilizer_subgroup(
        ctx,
        &TorsorSubset {
            group: group.clone(),
            witness: s.witness.clone(),
            equations: s.locus.generators.clone(),
        },
    )
}

/// Pins the parameters of a generic translate `g*a` one at a time, each pin
/// lowering the transcendence degree of the locus coefficients by exactly
/// one, until `td(Cb) - dim Stab` reaches the direct rank. Fails with
/// `UnsupportedClass` when the search gets stuck.
pub fn pillay_form(ctx: &TowerContext, t: &CatalogTorsor, engine: &TdEngine) -> Result<PillayForm> {
    let target = direct_rank(ctx, t, engine)?;
    let g0 = t.group.identity_component();
    let (ext, point, params) = g0.generic_point(ctx, "_p");
    let n_lambda = g0.add_basis().len();
    let identity_of = |p: usize| -> RatExpr {
        let k = params.iter().position(|&q| q == p).expect("parameter");
        RatExpr::int(if k < n_lambda { 0 } else { 1 })
    };
    let mut pins: BTreeMap<usize, RatExpr> = BTreeMap::new();
    let mut state = evaluate(&ext, &g0, &point, &pins, &t.witness, engine)?
        .ok_or_else(|| Error::VerificationFailed("generic translate is degenerate".into()))?;
    let stab_dim = stabilizer(&ext, &g0, &state)?.dim() as i64;
    let stuck = || Error::UnsupportedClass("no minimal Pillay witness found".into());

    while (state.td as i64) - stab_dim > target.finite {
        let free: Vec<usize> = params.iter().copied().filter(|p| !pins.contains_key(p)).collect();
        let mut next = None;
        'search: for c in &state.coeffs {
            for &p in free.iter().filter(|&&p| c.depends_on(p)) {
                let mut candidates = vec![identity_of(p)];
                candidates.extend(solve_for(c, p));
                for v in candidates {
                    let mut trial = pins.clone();
                    // earlier pins may mention p
                    for val in trial.values_mut() {
                        *val = val.substitute(&BTreeMap::from([(p, v.clone())]))?;
                    }
                    trial.insert(p, v);
                    if let Some(s) = evaluate(&ext, &g0, &point, &trial, &t.witness, engine)? {
                        if s.td + 1 == state.td {
                            next = Some((trial, s));
                            break 'search;
                        }
                    }
                }
            }
        }
        let (p2, s2) = next.ok_or_else(stuck)?;
        pins = p2;
        state = s2;
    }
    // remaining parameters move along the stabilizer; send them to the identity
    for &p in &params {
        if pins.contains_key(&p) || !state.shift.iter().any(|c| c.depends_on(p)) {
            continue;
        }
        let mut trial = pins.clone();
        let v = identity_of(p);
        for val in trial.values_mut() {
            *val = val.substitute(&BTreeMap::from([(p, v.clone())]))?;
        }
        trial.insert(p, v);
        match evaluate(&ext, &g0, &point, &trial, &t.witness, engine)? {
            Some(s) if s.td == state.td => {
                pins = trial;
                state = s;
            }
            _ => return Err(stuck()),
        }
    }
    if state.witness.iter().any(|w| w.vars().iter().any(|&v| v >= ctx.len())) {
        return Err(stuck());
    }
    let group = stabilizer(ctx, &g0, &state)?;
    if group.dim() as i64 != stab_dim {
        return Err(Error::VerificationFailed("stabilizer dimension moved while pinning".into()));
    }
    let rank = GeomRank::new(target.omega, state.td as i64 - stab_dim);
    if rank != target {
        return Err(stuck());
    }
    Ok(PillayForm {
        group,
        witness: state.witness,
        shift: state.shift,
        base: state.coeffs,
        locus: state.locus,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> TowerContext {
        TowerContext::new(&["s1", "s2"], &["t1", "t2"]).unwrap()
    }

    fn tup(c: &TowerContext, items: &[&str]) -> Vec<RatExpr> {
        c.parse_tuple(items).unwrap()
    }

    #[test]
    fn generic_additive_coset_has_rank_omega_minus_one() {
        let c = ctx();
        let e = TdEngine::default();
        let t = CatalogTorsor::coset_add(&c, tup(&c, &["t1"])).unwrap();
        assert_eq!(direct_rank(&c, &t, &e).unwrap(), GeomRank::new(1, -1));
        let f = pillay_form(&c, &t, &e).unwrap();
        assert_eq!(f.rank, GeomRank::new(1, -1));
        assert_eq!(f.group.dim(), 1);
        assert_eq!(f.witness, tup(&c, &["t1"]));
    }

    #[test]
    fn non_pillay_coset_is_normalized() {
        // (t1, s1 t1) + P^2 is interdefinable with (s1, t1 + P)
        let c = ctx();
        let e = TdEngine::default();
        let t = CatalogTorsor::coset_add(&c, tup(&c, &["t1", "s1*t1"])).unwrap();
        assert_eq!(direct_rank(&c, &t, &e).unwrap(), GeomRank::new(1, 0));
        let f = pillay_form(&c, &t, &e).unwrap();
        assert_eq!(f.group.dim(), 1);
        assert_eq!(f.rank, GeomRank::new(1, 0));
    }

    #[test]
    fn joint_witnesses_of_the_worked_example() {
        let c = ctx();
        let e = TdEngine::default();
        let e1 = CatalogTorsor::coset_add(&c, tup(&c, &["t1"])).unwrap();
        let e2 = CatalogTorsor::coset_mul(&c, tup(&c, &["t1"])).unwrap();
        let e3 = CatalogTorsor::coset_add(&c, tup(&c, &["s1*t1"])).unwrap();
        let e12 = CatalogTorsor::product(&[&e1, &e2]);
        let f = pillay_form(&c, &e12, &e).unwrap();
        assert_eq!(f.rank, GeomRank::new(1, 0));
        assert_eq!(f.group.dim(), 0);
        assert!(f.base.is_empty());
        let e23 = CatalogTorsor::product(&[&e2, &e3]);
        let f = pillay_form(&c, &e23, &e).unwrap();
        assert_eq!(f.rank, GeomRank::new(1, 0));
        assert!(f.base.is_empty());
    }

    #[test]
    fn real_tuples() {
        let c = ctx();
        let e = TdEngine::default();
        let t = CatalogTorsor::real(&c, tup(&c, &["t1", "s1*t1"])).unwrap();
        assert_eq!(direct_rank(&c, &t, &e).unwrap(), GeomRank::new(1, 1));
        let t = CatalogTorsor::real(&c, tup(&c, &["s1"])).unwrap();
        assert_eq!(direct_rank(&c, &t, &e).unwrap(), GeomRank::new(0, 1));
    }

    #[test]
    fn zero_multiplicative_witness_is_rejected() {
        let c = ctx();
        assert!(CatalogTorsor::coset_mul(&c, tup(&c, &["0"])).is_err());
    }
}
