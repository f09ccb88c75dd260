//! Joint imaginaries: `e12` from two Pillay imaginaries and `e123` from two
//! pairs sharing their middle part.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::catalog::{direct_rank, pillay_form, CatalogTorsor};
use super::pillay::{grank, validate_pillay, Action, PillayImaginary};
use super::rank::GeomRank;
use crate::error::{Error, Result};
use crate::exactfield::{Field, RatExpr, TowerContext, VarKind};
use crate::galgebra::{
    double_coset_dim, stabilizer_subgroup, CoordKind, DoubleCosetSpec, SplitGroup, TorsorSubset,
};
use crate::linalg::{self, IntMatrix};
use crate::tdeg::{locus_over_p_budget, FieldDesc, LocusIdeal, TdEngine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    CatalogDerived,
    UserSuppliedVerified,
}

/// Where the rank of a combined imaginary came from. The connector formula
/// `td(g0 b12 b23) - dim G123` needs `a1 ⫝ a3` over `a2 P`; otherwise the
/// rank is read off the declared product torsor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankRoute {
    Direct,
    Connector,
}

/// Middle-group data of a triple: `H1`, `H3` are the projections of `G12`
/// and `G23` to the middle group, `g0` moves the middle witness of `e12` to
/// that of `e23`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connector {
    pub middle: SplitGroup,
    pub h1: SplitGroup,
    pub h3: SplitGroup,
    pub g0_raw: Vec<RatExpr>,
    /// `g0` reduced modulo `H1·H3`.
    pub g0: Vec<RatExpr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleDims {
    pub dim_g12: usize,
    pub dim_g23: usize,
    pub dim_h1: usize,
    pub dim_h3: usize,
    pub dim_h1_cap_h3: usize,
    pub dim_k: usize,
    pub eq1: i64,
    pub eq2: i64,
    pub structural: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinedImaginary {
    pub parts: Vec<PillayImaginary>,
    /// Part index of each block of the witness.
    pub blocks: Vec<usize>,
    pub group: SplitGroup,
    pub witness: Vec<RatExpr>,
    pub base: Vec<RatExpr>,
    pub locus: Option<LocusIdeal>,
    pub connector: Option<Connector>,
    pub dims: Option<TripleDims>,
    pub pairs: Option<Box<(CombinedImaginary, CombinedImaginary)>>,
    pub provenance: Provenance,
    pub rank: GeomRank,
    pub route: RankRoute,
}

impl CombinedImaginary {
    /// Coordinates of the witness occupied by block `k`.
    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        let start: usize = self.blocks[..k].iter().map(|&p| self.parts[p].witness.len()).sum();
        start..start + self.parts[self.blocks[k]].witness.len()
    }
}

fn catalog_part(ctx: &TowerContext, e: &PillayImaginary, engine: &TdEngine) -> Result<CatalogTorsor> {
    let report = validate_pillay(ctx, e, engine);
    if !report.passed() {
        return Err(Error::VerificationFailed(format!(
            "Pillay validation failed: {}",
            report.failures().join(", ")
        )));
    }
    if e.action != Action::Coordinatewise {
        return Err(Error::UnsupportedClass("no catalog rule for an explicit action".into()));
    }
    CatalogTorsor::new(ctx, e.group.split()?, e.witness.clone())
}

/// Declared product torsor of several imaginaries, for direct cross-checks.
fn declared_product(ctx: &TowerContext, parts: &[&PillayImaginary], engine: &TdEngine) -> Result<CatalogTorsor> {
    let ts: Vec<CatalogTorsor> = parts.iter().map(|e| catalog_part(ctx, e, engine)).collect::<Result<_>>()?;
    Ok(CatalogTorsor::product(&ts.iter().collect::<Vec<_>>()))
}

/// Catalog route: the stabilizer of the joint witness locus inside
/// `G1 x G2`, acting on a minimal translate of `(a1, a2)`.
pub fn combine_pair(
    ctx: &TowerContext,
    e1: &PillayImaginary,
    e2: &PillayImaginary,
    engine: &TdEngine,
) -> Result<CombinedImaginary> {
    let joint = declared_product(ctx, &[e1, e2], engine)?;
    let form = pillay_form(ctx, &joint, engine)?;
    Ok(CombinedImaginary {
        parts: vec![e1.clone(), e2.clone()],
        blocks: vec![0, 1],
        group: form.group,
        witness: form.witness,
        base: form.base,
        locus: Some(form.locus),
        connector: None,
        dims: None,
        pairs: None,
        provenance: Provenance::CatalogDerived,
        rank: form.rank,
        route: RankRoute::Direct,
    })
}

fn all_small(ctx: &TowerContext, xs: &[RatExpr]) -> bool {
    xs.iter().all(|x| x.vars().iter().all(|&v| v < ctx.len() && ctx.kind(v) == VarKind::Small))
}

/// User-supplied route: `(G12, w12)` is accepted once it is a subgroup of
/// `G1 x G2`, `w12` lies in the orbit of the declared witnesses, `G12` is
/// the connected stabilizer of the locus of `w12`, and the resulting rank
/// matches the direct one.
pub fn combine_pair_with(
    ctx: &TowerContext,
    e1: &PillayImaginary,
    e2: &PillayImaginary,
    group: SplitGroup,
    witness: Vec<RatExpr>,
    engine: &TdEngine,
) -> Result<CombinedImaginary> {
    let joint = declared_product(ctx, &[e1, e2], engine)?;
    let fail = |what: &str| Err(Error::VerificationFailed(what.to_string()));
    if group.kinds() != joint.group.kinds() || witness.len() != joint.witness.len() {
        return fail("subgroup: candidate does not live in G1 x G2");
    }
    let (ext, g, _) = group.generic_point(ctx, "_u");
    let _ = ext;
    if !joint.group.contains(&g) {
        return fail("subgroup: candidate is not contained in G1 x G2");
    }
    let shift = joint.group.solve(&joint.witness, &witness)?;
    if !joint.group.contains(&shift) || !all_small(ctx, &shift) {
        return fail("homogeneity: witness is not in the orbit of (a1, a2)");
    }
    let locus = locus_over_p_budget(ctx, &witness, engine.step_budget)?;
    let stab = stabilizer_subgroup(
        ctx,
        &TorsorSubset {
            group: joint.group.identity_component(),
            witness: witness.clone(),
            equations: locus.generators.clone(),
        },
    )?;
    if stab != group.identity_component() {
        return fail("homogeneity: candidate is not the stabilizer of its torsor");
    }
    let base = locus.coefficients();
    let td_b = engine.td(ctx, &base, &FieldDesc::prime())?;
    let omega = engine.td(ctx, &witness, &FieldDesc::small())?;
    let rank = GeomRank::new(omega as i64, td_b as i64 - group.dim() as i64);
    if rank != direct_rank(ctx, &joint, engine)? {
        return fail("rank: candidate disagrees with the direct computation");
    }
    rank.checked_relative(grank(ctx, e2, engine)?, "gR(e1/e2)")?;
    rank.checked_relative(grank(ctx, e1, engine)?, "gR(e2/e1)")?;
    Ok(CombinedImaginary {
        parts: vec![e1.clone(), e2.clone()],
        blocks: vec![0, 1],
        group,
        witness,
        base,
        locus: Some(locus),
        connector: None,
        dims: None,
        pairs: None,
        provenance: Provenance::UserSuppliedVerified,
        rank,
        route: RankRoute::Direct,
    })
}

fn pad(row: &[RatExpr], before: usize, after: usize) -> Vec<RatExpr> {
    let mut v = vec![RatExpr::zero(); before];
    v.extend(row.iter().cloned());
    v.extend(std::iter::repeat_n(RatExpr::zero(), after));
    v
}

fn pad_int(row: &[BigInt], before: usize, after: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); before];
    v.extend(row.iter().cloned());
    v.extend(std::iter::repeat_n(BigInt::zero(), after));
    v
}

/// `G12 x G23` with the two copies of the middle coordinates tied together.
fn fibre_product(g12: &SplitGroup, g23: &SplitGroup, mid12: usize, n_mid: usize) -> Result<SplitGroup> {
    let mut kinds = g12.kinds().to_vec();
    kinds.extend_from_slice(g23.kinds());
    let (a12, a23) = (g12.n_add(), g23.n_add());
    let (m12, m23) = (g12.n_mul(), g23.n_mul());
    let mut add: Vec<Vec<RatExpr>> = g12.add_relations().iter().map(|r| pad(r, 0, a23)).collect();
    add.extend(g23.add_relations().iter().map(|r| pad(r, a12, 0)));
    let mut mul: IntMatrix = g12.mul_relations().iter().map(|r| pad_int(r, 0, m23)).collect();
    mul.extend(g23.mul_relations().iter().map(|r| pad_int(r, m12, 0)));
    // index of a coordinate among those of its own kind
    let slot = |k: &[CoordKind], p: usize| k[..p].iter().filter(|&&c| c == k[p]).count();
    let off = g12.len();
    for i in 0..n_mid {
        let (p, q) = (mid12 + i, off + i);
        match kinds[p] {
            CoordKind::Add => {
                let mut row = vec![RatExpr::zero(); a12 + a23];
                row[slot(&kinds, p)] = RatExpr::one();
                row[slot(&kinds, q)] = RatExpr::int(-1);
                add.push(row);
            }
            CoordKind::Mul => {
                let mut row = vec![BigInt::zero(); m12 + m23];
                row[slot(&kinds, p)] = BigInt::one();
                row[slot(&kinds, q)] = BigInt::from(-1);
                mul.push(row);
            }
        }
    }
    SplitGroup::new(kinds, linalg::rref(&add, a12 + a23).0, mul)
}

/// A representative of `g0·H1·H3` that depends only on the coset.
fn canonical_connector(middle: &SplitGroup, h1: &SplitGroup, h3: &SplitGroup, g0: &[RatExpr]) -> Result<Vec<RatExpr>> {
    let mut lie = h1.lie_basis();
    lie.extend(h3.lie_basis());
    let (ap, mp) = (middle.add_positions(), middle.mul_positions());
    let mut out = g0.to_vec();

    let add_rows: Vec<Vec<RatExpr>> = lie.iter().map(|v| ap.iter().map(|&p| v[p].clone()).collect()).collect();
    let (rref, pivots) = linalg::rref(&add_rows, ap.len());
    let mut ga: Vec<RatExpr> = ap.iter().map(|&p| g0[p].clone()).collect();
    for (row, &piv) in rref.iter().zip(pivots.iter()) {
        let c = ga[piv].clone();
        for (x, r) in ga.iter_mut().zip(row.iter()) {
            *x = x.sub(&c.mul(r));
        }
    }
    for (k, &p) in ap.iter().enumerate() {
        out[p] = ga[k].clone();
    }

    if !mp.is_empty() {
        let torus = SplitGroup::from_lie(middle.kinds().to_vec(), &lie)?.identity_component();
        let rel = torus.mul_relations();
        let gm: Vec<RatExpr> = mp.iter().map(|&p| g0[p].clone()).collect();
        let power = |x: &RatExpr, e: &BigInt| -> Result<RatExpr> {
            let e = e.to_i64().ok_or_else(|| Error::UnsupportedClass("exponent overflow".into()))?;
            Ok(x.pow(e))
        };
        let chars: Vec<RatExpr> = rel
            .iter()
            .map(|row| {
                row.iter().zip(gm.iter()).try_fold(RatExpr::one(), |acc, (e, x)| Ok(acc.mul(&power(x, e)?)))
            })
            .collect::<Result<_>>()?;
        let s = if rel.is_empty() {
            vec![Vec::new(); mp.len()]
        } else {
            linalg::integer_right_inverse(rel, mp.len())
                .ok_or_else(|| Error::VerificationFailed("torus relations are not saturated".into()))?
        };
        for (j, &p) in mp.iter().enumerate() {
            out[p] = s[j]
                .iter()
                .zip(chars.iter())
                .try_fold(RatExpr::one(), |acc, (e, c)| Ok::<_, Error>(acc.mul(&power(c, e)?)))?;
        }
    }
    Ok(out)
}

fn lie_rank(basis: &[Vec<RatExpr>], n: usize) -> usize {
    linalg::rank(basis, n)
}

/// Combines `e12` and `e23` sharing the middle imaginary. `dim G123` is
/// computed from the fibre product, from Eq. (1) and from the double coset
/// `K = H1 g0 H3` (Eq. (2)); the two equations must agree.
pub fn combine_triple(
    ctx: &TowerContext,
    e12: &CombinedImaginary,
    e23: &CombinedImaginary,
    engine: &TdEngine,
) -> Result<CombinedImaginary> {
    if e12.parts.len() != 2 || e23.parts.len() != 2 {
        return Err(Error::InvalidInput("triples combine two pairs".into()));
    }
    let (e1, e2, e2b, e3) = (&e12.parts[0], &e12.parts[1], &e23.parts[0], &e23.parts[1]);
    let middle = e2.group.split()?;
    if e2b.group.split()? != middle {
        return Err(Error::InvalidInput("the pairs do not share their middle group".into()));
    }
    let n_mid = middle.len();
    let mid12 = e1.witness.len();
    let x2: Vec<RatExpr> = e12.witness[mid12..mid12 + n_mid].to_vec();
    let y2: Vec<RatExpr> = e23.witness[..n_mid].to_vec();
    let g0_raw = e2.solve(&x2, &y2)?;
    if !middle.contains(&g0_raw) || !all_small(ctx, &g0_raw) {
        return Err(Error::InvalidInput("the pairs do not share their middle imaginary".into()));
    }

    let mid_coords: Vec<usize> = (mid12..mid12 + n_mid).collect();
    let h1 = e12.group.project(&mid_coords)?;
    let h3 = e23.group.project(&(0..n_mid).collect::<Vec<_>>())?;
    let g0 = canonical_connector(&middle, &h1, &h3, &g0_raw)?;

    let (dim_g12, dim_g23) = (e12.group.dim(), e23.group.dim());
    let (dim_h1, dim_h3) = (h1.dim(), h3.dim());
    let mut both = h1.lie_basis();
    both.extend(h3.lie_basis());
    let dim_sum = lie_rank(&both, n_mid);
    let dim_h1_cap_h3 = dim_h1 + dim_h3 - dim_sum;
    let eq1 = (dim_g12 + dim_g23 + dim_h1_cap_h3) as i64 - (dim_h1 + dim_h3) as i64;
    let spec = DoubleCosetSpec {
        ambient: middle.clone(),
        h1: h1.clone(),
        h3: h3.clone(),
        g0: g0_raw.clone(),
    };
    let dim_k = double_coset_dim(ctx, &spec, &FieldDesc::over_small(g0_raw.clone()), engine)?;
    let eq2 = (dim_g12 + dim_g23) as i64 - dim_k as i64;
    if eq1 != eq2 {
        return Err(Error::DimMismatch {
            direct: eq1,
            via_double_coset: eq2,
        });
    }
    let group = fibre_product(&e12.group, &e23.group, mid12, n_mid)?;
    if group.dim() as i64 != eq1 {
        return Err(Error::VerificationFailed(format!(
            "fibre product has dimension {}, Eq. (1) gives {eq1}",
            group.dim()
        )));
    }

    let mut witness = e12.witness.clone();
    witness.extend(e23.witness.iter().cloned());
    let mut base = g0.clone();
    base.extend(e12.base.iter().cloned());
    base.extend(e23.base.iter().cloned());
    let declared = declared_product(ctx, &[e1, e2, e3], engine)?;
    let direct = direct_rank(ctx, &declared, engine)?;
    let small = FieldDesc::small();
    let outer_independent = engine.td(ctx, &e1.witness, &small.join(&e2.witness))?
        == engine.td(ctx, &e1.witness, &small.join(&e2.witness).join(&e3.witness))?;
    let (rank, route) = if outer_independent {
        let omega = engine.td(ctx, &witness, &small)?;
        let td_b = engine.td(ctx, &base, &FieldDesc::prime())?;
        let rank = GeomRank::new(omega as i64, td_b as i64 - eq1);
        if rank != direct {
            return Err(Error::VerificationFailed(format!(
                "gR(e123) = {rank} from (g0, b12, b23), direct computation gives {direct}"
            )));
        }
        (rank, RankRoute::Connector)
    } else {
        (direct, RankRoute::Direct)
    };

    Ok(CombinedImaginary {
        parts: vec![e1.clone(), e2.clone(), e3.clone()],
        blocks: vec![0, 1, 1, 2],
        group,
        witness,
        base,
        locus: None,
        connector: Some(Connector {
            middle,
            h1,
            h3,
            g0_raw,
            g0,
        }),
        dims: Some(TripleDims {
            dim_g12,
            dim_g23,
            dim_h1,
            dim_h3,
            dim_h1_cap_h3,
            dim_k,
            eq1,
            eq2,
            structural: eq1 as usize,
        }),
        pairs: Some(Box::new((e12.clone(), e23.clone()))),
        provenance: Provenance::CatalogDerived,
        rank,
        route,
    })
}

/// `gR(e/e') = gR(ee') - gR(e')`, which must be non-negative.
pub fn relative_rank(joint: GeomRank, part: GeomRank, what: &str) -> Result<GeomRank> {
    joint.checked_relative(part, what)
}

/// `gR(e/e')` for two Pillay imaginaries.
pub fn relative_rank_pair(
    ctx: &TowerContext,
    e: &PillayImaginary,
    e2: &PillayImaginary,
    engine: &TdEngine,
) -> Result<GeomRank> {
    let joint = combine_pair(ctx, e, e2, engine)?;
    relative_rank(joint.rank, grank(ctx, e2, engine)?, "gR(e/e')")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> TowerContext {
        TowerContext::new(&["s1", "s2"], &["t1", "t2"]).unwrap()
    }

    fn add(c: &TowerContext, a: &str) -> PillayImaginary {
        PillayImaginary::catalog(vec![], None, &SplitGroup::vector(1), c.parse_tuple(&[a]).unwrap())
    }

    fn mul(c: &TowerContext, a: &str) -> PillayImaginary {
        PillayImaginary::catalog(vec![], None, &SplitGroup::torus(1), c.parse_tuple(&[a]).unwrap())
    }

    #[test]
    fn worked_example() {
        let c = ctx();
        let e = TdEngine::default();
        let (e1, e2, e3) = (add(&c, "t1"), mul(&c, "t1"), add(&c, "s1*t1"));
        assert_eq!(grank(&c, &e2, &e).unwrap().to_string(), "ω-1");
        let e12 = combine_pair(&c, &e1, &e2, &e).unwrap();
        assert_eq!(e12.rank.to_string(), "ω");
        assert_eq!(e12.group.dim(), 0);
        let e23 = combine_pair(&c, &e2, &e3, &e).unwrap();
        assert_eq!(e23.rank.to_string(), "ω");
        let e123 = combine_triple(&c, &e12, &e23, &e).unwrap();
        assert_eq!(e123.rank.to_string(), "ω+1");
        let d = e123.dims.unwrap();
        assert_eq!((d.eq1, d.eq2, d.dim_k), (0, 0, 0));
        let g0 = &e123.connector.as_ref().unwrap().g0;
        assert!(!g0[0].is_zero());
        assert_eq!(relative_rank(e12.rank, grank(&c, &e2, &e).unwrap(), "").unwrap(), GeomRank::new(0, 1));
        assert_eq!(relative_rank(e123.rank, e23.rank, "").unwrap(), GeomRank::new(0, 1));
    }

    #[test]
    fn same_coset_gives_the_diagonal() {
        let c = ctx();
        let e = TdEngine::default();
        let e1 = add(&c, "t1");
        let p = combine_pair(&c, &e1, &e1, &e).unwrap();
        assert_eq!(p.group.dim(), 1);
        assert_eq!(p.rank, grank(&c, &e1, &e).unwrap());
        assert_eq!(relative_rank_pair(&c, &e1, &e1, &e).unwrap(), GeomRank::ZERO);
    }

    #[test]
    fn full_middle_projections() {
        // H1 = H3 = G2 = K: dim G123 = dim G12 + dim G23 - dim G2
        let c = ctx();
        let e = TdEngine::default();
        let (e1, e2, e3) = (add(&c, "t1"), add(&c, "t1"), add(&c, "t1"));
        let e12 = combine_pair(&c, &e1, &e2, &e).unwrap();
        let e23 = combine_pair(&c, &e2, &e3, &e).unwrap();
        let t = combine_triple(&c, &e12, &e23, &e).unwrap();
        let d = t.dims.unwrap();
        assert_eq!((d.dim_h1, d.dim_h3, d.dim_k), (1, 1, 1));
        assert_eq!(d.eq1, 1);
        assert_eq!(t.rank, grank(&c, &e1, &e).unwrap());
    }

    #[test]
    fn trivial_projections() {
        let c = ctx();
        let e = TdEngine::default();
        let (e1, e2, e3) = (add(&c, "t1"), mul(&c, "t1"), add(&c, "t1"));
        let e12 = combine_pair(&c, &e1, &e2, &e).unwrap();
        let e23 = combine_pair(&c, &e2, &e3, &e).unwrap();
        let t = combine_triple(&c, &e12, &e23, &e).unwrap();
        let d = t.dims.unwrap();
        assert_eq!((d.dim_h1, d.dim_h3, d.dim_k), (0, 0, 0));
        assert_eq!(d.eq1, (d.dim_g12 + d.dim_g23) as i64);
    }

    #[test]
    fn user_supplied_candidate() {
        let c = ctx();
        let e = TdEngine::default();
        let (e1, e2) = (add(&c, "t1"), add(&c, "t1"));
        let diag = SplitGroup::new(
            vec![CoordKind::Add; 2],
            vec![vec![RatExpr::one(), RatExpr::int(-1)]],
            Vec::new(),
        )
        .unwrap();
        let w = c.parse_tuple(&["t1", "t1"]).unwrap();
        let p = combine_pair_with(&c, &e1, &e2, diag, w.clone(), &e).unwrap();
        assert_eq!(p.provenance, Provenance::UserSuppliedVerified);
        assert_eq!(p.rank, GeomRank::new(1, -1));
        let r = combine_pair_with(&c, &e1, &e2, SplitGroup::trivial(vec![CoordKind::Add; 2]), w, &e);
        assert!(matches!(r, Err(Error::VerificationFailed(_))));
    }

    #[test]
    fn explicit_action_has_no_catalog_rule() {
        let c = ctx();
        let (bc, b) = c.with_bound(&["g".into(), "x".into()]).unwrap();
        let mut e1 = add(&bc, "t1");
        e1.action = Action::Explicit {
            mu: super::super::pillay::RationalMap2 {
                first: vec![b[0]],
                second: vec![b[1]],
                map: vec![bc.parse("x + g").unwrap()],
            },
            solver: None,
        };
        let r = combine_pair(&bc, &e1, &add(&bc, "t2"), &TdEngine::default());
        assert!(matches!(r, Err(Error::UnsupportedClass(_))), "{r:?}");
    }
}
