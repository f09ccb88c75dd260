//! Algebraic groups as data: catalog groups (vector groups, split tori,
//! products and their subgroups) and explicitly presented groups, with
//! dimension, connectedness, stabilizers, double cosets and homogenies.

mod explicit;
mod split;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use explicit::{ExplicitGroup, Parametrization};
pub use split::{CoordKind, SplitGroup};

use crate::error::{Error, Result};
use crate::exactfield::{Field, Poly, RatExpr, TowerContext};
use crate::linalg::{self, IntMatrix};
use crate::tdeg::{declared_small_base, lift_coefficients, FieldDesc, TdEngine};

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogGroup {
    Vector(usize),
    Torus(usize),
    Product(Vec<CatalogGroup>),
    /// Subgroup cut out by integer relations on the parent's coordinates:
    /// linear equations on additive coordinates, characters on
    /// multiplicative ones.
    Lattice {
        parent: Box<CatalogGroup>,
        relations: IntMatrix,
    },
    /// Subgroup of the additive coordinates cut out by linear equations
    /// over the small field.
    Linear {
        parent: Box<CatalogGroup>,
        relations: Vec<Vec<RatExpr>>,
    },
}

impl CatalogGroup {
    pub fn split(&self) -> Result<SplitGroup> {
        match self {
            CatalogGroup::Vector(n) => Ok(SplitGroup::vector(*n)),
            CatalogGroup::Torus(n) => Ok(SplitGroup::torus(*n)),
            CatalogGroup::Product(parts) => {
                let parts: Result<Vec<SplitGroup>> = parts.iter().map(|p| p.split()).collect();
                Ok(SplitGroup::product(&parts?))
            }
            CatalogGroup::Lattice { parent, relations } => {
                let rows: Vec<Vec<RatExpr>> = relations
                    .iter()
                    .map(|r| r.iter().map(|x| RatExpr::constant(crate::exactfield::Q::from_integer(x.clone()))).collect())
                    .collect();
                restrict(&parent.split()?, &rows, Some(relations))
            }
            CatalogGroup::Linear { parent, relations } => restrict(&parent.split()?, relations, None),
        }
    }

    /// Catalog presentation of a split group: its coordinate product cut
    /// down by the group's relations.
    pub fn from_split(g: &SplitGroup) -> CatalogGroup {
        let (ap, mp) = (g.add_positions(), g.mul_positions());
        let mut out = if mp.is_empty() {
            CatalogGroup::Vector(g.len())
        } else if ap.is_empty() {
            CatalogGroup::Torus(g.len())
        } else {
            CatalogGroup::Product(
                g.kinds()
                    .iter()
                    .map(|k| match k {
                        CoordKind::Add => CatalogGroup::Vector(1),
                        CoordKind::Mul => CatalogGroup::Torus(1),
                    })
                    .collect(),
            )
        };
        if !g.add_relations().is_empty() {
            let rows = g
                .add_relations()
                .iter()
                .map(|r| {
                    let mut full = vec![RatExpr::zero(); g.len()];
                    for (k, &p) in ap.iter().enumerate() {
                        full[p] = r[k].clone();
                    }
                    full
                })
                .collect();
            out = CatalogGroup::Linear { parent: Box::new(out), relations: rows };
        }
        if !g.mul_relations().is_empty() {
            let rows = g
                .mul_relations()
                .iter()
                .map(|r| {
                    let mut full = vec![num_bigint::BigInt::zero(); g.len()];
                    for (k, &p) in mp.iter().enumerate() {
                        full[p] = r[k].clone();
                    }
                    full
                })
                .collect();
            out = CatalogGroup::Lattice { parent: Box::new(out), relations: rows };
        }
        out
    }

    pub fn describe(&self, ctx: &TowerContext) -> String {
        match self {
            CatalogGroup::Vector(n) => format!("Ga({n})"),
            CatalogGroup::Torus(n) => format!("Gm({n})"),
            CatalogGroup::Product(parts) => {
                let p: Vec<String> = parts.iter().map(|g| g.describe(ctx)).collect();
                format!("product({})", p.join(", "))
            }
            CatalogGroup::Lattice { parent, relations } => {
                let rows: Vec<String> = relations
                    .iter()
                    .map(|r| {
                        let c: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                        format!("[{}]", c.join(", "))
                    })
                    .collect();
                format!("lattice({}, [{}])", parent.describe(ctx), rows.join(", "))
            }
            CatalogGroup::Linear { parent, relations } => {
                let rows: Vec<String> = relations
                    .iter()
                    .map(|r| {
                        let c: Vec<String> = r.iter().map(|x| ctx.display(x)).collect();
                        format!("[{}]", c.join(", "))
                    })
                    .collect();
                format!("linear({}, [{}])", parent.describe(ctx), rows.join(", "))
            }
        }
    }
}

/// Adds relation rows (over the parent's full coordinate list) to a group.
fn restrict(
    parent: &SplitGroup,
    rows: &[Vec<RatExpr>],
    integer_rows: Option<&IntMatrix>,
) -> Result<SplitGroup> {
    let (ap, mp) = (parent.add_positions(), parent.mul_positions());
    let mut add_rel: Vec<Vec<RatExpr>> = parent.add_relations().to_vec();
    let mut mul_rel: IntMatrix = parent.mul_relations().clone();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != parent.len() {
            return Err(Error::InvalidInput("relation row has the wrong length".into()));
        }
        let on_add = ap.iter().any(|&p| !row[p].is_zero());
        let on_mul = mp.iter().any(|&p| !row[p].is_zero());
        match (on_add, on_mul) {
            (true, true) => {
                return Err(Error::UnsupportedClass(
                    "relation mixes additive and multiplicative coordinates".into(),
                ))
            }
            (false, true) => match integer_rows {
                Some(ints) => mul_rel.push(mp.iter().map(|&p| ints[i][p].clone()).collect()),
                None => {
                    return Err(Error::UnsupportedClass(
                        "linear relation on multiplicative coordinates".into(),
                    ))
                }
            },
            (true, false) => add_rel.push(ap.iter().map(|&p| row[p].clone()).collect()),
            (false, false) => {}
        }
    }
    SplitGroup::new(parent.kinds().to_vec(), add_rel, mul_rel)
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupPresentation {
    Catalog(CatalogGroup),
    Explicit(Box<ExplicitGroup>),
}

impl GroupPresentation {
    pub fn ga(n: usize) -> GroupPresentation {
        GroupPresentation::Catalog(CatalogGroup::Vector(n))
    }

    pub fn gm(n: usize) -> GroupPresentation {
        GroupPresentation::Catalog(CatalogGroup::Torus(n))
    }

    pub fn catalog(&self) -> Option<&CatalogGroup> {
        match self {
            GroupPresentation::Catalog(c) => Some(c),
            GroupPresentation::Explicit(_) => None,
        }
    }

    pub fn split(&self) -> Result<SplitGroup> {
        match self {
            GroupPresentation::Catalog(c) => c.split(),
            GroupPresentation::Explicit(_) => {
                Err(Error::UnsupportedClass("explicit group outside the catalog".into()))
            }
        }
    }

    pub fn ambient_dim(&self) -> Result<usize> {
        match self {
            GroupPresentation::Catalog(c) => Ok(c.split()?.len()),
            GroupPresentation::Explicit(e) => Ok(e.ambient_dim()),
        }
    }

    pub fn describe(&self, ctx: &TowerContext) -> String {
        match self {
            GroupPresentation::Catalog(c) => c.describe(ctx),
            GroupPresentation::Explicit(e) => format!("explicit(ambient {})", e.ambient_dim()),
        }
    }

    /// Generic point of the identity component in fresh parameters.
    pub fn generic_point(
        &self,
        ctx: &TowerContext,
        prefix: &str,
    ) -> Result<(TowerContext, Vec<RatExpr>, Vec<usize>)> {
        match self {
            GroupPresentation::Catalog(c) => Ok(c.split()?.generic_point(ctx, prefix)),
            GroupPresentation::Explicit(e) => {
                e.generic_point(ctx, prefix).ok_or(Error::MissingParametrization)
            }
        }
    }

    pub fn contains(&self, g: &[RatExpr]) -> Result<bool> {
        match self {
            GroupPresentation::Catalog(c) => Ok(c.split()?.contains(g)),
            GroupPresentation::Explicit(e) => e.satisfies_equations(g),
        }
    }
}

pub fn dim_group(ctx: &TowerContext, g: &GroupPresentation, engine: &TdEngine) -> Result<usize> {
    match g {
        GroupPresentation::Catalog(c) => Ok(c.split()?.dim()),
        GroupPresentation::Explicit(e) => e.dim(ctx, engine),
    }
}

/// `Some(answer)` when certified, `None` when unknown.
pub fn connected(g: &GroupPresentation) -> Option<bool> {
    match g {
        GroupPresentation::Catalog(c) => c.split().ok().map(|s| s.is_connected()),
        GroupPresentation::Explicit(e) => e.connected(),
    }
}

/// A subset of a catalog torsor given by equations in point variables
/// `x_0..x_{n-1}` (coefficients may involve any tower variable), together
/// with a generic point of it.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsorSubset {
    pub group: SplitGroup,
    pub witness: Vec<RatExpr>,
    pub equations: Vec<Poly<RatExpr>>,
}

/// The identity component of `{g in G : g*Y = Y}`, found from the Lie
/// algebra of invariant vector fields tangent to `Y` at its generic point.
pub fn stabilizer_subgroup(ctx: &TowerContext, y: &TorsorSubset) -> Result<SplitGroup> {
    let g = &y.group;
    if y.witness.len() != g.len() {
        return Err(Error::InvalidInput("witness arity differs from the group".into()));
    }
    let basis = g.lie_basis();
    let lookup = |v: usize| y.witness.get(v).cloned();
    let mut rows: Vec<Vec<RatExpr>> = Vec::new();
    for f in &y.equations {
        let partials: Vec<RatExpr> = (0..g.len())
            .map(|l| {
                let d = f.derivative(l).eval(&lookup).unwrap_or_else(RatExpr::zero);
                match g.kinds()[l] {
                    CoordKind::Add => d,
                    CoordKind::Mul => d.mul(&y.witness[l]),
                }
            })
            .collect();
        let values: Vec<RatExpr> = basis
            .iter()
            .map(|b| {
                b.iter()
                    .zip(partials.iter())
                    .fold(RatExpr::zero(), |acc, (c, p)| acc.add(&c.mul(p)))
            })
            .collect();
        rows.extend(small_field_equations(ctx, &values));
    }
    let combos = linalg::kernel(&rows, basis.len());
    let lie: Vec<Vec<RatExpr>> = combos
        .iter()
        .map(|c| {
            (0..g.len())
                .map(|j| {
                    c.iter()
                        .zip(basis.iter())
                        .fold(RatExpr::zero(), |acc, (ci, b)| acc.add(&ci.mul(&b[j])))
                })
                .collect()
        })
        .collect();
    SplitGroup::from_lie(g.kinds().to_vec(), &lie)
}

/// Rewrites `sum_k c_k * values[k] = 0` with unknowns `c_k` in the small
/// field as linear equations over the small field, one per monomial in the
/// remaining variables.
pub fn small_field_equations(ctx: &TowerContext, values: &[RatExpr]) -> Vec<Vec<RatExpr>> {
    let mut dens: Vec<Poly<crate::exactfield::Q>> = Vec::new();
    for v in values {
        if !v.denom().is_one() && !dens.contains(v.denom()) {
            dens.push(v.denom().clone());
        }
    }
    let l = dens.iter().fold(Poly::one(), |acc, d| acc.mul(d));
    let identity: Vec<usize> = (0..ctx.len()).collect();
    let mut by_mono: BTreeMap<crate::exactfield::Mono, Vec<RatExpr>> = BTreeMap::new();
    for (k, v) in values.iter().enumerate() {
        let p = v.numer().mul(&l.exact_div(v.denom()).expect("factor of product"));
        let lifted = lift_coefficients(&p, &|x| ctx.is_small(x), &identity);
        for (m, c) in lifted.terms() {
            by_mono
                .entry(m.clone())
                .or_insert_with(|| vec![RatExpr::zero(); values.len()])[k] = c.clone();
        }
    }
    by_mono.into_values().collect()
}

/// `K = H3 * g0 * H1` inside the middle group.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleCosetSpec {
    pub ambient: SplitGroup,
    pub h1: SplitGroup,
    pub h3: SplitGroup,
    pub g0: Vec<RatExpr>,
}

/// The generic point `h3 * g0 * h1` of `K`, in fresh parameters.
pub fn double_coset_point(
    ctx: &TowerContext,
    spec: &DoubleCosetSpec,
) -> (TowerContext, Vec<RatExpr>) {
    let (c1, h1, _) = spec.h1.generic_point(ctx, "_h1_");
    let (c2, h3, _) = spec.h3.generic_point(&c1, "_h3_");
    let p = spec.ambient.compose(&h3, &spec.ambient.compose(&spec.g0, &h1));
    (c2, p)
}

/// td of the generic point of `K` over `params`; with the small field in
/// `params` this is `dim K`.
pub fn double_coset_dim(
    ctx: &TowerContext,
    spec: &DoubleCosetSpec,
    params: &FieldDesc,
    engine: &TdEngine,
) -> Result<usize> {
    if !spec.ambient.contains(&spec.g0) {
        return Err(Error::InvalidInput("g0 is not a point of the ambient group".into()));
    }
    let (ext, p) = double_coset_point(ctx, spec);
    let base = if params.include_small_field {
        let mut exprs = p.clone();
        exprs.extend(params.generators.iter().cloned());
        declared_small_base(ctx, &exprs).join(&params.generators)
    } else {
        params.clone()
    };
    engine.td(&ext, &p, &base)
}

/// A candidate homogeny `S <= G x H`, coordinates of `G` first.
#[derive(Clone, Debug, PartialEq)]
pub struct Homogeny {
    pub s: GroupPresentation,
    pub g: GroupPresentation,
    pub h: GroupPresentation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomogenyReport {
    pub is_homogeny: bool,
    pub is_isogeny: bool,
}

pub fn homogeny_check(
    ctx: &TowerContext,
    hom: &Homogeny,
    engine: &TdEngine,
) -> Result<HomogenyReport> {
    if connected(&hom.g).is_none() || connected(&hom.h).is_none() {
        return Err(Error::UnknownConnectedness);
    }
    let ng = hom.g.ambient_dim()?;
    let nh = hom.h.ambient_dim()?;
    if hom.s.ambient_dim()? != ng + nh {
        return Err(Error::InvalidInput("S does not live in G x H".into()));
    }
    let first: Vec<usize> = (0..ng).collect();
    let second: Vec<usize> = (ng..ng + nh).collect();
    let (dim_s, dim_p1, dim_p2) = match (&hom.s, hom.g.catalog(), hom.h.catalog()) {
        (GroupPresentation::Catalog(s), Some(g), Some(h)) => {
            let s = s.split()?;
            let gh = SplitGroup::product(&[g.split()?, h.split()?]);
            if s.kinds() != gh.kinds() {
                return Err(Error::InvalidInput("S has the wrong coordinate kinds".into()));
            }
            let both: Vec<Vec<RatExpr>> =
                gh.lie_basis().into_iter().chain(s.lie_basis()).collect();
            if linalg::rank(&both, gh.len()) != gh.dim() {
                return Err(Error::VerificationFailed("S is not contained in G x H".into()));
            }
            (s.dim(), s.project(&first)?.dim(), s.project(&second)?.dim())
        }
        _ => {
            let (ext, p, _) = hom.s.generic_point(ctx, "_hs")?;
            let (p1, p2) = p.split_at(ng);
            if !hom.g.contains(p1)? || !hom.h.contains(p2)? {
                return Err(Error::VerificationFailed("S is not contained in G x H".into()));
            }
            let base = declared_small_base(ctx, &p);
            (
                engine.td(&ext, &p, &base)?,
                engine.td(&ext, p1, &base)?,
                engine.td(&ext, p2, &base)?,
            )
        }
    };
    let dim_g = dim_group(ctx, &hom.g, engine)?;
    let dim_h = dim_group(ctx, &hom.h, engine)?;
    // coker(S) = S meets 1 x H, the kernel of the first projection
    let dim_coker = dim_s - dim_p1;
    let dim_ker = dim_s - dim_p2;
    let is_homogeny = dim_p1 == dim_g && dim_coker == 0;
    let is_isogeny = is_homogeny && dim_p2 == dim_h && dim_ker == 0;
    Ok(HomogenyReport {
        is_homogeny,
        is_isogeny,
    })
}

/// In characteristic 0 the identity component of a catalog group is
/// `Ga^a x Gm^m`, and there are no nonzero homomorphisms between `Ga` and
/// `Gm`, so isogeny is decided by the pair `(a, m)`.
pub fn isogenous_catalog(g: &GroupPresentation, h: &GroupPresentation) -> Option<bool> {
    let g = g.catalog()?.split().ok()?;
    let h = h.catalog()?.split().ok()?;
    Some(g.add_dim() == h.add_dim() && g.mul_dim() == h.mul_dim())
}

/// The graph of a homomorphism between catalog groups given by an integer
/// matrix on multiplicative coordinates and a small-field matrix on
/// additive ones, as a subgroup of `G x H`.
pub fn graph_subgroup(
    g: &SplitGroup,
    h: &SplitGroup,
    add_map: &[Vec<RatExpr>],
    mul_map: &IntMatrix,
) -> Result<SplitGroup> {
    // rows: y_i - sum_j A_ij x_j = 0 and prod x_j^{M_ij} * y_i^{-1} = 1
    let prod = SplitGroup::product(&[g.clone(), h.clone()]);
    let (ga, gm) = (g.n_add(), g.n_mul());
    let (ha, hm) = (h.n_add(), h.n_mul());
    if add_map.len() != ha || mul_map.len() != hm {
        return Err(Error::InvalidInput("map has the wrong shape".into()));
    }
    let mut add_rel: Vec<Vec<RatExpr>> = prod.add_relations().to_vec();
    for (i, row) in add_map.iter().enumerate() {
        let mut r: Vec<RatExpr> = row.iter().map(|c| c.neg()).collect();
        r.resize(ga, RatExpr::zero());
        let mut tail = vec![RatExpr::zero(); ha];
        tail[i] = RatExpr::one();
        r.extend(tail);
        add_rel.push(r);
    }
    let mut mul_rel: IntMatrix = prod.mul_relations().clone();
    for (i, row) in mul_map.iter().enumerate() {
        let mut r = row.clone();
        r.resize(gm, num_bigint::BigInt::zero());
        let mut tail = vec![num_bigint::BigInt::zero(); hm];
        tail[i] = num_bigint::BigInt::from(-1);
        r.extend(tail);
        mul_rel.push(r);
    }
    SplitGroup::new(prod.kinds().to_vec(), add_rel, mul_rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_matrix;

    fn ctx() -> TowerContext {
        TowerContext::new(&["s1"], &["t1", "t2"]).unwrap()
    }

    fn lattice(parent: CatalogGroup, rows: &[Vec<i64>]) -> GroupPresentation {
        GroupPresentation::Catalog(CatalogGroup::Lattice {
            parent: Box::new(parent),
            relations: int_matrix(rows),
        })
    }

    #[test]
    fn dimensions() {
        let c = ctx();
        let e = TdEngine::default();
        assert_eq!(dim_group(&c, &GroupPresentation::gm(2), &e).unwrap(), 2);
        let diag = lattice(CatalogGroup::Torus(2), &[vec![1, -1]]);
        assert_eq!(dim_group(&c, &diag, &e).unwrap(), 1);
        let prod = GroupPresentation::Catalog(CatalogGroup::Product(vec![
            CatalogGroup::Vector(2),
            CatalogGroup::Torus(1),
        ]));
        assert_eq!(dim_group(&c, &prod, &e).unwrap(), 3);
    }

    #[test]
    fn connectedness() {
        assert_eq!(connected(&GroupPresentation::gm(1)), Some(true));
        assert_eq!(connected(&lattice(CatalogGroup::Torus(1), &[vec![2]])), Some(false));
    }

    #[test]
    fn stabilizers() {
        let c = ctx();
        let x = |i| Poly::<RatExpr>::var(i);
        let w = c.parse_tuple(&["t1", "t2"]).unwrap();
        // Y = witness + {(u, v) : u = v}
        let shift = RatExpr::var(1).sub(&RatExpr::var(2));
        let eq = x(0).sub(&x(1)).sub(&Poly::constant(shift));
        let y = TorsorSubset {
            group: SplitGroup::vector(2),
            witness: w.clone(),
            equations: vec![eq],
        };
        let h = stabilizer_subgroup(&c, &y).unwrap();
        assert_eq!(h.dim(), 1);
        assert!(h.contains(&[RatExpr::int(3), RatExpr::int(3)]));

        // torus orbit with x1/x2 fixed
        let ratio = c.parse("t1/t2").unwrap();
        let eq = x(0).sub(&x(1).scale(&ratio));
        let y = TorsorSubset {
            group: SplitGroup::torus(2),
            witness: w.clone(),
            equations: vec![eq],
        };
        let h = stabilizer_subgroup(&c, &y).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.mul_relations(), &int_matrix(&[vec![1, -1]]));

        let y = TorsorSubset {
            group: SplitGroup::torus(2),
            witness: w,
            equations: vec![],
        };
        assert_eq!(stabilizer_subgroup(&c, &y).unwrap(), SplitGroup::torus(2));
    }

    #[test]
    fn double_cosets() {
        let c = ctx();
        let e = TdEngine::default();
        let p = FieldDesc::small();
        let g2 = SplitGroup::torus(2);
        let trivial = SplitGroup::trivial(g2.kinds().to_vec());
        let g0 = c.parse_tuple(&["s1", "s1+1"]).unwrap();
        let spec = |h1: &SplitGroup, h3: &SplitGroup| DoubleCosetSpec {
            ambient: g2.clone(),
            h1: h1.clone(),
            h3: h3.clone(),
            g0: g0.clone(),
        };
        assert_eq!(double_coset_dim(&c, &spec(&trivial, &trivial), &p, &e).unwrap(), 0);
        assert_eq!(double_coset_dim(&c, &spec(&g2, &g2), &p, &e).unwrap(), 2);
        let h1 = SplitGroup::new(g2.kinds().to_vec(), vec![], int_matrix(&[vec![1, -1]])).unwrap();
        let h3 = SplitGroup::new(g2.kinds().to_vec(), vec![], int_matrix(&[vec![0, 1]])).unwrap();
        assert_eq!(double_coset_dim(&c, &spec(&h1, &h3), &p, &e).unwrap(), 2);
        // over the prime field the connector itself counts
        assert_eq!(
            double_coset_dim(&c, &spec(&trivial, &trivial), &FieldDesc::prime(), &e).unwrap(),
            1
        );
    }

    #[test]
    fn squaring_graph_is_an_isogeny() {
        let c = ctx();
        let e = TdEngine::default();
        let hom = Homogeny {
            s: lattice(CatalogGroup::Torus(2), &[vec![2, -1]]),
            g: GroupPresentation::gm(1),
            h: GroupPresentation::gm(1),
        };
        let r = homogeny_check(&c, &hom, &e).unwrap();
        assert!(r.is_homogeny && r.is_isogeny);
    }

    #[test]
    fn degenerate_homogenies() {
        let c = ctx();
        let e = TdEngine::default();
        // {1} x H
        let hom = Homogeny {
            s: lattice(CatalogGroup::Torus(2), &[vec![1, 0]]),
            g: GroupPresentation::gm(1),
            h: GroupPresentation::gm(1),
        };
        assert!(!homogeny_check(&c, &hom, &e).unwrap().is_homogeny);
        let diag = Homogeny {
            s: GroupPresentation::Catalog(CatalogGroup::Lattice {
                parent: Box::new(CatalogGroup::Vector(2)),
                relations: int_matrix(&[vec![1, -1]]),
            }),
            g: GroupPresentation::ga(1),
            h: GroupPresentation::ga(1),
        };
        let r = homogeny_check(&c, &diag, &e).unwrap();
        assert!(r.is_homogeny && r.is_isogeny);
    }

    #[test]
    fn isogeny_table() {
        assert_eq!(isogenous_catalog(&GroupPresentation::ga(1), &GroupPresentation::gm(1)), Some(false));
        assert_eq!(isogenous_catalog(&GroupPresentation::gm(2), &GroupPresentation::gm(2)), Some(true));
        assert_eq!(isogenous_catalog(&GroupPresentation::ga(2), &GroupPresentation::gm(2)), Some(false));
    }

    #[test]
    fn graph_of_squaring_matches_lattice_form() {
        let g = graph_subgroup(
            &SplitGroup::torus(1),
            &SplitGroup::torus(1),
            &[],
            &int_matrix(&[vec![2]]),
        )
        .unwrap();
        assert_eq!(g.mul_relations(), &int_matrix(&[vec![2, -1]]));
    }

    #[test]
    fn split_groups_round_trip_through_the_catalog() {
        let c = TowerContext::new(&["s1"], &["t1"]).unwrap();
        let s1 = c.parse("s1").unwrap();
        let g = SplitGroup::new(
            vec![CoordKind::Add, CoordKind::Add, CoordKind::Mul, CoordKind::Mul],
            vec![vec![s1, RatExpr::int(-1)]],
            linalg::int_matrix(&[vec![2, -1]]),
        )
        .unwrap();
        assert_eq!(CatalogGroup::from_split(&g).split().unwrap(), g);
        let v = SplitGroup::vector(2);
        assert_eq!(CatalogGroup::from_split(&v), CatalogGroup::Vector(2));
    }
}
