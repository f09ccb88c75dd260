//! Split commutative groups `Ga^m x Gm^k` and their algebraic subgroups,
//! in the form every catalog presentation normalizes to.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{Field, RatExpr, TowerContext, Q};
use crate::linalg::{self, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoordKind {
    /// A coordinate of `Ga`: the group law and the action are addition.
    Add,
    /// A coordinate of `Gm`: the group law and the action are multiplication.
    Mul,
}

/// A closed subgroup of `Ga^m x Gm^k`, coordinates interleaved as `kinds`
/// says. The additive part is cut out by linear equations over the small
/// field; the multiplicative part by character relations `prod x_j^c_j = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitGroup {
    kinds: Vec<CoordKind>,
    add_relations: Vec<Vec<RatExpr>>,
    mul_relations: IntMatrix,
}

fn reduce_rows(rows: &[Vec<RatExpr>], ncols: usize) -> Vec<Vec<RatExpr>> {
    linalg::rref(rows, ncols).0
}

impl SplitGroup {
    pub fn new(
        kinds: Vec<CoordKind>,
        add_relations: Vec<Vec<RatExpr>>,
        mul_relations: IntMatrix,
    ) -> Result<SplitGroup> {
        let n_add = kinds.iter().filter(|k| **k == CoordKind::Add).count();
        let n_mul = kinds.len() - n_add;
        if add_relations.iter().any(|r| r.len() != n_add)
            || mul_relations.iter().any(|r| r.len() != n_mul)
        {
            return Err(Error::InvalidInput("relation row has the wrong length".into()));
        }
        let mul_relations = linalg::hermite_normal_form(&mul_relations, n_mul);
        Ok(SplitGroup {
            add_relations: reduce_rows(&add_relations, n_add),
            kinds,
            mul_relations,
        })
    }

    pub fn vector(n: usize) -> SplitGroup {
        SplitGroup {
            kinds: vec![CoordKind::Add; n],
            add_relations: Vec::new(),
            mul_relations: Vec::new(),
        }
    }

    pub fn torus(n: usize) -> SplitGroup {
        SplitGroup {
            kinds: vec![CoordKind::Mul; n],
            add_relations: Vec::new(),
            mul_relations: Vec::new(),
        }
    }

    /// The full group on the given coordinate kinds.
    pub fn ambient(kinds: Vec<CoordKind>) -> SplitGroup {
        SplitGroup {
            kinds,
            add_relations: Vec::new(),
            mul_relations: Vec::new(),
        }
    }

    pub fn trivial(kinds: Vec<CoordKind>) -> SplitGroup {
        let n_add = kinds.iter().filter(|k| **k == CoordKind::Add).count();
        let n_mul = kinds.len() - n_add;
        let unit = |n: usize, i: usize| -> Vec<BigInt> {
            (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
        };
        SplitGroup {
            kinds,
            add_relations: (0..n_add)
                .map(|i| (0..n_add).map(|j| RatExpr::int((i == j) as i64)).collect())
                .collect(),
            mul_relations: (0..n_mul).map(|i| unit(n_mul, i)).collect(),
        }
    }

    pub fn product(parts: &[SplitGroup]) -> SplitGroup {
        let kinds: Vec<CoordKind> = parts.iter().flat_map(|p| p.kinds.iter().copied()).collect();
        let n_add: usize = parts.iter().map(|p| p.n_add()).sum();
        let n_mul: usize = parts.iter().map(|p| p.n_mul()).sum();
        let mut add_relations = Vec::new();
        let mut mul_relations = Vec::new();
        let (mut oa, mut om) = (0, 0);
        for p in parts {
            for r in &p.add_relations {
                let mut row = vec![RatExpr::zero(); n_add];
                row[oa..oa + r.len()].clone_from_slice(r);
                add_relations.push(row);
            }
            for r in &p.mul_relations {
                let mut row = vec![BigInt::zero(); n_mul];
                row[om..om + r.len()].clone_from_slice(r);
                mul_relations.push(row);
            }
            oa += p.n_add();
            om += p.n_mul();
        }
        SplitGroup {
            kinds,
            add_relations,
            mul_relations,
        }
    }

    pub fn kinds(&self) -> &[CoordKind] {
        &self.kinds
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn add_relations(&self) -> &[Vec<RatExpr>] {
        &self.add_relations
    }

    pub fn mul_relations(&self) -> &IntMatrix {
        &self.mul_relations
    }

    fn positions(&self, kind: CoordKind) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.kinds[i] == kind).collect()
    }

    pub fn add_positions(&self) -> Vec<usize> {
        self.positions(CoordKind::Add)
    }

    pub fn mul_positions(&self) -> Vec<usize> {
        self.positions(CoordKind::Mul)
    }

    pub fn n_add(&self) -> usize {
        self.add_positions().len()
    }

    pub fn n_mul(&self) -> usize {
        self.mul_positions().len()
    }

    /// Basis of the additive part, as vectors over the additive coordinates.
    pub fn add_basis(&self) -> Vec<Vec<RatExpr>> {
        linalg::kernel(&self.add_relations, self.n_add())
    }

    /// Cocharacters spanning the identity component of the multiplicative part.
    pub fn cocharacters(&self) -> IntMatrix {
        linalg::integer_kernel(&self.mul_relations, self.n_mul())
    }

    pub fn add_dim(&self) -> usize {
        self.n_add() - linalg::rank(&self.add_relations, self.n_add())
    }

    pub fn mul_dim(&self) -> usize {
        self.n_mul() - linalg::integer_rank(&self.mul_relations, self.n_mul())
    }

    pub fn dim(&self) -> usize {
        self.add_dim() + self.mul_dim()
    }

    /// Connected iff the character relations span a saturated lattice.
    pub fn is_connected(&self) -> bool {
        linalg::is_saturated(&self.mul_relations, self.n_mul())
    }

    /// Basis of the Lie algebra, as full-length coordinate vectors.
    pub fn lie_basis(&self) -> Vec<Vec<RatExpr>> {
        let (ap, mp) = (self.add_positions(), self.mul_positions());
        let mut out = Vec::new();
        for b in self.add_basis() {
            let mut v = vec![RatExpr::zero(); self.len()];
            for (k, &p) in ap.iter().enumerate() {
                v[p] = b[k].clone();
            }
            out.push(v);
        }
        for c in self.cocharacters() {
            let mut v = vec![RatExpr::zero(); self.len()];
            for (k, &p) in mp.iter().enumerate() {
                v[p] = RatExpr::constant(Q::from_integer(c[k].clone()));
            }
            out.push(v);
        }
        out
    }

    /// The connected subgroup with the given Lie algebra. Fails when the
    /// algebra does not split into additive and multiplicative parts or its
    /// multiplicative part is not defined over the rationals.
    pub fn from_lie(kinds: Vec<CoordKind>, basis: &[Vec<RatExpr>]) -> Result<SplitGroup> {
        let shell = SplitGroup::ambient(kinds.clone());
        let (ap, mp) = (shell.add_positions(), shell.mul_positions());
        let basis = reduce_rows(basis, kinds.len());
        let r = basis.len();
        let cols = |pos: &[usize]| -> Vec<Vec<RatExpr>> {
            basis.iter().map(|row| pos.iter().map(|&p| row[p].clone()).collect()).collect()
        };
        let (b_add, b_mul) = (cols(&ap), cols(&mp));
        let transpose = |m: &[Vec<RatExpr>], ncols: usize| -> Vec<Vec<RatExpr>> {
            (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
        };
        // combinations of basis rows that vanish on the other block
        let add_combos = linalg::kernel(&transpose(&b_mul, mp.len()), r);
        let mul_combos = linalg::kernel(&transpose(&b_add, ap.len()), r);
        if add_combos.len() + mul_combos.len() != r {
            return Err(Error::UnsupportedClass(
                "tangent algebra mixes additive and multiplicative directions".into(),
            ));
        }
        let combine = |combos: &[Vec<RatExpr>], block: &[Vec<RatExpr>], width: usize| {
            combos
                .iter()
                .map(|c| {
                    (0..width)
                        .map(|j| {
                            c.iter()
                                .zip(block.iter())
                                .fold(RatExpr::zero(), |acc, (ci, row)| acc.add(&ci.mul(&row[j])))
                        })
                        .collect::<Vec<RatExpr>>()
                })
                .collect::<Vec<_>>()
        };
        let l_add = combine(&add_combos, &b_add, ap.len());
        let l_mul = reduce_rows(&combine(&mul_combos, &b_mul, mp.len()), mp.len());

        let add_relations = reduce_rows(&linalg::kernel(&l_add, ap.len()), ap.len());
        let mut cochars: IntMatrix = Vec::new();
        for row in &l_mul {
            let mut vals = Vec::new();
            for e in row {
                match e.constant_value() {
                    Some(v) => vals.push(v),
                    None => {
                        return Err(Error::UnsupportedClass(
                            "multiplicative tangent directions are not rational".into(),
                        ))
                    }
                }
            }
            let l = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            cochars.push(vals.iter().map(|v| (v * Q::from_integer(l.clone())).to_integer()).collect());
        }
        let mul_relations = if cochars.is_empty() {
            SplitGroup::trivial(vec![CoordKind::Mul; mp.len()]).mul_relations
        } else {
            linalg::integer_kernel(&cochars, mp.len())
        };
        SplitGroup::new(kinds, add_relations, mul_relations)
    }

    /// Identity component of the image under projection to `coords`.
    pub fn project(&self, coords: &[usize]) -> Result<SplitGroup> {
        let kinds: Vec<CoordKind> = coords.iter().map(|&c| self.kinds[c]).collect();
        let basis: Vec<Vec<RatExpr>> = self
            .lie_basis()
            .iter()
            .map(|v| coords.iter().map(|&c| v[c].clone()).collect())
            .collect();
        SplitGroup::from_lie(kinds, &basis)
    }

    /// Identity component, i.e. the subgroup with saturated relations.
    pub fn identity_component(&self) -> SplitGroup {
        let cochars = self.cocharacters();
        let mul_relations = if cochars.is_empty() {
            SplitGroup::trivial(vec![CoordKind::Mul; self.n_mul()]).mul_relations
        } else {
            linalg::integer_kernel(&cochars, self.n_mul())
        };
        SplitGroup {
            kinds: self.kinds.clone(),
            add_relations: self.add_relations.clone(),
            mul_relations,
        }
    }

    pub fn identity(&self) -> Vec<RatExpr> {
        self.kinds
            .iter()
            .map(|k| match k {
                CoordKind::Add => RatExpr::zero(),
                CoordKind::Mul => RatExpr::one(),
            })
            .collect()
    }

    /// Group law, which is also the action on the ambient affine space.
    pub fn compose(&self, g: &[RatExpr], x: &[RatExpr]) -> Vec<RatExpr> {
        self.kinds
            .iter()
            .zip(g.iter().zip(x.iter()))
            .map(|(k, (a, b))| match k {
                CoordKind::Add => a.add(b),
                CoordKind::Mul => a.mul(b),
            })
            .collect()
    }

    pub fn inverse(&self, g: &[RatExpr]) -> Vec<RatExpr> {
        self.kinds
            .iter()
            .zip(g.iter())
            .map(|(k, a)| match k {
                CoordKind::Add => a.neg(),
                CoordKind::Mul => a.inv(),
            })
            .collect()
    }

    /// The unique `g` with `g * x = y`.
    pub fn solve(&self, x: &[RatExpr], y: &[RatExpr]) -> Result<Vec<RatExpr>> {
        self.kinds
            .iter()
            .zip(x.iter().zip(y.iter()))
            .map(|(k, (a, b))| match k {
                CoordKind::Add => Ok(b.sub(a)),
                CoordKind::Mul => b.checked_div(a),
            })
            .collect()
    }

    /// Membership of a point, checked symbolically.
    pub fn contains(&self, g: &[RatExpr]) -> bool {
        if g.len() != self.len() {
            return false;
        }
        let ga: Vec<&RatExpr> = self.add_positions().into_iter().map(|p| &g[p]).collect();
        let gm: Vec<&RatExpr> = self.mul_positions().into_iter().map(|p| &g[p]).collect();
        if gm.iter().any(|x| x.is_zero()) {
            return false;
        }
        let add_ok = self.add_relations.iter().all(|row| {
            row.iter()
                .zip(ga.iter())
                .fold(RatExpr::zero(), |acc, (c, x)| acc.add(&c.mul(x)))
                .is_zero()
        });
        let mul_ok = self.mul_relations.iter().all(|row| {
            row.iter()
                .zip(gm.iter())
                .fold(RatExpr::one(), |acc, (c, x)| {
                    acc.mul(&x.pow(i64::try_from(c).expect("small exponent")))
                })
                .is_one()
        });
        add_ok && mul_ok
    }

    /// A generic point of the identity component in fresh small-field
    /// parameters; returns the extended context, the point and the
    /// parameter indices.
    pub fn generic_point(
        &self,
        ctx: &TowerContext,
        prefix: &str,
    ) -> (TowerContext, Vec<RatExpr>, Vec<usize>) {
        let basis = self.add_basis();
        let cochars = self.cocharacters();
        let (ctx, params) = ctx.with_fresh(prefix, basis.len() + cochars.len());
        let (lam, mu) = params.split_at(basis.len());
        let mut point = self.identity();
        for (k, &p) in self.add_positions().iter().enumerate() {
            point[p] = basis
                .iter()
                .zip(lam.iter())
                .fold(RatExpr::zero(), |acc, (b, &l)| acc.add(&b[k].mul(&RatExpr::var(l))));
        }
        for (k, &p) in self.mul_positions().iter().enumerate() {
            point[p] = cochars.iter().zip(mu.iter()).fold(RatExpr::one(), |acc, (c, &m)| {
                acc.mul(&RatExpr::var(m).pow(i64::try_from(&c[k]).expect("small exponent")))
            });
        }
        (ctx, point, params)
    }

    /// Display in catalog syntax.
    pub fn describe(&self, ctx: &TowerContext) -> String {
        let full = self.add_relations.is_empty() && self.mul_relations.is_empty();
        let (na, nm) = (self.n_add(), self.n_mul());
        let base = match (na, nm) {
            (0, 0) => "trivial".to_string(),
            (a, 0) => format!("Ga({a})"),
            (0, m) => format!("Gm({m})"),
            _ => {
                let parts: Vec<String> = self
                    .kinds
                    .iter()
                    .map(|k| match k {
                        CoordKind::Add => "Ga(1)".to_string(),
                        CoordKind::Mul => "Gm(1)".to_string(),
                    })
                    .collect();
                format!("product({})", parts.join(", "))
            }
        };
        if full {
            return base;
        }
        let mut rels: Vec<String> = Vec::new();
        for r in &self.add_relations {
            let cells: Vec<String> = r.iter().map(|e| ctx.display(e)).collect();
            rels.push(format!("[{}]", cells.join(", ")));
        }
        for r in &self.mul_relations {
            let cells: Vec<String> = r.iter().map(|e| e.to_string()).collect();
            rels.push(format!("[{}]", cells.join(", ")));
        }
        format!("subgroup({base}, [{}])", rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_matrix;

    #[test]
    fn lattice_dimensions() {
        let g = SplitGroup::new(vec![CoordKind::Mul; 2], vec![], int_matrix(&[vec![1, -1]])).unwrap();
        assert_eq!(g.dim(), 1);
        assert!(g.is_connected());
        let mu2 = SplitGroup::new(vec![CoordKind::Mul], vec![], int_matrix(&[vec![2]])).unwrap();
        assert_eq!(mu2.dim(), 0);
        assert!(!mu2.is_connected());
    }

    #[test]
    fn from_lie_round_trip() {
        let kinds = vec![CoordKind::Add, CoordKind::Mul, CoordKind::Mul];
        let basis = vec![
            vec![RatExpr::int(0), RatExpr::int(1), RatExpr::int(2)],
            vec![RatExpr::int(3), RatExpr::int(0), RatExpr::int(0)],
        ];
        let g = SplitGroup::from_lie(kinds, &basis).unwrap();
        assert_eq!(g.add_dim(), 1);
        assert_eq!(g.mul_dim(), 1);
        assert_eq!(g.mul_relations(), &int_matrix(&[vec![2, -1]]));
    }

    #[test]
    fn mixed_algebra_is_rejected() {
        let kinds = vec![CoordKind::Add, CoordKind::Mul];
        let basis = vec![vec![RatExpr::int(1), RatExpr::int(1)]];
        assert!(matches!(
            SplitGroup::from_lie(kinds, &basis),
            Err(Error::UnsupportedClass(_))
        ));
    }

    #[test]
    fn generic_points_lie_in_the_group() {
        let ctx = TowerContext::new(&["s1"], &["t1"]).unwrap();
        let s1 = ctx.parse("s1").unwrap();
        let g = SplitGroup::new(
            vec![CoordKind::Add, CoordKind::Add, CoordKind::Mul, CoordKind::Mul],
            vec![vec![s1, RatExpr::int(-1)]],
            int_matrix(&[vec![3, -3]]),
        )
        .unwrap();
        assert!(!g.is_connected());
        let (_, p, params) = g.generic_point(&ctx, "_g");
        assert_eq!(params.len(), 2);
        assert!(g.contains(&p));
        assert!(g.contains(&g.identity()));
        assert!(!g.contains(&[RatExpr::int(1), RatExpr::int(1), RatExpr::int(1), RatExpr::int(1)]));
    }

    #[test]
    fn projection_of_a_graph() {
        // graph of squaring in Gm x Gm
        let s = SplitGroup::new(vec![CoordKind::Mul; 2], vec![], int_matrix(&[vec![2, -1]])).unwrap();
        assert_eq!(s.project(&[0]).unwrap().dim(), 1);
        assert_eq!(s.project(&[1]).unwrap().dim(), 1);
    }
}
