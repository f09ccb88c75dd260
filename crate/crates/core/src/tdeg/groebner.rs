//! Buchberger's algorithm with the product and chain criteria, generic over
//! the coefficient field, with a reduction-step budget.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactfield::{Field, Mono, Poly};

/// Monomial orders used by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOrder {
    Grevlex,
    /// Variables `0..k` form a block that dominates the rest; grevlex inside
    /// each block.
    Block(usize),
}

fn grevlex_range(a: &Mono, b: &Mono, lo: usize, hi: usize) -> Ordering {
    let da: u32 = (lo..hi).map(|i| a.exp(i)).sum();
    let db: u32 = (lo..hi).map(|i| b.exp(i)).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (lo..hi).rev() {
        let (x, y) = (a.exp(i), b.exp(i));
        if x != y {
            return y.cmp(&x);
        }
    }
    Ordering::Equal
}

impl TermOrder {
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match *self {
            TermOrder::Grevlex => a.cmp(b),
            TermOrder::Block(k) => {
                let n = a.len().max(b.len()).max(k);
                match grevlex_range(a, b, 0, k) {
                    Ordering::Equal => grevlex_range(a, b, k, n),
                    o => o,
                }
            }
        }
    }
}

/// Counts reduction steps and fails once the limit is crossed.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: usize,
    used: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Budget {
        Budget { limit, used: 0 }
    }

    pub fn used(&self) -> usize {
        self.used
    }

    fn step(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::ResourceLimit { budget: self.limit });
        }
        Ok(())
    }
}

/// Polynomial stored as terms sorted in descending order for a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedPoly<F: Field> {
    terms: Vec<(Mono, F)>,
}

impl<F: Field> OrderedPoly<F> {
    pub fn from_poly(p: &Poly<F>, order: TermOrder) -> Self {
        let mut terms: Vec<(Mono, F)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        OrderedPoly { terms }
    }

    pub fn to_poly(&self) -> Poly<F> {
        Poly::from_terms(self.terms.iter().cloned())
    }

    pub fn terms(&self) -> &[(Mono, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &F {
        &self.terms[0].1
    }

    pub fn monic(mut self) -> Self {
        if let Some((_, c)) = self.terms.first() {
            if !c.is_one() {
                let inv = c.inv();
                for t in self.terms.iter_mut() {
                    t.1 = t.1.mul(&inv);
                }
            }
        }
        self
    }

    /// `self - c * m * g`, merging sorted term lists.
    fn sub_mul(&self, c: &F, m: &Mono, g: &OrderedPoly<F>, order: TermOrder) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(Mono, F)> = g.terms.iter().map(|(gm, gc)| (gm.mul(m), gc.mul(c))).collect();
        while i < self.terms.len() || j < shifted.len() {
            if j == shifted.len() {
                out.push(self.terms[i].clone());
                i += 1;
                continue;
            }
            if i == self.terms.len() {
                out.push((shifted[j].0.clone(), shifted[j].1.neg()));
                j += 1;
                continue;
            }
            match order.cmp(&self.terms[i].0, &shifted[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted[j].0.clone(), shifted[j].1.neg()));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = self.terms[i].1.sub(&shifted[j].1);
                    if !v.is_zero() {
                        out.push((self.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        OrderedPoly { terms: out }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }
}

/// Full reduction of `p` modulo `basis`.
pub fn reduce<F: Field>(
    p: &OrderedPoly<F>,
    basis: &[OrderedPoly<F>],
    order: TermOrder,
    budget: &mut Budget,
) -> Result<OrderedPoly<F>> {
    let mut done: Vec<(Mono, F)> = Vec::new();
    let mut rest = p.clone();
    while let Some((m, c)) = rest.terms.first().cloned() {
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                budget.step()?;
                let q = g.lm().quotient_of(&m);
                let k = c.div(g.lc());
                rest = rest.sub_mul(&k, &q, g, order);
            }
            None => {
                done.push((m, c));
                rest.terms.remove(0);
            }
        }
    }
    Ok(OrderedPoly { terms: done })
}

fn s_poly<F: Field>(
    f: &OrderedPoly<F>,
    g: &OrderedPoly<F>,
    order: TermOrder,
) -> OrderedPoly<F> {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l);
    let mg = g.lm().quotient_of(&l);
    let a = OrderedPoly { terms: vec![] }.sub_mul(&f.lc().inv().neg(), &mf, f, order);
    a.sub_mul(&g.lc().inv(), &mg, g, order)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner<F: Field>(
    gens: &[Poly<F>],
    order: TermOrder,
    budget: &mut Budget,
) -> Result<Vec<OrderedPoly<F>>> {
    let mut basis: Vec<OrderedPoly<F>> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let mut inputs: Vec<OrderedPoly<F>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| OrderedPoly::from_poly(g, order))
        .collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for g in inputs {
        let r = reduce(&g, &basis, order, budget)?;
        if !r.is_zero() {
            add_to_basis(&mut basis, &mut pending, r.monic());
        }
    }

    while let Some(&(i, j)) = pending
        .iter()
        .min_by(|a, b| {
            let la = basis[a.0].lm().lcm(basis[a.1].lm());
            let lb = basis[b.0].lm().lcm(basis[b.1].lm());
            la.degree()
                .cmp(&lb.degree())
                .then_with(|| order.cmp(&la, &lb))
                .then_with(|| a.cmp(b))
        })
    {
        pending.remove(&(i, j));
        let (fi, fj) = (&basis[i], &basis[j]);
        if fi.lm().is_coprime(fj.lm()) {
            continue;
        }
        let l = fi.lm().lcm(fj.lm());
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_poly(fi, fj, order);
        let r = reduce(&s, &basis, order, budget)?;
        if !r.is_zero() {
            add_to_basis(&mut basis, &mut pending, r.monic());
        }
    }
    interreduce(basis, order, budget)
}

fn add_to_basis<F: Field>(
    basis: &mut Vec<OrderedPoly<F>>,
    pending: &mut BTreeSet<(usize, usize)>,
    p: OrderedPoly<F>,
) {
    let n = basis.len();
    for i in 0..n {
        pending.insert((i, n));
    }
    basis.push(p);
}

/// Minimizes and tail-reduces a Gröbner basis into the reduced one.
pub fn interreduce<F: Field>(
    basis: Vec<OrderedPoly<F>>,
    order: TermOrder,
    budget: &mut Budget,
) -> Result<Vec<OrderedPoly<F>>> {
    let mut minimal: Vec<OrderedPoly<F>> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            minimal.push(g.clone().monic());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let head = minimal[i].terms[0].clone();
        let tail = OrderedPoly {
            terms: minimal[i].terms[1..].to_vec(),
        };
        let others: Vec<OrderedPoly<F>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let red = reduce(&tail, &others, order, budget)?;
        let mut terms = vec![head];
        terms.extend(red.terms);
        out.push(OrderedPoly { terms });
    }
    out.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    Ok(out)
}

/// Krull dimension of the ideal with the given leading monomials, in the
/// polynomial ring over `vars`; `None` for the unit ideal.
pub fn krull_dimension(lms: &[Mono], vars: &[usize]) -> Option<usize> {
    if lms.iter().any(Mono::is_one) {
        return None;
    }
    let n = vars.len();
    assert!(n < 24, "too many variables for subset enumeration");
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let independent = lms.iter().all(|m| {
            m.vars().any(|v| match vars.iter().position(|&x| x == v) {
                Some(k) => mask & (1 << k) == 0,
                None => true,
            })
        });
        if independent {
            best = size;
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{q, Q};

    fn x(i: usize) -> Poly<Q> {
        Poly::var(i)
    }

    #[test]
    fn block_order_eliminates() {
        // t = x0; y1 = t^2, y2 = t^3  => y1^3 - y2^2 in the elimination ideal
        let gens = vec![x(1).sub(&x(0).pow(2)), x(2).sub(&x(0).pow(3))];
        let mut b = Budget::new(100_000);
        let gb = groebner(&gens, TermOrder::Block(1), &mut b).unwrap();
        let elim: Vec<_> = gb.iter().filter(|g| g.vars().iter().all(|&v| v >= 1)).collect();
        assert_eq!(elim.len(), 1);
        let expected = x(1).pow(3).sub(&x(2).pow(2));
        let got = elim[0].to_poly();
        assert!(got == expected || got == expected.neg());
    }

    #[test]
    fn reduced_basis_of_unit_ideal() {
        let gens = vec![x(0), x(0).sub(&Poly::constant(q(1)))];
        let mut b = Budget::new(1000);
        let gb = groebner(&gens, TermOrder::Grevlex, &mut b).unwrap();
        assert_eq!(gb.len(), 1);
        assert!(gb[0].lm().is_one());
    }

    #[test]
    fn budget_is_enforced() {
        // cyclic-3
        let gens = vec![
            x(0).add(&x(1)).add(&x(2)),
            x(0).mul(&x(1)).add(&x(1).mul(&x(2))).add(&x(2).mul(&x(0))),
            x(0).mul(&x(1)).mul(&x(2)).sub(&Poly::one()),
        ];
        let mut b = Budget::new(100_000);
        assert!(groebner(&gens, TermOrder::Grevlex, &mut b).is_ok());
        assert!(b.used() > 2);
        let mut b = Budget::new(2);
        assert!(matches!(
            groebner(&gens, TermOrder::Grevlex, &mut b),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn krull_dimension_examples() {
        // ideal (x0*x1) in k[x0,x1,x2] has dimension 2
        let lms = vec![Mono::var(0).mul(&Mono::var(1))];
        assert_eq!(krull_dimension(&lms, &[0, 1, 2]), Some(2));
        assert_eq!(krull_dimension(&[], &[0, 1]), Some(2));
        assert_eq!(krull_dimension(&[Mono::one()], &[0]), None);
    }
}
