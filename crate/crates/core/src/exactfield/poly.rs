use std::collections::{BTreeMap, BTreeSet};

use super::field::Field;
use super::mono::Mono;

/// Sparse multivariate polynomial with terms keyed by grevlex monomials.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    terms: BTreeMap<Mono, F>,
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::monomial(Mono::one(), c)
    }

    pub fn var(index: usize) -> Self {
        Poly::monomial(Mono::var(index), F::one())
    }

    pub fn monomial(m: Mono, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, F)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_zero() {
            return Some(F::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> Option<(&Mono, &F)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> F {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(F::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.vars().last())
            .max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.mul(c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let (rest, _) = m.split_var(var);
            let nm = rest.mul(&Mono::var_pow(var, e - 1));
            out.add_term(nm, c.mul(&F::from_int(e as i64)));
        }
        out
    }

    /// Coefficients of `self` viewed as a polynomial in `var`, indexed by degree.
    pub fn to_univariate(&self, var: usize) -> Vec<Poly<F>> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_var(var);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_univariate(var: usize, coeffs: &[Poly<F>]) -> Self {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let vm = Mono::var_pow(var, e as u32);
            for (m, a) in &c.terms {
                out.add_term(m.mul(&vm), a.clone());
            }
        }
        out
    }

    pub fn coeff_in(&self, var: usize, degree: u32) -> Poly<F> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(var) == degree {
                out.add_term(m.split_var(var).0, c.clone());
            }
        }
        out
    }

    /// Evaluates at a total assignment; returns `None` if a variable is missing.
    pub fn eval(&self, value: &dyn Fn(usize) -> Option<F>) -> Option<F> {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in m.vars() {
                let x = value(v)?;
                for _ in 0..m.exp(v) {
                    t = t.mul(&x);
                }
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }

    pub fn remap(&self, map: &[usize]) -> Self {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.remap(map), c.clone())))
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let dc_inv = dc.inv();
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&m) {
                return None;
            }
            let tm = dm.quotient_of(&m);
            let tc = c.mul(&dc_inv);
            r = r.sub(&d.mul_term(&tm, &tc));
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `b` with respect to `var`.
    pub fn pseudo_rem(&self, b: &Self, var: usize) -> Self {
        let db = b.degree_in(var);
        let lcb = b.coeff_in(var, db);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= db {
            let dr = r.degree_in(var);
            let lcr = r.coeff_in(var, dr);
            let shift = Poly::monomial(Mono::var_pow(var, dr - db), F::one());
            r = r.mul(&lcb).sub(&lcr.mul(&shift).mul(b));
        }
        r
    }

    /// Greatest common divisor, normalized to be monic (grevlex).
    pub fn gcd(&self, other: &Self) -> Self {
        gcd_rec(self, other).monic()
    }
}

fn content_in<F: Field>(p: &Poly<F>, var: usize) -> Poly<F> {
    let mut g = Poly::zero();
    for c in p.to_univariate(var) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c);
        if g.is_constant() && !g.is_zero() {
            return Poly::one();
        }
    }
    g
}

fn primitive_part<F: Field>(p: &Poly<F>, var: usize) -> Poly<F> {
    let c = content_in(p, var);
    p.exact_div(&c).expect("content divides polynomial")
}

fn gcd_rec<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let v = a.max_var().max(b.max_var()).expect("non-constant");
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 {
        return gcd_rec(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd_rec(&content_in(a, v), b);
    }
    let c = gcd_rec(&content_in(a, v), &content_in(b, v));
    let (mut p, mut r) = (primitive_part(a, v), primitive_part(b, v));
    if p.degree_in(v) < r.degree_in(v) {
        std::mem::swap(&mut p, &mut r);
    }
    loop {
        let rem = p.pseudo_rem(&r, v);
        if rem.is_zero() {
            break;
        }
        if rem.degree_in(v) == 0 {
            r = Poly::one();
            break;
        }
        p = r;
        r = primitive_part(&rem, v);
    }
    primitive_part(&r, v).mul(&c).monic()
}
