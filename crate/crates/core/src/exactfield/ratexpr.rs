use std::collections::{BTreeMap, BTreeSet};

use super::field::{Field, Q};
use super::mono::Mono;
use super::poly::Poly;
use crate::error::{Error, Result};

/// A reduced fraction of polynomials over the rationals. The denominator is
/// monic under grevlex and shares no factor with the numerator; zero is 0/1.
#[derive(Clone, PartialEq, Debug)]
pub struct RatExpr {
    num: Poly<Q>,
    den: Poly<Q>,
}

impl RatExpr {
    pub fn normalize(num: Poly<Q>, den: Poly<Q>) -> Result<RatExpr> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatExpr::zero_expr());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            return Ok(RatExpr { num, den });
        }
        let inv = lc.inv();
        Ok(RatExpr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    fn zero_expr() -> RatExpr {
        RatExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly<Q>) -> RatExpr {
        RatExpr {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Q) -> RatExpr {
        RatExpr::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> RatExpr {
        RatExpr::constant(Q::from_int(n))
    }

    pub fn var(index: usize) -> RatExpr {
        RatExpr::from_poly(Poly::var(index))
    }

    pub fn numer(&self) -> &Poly<Q> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Q> {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if !self.is_constant() {
            return None;
        }
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.degree_in(var) > 0 || self.den.degree_in(var) > 0
    }

    pub fn pow(&self, e: i64) -> RatExpr {
        if e >= 0 {
            let e = e as u32;
            RatExpr::normalize(self.num.pow(e), self.den.pow(e)).expect("nonzero denominator")
        } else {
            self.inv().pow(-e)
        }
    }

    pub fn checked_inv(&self) -> Result<RatExpr> {
        RatExpr::normalize(self.den.clone(), self.num.clone())
    }

    /// Quotient-rule derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> RatExpr {
        let dn = self.num.derivative(var);
        if self.den.is_constant() {
            return RatExpr::normalize(dn, self.den.clone()).expect("nonzero denominator");
        }
        let dd = self.den.derivative(var);
        let top = dn.mul(&self.den).sub(&self.num.mul(&dd));
        RatExpr::normalize(top, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Exact evaluation at a rational point.
    pub fn specialize(&self, assignment: &BTreeMap<usize, Q>) -> Result<Q> {
        let lookup = |v: usize| assignment.get(&v).cloned();
        let n = self
            .num
            .eval(&lookup)
            .ok_or_else(|| Error::InvalidInput("assignment does not cover all variables".into()))?;
        let d = self
            .den
            .eval(&lookup)
            .ok_or_else(|| Error::InvalidInput("assignment does not cover all variables".into()))?;
        if Field::is_zero(&d) {
            return Err(Error::PoleAtPoint);
        }
        Ok(n / d)
    }

    /// Replaces variables by rational functions.
    pub fn substitute(&self, map: &BTreeMap<usize, RatExpr>) -> Result<RatExpr> {
        if self.vars().iter().all(|v| !map.contains_key(v)) {
            return Ok(self.clone());
        }
        let n = substitute_poly(&self.num, map)?;
        let d = substitute_poly(&self.den, map)?;
        n.checked_div(&d)
    }

    pub fn checked_div(&self, other: &RatExpr) -> Result<RatExpr> {
        if other.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.mul(&other.inv()))
    }

    pub fn remap(&self, map: &[usize]) -> RatExpr {
        RatExpr::normalize(self.num.remap(map), self.den.remap(map)).expect("nonzero denominator")
    }
}

pub fn substitute_poly(p: &Poly<Q>, map: &BTreeMap<usize, RatExpr>) -> Result<RatExpr> {
    let mut acc = RatExpr::zero();
    let mut powers: BTreeMap<(usize, u32), RatExpr> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut fixed = Mono::one();
        let mut t = RatExpr::constant(c.clone());
        for v in m.vars() {
            let e = m.exp(v);
            match map.get(&v) {
                Some(val) => {
                    let pw = powers
                        .entry((v, e))
                        .or_insert_with(|| val.pow(e as i64))
                        .clone();
                    t = t.mul(&pw);
                }
                None => fixed = fixed.mul(&Mono::var_pow(v, e)),
            }
        }
        if !fixed.is_one() {
            t = t.mul(&RatExpr::from_poly(Poly::monomial(fixed, Q::from_int(1))));
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

impl Field for RatExpr {
    fn zero() -> Self {
        RatExpr::zero_expr()
    }
    fn one() -> Self {
        RatExpr::int(1)
    }
    fn from_int(n: i64) -> Self {
        RatExpr::int(n)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == self.den
    }
    fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return RatExpr::normalize(self.num.add(&other.num), self.den.clone())
                .expect("nonzero denominator");
        }
        let n = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatExpr::normalize(n, self.den.mul(&other.den)).expect("nonzero denominator")
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RatExpr::zero_expr();
        }
        if self.den.is_constant() && other.den.is_constant() {
            return RatExpr::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
                .expect("nonzero denominator");
        }
        // cross-cancel before multiplying to keep intermediate sizes down
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).expect("divides");
        let d2 = other.den.exact_div(&g1).expect("divides");
        let n2 = other.num.exact_div(&g2).expect("divides");
        let d1 = self.den.exact_div(&g2).expect("divides");
        RatExpr::normalize(n1.mul(&n2), d1.mul(&d2)).expect("nonzero denominator")
    }
    fn neg(&self) -> Self {
        RatExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero")
    }
    fn is_rational_constant(&self) -> bool {
        self.is_constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::field::q;

    fn t(i: usize) -> Poly<Q> {
        Poly::var(i)
    }

    #[test]
    fn unit_cancellation() {
        let r = RatExpr::normalize(t(0).scale(&q(2)), Poly::constant(q(2))).unwrap();
        assert_eq!(r, RatExpr::var(0));
    }

    #[test]
    fn common_factor_cancels() {
        let num = t(0).mul(&t(0)).sub(&Poly::one());
        let den = t(0).sub(&Poly::one());
        let r = RatExpr::normalize(num, den).unwrap();
        assert_eq!(r.numer(), &t(0).add(&Poly::one()));
        assert_eq!(r.denom(), &Poly::one());
    }

    #[test]
    fn zero_normal_form() {
        let r = RatExpr::normalize(Poly::zero(), t(0)).unwrap();
        assert_eq!(r.denom(), &Poly::one());
        assert!(r.numer().is_zero());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RatExpr::normalize(t(0), Poly::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn denominator_is_monic() {
        let r = RatExpr::normalize(Poly::one(), t(0).scale(&q(-3))).unwrap();
        assert!(r.denom().leading_coeff().is_one());
        assert_eq!(r.numer(), &Poly::constant(q_frac(-1, 3)));
    }

    use crate::exactfield::field::q_frac;
}
