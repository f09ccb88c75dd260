//! Exact arithmetic in the rational function field generated by the tower's
//! variables: polynomials, reduced fractions, formal derivatives and
//! specialization at rational points.

mod context;
mod field;
mod mono;
mod poly;
mod ratexpr;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use context::{TowerContext, VarInfo, VarKind};
pub use field::{format_q, q, q_frac, Field, Q};
pub use mono::Mono;
pub use poly::Poly;
pub use ratexpr::{substitute_poly, RatExpr};

use crate::error::{Error, Result};

/// Half-width of the integer box random specializations are drawn from.
pub const SPECIALIZATION_BOUND: i64 = 10_000;

pub fn normalize(num: Poly<Q>, den: Poly<Q>) -> Result<RatExpr> {
    RatExpr::normalize(num, den)
}

pub fn partial_derivative(ctx: &TowerContext, f: &RatExpr, var: usize) -> Result<RatExpr> {
    if var >= ctx.len() {
        return Err(Error::UnknownVariable(format!("#{var}")));
    }
    Ok(f.derivative(var))
}

pub fn specialize(f: &RatExpr, assignment: &BTreeMap<usize, Q>) -> Result<Q> {
    f.specialize(assignment)
}

/// Draws a point with integer coordinates in `[-B, B]` for the given variables.
pub fn random_point(vars: &[usize], rng: &mut ChaCha8Rng) -> BTreeMap<usize, Q> {
    vars.iter()
        .map(|&v| (v, q(rng.gen_range(-SPECIALIZATION_BOUND..=SPECIALIZATION_BOUND))))
        .collect()
}

/// Evaluates `f` at a seeded random point over all of its variables,
/// resampling up to five times on poles.
pub fn specialize_random(f: &RatExpr, seed: u64) -> Result<Q> {
    let vars: Vec<usize> = f.vars().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..5 {
        let pt = random_point(&vars, &mut rng);
        match f.specialize(&pt) {
            Err(Error::PoleAtPoint) => continue,
            other => return other,
        }
    }
    Err(Error::PoleAtPoint)
}
