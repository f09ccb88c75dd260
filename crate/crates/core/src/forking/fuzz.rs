//! Random catalog imaginaries for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactfield::{RatExpr, TowerContext};
use crate::galgebra::{CoordKind, SplitGroup};
use crate::imaginaries::{pillay_form, validate_pillay, CatalogTorsor, PillayImaginary};
use crate::tdeg::TdEngine;

const MAX_ATTEMPTS: usize = 64;

/// Context used by the generators.
pub fn fuzz_context() -> TowerContext {
    TowerContext::new(&["s1", "s2"], &["t1", "t2", "t3"]).expect("fixed names")
}

/// A sparse expression over the context: mostly single big variables with
/// small coefficients and shifts, occasionally products.
pub fn random_expr<R: Rng>(ctx: &TowerContext, rng: &mut R, nonzero: bool) -> RatExpr {
    let bigs = ["t1", "t2", "t3"];
    let smalls = ["s1", "s2"];
    let t = *bigs.choose(rng).unwrap();
    let t2 = *bigs.choose(rng).unwrap();
    let s = *smalls.choose(rng).unwrap();
    let c = rng.gen_range(1..=3);
    let src = match rng.gen_range(0..10) {
        0..=2 => t.to_string(),
        3 => format!("{s}*{t}"),
        4 => format!("{t} + {s}"),
        5 => format!("{c}*{t}"),
        6 => format!("{t}*{t2}"),
        7 => format!("{t}^2"),
        8 if !nonzero => s.to_string(),
        8 => format!("{s} + 1"),
        _ => format!("{t} + {c}"),
    };
    ctx.parse(&src).expect("generated expression parses")
}

/// A Pillay-form catalog imaginary of group dimension at most `max_dim`,
/// obtained by normalizing a random coset; resamples when no normal form is
/// found.
pub fn random_imaginary<R: Rng>(
    ctx: &TowerContext,
    rng: &mut R,
    max_dim: usize,
    engine: &TdEngine,
) -> Result<PillayImaginary> {
    for _ in 0..MAX_ATTEMPTS {
        let n = rng.gen_range(1..=max_dim);
        let kinds: Vec<CoordKind> = match rng.gen_range(0..3) {
            0 => vec![CoordKind::Add; n],
            1 => vec![CoordKind::Mul; n],
            _ => (0..n).map(|_| if rng.gen_bool(0.5) { CoordKind::Add } else { CoordKind::Mul }).collect(),
        };
        let witness: Vec<RatExpr> = kinds
            .iter()
            .map(|k| random_expr(ctx, rng, *k == CoordKind::Mul))
            .collect();
        let torsor = CatalogTorsor::new(ctx, SplitGroup::ambient(kinds), witness)?;
        let form = match pillay_form(ctx, &torsor, engine) {
            Ok(f) => f,
            Err(Error::UnsupportedClass(_)) | Err(Error::ResourceLimit { .. }) => continue,
            Err(e) => return Err(e),
        };
        let im = PillayImaginary::from_form(&form);
        if validate_pillay(ctx, &im, engine).passed() {
            return Ok(im);
        }
    }
    Err(Error::UnsupportedClass("generator found no Pillay imaginary".into()))
}

pub fn empty_imaginary() -> PillayImaginary {
    PillayImaginary::catalog(vec![], None, &SplitGroup::trivial(vec![]), vec![])
}

/// A triple of imaginaries; the middle one is sometimes empty and the outer
/// ones sometimes coincide, so that both forking and non-forking cases occur.
pub fn random_triple<R: Rng>(
    ctx: &TowerContext,
    rng: &mut R,
    max_dim: usize,
    engine: &TdEngine,
) -> Result<(PillayImaginary, PillayImaginary, PillayImaginary)> {
    let e1 = random_imaginary(ctx, rng, max_dim, engine)?;
    let e2 = if rng.gen_bool(0.2) {
        empty_imaginary()
    } else {
        random_imaginary(ctx, rng, max_dim, engine)?
    };
    let e3 = if rng.gen_bool(0.1) {
        e1.clone()
    } else {
        random_imaginary(ctx, rng, max_dim, engine)?
    };
    Ok((e1, e2, e3))
}
