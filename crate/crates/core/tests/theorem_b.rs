use pairrank::forking::fuzz::{fuzz_context, random_triple};
use pairrank::forking::{rank_drop, star_conditions, theoremB_check};
use pairrank::imaginaries::GeomRank;
use pairrank::tdeg::TdEngine;
use pairrank::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn rank_drop_vanishes_exactly_on_independence() {
    let ctx = fuzz_context();
    let engine = TdEngine::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut indep, mut skipped) = (0, 0, 0);
    while checked < 80 {
        let (e1, e2, e3) = random_triple(&ctx, &mut rng, 3, &engine).unwrap();
        match theoremB_check(&ctx, &e1, &e2, &e3, &engine) {
            Ok(r) => {
                assert!(r.agree, "{r:?}\n{e1:?}\n{e2:?}\n{e3:?}");
                assert!(r.drop >= GeomRank::ZERO);
                indep += r.indep as usize;
                checked += 1;
            }
            Err(Error::UnsupportedClass(_)) => skipped += 1,
            Err(e) => panic!("{e}"),
        }
    }
    assert!(indep > 10 && indep < 70, "{indep} independent");
    assert!(skipped < 8);
}

#[test]
fn independence_is_symmetric() {
    let ctx = fuzz_context();
    let engine = TdEngine::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let (e1, e2, e3) = random_triple(&ctx, &mut rng, 2, &engine).unwrap();
        let (Ok(l), Ok(r)) = (
            star_conditions(&ctx, &e1, &e2, &e3, &engine),
            star_conditions(&ctx, &e3, &e2, &e1, &engine),
        ) else {
            continue;
        };
        assert_eq!(l.independent(), r.independent());
        let zero = rank_drop(&ctx, &e3, &e2, &e1, &engine).unwrap() == GeomRank::ZERO;
        assert_eq!(zero, r.independent());
        checked += 1;
    }
}
