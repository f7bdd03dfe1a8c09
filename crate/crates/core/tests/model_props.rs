use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tw_core::diagram::Diagram;
use tw_core::model::semantics::phi_eval;
use tw_core::model::{AlgebraBackend, Convention, FreeModuleBackend, MonoidWithTwist};
use tw_core::random::random_diagram;
use tw_core::rewrite::{apply_redex, canonicalize, expand_slide, expand_unit, interchange, interchange_positions, redexes};

/// An equal diagram reached through a few random moves.
fn scramble(rng: &mut ChaCha8Rng, d: &Diagram) -> Diagram {
    let mut cur = d.clone();
    for _ in 0..4 {
        let mut options = Vec::new();
        options.extend(interchange_positions(&cur).into_iter().filter_map(|i| interchange(&cur, i)));
        options.extend(redexes(&cur).into_iter().map(|r| apply_redex(&cur, r)));
        if cur.len() < 8 {
            for (c, obj) in cur.cuts().iter().enumerate() {
                for w in 0..obj.len() {
                    options.extend(expand_unit(&cur, c, w, rng.gen_bool(0.5)));
                }
            }
            for i in 0..cur.len() {
                options.extend(expand_slide(&cur, i));
            }
        }
        if options.is_empty() {
            break;
        }
        cur = options.swap_remove(rng.gen_range(0..options.len()));
    }
    cur
}

fn respects_equality<B: MonoidWithTwist>(b: &B, seed: u64, pairs: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < pairs {
        let k = rng.gen_range(0..3);
        let d = random_diagram(&mut rng, k, 6);
        let e = scramble(&mut rng, &d);
        assert_eq!(canonicalize(&d), canonicalize(&e));
        let (Ok(x), Ok(y)) = (phi_eval(b, &d), phi_eval(b, &e)) else { continue };
        assert!(b.compare(&x, &y).is_equal(), "{d:?}\n{e:?}");
        done += 1;
    }
}

#[test]
fn phi_respects_equality_on_algebras() {
    respects_equality(&AlgebraBackend::dual_numbers_f2(), 41, 200);
    respects_equality(&AlgebraBackend::diagonal_f3(), 42, 200);
}

#[test]
fn phi_respects_equality_on_free_modules() {
    let b = FreeModuleBackend::new(2, 1, Convention::Nested).unwrap().with_sampling(200, 43).with_exhaustive_limit(256);
    respects_equality(&b, 43, 200);
}

#[test]
fn phi_separates_some_unequal_maps() {
    // the swap is not the identity, and the product is not commutative
    let b = AlgebraBackend::upper_triangular_f2(tw_core::model::TwistKind::Swap);
    let t = b.twist();
    let id = b.identity(2);
    assert!(!b.compare(&t, &id).is_equal());
    let comm = b.compose(&t, &b.multiplication());
    assert!(!b.compare(&comm, &b.multiplication()).is_equal());
}
