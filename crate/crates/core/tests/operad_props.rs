use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tw_core::random::random_tw;
use tw_core::simplicial::MonotoneMap;
use tw_core::tw::{connect_vertices, enumerate_tw, operad_compose, tau, TwSimplex};

fn op(rng: &mut ChaCha8Rng, n: usize, k: usize) -> TwSimplex {
    TwSimplex::operation(n, random_tw(rng, n, k, true)).unwrap()
}

#[test]
fn composition_is_unital() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..200 {
        let k = i % 3;
        let n = 1 + i % 4;
        let phi = op(&mut rng, n, k);
        let id = TwSimplex::identity(k);
        let left = operad_compose(&id, std::slice::from_ref(&phi)).unwrap();
        let right = operad_compose(&phi, &vec![id.clone(); n]).unwrap();
        assert!(left.equals(&phi));
        assert!(right.equals(&phi));
    }
}

#[test]
fn composition_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for i in 0..200 {
        let k = i % 2;
        let n = 1 + rng.gen_range(0..3);
        let phi = op(&mut rng, n, k);
        let psis: Vec<TwSimplex> = (0..n).map(|_| {
            let a = rng.gen_range(0..3);
            op(&mut rng, a, k)
        }).collect();
        let total: usize = psis.iter().map(|p| p.arity()).sum();
        let chis: Vec<TwSimplex> = (0..total).map(|_| {
            let a = rng.gen_range(0..3);
            op(&mut rng, a, k)
        }).collect();
        let lhs = operad_compose(&operad_compose(&phi, &psis).unwrap(), &chis).unwrap();
        let mut inner = Vec::new();
        let mut at = 0;
        for p in &psis {
            inner.push(operad_compose(p, &chis[at..at + p.arity()]).unwrap());
            at += p.arity();
        }
        let rhs = operad_compose(&phi, &inner).unwrap();
        assert!(lhs.equals(&rhs), "sample {i}");
    }
}

#[test]
fn composition_is_simplicial() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for i in 0..100 {
        let k = 1 + i % 2;
        let phi = op(&mut rng, 2, k);
        let psis = [op(&mut rng, 1 + i % 2, k), op(&mut rng, 2, k)];
        let g = operad_compose(&phi, &psis).unwrap();
        for j in 0..=k + 1 {
            for alpha in MonotoneMap::all(j, k) {
                let act = |x: &TwSimplex| TwSimplex::new(x.arity(), 1, alpha.act(x.diagram()).unwrap()).unwrap();
                let lhs = act(&g);
                let ps: Vec<TwSimplex> = psis.iter().map(act).collect();
                let rhs = operad_compose(&act(&phi), &ps).unwrap();
                assert!(lhs.equals(&rhs));
            }
        }
    }
}

fn catalan(n: usize) -> usize {
    (0..n).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

#[test]
fn vertices_are_bracketings() {
    for n in 2..=4 {
        let e = enumerate_tw(n, 0, 2 * n);
        assert!(e.complete);
        assert_eq!(e.classes.len(), catalan(n - 1), "n = {n}");
        let vs: Vec<_> = e.classes.iter().map(|c| c.diagram().clone()).collect();
        assert_eq!(connect_vertices(n, &vs).unwrap().components, 1);
    }
}

#[test]
fn low_arities_are_contractible_sets() {
    for k in 0..=3 {
        for n in 0..=1 {
            let e = enumerate_tw(n, k, 8);
            assert_eq!(e.classes.len(), 1, "TW({n})_{k}");
        }
    }
}

#[test]
fn tau_composes_to_tau() {
    for n in 2..=4 {
        let t = tau(n).unwrap();
        let two = tau(2).unwrap();
        let id = TwSimplex::identity(0);
        let mut args = vec![id; n];
        args[n - 1] = two.clone();
        let bigger = operad_compose(&t, &args).unwrap();
        assert_eq!(bigger.arity(), n + 1);
        assert!(bigger.equals(&tau(n + 1).unwrap()));
    }
}
