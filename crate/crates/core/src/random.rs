//! Seeded random diagrams for property tests and sampled sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{Diagram, Generator, Label, ObjWord};

/// Widest object a random walk may create.
pub const MAX_RANDOM_WIDTH: usize = 6;

fn legal_moves(cur: &[Label], k: usize, emerge: bool) -> [Vec<(Generator, usize)>; 3] {
    let mut emerges = Vec::new();
    if emerge && cur.len() < MAX_RANDOM_WIDTH {
        for o in 0..=cur.len() {
            for a in 0..=k as u32 {
                emerges.push((Generator::emerge(a), o));
            }
        }
    }
    let mut joins = Vec::new();
    let mut crosses = Vec::new();
    for o in 0..cur.len().saturating_sub(1) {
        let (a, b) = (cur[o], cur[o + 1]);
        if a == b {
            joins.push((Generator::Join(a), o));
        } else if a > b {
            crosses.push((Generator::Cross(a, b), o));
        }
    }
    [emerges, joins, crosses]
}

fn apply(cur: &mut Vec<Label>, (g, o): (Generator, usize)) {
    let (inp, _) = g.arity();
    cur.splice(o..o + inp, g.codomain().labels().iter().copied());
}

/// A random valid diagram in `B_k` with a source of at most three strands
/// and at most `max_gens` generators.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, k: usize, max_gens: usize) -> Diagram {
    let len = rng.gen_range(0..=3);
    let src: Vec<u32> = (0..len).map(|_| rng.gen_range(0..=k as u32)).collect();
    random_diagram_from(rng, k, ObjWord::from_values(&src), max_gens)
}

/// Like [`random_diagram`], from a fixed source.
pub fn random_diagram_from<R: Rng + ?Sized>(rng: &mut R, k: usize, src: ObjWord, max_gens: usize) -> Diagram {
    let steps = rng.gen_range(0..=max_gens);
    let mut cur = src.labels().to_vec();
    let mut placements = Vec::with_capacity(steps);
    for _ in 0..steps {
        let moves = legal_moves(&cur, k, true);
        let kinds: Vec<&Vec<(Generator, usize)>> = moves.iter().filter(|m| !m.is_empty()).collect();
        let Some(kind) = kinds.choose(rng) else { break };
        let mv = *kind.choose(rng).expect("non-empty");
        apply(&mut cur, mv);
        placements.push(mv);
    }
    Diagram::from_placements(k, src, &placements).expect("random moves are legal")
}

/// Finishes a walk at `[k]`: sort by crossings, merge equal neighbours,
/// then insert whatever colours are missing.
fn complete_to_standard(cur: &mut Vec<Label>, k: usize, placements: &mut Vec<(Generator, usize)>) {
    loop {
        let moves = legal_moves(cur, k, false);
        let Some(mv) = moves[2].first().or(moves[1].first()).copied() else { break };
        apply(cur, mv);
        placements.push(mv);
    }
    for a in 0..=k as u32 {
        let l = Label(a);
        if !cur.contains(&l) {
            let o = cur.iter().position(|&x| x > l).unwrap_or(cur.len());
            apply(cur, (Generator::Emerge(l), o));
            placements.push((Generator::Emerge(l), o));
        }
    }
}

/// A random element of `Hom([k]^n, [k])`. With `noise`, the walk also
/// inserts emerges along the way.
pub fn random_tw<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, noise: bool) -> Diagram {
    let src = ObjWord::standard_power(k, n);
    let mut cur = src.labels().to_vec();
    let mut placements = Vec::new();
    if n == 0 {
        let mut order: Vec<u32> = (0..=k as u32).collect();
        order.shuffle(rng);
        for a in order {
            let l = Label(a);
            let o = cur.iter().position(|&x| x > l).unwrap_or(cur.len());
            apply(&mut cur, (Generator::Emerge(l), o));
            placements.push((Generator::Emerge(l), o));
        }
        return Diagram::from_placements(k, src, &placements).expect("legal");
    }
    let budget = rng.gen_range(0..=2 * n * (k + 1) + 2);
    for _ in 0..budget {
        let moves = legal_moves(&cur, k, noise && rng.gen_bool(0.15));
        let all: Vec<(Generator, usize)> = moves.concat();
        let Some(&mv) = all.choose(rng) else { break };
        apply(&mut cur, mv);
        placements.push(mv);
    }
    complete_to_standard(&mut cur, k, &mut placements);
    Diagram::from_placements(k, src, &placements).expect("legal")
}

/// A random element of `Hom([k]^n, [k]^m)`: a tensor of random operations
/// on a split of the inputs, optionally followed by a second such stage.
pub fn random_tw_nm<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, k: usize) -> Diagram {
    let stage = |rng: &mut R, n: usize, m: usize| {
        let mut parts = vec![0usize; m];
        for _ in 0..n {
            parts[rng.gen_range(0..m)] += 1;
        }
        let pieces: Vec<Diagram> = parts
            .iter()
            .map(|&p| {
                let noise = rng.gen_bool(0.3);
                random_tw(rng, p, k, noise)
            })
            .collect();
        crate::diagram::tensor_all(&pieces, k).expect("same degree")
    };
    if m == 0 {
        assert_eq!(n, 0, "no morphism from a non-empty source to the empty word");
        return Diagram::identity(ObjWord::empty(), k).expect("valid");
    }
    if rng.gen_bool(0.5) {
        let r = rng.gen_range(1..=n.max(1) + 1);
        let first = stage(rng, n, r);
        let second = stage(rng, r, m);
        first.compose(&second).expect("boundaries chain")
    } else {
        stage(rng, n, m)
    }
}
