//! The evaluation functors `Φ_k: B_k -> E`, the transformations `D^a` and
//! `S^a`, the cobar structure maps and the components of the action `ρ`.

use super::{ModelError, MonoidWithTwist};
use crate::diagram::{Diagram, Generator, ObjWord};
use crate::simplicial::{degeneracy_word, MonotoneMap};
use crate::tw::TwSimplex;

pub fn generator_map<B: MonoidWithTwist>(b: &B, g: Generator) -> B::Map {
    match g {
        Generator::Emerge(_) => b.unit(),
        Generator::Join(_) => b.multiplication(),
        Generator::Cross(..) => b.twist(),
    }
}

fn require<B: MonoidWithTwist>(b: &B, level: usize) -> Result<(), ModelError> {
    if b.supports_level(level) {
        Ok(())
    } else {
        Err(ModelError::LevelTooLarge { level, backend: b.name() })
    }
}

/// `Φ_k(f)`: every strand becomes a copy of `K`, emerges `η`, joins `μ` and
/// crossings `t`.
pub fn phi_eval<B: MonoidWithTwist>(b: &B, f: &Diagram) -> Result<B::Map, ModelError> {
    require(b, f.max_width())?;
    let mut acc = b.identity(f.src().len());
    for s in f.slices() {
        acc = b.apply_slice(&acc, s.left.len(), &generator_map(b, s.gen), s.right.len());
    }
    Ok(acc)
}

/// `D^a(w): Φ(d_a w) -> Φ(w)`, a unit for every letter `a` of `w`.
pub fn d_transform<B: MonoidWithTwist>(b: &B, a: usize, w: &ObjWord) -> Result<B::Map, ModelError> {
    require(b, w.len())?;
    let labels = w.labels();
    let kept = labels.iter().filter(|l| l.idx() != a).count();
    let mut acc = b.identity(kept);
    let mut remaining = kept;
    for (pos, l) in labels.iter().enumerate() {
        if l.idx() == a {
            acc = b.apply_slice(&acc, pos, &b.unit(), remaining);
        } else {
            remaining -= 1;
        }
    }
    Ok(acc)
}

/// `S^a(w): Φ(s_a w) -> Φ(w)`, a multiplication for every letter `a` of `w`.
pub fn s_transform<B: MonoidWithTwist>(b: &B, a: usize, w: &ObjWord) -> Result<B::Map, ModelError> {
    let doubled = degeneracy_word(a, w).len();
    require(b, doubled)?;
    let labels = w.labels();
    let mut acc = b.identity(doubled);
    let mut remaining = doubled;
    for (pos, l) in labels.iter().enumerate() {
        if l.idx() == a {
            remaining -= 2;
            acc = b.apply_slice(&acc, pos, &b.multiplication(), remaining);
        } else {
            remaining -= 1;
        }
    }
    Ok(acc)
}

/// The coface `d^i = K^{⋄i} ⋄ η ⋄ K^{⋄(n+1-i)}: K^{⋄(n+1)} -> K^{⋄(n+2)}`.
pub fn cobar_coface<B: MonoidWithTwist>(b: &B, i: usize, n: usize) -> Result<B::Map, ModelError> {
    if i > n + 1 {
        return Err(ModelError::Config(format!("coface index {i} out of range at level {n}")));
    }
    require(b, n + 2)?;
    Ok(b.whisker(i, &b.unit(), n + 1 - i))
}

/// The codegeneracy `s^i = K^{⋄i} ⋄ μ ⋄ K^{⋄(n-i)}: K^{⋄(n+2)} -> K^{⋄(n+1)}`.
pub fn cobar_codegeneracy<B: MonoidWithTwist>(b: &B, i: usize, n: usize) -> Result<B::Map, ModelError> {
    if i > n {
        return Err(ModelError::Config(format!("codegeneracy index {i} out of range at level {n}")));
    }
    require(b, n + 2)?;
    Ok(b.whisker(i, &b.multiplication(), n - i))
}

/// The `α`-component of `ρ(f)`: `Φ_j(α^* f)`.
pub fn rho_eval<B: MonoidWithTwist>(b: &B, f: &TwSimplex, alpha: &MonotoneMap) -> Result<B::Map, ModelError> {
    let pulled = alpha.act(f.diagram()).map_err(|e| ModelError::Config(e.to_string()))?;
    phi_eval(b, &pulled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AlgebraBackend, Comparison};

    #[test]
    fn phi_of_generators() {
        let b = AlgebraBackend::dual_numbers_f2();
        let m = Diagram::generator(0, Generator::join(0)).unwrap();
        assert!(b.compare(&phi_eval(&b, &m).unwrap(), &b.multiplication()).is_equal());
        let id = Diagram::identity(ObjWord::standard(2), 2).unwrap();
        assert!(b.compare(&phi_eval(&b, &id).unwrap(), &b.identity(3)).is_equal());
    }

    #[test]
    fn transforms_on_standard_words() {
        let b = AlgebraBackend::diagonal_f3();
        let w = ObjWord::standard(2);
        for i in 0..=2 {
            let d = d_transform(&b, i, &w).unwrap();
            assert!(b.compare(&d, &cobar_coface(&b, i, 1).unwrap()).is_equal());
            let s = s_transform(&b, i, &w).unwrap();
            assert!(b.compare(&s, &cobar_codegeneracy(&b, i, 2).unwrap()).is_equal());
        }
        assert!(matches!(b.compare(&b.identity(1), &b.twist()), Comparison::Differ { .. }));
    }
}
