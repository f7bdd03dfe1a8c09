//! The free `Z/m`-module monad on finite sets, with `⋄` the composition of
//! functors.
//!
//! An element of `K^{⋄l}(X)` is a nested formal sum of depth `l`. A map is a
//! list of primitive natural transformations (`η`, `μ`, `t`), each applied
//! at some nesting depth, evaluated pointwise. Maps are compared on every
//! point when the domain is small, and on seeded samples otherwise.
//!
//! The twist is `t(w) = [μ w] - w + K(η)(μ w)`.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Comparison, ModelError, MonoidWithTwist};
use crate::report::Mode;

/// A point of `K^{⋄l}(X)`: a base point at depth 0, otherwise a sorted list
/// of terms with non-zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Base(u32),
    Sum(Vec<(Elem, u32)>),
}

impl Elem {
    fn terms(&self) -> &[(Elem, u32)] {
        match self {
            Elem::Sum(t) => t,
            Elem::Base(_) => panic!("base point has no terms"),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Elem::Base(_) => 0,
            Elem::Sum(t) => 1 + t.first().map(|(e, _)| e.depth()).unwrap_or(0),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Base(x) => write!(f, "x{x}"),
            Elem::Sum(t) if t.is_empty() => f.write_str("0"),
            Elem::Sum(t) => {
                for (i, (e, c)) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    if *c != 1 {
                        write!(f, "{c}")?;
                    }
                    write!(f, "[{e}]")?;
                }
                Ok(())
            }
        }
    }
}

/// Sorts terms, merges repeats and drops zero coefficients.
fn normalize(mut terms: Vec<(Elem, u32)>, m: u32) -> Elem {
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Elem, u32)> = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        match out.last_mut() {
            Some((last, lc)) if *last == e => *lc = (*lc + c) % m,
            _ => out.push((e, c % m)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    Elem::Sum(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    Eta,
    Mu,
    Twist,
}

/// A primitive applied under `depth` layers of `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub depth: usize,
    pub prim: Prim,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmMap {
    pub from: usize,
    pub to: usize,
    pub steps: Vec<Step>,
}

/// How `A ⋄ B` is read as a composite of functors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `(A ⋄ B)(X) = A(B(X))`: the left factor is the outer layer, so
    /// `K^{⋄i} ⋄ f ⋄ K^{⋄j}` applies `f` under `i` layers.
    Nested,
    /// `(A ⋄ B)(X) = B(A(X))`: `f` is applied under `j` layers.
    Reversed,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Nested => "nested",
            Convention::Reversed => "reversed",
        }
    }
}

/// Default number of sampled points when a domain is too large.
pub const DEFAULT_SAMPLES: usize = 1000;
/// Domains up to this size are compared on every point.
pub const EXHAUSTIVE_LIMIT: u64 = 65536;

#[derive(Clone, Debug)]
pub struct FreeModuleBackend {
    modulus: u32,
    base_size: u32,
    convention: Convention,
    samples: usize,
    seed: u64,
    exhaustive_limit: u64,
}

impl FreeModuleBackend {
    pub fn new(modulus: u32, base_size: u32, convention: Convention) -> Result<Self, ModelError> {
        if modulus < 2 {
            return Err(ModelError::Config(format!("modulus {modulus} must be at least 2")));
        }
        if base_size == 0 {
            return Err(ModelError::Config("base set must be non-empty".into()));
        }
        Ok(FreeModuleBackend { modulus, base_size, convention, samples: DEFAULT_SAMPLES, seed: 0x5eed, exhaustive_limit: EXHAUSTIVE_LIMIT })
    }

    pub fn with_sampling(mut self, samples: usize, seed: u64) -> Self {
        self.samples = samples;
        self.seed = seed;
        self
    }

    /// Compares on every point only up to `limit` points (at most
    /// [`EXHAUSTIVE_LIMIT`]).
    pub fn with_exhaustive_limit(mut self, limit: u64) -> Self {
        self.exhaustive_limit = limit.min(EXHAUSTIVE_LIMIT);
        self
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn base_size(&self) -> u32 {
        self.base_size
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `|K^{⋄l}(X)|`, saturating.
    pub fn level_size(&self, level: usize) -> u64 {
        let mut n = self.base_size as u64;
        for _ in 0..level {
            if n >= 64 {
                return u64::MAX;
            }
            n = (self.modulus as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        }
        n
    }

    /// Every point of a level, in a fixed order; only for small levels.
    pub fn points(&self, level: usize) -> Vec<Elem> {
        assert!(self.level_size(level) <= EXHAUSTIVE_LIMIT * 16, "level {level} too large to list");
        if level == 0 {
            return (0..self.base_size).map(Elem::Base).collect();
        }
        let below = self.points(level - 1);
        let total = self.level_size(level);
        (0..total).map(|idx| self.point_from_index(&below, idx)).collect()
    }

    fn point_from_index(&self, below: &[Elem], mut idx: u64) -> Elem {
        let m = self.modulus as u64;
        let mut terms = Vec::new();
        for e in below {
            let c = (idx % m) as u32;
            idx /= m;
            if c != 0 {
                terms.push((e.clone(), c));
            }
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Elem::Sum(terms)
    }

    /// `η` or `μ` applied under exactly `depth` layers, as a map between
    /// levels: the whiskering of natural transformations by functor
    /// composition, independent of how `⋄` is read.
    pub fn under_layers(&self, prim: Prim, depth: usize, level: usize) -> FmMap {
        let (from, to) = match prim {
            Prim::Eta => (level, level + 1),
            Prim::Mu => (level + 1, level),
            Prim::Twist => (level, level),
        };
        FmMap { from, to, steps: vec![Step { depth, prim }] }
    }

    /// A random point of a level: a formal sum of up to three terms at the
    /// outer layer and of mostly one or two terms further in, so that deep
    /// levels stay small.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, level: usize) -> Elem {
        self.random_layer(rng, level, true)
    }

    fn random_layer<R: Rng + ?Sized>(&self, rng: &mut R, level: usize, outer: bool) -> Elem {
        if level == 0 {
            return Elem::Base(rng.gen_range(0..self.base_size));
        }
        let n = if outer {
            rng.gen_range(0..=3)
        } else {
            [0, 1, 1, 1, 1, 2, 2, 2, 2, 2][rng.gen_range(0..10)]
        };
        let terms = (0..n).map(|_| (self.random_layer(rng, level - 1, false), rng.gen_range(1..self.modulus))).collect();
        normalize(terms, self.modulus)
    }

    pub fn eta(&self, e: Elem) -> Elem {
        Elem::Sum(vec![(e, 1)])
    }

    pub fn mu(&self, e: &Elem) -> Elem {
        let m = self.modulus as u64;
        let mut terms = Vec::new();
        for (inner, a) in e.terms() {
            for (x, b) in inner.terms() {
                terms.push((x.clone(), ((*a as u64 * *b as u64) % m) as u32));
            }
        }
        normalize(terms, self.modulus)
    }

    /// `t(w) = [μ w] - w + K(η)(μ w)`.
    pub fn twist_point(&self, w: &Elem) -> Elem {
        let m = self.modulus;
        let mw = self.mu(w);
        let mut terms = vec![(mw.clone(), 1)];
        terms.extend(w.terms().iter().map(|(e, c)| (e.clone(), (m - c) % m)));
        terms.extend(mw.terms().iter().map(|(x, c)| (self.eta(x.clone()), *c)));
        normalize(terms, m)
    }

    /// `Σ c_i e_i` in the outer module structure of a level `>= 1`.
    pub fn linear_combination(&self, parts: &[(i64, Elem)]) -> Elem {
        let m = self.modulus as i64;
        let mut terms = Vec::new();
        for (c, e) in parts {
            let c = c.rem_euclid(m) as u64;
            for (x, a) in e.terms() {
                terms.push((x.clone(), ((c * *a as u64) % m as u64) as u32));
            }
        }
        normalize(terms, self.modulus)
    }

    fn apply_prim(&self, prim: Prim, depth: usize, e: &Elem) -> Elem {
        if depth == 0 {
            return match prim {
                Prim::Eta => self.eta(e.clone()),
                Prim::Mu => self.mu(e),
                Prim::Twist => self.twist_point(e),
            };
        }
        let terms = e.terms().iter().map(|(x, c)| (self.apply_prim(prim, depth - 1, x), *c)).collect();
        normalize(terms, self.modulus)
    }

    pub fn eval(&self, f: &FmMap, e: &Elem) -> Elem {
        let mut cur = e.clone();
        for s in &f.steps {
            cur = self.apply_prim(s.prim, s.depth, &cur);
        }
        cur
    }

    fn prim_map(prim: Prim) -> FmMap {
        let (from, to) = match prim {
            Prim::Eta => (0, 1),
            Prim::Mu => (2, 1),
            Prim::Twist => (2, 2),
        };
        FmMap { from, to, steps: vec![Step { depth: 0, prim }] }
    }
}

impl MonoidWithTwist for FreeModuleBackend {
    type Map = FmMap;

    fn name(&self) -> String {
        format!("free Z/{} module on {} point(s), {}", self.modulus, self.base_size, self.convention.name())
    }

    fn supports_level(&self, _level: usize) -> bool {
        true
    }

    fn identity(&self, level: usize) -> FmMap {
        FmMap { from: level, to: level, steps: Vec::new() }
    }

    fn unit(&self) -> FmMap {
        Self::prim_map(Prim::Eta)
    }

    fn multiplication(&self) -> FmMap {
        Self::prim_map(Prim::Mu)
    }

    fn twist(&self) -> FmMap {
        Self::prim_map(Prim::Twist)
    }

    fn compose(&self, first: &FmMap, then: &FmMap) -> FmMap {
        assert_eq!(first.to, then.from, "levels chain");
        let mut steps = first.steps.clone();
        steps.extend(then.steps.iter().copied());
        FmMap { from: first.from, to: then.to, steps }
    }

    fn whisker(&self, left: usize, f: &FmMap, right: usize) -> FmMap {
        let shift = match self.convention {
            Convention::Nested => left,
            Convention::Reversed => right,
        };
        FmMap {
            from: left + f.from + right,
            to: left + f.to + right,
            steps: f.steps.iter().map(|s| Step { depth: s.depth + shift, prim: s.prim }).collect(),
        }
    }

    fn levels(&self, f: &FmMap) -> (usize, usize) {
        (f.from, f.to)
    }

    fn compare(&self, f: &FmMap, g: &FmMap) -> Comparison {
        if (f.from, f.to) != (g.from, g.to) {
            return Comparison::Differ {
                witness: format!("levels {}->{} vs {}->{}", f.from, f.to, g.from, g.to),
            };
        }
        let size = self.level_size(f.from);
        let check = |e: &Elem| {
            let (a, b) = (self.eval(f, e), self.eval(g, e));
            (a != b).then(|| format!("at {e}: {a} vs {b}"))
        };
        if size <= self.exhaustive_limit {
            if f.from == 0 {
                for e in self.points(0) {
                    if let Some(w) = check(&e) {
                        return Comparison::Differ { witness: w };
                    }
                }
            } else {
                let below = self.points(f.from - 1);
                for idx in 0..size {
                    if let Some(w) = check(&self.point_from_index(&below, idx)) {
                        return Comparison::Differ { witness: w };
                    }
                }
            }
            return Comparison::Equal { mode: Mode::Exact, points: size };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (f.from as u64) << 32);
        for _ in 0..self.samples {
            let e = self.random_point(&mut rng, f.from);
            if let Some(w) = check(&e) {
                return Comparison::Differ { witness: format!("{w} (sampled, seed {})", self.seed) };
            }
        }
        Comparison::Equal { mode: Mode::Sampled, points: self.samples as u64 }
    }

    fn sample_seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}
