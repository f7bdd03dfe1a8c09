//! The simplicial sets `TW(n, m)` with `k`-simplices `Hom_{B_k}([k]^n, [k]^m)`,
//! the operad structure on `TW(n) = TW(n, 1)`, the explicit simplices
//! `β_n`, `τ(n)`, `Θ_{n,k}` and the contraction `s_{-1}`.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Generator, ObjWord};
use crate::dsl::print_inline;
use crate::random::random_tw;
use crate::report::{Check, VerificationReport};
use crate::rewrite::{canonicalize, equals, CanonicalDiagram};
use crate::simplicial::{coface0, degeneracy, face, SimplicialError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwError {
    #[error("arity {0} is too small, need at least {1}")]
    ArityTooSmall(usize, usize),
    #[error("degree must be at least 1")]
    DegreeTooSmall,
    #[error("diagram {src} -> {tgt} does not have shape [{k}]^{n} -> [{k}]^{m}")]
    Shape { src: ObjWord, tgt: ObjWord, k: usize, n: usize, m: usize },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// A `k`-simplex of `TW(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwSimplex {
    n: usize,
    m: usize,
    diagram: Diagram,
}

impl TwSimplex {
    pub fn new(n: usize, m: usize, diagram: Diagram) -> Result<Self, TwError> {
        let k = diagram.degree();
        if diagram.src() != &ObjWord::standard_power(k, n) || diagram.tgt() != &ObjWord::standard_power(k, m) {
            return Err(TwError::Shape { src: diagram.src().clone(), tgt: diagram.tgt().clone(), k, n, m });
        }
        Ok(TwSimplex { n, m, diagram })
    }

    /// A simplex of `TW(n) = TW(n, 1)`.
    pub fn operation(n: usize, diagram: Diagram) -> Result<Self, TwError> {
        TwSimplex::new(n, 1, diagram)
    }

    pub fn identity(k: usize) -> Self {
        TwSimplex { n: 1, m: 1, diagram: Diagram::identity(ObjWord::standard(k), k).expect("valid") }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn coarity(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.diagram.degree()
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn face(&self, i: usize) -> Result<TwSimplex, TwError> {
        Ok(TwSimplex { n: self.n, m: self.m, diagram: face(i, &self.diagram)? })
    }

    pub fn degeneracy(&self, i: usize) -> Result<TwSimplex, TwError> {
        Ok(TwSimplex { n: self.n, m: self.m, diagram: degeneracy(i, &self.diagram)? })
    }

    pub fn equals(&self, other: &TwSimplex) -> bool {
        self.n == other.n && self.m == other.m && equals(&self.diagram, &other.diagram)
    }

    /// `self` followed by `next`: `TW(n, m) × TW(m, l) -> TW(n, l)`.
    pub fn then(&self, next: &TwSimplex) -> Result<TwSimplex, TwError> {
        if self.m != next.n {
            return Err(TwError::Arity(format!("{} outputs feed {} inputs", self.m, next.n)));
        }
        Ok(TwSimplex { n: self.n, m: next.m, diagram: self.diagram.compose(&next.diagram)? })
    }

    /// `self ⊔ other`: `TW(n, m) × TW(n', m') -> TW(n + n', m + m')`.
    pub fn tensor(&self, other: &TwSimplex) -> Result<TwSimplex, TwError> {
        Ok(TwSimplex { n: self.n + other.n, m: self.m + other.m, diagram: self.diagram.tensor(&other.diagram)? })
    }
}

/// A simplex of the augmented object: the extra point in degree `-1`, or an
/// honest simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Augmented {
    Point { n: usize },
    Simplex(TwSimplex),
}

impl Augmented {
    /// Faces, with `d_0` of a vertex landing on the point.
    pub fn face(&self, i: usize) -> Result<Augmented, TwError> {
        match self {
            Augmented::Point { .. } => Err(TwError::DegreeTooSmall),
            Augmented::Simplex(x) if x.degree() == 0 => {
                if i == 0 {
                    Ok(Augmented::Point { n: x.arity() })
                } else {
                    Err(SimplicialError::IndexOutOfRange { index: i, k: 0 }.into())
                }
            }
            Augmented::Simplex(x) => Ok(Augmented::Simplex(x.face(i)?)),
        }
    }

    pub fn simplex(&self) -> Option<&TwSimplex> {
        match self {
            Augmented::Simplex(x) => Some(x),
            Augmented::Point { .. } => None,
        }
    }

    fn equals(&self, other: &Augmented) -> bool {
        match (self, other) {
            (Augmented::Point { n }, Augmented::Point { n: m }) => n == m,
            (Augmented::Simplex(a), Augmented::Simplex(b)) => a.equals(b),
            _ => false,
        }
    }

    fn describe(&self) -> String {
        match self {
            Augmented::Point { n } => format!("* (arity {n})"),
            Augmented::Simplex(x) => print_inline(x.diagram()),
        }
    }
}

/// `β_2`: `(0 1 0 1) -> (0 1 1)` in `B_1`, a crossing then a join.
pub fn beta2() -> Diagram {
    Diagram::from_placements(1, ObjWord::standard_power(1, 2), &[(Generator::cross(1, 0), 1), (Generator::join(0), 0)])
        .expect("valid")
}

/// `β_n: [1]^n -> (0 1^n)` in `B_1`.
pub fn beta(n: usize) -> Result<Diagram, TwError> {
    if n < 2 {
        return Err(TwError::ArityTooSmall(n, 2));
    }
    let mut b = beta2();
    for j in 3..=n {
        let prefix = Diagram::identity(ObjWord::standard_power(1, j - 2), 1)?;
        let one = ObjWord::from_values(&[1]);
        b = prefix.tensor(&beta2())?.compose(&b.whisker(&ObjWord::empty(), &one)?)?;
    }
    Ok(b)
}

/// `τ(n) = d_1 β_n`, the right comb of joins in `TW(n)_0`.
pub fn tau(n: usize) -> Result<TwSimplex, TwError> {
    TwSimplex::operation(n, face(1, &beta(n)?)?)
}

/// `Θ_{n,k} = s_1^{k-1} β_n: [k]^n -> (0) ⊔ d^0 [k-1]^n` in `B_k`.
pub fn theta(n: usize, k: usize) -> Result<Diagram, TwError> {
    if k == 0 {
        return Err(TwError::DegreeTooSmall);
    }
    let mut d = beta(n)?;
    for _ in 1..k {
        d = degeneracy(1, &d)?;
    }
    Ok(d)
}

/// The extra degeneracy `s_{-1}: TW(n)_k -> TW(n)_{k+1}`, with `s_{-1}(*) = τ(n)`.
pub fn contraction(x: &Augmented) -> Result<TwSimplex, TwError> {
    match x {
        Augmented::Point { n } => tau(*n),
        Augmented::Simplex(x) => {
            if x.coarity() != 1 {
                return Err(TwError::Arity(format!("contraction needs one output, got {}", x.coarity())));
            }
            let k = x.degree();
            let zero = Diagram::identity(ObjWord::from_values(&[0]), k + 1)?;
            let d = theta(x.arity(), k + 1)?.compose(&zero.tensor(&coface0(x.diagram()))?)?;
            TwSimplex::operation(x.arity(), d)
        }
    }
}

/// `γ(φ; ψ_1, ..., ψ_n)`: the `ψ_i` side by side, then `φ`.
pub fn operad_compose(phi: &TwSimplex, psis: &[TwSimplex]) -> Result<TwSimplex, TwError> {
    if phi.coarity() != 1 || psis.iter().any(|p| p.coarity() != 1) {
        return Err(TwError::Arity("operad composition needs single outputs".into()));
    }
    if psis.len() != phi.arity() {
        return Err(TwError::Arity(format!("{} inputs, {} operations", phi.arity(), psis.len())));
    }
    let k = phi.degree();
    if let Some(p) = psis.iter().find(|p| p.degree() != k) {
        return Err(TwError::Diagram(DiagramError::DegreeMismatch(k, p.degree())));
    }
    let mut acc = TwSimplex { n: 0, m: 0, diagram: Diagram::identity(ObjWord::empty(), k)? };
    for p in psis {
        acc = acc.tensor(p)?;
    }
    acc.then(phi)
}

/// Result of a bounded hom-set enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub classes: Vec<CanonicalDiagram>,
    /// Distinct canonical forms visited, including intermediate ones.
    pub explored: usize,
    /// False when the state limit was hit before the search finished.
    pub complete: bool,
}

/// Default cap on visited states.
pub const ENUMERATION_LIMIT: usize = 400_000;

fn legal_extensions(w: &ObjWord, k: usize) -> Vec<(Generator, usize)> {
    let l = w.labels();
    let mut out = Vec::new();
    for o in 0..=l.len() {
        for a in 0..=k as u32 {
            out.push((Generator::emerge(a), o));
        }
    }
    for o in 0..l.len().saturating_sub(1) {
        if l[o] == l[o + 1] {
            out.push((Generator::Join(l[o]), o));
        } else if l[o] > l[o + 1] {
            out.push((Generator::Cross(l[o], l[o + 1]), o));
        }
    }
    out
}

fn count_distance(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

/// All equality classes of morphisms `src -> tgt` in `B_k` that have a
/// representative with at most `max_generators` generators.
pub fn enumerate_hom(src: &ObjWord, tgt: &ObjWord, k: usize, max_generators: usize, limit: usize) -> Enumeration {
    let target_counts = tgt.label_counts(k);
    let start = canonicalize(&Diagram::identity(src.clone(), k).expect("labels in range"));
    let mut seen: HashSet<CanonicalDiagram> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut classes = Vec::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut complete = true;
    while let Some(state) = queue.pop_front() {
        let d = state.diagram();
        if d.tgt() == tgt {
            classes.push(state.clone());
        }
        let size = d.len();
        if size >= max_generators {
            continue;
        }
        for (g, o) in legal_extensions(d.tgt(), k) {
            let step = Diagram::from_placements(k, d.tgt().clone(), &[(g, o)]).expect("legal");
            let next = canonicalize(&d.compose(&step).expect("chains"));
            let nsize = next.diagram().len();
            if nsize > max_generators
                || count_distance(&next.diagram().tgt().label_counts(k), &target_counts) > max_generators - nsize
            {
                continue;
            }
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= limit {
                complete = false;
                break;
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
        if !complete {
            break;
        }
    }
    classes.sort();
    Enumeration { classes, explored: seen.len(), complete }
}

/// Elements of `TW(n)_k` with at most `max_generators` generators.
pub fn enumerate_tw(n: usize, k: usize, max_generators: usize) -> Enumeration {
    enumerate_hom(&ObjWord::standard_power(k, n), &ObjWord::standard(k), k, max_generators, ENUMERATION_LIMIT)
}

/// Outcome of the connectivity search among degree-0 operations.
#[derive(Clone, Debug)]
pub struct Connectivity {
    /// Distinct vertices, `τ(n)` included.
    pub vertices: usize,
    pub components: usize,
    /// Generator count of the largest reduced edge used.
    pub max_edge_generators: usize,
}

/// Links every given vertex of `TW(n)_0` to `τ(n)` through the edge
/// `s_{-1}(φ)` (whose faces are `φ` and `τ(n)`) and counts the components.
pub fn connect_vertices(n: usize, vertices: &[Diagram]) -> Result<Connectivity, TwError> {
    let tau_n = tau(n)?;
    let mut all: Vec<TwSimplex> = vec![tau_n.clone()];
    for v in vertices {
        let x = TwSimplex::operation(n, v.clone())?;
        if !all.iter().any(|y| y.equals(&x)) {
            all.push(x);
        }
    }
    let index: HashMap<u64, Vec<usize>> = all.iter().enumerate().fold(HashMap::new(), |mut m, (i, x)| {
        m.entry(canonicalize(x.diagram()).digest()).or_default().push(i);
        m
    });
    let find_index = |x: &TwSimplex| -> Option<usize> {
        index.get(&canonicalize(x.diagram()).digest())?.iter().copied().find(|&i| all[i].equals(x))
    };
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut max_edge = 0;
    for x in all.clone() {
        let edge = contraction(&Augmented::Simplex(x))?;
        max_edge = max_edge.max(canonicalize(edge.diagram()).diagram().len());
        let (a, b) = (edge.face(0)?, edge.face(1)?);
        if let (Some(i), Some(j)) = (find_index(&a), find_index(&b)) {
            let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
            parent[ri] = rj;
        }
    }
    let components = (0..all.len()).filter(|&i| root(&mut parent, i) == i).count();
    Ok(Connectivity { vertices: all.len(), components, max_edge_generators: max_edge })
}

/// Options for the contraction sweep.
#[derive(Clone, Copy, Debug)]
pub struct ContractionOptions {
    pub n_max: usize,
    pub k_max: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ContractionOptions {
    fn default() -> Self {
        ContractionOptions { n_max: 4, k_max: 2, samples: 100, seed: 1 }
    }
}

fn observe_eq(check: &mut Check, lhs: Result<Augmented, TwError>, rhs: Result<Augmented, TwError>, x: &Augmented) {
    let ok = matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a.equals(b));
    check.observe(ok, || {
        let show = |r: &Result<Augmented, TwError>| match r {
            Ok(a) => a.describe(),
            Err(e) => format!("error: {e}"),
        };
        format!("x = {}\nlhs = {}\nrhs = {}", x.describe(), show(&lhs), show(&rhs))
    });
}

fn s_minus(x: &Augmented) -> Result<Augmented, TwError> {
    contraction(x).map(Augmented::Simplex)
}

fn sdeg(i: usize, x: Result<Augmented, TwError>) -> Result<Augmented, TwError> {
    match x? {
        Augmented::Simplex(s) => Ok(Augmented::Simplex(s.degeneracy(i)?)),
        Augmented::Point { .. } => Err(TwError::DegreeTooSmall),
    }
}

/// Checks the contraction identities on every simplex in `simplices`.
fn contraction_checks(report: &mut VerificationReport, simplices: &[Augmented], tag: &str, seed: Option<u64>) {
    let mk = |id: String, anchor: &str| {
        let c = Check::new(id, anchor);
        match seed {
            Some(s) => c.sampled(s),
            None => c,
        }
    };
    for x in simplices {
        let k: isize = match x {
            Augmented::Point { .. } => -1,
            Augmented::Simplex(s) => s.degree() as isize,
        };
        let sx = s_minus(x);
        // d_0 s_{-1} = id
        let mut c = mk(format!("contraction/{tag}/d0"), "d_0 s_{-1} = id");
        observe_eq(&mut c, sx.clone().and_then(|s| s.face(0)), Ok(x.clone()), x);
        report.push(c);
        // d_i s_{-1} = s_{-1} d_{i-1}
        for i in 1..=(k + 1) as usize {
            let mut c = mk(format!("contraction/{tag}/d{i}"), "d_i s_{-1} = s_{-1} d_{i-1} for i >= 1");
            let lhs = sx.clone().and_then(|s| s.face(i));
            let rhs = x.face(i - 1).and_then(|y| s_minus(&y));
            observe_eq(&mut c, lhs, rhs, x);
            report.push(c);
        }
        // s_i s_{-1} = s_{-1} s_{i-1}, and s_0 s_{-1} = s_{-1} s_{-1}
        for i in 0..=(k + 1) as usize {
            let anchor = if i == 0 { "s_0 s_{-1} = s_{-1} s_{-1}" } else { "s_i s_{-1} = s_{-1} s_{i-1} for i >= 1" };
            let mut c = mk(format!("contraction/{tag}/s{i}"), anchor);
            let lhs = sdeg(i, sx.clone());
            let rhs = if i == 0 {
                sx.clone().and_then(|s| s_minus(&s))
            } else {
                sdeg(i - 1, Ok(x.clone())).and_then(|y| s_minus(&y))
            };
            observe_eq(&mut c, lhs, rhs, x);
            report.push(c);
        }
    }
}

/// Simplices derived from `β_n`: the point, `τ(n)`, the `Θ_{n,k}` viewed
/// through `s_{-1}`, and their faces and degeneracies.
pub fn beta_derived(n: usize, k_max: usize) -> Result<Vec<Augmented>, TwError> {
    let point = Augmented::Point { n };
    let mut out = vec![point.clone()];
    let mut frontier = vec![Augmented::Simplex(tau(n)?)];
    for k in 0..=k_max {
        let mut next = Vec::new();
        for x in &frontier {
            out.push(x.clone());
            if k < k_max {
                let s = x.simplex().expect("simplex");
                next.push(Augmented::Simplex(contraction(x)?));
                for i in 0..=k {
                    next.push(Augmented::Simplex(s.degeneracy(i)?));
                }
            }
        }
        next.dedup();
        frontier = next;
    }
    Ok(out)
}

/// Sweeps the contraction identities and the lemmas about `β_n` feeding them.
pub fn verify_contraction(opts: &ContractionOptions) -> VerificationReport {
    let mut report = VerificationReport::new("contraction")
        .param("nmax", opts.n_max)
        .param("kmax", opts.k_max)
        .param("samples", opts.samples)
        .param("seed", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for n in 2..=opts.n_max {
        match beta_derived(n, opts.k_max) {
            Ok(sx) => contraction_checks(&mut report, &sx, &format!("n={n}/beta"), None),
            Err(e) => {
                let mut c = Check::new(format!("contraction/n={n}/beta"), "beta-derived simplices exist");
                c.observe(false, || e.to_string());
                report.push(c);
            }
        }
    }
    // random vertices and higher simplices, spread over n and k
    let arities: Vec<usize> = (2..=opts.n_max.max(2)).collect();
    let mut random = Vec::new();
    for s in 0..opts.samples {
        let n = arities[s % arities.len()];
        let k = (s / arities.len()) % (opts.k_max + 1);
        let d = random_tw(&mut rng, n, k, true);
        random.push((n, Augmented::Simplex(TwSimplex::operation(n, d).expect("shape"))));
    }
    for n in arities.iter().copied() {
        let xs: Vec<Augmented> = random.iter().filter(|(m, _)| *m == n).map(|(_, x)| x.clone()).collect();
        contraction_checks(&mut report, &xs, &format!("n={n}/random"), Some(opts.seed));
    }
    beta_checks(&mut report, opts.n_max.max(5) + 1);
    report
}

/// The lemmas about `β_n` and `Θ_{n,k}`; `d_0 β_n = id` is checked up to
/// `n_top`, the rest up to `n_top - 1`.
pub fn beta_checks(report: &mut VerificationReport, n_top: usize) {
    for n in 2..=n_top {
        let b = beta(n).expect("n >= 2");
        let mut c = Check::new(format!("beta/n={n}/d0"), "d_0 beta_n = id on [0]^n");
        let id = Diagram::identity(ObjWord::standard_power(0, n), 0).expect("valid");
        let lhs = face(0, &b).expect("degree 1");
        c.observe(equals(&lhs, &id), || print_inline(&lhs));
        report.push(c);
        let mut c = Check::new(format!("beta/n={n}/counts"), "beta_n has n-1 joins, n-1 crosses and target (0 1^n)");
        let (u, m, t) = b.generator_counts();
        let mut tgt = vec![0];
        tgt.extend(std::iter::repeat_n(1, n));
        c.observe(u == 0 && m == n - 1 && t == n - 1 && b.tgt() == &ObjWord::from_values(&tgt), || {
            print_inline(&b)
        });
        report.push(c);
        if n == n_top {
            continue;
        }
        // s_0 β_n = (s_1 β_n) then ((0) ⊔ d^0 β_n)
        let mut c = Check::new(format!("beta/n={n}/s0"), "s_0 beta_n = ((0) + d^0 beta_n) . s_1 beta_n");
        let zero2 = Diagram::identity(ObjWord::from_values(&[0]), 2).expect("valid");
        let lhs = degeneracy(0, &b).expect("in range");
        let rhs = degeneracy(1, &b)
            .expect("in range")
            .compose(&zero2.tensor(&coface0(&b)).expect("same degree"))
            .expect("chains");
        c.observe(equals(&lhs, &rhs), || format!("{} vs {}", print_inline(&lhs), print_inline(&rhs)));
        report.push(c);
        // s_0 d_1 β_n = β_n then ((0) ⊔ d^0 d_1 β_n)
        let mut c = Check::new(format!("beta/n={n}/s0d1"), "s_0 d_1 beta_n = ((0) + d^0 d_1 beta_n) . beta_n");
        let zero1 = Diagram::identity(ObjWord::from_values(&[0]), 1).expect("valid");
        let t = face(1, &b).expect("degree 1");
        let lhs = degeneracy(0, &t).expect("in range");
        let rhs = b.compose(&zero1.tensor(&coface0(&t)).expect("same degree")).expect("chains");
        c.observe(equals(&lhs, &rhs), || format!("{} vs {}", print_inline(&lhs), print_inline(&rhs)));
        report.push(c);
        // faces of Θ
        for k in 1..=3 {
            let th = theta(n, k + 1).expect("valid");
            let mut c = Check::new(format!("theta/n={n}/k={k}/d0"), "d_0 Theta_{n,k+1} = id on [k]^n");
            let id = Diagram::identity(ObjWord::standard_power(k, n), k).expect("valid");
            let lhs = face(0, &th).expect("k >= 1");
            c.observe(equals(&lhs, &id), || print_inline(&lhs));
            report.push(c);
            let mut c = Check::new(format!("theta/n={n}/k={k}/di"), "d_i Theta_{n,k+1} = Theta_{n,k} for 1 <= i <= k+1");
            let want = theta(n, k).expect("valid");
            for i in 1..=k + 1 {
                let lhs = face(i, &th).expect("in range");
                c.observe(equals(&lhs, &want), || format!("i = {i}: {}", print_inline(&lhs)));
            }
            report.push(c);
        }
    }
}
