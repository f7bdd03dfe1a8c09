//! Faces, degeneracies and the extra coface between the categories `B_k`,
//! together with the action of arbitrary monotone maps and sweeps that
//! check the simplicial and cofacial identities.
//!
//! `face(a, ·)` deletes the colour `a`, `degeneracy(a, ·)` doubles it into
//! the adjacent pair `a, a + 1`. Both relabel the remaining colours so that
//! labels stay the integers `0..=k`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Diagram, Generator, Label, ObjWord, Slice};
use crate::random::random_diagram;
use crate::report::{Check, VerificationReport};
use crate::rewrite::equals;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("index {index} out of range for degree {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("degree 0 has no faces")]
    NoFace,
    #[error("map has target degree {expected}, diagram has degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("values {0:?} do not define a monotone map into [{1}]")]
    NotMonotone(Vec<usize>, usize),
    #[error("maps do not compose: [{0}] vs [{1}]")]
    NotComposable(usize, usize),
}

fn face_label(a: u32, l: Label) -> Option<Label> {
    match l.0.cmp(&a) {
        std::cmp::Ordering::Less => Some(l),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(Label(l.0 - 1)),
    }
}

fn degen_label(a: u32, l: Label) -> Vec<Label> {
    match l.0.cmp(&a) {
        std::cmp::Ordering::Less => vec![l],
        std::cmp::Ordering::Equal => vec![l, Label(a + 1)],
        std::cmp::Ordering::Greater => vec![Label(l.0 + 1)],
    }
}

pub fn face_word(a: usize, w: &ObjWord) -> ObjWord {
    w.iter().filter_map(|l| face_label(a as u32, l)).collect()
}

pub fn degeneracy_word(a: usize, w: &ObjWord) -> ObjWord {
    w.flat_map_labels(|l| degen_label(a as u32, l))
}

pub fn coface0_word(w: &ObjWord) -> ObjWord {
    w.map_labels(|l| Label(l.0 + 1))
}

/// `d_a`: `B_k -> B_{k-1}`.
pub fn face(a: usize, d: &Diagram) -> Result<Diagram, SimplicialError> {
    let k = d.degree();
    if k == 0 {
        return Err(SimplicialError::NoFace);
    }
    if a > k {
        return Err(SimplicialError::IndexOutOfRange { index: a, k });
    }
    let a32 = a as u32;
    let mut slices = Vec::with_capacity(d.len());
    for s in d.slices() {
        let kept = match s.gen {
            Generator::Emerge(x) | Generator::Join(x) => x.0 != a32,
            Generator::Cross(c, e) => c.0 != a32 && e.0 != a32,
        };
        if kept {
            let gen = s.gen.map_labels(|l| face_label(a32, l).expect("kept generator avoids a"));
            slices.push(Slice::new(face_word(a, &s.left), gen, face_word(a, &s.right)));
        }
    }
    let src = face_word(a, d.src());
    let tgt = face_word(a, d.tgt());
    Ok(Diagram::from_parts_unchecked(k - 1, src, tgt, slices))
}

/// `s_a`: `B_k -> B_{k+1}`.
pub fn degeneracy(a: usize, d: &Diagram) -> Result<Diagram, SimplicialError> {
    let k = d.degree();
    if a > k {
        return Err(SimplicialError::IndexOutOfRange { index: a, k });
    }
    let a32 = a as u32;
    let (la, lb) = (Label(a32), Label(a32 + 1));
    let one = |l: Label| ObjWord::single(l);
    let mut slices = Vec::with_capacity(d.len() * 2);
    for s in d.slices() {
        let x = degeneracy_word(a, &s.left);
        let y = degeneracy_word(a, &s.right);
        let xa = x.concat(&one(la));
        match s.gen {
            Generator::Join(c) if c == la => {
                slices.push(Slice::new(xa.clone(), Generator::Cross(lb, la), one(lb).concat(&y)));
                slices.push(Slice::new(x.clone(), Generator::Join(la), ObjWord::new(vec![lb, lb]).concat(&y)));
                slices.push(Slice::new(xa, Generator::Join(lb), y));
            }
            Generator::Emerge(c) if c == la => {
                slices.push(Slice::new(x, Generator::Emerge(la), y.clone()));
                slices.push(Slice::new(xa, Generator::Emerge(lb), y));
            }
            Generator::Cross(c, e) if c == la => {
                slices.push(Slice::new(xa, Generator::Cross(lb, e), y.clone()));
                slices.push(Slice::new(x, Generator::Cross(la, e), one(lb).concat(&y)));
            }
            Generator::Cross(c, e) if e == la => {
                let c2 = Label(c.0 + 1);
                slices.push(Slice::new(x, Generator::Cross(c2, la), one(lb).concat(&y)));
                slices.push(Slice::new(xa, Generator::Cross(c2, lb), y));
            }
            g => {
                let g = g.map_labels(|l| if l.0 > a32 { Label(l.0 + 1) } else { l });
                slices.push(Slice::new(x, g, y));
            }
        }
    }
    let src = degeneracy_word(a, d.src());
    let tgt = degeneracy_word(a, d.tgt());
    Ok(Diagram::from_parts_unchecked(k + 1, src, tgt, slices))
}

/// `d^0`: `B_k -> B_{k+1}`, adding one to every label.
pub fn coface0(d: &Diagram) -> Diagram {
    let slices = d
        .slices()
        .iter()
        .map(|s| {
            Slice::new(coface0_word(&s.left), s.gen.map_labels(|l| Label(l.0 + 1)), coface0_word(&s.right))
        })
        .collect();
    Diagram::from_parts_unchecked(d.degree() + 1, coface0_word(d.src()), coface0_word(d.tgt()), slices)
}

/// A monotone map `[j] -> [k]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonotoneMap {
    k: usize,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(k: usize, values: Vec<usize>) -> Result<Self, SimplicialError> {
        let ok = !values.is_empty()
            && values.windows(2).all(|w| w[0] <= w[1])
            && values.iter().all(|&v| v <= k);
        if ok {
            Ok(MonotoneMap { k, values })
        } else {
            Err(SimplicialError::NotMonotone(values, k))
        }
    }

    pub fn identity(k: usize) -> Self {
        MonotoneMap { k, values: (0..=k).collect() }
    }

    /// `ε^i: [k-1] -> [k]`, skipping `i`.
    pub fn coface(k: usize, i: usize) -> Self {
        assert!(k >= 1 && i <= k);
        MonotoneMap { k, values: (0..=k).filter(|&v| v != i).collect() }
    }

    /// `η^i: [k+1] -> [k]`, hitting `i` twice.
    pub fn codegeneracy(k: usize, i: usize) -> Self {
        assert!(i <= k);
        let mut values: Vec<usize> = (0..=k).collect();
        values.insert(i, i);
        MonotoneMap { k, values }
    }

    /// Every monotone map `[j] -> [k]`.
    pub fn all(j: usize, k: usize) -> Vec<MonotoneMap> {
        fn go(pos: usize, lo: usize, j: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<MonotoneMap>) {
            if pos > j {
                out.push(MonotoneMap { k, values: cur.clone() });
                return;
            }
            for v in lo..=k {
                cur.push(v);
                go(pos + 1, v, j, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(0, 0, j, k, &mut Vec::new(), &mut out);
        out
    }

    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    /// `self ∘ beta`: first `beta`, then `self`.
    pub fn after(&self, beta: &MonotoneMap) -> Result<MonotoneMap, SimplicialError> {
        if beta.k != self.source() {
            return Err(SimplicialError::NotComposable(beta.k, self.source()));
        }
        Ok(MonotoneMap { k: self.k, values: beta.values.iter().map(|&v| self.values[v]).collect() })
    }

    /// `α^*` on objects: each label is replaced by its preimage.
    pub fn act_word(&self, w: &ObjWord) -> ObjWord {
        w.flat_map_labels(|l| {
            (0..self.values.len())
                .filter(|&i| self.values[i] == l.idx())
                .map(|i| Label(i as u32))
                .collect()
        })
    }

    /// `α^*: B_k -> B_j`, through the surjection-injection factorization:
    /// faces for the values that are missed, then degeneracies for the
    /// values that are hit more than once.
    pub fn act(&self, f: &Diagram) -> Result<Diagram, SimplicialError> {
        if f.degree() != self.k {
            return Err(SimplicialError::DegreeMismatch { expected: self.k, found: f.degree() });
        }
        let mut d = f.clone();
        for v in (0..=self.k).rev() {
            if !self.values.contains(&v) {
                d = face(v, &d)?;
            }
        }
        let mut fibers: Vec<usize> = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 && self.values[i - 1] == v {
                *fibers.last_mut().expect("non-empty") += 1;
            } else {
                fibers.push(1);
            }
        }
        for b in (0..fibers.len()).rev() {
            for _ in 1..fibers[b] {
                d = degeneracy(b, &d)?;
            }
        }
        Ok(d)
    }
}

/// All words of length `len` over `0..=k`.
pub fn words(k: usize, len: usize) -> Vec<ObjWord> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u32>| {
                (0..=k as u32).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|v| ObjWord::from_values(&v)).collect()
}

/// Every generator of `B_k` in every context `x ⊔ g ⊔ y` with
/// `|x| + |y| <= max_context`.
pub fn whiskered_generators(k: usize, max_context: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    for g in Generator::all(k) {
        let bare = Diagram::generator(k, g).expect("generator is valid");
        for total in 0..=max_context {
            for left_len in 0..=total {
                for x in words(k, left_len) {
                    for y in words(k, total - left_len) {
                        out.push(bare.whisker(&x, &y).expect("labels in range"));
                    }
                }
            }
        }
    }
    out
}

/// The diagrams identities are checked on in degree `k`: whiskered
/// generators, plus `samples` random diagrams.
pub fn corpus(k: usize, max_context: usize, samples: usize, seed: u64) -> (Vec<Diagram>, Vec<Diagram>) {
    let gens = whiskered_generators(k, max_context);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let rand = (0..samples).map(|_| random_diagram(&mut rng, k, 8)).collect();
    (gens, rand)
}

/// Options for the identity sweeps.
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub k_max: usize,
    /// Random diagrams in total, spread evenly over the degrees.
    pub samples: usize,
    pub max_context: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { k_max: 3, samples: 500, max_context: 2, seed: 1 }
    }
}

fn per_degree(opts: &SweepOptions, k: usize) -> usize {
    let degrees = opts.k_max + 1;
    opts.samples / degrees + usize::from(k < opts.samples % degrees)
}

type Op<'a> = Box<dyn Fn(&Diagram) -> Result<Diagram, SimplicialError> + 'a>;

fn d(i: usize) -> Op<'static> {
    Box::new(move |x| face(i, x))
}

fn s(i: usize) -> Op<'static> {
    Box::new(move |x| degeneracy(i, x))
}

fn cf() -> Op<'static> {
    Box::new(|x| Ok(coface0(x)))
}

fn id() -> Op<'static> {
    Box::new(|x| Ok(x.clone()))
}

/// Applies the operators right to left, as in `d_i s_j (f)`.
fn chain(ops: &[Op<'_>], f: &Diagram) -> Result<Diagram, SimplicialError> {
    let mut cur = f.clone();
    for op in ops.iter().rev() {
        cur = op(&cur)?;
    }
    Ok(cur)
}

struct Identity<'a> {
    id: String,
    anchor: &'static str,
    lhs: Vec<Op<'a>>,
    rhs: Vec<Op<'a>>,
}

fn run_identities(
    report: &mut VerificationReport,
    identities: &[Identity<'_>],
    gens: &[Diagram],
    rand: &[Diagram],
    seed: u64,
) {
    for ident in identities {
        let mut exact = Check::new(format!("{}/generators", ident.id), ident.anchor);
        let mut sampled = Check::new(format!("{}/random", ident.id), ident.anchor).sampled(seed);
        for (corpus, check) in [(gens, &mut exact), (rand, &mut sampled)] {
            for f in corpus {
                let (l, r) = (chain(&ident.lhs, f), chain(&ident.rhs, f));
                let ok = matches!((&l, &r), (Ok(a), Ok(b)) if equals(a, b));
                check.observe(ok, || {
                    format!("f = {}\nlhs = {:?}\nrhs = {:?}", crate::dsl::print_inline(f), l, r)
                });
            }
        }
        report.push(exact);
        if sampled.instances > 0 {
            report.push(sampled);
        }
    }
}

fn simplicial_identities(k: usize) -> Vec<Identity<'static>> {
    let mut out = Vec::new();
    // d_i d_j = d_{j-1} d_i, i < j, on B_k with k >= 2
    if k >= 2 {
        for j in 1..=k {
            for i in 0..j {
                out.push(Identity {
                    id: format!("dd/k={k}/i={i}/j={j}"),
                    anchor: "d_i d_j = d_{j-1} d_i for i < j",
                    lhs: vec![d(i), d(j)],
                    rhs: vec![d(j - 1), d(i)],
                });
            }
        }
    }
    for j in 0..=k {
        // d_i s_j, with s_j landing in B_{k+1}
        for i in 0..=k + 1 {
            if i < j && k >= 1 {
                out.push(Identity {
                    id: format!("ds/k={k}/i={i}/j={j}"),
                    anchor: "d_i s_j = s_{j-1} d_i for i < j",
                    lhs: vec![d(i), s(j)],
                    rhs: vec![s(j - 1), d(i)],
                });
            } else if i == j || i == j + 1 {
                out.push(Identity {
                    id: format!("ds/k={k}/i={i}/j={j}"),
                    anchor: "d_j s_j = d_{j+1} s_j = id",
                    lhs: vec![d(i), s(j)],
                    rhs: vec![id()],
                });
            } else if i > j + 1 && k >= 1 {
                out.push(Identity {
                    id: format!("ds/k={k}/i={i}/j={j}"),
                    anchor: "d_i s_j = s_j d_{i-1} for i > j + 1",
                    lhs: vec![d(i), s(j)],
                    rhs: vec![s(j), d(i - 1)],
                });
            }
        }
        // s_i s_j = s_{j+1} s_i, i <= j
        for i in 0..=j {
            let anchor = if i == j { "s_j s_j = s_{j+1} s_j" } else { "s_i s_j = s_{j+1} s_i for i < j" };
            out.push(Identity {
                id: format!("ss/k={k}/i={i}/j={j}"),
                anchor,
                lhs: vec![s(i), s(j)],
                rhs: vec![s(j + 1), s(i)],
            });
        }
    }
    out
}

/// Sweeps the simplicial identities over generators in context and random
/// diagrams, for every degree up to `k_max`.
pub fn verify_simplicial_identities(opts: &SweepOptions) -> VerificationReport {
    let mut report = VerificationReport::new("simplicial")
        .param("kmax", opts.k_max)
        .param("samples", opts.samples)
        .param("context", opts.max_context)
        .param("seed", opts.seed);
    for k in 0..=opts.k_max {
        let (gens, rand) = corpus(k, opts.max_context, per_degree(opts, k), opts.seed);
        run_identities(&mut report, &simplicial_identities(k), &gens, &rand, opts.seed);
    }
    // the triple-join instance, singled out
    let m = Diagram::generator(0, Generator::join(0)).expect("valid");
    let mut c = Check::new("ss/triple-join", "s_1 s_0 (m^0) = s_0 s_0 (m^0) in B_2");
    let l = chain(&[s(0), s(0)], &m).expect("in range");
    let r = chain(&[s(1), s(0)], &m).expect("in range");
    c.observe(equals(&l, &r), || format!("{} vs {}", crate::dsl::print_inline(&l), crate::dsl::print_inline(&r)));
    report.push(c);
    report
}

fn cofacial_identities(k: usize) -> Vec<Identity<'static>> {
    let mut out = vec![
        Identity {
            id: format!("cof/k={k}/d0"),
            anchor: "d_0 d^0 = id",
            lhs: vec![d(0), cf()],
            rhs: vec![id()],
        },
        Identity {
            id: format!("cof/k={k}/s0"),
            anchor: "s_0 d^0 = d^0 d^0",
            lhs: vec![s(0), cf()],
            rhs: vec![cf(), cf()],
        },
    ];
    for i in 1..=k + 1 {
        if k >= 1 {
            out.push(Identity {
                id: format!("cof/k={k}/d{i}"),
                anchor: "d_i d^0 = d^0 d_{i-1} for i > 0",
                lhs: vec![d(i), cf()],
                rhs: vec![cf(), d(i - 1)],
            });
        }
        out.push(Identity {
            id: format!("cof/k={k}/s{i}"),
            anchor: "s_i d^0 = d^0 s_{i-1} for i > 0",
            lhs: vec![s(i), cf()],
            rhs: vec![cf(), s(i - 1)],
        });
    }
    out
}

pub fn verify_cofacial_identities(opts: &SweepOptions) -> VerificationReport {
    let mut report = VerificationReport::new("cofacial")
        .param("kmax", opts.k_max)
        .param("samples", opts.samples)
        .param("context", opts.max_context)
        .param("seed", opts.seed);
    for k in 0..=opts.k_max {
        let (gens, rand) = corpus(k, opts.max_context, per_degree(opts, k), opts.seed);
        run_identities(&mut report, &cofacial_identities(k), &gens, &rand, opts.seed);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::canonicalize;

    fn beta2() -> Diagram {
        Diagram::from_placements(
            1,
            ObjWord::from_values(&[0, 1, 0, 1]),
            &[(Generator::cross(1, 0), 1), (Generator::join(0), 0)],
        )
        .unwrap()
    }

    #[test]
    fn faces_of_beta2() {
        let b = beta2();
        assert_eq!(face(0, &b).unwrap(), Diagram::identity(ObjWord::from_values(&[0, 0]), 0).unwrap());
        assert_eq!(face(1, &b).unwrap(), Diagram::generator(0, Generator::join(0)).unwrap());
    }

    #[test]
    fn degeneracy_of_join() {
        let m = Diagram::generator(0, Generator::join(0)).unwrap();
        let s0 = degeneracy(0, &m).unwrap();
        assert!(s0.validate().is_ok());
        assert_eq!(s0.src(), &ObjWord::from_values(&[0, 1, 0, 1]));
        assert_eq!(s0.tgt(), &ObjWord::from_values(&[0, 1]));
        assert_eq!(s0.generator_counts(), (0, 2, 1));
        let expected = Diagram::from_placements(
            1,
            ObjWord::from_values(&[0, 1, 0, 1]),
            &[(Generator::cross(1, 0), 1), (Generator::join(0), 0), (Generator::join(1), 1)],
        )
        .unwrap();
        assert!(equals(&s0, &expected));
    }

    #[test]
    fn degeneracy_of_emerge_and_cross() {
        let u = Diagram::generator(0, Generator::emerge(0)).unwrap();
        let su = degeneracy(0, &u).unwrap();
        assert_eq!(su.tgt(), &ObjWord::from_values(&[0, 1]));
        let t = Diagram::generator(2, Generator::cross(2, 0)).unwrap();
        assert_eq!(degeneracy(1, &t).unwrap().placements(), vec![(Generator::cross(3, 0), 0)]);
        for a in 0..=2 {
            let st = degeneracy(a, &t).unwrap();
            assert!(st.validate().is_ok(), "s_{a}");
        }
    }

    #[test]
    fn outputs_are_valid() {
        for k in 0..=2 {
            for g in whiskered_generators(k, 1) {
                for a in 0..=k {
                    assert!(degeneracy(a, &g).unwrap().validate().is_ok());
                    if k > 0 {
                        assert!(face(a, &g).unwrap().validate().is_ok());
                    }
                }
                assert!(coface0(&g).validate().is_ok());
            }
        }
    }

    #[test]
    fn coface_examples() {
        let m = Diagram::generator(0, Generator::join(0)).unwrap();
        assert_eq!(coface0(&m), Diagram::generator(1, Generator::join(1)).unwrap());
        assert_eq!(face(0, &coface0(&m)).unwrap(), m);
    }

    #[test]
    fn act_matches_elementary_operators() {
        let b = beta2();
        let e = MonotoneMap::coface(1, 1);
        assert_eq!(e.values(), &[0]);
        assert_eq!(e.act(&b).unwrap(), face(1, &b).unwrap());
        let h = MonotoneMap::codegeneracy(1, 0);
        assert_eq!(h.act(&b).unwrap(), degeneracy(0, &b).unwrap());
        assert_eq!(MonotoneMap::identity(1).act(&b).unwrap(), b);
    }

    #[test]
    fn act_word_is_preimage() {
        let a = MonotoneMap::new(2, vec![0, 0, 2]).unwrap();
        assert_eq!(a.act_word(&ObjWord::from_values(&[2, 1, 0])), ObjWord::from_values(&[2, 0, 1]));
        assert!(a.act(&beta2()).is_err(), "degree checked");
    }

    #[test]
    fn monotone_map_counts() {
        // C(j + k + 1, j + 1)
        assert_eq!(MonotoneMap::all(1, 1).len(), 3);
        assert_eq!(MonotoneMap::all(2, 3).len(), 20);
        assert!(MonotoneMap::new(1, vec![1, 0]).is_err());
    }

    #[test]
    fn face_and_degeneracy_are_monoidal() {
        let b = beta2();
        let t = Diagram::generator(1, Generator::cross(1, 0)).unwrap();
        let bt = b.tensor(&t).unwrap();
        for a in 0..=1 {
            assert_eq!(face(a, &bt).unwrap(), face(a, &b).unwrap().tensor(&face(a, &t).unwrap()).unwrap());
            assert_eq!(
                degeneracy(a, &bt).unwrap(),
                degeneracy(a, &b).unwrap().tensor(&degeneracy(a, &t).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn triple_join() {
        let m = Diagram::generator(0, Generator::join(0)).unwrap();
        let l = degeneracy(0, &degeneracy(0, &m).unwrap()).unwrap();
        let r = degeneracy(1, &degeneracy(0, &m).unwrap()).unwrap();
        assert_ne!(l, r);
        assert_eq!(canonicalize(&l), canonicalize(&r));
    }

    #[test]
    fn small_sweeps_pass() {
        let opts = SweepOptions { k_max: 2, samples: 30, max_context: 1, seed: 3 };
        let r = verify_simplicial_identities(&opts);
        assert!(r.passed(), "{r}");
        let r = verify_cofacial_identities(&opts);
        assert!(r.passed(), "{r}");
    }
}
