//! Objects and morphisms of the free monoidal categories `B_k`.
//!
//! An object is a word of labels in `0..=k`. A morphism is a [`Diagram`]: a
//! source word together with a list of whiskered generators ([`Slice`]s),
//! applied first to last. Three generators exist:
//!
//! * `Emerge(a)`: `() -> (a)`, a new strand of colour `a`;
//! * `Join(a)`: `(a, a) -> (a)`;
//! * `Cross(a, b)`: `(a, b) -> (b, a)`, only for `a > b`.
//!
//! Diagrams are plain words in the free category. Equality modulo the
//! unit/emergence relations and the interchange law lives in
//! [`crate::rewrite`].

use std::fmt;

use thiserror::Error;

/// A strand colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    pub fn value(self) -> u32 {
        self.0
    }

    pub(crate) fn idx(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for Label {
    fn from(v: u32) -> Self {
        Label(v)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An object of `B_k`: a finite, possibly empty, word of labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjWord(Vec<Label>);

impl ObjWord {
    pub fn new(labels: Vec<Label>) -> Self {
        ObjWord(labels)
    }

    pub fn empty() -> Self {
        ObjWord(Vec::new())
    }

    pub fn from_values(values: &[u32]) -> Self {
        ObjWord(values.iter().copied().map(Label).collect())
    }

    pub fn single(label: Label) -> Self {
        ObjWord(vec![label])
    }

    /// The word `(0 1 ... k)`.
    pub fn standard(k: usize) -> Self {
        ObjWord((0..=k as u32).map(Label).collect())
    }

    /// `n` concatenated copies of `(0 1 ... k)`.
    pub fn standard_power(k: usize, n: usize) -> Self {
        ObjWord::standard(k).repeat(n)
    }

    pub fn repeat(&self, n: usize) -> Self {
        ObjWord(self.0.repeat(n))
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }

    pub fn concat(&self, other: &ObjWord) -> ObjWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        ObjWord(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> ObjWord {
        ObjWord(self.0[range].to_vec())
    }

    pub fn max_label(&self) -> Option<Label> {
        self.0.iter().copied().max()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    /// Number of occurrences of each label `0..=k`.
    pub fn label_counts(&self, k: usize) -> Vec<usize> {
        let mut counts = vec![0; k + 1];
        for l in &self.0 {
            if l.idx() <= k {
                counts[l.idx()] += 1;
            }
        }
        counts
    }

    pub fn map_labels(&self, mut f: impl FnMut(Label) -> Label) -> ObjWord {
        ObjWord(self.0.iter().map(|&l| f(l)).collect())
    }

    /// Replace every label by a (possibly empty) word.
    pub fn flat_map_labels(&self, mut f: impl FnMut(Label) -> Vec<Label>) -> ObjWord {
        ObjWord(self.0.iter().flat_map(|&l| f(l)).collect())
    }
}

impl FromIterator<Label> for ObjWord {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        ObjWord(iter.into_iter().collect())
    }
}

impl fmt::Display for ObjWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// One of the three generating morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Emerge(Label),
    Join(Label),
    Cross(Label, Label),
}

impl Generator {
    pub fn emerge(a: u32) -> Self {
        Generator::Emerge(Label(a))
    }

    pub fn join(a: u32) -> Self {
        Generator::Join(Label(a))
    }

    pub fn cross(a: u32, b: u32) -> Self {
        Generator::Cross(Label(a), Label(b))
    }

    /// `(inputs, outputs)`.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Generator::Emerge(_) => (0, 1),
            Generator::Join(_) => (2, 1),
            Generator::Cross(..) => (2, 2),
        }
    }

    pub fn domain(&self) -> ObjWord {
        match *self {
            Generator::Emerge(_) => ObjWord::empty(),
            Generator::Join(a) => ObjWord::new(vec![a, a]),
            Generator::Cross(a, b) => ObjWord::new(vec![a, b]),
        }
    }

    pub fn codomain(&self) -> ObjWord {
        match *self {
            Generator::Emerge(a) | Generator::Join(a) => ObjWord::single(a),
            Generator::Cross(a, b) => ObjWord::new(vec![b, a]),
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        match *self {
            Generator::Emerge(a) | Generator::Join(a) => vec![a],
            Generator::Cross(a, b) => vec![a, b],
        }
    }

    pub fn map_labels(&self, mut f: impl FnMut(Label) -> Label) -> Generator {
        match *self {
            Generator::Emerge(a) => Generator::Emerge(f(a)),
            Generator::Join(a) => Generator::Join(f(a)),
            Generator::Cross(a, b) => Generator::Cross(f(a), f(b)),
        }
    }

    pub fn is_emerge(&self) -> bool {
        matches!(self, Generator::Emerge(_))
    }

    /// Every generator of `B_k`.
    pub fn all(k: usize) -> Vec<Generator> {
        let k = k as u32;
        let mut out = Vec::new();
        for a in 0..=k {
            out.push(Generator::emerge(a));
        }
        for a in 0..=k {
            out.push(Generator::join(a));
        }
        for a in 0..=k {
            for b in 0..a {
                out.push(Generator::cross(a, b));
            }
        }
        out
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Emerge(a) => write!(f, "u({a})"),
            Generator::Join(a) => write!(f, "m({a})"),
            Generator::Cross(a, b) => write!(f, "t({a},{b})"),
        }
    }
}

/// A generator with identity strands on either side: `left ⊔ gen ⊔ right`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slice {
    pub left: ObjWord,
    pub gen: Generator,
    pub right: ObjWord,
}

impl Slice {
    pub fn new(left: ObjWord, gen: Generator, right: ObjWord) -> Self {
        Slice { left, gen, right }
    }

    pub fn bare(gen: Generator) -> Self {
        Slice::new(ObjWord::empty(), gen, ObjWord::empty())
    }

    pub fn offset(&self) -> usize {
        self.left.len()
    }

    pub fn domain(&self) -> ObjWord {
        self.left.concat(&self.gen.domain()).concat(&self.right)
    }

    pub fn codomain(&self) -> ObjWord {
        self.left.concat(&self.gen.codomain()).concat(&self.right)
    }

    pub fn whiskered(&self, left: &ObjWord, right: &ObjWord) -> Slice {
        Slice::new(left.concat(&self.left), self.gen, self.right.concat(right))
    }
}

/// A single problem found by [`Diagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    LabelOutOfRange { slice: Option<usize>, label: Label, k: usize },
    CrossOrder { slice: usize, a: Label, b: Label },
    Chaining { slice: usize, expected: ObjWord, found: ObjWord },
    Target { expected: ObjWord, found: ObjWord },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LabelOutOfRange { slice: Some(i), label, k } => {
                write!(f, "slice {i}: label {label} out of range 0..={k}")
            }
            Violation::LabelOutOfRange { slice: None, label, k } => {
                write!(f, "boundary label {label} out of range 0..={k}")
            }
            Violation::CrossOrder { slice, a, b } => {
                write!(f, "slice {slice}: cross requires a > b, got t({a},{b})")
            }
            Violation::Chaining { slice, expected, found } => {
                write!(f, "slice {slice}: chaining error, expected domain {expected}, found {found}")
            }
            Violation::Target { expected, found } => {
                write!(f, "target mismatch: declared {expected}, computed {found}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("invalid diagram: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("boundary mismatch: {tgt} is not {src}")]
    BoundaryMismatch { tgt: ObjWord, src: ObjWord },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("label {label} out of range 0..={k}")]
    LabelOutOfRange { label: Label, k: usize },
    #[error("offset {offset} does not fit generator {gen} on a word of length {len}")]
    BadOffset { gen: Generator, offset: usize, len: usize },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A morphism of `B_k`, stored as a word in whiskered generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    k: usize,
    src: ObjWord,
    tgt: ObjWord,
    slices: Vec<Slice>,
}

impl Diagram {
    /// Builds a diagram, computing its target and checking every invariant.
    pub fn new(k: usize, src: ObjWord, slices: Vec<Slice>) -> Result<Diagram, DiagramError> {
        let tgt = slices.last().map(Slice::codomain).unwrap_or_else(|| src.clone());
        let d = Diagram { k, src, tgt, slices };
        d.validate().map_err(DiagramError::Invalid)?;
        Ok(d)
    }

    /// Assembles a diagram without any checks; use [`Diagram::validate`]
    /// to find out what is wrong with it.
    pub fn from_parts_unchecked(k: usize, src: ObjWord, tgt: ObjWord, slices: Vec<Slice>) -> Diagram {
        Diagram { k, src, tgt, slices }
    }

    pub fn identity(w: ObjWord, k: usize) -> Result<Diagram, DiagramError> {
        Diagram::new(k, w, Vec::new())
    }

    pub fn generator(k: usize, gen: Generator) -> Result<Diagram, DiagramError> {
        Diagram::new(k, gen.domain(), vec![Slice::bare(gen)])
    }

    /// Builds a diagram from `(generator, offset)` pairs, where the offset is
    /// the number of strands left of the generator.
    pub fn from_placements(
        k: usize,
        src: ObjWord,
        placements: &[(Generator, usize)],
    ) -> Result<Diagram, DiagramError> {
        let mut cur = src.clone();
        let mut slices = Vec::with_capacity(placements.len());
        for &(gen, offset) in placements {
            let (inp, _) = gen.arity();
            if offset + inp > cur.len() {
                return Err(DiagramError::BadOffset { gen, offset, len: cur.len() });
            }
            let slice = Slice::new(cur.slice(0..offset), gen, cur.slice(offset + inp..cur.len()));
            cur = slice.codomain();
            slices.push(slice);
        }
        Diagram::new(k, src, slices)
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn src(&self) -> &ObjWord {
        &self.src
    }

    pub fn tgt(&self) -> &ObjWord {
        &self.tgt
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn placements(&self) -> Vec<(Generator, usize)> {
        self.slices.iter().map(|s| (s.gen, s.offset())).collect()
    }

    /// Objects between consecutive slices, starting with the source.
    pub fn cuts(&self) -> Vec<ObjWord> {
        let mut out = Vec::with_capacity(self.slices.len() + 1);
        out.push(self.src.clone());
        out.extend(self.slices.iter().map(Slice::codomain));
        out
    }

    /// Widest intermediate object.
    pub fn max_width(&self) -> usize {
        let mut w = self.src.len();
        let mut cur = w;
        for s in &self.slices {
            let (i, o) = s.gen.arity();
            cur = cur + o - i;
            w = w.max(cur);
        }
        w
    }

    /// `(emerges, joins, crosses)`.
    pub fn generator_counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for s in &self.slices {
            match s.gen {
                Generator::Emerge(_) => c.0 += 1,
                Generator::Join(_) => c.1 += 1,
                Generator::Cross(..) => c.2 += 1,
            }
        }
        c
    }

    /// Reports every violated invariant; never aborts early.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let k = self.k;
        for w in [&self.src, &self.tgt] {
            for l in w.iter() {
                if l.idx() > k {
                    out.push(Violation::LabelOutOfRange { slice: None, label: l, k });
                }
            }
        }
        let mut cur = self.src.clone();
        for (i, s) in self.slices.iter().enumerate() {
            let labels = s.left.iter().chain(s.right.iter()).chain(s.gen.labels());
            for l in labels {
                if l.idx() > k {
                    out.push(Violation::LabelOutOfRange { slice: Some(i), label: l, k });
                }
            }
            if let Generator::Cross(a, b) = s.gen {
                if a <= b {
                    out.push(Violation::CrossOrder { slice: i, a, b });
                }
            }
            let dom = s.domain();
            if dom != cur {
                out.push(Violation::Chaining { slice: i, expected: cur.clone(), found: dom });
            }
            cur = s.codomain();
        }
        if cur != self.tgt {
            out.push(Violation::Target { expected: self.tgt.clone(), found: cur });
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// `self` followed by `next` (the categorical composite `next ∘ self`).
    pub fn compose(&self, next: &Diagram) -> Result<Diagram, DiagramError> {
        if self.k != next.k {
            return Err(DiagramError::DegreeMismatch(self.k, next.k));
        }
        if self.tgt != next.src {
            return Err(DiagramError::BoundaryMismatch { tgt: self.tgt.clone(), src: next.src.clone() });
        }
        let mut slices = self.slices.clone();
        slices.extend(next.slices.iter().cloned());
        Ok(Diagram { k: self.k, src: self.src.clone(), tgt: next.tgt.clone(), slices })
    }

    /// Monoidal product `self ⊔ other`; the slices of `self` run first.
    pub fn tensor(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        if self.k != other.k {
            return Err(DiagramError::DegreeMismatch(self.k, other.k));
        }
        let empty = ObjWord::empty();
        let mut slices: Vec<Slice> =
            self.slices.iter().map(|s| s.whiskered(&empty, &other.src)).collect();
        slices.extend(other.slices.iter().map(|s| s.whiskered(&self.tgt, &empty)));
        Ok(Diagram {
            k: self.k,
            src: self.src.concat(&other.src),
            tgt: self.tgt.concat(&other.tgt),
            slices,
        })
    }

    /// `left ⊔ self ⊔ right`.
    pub fn whisker(&self, left: &ObjWord, right: &ObjWord) -> Result<Diagram, DiagramError> {
        for l in left.iter().chain(right.iter()) {
            if l.idx() > self.k {
                return Err(DiagramError::LabelOutOfRange { label: l, k: self.k });
            }
        }
        Ok(Diagram {
            k: self.k,
            src: left.concat(&self.src).concat(right),
            tgt: left.concat(&self.tgt).concat(right),
            slices: self.slices.iter().map(|s| s.whiskered(left, right)).collect(),
        })
    }

    /// Same word, viewed in a larger ambient degree.
    pub fn with_degree(&self, k: usize) -> Result<Diagram, DiagramError> {
        Diagram::new(k, self.src.clone(), self.slices.clone())
    }
}

/// Tensor product of a non-empty list of diagrams of equal degree.
pub fn tensor_all(parts: &[Diagram], k: usize) -> Result<Diagram, DiagramError> {
    let mut acc = Diagram::identity(ObjWord::empty(), k)?;
    for p in parts {
        acc = acc.tensor(p)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta2() -> Diagram {
        let cross = Diagram::generator(1, Generator::cross(1, 0))
            .unwrap()
            .whisker(&ObjWord::from_values(&[0]), &ObjWord::from_values(&[1]))
            .unwrap();
        let join = Diagram::generator(1, Generator::join(0))
            .unwrap()
            .tensor(&Diagram::identity(ObjWord::from_values(&[1, 1]), 1).unwrap())
            .unwrap();
        cross.compose(&join).unwrap()
    }

    #[test]
    fn identity_has_no_slices() {
        let id = Diagram::identity(ObjWord::from_values(&[0, 1]), 1).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.src(), id.tgt());
        let unit = Diagram::identity(ObjWord::empty(), 0).unwrap();
        assert!(unit.src().is_empty());
        assert!(Diagram::identity(ObjWord::from_values(&[2]), 1).is_err());
    }

    #[test]
    fn beta2_boundaries() {
        let b = beta2();
        assert_eq!(b.src(), &ObjWord::from_values(&[0, 1, 0, 1]));
        assert_eq!(b.tgt(), &ObjWord::from_values(&[0, 1, 1]));
        assert!(b.validate().is_ok());
        assert_eq!(b.placements(), vec![(Generator::cross(1, 0), 1), (Generator::join(0), 0)]);
    }

    #[test]
    fn compose_with_identity_is_exact() {
        let b = beta2();
        let id = Diagram::identity(b.src().clone(), 1).unwrap();
        assert_eq!(id.compose(&b).unwrap(), b);
        let id = Diagram::identity(b.tgt().clone(), 1).unwrap();
        assert_eq!(b.compose(&id).unwrap(), b);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let b = beta2();
        let err = b.compose(&b).unwrap_err();
        assert!(matches!(err, DiagramError::BoundaryMismatch { .. }));
        let other = Diagram::identity(b.tgt().clone(), 2).unwrap();
        assert!(matches!(b.compose(&other), Err(DiagramError::DegreeMismatch(1, 2))));
    }

    #[test]
    fn tensor_with_unit() {
        let b = beta2();
        let unit = Diagram::identity(ObjWord::empty(), 1).unwrap();
        assert_eq!(b.tensor(&unit).unwrap(), b);
        assert_eq!(unit.tensor(&b).unwrap(), b);
        let m = Diagram::generator(0, Generator::join(0)).unwrap();
        let slice = m.tensor(&Diagram::identity(ObjWord::from_values(&[0, 0]), 0).unwrap()).unwrap();
        assert_eq!(slice.slices()[0].right, ObjWord::from_values(&[0, 0]));
    }

    #[test]
    fn validate_reports_cross_order() {
        let bad = Diagram::from_parts_unchecked(
            1,
            ObjWord::from_values(&[0, 1]),
            ObjWord::from_values(&[1, 0]),
            vec![Slice::bare(Generator::cross(0, 1))],
        );
        let errs = bad.validate().unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].to_string().contains("cross requires a > b"));
    }

    #[test]
    fn validate_reports_chaining() {
        let bad = Diagram::from_parts_unchecked(
            0,
            ObjWord::from_values(&[0]),
            ObjWord::from_values(&[0]),
            vec![Slice::bare(Generator::join(0))],
        );
        let errs = bad.validate().unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, Violation::Chaining { .. })));
    }

    #[test]
    fn boundary_arithmetic() {
        let d = Diagram::from_placements(
            1,
            ObjWord::from_values(&[0, 1]),
            &[(Generator::emerge(1), 0), (Generator::cross(1, 0), 0), (Generator::join(1), 1)],
        )
        .unwrap();
        let (e, j, _) = d.generator_counts();
        assert_eq!(d.tgt().len() as isize - d.src().len() as isize, e as isize - j as isize);
    }

    #[test]
    fn generator_list() {
        // 3 emerges, 3 joins, 3 crosses
        assert_eq!(Generator::all(2).len(), 9);
        for g in Generator::all(3) {
            assert!(Diagram::generator(3, g).is_ok());
        }
    }
}
