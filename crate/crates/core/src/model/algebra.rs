//! Finite-dimensional commutative algebras over `Z/p`, with `⋄` the tensor
//! product and maps stored as dense matrices.
//!
//! A map `K^{⋄a} -> K^{⋄b}` is a `d^b × d^a` matrix. Basis vectors of
//! `K^{⋄l}` are indexed with the leftmost tensor factor most significant.

use std::fmt;

use super::{Comparison, ModelError, MonoidWithTwist};
use crate::report::Mode;

/// Largest dimension a matrix side may have.
pub const MAX_DIM: usize = 4096;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 {
            for r in 0..self.rows {
                write!(f, "\n  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
            }
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    /// `self · other` mod `p`.
    pub fn mul(&self, other: &Matrix, p: u32) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let p = p as u64;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc = vec![0u64; other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (x, &b) in acc.iter_mut().zip(row) {
                    *x = (*x + a * b as u64) % p;
                }
            }
            for (c, v) in acc.into_iter().enumerate() {
                out.set(r, c, v as u32);
            }
        }
        out
    }

    /// Kronecker product, `self` on the left (more significant).
    pub fn kron(&self, other: &Matrix, p: u32) -> Matrix {
        let p = p as u64;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1) as u64;
                if a == 0 {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let v = (a * other.get(r2, c2) as u64) % p;
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, v as u32);
                    }
                }
            }
        }
        out
    }
}

/// How the twist acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistKind {
    /// `x ⊗ y -> y ⊗ x`.
    Swap,
    /// The identity; a negative control.
    Identity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraValidation {
    /// Reject structure constants that are not associative, commutative
    /// and unital.
    Strict,
    /// Only require associativity and a unit; used for negative controls.
    AllowNoncommutative,
}

/// A map in an [`AlgebraBackend`]: a matrix together with its levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    pub from: usize,
    pub to: usize,
    pub matrix: Matrix,
}

#[derive(Clone, Debug)]
pub struct AlgebraBackend {
    name: String,
    p: u32,
    dim: usize,
    unit: Vec<u32>,
    mult: Matrix,
    twist: Matrix,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Solves `a x = b` over `Z/p`; `a` has `n` unknowns.
fn solve_mod(mut a: Vec<Vec<u64>>, mut b: Vec<u64>, n: usize, p: u64) -> Option<Vec<u64>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_multiple_of(p)) else { continue };
        a.swap(r, piv);
        b.swap(r, piv);
        let inv = pow_mod(a[r][c], p - 2, p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        b[r] = b[r] * inv % p;
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p * p - f * a[r][j] % p) % p;
                }
                b[i] = (b[i] + p - f * b[r] % p) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| b[i] != 0) {
        return None;
    }
    let mut x = vec![0; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i];
    }
    Some(x)
}

impl AlgebraBackend {
    /// Builds the algebra with basis `e_0..e_{d-1}` and products
    /// `e_i e_j = Σ_l structure[(i*d + j)*d + l] e_l`. Without `unit`, the
    /// unit is solved for.
    pub fn new(
        name: impl Into<String>,
        p: u32,
        dim: usize,
        structure: &[u32],
        unit: Option<&[u32]>,
        validation: AlgebraValidation,
        twist: TwistKind,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let bad = |m: String| ModelError::Config(format!("{name}: {m}"));
        if !is_prime(p) || p > 65521 {
            return Err(bad(format!("modulus {p} must be a prime below 65536")));
        }
        if dim == 0 || dim * dim > MAX_DIM {
            return Err(bad(format!("dimension {dim} out of range")));
        }
        if structure.len() != dim * dim * dim {
            return Err(bad(format!("expected {} structure constants, got {}", dim * dim * dim, structure.len())));
        }
        let c = |i: usize, j: usize, l: usize| structure[(i * dim + j) * dim + l] as u64 % p as u64;
        let pp = p as u64;
        let mut mult = Matrix::zeros(dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for l in 0..dim {
                    mult.set(l, i * dim + j, c(i, j, l) as u32);
                }
            }
        }
        // associativity: (e_i e_j) e_l = e_i (e_j e_l)
        for i in 0..dim {
            for j in 0..dim {
                for l in 0..dim {
                    for out in 0..dim {
                        let left: u64 = (0..dim).map(|s| c(i, j, s) * c(s, l, out) % pp).sum::<u64>() % pp;
                        let right: u64 = (0..dim).map(|s| c(j, l, s) * c(i, s, out) % pp).sum::<u64>() % pp;
                        if left != right {
                            return Err(bad(format!("not associative at (e{i} e{j}) e{l}")));
                        }
                    }
                }
            }
        }
        if validation == AlgebraValidation::Strict {
            for i in 0..dim {
                for j in 0..dim {
                    if (0..dim).any(|l| c(i, j, l) != c(j, i, l)) {
                        return Err(bad(format!("not commutative: e{i} e{j} != e{j} e{i}")));
                    }
                }
            }
        }
        let unit: Vec<u32> = match unit {
            Some(u) if u.len() == dim => u.iter().map(|&x| x % p).collect(),
            Some(u) => return Err(bad(format!("unit has {} entries, expected {dim}", u.len()))),
            None => {
                // Σ_s u_s c(s, j, l) = δ_jl and Σ_s u_s c(j, s, l) = δ_jl
                let mut a = Vec::new();
                let mut b = Vec::new();
                for j in 0..dim {
                    for l in 0..dim {
                        a.push((0..dim).map(|s| c(s, j, l)).collect());
                        b.push(u64::from(j == l));
                        a.push((0..dim).map(|s| c(j, s, l)).collect());
                        b.push(u64::from(j == l));
                    }
                }
                let x = solve_mod(a, b, dim, pp).ok_or_else(|| bad("no unit element".into()))?;
                x.into_iter().map(|v| v as u32).collect()
            }
        };
        for j in 0..dim {
            for l in 0..dim {
                let want = u64::from(j == l);
                let lu: u64 = (0..dim).map(|s| unit[s] as u64 * c(s, j, l) % pp).sum::<u64>() % pp;
                let ru: u64 = (0..dim).map(|s| unit[s] as u64 * c(j, s, l) % pp).sum::<u64>() % pp;
                if lu != want || ru != want {
                    return Err(bad("given unit is not a two-sided unit".into()));
                }
            }
        }
        let twist = match twist {
            TwistKind::Identity => Matrix::identity(dim * dim),
            TwistKind::Swap => {
                let mut t = Matrix::zeros(dim * dim, dim * dim);
                for i in 0..dim {
                    for j in 0..dim {
                        t.set(j * dim + i, i * dim + j, 1);
                    }
                }
                t
            }
        };
        Ok(AlgebraBackend { name, p, dim, unit, mult, twist })
    }

    /// `Z/2[x]/(x^2)` with basis `1, x`.
    pub fn dual_numbers_f2() -> Self {
        // e0 e0 = e0, e0 e1 = e1 e0 = e1, e1 e1 = 0
        let s = [1, 0, 0, 1, 0, 1, 0, 0];
        AlgebraBackend::new("F2[x]/(x^2)", 2, 2, &s, Some(&[1, 0]), AlgebraValidation::Strict, TwistKind::Swap)
            .expect("valid algebra")
    }

    /// `Z/3 × Z/3` with the idempotent basis, unit `e0 + e1`.
    pub fn diagonal_f3() -> Self {
        let s = [1, 0, 0, 0, 0, 0, 0, 1];
        AlgebraBackend::new("F3 x F3", 3, 2, &s, None, AlgebraValidation::Strict, TwistKind::Swap)
            .expect("valid algebra")
    }

    /// Upper triangular 2×2 matrices over `Z/2` (basis `E11, E12, E22`),
    /// which are not commutative.
    pub fn upper_triangular_f2(twist: TwistKind) -> Self {
        let d = 3;
        let mut s = vec![0u32; d * d * d];
        let mut set = |i: usize, j: usize, l: usize| s[(i * d + j) * d + l] = 1;
        // E11 E11 = E11, E11 E12 = E12, E12 E22 = E12, E22 E22 = E22
        set(0, 0, 0);
        set(0, 1, 1);
        set(1, 2, 1);
        set(2, 2, 2);
        AlgebraBackend::new("UT2(F2)", 2, d, &s, None, AlgebraValidation::AllowNoncommutative, twist)
            .expect("valid algebra")
    }

    /// A commutative algebra paired with the identity as twist.
    pub fn with_identity_twist(&self) -> Self {
        AlgebraBackend { name: format!("{} (t = id)", self.name), twist: Matrix::identity(self.dim * self.dim), ..self.clone() }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit_vector(&self) -> &[u32] {
        &self.unit
    }

    /// Dimension of `K^{⋄l}`, if it fits.
    pub fn level_dim(&self, level: usize) -> Option<usize> {
        let mut n: usize = 1;
        for _ in 0..level {
            n = n.checked_mul(self.dim)?;
            if n > MAX_DIM {
                return None;
            }
        }
        Some(n)
    }

    fn dim_of(&self, level: usize) -> usize {
        self.level_dim(level).unwrap_or_else(|| panic!("level {level} exceeds the {MAX_DIM} dimension cap"))
    }

    /// Applies `K^{⋄left} ⋄ g ⋄ K^{⋄right}` after `acc`, without forming
    /// the Kronecker product.
    fn apply_whiskered(&self, acc: &AlgebraMap, left: usize, g: &AlgebraMap, right: usize) -> AlgebraMap {
        assert_eq!(acc.to, left + g.from + right, "levels chain");
        let p = self.p as u64;
        let (dl, dr) = (self.dim_of(left), self.dim_of(right));
        let (gi, go) = (g.matrix.cols, g.matrix.rows);
        let new_to = left + g.to + right;
        let rows = dl * go * dr;
        let cols = acc.matrix.cols;
        let mut out = Matrix::zeros(rows, cols);
        for c in 0..cols {
            for a in 0..dl {
                for b in 0..dr {
                    for x in 0..gi {
                        let v = acc.matrix.get((a * gi + x) * dr + b, c) as u64;
                        if v == 0 {
                            continue;
                        }
                        for y in 0..go {
                            let w = g.matrix.get(y, x) as u64;
                            if w == 0 {
                                continue;
                            }
                            let r = (a * go + y) * dr + b;
                            let cur = out.get(r, c) as u64;
                            out.set(r, c, ((cur + v * w) % p) as u32);
                        }
                    }
                }
            }
        }
        AlgebraMap { from: acc.from, to: new_to, matrix: out }
    }
}

impl MonoidWithTwist for AlgebraBackend {
    type Map = AlgebraMap;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn supports_level(&self, level: usize) -> bool {
        self.level_dim(level).is_some()
    }

    fn identity(&self, level: usize) -> AlgebraMap {
        AlgebraMap { from: level, to: level, matrix: Matrix::identity(self.dim_of(level)) }
    }

    fn unit(&self) -> AlgebraMap {
        AlgebraMap { from: 0, to: 1, matrix: Matrix::from_rows(self.dim, 1, self.unit.clone()) }
    }

    fn multiplication(&self) -> AlgebraMap {
        AlgebraMap { from: 2, to: 1, matrix: self.mult.clone() }
    }

    fn twist(&self) -> AlgebraMap {
        AlgebraMap { from: 2, to: 2, matrix: self.twist.clone() }
    }

    fn compose(&self, first: &AlgebraMap, then: &AlgebraMap) -> AlgebraMap {
        assert_eq!(first.to, then.from, "levels chain");
        AlgebraMap { from: first.from, to: then.to, matrix: then.matrix.mul(&first.matrix, self.p) }
    }

    fn whisker(&self, left: usize, f: &AlgebraMap, right: usize) -> AlgebraMap {
        let l = Matrix::identity(self.dim_of(left));
        let r = Matrix::identity(self.dim_of(right));
        AlgebraMap { from: left + f.from + right, to: left + f.to + right, matrix: l.kron(&f.matrix, self.p).kron(&r, self.p) }
    }

    fn tensor(&self, f: &AlgebraMap, g: &AlgebraMap) -> AlgebraMap {
        AlgebraMap { from: f.from + g.from, to: f.to + g.to, matrix: f.matrix.kron(&g.matrix, self.p) }
    }

    fn apply_slice(&self, acc: &AlgebraMap, left: usize, g: &AlgebraMap, right: usize) -> AlgebraMap {
        self.apply_whiskered(acc, left, g, right)
    }

    fn levels(&self, f: &AlgebraMap) -> (usize, usize) {
        (f.from, f.to)
    }

    fn compare(&self, f: &AlgebraMap, g: &AlgebraMap) -> Comparison {
        if (f.from, f.to) != (g.from, g.to) {
            return Comparison::Differ {
                witness: format!("levels {}->{} vs {}->{}", f.from, f.to, g.from, g.to),
            };
        }
        for c in 0..f.matrix.cols {
            for r in 0..f.matrix.rows {
                if f.matrix.get(r, c) != g.matrix.get(r, c) {
                    let fc: Vec<u32> = (0..f.matrix.rows).map(|r| f.matrix.get(r, c)).collect();
                    let gc: Vec<u32> = (0..g.matrix.rows).map(|r| g.matrix.get(r, c)).collect();
                    return Comparison::Differ {
                        witness: format!("basis vector {c} of level {}: {fc:?} vs {gc:?}", f.from),
                    };
                }
            }
        }
        Comparison::Equal { mode: Mode::Exact, points: f.matrix.cols as u64 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_and_mul() {
        let a = Matrix::from_rows(2, 2, vec![1, 1, 0, 1]);
        let i = Matrix::identity(2);
        assert_eq!(a.mul(&i, 2), a);
        let k = i.kron(&a, 2);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(2, 3), 1);
        assert_eq!(k.get(0, 2), 0);
    }

    #[test]
    fn unit_is_solved() {
        let b = AlgebraBackend::diagonal_f3();
        assert_eq!(b.unit_vector(), &[1, 1]);
        let u = AlgebraBackend::upper_triangular_f2(TwistKind::Swap);
        assert_eq!(u.unit_vector(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_structures() {
        // e1 e0 != e0 e1
        let s = [1, 0, 0, 1, 0, 0, 0, 0];
        let e = AlgebraBackend::new("bad", 2, 2, &s, None, AlgebraValidation::Strict, TwistKind::Swap);
        assert!(e.is_err());
        assert!(AlgebraBackend::new("bad", 4, 1, &[1], None, AlgebraValidation::Strict, TwistKind::Swap).is_err());
        assert!(AlgebraBackend::new("zero", 2, 1, &[0], None, AlgebraValidation::Strict, TwistKind::Swap).is_err());
    }

    #[test]
    fn apply_slice_matches_whisker() {
        let b = AlgebraBackend::dual_numbers_f2();
        let acc = b.whisker(0, &b.twist(), 1);
        for (l, r) in [(0, 1), (1, 0)] {
            let fast = b.apply_slice(&acc, l, &b.multiplication(), r);
            let slow = b.compose(&acc, &b.whisker(l, &b.multiplication(), r));
            assert_eq!(fast, slow);
        }
        let fast = b.apply_slice(&acc, 1, &b.unit(), 2);
        let slow = b.compose(&acc, &b.whisker(1, &b.unit(), 2));
        assert_eq!(fast, slow);
    }

    #[test]
    fn levels_are_capped() {
        let b = AlgebraBackend::dual_numbers_f2();
        assert!(b.supports_level(12));
        assert!(!b.supports_level(13));
    }
}
