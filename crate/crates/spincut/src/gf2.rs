//! Symplectic GF(2) linear algebra and quadratic forms.
//!
//! A quadratic form on a symplectic GF(2) space `(V, ω)` is a map
//! `q: V → Z₂` with `q(a+b) = q(a) + q(b) + ω(a,b)`. The Arf invariant
//! of such a form is
//!
//! ```text
//! Arf(q) = 2^{-g} Σ_{a ∈ V} (-1)^{q(a)}  ∈ {+1, -1},   dim V = 2g.
//! ```
//!
//! Vectors are packed into `u64` words, so the ambient dimension is capped
//! at 64, far beyond what the exhaustive operations allow anyway.

use std::fmt;

/// Largest ambient dimension representable in a packed word.
pub const MAX_DIM: usize = 64;

/// Dimension cap for [`arf_naive`]; `2^24` evaluations is the ceiling.
pub const ARF_NAIVE_MAX_DIM: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    /// Ambient dimension is odd, zero-diagonal fails or `gram` is singular.
    InvalidSymplecticSpace(String),
    /// `arf_naive` called on a space above [`ARF_NAIVE_MAX_DIM`].
    DimensionGuard { dim: usize, max: usize },
    /// A claimed zero-Lagrangian set fails one of its defining conditions.
    LagrangianPrecondition { i: usize, j: usize, condition: &'static str },
    /// A set of vectors expected to form a basis does not.
    SingularBasis,
}

impl fmt::Display for Gf2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gf2Error::InvalidSymplecticSpace(msg) => write!(f, "invalid symplectic space: {msg}"),
            Gf2Error::DimensionGuard { dim, max } => {
                write!(f, "dimension {dim} exceeds the guard {max}")
            }
            Gf2Error::LagrangianPrecondition { i, j, condition } => {
                write!(f, "vectors ({i}, {j}) violate {condition}")
            }
            Gf2Error::SingularBasis => write!(f, "vectors do not form a basis"),
        }
    }
}

impl std::error::Error for Gf2Error {}

/// A vector over GF(2), bit `i` is the coefficient of the `i`-th ambient
/// basis vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfVector {
    bits: u64,
    dim: u32,
}

impl GfVector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        GfVector { bits: 0, dim: dim as u32 }
    }

    pub fn from_bits(bits: u64, dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        let mask = if dim == 64 { !0 } else { (1u64 << dim) - 1 };
        GfVector { bits: bits & mask, dim: dim as u32 }
    }

    /// The `i`-th ambient basis vector.
    pub fn unit(i: usize, dim: usize) -> Self {
        assert!(i < dim && dim <= MAX_DIM);
        GfVector { bits: 1 << i, dim: dim as u32 }
    }

    pub fn from_slice(bits: &[u8]) -> Self {
        let mut word = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                word |= 1 << i;
            }
        }
        GfVector::from_bits(word, bits.len())
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!(i < self.dim());
        ((self.bits >> i) & 1) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn add(&self, other: &GfVector) -> GfVector {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        GfVector { bits: self.bits ^ other.bits, dim: self.dim }
    }

    /// Parity of the coordinate-wise product, `Σ aᵢbᵢ mod 2`.
    pub fn dot(&self, other: &GfVector) -> u8 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        ((self.bits & other.bits).count_ones() & 1) as u8
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.dim()).map(|i| self.bit(i)).collect()
    }
}

impl fmt::Debug for GfVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfVector(")?;
        for i in 0..self.dim() {
            write!(f, "{}", self.bit(i))?;
        }
        write!(f, ")")
    }
}

/// A matrix over GF(2), one `u64` word per row.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<u64>,
    cols: usize,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_DIM);
        BitMatrix { rows: vec![0; rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<GfVector>) -> Self {
        let cols = rows.first().map_or(0, |r| r.dim());
        BitMatrix { rows: rows.iter().map(|r| r.bits()).collect(), cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        ((self.rows[i] >> j) & 1) as u8
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        if v & 1 == 1 {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn row(&self, i: usize) -> GfVector {
        GfVector::from_bits(self.rows[i], self.cols)
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &GfVector) -> GfVector {
        assert_eq!(v.dim(), self.cols, "dimension mismatch");
        let mut out = 0u64;
        for (i, &row) in self.rows.iter().enumerate() {
            out |= (((row & v.bits()).count_ones() as u64) & 1) << i;
        }
        GfVector::from_bits(out, self.nrows())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zero(self.cols, self.nrows());
        for i in 0..self.nrows() {
            for j in 0..self.cols {
                if self.get(i, j) == 1 {
                    t.set(j, i, 1);
                }
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| (rows[r] >> col) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.nrows();
        assert_eq!(n, self.cols);
        let mut a = self.rows.clone();
        let mut inv = BitMatrix::identity(n).rows;
        for col in 0..n {
            let p = (col..n).find(|&r| (a[r] >> col) & 1 == 1)?;
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && (a[r] >> col) & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Some(BitMatrix { rows: inv, cols: n })
    }

    /// One solution `x` of `A x = b`, with free variables set to zero.
    pub fn solve(&self, b: &GfVector) -> Option<GfVector> {
        assert_eq!(b.dim(), self.nrows());
        let mut a = self.rows.clone();
        let mut rhs: Vec<u8> = (0..self.nrows()).map(|i| b.bit(i)).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..a.len()).find(|&r| (a[r] >> col) & 1 == 1) else {
                continue;
            };
            a.swap(rank, p);
            rhs.swap(rank, p);
            for r in 0..a.len() {
                if r != rank && (a[r] >> col) & 1 == 1 {
                    a[r] ^= a[rank];
                    rhs[r] ^= rhs[rank];
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        // inconsistent rows
        if rhs[rank..].contains(&1) {
            return None;
        }
        let mut x = 0u64;
        for &(r, c) in &pivots {
            if rhs[r] == 1 {
                x |= 1 << c;
            }
        }
        Some(GfVector::from_bits(x, self.cols))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for i in 0..self.nrows() {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A `2g`-dimensional GF(2) space with a symplectic form given by its Gram
/// matrix on the ambient basis.
#[derive(Clone, PartialEq, Eq)]
pub struct SymplecticSpace {
    dim: usize,
    gram: BitMatrix,
}

impl SymplecticSpace {
    /// Validates symmetry, zero diagonal and invertibility of `gram`.
    pub fn new(gram: BitMatrix) -> Result<Self, Gf2Error> {
        let dim = gram.nrows();
        if dim != gram.ncols() {
            return Err(Gf2Error::InvalidSymplecticSpace("gram not square".into()));
        }
        if !dim.is_multiple_of(2) {
            return Err(Gf2Error::InvalidSymplecticSpace(format!("odd dimension {dim}")));
        }
        for i in 0..dim {
            if gram.get(i, i) != 0 {
                return Err(Gf2Error::InvalidSymplecticSpace(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Gf2Error::InvalidSymplecticSpace(format!(
                        "not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if dim > 0 && gram.inverse().is_none() {
            return Err(Gf2Error::InvalidSymplecticSpace("gram is singular".into()));
        }
        Ok(SymplecticSpace { dim, gram })
    }

    /// The standard space with hyperbolic pairs `(e_i, f_i)` at indices
    /// `(2i, 2i+1)`.
    pub fn standard(g: usize) -> Self {
        let dim = 2 * g;
        let mut gram = BitMatrix::zero(dim, dim);
        for i in 0..g {
            gram.set(2 * i, 2 * i + 1, 1);
            gram.set(2 * i + 1, 2 * i, 1);
        }
        SymplecticSpace { dim, gram }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn genus(&self) -> usize {
        self.dim / 2
    }

    pub fn gram(&self) -> &BitMatrix {
        &self.gram
    }

    /// `ω(a, b)`.
    pub fn omega(&self, a: &GfVector, b: &GfVector) -> u8 {
        assert_eq!(a.dim(), self.dim, "dimension mismatch");
        a.dot(&self.gram.mul_vec(b))
    }

    /// A symplectic basis `(a_1, b_1, …, a_g, b_g)` with `ω(a_i, b_j) = δ_ij`
    /// and all other pairings zero, by greedy hyperbolic-pair extraction.
    pub fn symplectic_basis(&self) -> Vec<(GfVector, GfVector)> {
        let mut rest: Vec<GfVector> = (0..self.dim).map(|i| GfVector::unit(i, self.dim)).collect();
        let mut pairs = Vec::with_capacity(self.dim / 2);
        while !rest.is_empty() {
            // first vector pairing nontrivially with some later one
            let mut found = None;
            'outer: for i in 0..rest.len() {
                for j in 0..rest.len() {
                    if i != j && self.omega(&rest[i], &rest[j]) == 1 {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let (ia, ib) = found.expect("gram invertible, a hyperbolic pair must exist");
            let a = rest[ia];
            let b = rest[ib];
            pairs.push((a, b));
            let mut next: Vec<GfVector> = Vec::with_capacity(rest.len().saturating_sub(2));
            for (k, v) in rest.iter().enumerate() {
                if k == ia || k == ib {
                    continue;
                }
                let mut w = *v;
                if self.omega(&w, &b) == 1 {
                    w = w.add(&a);
                }
                if self.omega(&w, &a) == 1 {
                    w = w.add(&b);
                }
                next.push(w);
            }
            // drop dependent vectors so the loop terminates with a basis
            rest = echelon_independent(&next);
        }
        pairs
    }
}

impl fmt::Debug for SymplecticSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymplecticSpace(dim={}, gram={:?})", self.dim, self.gram)
    }
}

/// Reduces a spanning set to an independent one (row echelon over GF(2)),
/// keeping earlier vectors when possible.
fn echelon_independent(vectors: &[GfVector]) -> Vec<GfVector> {
    let mut basis: Vec<GfVector> = Vec::new();
    let mut reduced: Vec<u64> = Vec::new();
    for v in vectors {
        let mut w = v.bits();
        for &r in &reduced {
            let lead = 63 - r.leading_zeros();
            if (w >> lead) & 1 == 1 {
                w ^= r;
            }
        }
        if w != 0 {
            reduced.push(w);
            reduced.sort_unstable_by_key(|r| std::cmp::Reverse(*r));
            basis.push(*v);
        }
    }
    basis
}

/// A Z₂-valued quadratic refinement of the symplectic form, stored by its
/// values on the ambient basis.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    space: SymplecticSpace,
    basis_values: GfVector,
}

impl QuadraticForm {
    pub fn new(space: SymplecticSpace, basis_values: GfVector) -> Self {
        assert_eq!(basis_values.dim(), space.dim(), "dimension mismatch");
        QuadraticForm { space, basis_values }
    }

    pub fn from_bits(space: SymplecticSpace, values: &[u8]) -> Self {
        QuadraticForm::new(space, GfVector::from_slice(values))
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn basis_values(&self) -> GfVector {
        self.basis_values
    }

    /// Evaluates `q` by polarization:
    /// `q(Σ vᵢ bᵢ) = Σ vᵢ q(bᵢ) + Σ_{i<j} vᵢ vⱼ ω(bᵢ, bⱼ)`.
    pub fn eval(&self, v: &GfVector) -> u8 {
        assert_eq!(v.dim(), self.space.dim(), "dimension mismatch");
        let mut acc = v.dot(&self.basis_values);
        let bits = v.bits();
        let mut rest = bits;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // pairs (i, j) with j > i
            let later = bits & !((1u64 << i) | ((1u64 << i) - 1));
            acc ^= ((self.space.gram.rows[i] & later).count_ones() & 1) as u8;
        }
        acc
    }

    /// `ω(a, b)` of the underlying space.
    pub fn omega(&self, a: &GfVector, b: &GfVector) -> u8 {
        self.space.omega(a, b)
    }

    /// Adds a linear functional `ℓ` (given by its basis values); the result
    /// is again a quadratic form for the same symplectic form.
    pub fn add_functional(&self, ell: &GfVector) -> QuadraticForm {
        assert_eq!(ell.dim(), self.space.dim(), "dimension mismatch");
        QuadraticForm { space: self.space.clone(), basis_values: self.basis_values.add(ell) }
    }

    /// Block sum of two forms on the block sum of their spaces.
    pub fn direct_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        let d1 = self.space.dim();
        let d2 = other.space.dim();
        assert!(d1 + d2 <= MAX_DIM);
        let mut gram = BitMatrix::zero(d1 + d2, d1 + d2);
        for i in 0..d1 {
            gram.rows[i] = self.space.gram.rows[i];
        }
        for i in 0..d2 {
            gram.rows[d1 + i] = other.space.gram.rows[i] << d1;
        }
        let space = SymplecticSpace { dim: d1 + d2, gram };
        let values = self.basis_values.bits() | (other.basis_values.bits() << d1);
        QuadraticForm { space, basis_values: GfVector::from_bits(values, d1 + d2) }
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticForm(values={:?}, {:?})", self.basis_values, self.space)
    }
}

/// Arf invariant by summing `(-1)^{q(a)}` over the whole space.
///
/// Guarded at [`ARF_NAIVE_MAX_DIM`]; use [`arf_fast`] beyond it.
pub fn arf_naive(q: &QuadraticForm) -> Result<i8, Gf2Error> {
    let dim = q.space().dim();
    if dim > ARF_NAIVE_MAX_DIM {
        return Err(Gf2Error::DimensionGuard { dim, max: ARF_NAIVE_MAX_DIM });
    }
    let mut sum: i64 = 0;
    for bits in 0..(1u64 << dim) {
        let v = GfVector::from_bits(bits, dim);
        sum += if q.eval(&v) == 0 { 1 } else { -1 };
    }
    let g = dim / 2;
    let arf = sum >> g; // sum = ±2^g
    debug_assert!(arf == 1 || arf == -1);
    Ok(arf as i8)
}

/// Arf invariant via symplectic normalization.
///
/// On a symplectic basis `(a_i, b_i)` the form restricted to each hyperbolic
/// plane contributes `-1` exactly when `q(a_i) = q(b_i) = 1`, so
/// `Arf(q) = (-1)^{#{i : q(a_i) q(b_i) = 1}}`.
pub fn arf_fast(q: &QuadraticForm) -> i8 {
    let pairs = q.space().symplectic_basis();
    let mut minus = 0usize;
    for (a, b) in &pairs {
        if q.eval(a) == 1 && q.eval(b) == 1 {
            minus += 1;
        }
    }
    if minus.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// For a form with Arf invariant `+1`, returns `g` independent vectors
/// `e_1, …, e_g` with `ω(e_i, e_j) = 0` and `q(e_i) = 0`; `None` when the
/// Arf invariant is `-1`.
///
/// Follows the constructive normalization: take a symplectic basis, relabel
/// each hyperbolic plane so that either `q(a_i) = q(b_i) = 0` (the two
/// zero-valued vectors chosen in order `a_i, b_i, a_i + b_i`) or the plane is
/// all-ones; pair up the all-ones planes via `a_{2j-1} + b_{2j}` and
/// `a_{2j} + b_{2j-1}`.
pub fn lagrangian_zero_basis(q: &QuadraticForm) -> Option<Vec<GfVector>> {
    let pairs = q.space().symplectic_basis();
    let mut zero_e: Vec<GfVector> = Vec::new();
    let mut ones_planes: Vec<(GfVector, GfVector)> = Vec::new();
    for (a, b) in &pairs {
        let qa = q.eval(a);
        let qb = q.eval(b);
        if qa == 1 && qb == 1 {
            ones_planes.push((*a, *b));
        } else {
            // exactly two of {a, b, a+b} evaluate to zero
            let ab = a.add(b);
            let candidates = [*a, *b, ab];
            let zeros: Vec<GfVector> =
                candidates.iter().copied().filter(|v| q.eval(v) == 0).collect();
            debug_assert_eq!(zeros.len(), 2);
            zero_e.push(zeros[0]);
        }
    }
    if !ones_planes.len().is_multiple_of(2) {
        return None; // Arf(q) = -1
    }
    for pair in ones_planes.chunks(2) {
        let (a1, b1) = pair[0];
        let (a2, b2) = pair[1];
        zero_e.push(a1.add(&b2));
        zero_e.push(a2.add(&b1));
    }
    debug_assert_eq!(zero_e.len(), q.space().genus());
    Some(zero_e)
}

/// Completes a zero-Lagrangian set `e_1, …, e_g` to a full symplectic basis
/// `e_1, f_1, …, e_g, f_g` with `q ≡ 0` on all basis vectors.
///
/// The preconditions (independence, `ω(e_i, e_j) = 0`, `q(e_i) = 0`) are
/// checked and reported with the failing pair on violation.
pub fn complete_to_symplectic(
    q: &QuadraticForm,
    e: &[GfVector],
) -> Result<Vec<GfVector>, Gf2Error> {
    let g = q.space().genus();
    let dim = q.space().dim();
    if e.len() != g {
        return Err(Gf2Error::LagrangianPrecondition {
            i: e.len(),
            j: g,
            condition: "expected exactly g vectors",
        });
    }
    for (i, v) in e.iter().enumerate() {
        if q.eval(v) != 0 {
            return Err(Gf2Error::LagrangianPrecondition { i, j: i, condition: "q(e_i) = 0" });
        }
        for (j, w) in e.iter().enumerate().skip(i + 1) {
            if q.space().omega(v, w) != 0 {
                return Err(Gf2Error::LagrangianPrecondition {
                    i,
                    j,
                    condition: "omega(e_i, e_j) = 0",
                });
            }
        }
    }
    if BitMatrix::from_rows(e.to_vec()).rank() != g {
        return Err(Gf2Error::LagrangianPrecondition {
            i: 0,
            j: 0,
            condition: "linear independence",
        });
    }

    // rows of A are e_k^T G, so (A v)_k = omega(e_k, v)
    let gram = q.space().gram();
    let a_rows: Vec<GfVector> = e.iter().map(|ek| gram.mul_vec(ek)).collect();
    let a = BitMatrix::from_rows(a_rows);
    let mut fs: Vec<GfVector> = Vec::with_capacity(g);
    for i in 0..g {
        let target = GfVector::unit(i, g);
        let mut v = a.solve(&target).ok_or(Gf2Error::SingularBasis)?;
        // make the new vector pair trivially with the earlier f's;
        // adding e_j leaves every omega(e_k, v) unchanged
        for j in 0..i {
            if q.space().omega(&fs[j], &v) == 1 {
                v = v.add(&e[j]);
            }
        }
        if q.eval(&v) == 1 {
            v = v.add(&e[i]);
        }
        fs.push(v);
    }
    let mut out = Vec::with_capacity(dim);
    for i in 0..g {
        out.push(e[i]);
        out.push(fs[i]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn form(g: usize, values: &[u8]) -> QuadraticForm {
        QuadraticForm::from_bits(SymplecticSpace::standard(g), values)
    }

    /// Random invertible symmetric zero-diagonal gram via a random change of
    /// basis from the standard one.
    fn random_space(g: usize, rng: &mut StdRng) -> SymplecticSpace {
        let dim = 2 * g;
        let std = SymplecticSpace::standard(g);
        // random invertible matrix
        let m = loop {
            let rows: Vec<GfVector> = (0..dim)
                .map(|_| GfVector::from_bits(rng.gen::<u64>(), dim))
                .collect();
            let m = BitMatrix::from_rows(rows);
            if m.rank() == dim {
                break m;
            }
        };
        // gram'_{ij} = omega(m_i, m_j)
        let mut gram = BitMatrix::zero(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                gram.set(i, j, std.omega(&m.row(i), &m.row(j)));
            }
        }
        SymplecticSpace::new(gram).unwrap()
    }

    #[test]
    fn eval_polarization_g1() {
        let q = form(1, &[0, 0]);
        let e = GfVector::unit(0, 2);
        let f = GfVector::unit(1, 2);
        assert_eq!(q.eval(&e.add(&f)), 1); // q(e+f) = 0+0+omega(e,f) = 1
        let q = form(1, &[0, 1]);
        assert_eq!(q.eval(&e.add(&f)), 0);
        assert_eq!(q.eval(&GfVector::zero(2)), 0);
    }

    #[test]
    fn eval_g2_disjoint_pair() {
        let q = form(2, &[0, 0, 0, 0]);
        let e1 = GfVector::unit(0, 4);
        let e2 = GfVector::unit(2, 4);
        assert_eq!(q.eval(&e1.add(&e2)), 0); // omega(e1, e2) = 0
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn eval_dimension_mismatch_panics() {
        let q = form(1, &[0, 0]);
        q.eval(&GfVector::zero(4));
    }

    #[test]
    fn arf_naive_examples() {
        assert_eq!(arf_naive(&form(1, &[0, 0])).unwrap(), 1);
        assert_eq!(arf_naive(&form(1, &[1, 1])).unwrap(), -1);
        assert_eq!(arf_naive(&form(2, &[1, 1, 1, 1])).unwrap(), 1);
    }

    #[test]
    fn arf_naive_guard() {
        let q = form(13, &[0; 26]);
        assert!(matches!(arf_naive(&q), Err(Gf2Error::DimensionGuard { dim: 26, .. })));
    }

    #[test]
    fn arf_fast_matches_naive_exhaustive_small_g() {
        for g in 0..=2 {
            let dim = 2 * g;
            for bits in 0..(1u64 << dim) {
                let q = QuadraticForm::new(
                    SymplecticSpace::standard(g),
                    GfVector::from_bits(bits, dim),
                );
                assert_eq!(arf_fast(&q), arf_naive(&q).unwrap(), "g={g} bits={bits:b}");
            }
        }
    }

    #[test]
    fn arf_fast_matches_naive_random_up_to_g6() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let g = rng.gen_range(3..=6);
            let space = random_space(g, &mut rng);
            let q = QuadraticForm::new(space, GfVector::from_bits(rng.gen(), 2 * g));
            let fast = arf_fast(&q);
            assert!(fast == 1 || fast == -1);
            if 2 * g <= 12 {
                assert_eq!(fast, arf_naive(&q).unwrap());
            }
        }
    }

    #[test]
    fn arf_of_empty_form_is_plus_one() {
        let q = form(0, &[]);
        assert_eq!(arf_fast(&q), 1);
        assert_eq!(arf_naive(&q).unwrap(), 1);
    }

    #[test]
    fn direct_sum_multiplicativity_basic_cases() {
        let plus = form(1, &[0, 0]);
        let minus = form(1, &[1, 1]);
        assert_eq!(arf_fast(&plus.direct_sum(&plus)), 1);
        assert_eq!(arf_fast(&plus.direct_sum(&minus)), -1);
        assert_eq!(arf_fast(&minus.direct_sum(&minus)), 1);
    }

    #[test]
    fn direct_sum_multiplicativity_random() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let g1 = rng.gen_range(1..=3);
            let g2 = rng.gen_range(1..=3);
            let q1 = QuadraticForm::new(random_space(g1, &mut rng), GfVector::from_bits(rng.gen(), 2 * g1));
            let q2 = QuadraticForm::new(random_space(g2, &mut rng), GfVector::from_bits(rng.gen(), 2 * g2));
            assert_eq!(arf_fast(&q1.direct_sum(&q2)), arf_fast(&q1) * arf_fast(&q2));
        }
    }

    fn check_conditions_3(q: &QuadraticForm, e: &[GfVector]) {
        assert_eq!(e.len(), q.space().genus());
        assert_eq!(BitMatrix::from_rows(e.to_vec()).rank(), e.len());
        for (i, v) in e.iter().enumerate() {
            assert_eq!(q.eval(v), 0, "q(e_{i}) != 0");
            for w in &e[i + 1..] {
                assert_eq!(q.space().omega(v, w), 0);
            }
        }
    }

    fn check_conditions_2(q: &QuadraticForm, basis: &[GfVector]) {
        let g = q.space().genus();
        assert_eq!(basis.len(), 2 * g);
        for v in basis {
            assert_eq!(q.eval(v), 0);
        }
        for i in 0..g {
            for j in 0..g {
                assert_eq!(q.space().omega(&basis[2 * i], &basis[2 * j]), 0);
                assert_eq!(q.space().omega(&basis[2 * i + 1], &basis[2 * j + 1]), 0);
                let expect = u8::from(i == j);
                assert_eq!(q.space().omega(&basis[2 * i], &basis[2 * j + 1]), expect);
            }
        }
        assert_eq!(BitMatrix::from_rows(basis.to_vec()).rank(), 2 * g);
    }

    #[test]
    fn lagrangian_examples() {
        // q(e)=1, q(f)=0: the zero vectors in order are f, e+f; pick f
        let q = form(1, &[1, 0]);
        let e = lagrangian_zero_basis(&q).unwrap();
        assert_eq!(e, vec![GfVector::unit(1, 2)]);

        // all four values 1: two all-ones planes pair up
        let q = form(2, &[1, 1, 1, 1]);
        let e = lagrangian_zero_basis(&q).unwrap();
        let e1f2 = GfVector::unit(0, 4).add(&GfVector::unit(3, 4));
        let e2f1 = GfVector::unit(2, 4).add(&GfVector::unit(1, 4));
        assert_eq!(e, vec![e1f2, e2f1]);
        check_conditions_3(&q, &e);

        assert!(lagrangian_zero_basis(&form(1, &[1, 1])).is_none());
    }

    #[test]
    fn lagrangian_exists_iff_arf_plus_one() {
        for g in 1..=2 {
            let dim = 2 * g;
            for bits in 0..(1u64 << dim) {
                let q = QuadraticForm::new(
                    SymplecticSpace::standard(g),
                    GfVector::from_bits(bits, dim),
                );
                let basis = lagrangian_zero_basis(&q);
                assert_eq!(basis.is_some(), arf_fast(&q) == 1);
                if let Some(e) = basis {
                    check_conditions_3(&q, &e);
                }
            }
        }
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..300 {
            let g = rng.gen_range(3..=6);
            let q = QuadraticForm::new(random_space(g, &mut rng), GfVector::from_bits(rng.gen(), 2 * g));
            let basis = lagrangian_zero_basis(&q);
            assert_eq!(basis.is_some(), arf_fast(&q) == 1);
            if let Some(e) = basis {
                check_conditions_3(&q, &e);
            }
        }
    }

    #[test]
    fn complete_examples() {
        // q(e)=0, q(f)=1 -> {e, f+e}
        let q = form(1, &[0, 1]);
        let basis = complete_to_symplectic(&q, &[GfVector::unit(0, 2)]).unwrap();
        assert_eq!(basis, vec![GfVector::unit(0, 2), GfVector::from_bits(0b11, 2)]);
        check_conditions_2(&q, &basis);

        // q = 0 on basis -> identity case {e, f}
        let q = form(1, &[0, 0]);
        let basis = complete_to_symplectic(&q, &[GfVector::unit(0, 2)]).unwrap();
        assert_eq!(basis, vec![GfVector::unit(0, 2), GfVector::unit(1, 2)]);

        // output of lagrangian_zero_basis on the all-ones g=2 form
        let q = form(2, &[1, 1, 1, 1]);
        let e = lagrangian_zero_basis(&q).unwrap();
        let basis = complete_to_symplectic(&q, &e).unwrap();
        check_conditions_2(&q, &basis);
    }

    #[test]
    fn complete_rejects_bad_input() {
        let q = form(1, &[1, 0]);
        // q(e) = 1 violates the value condition
        let err = complete_to_symplectic(&q, &[GfVector::unit(0, 2)]).unwrap_err();
        assert!(matches!(err, Gf2Error::LagrangianPrecondition { condition: "q(e_i) = 0", .. }));

        let q = form(2, &[0, 0, 0, 0]);
        let err = complete_to_symplectic(
            &q,
            &[GfVector::unit(0, 4), GfVector::unit(1, 4)],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Gf2Error::LagrangianPrecondition { i: 0, j: 1, condition: "omega(e_i, e_j) = 0" }
        ));
    }

    #[test]
    fn complete_random_roundtrip() {
        let mut rng = StdRng::seed_from_u64(31);
        let mut seen = 0;
        while seen < 200 {
            let g = rng.gen_range(1..=5);
            let q = QuadraticForm::new(random_space(g, &mut rng), GfVector::from_bits(rng.gen(), 2 * g));
            if let Some(e) = lagrangian_zero_basis(&q) {
                let basis = complete_to_symplectic(&q, &e).unwrap();
                check_conditions_2(&q, &basis);
                seen += 1;
            }
        }
    }

    #[test]
    fn affine_structure() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..100 {
            let g = rng.gen_range(1..=5);
            let q = QuadraticForm::new(random_space(g, &mut rng), GfVector::from_bits(rng.gen(), 2 * g));
            let ell = GfVector::from_bits(rng.gen(), 2 * g);
            let q2 = q.add_functional(&ell);
            // still a valid form: basis values re-evaluate to themselves
            for i in 0..2 * g {
                let u = GfVector::unit(i, 2 * g);
                assert_eq!(q2.eval(&u), q2.basis_values().bit(i));
            }
            assert_eq!(q2.add_functional(&ell), q);
            let a = arf_fast(&q2);
            assert!(a == 1 || a == -1);
        }
    }

    #[test]
    fn functional_vanishing_on_zero_basis_keeps_sign_in_range() {
        let q = form(2, &[1, 1, 1, 1]);
        let e = lagrangian_zero_basis(&q).unwrap();
        // functional vanishing on the zero basis, e.g. e_1^* + f_1^* does not
        // necessarily vanish; just check the codomain after any shift
        let ell = GfVector::unit(0, 4);
        let q2 = q.add_functional(&ell);
        for v in &e {
            let _ = q2.eval(v);
        }
        let a = arf_fast(&q2);
        assert!(a == 1 || a == -1);
    }

    #[test]
    fn lagrangian_tiebreak_goldens() {
        // deterministic choices: first zero vector in the order e, f, e+f
        let cases = [
            (vec![0u8, 0], vec![GfVector::unit(0, 2)]),
            (vec![1, 0], vec![GfVector::unit(1, 2)]),
            (vec![0, 1], vec![GfVector::unit(0, 2)]),
        ];
        for (values, expected) in cases {
            let q = form(1, &values);
            assert_eq!(lagrangian_zero_basis(&q).unwrap(), expected, "values {values:?}");
        }
    }

    proptest::proptest! {
        #[test]
        fn prop_arf_fast_equals_naive(g in 1usize..=5, bits: u64, seed: u64) {
            let mut rng = StdRng::seed_from_u64(seed);
            let space = random_space(g, &mut rng);
            let q = QuadraticForm::new(space, GfVector::from_bits(bits, 2 * g));
            proptest::prop_assert_eq!(arf_fast(&q), arf_naive(&q).unwrap());
        }

        #[test]
        fn prop_polarization_identity(g in 1usize..=5, bits: u64, a: u64, b: u64, seed: u64) {
            let mut rng = StdRng::seed_from_u64(seed);
            let space = random_space(g, &mut rng);
            let q = QuadraticForm::new(space, GfVector::from_bits(bits, 2 * g));
            let va = GfVector::from_bits(a, 2 * g);
            let vb = GfVector::from_bits(b, 2 * g);
            let lhs = q.eval(&va.add(&vb));
            let rhs = (q.eval(&va) + q.eval(&vb) + q.omega(&va, &vb)) % 2;
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}
