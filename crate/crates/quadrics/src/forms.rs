//! Dense matrices over an abstract field, quadratic forms as symmetric
//! Gram matrices, and echelonized subspaces.
//!
//! Everything is exact; dimensions here are tiny (at most 9), so plain
//! Gaussian elimination is the right tool throughout.

use crate::error::Error;
use crate::scalars::field::Field;
use crate::scalars::{Rat, Rationals};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Row-major dense matrix over the field described by `F`.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Mat { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Mat {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(field: F, rows: &[&[i64]]) -> Self {
        let conv: Vec<Vec<F::Elem>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, conv)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Mat { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other.get(k, j));
                    let s = f.add(out.get(i, j), &t);
                    out.set(i, j, s);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    /// P^T * self * P.
    pub fn congruence(&self, p: &Self) -> Self {
        p.transpose().matmul(self).matmul(p)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn submatrix(&self, keep_rows: &[usize], keep_cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.field.clone(), keep_rows.len(), keep_cols.len());
        for (a, &i) in keep_rows.iter().enumerate() {
            for (b, &j) in keep_cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Smallest-index nonzero pivot below r keeps runs deterministic.
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot nonzero");
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {x : self * x = 0}, echelonized, with a
    /// deterministic free-variable order.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut out = vec![];
        let piv_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if piv_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![f.zero(); self.cols];
            vec[free] = f.one();
            for (c, p) in piv_of_col.iter().enumerate() {
                if let Some(row) = p {
                    vec[c] = f.neg(r.get(*row, free));
                }
            }
            out.push(vec);
        }
        out
    }

    /// Determinant by fraction-producing Gaussian elimination.
    pub fn det(&self) -> F::Elem {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = f.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
                return f.zero();
            };
            if pr != c {
                for j in 0..n {
                    let a = m.get(c, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(c, j, b);
                    m.set(pr, j, a);
                }
                acc = f.neg(&acc);
            }
            let pivot = m.get(c, c).clone();
            acc = f.mul(&acc, &pivot);
            let inv = f.inv(&pivot).expect("pivot nonzero");
            for i in c + 1..n {
                if f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        acc
    }

    /// Inverse via Gauss-Jordan; None when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let n = self.rows;
        let mut aug = Self::zeros(f.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            let one = f.one();
            aug.set(i, n + i, one);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut out = Self::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// Applies an elementwise field change.
    pub fn map<G: Field>(&self, field: G, f: impl Fn(&F::Elem) -> G::Elem) -> Mat<G> {
        Mat {
            field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl Mat<Rationals> {
    /// Clears denominators and divides by the content: the unique positive
    /// primitive integer matrix proportional to self, with the factor.
    /// Zero matrices come back unchanged with factor 1.
    pub fn primitive_integer(&self) -> (Mat<Rationals>, Rat) {
        let mut lcm = BigInt::one();
        for e in &self.data {
            lcm = lcm.lcm(e.denom());
        }
        let mut content = BigInt::zero();
        for e in &self.data {
            content = content.gcd(&(e.numer() * (&lcm / e.denom())));
        }
        if content.is_zero() {
            return (self.clone(), Rat::one());
        }
        let scale = Rat::new(lcm, content);
        (self.scale(&scale), scale)
    }

    /// Exact rank by modular elimination over enough word-size primes.
    ///
    /// Scaling by the denominator lcm gives an integer matrix with the
    /// same rank. For each prime p the mod-p rank is a lower bound, and
    /// once the product of the primes used exceeds the Hadamard-style
    /// bound (m * h)^m on any minor (m = min dimension, h = largest
    /// absolute entry), every minor of size max_rank + 1 is divisible
    /// by a number larger than itself, hence zero. So the maximum of
    /// the modular ranks is the rational rank, with no elimination over
    /// Q and none of its coefficient growth.
    pub fn rank_modular(&self) -> usize {
        let m = self.rows.min(self.cols);
        if m == 0 {
            return 0;
        }
        let mut lcm = BigInt::one();
        for e in &self.data {
            lcm = lcm.lcm(e.denom());
        }
        let ints: Vec<BigInt> = self
            .data
            .iter()
            .map(|e| e.numer() * (&lcm / e.denom()))
            .collect();
        let height = ints.iter().map(|v| v.abs()).max().unwrap();
        if height.is_zero() {
            return 0;
        }
        let minor_bound = (BigInt::from(m) * &height).pow(m as u32);

        let mut rank = 0;
        let mut certified = BigInt::one();
        let mut candidate: u64 = (1 << 62) - 1;
        while certified <= minor_bound {
            while !crate::scalars::intfactor::is_prime(&BigInt::from(candidate)) {
                candidate -= 2;
            }
            let p = candidate;
            candidate -= 2;
            let pb = BigInt::from(p);
            let mut rows: Vec<Vec<u64>> = (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| {
                            let r = ints[i * self.cols + j].mod_floor(&pb);
                            r.to_u64().expect("reduced residue fits u64")
                        })
                        .collect()
                })
                .collect();
            rank = rank.max(rank_mod_p(&mut rows, p));
            certified *= &pb;
            if rank == m {
                break;
            }
        }
        rank
    }
}

/// Row echelon rank of a matrix over F_p, in place.
fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    use crate::scalars::field::{invmod, mulmod};
    let nr = rows.len();
    let nc = rows[0].len();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(piv) = (r..nr).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = invmod(rows[r][c], p).expect("pivot is a unit");
        for j in c..nc {
            rows[r][j] = mulmod(rows[r][j], inv, p);
        }
        for i in r + 1..nr {
            if rows[i][c] != 0 {
                let f = rows[i][c];
                for j in c..nc {
                    let sub = mulmod(f, rows[r][j], p);
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// A quadratic form, stored as its symmetric Gram matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct QuadraticForm<F: Field> {
    gram: Mat<F>,
}

/// Change of basis diagonalizing a form: basis^T * gram * basis is the
/// diagonal matrix with the recorded entries.
#[derive(Clone, Debug)]
pub struct Diagonalization<F: Field> {
    pub basis: Mat<F>,
    pub diag: Vec<F::Elem>,
}

impl<F: Field> QuadraticForm<F> {
    pub fn new(gram: Mat<F>) -> Result<Self> {
        if gram.rows() != gram.cols() {
            return Err(Error::InvalidForm(format!(
                "gram matrix is {}x{}, not square",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidForm("gram matrix is not symmetric".into()));
        }
        Ok(QuadraticForm { gram })
    }

    pub fn from_diag(field: F, entries: &[F::Elem]) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        QuadraticForm { gram: m }
    }

    pub fn gram(&self) -> &Mat<F> {
        &self.gram
    }

    pub fn field(&self) -> &F {
        self.gram.field()
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// q(x) = x^T A x.
    pub fn eval(&self, x: &[F::Elem]) -> F::Elem {
        let f = self.field();
        let ax = self.gram.mul_vec(x);
        let mut acc = f.zero();
        for (a, b) in x.iter().zip(&ax) {
            acc = f.add(&acc, &f.mul(a, b));
        }
        acc
    }

    /// Polar pairing b(x, y) = x^T A y.
    pub fn bilinear(&self, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
        let f = self.field();
        let ay = self.gram.mul_vec(y);
        let mut acc = f.zero();
        for (a, b) in x.iter().zip(&ay) {
            acc = f.add(&acc, &f.mul(a, b));
        }
        acc
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn det(&self) -> F::Elem {
        self.gram.det()
    }

    /// Basis of the radical {x : A x = 0}.
    pub fn radical(&self) -> Vec<Vec<F::Elem>> {
        self.gram.kernel()
    }

    /// Restriction to the span of the given basis rows.
    pub fn restrict(&self, basis: &[Vec<F::Elem>]) -> QuadraticForm<F> {
        let b = Mat::from_rows(self.field().clone(), basis.to_vec()).transpose();
        QuadraticForm { gram: self.gram.congruence(&b) }
    }

    /// Symmetric diagonalization by congruence. Pivot policy, smallest
    /// index first: a nonzero diagonal entry at or after the current
    /// position (swap), else the first row with a usable off-diagonal
    /// entry j, adding row and column j into it (needs char != 2).
    pub fn diagonalize(&self) -> Result<Diagonalization<F>> {
        let f = self.field().clone();
        if f.char_is_two() {
            return Err(Error::Precondition(
                "diagonalization needs characteristic != 2".into(),
            ));
        }
        let n = self.dim();
        let mut a = self.gram.clone();
        let mut p = Mat::identity(f.clone(), n);

        // Column operation col_i += c * col_j applied to both a (with the
        // mirrored row operation) and the accumulated basis p.
        for step in 0..n {
            if f.is_zero(a.get(step, step)) {
                // Look for a later nonzero diagonal entry to swap in.
                if let Some(k) = (step + 1..n).find(|&k| !f.is_zero(a.get(k, k))) {
                    swap_sym(&mut a, &mut p, step, k);
                } else if let Some((i, j)) = first_offdiag(&f, &a, step) {
                    // Make position (i, i) nonzero: col_i += col_j, then
                    // move it up to `step` if needed.
                    add_col_sym(&f, &mut a, &mut p, i, j, &f.one());
                    debug_assert!(!f.is_zero(a.get(i, i)));
                    if i != step {
                        swap_sym(&mut a, &mut p, step, i);
                    }
                } else {
                    continue; // remaining block is zero
                }
            }
            let pivot = a.get(step, step).clone();
            let inv = f.inv(&pivot).expect("pivot nonzero");
            for j in step + 1..n {
                if f.is_zero(a.get(step, j)) {
                    continue;
                }
                let c = f.neg(&f.mul(a.get(step, j), &inv));
                add_col_sym(&f, &mut a, &mut p, j, step, &c);
            }
        }
        let diag = (0..n).map(|i| a.get(i, i).clone()).collect::<Vec<_>>();
        debug_assert!({
            let check = self.gram.congruence(&p);
            (0..n).all(|i| (0..n).all(|j| {
                if i == j {
                    check.get(i, j) == &diag[i]
                } else {
                    f.is_zero(check.get(i, j))
                }
            }))
        });
        Ok(Diagonalization { basis: p, diag })
    }
}

fn swap_sym<F: Field>(a: &mut Mat<F>, p: &mut Mat<F>, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let x = a.get(i, c).clone();
        let y = a.get(j, c).clone();
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for r in 0..n {
        let x = a.get(r, i).clone();
        let y = a.get(r, j).clone();
        a.set(r, i, y);
        a.set(r, j, x);
    }
    for r in 0..p.rows() {
        let x = p.get(r, i).clone();
        let y = p.get(r, j).clone();
        p.set(r, i, y);
        p.set(r, j, x);
    }
}

/// col_i += c * col_j and row_i += c * row_j on a; col_i += c * col_j on p.
fn add_col_sym<F: Field>(
    f: &F,
    a: &mut Mat<F>,
    p: &mut Mat<F>,
    i: usize,
    j: usize,
    c: &F::Elem,
) {
    assert_ne!(i, j);
    let n = a.rows();
    for r in 0..n {
        let v = f.add(a.get(r, i), &f.mul(c, a.get(r, j)));
        a.set(r, i, v);
    }
    for col in 0..n {
        let v = f.add(a.get(i, col), &f.mul(c, a.get(j, col)));
        a.set(i, col, v);
    }
    for r in 0..p.rows() {
        let v = f.add(p.get(r, i), &f.mul(c, p.get(r, j)));
        p.set(r, i, v);
    }
}

/// First (row-major) off-diagonal entry a_ij != 0 with step <= i < j.
fn first_offdiag<F: Field>(f: &F, a: &Mat<F>, step: usize) -> Option<(usize, usize)> {
    let n = a.rows();
    for i in step..n {
        for j in i + 1..n {
            if !f.is_zero(a.get(i, j)) {
                return Some((i, j));
            }
        }
    }
    None
}

impl QuadraticForm<Rationals> {
    pub fn from_i64_gram(rows: &[&[i64]]) -> Result<Self> {
        Self::new(Mat::from_i64_rows(Rationals, rows))
    }

    /// Signature (positives, negatives, zeros) over the reals.
    pub fn signature(&self) -> Result<(usize, usize, usize)> {
        let d = self.diagonalize()?;
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        for e in &d.diag {
            if e.is_zero() {
                zero += 1;
            } else if e.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        Ok((pos, neg, zero))
    }

    /// Diagonal entries of a rational diagonalization, zeros dropped,
    /// each reduced to its squarefree integer representative.
    pub fn diagonal_square_classes(&self) -> Result<Vec<BigInt>> {
        let d = self.diagonalize()?;
        d.diag
            .iter()
            .filter(|e| !e.is_zero())
            .map(crate::scalars::squares::square_class)
            .collect()
    }
}

/// Echelonized subspace of F^n, stored as reduced basis rows.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Mat<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn from_rows(field: F, ambient: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ambient));
        if rows.is_empty() {
            return Subspace {
                ambient,
                basis: Mat::zeros(field, 0, ambient),
                pivots: vec![],
            };
        }
        let m = Mat::from_rows(field.clone(), rows);
        let (r, pivots) = m.rref();
        let keep: Vec<Vec<F::Elem>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        let basis = if keep.is_empty() {
            Mat::zeros(field, 0, ambient)
        } else {
            Mat::from_rows(field, keep)
        };
        Subspace { ambient, basis, pivots }
    }

    /// Right kernel of a matrix as a subspace of its column space domain.
    pub fn kernel_of(m: &Mat<F>) -> Self {
        Self::from_rows(m.field().clone(), m.cols(), m.kernel())
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let f = self.basis.field();
        // Reduce v against the echelon basis.
        let mut w = v.to_vec();
        for (row, &c) in self.pivots.iter().enumerate() {
            if f.is_zero(&w[c]) {
                continue;
            }
            let factor = w[c].clone();
            for j in 0..self.ambient {
                w[j] = f.sub(&w[j], &f.mul(&factor, self.basis.get(row, j)));
            }
        }
        w.iter().all(|x| f.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::Fp;
    use crate::scalars::{rat, rat_int};
    use proptest::prelude::*;

    fn qmat(rows: &[&[i64]]) -> Mat<Rationals> {
        Mat::from_i64_rows(Rationals, rows)
    }

    #[test]
    fn det_rank_kernel_agree() {
        let m = qmat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(m.det(), rat_int(0));
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x == &rat_int(0)));
        let inv = qmat(&[&[2, 1], &[1, 1]]).inverse().unwrap();
        assert_eq!(inv, qmat(&[&[1, -1], &[-1, 2]]));
    }

    #[test]
    fn modular_rank_matches_rational_elimination() {
        let cases: Vec<Mat<Rationals>> = vec![
            qmat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]),
            qmat(&[&[0, 0], &[0, 0]]),
            qmat(&[&[2, 4, 6], &[1, 2, 3]]),
            qmat(&[&[1, 0, 0, 5], &[0, 3, 0, -2], &[0, 0, 0, 0], &[2, 3, 0, 8]]),
        ];
        for m in &cases {
            assert_eq!(m.rank_modular(), m.rank());
        }
        // Rational entries: rank is invariant under row scaling.
        let mut m = qmat(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        for j in 0..3 {
            let v = m.get(0, j).clone() / rat_int(7);
            m.set(0, j, v);
        }
        assert_eq!(m.rank_modular(), m.rank());
    }

    #[test]
    fn hyperbolic_plane_diagonalizes_despite_zero_diagonal() {
        let q = QuadraticForm::from_i64_gram(&[&[0, 1], &[1, 0]]).unwrap();
        let d = q.diagonalize().unwrap();
        assert_eq!(d.diag.len(), 2);
        assert!(!d.diag[0].is_zero() && !d.diag[1].is_zero());
        assert_eq!(q.signature().unwrap(), (1, 1, 0));
    }

    #[test]
    fn eight_variable_antidiagonal_is_split() {
        let mut g = Mat::zeros(Rationals, 8, 8);
        for i in 0..8 {
            g.set(i, 7 - i, rat_int(1));
        }
        let q = QuadraticForm::new(g).unwrap();
        assert_eq!(q.signature().unwrap(), (4, 4, 0));
        assert_eq!(q.rank(), 8);
    }

    #[test]
    fn radical_and_restriction() {
        // diag(1, 1, 0): radical is the last axis.
        let q = QuadraticForm::from_diag(Rationals, &[rat_int(1), rat_int(1), rat_int(0)]);
        let rad = q.radical();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad[0], vec![rat_int(0), rat_int(0), rat_int(1)]);
        let r = q.restrict(&[
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
        ]);
        assert_eq!(r.dim(), 2);
        assert_eq!(r.rank(), 2);
    }

    #[test]
    fn rejects_asymmetric_gram() {
        let m = qmat(&[&[1, 2], &[3, 4]]);
        assert!(matches!(QuadraticForm::new(m), Err(Error::InvalidForm(_))));
    }

    #[test]
    fn fp_rank_matches_rational_reduction() {
        let m = Mat::from_i64_rows(Fp::new(5), &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        // Mod 5 the matrix still has rank 2.
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn primitive_integer_scaling() {
        let m = Mat::from_rows(
            Rationals,
            vec![vec![rat(1, 2), rat(3, 4)], vec![rat(3, 4), rat(5, 2)]],
        );
        let (p, s) = m.primitive_integer();
        assert_eq!(s, rat(4, 1));
        assert_eq!(p, qmat(&[&[2, 3], &[3, 10]]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Sylvester: the signature is invariant under congruence by any
        /// invertible change of basis.
        #[test]
        fn signature_is_congruence_invariant(
            entries in proptest::collection::vec(-6i64..=6, 10),
            shears in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3), 1..6),
        ) {
            let n = 4;
            let mut g = Mat::zeros(Rationals, n, n);
            let mut it = entries.into_iter();
            for i in 0..n {
                for j in i..n {
                    let v = rat_int(it.next().unwrap());
                    g.set(i, j, v.clone());
                    g.set(j, i, v);
                }
            }
            let q = QuadraticForm::new(g.clone()).unwrap();

            // Invertible P as a product of shears (unit determinant).
            let mut p = Mat::identity(Rationals, n);
            for (i, j, c) in shears {
                if i == j { continue; }
                let mut s = Mat::identity(Rationals, n);
                s.set(i, j, rat_int(c));
                p = p.matmul(&s);
            }
            let q2 = QuadraticForm::new(g.congruence(&p)).unwrap();
            prop_assert_eq!(q.signature().unwrap(), q2.signature().unwrap());
            prop_assert_eq!(q.rank(), q2.rank());
        }

        /// The diagonalization certificate is exact: basis^T A basis equals
        /// the claimed diagonal.
        #[test]
        fn diagonalization_certificate(
            entries in proptest::collection::vec(-9i64..=9, 15),
        ) {
            let n = 5;
            let mut g = Mat::zeros(Rationals, n, n);
            let mut it = entries.into_iter();
            for i in 0..n {
                for j in i..n {
                    let v = rat_int(it.next().unwrap());
                    g.set(i, j, v.clone());
                    g.set(j, i, v);
                }
            }
            let q = QuadraticForm::new(g.clone()).unwrap();
            let d = q.diagonalize().unwrap();
            let check = g.congruence(&d.basis);
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        prop_assert_eq!(check.get(i, j), &d.diag[i]);
                    } else {
                        prop_assert_eq!(check.get(i, j), &rat_int(0));
                    }
                }
            }
            // The change of basis must be invertible.
            prop_assert!(d.basis.det() != rat_int(0));
        }
    }
}
