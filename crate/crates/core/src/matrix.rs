//! Dense matrices over GF(q) and Gaussian elimination.
//!
//! Elimination always picks as pivot the first row (in storage order) with a
//! nonzero entry in the current column, so reduced forms and nullspace bases
//! are reproducible.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of solving `M v = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    NoSolution,
    /// All solutions are `particular + span(basis)`.
    Solution { particular: Vec<Elem>, basis: Vec<Vec<Elem>> },
}

impl LinearSolution {
    pub fn is_solvable(&self) -> bool {
        matches!(self, LinearSolution::Solution { .. })
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_data(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        if let Some(&bad) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(Error::InvalidField(format!("entry {bad} out of range")));
        }
        Ok(Self { field: field.clone(), rows, cols, data })
    }

    /// Builds from integer rows, reducing each entry into the field.
    pub fn from_rows<R: AsRef<[i64]>>(field: &Field, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r.iter().map(|&v| field.from_i64(v)));
        }
        Ok(Self { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn from_row_vecs(field: &Field, cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = field.random_vec(rows * cols, rng);
        Self { field: field.clone(), rows, cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut s = Matrix::zeros(&self.field, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                s.set(i, j, self.get(r, c));
            }
        }
        s
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows).map(|r| self.field.dot(self.row(r), v)).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::SpecMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as Elem))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `row[dst] -= factor * row[src]` restricted to columns `from..`.
    fn sub_scaled_row(&mut self, dst: usize, src: usize, factor: Elem, from: usize) {
        let cols = self.cols;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&mut hi[..cols], &lo[src * cols..(src + 1) * cols])
        };
        sub_scaled(&self.field, &mut a[from..], &b[from..], factor);
    }

    fn scale_row(&mut self, r: usize, factor: Elem, from: usize) {
        let f = self.field.clone();
        for v in &mut self.data[r * self.cols + from..(r + 1) * self.cols] {
            *v = f.mul(*v, factor);
        }
    }

    /// Reduced row echelon form.
    pub fn echelon(&self) -> Echelon {
        self.echelon_limited(self.cols)
    }

    /// Reduced row echelon form, pivoting only in the first `pivot_cols`
    /// columns (used for augmented systems).
    pub fn echelon_limited(&self, pivot_cols: usize) -> Echelon {
        let mut m = self.clone();
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols.min(self.cols) {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if p != row {
                for c in col..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            m.scale_row(row, inv, col);
            for r in 0..m.rows {
                if r != row {
                    let factor = m.get(r, col);
                    if factor != 0 {
                        m.sub_scaled_row(r, row, factor, col);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{ v : M v = 0 }`, one vector per free column in ascending
    /// column order, with a 1 at that free column.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let ech = self.echelon();
        nullspace_from_echelon(&ech, self.cols)
    }

    /// Basis of `{ x : x^T M = 0 }`.
    pub fn left_nullspace(&self) -> Vec<Vec<Elem>> {
        self.transpose().nullspace()
    }

    pub fn solve(&self, b: &[Elem]) -> Result<LinearSolution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols].copy_from_slice(self.row(r));
            aug.set(r, self.cols, b[r]);
        }
        let ech = aug.echelon_limited(self.cols);
        let rank = ech.rank();
        if (rank..self.rows).any(|r| ech.matrix.get(r, self.cols) != 0) {
            return Ok(LinearSolution::NoSolution);
        }
        let mut particular = vec![0; self.cols];
        for (r, &c) in ech.pivots.iter().enumerate() {
            particular[c] = ech.matrix.get(r, self.cols);
        }
        let basis = nullspace_from_echelon(&ech, self.cols);
        Ok(LinearSolution::Solution { particular, basis })
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            aug.data[r * 2 * n..r * 2 * n + n].copy_from_slice(self.row(r));
            aug.set(r, n + r, 1);
        }
        let ech = aug.echelon_limited(n);
        if ech.rank() < n {
            return None;
        }
        Some(ech.matrix.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Determinant by elimination (square matrices only).
    pub fn determinant(&self) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let n = self.rows;
        let mut det: Elem = 1;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return Ok(0);
            };
            if p != col {
                for c in 0..n {
                    m.data.swap(p * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), inv);
                if factor != 0 {
                    m.sub_scaled_row(r, col, factor, col);
                }
            }
        }
        Ok(det)
    }
}

/// `dst -= factor * src`, elementwise.
#[inline]
pub(crate) fn sub_scaled(f: &Field, dst: &mut [Elem], src: &[Elem], factor: Elem) {
    let neg = f.neg(factor);
    if let Some(row) = f.mul_row(neg) {
        if f.characteristic() == 2 {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d ^= row[s as usize];
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = f.add(*d, row[s as usize]);
            }
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = f.add(*d, f.mul(neg, s));
            }
        }
    }
}

fn nullspace_from_echelon(ech: &Echelon, cols: usize) -> Vec<Vec<Elem>> {
    let f = ech.matrix.field();
    let mut is_pivot = vec![false; cols];
    for &c in &ech.pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (r, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = f.neg(ech.matrix.get(r, free));
            }
            v
        })
        .collect()
}

/// Every vector of `particular + span(basis)`, in counting order of the
/// coefficient tuple. Caller is responsible for the size budget.
pub fn enumerate_affine_span(field: &Field, particular: &[Elem], basis: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let q = field.order() as usize;
    let total = q.pow(basis.len() as u32);
    let mut out = Vec::with_capacity(total);
    let mut coeffs = vec![0 as Elem; basis.len()];
    for _ in 0..total {
        let mut v = particular.to_vec();
        for (c, b) in coeffs.iter().zip(basis) {
            if *c != 0 {
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi = field.add(*vi, field.mul(*c, bi));
                }
            }
        }
        out.push(v);
        for c in coeffs.iter_mut() {
            *c += 1;
            if (*c as usize) < q {
                break;
            }
            *c = 0;
        }
    }
    out
}
