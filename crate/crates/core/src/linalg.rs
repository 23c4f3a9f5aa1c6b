//! Dense exact linear algebra over a [`FieldSpec`].
//!
//! Composite indices follow the left-factor-major convention everywhere:
//! entry `(i, j)` of a tensor product of dimensions `d1 x d2` lives at
//! `i * d2 + j`.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{domain, Result};
use crate::field::{Fe, FieldSpec};

/// A column vector over a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    field: FieldSpec,
    entries: Vec<Fe>,
}

impl Vector {
    pub fn new(field: &FieldSpec, entries: Vec<Fe>) -> Result<Self> {
        if entries.is_empty() {
            return domain("vectors need dimension at least 1");
        }
        if let Some(e) = entries.iter().find(|e| e.0 >= field.order()) {
            return domain(format!("{} is not an element of GF({field})", e.0));
        }
        Ok(Vector {
            field: field.clone(),
            entries,
        })
    }

    /// Builds a vector from raw element encodings.
    pub fn from_ints(field: &FieldSpec, values: &[u64]) -> Result<Self> {
        Self::new(field, values.iter().map(|&v| Fe(v)).collect())
    }

    pub fn zero(field: &FieldSpec, dim: usize) -> Self {
        Vector {
            field: field.clone(),
            entries: vec![Fe::ZERO; dim],
        }
    }

    /// The standard basis vector `e_i`.
    pub fn unit(field: &FieldSpec, dim: usize, i: usize) -> Self {
        let mut v = Self::zero(field, dim);
        v.entries[i] = Fe::ONE;
        v
    }

    pub(crate) fn from_parts(field: &FieldSpec, entries: Vec<Fe>) -> Self {
        Vector {
            field: field.clone(),
            entries,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Fe] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Fe> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_same(&self.field, &other.field)?;
        if self.dim() != other.dim() {
            return domain(format!(
                "cannot add vectors of dimension {} and {}",
                self.dim(),
                other.dim()
            ));
        }
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Vector::from_parts(f, entries))
    }

    pub fn scale(&self, c: Fe) -> Vector {
        let f = &self.field;
        Vector::from_parts(f, self.entries.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// The pairing `<e|v> = sum e_i v_i`.
    pub fn dot(&self, other: &Vector) -> Result<Fe> {
        check_same(&self.field, &other.field)?;
        if self.dim() != other.dim() {
            return domain(format!(
                "cannot pair vectors of dimension {} and {}",
                self.dim(),
                other.dim()
            ));
        }
        Ok(dot(&self.field, &self.entries, &other.entries))
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &Vector) -> Result<Vector> {
        check_same(&self.field, &other.field)?;
        let f = &self.field;
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.entries {
            out.extend(other.entries.iter().map(|&b| f.mul(a, b)));
        }
        Ok(Vector::from_parts(f, out))
    }

    /// Whether `other = c * self` for some nonzero scalar `c`.
    pub fn is_parallel(&self, other: &Vector) -> bool {
        if self.field != other.field || self.dim() != other.dim() {
            return false;
        }
        let m = Matrix::from_parts(
            &self.field,
            2,
            self.dim(),
            [&self.entries[..], &other.entries[..]].concat(),
        );
        !self.is_zero() && !other.is_zero() && m.rank() == 1
    }

    /// Rescales so the first nonzero entry is 1; the zero vector is unchanged.
    pub fn normalized(&self) -> Vector {
        match self.entries.iter().find(|e| !e.is_zero()) {
            Some(&lead) => self.scale(self.field.inv(lead).expect("nonzero")),
            None => self.clone(),
        }
    }
}

impl Index<usize> for Vector {
    type Output = Fe;
    fn index(&self, i: usize) -> &Fe {
        &self.entries[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_row(&self.field, &self.entries))
    }
}

pub(crate) fn format_row(field: &FieldSpec, row: &[Fe]) -> String {
    let parts: Vec<String> = row.iter().map(|&e| field.format(e)).collect();
    format!("({})", parts.join(","))
}

#[inline]
pub(crate) fn dot(f: &FieldSpec, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            f.add(acc, f.mul(x, y))
        }
    })
}

fn check_same(a: &FieldSpec, b: &FieldSpec) -> Result<()> {
    if a != b {
        return domain(format!("field mismatch: GF({a}) vs GF({b})"));
    }
    Ok(())
}

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Fe::ONE;
        }
        m
    }

    pub(crate) fn from_parts(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Fe>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix with `cols` columns from explicit rows.
    pub fn from_rows(field: &FieldSpec, cols: usize, rows: &[Vec<Fe>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return domain(format!("row {i} has length {}, expected {cols}", row.len()));
            }
            if let Some(e) = row.iter().find(|e| e.0 >= field.order()) {
                return domain(format!("{} is not an element of GF({field})", e.0));
            }
            data.extend_from_slice(row);
        }
        Ok(Self::from_parts(field, rows.len(), cols, data))
    }

    /// Builds a matrix from raw element encodings.
    pub fn from_ints(field: &FieldSpec, cols: usize, rows: &[&[u64]]) -> Result<Self> {
        let rows: Vec<Vec<Fe>> = rows.iter().map(|r| r.iter().map(|&v| Fe(v)).collect()).collect();
        Self::from_rows(field, cols, &rows)
    }

    /// Stacks vectors as rows.
    pub fn from_vectors(field: &FieldSpec, cols: usize, vectors: &[Vector]) -> Result<Self> {
        let mut data = Vec::with_capacity(vectors.len() * cols);
        for (i, v) in vectors.iter().enumerate() {
            check_same(field, v.field())?;
            if v.dim() != cols {
                return domain(format!("vector {i} has dimension {}, expected {cols}", v.dim()));
            }
            data.extend_from_slice(v.entries());
        }
        Ok(Self::from_parts(field, vectors.len(), cols, data))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> Vector {
        Vector::from_parts(&self.field, self.row(i).to_vec())
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Fe]> {
        // chunks_exact panics on a zero chunk size
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_same(&self.field, &other.field)?;
        if self.cols != other.rows {
            return domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = f.add(out[(i, j)], f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        check_same(&self.field, v.field())?;
        if self.cols != v.dim() {
            return domain(format!(
                "cannot apply {}x{} matrix to a {}-vector",
                self.rows,
                self.cols,
                v.dim()
            ));
        }
        let entries = self.row_iter().map(|r| dot(&self.field, r, v.entries())).collect();
        Ok(Vector::from_parts(&self.field, entries))
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        check_same(&self.field, &other.field)?;
        if self.cols != other.cols {
            return domain(format!("cannot stack {} and {} columns", self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix::from_parts(&self.field, self.rows + other.rows, self.cols, data))
    }

    /// Reduced row echelon form and its pivot columns. The shape is kept;
    /// zero rows sit at the bottom.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(src) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if src != r {
                for j in 0..cols {
                    self.data.swap(src * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self[(r, c)]).expect("pivot is nonzero");
            if inv != Fe::ONE {
                for j in c..cols {
                    self[(r, j)] = f.mul(self[(r, j)], inv);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let pr = self[(r, j)];
                    if !pr.is_zero() {
                        self[(i, j)] = f.sub(self[(i, j)], f.mul(factor, pr));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// RREF with the zero rows dropped: a canonical basis of the row space.
    pub fn row_basis(&self) -> (Matrix, Vec<usize>) {
        let (mut m, pivots) = self.rref();
        m.rows = pivots.len();
        m.data.truncate(m.rows * m.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows, in RREF) of `{x : self * x = 0}`.
    pub fn right_kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Some `x` with `self * x = b`, free variables set to zero; `None` if
    /// the system is inconsistent.
    pub fn solve(&self, b: &Vector) -> Result<Option<Vector>> {
        check_same(&self.field, b.field())?;
        if b.dim() != self.rows {
            return domain(format!(
                "right-hand side has dimension {}, expected {}",
                b.dim(),
                self.rows
            ));
        }
        let cols = self.cols + 1;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.push(b[i]);
        }
        let mut aug = Matrix::from_parts(&self.field, self.rows, cols, data);
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug[(i, self.cols)];
        }
        Ok(Some(Vector::from_parts(&self.field, x)))
    }

    /// Kronecker product, left-factor-major.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        check_same(&self.field, &other.field)?;
        let f = &self.field;
        let (rows, cols) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(f, rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = f.mul(a, other[(i2, j2)]);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return domain(format!("{}x{} matrix is not square", self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Fe::ONE;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return domain("matrix is singular");
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Ok(inv)
    }
}

pub(crate) fn kernel_from_rref(r: &Matrix, pivots: &[usize]) -> Matrix {
    let f = r.field();
    let cols = r.cols();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = Matrix::zeros(f, free.len(), cols);
    for (row, &fc) in free.iter().enumerate() {
        k[(row, fc)] = Fe::ONE;
        for (i, &p) in pivots.iter().enumerate() {
            k[(row, p)] = f.neg(r[(i, fc)]);
        }
    }
    k.rref_in_place();
    k
}

impl Index<(usize, usize)> for Matrix {
    type Output = Fe;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Fe {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fe {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} over GF({}) [", self.rows, self.cols, self.field)?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_row(&self.field, row))?;
        }
        write!(f, "]")
    }
}
