//! Dense matrices over a [`Field`] and Gaussian elimination.

use std::fmt;

use rand::Rng;

use super::field::{Elem, Field};
use crate::error::{guard, Error, Result};

/// Largest row or column count a dense matrix may have.
pub const MAX_DIM: usize = 4096;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&a| self.field.render(a)).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn try_zeros(field: &Field, rows: usize, cols: usize) -> Result<Self> {
        guard("matrix rows", rows, MAX_DIM)?;
        guard("matrix cols", cols, MAX_DIM)?;
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    /// Zero matrix; panics above [`MAX_DIM`] (use [`Matrix::try_zeros`] on
    /// untrusted sizes).
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self::try_zeros(field, rows, cols).expect("matrix dimension guard")
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        guard("matrix rows", rows, MAX_DIM)?;
        guard("matrix cols", cols, MAX_DIM)?;
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|&a| a as usize >= field.order()) {
            return Err(Error::Invalid("entry outside the field".into()));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Matrix from integer entries reduced mod p.
    pub fn from_ints(field: &Field, rows: usize, cols: usize, ints: &[i64]) -> Self {
        let data = ints.iter().map(|&n| field.from_int(n)).collect();
        Self::from_vec(field, rows, cols, data).expect("shape of integer literal")
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_vec(field, rows.len(), cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vec<Elem>]) -> Result<Self> {
        let mut m = Self::try_zeros(field, rows, columns.len())?;
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Shape("column length".into()));
            }
            for (i, &a) in c.iter().enumerate() {
                m.data[i * m.cols + j] = a;
            }
        }
        Ok(m)
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for a in m.data.iter_mut() {
            *a = field.random(rng);
        }
        m
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Elem> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, a: Elem) {
        self.data[i * self.cols + j] = a;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols || self.field != other.field {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        self.field.axpy(&mut out.data, 1, &other.data);
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        self.field.axpy(&mut out.data, self.field.neg(1), &other.data);
        Ok(out)
    }

    /// `self += a * other`.
    pub fn add_scaled(&mut self, a: Elem, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.field.axpy(&mut self.data, a, &other.data);
    }

    pub fn scaled(&self, a: Elem) -> Matrix {
        let mut out = self.clone();
        self.field.scale(&mut out.data, a);
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::try_zeros(&self.field, self.rows, other.cols)?;
        let n = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    self.field.axpy(dst, a, &other.data[k * n..(k + 1) * n]);
                }
            }
        }
        Ok(out)
    }

    /// Product with a column vector.
    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            self.field.axpy(&mut out, a, self.row(i));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("power of a non-square matrix".into()));
        }
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Kronecker product, rows indexed by (i, k) -> i * other.rows + k.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::try_zeros(&self.field, rows, cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    let start = (i * other.rows + k) * cols + j * other.cols;
                    self.field
                        .axpy(&mut out.data[start..start + other.cols], a, other.row(k));
                }
            }
        }
        Ok(out)
    }

    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
        }
        for i in 0..other.rows {
            out.row_mut(self.rows + i)[self.cols..].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::Shape("hstack row mismatch".into()));
        }
        let mut out = Matrix::try_zeros(&self.field, self.rows, self.cols + other.cols)?;
        for i in 0..self.rows {
            out.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            out.row_mut(i)[self.cols..].copy_from_slice(other.row(i));
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Shape("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix::from_vec(&self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.data[a * cols.len() + b] = self.get(i, j);
            }
        }
        out
    }

    /// Reinterprets the entries in a field containing this one.
    pub fn base_change(&self, target: &Field) -> Result<Matrix> {
        if !self.field.embeds_in(target) {
            return Err(Error::InvalidField(format!(
                "{:?} does not embed in {:?}",
                self.field, target
            )));
        }
        Ok(Matrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        })
    }

    /// Reduced row echelon form; pivots are chosen as the first nonzero
    /// entry in each column scan.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        Echelon { matrix: m, pivots }
    }

    /// Row-reduces in place using only the first `limit` columns as pivot
    /// candidates. Returns the pivot columns.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            f.scale(&mut self.data[r * cols..(r + 1) * cols], inv);
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            for i in 0..self.rows {
                let row = if i < r {
                    &mut before[i * cols..(i + 1) * cols]
                } else if i > r {
                    let o = (i - r - 1) * cols;
                    &mut after[o..o + cols]
                } else {
                    continue;
                };
                let a = row[c];
                if a != 0 {
                    f.axpy(&mut row[c..], f.neg(a), &prow[c..]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank by forward elimination.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let cols = self.cols;
        let mut m = self.data.clone();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    m.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m[r * cols + c]);
            let (head, tail) = m.split_at_mut((r + 1) * cols);
            let prow = &head[r * cols..];
            for i in 0..self.rows - r - 1 {
                let row = &mut tail[i * cols..(i + 1) * cols];
                let a = row[c];
                if a != 0 {
                    f.axpy(&mut row[c..], f.neg(f.mul(a, inv)), &prow[c..]);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the right null space, as the columns of the result.
    pub fn kernel_basis(&self) -> Matrix {
        let ech = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut k = Matrix::zeros(&self.field, self.cols, free.len());
        for (t, &fc) in free.iter().enumerate() {
            k.set(fc, t, 1);
            for (r, &pc) in ech.pivots.iter().enumerate() {
                k.set(pc, t, self.field.neg(ech.matrix.get(r, fc)));
            }
        }
        k
    }

    /// Kernel basis as a list of vectors.
    pub fn kernel_vectors(&self) -> Vec<Vec<Elem>> {
        self.kernel_basis().columns()
    }

    /// A basis of the column space, chosen among the columns.
    pub fn column_space_basis(&self) -> Vec<Vec<Elem>> {
        let ech = self.rref();
        ech.pivots.iter().map(|&c| self.column(c)).collect()
    }

    /// Some `x` with `self * x = b`, or `None`.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let bm = Matrix::from_columns(&self.field, self.rows, &[b.to_vec()]).ok()?;
        self.solve_matrix(&bm).map(|x| x.column(0))
    }

    /// Some `X` with `self * X = b`, or `None`.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows, "right-hand side rows");
        let mut aug = self.hstack(b).ok()?;
        let pivots = aug.rref_in_place(self.cols);
        let r = pivots.len();
        for i in r..aug.rows {
            if aug.row(i)[self.cols..].iter().any(|&a| a != 0) {
                return None;
            }
        }
        let mut x = Matrix::zeros(&self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            x.row_mut(pc).copy_from_slice(&aug.row(i)[self.cols..]);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(&self.field, self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }
}

/// An incrementally grown row space kept in reduced echelon form.
///
/// Used for span membership, independence tests and coordinates with
/// respect to a growing list of vectors.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Field,
    len: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    // coordinates of each echelon row in terms of the inserted vectors
    coords: Vec<Vec<Elem>>,
    inserted: usize,
    track: bool,
}

impl RowSpace {
    pub fn new(field: &Field, len: usize) -> Self {
        RowSpace {
            field: field.clone(),
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            coords: Vec::new(),
            inserted: 0,
            track: false,
        }
    }

    /// A row space that remembers how each of its echelon rows is built
    /// from the accepted vectors, enabling [`RowSpace::coordinates`].
    pub fn tracking(field: &Field, len: usize) -> Self {
        RowSpace {
            track: true,
            ..Self::new(field, len)
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    /// Reduces `v` against the current rows; returns the residue and, when
    /// tracking, the combination of accepted vectors that was subtracted.
    fn reduce(&self, v: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        let f = &self.field;
        let mut v = v.to_vec();
        let mut comb = if self.track {
            vec![0; self.inserted]
        } else {
            Vec::new()
        };
        for (i, (row, &pc)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let a = v[pc];
            if a != 0 {
                f.axpy(&mut v, f.neg(a), row);
                if self.track {
                    f.axpy(&mut comb, a, &self.coords[i]);
                }
            }
        }
        (v, comb)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).0.iter().all(|&a| a == 0)
    }

    /// Adds `v`; returns true if it was independent of the current span.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.len, "vector length");
        let f = self.field.clone();
        let (mut res, comb) = self.reduce(v);
        let Some(pc) = res.iter().position(|&a| a != 0) else {
            return false;
        };
        let inv = f.inv(res[pc]);
        f.scale(&mut res, inv);
        let mut coord = Vec::new();
        if self.track {
            // res = v - comb, scaled
            coord = vec![0; self.inserted + 1];
            for (c, &a) in coord.iter_mut().zip(&comb) {
                *c = f.neg(a);
            }
            coord[self.inserted] = 1;
            f.scale(&mut coord, inv);
            self.inserted += 1;
            for c in self.coords.iter_mut() {
                c.push(0);
            }
        }
        for (i, row) in self.rows.iter_mut().enumerate() {
            let a = row[pc];
            if a != 0 {
                f.axpy(row, f.neg(a), &res);
                if self.track {
                    let c = &mut self.coords[i];
                    f.axpy(c, f.neg(a), &coord);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(at, res);
        self.pivots.insert(at, pc);
        if self.track {
            self.coords.insert(at, coord);
        }
        true
    }

    /// Coefficients expressing `v` in the accepted vectors (in insertion
    /// order), if `v` lies in the span. Requires a tracking space.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        assert!(self.track, "coordinates need a tracking row space");
        let (res, comb) = self.reduce(v);
        res.iter().all(|&a| a == 0).then_some(comb)
    }

    /// Echelon rows, sorted by pivot.
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(&f(2), 3).rank(), 3);
        assert_eq!(Matrix::zeros(&f(2), 2, 2).rank(), 0);
        assert_eq!(Matrix::from_ints(&f(3), 2, 2, &[0, 1, 0, 0]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(&f(5), 4).kernel_basis().cols(), 0);
        assert_eq!(Matrix::zeros(&f(5), 2, 2).kernel_basis().cols(), 2);
        let k = Matrix::from_ints(&f(2), 2, 2, &[1, 1, 0, 0]).kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![1, 1]);
    }

    #[test]
    fn solve_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fld = Field::new(3, 2).unwrap();
        for _ in 0..20 {
            let a = Matrix::random(&fld, 6, 6, &mut rng);
            if let Some(inv) = a.inverse() {
                assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&fld, 6));
            } else {
                assert!(a.rank() < 6);
            }
            let x: Vec<Elem> = (0..6).map(|_| fld.random(&mut rng)).collect();
            let b = a.mul_vec(&x);
            let y = a.solve(&b).unwrap();
            assert_eq!(a.mul_vec(&y), b);
        }
        let sing = Matrix::from_ints(&f(2), 2, 2, &[1, 1, 1, 1]);
        assert!(sing.solve(&[1, 0]).is_none());
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn guard_rejects_huge() {
        assert!(Matrix::try_zeros(&f(2), MAX_DIM + 1, 1).is_err());
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fld = f(5);
        let (a, b) = (Matrix::random(&fld, 2, 3, &mut rng), Matrix::random(&fld, 3, 2, &mut rng));
        let (c, d) = (Matrix::random(&fld, 3, 2, &mut rng), Matrix::random(&fld, 2, 2, &mut rng));
        let lhs = a.kron(&b).unwrap().mul(&c.kron(&d).unwrap()).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn row_space_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fld = Field::new(2, 2).unwrap();
        let mut rs = RowSpace::tracking(&fld, 7);
        let mut accepted = Vec::new();
        for _ in 0..10 {
            let v: Vec<Elem> = (0..7).map(|_| fld.random(&mut rng)).collect();
            if rs.insert(&v) {
                accepted.push(v);
            }
        }
        let target: Vec<Elem> = accepted.iter().fold(vec![0; 7], |mut acc, v| {
            fld.axpy(&mut acc, 3, v);
            acc
        });
        let c = rs.coordinates(&target).unwrap();
        let mut rebuilt = vec![0; 7];
        for (a, v) in c.iter().zip(&accepted) {
            fld.axpy(&mut rebuilt, *a, v);
        }
        assert_eq!(rebuilt, target);
    }
}
