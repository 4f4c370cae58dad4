//! Dense linear algebra over any [`Scalar`]: reduced row echelon form,
//! kernels, inverses, solves and intersections of row spaces.
//!
//! Pivoting picks the first nonzero entry in a column so that results are
//! deterministic. Subspaces are always row spaces.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![T::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = T::one();
        }
        m
    }

    /// Builds a matrix from rows; an empty list gives a `0 × cols` matrix.
    pub fn from_rows(cols: usize, data: Vec<Vec<T>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<T>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                t.data[j][i] = v.clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|v| v.is_zero()))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for (i, r) in self.data.iter().enumerate() {
            for (k, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in o.data[k].iter().enumerate() {
                    if !b.is_zero() {
                        let t = std::mem::replace(&mut out.data[i][j], T::zero());
                        out.data[i][j] = t + a.mul_ref(b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// M·v for a column vector v.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| dot(r, v))
            .collect()
    }

    /// vᵀ·M for a row vector v.
    pub fn apply_left(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (a, r) in v.iter().zip(&self.data) {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(r) {
                if !b.is_zero() {
                    let t = std::mem::replace(o, T::zero());
                    *o = t + a.mul_ref(b);
                }
            }
        }
        out
    }

    pub fn vstack(&self, o: &Self) -> Result<Self> {
        if self.cols != o.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking {} and {} columns",
                self.cols, o.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Ok(Matrix {
            rows: data.len(),
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let data = self
            .data
            .iter()
            .map(|r| cols.iter().map(|&j| r[j].clone()).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// Gauss–Jordan elimination: (reduced matrix, pivot columns, rank).
    pub fn rref(&self) -> (Self, Vec<usize>, usize) {
        let mut a = self.data.clone();
        let pivots = rref_in_place(&mut a, self.cols, self.cols);
        let rank = pivots.len();
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                data: a,
            },
            pivots,
            rank,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().2
    }

    /// Nonzero rows of the reduced echelon form: a canonical basis of the row space.
    pub fn row_basis(&self) -> Self {
        let (r, _, rank) = self.rref();
        let mut data = r.data;
        data.truncate(rank);
        Matrix {
            rows: rank,
            cols: self.cols,
            data,
        }
    }

    /// Rows spanning {x : M·x = 0}, in reduced echelon form.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots, _) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(i);
        }
        let mut vecs = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f].is_some() {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                let e = &r.data[i][f];
                if !e.is_zero() {
                    v[p] = -e.clone();
                }
            }
            vecs.push(v);
        }
        Matrix::from_rows(self.cols, vecs).row_basis()
    }

    pub fn invert(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverting a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<T>> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
                row
            })
            .collect();
        let pivots = rref_in_place(&mut a, 2 * n, n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let data = a.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Matrix {
            rows: n,
            cols: n,
            data,
        })
    }

    /// One solution x of M·x = b.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let mut a: Vec<Vec<T>> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, v)| {
                let mut row = r.clone();
                row.push(v.clone());
                row
            })
            .collect();
        let pivots = rref_in_place(&mut a, self.cols + 1, self.cols);
        for row in a.iter().skip(pivots.len()) {
            if !row[self.cols].is_negligible() {
                return Err(Error::Inconsistent);
            }
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = a[i][self.cols].clone();
        }
        Ok(x)
    }

    /// Coordinates of the rows of `self` in terms of the rows of `basis`
    /// (which must be independent): C with C·basis = self.
    pub fn coordinates_in(&self, basis: &Self) -> Result<Self> {
        let bt = basis.transpose();
        let mut out = Vec::with_capacity(self.rows);
        for r in &self.data {
            out.push(bt.solve(r)?);
        }
        Ok(Matrix::from_rows(basis.rows, out))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.data[i][i].clone())
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.mul_ref(y);
        }
    }
    acc
}

/// Reduces `a` in place, pivoting only in the first `pivot_cols` columns.
fn rref_in_place<T: Scalar>(a: &mut [Vec<T>], cols: usize, pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_negligible()) else {
            for row in a.iter_mut().skip(r) {
                row[c] = T::zero();
            }
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip_checked().expect("nonzero pivot");
        for v in a[r][c..cols].iter_mut() {
            if !v.is_zero() {
                *v = v.mul_ref(&inv);
            }
        }
        a[r][c] = T::one();
        let support: Vec<usize> = (c..cols).filter(|&j| !a[r][j].is_zero()).collect();
        let prow: Vec<T> = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            if row[c].is_negligible() {
                row[c] = T::zero();
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j].sub_mul_assign(&f, &prow[j]);
            }
            row[c] = T::zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the intersection of the given row spaces.
pub fn intersect<T: Scalar>(spaces: &[Matrix<T>]) -> Result<Matrix<T>> {
    let Some(first) = spaces.first() else {
        return Err(Error::DimensionMismatch("no spaces to intersect".into()));
    };
    let n = first.cols;
    let mut ann = Matrix::zeros(0, n);
    for s in spaces {
        if s.cols != n {
            return Err(Error::DimensionMismatch("ambient dimensions differ".into()));
        }
        ann = ann.vstack(&s.kernel_basis())?;
    }
    Ok(ann.kernel_basis())
}

/// Basis of the sum of the given row spaces.
pub fn span_sum<T: Scalar>(cols: usize, spaces: &[&Matrix<T>]) -> Result<Matrix<T>> {
    let mut acc = Matrix::zeros(0, cols);
    for s in spaces {
        acc = acc.vstack(s)?;
    }
    Ok(acc.row_basis())
}

/// Whether the row space of `small` lies inside the row space of `big`.
pub fn contains<T: Scalar>(big: &Matrix<T>, small: &Matrix<T>) -> bool {
    let r = big.rank();
    match big.vstack(small) {
        Ok(s) => s.rank() == r,
        Err(_) => false,
    }
}

pub fn same_space<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    contains(a, b) && contains(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{Cyc, Q};

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    #[test]
    fn ranks() {
        assert_eq!(Matrix::<Q>::identity(3).rank(), 3);
        assert_eq!(qm(&[&[1, 1], &[1, 1]]).rank(), 1);
        let s = qm(&[&[2, 1, 1], &[0, 1, 1], &[0, 1, -1]]);
        assert_eq!(s.rank(), 3);
    }

    #[test]
    fn species_inverse_of_c2() {
        // rows (1,1),(C2,1),(C2,x); columns [1,1],[C2,1],[C2,sgn]
        let s = qm(&[&[2, 1, 1], &[0, 1, 1], &[0, 1, -1]]);
        let e = s.invert().unwrap();
        let half = Q::new(1.into(), 2.into());
        // column for (C2,x) is e_{C2,x} in standard coordinates
        assert_eq!(e.column(2), vec![q(0), half.clone(), -half]);
        assert_eq!(e.mul(&s).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn kernels_and_solves() {
        assert_eq!(Matrix::<Q>::identity(4).kernel_basis().rows(), 0);
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 2);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());
        let b = vec![q(1), q(-2), q(5)];
        assert_eq!(Matrix::<Q>::identity(3).solve(&b).unwrap(), b);
        assert_eq!(m.solve(&[q(1), q(3)]), Err(Error::Inconsistent));
    }

    #[test]
    fn intersections() {
        let a = qm(&[&[1, 0]]);
        let b = qm(&[&[0, 1]]);
        assert_eq!(intersect(&[a.clone(), b]).unwrap().rows(), 0);
        assert_eq!(intersect(&[a.clone(), a.clone()]).unwrap().rows(), 1);
        let p = qm(&[&[1, 0, 0], &[0, 1, 0]]);
        let r = qm(&[&[0, 1, 0], &[0, 0, 1]]);
        let i1 = intersect(&[p.clone(), r.clone()]).unwrap();
        let i2 = intersect(&[r, p]).unwrap();
        assert!(same_space(&i1, &i2));
        assert_eq!(i1, qm(&[&[0, 1, 0]]));
    }

    #[test]
    fn cyclotomic_entries() {
        let w = Cyc::root_of_unity(3, 1);
        let one = Cyc::from_int(1);
        let m = Matrix::from_rows(2, vec![vec![one.clone(), w.clone()], vec![w.clone(), w.clone() * w.clone()]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.row(0), &[one, -(w.clone() * w)][..]);
    }

    #[test]
    fn floats_share_the_code_path() {
        let m: Matrix<f64> = Matrix::from_rows(2, vec![vec![2.0, 1.0], vec![1.0, 3.0]]);
        let inv = m.invert().unwrap();
        let id = inv.mul(&m).unwrap();
        assert!((id.get(0, 0) - 1.0).abs() < 1e-12 && id.get(0, 1).abs() < 1e-12);
    }
}
