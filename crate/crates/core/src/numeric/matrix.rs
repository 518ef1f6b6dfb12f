use std::fmt;
use std::ops::Index;

use super::{NumericError, Rational};

/// Dense vector of exact rationals.
pub type Vector = Vec<Rational>;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width even when there are no rows.
    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Result<Self, NumericError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(NumericError::DimensionMismatch {
                    context: format!("row {i}"),
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: Vector) -> Result<(), NumericError> {
        if row.len() != self.cols {
            return Err(NumericError::DimensionMismatch {
                context: "appended row".into(),
                expected: self.cols,
                found: row.len(),
            });
        }
        self.data.extend(row);
        self.rows += 1;
        Ok(())
    }

    /// Submatrix of the listed rows.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector, NumericError> {
        if v.len() != self.cols {
            return Err(NumericError::DimensionMismatch {
                context: "matrix-vector product".into(),
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Rank by exact row reduction.
    pub fn rank(&self) -> usize {
        let (_, pivots) = rref(self);
        pivots.len()
    }

    /// Indices of the pivot columns after exact row reduction.
    pub fn pivot_columns(&self) -> Vec<usize> {
        rref(self).1
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = rref(self);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        self.get(i, j)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(s: &Rational, a: &[Rational]) -> Vector {
    a.iter().map(|x| s * x).collect()
}

pub fn neg_vec(a: &[Rational]) -> Vector {
    a.iter().map(|x| -x).collect()
}

/// Reduced row echelon form and the pivot columns.
fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        swap_rows(&mut a, row, p);
        let inv = a.get(row, col).recip().expect("nonzero pivot");
        for j in col..a.cols {
            let v = a.get(row, j) * &inv;
            a.set(row, j, v);
        }
        for i in 0..a.rows {
            if i == row || a.get(i, col).is_zero() {
                continue;
            }
            let factor = a.get(i, col).clone();
            for j in col..a.cols {
                let v = a.get(i, j) - &(&factor * a.get(row, j));
                a.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

fn swap_rows(a: &mut Matrix, i: usize, k: usize) {
    if i == k {
        return;
    }
    for j in 0..a.cols {
        a.data.swap(i * a.cols + j, k * a.cols + j);
    }
}

/// Solves `M v = r` exactly for square `M`; `None` when `M` is singular.
pub fn gauss_solve(m: &Matrix, r: &[Rational]) -> Result<Option<Vector>, NumericError> {
    if m.rows != m.cols {
        return Err(NumericError::DimensionMismatch {
            context: "gauss_solve needs a square matrix".into(),
            expected: m.rows,
            found: m.cols,
        });
    }
    if r.len() != m.rows {
        return Err(NumericError::DimensionMismatch {
            context: "gauss_solve right-hand side".into(),
            expected: m.rows,
            found: r.len(),
        });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut b = r.to_vec();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a.get(i, col).is_zero()) else {
            return Ok(None);
        };
        swap_rows(&mut a, col, p);
        b.swap(col, p);
        let inv = a.get(col, col).recip().expect("nonzero pivot");
        for i in col + 1..n {
            if a.get(i, col).is_zero() {
                continue;
            }
            let factor = a.get(i, col) * &inv;
            for j in col..n {
                let v = a.get(i, j) - &(&factor * a.get(col, j));
                a.set(i, j, v);
            }
            b[i] = &b[i] - &(&factor * &b[col]);
        }
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            acc -= &(a.get(i, j) * xj);
        }
        x[i] = &acc / a.get(i, i);
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| ri(x)).collect()).collect(), cols)
            .unwrap()
    }

    #[test]
    fn solve_identity() {
        let v = gauss_solve(&Matrix::identity(2), &[ri(1), ri(2)]).unwrap().unwrap();
        assert_eq!(v, vec![ri(1), ri(2)]);
    }

    #[test]
    fn solve_singular() {
        assert_eq!(gauss_solve(&mat(&[&[1, 2], &[2, 4]]), &[ri(1), ri(2)]).unwrap(), None);
    }

    #[test]
    fn solve_diagonal() {
        let v = gauss_solve(&mat(&[&[2, 0], &[0, 4]]), &[ri(1), ri(1)]).unwrap().unwrap();
        assert_eq!(v, vec![Rational::new(1, 2).unwrap(), Rational::new(1, 4).unwrap()]);
    }

    #[test]
    fn solve_needs_pivoting() {
        let m = mat(&[&[0, 1, 1], &[1, 0, 2], &[3, 1, 0]]);
        let r = vec![ri(5), ri(-1), ri(7)];
        let v = gauss_solve(&m, &r).unwrap().unwrap();
        assert_eq!(m.mul_vec(&v).unwrap(), r);
    }

    #[test]
    fn dimension_errors() {
        assert!(gauss_solve(&mat(&[&[1, 2]]), &[ri(1)]).is_err());
        assert!(gauss_solve(&Matrix::identity(2), &[ri(1)]).is_err());
        assert!(Matrix::from_rows(vec![vec![ri(1)], vec![ri(1), ri(2)]], 1).is_err());
    }

    #[test]
    fn nullspace_and_rank() {
        let m = mat(&[&[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(Rational::is_zero));
    }
}
