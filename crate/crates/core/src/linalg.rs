//! Dense matrices over a ring and exact elimination over fields.

use std::fmt;

use crate::error::{Error, Result};
use crate::rings::{ExactComplex, ExactScalar, Field, Ring};

#[derive(Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn diagonal(entries: &[R]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
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

    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[R] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += &(a.clone() * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(R::zero(), |acc, (a, x)| {
                    if a.is_zero() || x.is_zero() {
                        acc
                    } else {
                        acc + &(a.clone() * x)
                    }
                })
            })
            .collect()
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::identity(self.rows);
        let mut sq = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq).expect("square matrix");
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq).expect("square matrix");
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let v = self.get(i, j);
                if i == j { v.is_one() } else { v.is_zero() }
            }))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular_strict(&self) -> bool {
        (0..self.rows).all(|i| (i..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diag(&self) -> Vec<R> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|r| self.row(r))).finish()
    }
}

impl<F: Field> Matrix<F> {
    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::SingularLinearPart)?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).try_inv()?;
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].clone() * &p;
                inv.data[col * n + j] = inv.data[col * n + j].clone() * &p;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let da = f.clone() * a.get(col, j);
                    a.data[r * n + j] -= &da;
                    let di = f.clone() * inv.get(col, j);
                    inv.data[r * n + j] -= &di;
                }
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        let mut pivots = 0;
        let mut echelon: Vec<(usize, Vec<F>)> = Vec::new();
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            reduce_against(&mut row, &echelon);
            if let Some(c) = row.iter().position(|x| !x.is_zero()) {
                normalize(&mut row, c);
                echelon.push((c, row));
                pivots += 1;
            }
        }
        pivots
    }
}

fn reduce_against<F: Field>(row: &mut [F], echelon: &[(usize, Vec<F>)]) {
    for (c, prow) in echelon {
        if row[*c].is_zero() {
            continue;
        }
        let f = row[*c].clone();
        for (x, p) in row.iter_mut().zip(prow) {
            if !p.is_zero() {
                *x -= &(f.clone() * p);
            }
        }
    }
}

fn normalize<F: Field>(row: &mut [F], c: usize) {
    let inv = row[c].try_inv().expect("pivot is nonzero");
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = x.clone() * &inv;
        }
    }
}

/// Solution of `M x = b` with the non-pivot unknowns supplied by the caller.
#[derive(Debug, Clone)]
pub struct Solution<R> {
    pub values: Vec<R>,
    /// Non-pivot columns, ascending.
    pub free: Vec<usize>,
}

/// First row (in row order) whose reduced left side vanishes while its right side does not.
#[derive(Debug, Clone, PartialEq)]
pub struct Inconsistency<R> {
    pub row: usize,
    pub residual: R,
}

/// Row-by-row elimination of an exact system with right-hand sides in an
/// algebra over the Gaussian rationals.
///
/// Rows are inserted in order; each is reduced against the pivots found so
/// far. A reduced row with zero left side and nonzero right side is the
/// reported inconsistency, so for diagonal `M` the residual is the original
/// right-hand side entry. Free unknowns are the non-pivot columns.
pub fn solve_exact<R: ExactScalar>(
    m: &Matrix<ExactComplex>,
    rhs: &[R],
    mut free_value: impl FnMut(usize) -> R,
) -> std::result::Result<Solution<R>, Inconsistency<R>> {
    assert_eq!(rhs.len(), m.rows(), "right-hand side length");
    let mut echelon: Vec<(usize, Vec<ExactComplex>, R)> = Vec::new();
    for (r, b) in rhs.iter().enumerate() {
        let mut row = m.row(r).to_vec();
        let mut b = b.clone();
        for (c, prow, pb) in &echelon {
            if row[*c].is_zero() {
                continue;
            }
            let f = row[*c].clone();
            for (x, p) in row.iter_mut().zip(prow) {
                if !p.is_zero() {
                    *x -= &(f.clone() * p);
                }
            }
            if !pb.is_zero() {
                b -= &(R::embed(&f) * pb);
            }
        }
        match row.iter().position(|x| !x.is_zero()) {
            Some(c) => {
                let inv = row[c].inv().expect("pivot is nonzero");
                normalize(&mut row, c);
                let b = b * &R::embed(&inv);
                echelon.push((c, row, b));
            }
            None if b.is_zero() => {}
            None => return Err(Inconsistency { row: r, residual: b }),
        }
    }

    let mut is_pivot = vec![false; m.cols()];
    for (c, _, _) in &echelon {
        is_pivot[*c] = true;
    }
    let free: Vec<usize> = (0..m.cols()).filter(|c| !is_pivot[*c]).collect();
    let mut values: Vec<Option<R>> = vec![None; m.cols()];
    for &c in &free {
        values[c] = Some(free_value(c));
    }
    for (c, row, b) in echelon.iter().rev() {
        let mut x = b.clone();
        for (j, coeff) in row.iter().enumerate() {
            if j == *c || coeff.is_zero() {
                continue;
            }
            let v = values[j].as_ref().expect("later pivots and free unknowns are resolved first");
            if !v.is_zero() {
                x -= &(R::embed(coeff) * v);
            }
        }
        values[*c] = Some(x);
    }
    Ok(Solution { values: values.into_iter().map(|v| v.expect("every unknown resolved")).collect(), free })
}

/// Kernel basis of an exact matrix: one vector per free column (ascending),
/// with a 1 in that column and 0 in the other free columns.
pub fn null_space(m: &Matrix<ExactComplex>) -> Vec<Vec<ExactComplex>> {
    let zeros = vec![ExactComplex::zero(); m.rows()];
    let free = solve_exact(m, &zeros, |_| ExactComplex::zero()).expect("homogeneous systems are consistent").free;
    free.iter()
        .map(|&f| {
            solve_exact(m, &zeros, |c| if c == f { ExactComplex::one() } else { ExactComplex::zero() })
                .expect("homogeneous systems are consistent")
                .values
        })
        .collect()
}

/// Whether `v` lies in the span of `basis` (exact rank test).
pub fn in_span(basis: &[Vec<ExactComplex>], v: &[ExactComplex]) -> bool {
    if basis.is_empty() {
        return v.iter().all(Ring::is_zero);
    }
    let rows: Vec<Vec<ExactComplex>> = basis.to_vec();
    let a = Matrix::from_rows(rows.clone()).expect("equal lengths");
    let mut with_v = rows;
    with_v.push(v.to_vec());
    let b = Matrix::from_rows(with_v).expect("equal lengths");
    a.rank() == b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: i64) -> ExactComplex {
        ExactComplex::from_i64(v)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<ExactComplex> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| e(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).inverse().unwrap_err(), Error::SingularLinearPart);
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ker = null_space(&a);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.mul_vec(v).iter().all(Ring::is_zero));
        }
        assert!(in_span(&ker, &[e(-5), e(1), e(1)]));
        assert!(!in_span(&ker, &[e(1), e(0), e(0)]));
    }

    #[test]
    fn inconsistency_reports_first_bad_row() {
        let a = mat(&[&[1, 0], &[0, 0], &[0, 0]]);
        let err = solve_exact(&a, &[e(3), e(0), e(5)], |_| e(0)).unwrap_err();
        assert_eq!(err, Inconsistency { row: 2, residual: e(5) });
    }

    #[test]
    fn free_values_are_respected() {
        let a = mat(&[&[1, 1, 0], &[0, 0, 1]]);
        let sol = solve_exact(&a, &[e(4), e(7)], |_| e(10)).unwrap();
        assert_eq!(sol.free, vec![1]);
        assert_eq!(sol.values, vec![e(-6), e(10), e(7)]);
    }
}
