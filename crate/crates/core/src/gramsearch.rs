//! Nonnegative integer factorizations `M = A A^T` of symmetric matrices.
//!
//! Columns of a factor can be permuted freely, so the search only produces
//! factors whose columns are in lexicographically non-increasing order. Each
//! new column must start at the first row whose residual diagonal is still
//! positive; rows above it are exhausted and force zeros.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GramError {
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `A A^T`.
    pub fn gram(&self) -> IntMatrix {
        let mut out = Self::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let v: i64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        out
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_symmetric(&self) -> Result<(), GramError> {
        if !self.is_square() {
            return Err(GramError::NotSquare(self.rows, self.cols));
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return Err(GramError::NotSymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.check_symmetric().is_ok()
    }

    pub fn has_negative_entry(&self) -> bool {
        self.data.iter().any(|&x| x < 0)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Exact positive-semidefiniteness by fraction-free symmetric elimination.
pub fn is_psd_exact(m: &IntMatrix) -> Result<bool, GramError> {
    m.check_symmetric()?;
    let n = m.rows();
    let entries: Vec<i128> = m.data.iter().map(|&x| x as i128).collect();
    Ok(match psd_small(entries.clone(), n) {
        Some(v) => v,
        None => psd_big(entries.into_iter().map(BigInt::from).collect(), n),
    })
}

/// `None` on i128 overflow.
fn psd_small(mut a: Vec<i128>, n: usize) -> Option<bool> {
    let mut active: Vec<usize> = (0..n).collect();
    let mut prev: i128 = 1;
    loop {
        if active.is_empty() {
            return Some(true);
        }
        let mut pivot = None;
        for &i in &active {
            let v = a[i * n + i];
            if v < 0 {
                return Some(false);
            }
            if v > 0 && pivot.is_none_or(|p: usize| v > a[p * n + p]) {
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else {
            return Some(active.iter().all(|&i| active.iter().all(|&j| a[i * n + j] == 0)));
        };
        active.retain(|&i| i != p);
        let pp = a[p * n + p];
        for &i in &active {
            for &j in &active {
                if j < i {
                    continue;
                }
                let v = pp
                    .checked_mul(a[i * n + j])?
                    .checked_sub(a[i * n + p].checked_mul(a[p * n + j])?)?;
                let v = v / prev;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        prev = pp;
    }
}

fn psd_big(mut a: Vec<BigInt>, n: usize) -> bool {
    let mut active: Vec<usize> = (0..n).collect();
    let mut prev = BigInt::from(1);
    loop {
        if active.is_empty() {
            return true;
        }
        let mut pivot: Option<usize> = None;
        for &i in &active {
            let v = &a[i * n + i];
            if v.is_negative() {
                return false;
            }
            if v.is_positive() && pivot.is_none_or(|p| *v > a[p * n + p]) {
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else {
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| a[i * n + j].is_zero()));
        };
        active.retain(|&i| i != p);
        let pp = a[p * n + p].clone();
        for &i in &active {
            for &j in &active {
                if j < i {
                    continue;
                }
                let v = (&pp * &a[i * n + j] - &a[i * n + p] * &a[p * n + j]) / &prev;
                a[i * n + j] = v.clone();
                a[j * n + i] = v;
            }
        }
        prev = pp;
    }
}

/// Sorts columns into lexicographically non-increasing order.
pub fn canonical_columns(a: &IntMatrix) -> IntMatrix {
    let mut cols = a.columns();
    cols.sort_by(|x, y| y.cmp(x));
    IntMatrix::from_columns(a.rows(), &cols)
}

struct Search<'a> {
    n: usize,
    max_cols: usize,
    residual: Vec<i64>,
    columns: Vec<Vec<i64>>,
    out: &'a mut Vec<IntMatrix>,
}

impl Search<'_> {
    fn run(&mut self) {
        let n = self.n;
        let lead = (0..n).find(|&i| self.residual[i * n + i] > 0);
        let Some(lead) = lead else {
            if self.residual.iter().all(|&x| x == 0) {
                self.out.push(IntMatrix::from_columns(n, &self.columns));
            }
            return;
        };
        if self.columns.len() >= self.max_cols {
            return;
        }
        // columns sharing the leading row must not exceed the previous one
        let bound = self
            .columns
            .last()
            .filter(|c| c[lead] > 0 && c[..lead].iter().all(|&x| x == 0))
            .cloned();
        let mut col = vec![0i64; n];
        self.columns_from(lead, lead, &mut col, bound.as_deref(), true);
    }

    fn columns_from(
        &mut self,
        lead: usize,
        j: usize,
        col: &mut Vec<i64>,
        bound: Option<&[i64]>,
        tight: bool,
    ) {
        let n = self.n;
        if j == n {
            self.try_column(col);
            return;
        }
        let diag = self.residual[j * n + j];
        let mut hi = isqrt(diag);
        for k in lead..j {
            if col[k] > 0 {
                hi = hi.min(self.residual[k * n + j] / col[k]);
            }
        }
        if tight {
            if let Some(b) = bound {
                hi = hi.min(b[j]);
            }
        }
        let lo = if j == lead { 1 } else { 0 };
        let mut v = hi;
        while v >= lo {
            col[j] = v;
            let still_tight = tight && bound.is_some_and(|b| b[j] == v);
            self.columns_from(lead, j + 1, col, bound, still_tight);
            v -= 1;
        }
        col[j] = 0;
    }

    fn try_column(&mut self, col: &[i64]) {
        let n = self.n;
        let mut next = self.residual.clone();
        for i in 0..n {
            if col[i] == 0 {
                continue;
            }
            for j in 0..n {
                next[i * n + j] -= col[i] * col[j];
            }
        }
        if next.iter().any(|&x| x < 0) {
            return;
        }
        let m = IntMatrix {
            rows: n,
            cols: n,
            data: next,
        };
        if !is_psd_exact(&m).unwrap_or(false) {
            return;
        }
        let saved = std::mem::replace(&mut self.residual, m.data);
        self.columns.push(col.to_vec());
        self.run();
        self.columns.pop();
        self.residual = saved;
    }
}

fn isqrt(x: i64) -> i64 {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Every nonnegative integer `A` with `A A^T = M` and no zero columns, one per
/// column-permutation class, each with canonical column order. `max_cols`
/// defaults to `trace(M)`.
pub fn gram_factorizations(m: &IntMatrix, max_cols: Option<usize>) -> Vec<IntMatrix> {
    if m.check_symmetric().is_err() || m.has_negative_entry() {
        return Vec::new();
    }
    let n = m.rows();
    let mut out = Vec::new();
    if !is_psd_exact(m).unwrap_or(false) {
        return out;
    }
    let max_cols = max_cols.unwrap_or(m.trace().max(0) as usize);
    Search {
        n,
        max_cols,
        residual: m.data.clone(),
        columns: Vec::new(),
        out: &mut out,
    }
    .run();
    out.sort_by(compare_factors);
    out
}

/// Factors are listed with lexicographically larger column sequences first.
fn compare_factors(a: &IntMatrix, b: &IntMatrix) -> Ordering {
    b.columns().cmp(&a.columns())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd_exact(&m(&[&[2, 2, 1], &[2, 2, 1], &[1, 1, 2]])).unwrap());
        assert!(!is_psd_exact(&m(&[&[1, 4, 2], &[4, 3, 2], &[2, 2, 3]])).unwrap());
        assert!(is_psd_exact(&IntMatrix::zeros(3, 3)).unwrap());
        assert!(!is_psd_exact(&m(&[&[0, 1], &[1, 0]])).unwrap());
        assert!(!is_psd_exact(&m(&[&[1, 2], &[2, 3]])).unwrap());
        assert!(is_psd_exact(&m(&[&[1, 2], &[2, 4]])).unwrap());
        assert_eq!(
            is_psd_exact(&m(&[&[1, 2], &[3, 4]])),
            Err(GramError::NotSymmetric(1, 0))
        );
    }

    #[test]
    fn psd_big_fallback_agrees() {
        let a = m(&[&[4, 2, 1], &[2, 5, 3], &[1, 3, 6]]);
        let data: Vec<BigInt> = a.data.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(psd_big(data, 3), is_psd_exact(&a).unwrap());
        let huge = m(&[&[i64::MAX / 2, 1], &[1, i64::MAX / 2]]);
        assert!(is_psd_exact(&huge).unwrap());
    }

    #[test]
    fn factor_worked_example_a() {
        let fs = gram_factorizations(&m(&[&[2, 2, 1], &[2, 2, 1], &[1, 1, 2]]), None);
        assert_eq!(fs, vec![m(&[&[1, 1, 0], &[1, 1, 0], &[1, 0, 1]])]);
    }

    #[test]
    fn factor_all_ones() {
        let fs = gram_factorizations(&m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]), None);
        assert_eq!(fs, vec![m(&[&[1], &[1], &[1]])]);
    }

    #[test]
    fn factor_non_psd_is_empty() {
        assert!(gram_factorizations(&m(&[&[1, 4, 2], &[4, 3, 2], &[2, 2, 3]]), None).is_empty());
    }

    #[test]
    fn factor_identity_and_zero() {
        let fs = gram_factorizations(&IntMatrix::identity(3), None);
        assert_eq!(fs, vec![IntMatrix::identity(3)]);
        let fs = gram_factorizations(&IntMatrix::zeros(2, 2), None);
        assert_eq!(fs, vec![IntMatrix::zeros(2, 0)]);
        // 2 = 1+1 or sqrt(2)^2: only the two unit columns
        let fs = gram_factorizations(&m(&[&[2]]), None);
        assert_eq!(fs, vec![m(&[&[1, 1]])]);
        let fs = gram_factorizations(&m(&[&[4]]), None);
        assert_eq!(fs, vec![m(&[&[2]]), m(&[&[1, 1, 1, 1]])]);
    }

    #[test]
    fn max_cols_limits() {
        let fs = gram_factorizations(&m(&[&[4]]), Some(1));
        assert_eq!(fs, vec![m(&[&[2]])]);
    }

    #[test]
    fn canonical_columns_sorts() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let c = canonical_columns(&a);
        assert_eq!(c, m(&[&[1, 0], &[0, 1]]));
        assert_eq!(canonical_columns(&c), c);
        assert_eq!(c.gram(), a.gram());
    }
}
