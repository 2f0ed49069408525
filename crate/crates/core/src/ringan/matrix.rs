use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactnum::{format_rational, Integer, Rational};
use crate::partitions::Partition;

/// Dense rectangular matrix over Q with partition row labels and free-form
/// column labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
    pub row_labels: Vec<Partition>,
    pub col_labels: Vec<String>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
            row_labels: Vec::new(),
            col_labels: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatrixQ::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatrixQ {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
            row_labels: Vec::new(),
            col_labels: Vec::new(),
        }
    }

    pub fn with_labels(mut self, rows: Vec<Partition>, cols: Vec<String>) -> Self {
        assert_eq!(rows.len(), self.rows, "row label count");
        assert_eq!(cols.len(), self.cols, "column label count");
        self.row_labels = rows;
        self.col_labels = cols;
        self
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> MatrixQ {
        let mut t = MatrixQ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Rows `rows` and columns `cols` of `self`, labels carried over.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> MatrixQ {
        let mut m = MatrixQ::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        if !self.row_labels.is_empty() {
            m.row_labels = rows.iter().map(|&i| self.row_labels[i].clone()).collect();
        }
        if !self.col_labels.is_empty() {
            m.col_labels = cols.iter().map(|&j| self.col_labels[j].clone()).collect();
        }
        m
    }

    // Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<Integer>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination, pivoting in column
    /// order.
    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        bareiss(&mut a, self.cols).len()
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        let mut scale = Rational::one();
        let mut a: Vec<Vec<Integer>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= Rational::from_integer(l.clone());
            a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        }
        let n = self.rows;
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Rational::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Rational::from_integer(sign * &a[n - 1][n - 1]) / scale
    }

    pub fn is_nonsingular(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Zero whenever the row partition is strictly shorter than the column
    /// partition, and off-diagonal zero for equal lengths. Needs square
    /// labeled matrices with identical row and column index sets.
    pub fn is_upper_triangular_by_length(&self, col_parts: &[Partition]) -> bool {
        assert_eq!(col_parts.len(), self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = &self.row_labels[i];
                let q = &col_parts[j];
                let must_vanish = p.len() < q.len() || (p.len() == q.len() && p != q);
                if must_vanish && !self.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal_nonzero(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self.get(i, i).is_zero())
    }

    /// Reduced row echelon basis of the row space.
    pub fn row_space_basis(&self) -> Vec<Vec<Rational>> {
        let mut a = self.integer_rows();
        let pivots = bareiss(&mut a, self.cols);
        a.truncate(pivots.len());
        a.into_iter()
            .zip(pivots)
            .map(|(row, p)| {
                let lead = Rational::from_integer(row[p].clone());
                row.into_iter()
                    .map(|x| Rational::from_integer(x) / &lead)
                    .collect()
            })
            .collect()
    }
}

// Fraction-free forward elimination in place; returns the pivot columns,
// with the pivot rows moved to the top.
fn bareiss(a: &mut [Vec<Integer>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                for j in c + 1..cols {
                    let v = &a[i][j] * &a[r][c] / &prev;
                    a[i][j] = v;
                }
                continue;
            }
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    for row in a.iter_mut() {
        normalize_row(row);
    }
    pivots
}

fn normalize_row(row: &mut [Integer]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
    if let Some(first) = row.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

#[derive(Serialize)]
struct MatrixJson<'a> {
    rows: &'a [Partition],
    cols: &'a [String],
    entries: Vec<Vec<String>>,
}

impl Serialize for MatrixQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            rows: &self.row_labels,
            cols: &self.col_labels,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(format_rational).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl fmt::Display for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let label_width = self
            .row_labels
            .iter()
            .map(|p| p.to_string().len())
            .max()
            .unwrap_or(0);
        if !self.col_labels.is_empty() {
            write!(f, "{:label_width$}", "")?;
            for c in &self.col_labels {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f)?;
        }
        for (i, row) in cells.iter().enumerate() {
            let label = self
                .row_labels
                .get(i)
                .map_or(String::new(), |p| p.to_string());
            write!(f, "{label:label_width$}")?;
            for c in row {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_rank() {
        assert_eq!(MatrixQ::identity(5).rank(), 5);
        assert_eq!(MatrixQ::identity(5).determinant(), rat(1, 1));
    }

    #[test]
    fn single_entry() {
        let a = MatrixQ::from_rows(vec![vec![rat(1, 576)]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(a.determinant(), rat(1, 576));
    }

    #[test]
    fn dependent_rows() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.determinant(), rat(0, 1));
        assert_eq!(MatrixQ::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn determinant_with_fractions() {
        let a = MatrixQ::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 5)]]);
        assert_eq!(a.determinant(), rat(1, 10) - rat(1, 12));
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(b.determinant(), rat(-1, 1));
    }

    #[test]
    fn row_space_basis_is_echelon() {
        let a = m(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 5]]);
        let b = a.row_space_basis();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0][0], rat(1, 1));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5)
            .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..4, c), r))
    }

    // cofactor expansion as an independent determinant
    fn cofactor_det(a: &[Vec<Rational>]) -> Rational {
        if a.is_empty() {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for j in 0..a.len() {
            let minor: Vec<Vec<Rational>> = a[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &a[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    proptest! {
        #[test]
        fn rank_invariant_under_permutation_and_scaling(
            rows in small_matrix(),
            seed in 0u64..1000,
            scale in 1i64..7,
        ) {
            let base = MatrixQ::from_rows(
                rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect(),
            );
            let r = base.rank();
            let mut row_order: Vec<usize> = (0..base.nrows()).collect();
            let mut col_order: Vec<usize> = (0..base.ncols()).collect();
            row_order.rotate_left(seed as usize % base.nrows());
            col_order.reverse();
            let mut permuted = base.submatrix(&row_order, &col_order);
            for j in 0..permuted.ncols() {
                let v = permuted.get(0, j) * rat(scale, 3);
                permuted.set(0, j, v);
            }
            prop_assert_eq!(permuted.rank(), r);
            prop_assert_eq!(base.transpose().rank(), r);
        }

        #[test]
        fn determinant_matches_cofactors(n in 1usize..5, vals in prop::collection::vec(-4i64..5, 16)) {
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|j| rat(vals[i * 4 + j], (j + 1) as i64)).collect())
                .collect();
            let a = MatrixQ::from_rows(rows.clone());
            let det = a.determinant();
            prop_assert_eq!(&det, &cofactor_det(&rows));
            prop_assert_eq!(a.is_nonsingular(), !det.is_zero());
        }
    }
}
