//! Dense big-integer matrices: fraction-free rank and determinant (Bareiss)
//! and Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}×{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntegerMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// 0/1 matrix from boolean rows.
    pub fn from_bool_rows(cols: usize, rows: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, &b) in row.iter().enumerate() {
                if b {
                    m.set(r, c, BigInt::one());
                }
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
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Rank over `ℚ` by fraction-free (Bareiss) elimination, after
    /// dropping zero and repeated rows and columns (which leaves the rank
    /// unchanged).
    pub fn rank(&self) -> usize {
        let m = self.distinct_rows().transpose().distinct_rows();
        bareiss(m).0
    }

    fn distinct_rows(&self) -> IntegerMatrix {
        let mut seen = std::collections::HashSet::new();
        let keep: Vec<usize> =
            (0..self.rows).filter(|&r| self.row(r).iter().any(|x| !x.is_zero()) && seen.insert(self.row(r))).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.permuted(&keep, &cols)
    }

    /// Determinant of a square matrix, exact.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return BigInt::one();
        }
        let (rank, det) = bareiss(self.clone());
        if rank < self.rows {
            BigInt::zero()
        } else {
            det
        }
    }

    /// Diagonal of the Smith normal form: `d₁ | d₂ | …`, then zeros;
    /// length `min(rows, cols)`, all entries non-negative.
    pub fn smith(&self) -> Vec<BigInt> {
        smith_diagonal(self.clone())
    }

    /// True when the matrix is square, has unit diagonal and is zero above
    /// (or below) the diagonal.
    pub fn is_unitriangular(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let n = self.rows;
        let diag = (0..n).all(|i| self.get(i, i).is_one());
        let lower = (0..n).all(|r| (r + 1..n).all(|c| self.get(r, c).is_zero()));
        let upper = (0..n).all(|r| (0..r).all(|c| self.get(r, c).is_zero()));
        diag && (lower || upper)
    }

    /// Rows and columns reordered by the given permutations.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> IntegerMatrix {
        let mut out = Self::zeros(row_order.len(), col_order.len());
        for (i, &r) in row_order.iter().enumerate() {
            for (j, &c) in col_order.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }
}

/// Returns (rank, signed last pivot). For a full-rank square matrix the
/// second component is the determinant.
fn bareiss(mut m: IntegerMatrix) -> (usize, BigInt) {
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut negate = false;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m.get(r, c).is_zero()) else { continue };
        if p != rank {
            for k in 0..cols {
                m.data.swap(p * cols + k, rank * cols + k);
            }
            negate = !negate;
        }
        let pivot = m.get(rank, c).clone();
        for r in rank + 1..rows {
            let factor = m.get(r, c).clone();
            for k in c + 1..cols {
                let v = (&pivot * m.get(r, k) - &factor * m.get(rank, k)) / &prev;
                m.set(r, k, v);
            }
            m.set(r, c, BigInt::zero());
        }
        prev = pivot;
        rank += 1;
    }
    let det = if negate { -prev } else { prev };
    (rank, det)
}

fn smith_diagonal(mut m: IntegerMatrix) -> Vec<BigInt> {
    let (rows, cols) = (m.rows, m.cols);
    let n = rows.min(cols);
    let swap_rows = |m: &mut IntegerMatrix, a: usize, b: usize| {
        if a != b {
            for k in 0..cols {
                m.data.swap(a * cols + k, b * cols + k);
            }
        }
    };
    let swap_cols = |m: &mut IntegerMatrix, a: usize, b: usize| {
        if a != b {
            for r in 0..rows {
                m.data.swap(r * cols + a, r * cols + b);
            }
        }
    };
    for t in 0..n {
        loop {
            // Pivot: entry of least absolute value in the remaining block.
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let v = m.get(r, c);
                    if !v.is_zero() && best.is_none_or(|(br, bc)| v.abs() < m.get(br, bc).abs()) {
                        best = Some((r, c));
                        if v.abs().is_one() {
                            break;
                        }
                    }
                }
                if best.is_some_and(|(br, bc)| m.get(br, bc).abs().is_one()) {
                    break;
                }
            }
            let Some((pr, pc)) = best else {
                // Remaining block is zero.
                let mut d: Vec<BigInt> = (0..t).map(|i| m.get(i, i).clone()).collect();
                d.resize(n, BigInt::zero());
                return d;
            };
            swap_rows(&mut m, t, pr);
            swap_cols(&mut m, t, pc);
            let p = m.get(t, t).clone();
            let mut clean = true;
            for r in t + 1..rows {
                let v = m.get(r, t).clone();
                if v.is_zero() {
                    continue;
                }
                let q = v.div_floor(&p);
                for k in t..cols {
                    let x = m.get(r, k) - &q * m.get(t, k);
                    m.set(r, k, x);
                }
                if !m.get(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                let v = m.get(t, c).clone();
                if v.is_zero() {
                    continue;
                }
                let q = v.div_floor(&p);
                for r in t..rows {
                    let x = m.get(r, c) - &q * m.get(r, t);
                    m.set(r, c, x);
                }
                if !m.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: the pivot must divide the rest of the block.
            let bad = (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| !m.get(r, c).is_multiple_of(&p));
            if let Some((r, _)) = bad {
                for k in t..cols {
                    let x = m.get(t, k) + m.get(r, k);
                    m.set(t, k, x);
                }
                continue;
            }
            if m.get(t, t).is_negative() {
                let x = -m.get(t, t);
                m.set(t, t, x);
            }
            break;
        }
    }
    (0..n).map(|i| m.get(i, i).clone()).collect()
}
