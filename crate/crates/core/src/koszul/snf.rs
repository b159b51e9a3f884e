//! Exact integer matrices: Smith normal form, kernels, lattice bases and
//! integral solving. Everything here is unimodular column/row bookkeeping
//! over BigInt; matrices stay small (hundreds of rows), so clarity wins
//! over asymptotics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    a: Vec<BigInt>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            a: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.a[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|v| v.is_zero())
    }

    /// Glues the columns of `other` to the right of `self`.
    pub fn hcat(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::Invalid("row count mismatch in hcat".into()));
        }
        let mut m = Mat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Invalid("dimension mismatch in mul".into()));
        }
        let mut m = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = self.get(i, k);
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.get(i, j) + lhs * other.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_cols(&self, keep: &[usize]) -> Mat {
        let mut m = Mat::zero(self.rows, keep.len());
        for (jj, &j) in keep.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    /// Keeps the first `n` rows.
    pub fn top_rows(&self, n: usize) -> Mat {
        let mut m = Mat::zero(n, self.cols);
        for i in 0..n {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.a.swap(i * self.cols + j, k * self.cols + j);
        }
    }

    fn swap_cols(&mut self, j: usize, l: usize) {
        if j == l {
            return;
        }
        for i in 0..self.rows {
            self.a.swap(i * self.cols + j, i * self.cols + l);
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(i, j) - q * self.get(k, j);
            self.set(i, j, v);
        }
    }

    /// col_j -= q * col_l
    fn col_sub(&mut self, j: usize, l: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, j) - q * self.get(i, l);
            self.set(i, j, v);
        }
    }

    fn row_neg(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// row_i += row_k
    fn row_add(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            let v = self.get(i, j) + self.get(k, j);
            self.set(i, j, v);
        }
    }
}

/// Invariant factors d_1 | d_2 | ... (positive, nonzero) of the integer
/// matrix. The count of factors is the rank.
pub fn smith_normal_form(m: &Mat) -> Vec<BigInt> {
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    let mut factors = Vec::new();
    let mut t = 0;
    while t < n {
        // minimal nonzero entry of the active submatrix becomes the pivot
        let mut piv: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                if a.get(i, j).is_zero() {
                    continue;
                }
                if piv.is_none_or(|(pi, pj)| a.get(i, j).abs() < a.get(pi, pj).abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        // clear row and column t; division remainders become new, smaller
        // pivots, so this terminates
        loop {
            let mut dirty = false;
            for i in t + 1..a.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                a.row_sub(i, t, &q);
                if !a.get(i, t).is_zero() {
                    a.swap_rows(i, t);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..a.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                a.col_sub(j, t, &q);
                if !a.get(t, j).is_zero() {
                    a.swap_cols(j, t);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        if a.get(t, t).is_negative() {
            a.row_neg(t);
        }
        // pivot must divide the rest of the submatrix; pull in an offender
        // and redo this step if not
        let mut offender = None;
        'scan: for i in t + 1..a.rows {
            for j in t + 1..a.cols {
                if !a.get(i, j).mod_floor(a.get(t, t)).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            a.row_add(t, i);
            continue;
        }
        factors.push(a.get(t, t).clone());
        t += 1;
    }
    factors
}

/// Column echelon form: returns (h, u) with h = m * u, u unimodular, and
/// the nonzero columns of h in strictly increasing pivot-row order,
/// followed by zero columns.
fn column_echelon(m: &Mat) -> (Mat, Mat) {
    let mut a = m.clone();
    let mut u = Mat::identity(a.cols);
    let mut lead = 0;
    for row in 0..a.rows {
        if lead >= a.cols {
            break;
        }
        // gcd-fold the entries a[row][lead..] into the lead column
        loop {
            let mut best: Option<usize> = None;
            for j in lead..a.cols {
                if a.get(row, j).is_zero() {
                    continue;
                }
                if best.is_none_or(|b| a.get(row, j).abs() < a.get(row, b).abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            a.swap_cols(lead, b);
            u.swap_cols(lead, b);
            let mut clean = true;
            for j in lead + 1..a.cols {
                if a.get(row, j).is_zero() {
                    continue;
                }
                let q = a.get(row, j).div_floor(a.get(row, lead));
                a.col_sub(j, lead, &q);
                u.col_sub(j, lead, &q);
                if !a.get(row, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                lead += 1;
                break;
            }
        }
    }
    (a, u)
}

/// Basis of the integer kernel {x : m x = 0}, as matrix columns. The
/// kernel of a map of free modules is a pure sublattice, so this basis is
/// also a basis of every solution space over the rationals intersected
/// with the integers.
pub fn kernel_basis(m: &Mat) -> Mat {
    let (h, u) = column_echelon(m);
    let keep: Vec<usize> = (0..h.cols)
        .filter(|&j| (0..h.rows).all(|i| h.get(i, j).is_zero()))
        .collect();
    u.select_cols(&keep)
}

/// Basis of the column lattice of `m` (zero columns dropped), via column
/// echelon form.
pub fn column_lattice_basis(m: &Mat) -> Mat {
    let (h, _) = column_echelon(m);
    let keep: Vec<usize> = (0..h.cols)
        .filter(|&j| (0..h.rows).any(|i| !h.get(i, j).is_zero()))
        .collect();
    h.select_cols(&keep)
}

/// Solves b x = t for each column t of `targets`, with `b` of full column
/// rank. `Ok(None)` means some target lies outside the column lattice of
/// `b`; errors are structural (shape or rank defects).
pub fn solve_in_lattice(b: &Mat, targets: &Mat) -> Result<Option<Mat>> {
    if b.rows() != targets.rows() {
        return Err(Error::Invalid("row count mismatch in solve".into()));
    }
    let (h, u) = column_echelon(b);
    // pivot row of each nonzero echelon column
    let mut pivots = Vec::new();
    for j in 0..h.cols {
        if let Some(i) = (0..h.rows).find(|&i| !h.get(i, j).is_zero()) {
            pivots.push((j, i));
        }
    }
    if pivots.len() != b.cols() {
        return Err(Error::Invalid("matrix does not have full column rank".into()));
    }
    let mut ys = Mat::zero(b.cols(), targets.cols());
    for tcol in 0..targets.cols() {
        let mut t = targets.col(tcol);
        for &(j, prow) in &pivots {
            let (q, r) = t[prow].div_mod_floor(h.get(prow, j));
            if !r.is_zero() {
                return Ok(None);
            }
            for i in 0..h.rows {
                let v = &t[i] - &q * h.get(i, j);
                t[i] = v;
            }
            ys.set(j, tcol, q);
        }
        if t.iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
    }
    Ok(Some(u.mul(&ys)?))
}

/// As [`solve_in_lattice`], but an out-of-lattice target is an error.
/// Callers reach this only with targets known to lie inside, so failure
/// signals an internal invariant breach.
pub fn solve_exact(b: &Mat, targets: &Mat) -> Result<Mat> {
    solve_in_lattice(b, targets)?
        .ok_or_else(|| Error::Invalid("target outside the column lattice".into()))
}
