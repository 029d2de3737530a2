use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U · A · V = D` with `U`, `V` unimodular and the
/// nonzero diagonal entries of `D` positive and forming a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries `d₁ | d₂ | …`, including trailing zeros, up to
    /// `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect()
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.ncols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.nrows() {
        let x = m.get(i, a).clone();
        let y = m.get(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// row_a ← row_a − f·row_b
fn row_axpy(m: &mut IntMatrix, a: usize, b: usize, f: &BigInt) {
    for j in 0..m.ncols() {
        let v = m.get(a, j) - f * m.get(b, j);
        m.set(a, j, v);
    }
}

/// col_a ← col_a − f·col_b
fn col_axpy(m: &mut IntMatrix, a: usize, b: usize, f: &BigInt) {
    for i in 0..m.nrows() {
        let v = m.get(i, a) - f * m.get(i, b);
        m.set(i, a, v);
    }
}

fn negate_row(m: &mut IntMatrix, a: usize) {
    for j in 0..m.ncols() {
        let v = -m.get(a, j).clone();
        m.set(a, j, v);
    }
}

/// Computes the Smith normal form by alternating row and column
/// Euclidean reductions. `U` and `V` are accumulated alongside.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // Pivot: smallest nonzero magnitude in the remaining block.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !d.get(i, j).is_zero())
            .min_by_key(|&(i, j)| d.get(i, j).abs());
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !d.get(i, t).is_zero() {
                    swap_rows(&mut d, t, i);
                    swap_rows(&mut u, t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !d.get(t, j).is_zero() {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Row t and column t are clear; enforce divisibility of the rest.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(d.get(i, j) % d.get(t, t)).is_zero());
            match offender {
                Some((i, _)) => {
                    // Add row i to row t, then reduce again.
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    Snf { u, d, v }
}
