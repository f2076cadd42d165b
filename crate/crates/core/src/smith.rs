//! Smith normal form over arbitrary-precision integers.
//!
//! Only column operations are recorded: callers need the kernel and the
//! invariant factors, never the row transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero invariant factors `d_1 | d_2 | ... | d_r`, all positive.
    pub factors: Vec<BigInt>,
    /// Unimodular `cols × cols` matrix with `U·A·V = diag(factors)`.
    pub right: Matrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Column `j` of the right transform.
    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.right.iter().map(|row| row[j].clone()).collect()
    }

    /// A basis of the integer kernel `{x : A x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.cols).map(|j| self.column(j)).collect()
    }

    /// Number of solutions of `A x ≡ 0 (mod n)` for `n > 0`.
    pub fn count_mod(&self, n: &BigInt) -> BigInt {
        let mut count = BigInt::one();
        for d in &self.factors {
            count *= d.gcd(n);
        }
        for _ in 0..self.nullity() {
            count *= n;
        }
        count
    }

    /// Generators of the solution module of `A x ≡ 0 (mod n)`, reduced mod `n`.
    pub fn generators_mod(&self, n: &BigInt) -> Vec<Vec<BigInt>> {
        let mut gens = Vec::new();
        for j in 0..self.cols {
            let scale = match self.factors.get(j) {
                Some(d) => n / d.gcd(n),
                None => BigInt::one(),
            };
            if scale.mod_floor(n).is_zero() {
                continue;
            }
            gens.push(
                self.column(j)
                    .iter()
                    .map(|v| (v * &scale).mod_floor(n))
                    .collect(),
            );
        }
        gens
    }

    /// Product of the nonzero invariant factors.
    pub fn torsion_order(&self) -> BigInt {
        self.factors.iter().product()
    }
}

/// Smith normal form of an `rows × cols` matrix given row by row.
pub fn smith(matrix: &[Vec<BigInt>], cols: usize) -> Smith {
    let rows = matrix.len();
    let mut a: Matrix = matrix.to_vec();
    debug_assert!(a.iter().all(|r| r.len() == cols));
    let mut v: Matrix = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut factors = Vec::new();

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&a, t, cols) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].mod_floor(&a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                }
                None => break,
            }
        }

        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -a[t][j].clone();
            }
        }
        factors.push(a[t][t].clone());
        t += 1;
    }

    Smith {
        rows,
        cols,
        factors,
        right: v,
    }
}

fn smallest_entry(a: &Matrix, t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(cols).skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn swap_cols(m: &mut Matrix, i: usize, j: usize) {
    if i != j {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// `row[dst] -= q · row[src]`
fn row_axpy(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (x, s) in m[dst].iter_mut().zip(src_row.iter()) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}

/// `col[dst] -= q · col[src]`
fn col_axpy(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let s = row[src].clone();
            row[dst] -= q * s;
        }
    }
}

/// Determinant of a square matrix by fraction-free Bareiss elimination.
pub fn bareiss_det(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Matrix = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
