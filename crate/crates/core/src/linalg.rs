//! Dense exact-rational matrices: RREF, products, rank, nullspace.
//!
//! Matrices here are at most tens of rows and columns, so dense storage and
//! textbook Gaussian elimination are all that is needed. Pivoting is the
//! first nonzero entry in each column, which with exact arithmetic is both
//! safe and deterministic.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        Self::from_fn(self.rows, range.len(), |i, j| {
            self[(i, range.start + j)].clone()
        })
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for j in col..m.cols {
                let v = m[(row, j)].clone() * &inv;
                m[(row, j)] = v;
            }
            for i in 0..m.rows {
                if i != row && !m[(i, col)].is_zero() {
                    let factor = m[(i, col)].clone();
                    for j in col..m.cols {
                        let v = m[(i, j)].clone() - &factor * &m[(row, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(self.rows, self.cols, v.len(), 1));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    if !self[(i, k)].is_zero() && !v[k].is_zero() {
                        acc += &self[(i, k)] * &v[k];
                    }
                }
                acc
            })
            .collect())
    }

    /// A basis for the kernel `{v : m v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Rat::zero(); self.cols];
                v[fc] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, fc)].clone();
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use num::Zero;
    use proptest::prelude::*;

    fn int_matrix(rows: Vec<Vec<i64>>) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(int).collect())
                .collect(),
        )
    }

    /// Independent fraction-free (Bareiss-style two-pass) elimination used as
    /// an oracle for rref. It only shares the matrix type with the
    /// implementation under test.
    fn rref_oracle(m: &RationalMatrix) -> RationalMatrix {
        // forward elimination without normalization
        let mut a: Vec<Vec<Rat>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)].clone()).collect())
            .collect();
        let (rows, cols) = (m.rows(), m.cols());
        let mut row = 0;
        let mut pivot_cols = Vec::new();
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            for i in row + 1..rows {
                if !a[i][col].is_zero() {
                    let f = &a[i][col] / &a[row][col];
                    for j in col..cols {
                        let v = a[i][j].clone() - &f * &a[row][j];
                        a[i][j] = v;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        // back substitution
        for (r_idx, &col) in pivot_cols.iter().enumerate().rev() {
            let inv = a[r_idx][col].recip();
            for j in 0..cols {
                let v = a[r_idx][j].clone() * &inv;
                a[r_idx][j] = v;
            }
            for i in 0..r_idx {
                if !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..cols {
                        let v = a[i][j].clone() - &f * &a[r_idx][j];
                        a[i][j] = v;
                    }
                }
            }
        }
        RationalMatrix::from_rows(a)
    }

    #[test]
    fn identity_is_its_own_rref() {
        let i4 = RationalMatrix::identity(4);
        let (r, pivots) = i4.rref();
        assert_eq!(r, i4);
        assert_eq!(pivots, vec![0, 1, 2, 3]);
    }

    #[test]
    fn multiply_by_identity() {
        let a = int_matrix(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let i3 = RationalMatrix::identity(3);
        assert_eq!(a.multiply(&i3).unwrap(), a);
    }

    #[test]
    fn multiply_checked_entrywise() {
        let a = int_matrix(vec![vec![1, 2, 0, -1], vec![3, 0, 1, 2], vec![0, 1, 1, 0]]);
        let b = int_matrix(vec![vec![2, 1], vec![0, -1], vec![1, 1], vec![3, 0]]);
        let p = a.multiply(&b).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                let mut s = Rat::zero();
                for k in 0..4 {
                    s += &a[(i, k)] * &b[(k, j)];
                }
                assert_eq!(p[(i, j)], s);
            }
        }
    }

    #[test]
    fn multiply_dimension_mismatch() {
        let a = int_matrix(vec![vec![1, 2]]);
        let b = int_matrix(vec![vec![1, 2]]);
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn nullspace_of_zero_matrix() {
        let z = RationalMatrix::zeros(3, 3);
        let ns = z.nullspace();
        assert_eq!(ns.len(), 3);
        for (i, v) in ns.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x == Rat::zero(), i != j);
            }
        }
    }

    #[test]
    fn nullspace_of_full_rank_square() {
        let a = int_matrix(vec![vec![2, 1], vec![1, 1]]);
        assert!(a.nullspace().is_empty());
    }

    #[test]
    fn random_rref_matches_independent_elimination() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let m = RationalMatrix::from_fn(5, 8, |_, _| {
                rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
            });
            let (r, pivots) = m.rref();
            assert_eq!(r, rref_oracle(&m));
            assert_eq!(pivots.len(), m.rank());
        }
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..7);
            let m = RationalMatrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-4..=4)));
            let (r1, _) = m.rref();
            let (r2, _) = r1.rref();
            prop_assert_eq!(r1, r2);
        }

        #[test]
        fn rank_nullity(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..7);
            let m = RationalMatrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-3..=3)));
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), cols);
            for v in &ns {
                let mv = m.mul_vec(v).unwrap();
                prop_assert!(mv.iter().all(|x| x.is_zero()));
            }
        }
    }
}
