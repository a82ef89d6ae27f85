//! Banded LU factorization with partial pivoting (LINPACK `gbfa`/`gbsl` layout).

use std::ops::{Div, Mul, SubAssign};

use crate::error::{Error, Result};

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Rows are stored with room for the `kl` extra super-diagonals that partial
/// pivoting can create.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku, "({i},{j}) outside band");
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            return 0.0;
        }
        self.data[self.index(i, j)]
    }

    /// Sets an entry inside the original band (`i - kl ≤ j ≤ i + ku`).
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i},{j}) outside the declared band");
        let k = self.index(i, j);
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i},{j}) outside the declared band");
        let k = self.index(i, j);
        self.data[k] += v;
    }

    /// `y = A x` using the original band.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    pub fn factor(mut self, context: &str) -> Result<BandLu> {
        let n = self.n;
        let mut pivots = vec![0usize; n];
        let upper = self.kl + self.ku;
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularSystem { row: k, size: n, context: context.to_string() });
            }
            pivots[k] = p;
            let last_col = (k + upper).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let a = self.index(k, j);
                    let b = self.index(p, j);
                    self.data.swap(a, b);
                }
            }
            let diag = self.data[self.index(k, k)];
            for i in k + 1..=last_row {
                let ik = self.index(i, k);
                let l = self.data[ik] / diag;
                self.data[ik] = l;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        let kj = self.data[self.index(k, j)];
                        let ij = self.index(i, j);
                        self.data[ij] -= l * kj;
                    }
                }
            }
        }
        Ok(BandLu { lu: self, pivots })
    }
}

/// LU factors of a [`BandMatrix`].
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn size(&self) -> usize {
        self.lu.n
    }

    /// Solves `A x = b` in place for real or complex right-hand sides.
    pub fn solve_in_place<T>(&self, b: &mut [T])
    where
        T: Copy + SubAssign + Mul<f64, Output = T> + Div<f64, Output = T>,
    {
        let a = &self.lu;
        let n = a.n;
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(p, k);
            }
            let bk = b[k];
            for i in k + 1..=(k + a.kl).min(n - 1) {
                let l = a.data[a.index(i, k)];
                if l != 0.0 {
                    b[i] -= bk * l;
                }
            }
        }
        let upper = a.kl + a.ku;
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..=(i + upper).min(n - 1) {
                acc -= b[j] * a.data[a.index(i, j)];
            }
            b[i] = acc / a.data[a.index(i, i)];
        }
    }
}
