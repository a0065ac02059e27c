//! Real banded matrices with LU factorization by partial pivoting.
//!
//! Rows are stored as dense windows over absolute columns
//! `[i - kl, i + ku + kl]`; the extra `kl` columns absorb pivoting fill.

use crate::error::{Error, Result};

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
        Self { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl, "({i}, {j}) outside band");
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            return 0.0;
        }
        self.data[self.slot(i, j)]
    }

    /// Adds `v` at `(i, j)`. Panics if `(i, j)` is outside `[-kl, ku]`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku + self.kl).min(self.n - 1);
            y[i] = (lo..=hi).map(|j| self.data[self.slot(i, j)] * x[j]).sum();
        }
    }

    pub fn factor(mut self) -> Result<BandLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut pivots = Vec::with_capacity(n);
        for j in 0..n {
            let last_row = (j + kl).min(n - 1);
            let (mut p, mut best) = (j, self.get(j, j).abs());
            for r in j + 1..=last_row {
                let v = self.get(r, j).abs();
                if v > best {
                    p = r;
                    best = v;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularSystem(format!("zero pivot in column {j}")));
            }
            pivots.push(p);
            let col_hi = (j + ku + kl).min(n - 1);
            if p != j {
                for c in j..=col_hi {
                    let (a, b) = (self.slot(j, c), self.slot(p, c));
                    self.data.swap(a, b);
                }
            }
            let diag = self.get(j, j);
            for r in j + 1..=last_row {
                let sr = self.slot(r, j);
                let m = self.data[sr] / diag;
                self.data[sr] = m;
                if m == 0.0 {
                    continue;
                }
                for c in j + 1..=col_hi {
                    let u = self.data[self.slot(j, c)];
                    if u != 0.0 {
                        let s = self.slot(r, c);
                        self.data[s] -= m * u;
                    }
                }
            }
        }
        Ok(BandLu { lu: self, pivots })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, kl, ku) = (self.lu.n, self.lu.kl, self.lu.ku);
        assert_eq!(b.len(), n);
        for j in 0..n {
            b.swap(j, self.pivots[j]);
            let bj = b[j];
            if bj != 0.0 {
                for r in j + 1..=(j + kl).min(n - 1) {
                    b[r] -= self.lu.get(r, j) * bj;
                }
            }
        }
        for i in (0..n).rev() {
            let hi = (i + ku + kl).min(n - 1);
            let mut s = b[i];
            for c in i + 1..=hi {
                s -= self.lu.get(i, c) * b[c];
            }
            b[i] = s / self.lu.get(i, i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_mul(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
    }

    #[test]
    fn solves_random_banded_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, kl, ku) in &[(1, 0, 0), (6, 1, 1), (40, 7, 5), (33, 3, 9), (25, 0, 4)] {
            let mut band = BandMatrix::zeros(n, kl, ku);
            let mut dense = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                    // weak diagonal forces pivoting
                    let v: f64 = rng.random_range(-1.0..1.0) * if i == j && kl > 0 { 0.01 } else { 1.0 };
                    let v = if i == j && kl == 0 { v.signum() * (1.0 + v.abs()) } else { v };
                    band.add(i, j, v);
                    dense[i][j] = v;
                }
            }
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut b = dense_mul(&dense, &x);
            let mut y = vec![0.0; n];
            band.mul_vec(&x, &mut y);
            for (p, q) in y.iter().zip(&b) {
                assert!((p - q).abs() < 1e-13);
            }
            band.factor().unwrap().solve_in_place(&mut b);
            for (p, q) in b.iter().zip(&x) {
                assert!((p - q).abs() < 1e-9, "n={n}: {p} vs {q}");
            }
        }
    }

    #[test]
    fn singular_is_reported() {
        let mut band = BandMatrix::zeros(3, 1, 1);
        band.add(0, 0, 1.0);
        band.add(1, 1, 1.0);
        assert!(matches!(band.factor(), Err(Error::SingularSystem(_))));
    }
}
