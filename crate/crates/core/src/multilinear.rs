//! Dense coefficient tables over `M(m, n)`, i.e. general (not necessarily
//! symmetric) m-linear forms `B(z^(1), ..., z^(m)) = sum_i b_i z^(1)_{i_1} ... z^(m)_{i_m}`.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::poly::CoefficientDistribution;
use crate::seed;

/// Largest `n^m` a dense table may have.
pub const MAX_DENSE_ENTRIES: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearForm {
    m: usize,
    n: usize,
    /// Row-major, `i_1` varies slowest.
    entries: Vec<Complex64>,
}

fn dense_len(m: usize, n: usize) -> Result<usize> {
    if m == 0 || n == 0 {
        return invalid("multilinear form needs m, n >= 1");
    }
    let len = (n as u64)
        .checked_pow(m as u32)
        .filter(|&l| l <= MAX_DENSE_ENTRIES as u64)
        .ok_or_else(|| Error::BudgetExceeded(format!("n^m = {n}^{m} exceeds {MAX_DENSE_ENTRIES} entries")))?;
    Ok(len as usize)
}

impl MultilinearForm {
    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        Ok(Self { m, n, entries: vec![Complex64::new(0.0, 0.0); dense_len(m, n)?] })
    }

    pub fn from_entries(m: usize, n: usize, entries: Vec<Complex64>) -> Result<Self> {
        let len = dense_len(m, n)?;
        if entries.len() != len {
            return invalid(format!("expected {len} entries, got {}", entries.len()));
        }
        Ok(Self { m, n, entries })
    }

    /// Fills every `i` in `M(m, n)` (1-based entries) from `f`.
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(&[usize]) -> Complex64) -> Result<Self> {
        let mut form = Self::zeros(m, n)?;
        let mut idx = vec![1usize; m];
        for k in 0..form.entries.len() {
            form.entries[k] = f(&idx);
            advance(&mut idx, n);
        }
        Ok(form)
    }

    pub fn random(m: usize, n: usize, dist: CoefficientDistribution, seed: u64) -> Result<Self> {
        let mut rng = seed::rng(seed, &[]);
        Self::from_fn(m, n, |_| dist.sample(&mut rng))
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &e| acc * self.n + (e - 1))
    }

    /// `b_i` for a 1-based index tuple.
    pub fn get(&self, idx: &[usize]) -> Result<Complex64> {
        self.check_index(idx)?;
        Ok(self.entries[self.flat(idx)])
    }

    pub fn set(&mut self, idx: &[usize], value: Complex64) -> Result<()> {
        self.check_index(idx)?;
        let k = self.flat(idx);
        self.entries[k] = value;
        Ok(())
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.m || idx.iter().any(|&e| e == 0 || e > self.n) {
            return invalid(format!("index {idx:?} not in M({}, {})", self.m, self.n));
        }
        Ok(())
    }

    /// Visits every `(i, b_i)` with `i` 1-based, in row-major order.
    pub fn for_each(&self, mut f: impl FnMut(&[usize], Complex64)) {
        let mut idx = vec![1usize; self.m];
        for &b in &self.entries {
            f(&idx, b);
            advance(&mut idx, self.n);
        }
    }

    fn check_points(&self, points: &[Vec<Complex64>]) -> Result<()> {
        if points.len() != self.m {
            return invalid(format!("expected {} points, got {}", self.m, points.len()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != self.n) {
            return invalid(format!("point of dimension {} but n = {}", p.len(), self.n));
        }
        Ok(())
    }

    pub fn evaluate(&self, points: &[Vec<Complex64>]) -> Result<Complex64> {
        self.check_points(points)?;
        // contract the last slot first: reduce rows of length n repeatedly
        let mut cur = self.entries.clone();
        for k in (0..self.m).rev() {
            cur = cur
                .chunks_exact(self.n)
                .map(|row| row.iter().zip(&points[k]).map(|(b, z)| b * z).sum())
                .collect();
        }
        Ok(cur[0])
    }

    /// The coefficients of `B` as a linear function of slot `k` (0-based)
    /// with every other slot fixed: `g_d = sum_{i: i_k = d} b_i prod_{l != k} z^(l)_{i_l}`.
    pub fn slot_gradient(&self, k: usize, points: &[Vec<Complex64>]) -> Vec<Complex64> {
        let n = self.n;
        let stride = n.pow((self.m - 1 - k) as u32);
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        let mut idx = vec![0usize; self.m];
        for (flat, &b) in self.entries.iter().enumerate() {
            if b != Complex64::new(0.0, 0.0) {
                let mut w = b;
                for (l, &e) in idx.iter().enumerate() {
                    if l != k {
                        w *= points[l][e];
                    }
                }
                g[(flat / stride) % n] += w;
            }
            // 0-based odometer
            for e in idx.iter_mut().rev() {
                *e += 1;
                if *e < n {
                    break;
                }
                *e = 0;
            }
        }
        g
    }
}

fn advance(idx: &mut [usize], n: usize) {
    for e in idx.iter_mut().rev() {
        if *e < n {
            *e += 1;
            return;
        }
        *e = 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn layout_and_access() {
        let f = MultilinearForm::from_fn(2, 3, |i| c((10 * i[0] + i[1]) as f64)).unwrap();
        assert_eq!(f.get(&[2, 3]).unwrap(), c(23.0));
        assert_eq!(f.entries()[0], c(11.0));
        assert_eq!(f.entries()[8], c(33.0));
        assert!(f.get(&[0, 1]).is_err());
        assert!(f.get(&[1]).is_err());
    }

    #[test]
    fn evaluate_matches_direct_sum() {
        let f = MultilinearForm::random(3, 2, CoefficientDistribution::ComplexGaussian, 4).unwrap();
        let pts: Vec<Vec<Complex64>> = (0..3)
            .map(|k| (0..2).map(|d| Complex64::new(0.1 * (k + d) as f64, 0.3 - 0.2 * d as f64)).collect())
            .collect();
        let mut direct = Complex64::new(0.0, 0.0);
        f.for_each(|i, b| direct += b * pts[0][i[0] - 1] * pts[1][i[1] - 1] * pts[2][i[2] - 1]);
        assert!((f.evaluate(&pts).unwrap() - direct).norm() < 1e-14);
        for k in 0..3 {
            let g = f.slot_gradient(k, &pts);
            let via_g: Complex64 = g.iter().zip(&pts[k]).map(|(a, z)| a * z).sum();
            assert!((via_g - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn size_cap() {
        assert!(matches!(MultilinearForm::zeros(8, 10), Err(Error::BudgetExceeded(_))));
    }
}
