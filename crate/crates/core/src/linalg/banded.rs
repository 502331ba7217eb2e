use crate::C64;

/// Square band matrix stored row-wise with room for pivoting fill-in.
///
/// Row `i` holds columns `i - kl ..= i + kl + ku`.
#[derive(Clone, Debug)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<C64>,
}

impl BandMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![C64::new(0.0, 0.0); n * width] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        let off = j + self.kl - i;
        debug_assert!(off < self.width, "({i}, {j}) outside band");
        i * self.width + off
    }

    /// Adds `v` at `(i, j)`. Panics when the entry lies outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.norm()))
    }

    /// LU factorization with partial pivoting. Fails with the offending column
    /// when a pivot falls below `tol · max|A|`.
    pub fn factor(mut self, tol: f64) -> Result<BandedLu, usize> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let thresh = tol * self.max_abs();
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.slot(k, k)].norm();
            for r in k + 1..=last {
                let v = self.data[self.slot(r, k)].norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if !(best > thresh) || best == 0.0 {
                return Err(k);
            }
            piv[k] = p;
            let hi = (k + kl + ku).min(n - 1);
            if p != k {
                for c in k..=hi {
                    let (a, b) = (self.slot(k, c), self.slot(p, c));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            let inv = C64::new(1.0, 0.0) / pivot;
            for r in k + 1..=last {
                let s = self.slot(r, k);
                let m = self.data[s] * inv;
                self.data[s] = m;
                if m == C64::new(0.0, 0.0) {
                    continue;
                }
                let rk = self.slot(k, k + 1);
                let rr = self.slot(r, k + 1);
                let len = hi - k;
                for t in 0..len {
                    let u = self.data[rk + t];
                    self.data[rr + t] -= m * u;
                }
            }
        }
        Ok(BandedLu { band: self, piv })
    }
}

/// Factorized band matrix.
#[derive(Clone, Debug)]
pub struct BandedLu {
    band: BandMatrix,
    piv: Vec<usize>,
}

impl BandedLu {
    pub fn dim(&self) -> usize {
        self.band.n
    }

    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [C64]) {
        let a = &self.band;
        let n = a.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk == C64::new(0.0, 0.0) {
                continue;
            }
            let last = (k + a.kl).min(n - 1);
            for r in k + 1..=last {
                b[r] -= a.data[a.slot(r, k)] * bk;
            }
        }
        for k in (0..n).rev() {
            let hi = (k + a.kl + a.ku).min(n - 1);
            let mut acc = b[k];
            for c in k + 1..=hi {
                acc -= a.data[a.slot(k, c)] * b[c];
            }
            b[k] = acc / a.data[a.slot(k, k)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn matches_dense_solve() {
        let n = 30;
        let (kl, ku) = (3, 2);
        let mut band = BandMatrix::new(n, kl, ku);
        let mut dense = DMatrix::<C64>::zeros(n, n);
        let mut seed = 17u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                // small diagonal forces pivoting
                let v = C64::new(next(), next()) * if i == j { 0.01 } else { 1.0 };
                band.add(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let b: Vec<C64> = (0..n).map(|i| C64::new(i as f64, 1.0)).collect();
        let mut x = b.clone();
        band.factor(1e-14).unwrap().solve(&mut x);
        let expect = dense.lu().solve(&DVector::from_vec(b)).unwrap();
        for i in 0..n {
            assert!((x[i] - expect[i]).norm() < 1e-9);
        }
    }
}
