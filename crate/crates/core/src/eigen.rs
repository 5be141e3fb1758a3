//! Dense Hermitian eigensolver.
//!
//! Householder reduction to a Hermitian tridiagonal matrix, a diagonal
//! phase change that makes the off-diagonal real, then implicit-shift QL on
//! the real symmetric tridiagonal (the `tql2` scheme) with accumulated
//! transforms.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self[(i, j)] == self[(j, i)].conj()))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Leading `k×k` principal submatrix.
    pub fn leading(&self, k: usize) -> CMatrix {
        let mut out = CMatrix::zeros(k);
        for i in 0..k {
            out.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        out
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues ascending; `vectors[j]` is the unit eigenvector of
/// `values[j]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

/// Full eigendecomposition of a Hermitian matrix. Only the lower triangle
/// is read.
pub fn eigh(m: &CMatrix) -> Result<Eigen> {
    let n = m.dim();
    if n == 0 {
        return Ok(Eigen { values: Vec::new(), vectors: Vec::new() });
    }
    let (diag, off, q) = tridiagonalize(m);

    // Phase change D = diag(d_j) with d_{k+1} = d_k e_k/|e_k| makes the
    // sub-diagonal |e_k|.
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    let mut e = vec![0.0; n];
    for k in 0..n - 1 {
        let r = off[k].norm();
        e[k + 1] = r;
        phase[k + 1] = if r > 0.0 { phase[k] * (off[k] / r) } else { phase[k] };
    }

    let mut d = diag;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut e, &mut z, n)?;

    // Eigenvectors: Q D Z, then sort.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let mut qd = q;
    for i in 0..n {
        for j in 0..n {
            qd[(i, j)] *= phase[j];
        }
    }
    let mut vectors = Vec::with_capacity(n);
    for &col in &order {
        let mut v = vec![ZERO; n];
        for (i, vi) in v.iter_mut().enumerate() {
            let row = qd.row(i);
            let mut acc = ZERO;
            for k in 0..n {
                acc += row[k] * z[k * n + col];
            }
            *vi = acc;
        }
        vectors.push(v);
    }
    let values = order.iter().map(|&i| d[i]).collect();
    Ok(Eigen { values, vectors })
}

/// Returns `(diagonal, subdiagonal, Q)` with `A = Q T Q*`.
fn tridiagonalize(m: &CMatrix) -> (Vec<f64>, Vec<Complex64>, CMatrix) {
    let n = m.dim();
    let mut a = m.clone();
    // Work from the lower triangle only.
    for i in 0..n {
        for j in i + 1..n {
            a[(i, j)] = a[(j, i)].conj();
        }
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut q = CMatrix::identity(n);
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x0 = a[(k + 1, k)];
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = libm::sqrt(x0.norm_sqr() + tail);
        let ph = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        // v = x + e^{iθ}|x| e₁, H = I − τ v v*.
        let v = &mut v[..len];
        v[0] = x0 + ph * xnorm;
        for i in 1..len {
            v[i] = a[(k + 1 + i, k)];
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // Column k collapses onto e₁.
        let beta = -ph * xnorm;
        a[(k + 1, k)] = beta;
        a[(k, k + 1)] = beta.conj();
        for i in k + 2..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }

        // Trailing block: A ← A − v w* − w v*, w = p − K v,
        // p = τ A v, K = (τ/2) v* p.
        let p = &mut p[..len];
        for i in 0..len {
            let row = &a.row(k + 1 + i)[k + 1..];
            p[i] = row.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<Complex64>() * tau;
        }
        let kk: Complex64 = v.iter().zip(p.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>() * (0.5 * tau);
        let kk = kk.re;
        for i in 0..len {
            p[i] -= v[i] * kk;
        }
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= upd;
            }
        }

        // Q ← Q P_k on columns k+1..n.
        for r in 0..n {
            let row = &q.row(r)[k + 1..];
            let qv: Complex64 = row.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<Complex64>() * tau;
            for j in 0..len {
                q[(r, k + 1 + j)] -= qv * v[j].conj();
            }
        }
    }

    let diag = (0..n).map(|i| a[(i, i)].re).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[(i + 1, i)]).collect();
    (diag, off, q)
}

/// Implicit QL on a symmetric tridiagonal matrix. `e[i]` holds the
/// sub-diagonal element between rows `i−1` and `i` (`e[0]` unused).
/// `z` (n×n, row major) accumulates the rotations.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let max_iter = 30 * n;
    let mut iters = 0usize;
    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            loop {
                iters += 1;
                if iters > max_iter {
                    return Err(Error::ConvergenceFailure);
                }
                // Wilkinson-type shift from the leading 2×2.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zk1 = z[k * n + i + 1];
                        let zk = z[k * n + i];
                        z[k * n + i + 1] = s * zk + c * zk1;
                        z[k * n + i] = c * zk - s * zk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_lower(n: usize, entries: &[(f64, f64)]) -> CMatrix {
        let mut m = CMatrix::zeros(n);
        let mut it = entries.iter();
        for i in 0..n {
            for j in 0..=i {
                let &(re, im) = it.next().unwrap();
                if i == j {
                    m[(i, i)] = c(re, 0.0);
                } else {
                    m[(i, j)] = c(re, im);
                    m[(j, i)] = c(re, -im);
                }
            }
        }
        m
    }

    fn check(m: &CMatrix) {
        let n = m.dim();
        let eig = eigh(m).unwrap();
        let norm = m.norm().max(1e-300);
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for (l, v) in eig.values.iter().zip(&eig.vectors) {
            let mv = m.mul_vec(v);
            let r: f64 = mv.iter().zip(v).map(|(a, b)| (a - b * l).norm_sqr()).sum();
            assert!(libm::sqrt(r) <= 1e-12 * norm, "residual {}", libm::sqrt(r));
        }
        for i in 0..n {
            for j in 0..n {
                let ip: Complex64 = eig.vectors[i].iter().zip(&eig.vectors[j]).map(|(a, b)| a.conj() * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() < 1e-12);
            }
        }
        // Spectral invariants: trace and Frobenius norm.
        let tr: f64 = (0..n).map(|i| m[(i, i)].re).sum();
        let sum: f64 = eig.values.iter().sum();
        let sq: f64 = eig.values.iter().map(|l| l * l).sum();
        assert!((tr - sum).abs() <= 1e-12 * norm * n as f64);
        assert!((sq - norm * norm).abs() <= 1e-11 * norm * norm);
    }

    #[test]
    fn diagonal_and_small() {
        let mut m = CMatrix::zeros(3);
        m[(0, 0)] = c(3.0, 0.0);
        m[(1, 1)] = c(-1.0, 0.0);
        m[(2, 2)] = c(2.0, 0.0);
        let eig = eigh(&m).unwrap();
        assert_eq!(eig.values, vec![-1.0, 2.0, 3.0]);

        let m = from_lower(2, &[(0.0, 0.0), (0.0, 1.0), (0.0, 0.0)]);
        let eig = eigh(&m).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15 && (eig.values[1] - 1.0).abs() < 1e-15);
        check(&m);
    }

    #[test]
    fn one_by_one_and_empty() {
        let mut m = CMatrix::zeros(1);
        m[(0, 0)] = c(7.0, 0.0);
        let eig = eigh(&m).unwrap();
        assert_eq!(eig.values, vec![7.0]);
        assert!(eigh(&CMatrix::zeros(0)).unwrap().values.is_empty());
    }

    #[test]
    fn repeated_eigenvalues() {
        // Block-diagonal 2·I ⊕ [[0,1],[1,0]] ⊕ 2: eigenvalues {−1, 1, 2, 2, 2}.
        let mut m = CMatrix::zeros(5);
        m[(0, 0)] = c(2.0, 0.0);
        m[(1, 1)] = c(2.0, 0.0);
        m[(2, 3)] = c(1.0, 0.0);
        m[(3, 2)] = c(1.0, 0.0);
        m[(4, 4)] = c(2.0, 0.0);
        let eig = eigh(&m).unwrap();
        let want = [-1.0, 1.0, 2.0, 2.0, 2.0];
        for (a, b) in eig.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        check(&m);
    }

    #[test]
    fn laplacian_matches_closed_form() {
        // Path-graph Laplacian-like matrix: 2 on diagonal, −1 off diagonal,
        // eigenvalues 2 − 2cos(kπ/(n+1)).
        let n = 40;
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = c(2.0, 0.0);
            if i + 1 < n {
                m[(i, i + 1)] = c(0.0, -1.0);
                m[(i + 1, i)] = c(0.0, 1.0);
            }
        }
        let eig = eigh(&m).unwrap();
        for (k, l) in eig.values.iter().enumerate() {
            let want = 2.0 - 2.0 * libm::cos((k + 1) as f64 * core::f64::consts::PI / (n + 1) as f64);
            assert!((l - want).abs() < 1e-13, "{k}: {l} vs {want}");
        }
        check(&m);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_hermitian(n in 1usize..24, seed in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 300)) {
            let m = from_lower(n, &seed[..n * (n + 1) / 2]);
            check(&m);
        }
    }
}
