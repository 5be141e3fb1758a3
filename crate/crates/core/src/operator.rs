//! Hermite-basis representation of the two parity sectors.
//!
//! In the basis `{φ_n^α}` the operator acts on coefficient blocks `v_n ∈ C²` by
//!
//! ```text
//! (Hv)_n = ½[ √(n(n−1)) N_α v_{n−2} + (2n+1) M_α v_n + √((n+1)(n+2)) N_α v_{n+2} ]
//! ```
//!
//! so even and odd indices decouple. Block `k` of a sector is basis index
//! `n = 2k + offset`. Everything stored here is `H±` itself, not `2H±`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::eigen::CMatrix;
use crate::matrix::{check_alpha, Herm2};
use crate::{CanonicalParams, Error, Result, C2};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Hermite index of block `k`.
    pub fn index(self, k: usize) -> usize {
        2 * k + self.offset()
    }

    pub fn sign(self) -> char {
        match self {
            Parity::Even => '+',
            Parity::Odd => '-',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Multiplier of `M_α` in diagonal block `k` (that is `S_k/2`).
pub fn diagonal_factor(parity: Parity, k: usize) -> f64 {
    (2 * parity.index(k) + 1) as f64 / 2.0
}

/// Multiplier of `N_α` coupling blocks `k` and `k+1` (that is `T_{k+1}/2`).
pub fn coupling_factor(parity: Parity, k: usize) -> f64 {
    let n = parity.index(k) as f64;
    libm::sqrt((n + 1.0) * (n + 2.0)) / 2.0
}

/// Hermite coefficients of one parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    pub parity: Parity,
    pub blocks: Vec<C2>,
}

impl CoeffVector {
    pub fn new(parity: Parity, blocks: Vec<C2>) -> Self {
        CoeffVector { parity, blocks }
    }

    pub fn zeros(parity: Parity, n_blocks: usize) -> Self {
        CoeffVector { parity, blocks: vec![[ZERO; 2]; n_blocks] }
    }

    /// `w` placed in block `k`.
    pub fn unit(parity: Parity, k: usize, w: C2) -> Self {
        let mut v = CoeffVector::zeros(parity, k + 1);
        v.blocks[k] = w;
        v
    }

    /// Flat `[v_0[0], v_0[1], v_1[0], …]` layout matching [`SectorOperator`].
    pub fn from_flat(parity: Parity, flat: &[Complex64]) -> Self {
        let blocks = flat.chunks(2).map(|c| [c[0], c.get(1).copied().unwrap_or(ZERO)]).collect();
        CoeffVector { parity, blocks }
    }

    pub fn to_flat(&self) -> Vec<Complex64> {
        self.blocks.iter().flat_map(|b| b.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().map(|b| b[0].norm_sqr() + b[1].norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    /// Squared ℓ² mass in blocks `keep..`.
    pub fn tail_mass(&self, keep: usize) -> f64 {
        self.blocks.iter().skip(keep).map(|b| b[0].norm_sqr() + b[1].norm_sqr()).sum()
    }

    /// `self − λ·other` over the union of supports.
    pub fn sub_scaled(&self, lambda: f64, other: &CoeffVector) -> CoeffVector {
        let n = self.len().max(other.len());
        let get = |v: &CoeffVector, k: usize| v.blocks.get(k).copied().unwrap_or([ZERO; 2]);
        let blocks = (0..n)
            .map(|k| {
                let (x, y) = (get(self, k), get(other, k));
                [x[0] - y[0] * lambda, x[1] - y[1] * lambda]
            })
            .collect();
        CoeffVector { parity: self.parity, blocks }
    }
}

/// Leading `2N×2N` truncation of `H±` in the basis `{φ_{2k+offset}^α}`.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    pub params: CanonicalParams,
    pub alpha: f64,
    pub parity: Parity,
    pub n_blocks: usize,
    pub storage: CMatrix,
}

impl SectorOperator {
    pub fn dim(&self) -> usize {
        2 * self.n_blocks
    }

    pub fn apply(&self, v: &CoeffVector) -> Result<CoeffVector> {
        if v.parity != self.parity {
            return Err(Error::ParityMismatch);
        }
        let mut flat = v.to_flat();
        flat.resize(self.dim(), ZERO);
        flat.truncate(self.dim());
        Ok(CoeffVector::from_flat(self.parity, &self.storage.mul_vec(&flat)))
    }
}

fn write_block(m: &mut CMatrix, bi: usize, bj: usize, h: &Herm2) {
    let e = h.to_matrix();
    for (i, row) in e.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m[(2 * bi + i, 2 * bj + j)] = *x;
        }
    }
}

/// Builds the truncated block-tridiagonal sector matrix.
pub fn assemble_sector(
    params: &CanonicalParams,
    alpha: f64,
    parity: Parity,
    n_blocks: usize,
) -> Result<SectorOperator> {
    check_alpha(alpha)?;
    if n_blocks == 0 {
        return Err(Error::ZeroDimension);
    }
    let m = params.m_alpha(alpha)?;
    let n = params.n_alpha(alpha)?;
    let mut storage = CMatrix::zeros(2 * n_blocks);
    for k in 0..n_blocks {
        write_block(&mut storage, k, k, &m.scale(diagonal_factor(parity, k)));
        if k + 1 < n_blocks {
            let t = n.scale(coupling_factor(parity, k));
            // N_α is Hermitian, so the block and its adjoint coincide.
            write_block(&mut storage, k, k + 1, &t);
            write_block(&mut storage, k + 1, k, &t);
        }
    }
    Ok(SectorOperator { params: *params, alpha, parity, n_blocks, storage })
}

/// Matrix-free `H±v`. Blocks beyond the input are zero, so the result is one
/// block longer than `v`.
pub fn apply_operator(
    v: &CoeffVector,
    params: &CanonicalParams,
    alpha: f64,
    parity: Parity,
) -> Result<CoeffVector> {
    if v.parity != parity {
        return Err(Error::ParityMismatch);
    }
    let m = params.m_alpha(alpha)?;
    let n = params.n_alpha(alpha)?;
    let len = v.len();
    let mut out = CoeffVector::zeros(parity, len + 1);
    for (k, o) in out.blocks.iter_mut().enumerate() {
        let mut acc = [ZERO; 2];
        let mut add = |w: C2| {
            acc[0] += w[0];
            acc[1] += w[1];
        };
        if k < len {
            let w = m.apply(&v.blocks[k]);
            let f = diagonal_factor(parity, k);
            add([w[0] * f, w[1] * f]);
        }
        if k >= 1 && k - 1 < len {
            let w = n.apply(&v.blocks[k - 1]);
            let f = coupling_factor(parity, k - 1);
            add([w[0] * f, w[1] * f]);
        }
        if k + 1 < len {
            let w = n.apply(&v.blocks[k + 1]);
            let f = coupling_factor(parity, k);
            add([w[0] * f, w[1] * f]);
        }
        *o = acc;
    }
    Ok(out)
}

/// Largest Hermite index accepted by [`hermite_eval`].
pub const HERMITE_MAX_ORDER: usize = 500;

/// All of `φ_0^α(x), …, φ_{n_max}^α(x)`.
///
/// Upward recurrence on the orthonormal functions with the Gaussian factor
/// kept separately as a logarithm, so large `|x|` neither overflows the
/// polynomial part nor underflows the exponential before they are combined.
pub fn hermite_all(n_max: usize, alpha: f64, x: f64) -> Vec<f64> {
    let y = libm::sqrt(alpha) * x;
    let mut out = vec![0.0; n_max + 1];
    let mut log_scale = -0.5 * y * y;
    let mut prev = 0.0;
    let mut cur = libm::pow(core::f64::consts::PI, -0.25);
    let mut scales = vec![0.0; n_max + 1];
    scales[0] = log_scale;
    out[0] = cur;
    for n in 0..n_max {
        let nf = n as f64;
        let next = libm::sqrt(2.0 / (nf + 1.0)) * y * cur - libm::sqrt(nf / (nf + 1.0)) * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e100 {
            prev /= mag;
            cur /= mag;
            log_scale += libm::log(mag);
        }
        out[n + 1] = cur;
        scales[n + 1] = log_scale;
    }
    let pref = libm::pow(alpha, 0.25);
    for (o, s) in out.iter_mut().zip(&scales) {
        *o = if *o == 0.0 { 0.0 } else { pref * libm::copysign(libm::exp(libm::log(o.abs()) + s), *o) };
    }
    out
}

/// `φ_n^α(x)`, the normalized scalar oscillator eigenfunction.
pub fn hermite_eval(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n > HERMITE_MAX_ORDER {
        return Err(Error::InvalidArgument("Hermite order exceeds 500"));
    }
    Ok(hermite_all(n, alpha, x)[n])
}

/// Both components of `Σ_k v_k φ_{2k+offset}^α(x)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub first: Vec<Complex64>,
    pub second: Vec<Complex64>,
}

pub fn reconstruct(v: &CoeffVector, alpha: f64, xs: &[f64]) -> Result<Reconstruction> {
    check_alpha(alpha)?;
    let top = if v.is_empty() { 0 } else { v.parity.index(v.len() - 1) };
    if top > HERMITE_MAX_ORDER {
        return Err(Error::InvalidArgument("Hermite order exceeds 500"));
    }
    let mut first = Vec::with_capacity(xs.len());
    let mut second = Vec::with_capacity(xs.len());
    for &x in xs {
        let phi = hermite_all(top, alpha, x);
        let mut acc = [ZERO; 2];
        for (k, b) in v.blocks.iter().enumerate() {
            let f = phi[v.parity.index(k)];
            acc[0] += b[0] * f;
            acc[1] += b[1] * f;
        }
        first.push(acc[0]);
        second.push(acc[1]);
    }
    Ok(Reconstruction { first, second })
}

/// Uniform grid on `[−20/√α, 20/√α]` with `points` nodes.
pub fn default_grid(alpha: f64, points: usize) -> Vec<f64> {
    let half = 20.0 / libm::sqrt(alpha);
    let h = 2.0 * half / (points - 1) as f64;
    (0..points).map(|i| -half + h * i as f64).collect()
}
