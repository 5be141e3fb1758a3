//! Truncated spectra, truncation studies and the classical oracles.

use alloc::vec;
use alloc::vec::Vec;

use crate::closed_form::beta_roots;
use crate::eigen::eigh;
use crate::operator::{assemble_sector, CoeffVector, Parity};
use crate::{CanonicalParams, Error, HermitianPair, Result};

/// Low-lying eigenpairs, ascending, each tagged with its parity sector.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub parities: Vec<Parity>,
    pub eigenvectors: Vec<CoeffVector>,
    pub n_blocks: usize,
    pub alpha: f64,
    /// `|λ(N) − λ(N/2)|`; infinite where the half truncation is too small.
    pub convergence: Vec<f64>,
}

fn lowest(
    params: &CanonicalParams,
    alpha: f64,
    parity: Parity,
    n_blocks: usize,
    k: usize,
) -> Result<(Vec<f64>, Vec<CoeffVector>)> {
    let op = assemble_sector(params, alpha, parity, n_blocks)?;
    if k > op.dim() {
        return Err(Error::TooManyEigenpairs { requested: k, available: op.dim() });
    }
    let eig = eigh(&op.storage)?;
    let vectors = eig.vectors.iter().take(k).map(|v| CoeffVector::from_flat(parity, v)).collect();
    Ok((eig.values[..k].to_vec(), vectors))
}

fn lowest_values(params: &CanonicalParams, alpha: f64, parity: Parity, n_blocks: usize) -> Result<Vec<f64>> {
    let op = assemble_sector(params, alpha, parity, n_blocks)?;
    Ok(eigh(&op.storage)?.values)
}

/// Lowest `k` eigenpairs of the `2N×2N` truncation of one sector.
pub fn truncated_spectrum(
    params: &CanonicalParams,
    alpha: f64,
    parity: Parity,
    n_blocks: usize,
    k: usize,
) -> Result<SpectralResult> {
    let (values, vectors) = lowest(params, alpha, parity, n_blocks, k)?;
    let half = n_blocks / 2;
    let coarse = if half >= 1 { lowest_values(params, alpha, parity, half)? } else { Vec::new() };
    let convergence = values
        .iter()
        .enumerate()
        .map(|(i, v)| coarse.get(i).map_or(f64::INFINITY, |c| (v - c).abs()))
        .collect();
    Ok(SpectralResult {
        eigenvalues: values,
        parities: vec![parity; k],
        eigenvectors: vectors,
        n_blocks,
        alpha,
        convergence,
    })
}

/// The basis scale used when none is given: the smaller β root.
pub fn default_alpha(params: &CanonicalParams) -> f64 {
    beta_roots(params).minus.beta
}

fn merge(even: SpectralResult, odd: SpectralResult, k: usize) -> SpectralResult {
    let mut rows: Vec<(f64, Parity, CoeffVector, f64)> = Vec::with_capacity(2 * k);
    for r in [even, odd] {
        for (((l, p), v), c) in r.eigenvalues.into_iter().zip(r.parities).zip(r.eigenvectors).zip(r.convergence) {
            rows.push((l, p, v, c));
        }
    }
    // Stable on ties: even before odd.
    rows.sort_by(|x, y| x.0.total_cmp(&y.0));
    rows.truncate(k);
    let mut out = SpectralResult {
        eigenvalues: Vec::with_capacity(k),
        parities: Vec::with_capacity(k),
        eigenvectors: Vec::with_capacity(k),
        n_blocks: 0,
        alpha: 0.0,
        convergence: Vec::with_capacity(k),
    };
    for (l, p, v, c) in rows {
        out.eigenvalues.push(l);
        out.parities.push(p);
        out.eigenvectors.push(v);
        out.convergence.push(c);
    }
    out
}

/// Lowest `k` eigenvalues of the full operator: both sectors, merged.
pub fn full_spectrum(params: &CanonicalParams, n_blocks: usize, k: usize, alpha: Option<f64>) -> Result<SpectralResult> {
    let alpha = alpha.unwrap_or_else(|| default_alpha(params));
    let per = k.min(2 * n_blocks);
    if k > 4 * n_blocks {
        return Err(Error::TooManyEigenpairs { requested: k, available: 4 * n_blocks });
    }
    let even = truncated_spectrum(params, alpha, Parity::Even, n_blocks, per)?;
    let odd = truncated_spectrum(params, alpha, Parity::Odd, n_blocks, per)?;
    let mut out = merge(even, odd, k);
    out.n_blocks = n_blocks;
    out.alpha = alpha;
    Ok(out)
}

pub const DEFAULT_BLOCKS: usize = 150;
pub const MAX_BLOCKS: usize = 600;
pub const ADAPTIVE_TOL: f64 = 1e-9;

/// [`full_spectrum`] starting at `start` blocks and doubling until the
/// largest requested eigenvalue moves less than `1e-9`.
pub fn adaptive_spectrum(params: &CanonicalParams, k: usize, alpha: Option<f64>, start: usize) -> Result<SpectralResult> {
    let mut n = start.max(1);
    let mut prev = full_spectrum(params, n, k, alpha)?;
    loop {
        let next_n = 2 * n;
        if next_n > MAX_BLOCKS {
            let last = prev.convergence.last().copied().unwrap_or(f64::INFINITY);
            return Err(Error::TruncationBudgetExceeded { last_change: last });
        }
        let next = full_spectrum(params, next_n, k, alpha)?;
        let change = match (prev.eigenvalues.last(), next.eigenvalues.last()) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ => 0.0,
        };
        if change < ADAPTIVE_TOL {
            let mut next = next;
            if let Some(c) = next.convergence.last_mut() {
                *c = change;
            }
            return Ok(next);
        }
        prev = next;
        n = next_n;
    }
}

/// `{√(a_j b_j)(2n+1)}` for a commuting pair, lowest `k`.
pub fn commutative_spectrum(pair: &HermitianPair, k: usize) -> Result<Vec<f64>> {
    let comm = pair.commutator_norm();
    if comm > 1e-12 * pair.a().norm() * pair.b().norm() {
        return Err(Error::NotCommutative { commutator_norm: comm });
    }
    // A shared eigenbasis: B's, unless B is scalar, then A's.
    let basis = if pair.b().q().norm() == 0.0 && pair.b().p() == pair.b().s() {
        pair.a().eig2()
    } else {
        pair.b().eig2()
    };
    let mut out = Vec::with_capacity(2 * k);
    for (_, w) in basis {
        let aw = pair.a().apply(&w);
        let bw = pair.b().apply(&w);
        let aj = (w[0].conj() * aw[0] + w[1].conj() * aw[1]).re;
        let bj = (w[0].conj() * bw[0] + w[1].conj() * bw[1]).re;
        let e = libm::sqrt(aj * bj);
        out.extend((0..k).map(|n| e * (2 * n + 1) as f64));
    }
    out.sort_by(f64::total_cmp);
    out.truncate(k);
    Ok(out)
}

/// Bracket for `λ_{2n+1}` and `λ_{2n+2}` (1-based, with multiplicity):
/// `[√(a₁b₁)(2n+1), √(a₂b₂)(2n+1)]`.
pub fn weyl_bounds(pair: &HermitianPair, n: usize) -> (f64, f64) {
    let [a1, a2] = pair.a().eigenvalues();
    let [b1, b2] = pair.b().eigenvalues();
    let m = (2 * n + 1) as f64;
    (libm::sqrt(a1 * b1) * m, libm::sqrt(a2 * b2) * m)
}

/// One truncation that increased an eigenvalue beyond the `1e-12` slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityWarning {
    pub index: usize,
    pub from_blocks: usize,
    pub to_blocks: usize,
    pub increase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<(usize, Vec<f64>)>,
    pub warnings: Vec<MonotonicityWarning>,
}

/// Lowest `k` eigenvalues for each truncation in `ns` (sorted ascending).
/// Galerkin truncations can only decrease as `N` grows; any increase is
/// reported.
pub fn convergence_study(
    params: &CanonicalParams,
    alpha: f64,
    parity: Parity,
    ns: &[usize],
    k: usize,
) -> Result<ConvergenceTable> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        let values = lowest_values(params, alpha, parity, n)?;
        rows.push((n, values.into_iter().take(k).collect::<Vec<_>>()));
    }
    let mut warnings = Vec::new();
    for w in rows.windows(2) {
        let ((n0, v0), (n1, v1)) = (&w[0], &w[1]);
        for (i, (a, b)) in v0.iter().zip(v1).enumerate() {
            if b - a > 1e-12 * a.abs().max(1.0) {
                warnings.push(MonotonicityWarning { index: i, from_blocks: *n0, to_blocks: *n1, increase: b - a });
            }
        }
    }
    Ok(ConvergenceTable { rows, warnings })
}
