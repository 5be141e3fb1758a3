//! The work behind each subcommand, returning serializable reports.
//!
//! Matrix-pair input is canonicalized first; reported energies and
//! coefficient vectors are mapped back to the input frame
//! (`λ = b₁λ̃`, `Φ = U*Φ̃`) and the transform is echoed.

use ncho_core::closed_form::{construct_phi, eigen_residual, first_block_gap};
use ncho_core::matrix::{adjoint, Mat2};
use ncho_core::spectrum::{adaptive_spectrum, convergence_study, full_spectrum, DEFAULT_BLOCKS};
use ncho_core::{BetaSign, CanonicalParams, CoeffVector, Complex64, HermitianPair, Parity, C2};
use serde::Serialize;

use crate::error::CliResult;
use crate::input::CoeffFile;
use ncho_core::region::Tetrad;

pub enum Input {
    Pair(HermitianPair),
    Tetrad(Tetrad),
}

impl Input {
    pub fn params(&self) -> CliResult<CanonicalParams> {
        Ok(match self {
            Input::Pair(p) => p.canonicalize(),
            Input::Tetrad(t) => t.params()?,
        })
    }
}

fn cx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn apply(u: &Mat2, w: &C2) -> C2 {
    [u[0][0] * w[0] + u[0][1] * w[1], u[1][0] * w[0] + u[1][1] * w[1]]
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalJson {
    pub b: f64,
    pub a: f64,
    pub c: f64,
    pub xi: [f64; 2],
}

/// `A = b1·U*ÃU`, `B = b1·U*B̃U`.
#[derive(Debug, Clone, Serialize)]
pub struct TransformJson {
    pub u: [[[f64; 2]; 2]; 2],
    pub b1: f64,
}

fn canonical(p: &CanonicalParams) -> CanonicalJson {
    CanonicalJson { b: p.b, a: p.a, c: p.c, xi: cx(p.xi) }
}

fn transform(p: &CanonicalParams) -> TransformJson {
    let u = p.transform_u;
    TransformJson { u: [[cx(u[0][0]), cx(u[0][1])], [cx(u[1][0]), cx(u[1][1])]], b1: p.scale_b1 }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub parities: Vec<&'static str>,
    pub convergence: Vec<f64>,
    pub n_blocks: usize,
    pub alpha: f64,
    pub canonical: CanonicalJson,
    pub transform: TransformJson,
}

/// `adaptive` doubles `n_blocks` until the top eigenvalue settles.
pub fn spectrum(input: &Input, n_blocks: Option<usize>, k: usize, alpha: Option<f64>, adaptive: bool) -> CliResult<SpectrumReport> {
    let p = input.params()?;
    let n = n_blocks.unwrap_or(DEFAULT_BLOCKS);
    let r = if adaptive { adaptive_spectrum(&p, k, alpha, n)? } else { full_spectrum(&p, n, k, alpha)? };
    let s = p.scale_b1;
    Ok(SpectrumReport {
        eigenvalues: r.eigenvalues.iter().map(|l| s * l).collect(),
        parities: r.parities.iter().map(|q| q.name()).collect(),
        convergence: r.convergence.iter().map(|c| s * c).collect(),
        n_blocks: r.n_blocks,
        alpha: r.alpha,
        canonical: canonical(&p),
        transform: transform(&p),
    })
}

/// Coefficient file contents; also accepted by `verify --coeffs`.
#[derive(Debug, Clone, Serialize)]
pub struct CoeffJson {
    pub parity: &'static str,
    pub alpha: f64,
    pub blocks: Vec<[[f64; 2]; 2]>,
}

fn coeff_json(v: &CoeffVector, alpha: f64, u_star: &Mat2) -> CoeffJson {
    CoeffJson {
        parity: v.parity.name(),
        alpha,
        blocks: v.blocks.iter().map(|w| apply(u_star, w)).map(|w| [cx(w[0]), cx(w[1])]).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub parity: &'static str,
    pub sign: &'static str,
    pub beta: f64,
    pub defect: f64,
    /// In the input frame.
    pub lambda: f64,
    pub lambda_canonical: f64,
    pub gamma: [f64; 2],
    pub gamma_tilde: [f64; 2],
    /// Hermite coefficients in the input frame.
    pub coefficients: CoeffJson,
    pub residual_membership: f64,
    pub membership_scale: f64,
    pub residual_eigen: f64,
    pub first_block_gap: f64,
    pub canonical: CanonicalJson,
    pub transform: TransformJson,
}

pub fn closed_form(input: &Input, sign: BetaSign, parity: Parity, tol: f64) -> CliResult<ClosedFormReport> {
    let p = input.params()?;
    let sol = construct_phi(&p, sign, parity, tol)?;
    let gap = first_block_gap(&sol, &p)?;
    let u_star = adjoint(&p.transform_u);
    Ok(ClosedFormReport {
        parity: parity.name(),
        sign: sign.name(),
        beta: sol.beta_root.beta,
        defect: sol.beta_root.defect,
        lambda: p.scale_b1 * sol.lambda,
        lambda_canonical: sol.lambda,
        gamma: cx(sol.gamma),
        gamma_tilde: cx(sol.gamma_tilde),
        coefficients: coeff_json(&sol.coeff_vector(), sol.alpha(), &u_star),
        residual_membership: sol.residual_membership,
        membership_scale: sol.membership_scale,
        residual_eigen: sol.residual_eigen,
        first_block_gap: gap,
        canonical: canonical(&p),
        transform: transform(&p),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub lambda: f64,
    pub parity: &'static str,
    pub alpha: f64,
    pub n_blocks: usize,
    /// `‖Hφ − λφ‖/‖φ‖` in the input frame's energy units.
    pub residual: f64,
}

pub fn verify(input: &Input, lambda: f64, coeffs: &CoeffFile) -> CliResult<VerifyReport> {
    let p = input.params()?;
    let u = p.transform_u;
    let v = &coeffs.vector;
    let canon = CoeffVector::new(v.parity, v.blocks.iter().map(|w| apply(&u, w)).collect());
    let r = eigen_residual(&canon, lambda / p.scale_b1, &p, coeffs.alpha)?;
    Ok(VerifyReport {
        lambda,
        parity: v.parity.name(),
        alpha: coeffs.alpha,
        n_blocks: v.len(),
        residual: p.scale_b1 * r,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n_blocks: usize,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WarningJson {
    pub index: usize,
    pub from_blocks: usize,
    pub to_blocks: usize,
    pub increase: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub parity: &'static str,
    pub alpha: f64,
    pub rows: Vec<ConvergenceRow>,
    pub warnings: Vec<WarningJson>,
}

pub fn convergence(input: &Input, parity: Parity, alpha: Option<f64>, ns: &[usize], k: usize) -> CliResult<ConvergenceReport> {
    let p = input.params()?;
    let alpha = alpha.unwrap_or_else(|| ncho_core::spectrum::default_alpha(&p));
    let t = convergence_study(&p, alpha, parity, ns, k)?;
    let s = p.scale_b1;
    Ok(ConvergenceReport {
        parity: parity.name(),
        alpha,
        rows: t
            .rows
            .into_iter()
            .map(|(n, v)| ConvergenceRow { n_blocks: n, eigenvalues: v.into_iter().map(|l| s * l).collect() })
            .collect(),
        warnings: t
            .warnings
            .into_iter()
            .map(|w| WarningJson { index: w.index, from_blocks: w.from_blocks, to_blocks: w.to_blocks, increase: s * w.increase })
            .collect(),
    })
}
