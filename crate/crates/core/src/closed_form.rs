//! Eigenfunctions supported on the first four Hermite functions.
//!
//! In canonical coordinates (`B = diag(1, b)`, `A = [[a, ξ], [ξ̄, c]]`) an
//! eigenfunction of the form
//!
//! ```text
//! even:  Φ⁺ = (u₀ + u₂x²) e^{−αx²/2}
//! odd:   Φ⁻ = (u₁x + u₃x³) e^{−αx²/2}
//! ```
//!
//! satisfies, after matching powers of `x` (with `m = 1, k = 5, q = 2` for
//! even and `m = 3, k = 7, q = 6` for odd),
//!
//! ```text
//! (A − α²B) u_top = 0
//! (A − α²B) u_low + (kαB − λ) u_top = 0
//! (mαB − λ) u_low − qB u_top = 0
//! ```
//!
//! The first line forces `α = β` with `β²` a root of `det(A − β²B) = 0`,
//! and `u_top ∝ u₂ = (c − β²b, −ξ̄)`. Writing `u_low = γu₂ + γ̃ũ₂` with
//! `ũ₂ = (a − β², ξ̄)` (so that `(A − β²B)ũ₂ = δũ₂`, `δ = a + c − (1+b)β²`),
//! the second line fixes `λ = kβ(ab + c − 2β²b)/δ` and `γ̃δ = kβb − λ`; the
//! third line is then solvable exactly when
//!
//! ```text
//! 2mλδ = kβ(mβ − λ)(mβb − λ).
//! ```

use num_complex::Complex64;

use crate::matrix::{inner, norm2};
use crate::operator::{apply_operator, CoeffVector, Parity};
use crate::{CanonicalParams, Error, Result, C2};

/// The `±` choice of the square root in the β formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BetaSign {
    Plus,
    Minus,
}

impl BetaSign {
    pub fn name(self) -> &'static str {
        match self {
            BetaSign::Plus => "plus",
            BetaSign::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaRoot {
    pub sign: BetaSign,
    pub beta: f64,
    /// Spans `ker(A − β²B)`.
    pub kernel_u2: C2,
    /// Eigenvector of `A − β²B` for the eigenvalue `defect`.
    pub cokernel_u2t: C2,
    /// `a + c − (1+b)β²`.
    pub defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaRoots {
    pub plus: BetaRoot,
    pub minus: BetaRoot,
    /// Set when the discriminant `(c−ab)² + 4|ξ|²b` is below `1e-14`.
    pub degenerate: bool,
}

impl BetaRoots {
    pub fn get(&self, sign: BetaSign) -> &BetaRoot {
        match sign {
            BetaSign::Plus => &self.plus,
            BetaSign::Minus => &self.minus,
        }
    }
}

fn root(p: &CanonicalParams, sign: BetaSign, beta2: f64) -> BetaRoot {
    BetaRoot {
        sign,
        beta: libm::sqrt(beta2),
        kernel_u2: [Complex64::new(p.c - beta2 * p.b, 0.0), -p.xi.conj()],
        cokernel_u2t: [Complex64::new(p.a - beta2, 0.0), p.xi.conj()],
        defect: p.a + p.c - (1.0 + p.b) * beta2,
    }
}

/// Both `β > 0` with `det(A − β²B) = 0`.
pub fn beta_roots(p: &CanonicalParams) -> BetaRoots {
    let (a, b, c, x2) = (p.a, p.b, p.c, p.xi.norm_sqr());
    let disc2 = (c - a * b) * (c - a * b) + 4.0 * x2 * b;
    let plus2 = (a * b + c + libm::sqrt(disc2)) / (2.0 * b);
    // β₊²β₋² = (ac − |ξ|²)/b avoids cancellation in the small root.
    let minus2 = (a * c - x2) / (b * plus2);
    BetaRoots {
        plus: root(p, BetaSign::Plus, plus2),
        minus: root(p, BetaSign::Minus, minus2),
        degenerate: disc2 < 1e-14,
    }
}

/// Orders of the two parities: `(m, k, q)` as in the module docs.
fn orders(parity: Parity) -> (f64, f64, f64) {
    match parity {
        Parity::Even => (1.0, 5.0, 2.0),
        Parity::Odd => (3.0, 7.0, 6.0),
    }
}

fn check_defect(p: &CanonicalParams, r: &BetaRoot) -> Result<()> {
    if r.defect.abs() <= 1e-12 * (p.a + p.c) {
        Err(Error::SingularDenominator { defect: r.defect })
    } else {
        Ok(())
    }
}

/// `λ_even = 5β(ab + c − 2β²b)/(a + c − (b+1)β²)`, `λ_odd` with 7 in place of 5.
pub fn lambda(p: &CanonicalParams, r: &BetaRoot, parity: Parity) -> Result<f64> {
    check_defect(p, r)?;
    let (_, k, _) = orders(parity);
    let b2 = r.beta * r.beta;
    Ok(k * r.beta * (p.a * p.b + p.c - 2.0 * b2 * p.b) / r.defect)
}

pub fn lambda_even(p: &CanonicalParams, r: &BetaRoot) -> Result<f64> {
    lambda(p, r, Parity::Even)
}

pub fn lambda_odd(p: &CanonicalParams, r: &BetaRoot) -> Result<f64> {
    lambda(p, r, Parity::Odd)
}

/// Membership residual `2mλδ − kβ(mβ − λ)(mβb − λ)` together with its scale
/// `|2mλδ| + |kβ(mβ − λ)(mβb − λ)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
    pub lambda: f64,
    pub root: BetaRoot,
}

impl Residual {
    /// `value / scale`, in `[−1, 1]`.
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.value / self.scale
        }
    }
}

pub fn residual(p: &CanonicalParams, sign: BetaSign, parity: Parity) -> Result<Residual> {
    let roots = beta_roots(p);
    let r = *roots.get(sign);
    let l = lambda(p, &r, parity)?;
    let (m, k, _) = orders(parity);
    let beta = r.beta;
    let lhs = 2.0 * m * l * r.defect;
    let rhs = k * beta * (m * beta - l) * (m * beta * p.b - l);
    Ok(Residual { value: lhs - rhs, scale: lhs.abs() + rhs.abs(), lambda: l, root: r })
}

pub fn residual_even(p: &CanonicalParams, sign: BetaSign) -> Result<Residual> {
    residual(p, sign, Parity::Even)
}

pub fn residual_odd(p: &CanonicalParams, sign: BetaSign) -> Result<Residual> {
    residual(p, sign, Parity::Odd)
}

/// The membership residual multiplied by `δ²/(kβ)`:
/// `2mPδ² − β²(mδ − kP)(mbδ − kP)` with `P = ab + c − 2β²b`.
///
/// Same sign and zero set as [`residual`] wherever `δ ≠ 0`, but free of the
/// pole at `δ = 0`, which makes it the right function to bracket.
pub fn cleared_residual(p: &CanonicalParams, sign: BetaSign, parity: Parity) -> f64 {
    let roots = beta_roots(p);
    let r = roots.get(sign);
    let (m, k, _) = orders(parity);
    let b2 = r.beta * r.beta;
    let d = r.defect;
    let pp = p.a * p.b + p.c - 2.0 * b2 * p.b;
    2.0 * m * pp * d * d - b2 * (m * d - k * pp) * (m * p.b * d - k * pp)
}

/// A four-term eigenfunction in Hermite coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSolution {
    pub parity: Parity,
    pub beta_root: BetaRoot,
    pub lambda: f64,
    /// Coordinates of the low monomial coefficient in the `(u₂, ũ₂)` frame.
    pub gamma: Complex64,
    pub gamma_tilde: Complex64,
    /// `(v₀, v₂)` for even, `(v₁, v₃)` for odd, in the basis `φ_n^β`. The top
    /// block equals `kernel_u2`.
    pub coeff_blocks: [C2; 2],
    pub residual_membership: f64,
    pub membership_scale: f64,
    /// `‖H±Φ − λΦ‖ / ‖Φ‖` in coefficient space.
    pub residual_eigen: f64,
}

impl ClosedFormSolution {
    pub fn coeff_vector(&self) -> CoeffVector {
        CoeffVector::new(self.parity, alloc::vec![self.coeff_blocks[0], self.coeff_blocks[1]])
    }

    pub fn alpha(&self) -> f64 {
        self.beta_root.beta
    }
}

/// Default relative membership tolerance for [`construct_phi`].
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-8;

const CONSISTENCY_TOL: f64 = 1e-8;

fn scale(x: &C2, t: Complex64) -> C2 {
    [x[0] * t, x[1] * t]
}

/// `(tB − λ)v` with `B = diag(1, b)`.
fn shifted_b(p: &CanonicalParams, t: f64, l: f64, v: &C2) -> C2 {
    [v[0] * (t - l), v[1] * (t * p.b - l)]
}

/// Builds the four-term eigenfunction for a tetrad on the zero set of the
/// `(sign, parity)` membership condition.
pub fn construct_phi(p: &CanonicalParams, sign: BetaSign, parity: Parity, tol: f64) -> Result<ClosedFormSolution> {
    let res = residual(p, sign, parity)?;
    if res.value.abs() > tol * res.scale {
        return Err(Error::OffManifold { residual: res.value, scale: res.scale, degenerate_cokernel: false });
    }
    let r = res.root;
    let beta = r.beta;
    let l = res.lambda;
    let (m, k, q) = orders(parity);
    let u2 = r.kernel_u2;
    let ut = r.cokernel_u2t;
    if p.xi.norm() == 0.0 || r.cokernel_u2t[0].norm() <= 1e-14 * (p.a + p.c) {
        return Err(Error::OffManifold { residual: res.value, scale: res.scale, degenerate_cokernel: true });
    }

    // Second equation projected on ũ₂: γ̃δ|ũ₂|² = −⟨ũ₂, (kβB − λ)u₂⟩.
    let rhs2 = shifted_b(p, k * beta, l, &u2);
    let gt_second = -inner(&ut, &rhs2) / (r.defect * inner(&ut, &ut).re);

    // Third equation: [(mβB − λ)u₂ | (mβB − λ)ũ₂] (γ, γ̃)ᵀ = qBu₂.
    let c1 = shifted_b(p, m * beta, l, &u2);
    let c2 = shifted_b(p, m * beta, l, &ut);
    let rhs = [u2[0] * q, u2[1] * (q * p.b)];
    let det = c1[0] * c2[1] - c2[0] * c1[1];
    let col_scale = norm2(&c1) * norm2(&c2);
    if det.norm() <= 1e-14 * col_scale {
        return Err(Error::InconsistentSystem { mismatch: f64::INFINITY });
    }
    let gamma = (rhs[0] * c2[1] - c2[0] * rhs[1]) / det;
    let gamma_tilde = (c1[0] * rhs[1] - rhs[0] * c1[1]) / det;
    let mismatch = (gamma_tilde - gt_second).norm() / (gamma_tilde.norm() + gt_second.norm()).max(f64::MIN_POSITIVE);
    if mismatch > CONSISTENCY_TOL.max(tol) {
        return Err(Error::InconsistentSystem { mismatch });
    }

    // Monomial coefficients to Hermite coefficients at scale β, normalized
    // so that the top block is u₂:
    //   even: v₀ = √2(βu₀ + u₂/2),          v₂ = u₂
    //   odd:  v₁ = √(2/3)(βu₁ + (3/2)u₃),   v₃ = u₃
    let u_low = [u2[0] * gamma + ut[0] * gamma_tilde, u2[1] * gamma + ut[1] * gamma_tilde];
    let (pref, shift) = match parity {
        Parity::Even => (libm::sqrt(2.0), 0.5),
        Parity::Odd => (libm::sqrt(2.0 / 3.0), 1.5),
    };
    let low = scale(
        &[u_low[0] * beta + u2[0] * shift, u_low[1] * beta + u2[1] * shift],
        Complex64::new(pref, 0.0),
    );
    let mut sol = ClosedFormSolution {
        parity,
        beta_root: r,
        lambda: l,
        gamma,
        gamma_tilde,
        coeff_blocks: [low, u2],
        residual_membership: res.value,
        membership_scale: res.scale,
        residual_eigen: f64::NAN,
    };
    sol.residual_eigen = verify_eigenpair(&sol, p)?;
    Ok(sol)
}

/// `‖H±Φ − λΦ‖/‖Φ‖` via the matrix-free action (exact for finite support).
pub fn verify_eigenpair(sol: &ClosedFormSolution, p: &CanonicalParams) -> Result<f64> {
    let v = sol.coeff_vector();
    eigen_residual(&v, sol.lambda, p, sol.alpha())
}

/// `‖H±v − λv‖/‖v‖` for an arbitrary finitely supported coefficient vector.
pub fn eigen_residual(v: &CoeffVector, lambda: f64, p: &CanonicalParams, alpha: f64) -> Result<f64> {
    let hv = apply_operator(v, p, alpha, v.parity)?;
    Ok(hv.sub_scaled(lambda, v).norm() / v.norm())
}

/// Distance from `λ` to the spectrum of the first diagonal block `S₀±/2`
/// (`M_β/2` even, `3M_β/2` odd). Zero on the manifold: the first block row
/// reads `(S₀/2)v_low = λv_low` because `N_β` annihilates the top block.
pub fn first_block_gap(sol: &ClosedFormSolution, p: &CanonicalParams) -> Result<f64> {
    let (m, _, _) = orders(sol.parity);
    let block = p.m_alpha(sol.alpha())?.scale(m / 2.0);
    let [l0, l1] = block.eigenvalues();
    Ok((sol.lambda - l0).abs().min((sol.lambda - l1).abs()))
}

/// `‖N_β u‖` and the kernel check used by tests and reports.
pub fn kernel_defect(p: &CanonicalParams, r: &BetaRoot) -> Result<f64> {
    let n = p.n_alpha(r.beta)?;
    Ok(norm2(&n.apply(&r.kernel_u2)))
}
