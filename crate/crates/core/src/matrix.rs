//! 2×2 Hermitian algebra and the canonical reduction of a coefficient pair.

use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result, Which, C2};

/// General complex 2×2 matrix, row major.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];

/// 2×2 Hermitian matrix `[[p, q], [q̄, s]]`, stored so that the symmetry
/// holds by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Herm2 {
    p: f64,
    s: f64,
    q: Complex64,
}

impl Herm2 {
    pub const fn new(p: f64, q: Complex64, s: f64) -> Self {
        Herm2 { p, s, q }
    }

    pub const fn diag(p: f64, s: f64) -> Self {
        Herm2 { p, s, q: ZERO }
    }

    pub const fn real(p: f64, q: f64, s: f64) -> Self {
        Herm2 { p, s, q: Complex64::new(q, 0.0) }
    }

    pub fn identity() -> Self {
        Herm2::diag(1.0, 1.0)
    }

    /// Accepts a general matrix when it is exactly Hermitian.
    pub fn from_matrix(m: &Mat2) -> Option<Self> {
        if m[0][0].im != 0.0 || m[1][1].im != 0.0 || m[1][0] != m[0][1].conj() {
            return None;
        }
        Some(Herm2::new(m[0][0].re, m[0][1], m[1][1].re))
    }

    pub fn to_matrix(&self) -> Mat2 {
        [
            [Complex64::new(self.p, 0.0), self.q],
            [self.q.conj(), Complex64::new(self.s, 0.0)],
        ]
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.to_matrix()[i][j]
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn trace(&self) -> f64 {
        self.p + self.s
    }

    pub fn det(&self) -> f64 {
        self.p * self.s - self.q.norm_sqr()
    }

    /// Strict test: `tr > 0` and `det > 0`.
    pub fn is_positive_definite(&self) -> bool {
        self.trace() > 0.0 && self.det() > 0.0
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.p * self.p + self.s * self.s + 2.0 * self.q.norm_sqr())
    }

    pub fn scale(&self, t: f64) -> Self {
        Herm2::new(t * self.p, self.q * t, t * self.s)
    }

    pub fn apply(&self, v: &C2) -> C2 {
        [
            v[0] * self.p + self.q * v[1],
            self.q.conj() * v[0] + v[1] * self.s,
        ]
    }

    /// `U M U*`, which is again Hermitian.
    pub fn conjugate_by(&self, u: &Mat2) -> Self {
        let m = mat_mul(&mat_mul(u, &self.to_matrix()), &adjoint(u));
        // Re-symmetrize: the product is Hermitian up to rounding.
        Herm2::new(m[0][0].re, (m[0][1] + m[1][0].conj()) * 0.5, m[1][1].re)
    }

    /// Closed-form eigendecomposition, eigenvalues ascending.
    ///
    /// Each eigenvector is normalized and its largest component is made real
    /// and positive (first component on ties).
    pub fn eig2(&self) -> [(f64, C2); 2] {
        let qn = self.q.norm();
        if qn == 0.0 {
            let (e0, e1) = ([ONE, ZERO], [ZERO, ONE]);
            return if self.p <= self.s {
                [(self.p, e0), (self.s, e1)]
            } else {
                [(self.s, e1), (self.p, e0)]
            };
        }
        let mean = 0.5 * (self.p + self.s);
        let half_gap = libm::hypot(0.5 * (self.p - self.s), qn);
        let lo = mean - half_gap;
        let hi = mean + half_gap;
        // Two candidate null vectors of M - lo; pick the better conditioned one.
        let c1 = [self.q, Complex64::new(lo - self.p, 0.0)];
        let c2 = [Complex64::new(lo - self.s, 0.0), self.q.conj()];
        let v = if norm2(&c1) >= norm2(&c2) { c1 } else { c2 };
        let v_lo = fix_phase(normalize(&v));
        let v_hi = fix_phase([-v_lo[1].conj(), v_lo[0].conj()]);
        [(lo, v_lo), (hi, v_hi)]
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let [(l0, _), (l1, _)] = self.eig2();
        [l0, l1]
    }
}

impl Add for Herm2 {
    type Output = Herm2;
    fn add(self, o: Herm2) -> Herm2 {
        Herm2::new(self.p + o.p, self.q + o.q, self.s + o.s)
    }
}

impl Sub for Herm2 {
    type Output = Herm2;
    fn sub(self, o: Herm2) -> Herm2 {
        Herm2::new(self.p - o.p, self.q - o.q, self.s - o.s)
    }
}

impl Mul<f64> for Herm2 {
    type Output = Herm2;
    fn mul(self, t: f64) -> Herm2 {
        self.scale(t)
    }
}

pub fn norm2(v: &C2) -> f64 {
    libm::sqrt(v[0].norm_sqr() + v[1].norm_sqr())
}

pub fn normalize(v: &C2) -> C2 {
    let n = norm2(v);
    [v[0] / n, v[1] / n]
}

/// `⟨x, y⟩ = Σ x̄ᵢ yᵢ`.
pub fn inner(x: &C2, y: &C2) -> Complex64 {
    x[0].conj() * y[0] + x[1].conj() * y[1]
}

fn fix_phase(v: C2) -> C2 {
    let k = if v[1].norm() > v[0].norm() { 1 } else { 0 };
    let n = v[k].norm();
    if n == 0.0 {
        return v;
    }
    let ph = v[k].conj() / n;
    [v[0] * ph, v[1] * ph]
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub fn adjoint(x: &Mat2) -> Mat2 {
    [
        [x[0][0].conj(), x[1][0].conj()],
        [x[0][1].conj(), x[1][1].conj()],
    ]
}

/// Frobenius norm of a general 2×2 matrix.
pub fn mat_norm(x: &Mat2) -> f64 {
    libm::sqrt(x.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>())
}

/// A validated pair of positive definite Hermitian coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianPair {
    a: Herm2,
    b: Herm2,
}

impl HermitianPair {
    pub fn new(a: Herm2, b: Herm2) -> Result<Self> {
        if !a.is_positive_definite() {
            return Err(Error::NotPositiveDefinite(Which::A));
        }
        if !b.is_positive_definite() {
            return Err(Error::NotPositiveDefinite(Which::B));
        }
        Ok(HermitianPair { a, b })
    }

    pub fn a(&self) -> &Herm2 {
        &self.a
    }

    pub fn b(&self) -> &Herm2 {
        &self.b
    }

    /// Frobenius norm of `AB − BA`.
    pub fn commutator_norm(&self) -> f64 {
        let ab = mat_mul(&self.a.to_matrix(), &self.b.to_matrix());
        let ba = mat_mul(&self.b.to_matrix(), &self.a.to_matrix());
        let mut d = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                d[i][j] = ab[i][j] - ba[i][j];
            }
        }
        mat_norm(&d)
    }

    pub fn canonicalize(&self) -> CanonicalParams {
        canonicalize(self)
    }
}

/// Checks hermiticity (exactly) and strict positive definiteness of both
/// matrices.
pub fn validate_pair(a: &Mat2, b: &Mat2) -> Result<HermitianPair> {
    let ha = Herm2::from_matrix(a).ok_or(Error::NotHermitian(Which::A))?;
    let hb = Herm2::from_matrix(b).ok_or(Error::NotHermitian(Which::B))?;
    HermitianPair::new(ha, hb)
}

/// Reduced coefficients `Ã = [[a, ξ], [ξ̄, c]]`, `B̃ = diag(1, b)` together
/// with the transform: `A = b₁ U* Ã U`, `B = b₁ U* B̃ U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalParams {
    pub b: f64,
    pub a: f64,
    pub c: f64,
    pub xi: Complex64,
    pub transform_u: Mat2,
    pub scale_b1: f64,
}

impl CanonicalParams {
    /// Builds canonical parameters directly (identity transform, `b₁ = 1`),
    /// rejecting anything outside `b ≥ 1, a, c > 0, |ξ|² < ac`.
    pub fn new(b: f64, a: f64, c: f64, xi: Complex64) -> Result<Self> {
        let finite = b.is_finite() && a.is_finite() && c.is_finite() && xi.is_finite();
        if !finite || b < 1.0 || a <= 0.0 || c <= 0.0 || xi.norm_sqr() >= a * c {
            return Err(Error::OutsideRegion);
        }
        Ok(CanonicalParams { b, a, c, xi, transform_u: IDENTITY, scale_b1: 1.0 })
    }

    /// Real `ξ = |ξ|`.
    pub fn from_tetrad(b: f64, a: f64, c: f64, xi_abs: f64) -> Result<Self> {
        CanonicalParams::new(b, a, c, Complex64::new(xi_abs, 0.0))
    }

    pub fn xi_abs(&self) -> f64 {
        self.xi.norm()
    }

    pub fn a_matrix(&self) -> Herm2 {
        Herm2::new(self.a, self.xi, self.c)
    }

    pub fn b_matrix(&self) -> Herm2 {
        Herm2::diag(1.0, self.b)
    }

    pub fn pair(&self) -> HermitianPair {
        HermitianPair { a: self.a_matrix(), b: self.b_matrix() }
    }

    /// `AB = BA` in canonical form iff `b = 1` or `ξ = 0`.
    pub fn is_commutative(&self) -> bool {
        self.b == 1.0 || self.xi == ZERO
    }

    /// The original pair `(b₁ U* Ã U, b₁ U* B̃ U)`.
    pub fn reconstruct(&self) -> (Herm2, Herm2) {
        let ut = adjoint(&self.transform_u);
        (
            self.a_matrix().conjugate_by(&ut).scale(self.scale_b1),
            self.b_matrix().conjugate_by(&ut).scale(self.scale_b1),
        )
    }

    /// `M_α = α⁻¹A + αB`.
    pub fn m_alpha(&self, alpha: f64) -> Result<Herm2> {
        check_alpha(alpha)?;
        Ok(self.a_matrix().scale(1.0 / alpha) + self.b_matrix().scale(alpha))
    }

    /// `N_α = α⁻¹A − αB`.
    pub fn n_alpha(&self, alpha: f64) -> Result<Herm2> {
        check_alpha(alpha)?;
        Ok(self.a_matrix().scale(1.0 / alpha) - self.b_matrix().scale(alpha))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveAlpha(alpha))
    }
}

/// Diagonalizes `B = U* diag(b₁, b₂) U` with `b₁ ≤ b₂` and rescales so that
/// `B̃ = diag(1, b₂/b₁)`, `Ã = b₁⁻¹ U A U*`. A scalar `B` gives `U = I`.
pub fn canonicalize(pair: &HermitianPair) -> CanonicalParams {
    let [(b1, w1), (b2, w2)] = pair.b.eig2();
    // Rows of U are w₁*, w₂*.
    let u: Mat2 = [
        [w1[0].conj(), w1[1].conj()],
        [w2[0].conj(), w2[1].conj()],
    ];
    let at = pair.a.conjugate_by(&u).scale(1.0 / b1);
    CanonicalParams {
        b: (b2 / b1).max(1.0),
        a: at.p,
        c: at.s,
        xi: at.q,
        transform_u: u,
        scale_b1: b1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(m: [[f64; 2]; 2]) -> Mat2 {
        [[c(m[0][0], 0.0), c(m[0][1], 0.0)], [c(m[1][0], 0.0), c(m[1][1], 0.0)]]
    }

    fn max_entry_diff(x: &Herm2, y: &Herm2) -> f64 {
        let (x, y) = (x.to_matrix(), y.to_matrix());
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((x[i][j] - y[i][j]).norm());
            }
        }
        d
    }

    #[test]
    fn identity_pair_is_valid() {
        assert!(validate_pair(&IDENTITY, &IDENTITY).is_ok());
    }

    #[test]
    fn indefinite_a_is_rejected() {
        let a = real([[1.0, 2.0], [2.0, 1.0]]);
        assert_eq!(validate_pair(&a, &IDENTITY), Err(Error::NotPositiveDefinite(Which::A)));
    }

    #[test]
    fn complex_pair_is_valid() {
        let a = [[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(2.0, 0.0)]];
        let b = real([[1.0, 0.0], [0.0, 4.0]]);
        let pair = validate_pair(&a, &b).unwrap();
        let [l0, l1] = pair.a().eigenvalues();
        assert!(l0 > 0.0 && l1 > 0.0);
    }

    #[test]
    fn non_hermitian_and_boundary_inputs() {
        let a = [[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, 1.0), c(2.0, 0.0)]];
        assert_eq!(validate_pair(&a, &IDENTITY), Err(Error::NotHermitian(Which::A)));
        // det = 0 lies on the boundary and is rejected.
        let b = real([[1.0, 1.0], [1.0, 1.0]]);
        assert_eq!(validate_pair(&IDENTITY, &b), Err(Error::NotPositiveDefinite(Which::B)));
    }

    #[test]
    fn canonical_identity() {
        let p = canonicalize(&validate_pair(&IDENTITY, &IDENTITY).unwrap());
        assert_eq!((p.b, p.a, p.c, p.xi, p.scale_b1), (1.0, 1.0, 1.0, c(0.0, 0.0), 1.0));
        assert_eq!(p.transform_u, IDENTITY);
    }

    #[test]
    fn canonical_diagonal_b() {
        let a = real([[1.0, 1.0], [1.0, 2.0]]);
        let b = real([[2.0, 0.0], [0.0, 8.0]]);
        let pair = validate_pair(&a, &b).unwrap();
        let p = canonicalize(&pair);
        assert_eq!(p.transform_u, IDENTITY);
        assert!((p.b - 4.0).abs() < 1e-15);
        assert!((p.a - 0.5).abs() < 1e-15);
        assert!((p.c - 1.0).abs() < 1e-15);
        assert!((p.xi - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(p.scale_b1, 2.0);
        let (ra, rb) = p.reconstruct();
        assert!(max_entry_diff(&ra, pair.a()) < 1e-12);
        assert!(max_entry_diff(&rb, pair.b()) < 1e-12);
    }

    #[test]
    fn scalar_b_keeps_identity_transform() {
        let a = real([[3.0, 1.0], [1.0, 2.0]]);
        let b = real([[2.0, 0.0], [0.0, 2.0]]);
        let p = canonicalize(&validate_pair(&a, &b).unwrap());
        assert_eq!(p.transform_u, IDENTITY);
        assert_eq!(p.b, 1.0);
    }

    #[test]
    fn m_and_n_alpha() {
        let p = CanonicalParams::from_tetrad(1.0, 1.0, 1.0, 0.0).unwrap();
        let m = p.m_alpha(1.0).unwrap();
        let n = p.n_alpha(1.0).unwrap();
        assert_eq!(m, Herm2::diag(2.0, 2.0));
        assert_eq!(n, Herm2::diag(0.0, 0.0));
        let p = CanonicalParams::from_tetrad(4.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(p.n_alpha(1.0).unwrap(), Herm2::real(0.0, 1.0, -2.0));
        assert_eq!(p.m_alpha(0.0), Err(Error::NonPositiveAlpha(0.0)));
        assert!(p.n_alpha(-1.0).is_err());
    }

    #[test]
    fn eig2_examples() {
        let [(l0, v0), (l1, v1)] = Herm2::diag(1.0, 4.0).eig2();
        assert_eq!((l0, l1), (1.0, 4.0));
        assert_eq!(v0, [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(v1, [c(0.0, 0.0), c(1.0, 0.0)]);

        let [(l0, v0), (l1, v1)] = Herm2::real(0.0, 1.0, 0.0).eig2();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((l0 + 1.0).abs() < 1e-15 && (l1 - 1.0).abs() < 1e-15);
        assert!((v0[0] - c(h, 0.0)).norm() < 1e-15 && (v0[1] - c(-h, 0.0)).norm() < 1e-15);
        assert!((v1[0] - c(h, 0.0)).norm() < 1e-15 && (v1[1] - c(h, 0.0)).norm() < 1e-15);
    }

    fn herm() -> impl Strategy<Value = Herm2> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
            .prop_map(|(p, qr, qi, s)| Herm2::new(p, c(qr, qi), s))
    }

    fn pd() -> impl Strategy<Value = Herm2> {
        (0.1..5.0f64, 0.1..5.0f64, 0.0..0.95f64, 0.0..core::f64::consts::TAU).prop_map(
            |(p, s, frac, th)| {
                let r = frac * libm::sqrt(p * s);
                Herm2::new(p, c(r * libm::cos(th), r * libm::sin(th)), s)
            },
        )
    }

    proptest! {
        #[test]
        fn eig2_residual(m in herm()) {
            let norm = m.norm();
            let eig = m.eig2();
            prop_assert!(eig[0].0 <= eig[1].0);
            for (l, v) in eig {
                let mv = m.apply(&v);
                let r = norm2(&[mv[0] - v[0] * l, mv[1] - v[1] * l]);
                prop_assert!(r <= 1e-13 * norm.max(1e-300), "residual {r} norm {norm}");
                prop_assert!((norm2(&v) - 1.0).abs() < 1e-14);
            }
            prop_assert!(inner(&eig[0].1, &eig[1].1).norm() < 1e-14);
        }

        #[test]
        fn canonicalize_reconstructs(a in pd(), b in pd()) {
            let pair = HermitianPair::new(a, b).unwrap();
            let p = canonicalize(&pair);
            prop_assert!(p.b >= 1.0 && p.a > 0.0 && p.c > 0.0);
            prop_assert!(p.xi.norm_sqr() < p.a * p.c);
            let (ra, rb) = p.reconstruct();
            prop_assert!(max_entry_diff(&ra, &a) < 1e-12);
            prop_assert!(max_entry_diff(&rb, &b) < 1e-12);
            let u = p.transform_u;
            let uu = mat_mul(&u, &adjoint(&u));
            prop_assert!((uu[0][0] - ONE).norm() < 1e-14 && uu[0][1].norm() < 1e-14);
        }

        #[test]
        fn m_alpha_is_positive_definite(a in pd(), b in pd(), alpha in 0.01..100.0f64) {
            let p = canonicalize(&HermitianPair::new(a, b).unwrap());
            prop_assert!(p.m_alpha(alpha).unwrap().is_positive_definite());
        }

        #[test]
        fn commutation_iff_b_one_or_xi_zero(
            b in prop::sample::select(alloc::vec![1.0, 1.5, 3.0]),
            a in 0.5..3.0f64,
            cc in 0.5..3.0f64,
            frac in prop::sample::select(alloc::vec![0.0, 0.3, 0.8]),
        ) {
            let xi = frac * libm::sqrt(a * cc);
            let p = CanonicalParams::from_tetrad(b, a, cc, xi).unwrap();
            let comm = p.pair().commutator_norm();
            prop_assert_eq!(p.is_commutative(), comm == 0.0);
            if !p.is_commutative() {
                prop_assert!(comm > 1e-6);
            }
        }
    }
}
