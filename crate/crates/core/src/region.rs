//! Geometry of the four zero sets in the parameter region
//! `R = {(b, a, c, |ξ|) : a, c > 0, b ≥ 1, |ξ|² < ac}`.
//!
//! Residuals here are always relative (`residual / scale`, in `[−1, 1]`), so a
//! membership flag is simply `|r| ≤ tol`. The conditions are homogeneous of
//! degree 3/2 in `(a, c, |ξ|)`, so relative residuals are constant along rays
//! and the zero sets are cones for fixed `b`.

use alloc::vec::Vec;

use crate::closed_form::{cleared_residual, residual, BetaSign};
use crate::operator::Parity;
use crate::roots::brent;
use crate::{CanonicalParams, Error, Result};

/// Real coordinates of a canonical pair with real `ξ = |ξ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad {
    pub b: f64,
    pub a: f64,
    pub c: f64,
    pub xi_abs: f64,
}

impl Tetrad {
    pub fn new(b: f64, a: f64, c: f64, xi_abs: f64) -> Self {
        Tetrad { b, a, c, xi_abs }
    }

    /// Strictly inside `R` with a `1e-12` margin on every inequality.
    pub fn in_region(&self) -> bool {
        let m = 1e-12;
        let finite = self.b.is_finite() && self.a.is_finite() && self.c.is_finite() && self.xi_abs.is_finite();
        finite
            && self.b >= 1.0
            && self.a > m
            && self.c > m
            && self.xi_abs >= 0.0
            && self.a * self.c - self.xi_abs * self.xi_abs > m * self.a * self.c
    }

    pub fn params(&self) -> Result<CanonicalParams> {
        if !self.in_region() {
            return Err(Error::OutsideRegion);
        }
        CanonicalParams::from_tetrad(self.b, self.a, self.c, self.xi_abs)
    }

    /// `(b, ra, rc, r|ξ|)`.
    pub fn scaled(&self, r: f64) -> Tetrad {
        Tetrad::new(self.b, r * self.a, r * self.c, r * self.xi_abs)
    }
}

/// The four zero sets, in the fixed order used by every array below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manifold {
    EvenPlus,
    EvenMinus,
    OddPlus,
    OddMinus,
}

impl Manifold {
    pub const ALL: [Manifold; 4] = [Manifold::EvenPlus, Manifold::EvenMinus, Manifold::OddPlus, Manifold::OddMinus];

    pub fn parity(self) -> Parity {
        match self {
            Manifold::EvenPlus | Manifold::EvenMinus => Parity::Even,
            _ => Parity::Odd,
        }
    }

    pub fn sign(self) -> BetaSign {
        match self {
            Manifold::EvenPlus | Manifold::OddPlus => BetaSign::Plus,
            _ => BetaSign::Minus,
        }
    }

    pub fn of(parity: Parity, sign: BetaSign) -> Manifold {
        match (parity, sign) {
            (Parity::Even, BetaSign::Plus) => Manifold::EvenPlus,
            (Parity::Even, BetaSign::Minus) => Manifold::EvenMinus,
            (Parity::Odd, BetaSign::Plus) => Manifold::OddPlus,
            (Parity::Odd, BetaSign::Minus) => Manifold::OddMinus,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Manifold::EvenPlus => "even_plus",
            Manifold::EvenMinus => "even_minus",
            Manifold::OddPlus => "odd_plus",
            Manifold::OddMinus => "odd_minus",
        }
    }
}

/// Visualization band for grid flags.
pub const VISUAL_TOL: f64 = 1e-3;
/// Tolerance for certified (root-polished) membership.
pub const CERTIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSample {
    pub tetrad: Tetrad,
    /// False for grid cells outside `R`; such cells carry NaN residuals and
    /// no flags.
    pub in_region: bool,
    /// Relative residuals in [`Manifold::ALL`] order; NaN where singular.
    pub residuals: [f64; 4],
    pub flags: [bool; 4],
    /// The defect `a + c − (1+b)β²` vanished for this β root.
    pub singular: [bool; 4],
}

impl RegionSample {
    fn outside(tetrad: Tetrad) -> Self {
        RegionSample { tetrad, in_region: false, residuals: [f64::NAN; 4], flags: [false; 4], singular: [false; 4] }
    }

    pub fn flag(&self, m: Manifold) -> bool {
        self.flags[m.index()]
    }

    pub fn residual(&self, m: Manifold) -> f64 {
        self.residuals[m.index()]
    }
}

fn evaluate(tetrad: Tetrad, p: &CanonicalParams, tol: f64) -> RegionSample {
    let mut s = RegionSample { tetrad, in_region: true, residuals: [f64::NAN; 4], flags: [false; 4], singular: [false; 4] };
    for m in Manifold::ALL {
        match residual(p, m.sign(), m.parity()) {
            Ok(r) => {
                let rel = r.relative();
                s.residuals[m.index()] = rel;
                s.flags[m.index()] = rel.abs() <= tol;
            }
            Err(_) => s.singular[m.index()] = true,
        }
    }
    s
}

/// Residuals and flags of all four conditions at one tetrad.
pub fn classify_point(tetrad: Tetrad, tol: f64) -> Result<RegionSample> {
    let p = tetrad.params()?;
    Ok(evaluate(tetrad, &p, tol))
}

pub const NINE_PLUS_FOUR_ROOT_FIVE: f64 = 9.0 + 4.0 * 2.236_067_977_499_79;

/// A point of `Ω±_even` on the ray `c = ab̃`:
/// `ã = ∓|ξ̃|(5b̃² − 90b̃ + 5) / (√b̃ (9b̃² − 82b̃ + 9))`, valid for
/// `9 < b̃ < 9 + 4√5` (plus) and `1 < b̃ < 9` or `b̃ > 9 + 4√5` (minus).
pub fn parametric_family_even(b: f64, xi_abs: f64, sign: BetaSign) -> Result<Tetrad> {
    let upper = 9.0 + 4.0 * libm::sqrt(5.0);
    let ok = match sign {
        BetaSign::Plus => b > 9.0 && b < upper,
        BetaSign::Minus => (b > 1.0 && b < 9.0) || b > upper,
    };
    if !ok || !(xi_abs > 0.0) {
        return Err(Error::OutOfInterval);
    }
    let num = xi_abs * (5.0 * b * b - 90.0 * b + 5.0);
    let den = libm::sqrt(b) * (9.0 * b * b - 82.0 * b + 9.0);
    let a = match sign {
        BetaSign::Plus => -num / den,
        BetaSign::Minus => num / den,
    };
    let t = Tetrad::new(b, a, a * b, xi_abs);
    if !(a > 0.0) || !t.in_region() {
        return Err(Error::InfeasibleFamilyPoint);
    }
    let r = residual(&t.params()?, sign, Parity::Even)?;
    if r.value.abs() >= 1e-9 * r.scale {
        return Err(Error::InfeasibleFamilyPoint);
    }
    Ok(t)
}

/// A certified root on the ray `c = ρa` at fixed `b` and `|ξ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySolution {
    pub tetrad: Tetrad,
    pub relative_residual: f64,
}

const RAY_SUBDIVISIONS: usize = 256;

/// Finds the smallest `a` in the bracket where the `(sign, parity)` condition
/// holds on the ray `c = c_over_a · a`.
///
/// The part of the bracket outside `R` (where `ρa² ≤ |ξ|²`) is dropped. The
/// rest is scanned on a log-spaced mesh for the first sign change of the
/// pole-free cleared residual, which Brent then polishes (200 iterations).
pub fn solve_on_ray(
    b: f64,
    c_over_a: f64,
    xi_abs: f64,
    sign: BetaSign,
    parity: Parity,
    bracket: (f64, f64),
) -> Result<RaySolution> {
    let mut found = ray_roots(b, c_over_a, xi_abs, sign, parity, bracket, true)?;
    found.pop().ok_or(Error::NotFound)
}

/// Every root on the ray that the mesh resolves, ascending in `a`. Mesh
/// intervals that hit a singular point are skipped.
pub fn solve_all_on_ray(
    b: f64,
    c_over_a: f64,
    xi_abs: f64,
    sign: BetaSign,
    parity: Parity,
    bracket: (f64, f64),
) -> Result<Vec<RaySolution>> {
    ray_roots(b, c_over_a, xi_abs, sign, parity, bracket, false)
}

fn ray_roots(
    b: f64,
    c_over_a: f64,
    xi_abs: f64,
    sign: BetaSign,
    parity: Parity,
    bracket: (f64, f64),
    first_only: bool,
) -> Result<Vec<RaySolution>> {
    let (lo, hi) = bracket;
    if !(b >= 1.0 && c_over_a > 0.0 && xi_abs >= 0.0 && lo < hi && hi > 0.0) {
        return Err(Error::InvalidArgument("invalid ray or bracket"));
    }
    let boundary = xi_abs / libm::sqrt(c_over_a);
    let lo = lo.max(boundary * (1.0 + 1e-9)).max(f64::MIN_POSITIVE);
    if lo >= hi {
        return Err(Error::OutsideRegion);
    }
    let f = |a: f64| -> f64 {
        match CanonicalParams::from_tetrad(b, a, c_over_a * a, xi_abs) {
            Ok(p) => cleared_residual(&p, sign, parity),
            Err(_) => f64::NAN,
        }
    };
    let certify = |a: f64| -> Result<Option<RaySolution>> {
        let t = Tetrad::new(b, a, c_over_a * a, xi_abs);
        let r = residual(&t.params()?, sign, parity).map_err(|_| Error::SingularEncountered)?;
        let rel = r.relative();
        // A sign change through a singular point does not certify.
        Ok((rel.abs() < CERTIFY_TOL).then_some(RaySolution { tetrad: t, relative_residual: rel }))
    };
    let mut out = Vec::new();
    let ratio = libm::pow(hi / lo, 1.0 / RAY_SUBDIVISIONS as f64);
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=RAY_SUBDIVISIONS {
        let x1 = if i == RAY_SUBDIVISIONS { hi } else { lo * libm::pow(ratio, i as f64) };
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() && f1 != 0.0 && (f0 == 0.0 || f0.signum() != f1.signum()) {
            let found = brent(f, x0, x1, 1e-15 * x1, 200).and_then(certify);
            match found {
                Ok(Some(s)) => {
                    out.push(s);
                    if first_only {
                        return Ok(out);
                    }
                }
                Ok(None) => {}
                Err(e) if first_only => return Err(e),
                Err(_) => {}
            }
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}

/// Moves a near-manifold tetrad onto the manifold along its own ray,
/// returning the root closest to it within a factor `window` in `a`.
pub fn polish_on_ray(t: Tetrad, m: Manifold, window: f64) -> Result<RaySolution> {
    if !t.in_region() || !(window > 1.0) {
        return Err(Error::OutsideRegion);
    }
    let roots = solve_all_on_ray(t.b, t.c / t.a, t.xi_abs, m.sign(), m.parity(), (t.a / window, t.a * window))?;
    roots
        .into_iter()
        .min_by(|x, y| (x.tetrad.a - t.a).abs().total_cmp(&(y.tetrad.a - t.a).abs()))
        .ok_or(Error::NotFound)
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        Axis { lo, hi, n }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n <= 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }

    /// `10^value(i)`, for axes that hold decimal logarithms.
    pub fn pow10(&self, i: usize) -> f64 {
        libm::pow(10.0, self.value(i))
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }
}

pub const MAX_AXIS_RESOLUTION: usize = 512;
pub const MAX_GRID_SAMPLES: usize = 100_000_000;

/// Dense classification on a `(b, a, c)` box at fixed `|ξ|`.
///
/// Samples are row major with `c` fastest: index `(ib·n_a + ia)·n_c + ic`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    pub b_axis: Axis,
    pub a_axis: Axis,
    pub c_axis: Axis,
    pub xi_abs: f64,
    pub tol: f64,
    pub samples: Vec<RegionSample>,
}

impl ScanGrid {
    pub fn index(&self, ib: usize, ia: usize, ic: usize) -> usize {
        (ib * self.a_axis.n + ia) * self.c_axis.n + ic
    }

    pub fn count(&self, m: Manifold) -> usize {
        self.samples.iter().filter(|s| s.flag(m)).count()
    }

    /// Samples flagged for both manifolds.
    pub fn co_flagged(&self, x: Manifold, y: Manifold) -> usize {
        self.samples.iter().filter(|s| s.flag(x) && s.flag(y)).count()
    }
}

pub fn check_grid(b: &Axis, a: &Axis, c: &Axis) -> Result<usize> {
    for ax in [b, a, c] {
        if ax.n == 0 || !(ax.lo <= ax.hi) {
            return Err(Error::InvalidArgument("axis must have lo <= hi and at least one point"));
        }
    }
    let total = b.n.saturating_mul(a.n).saturating_mul(c.n);
    if b.n.max(a.n).max(c.n) > MAX_AXIS_RESOLUTION || total > MAX_GRID_SAMPLES {
        return Err(Error::BudgetExceeded { samples: total });
    }
    Ok(total)
}

/// Classifies one cell; used by both the sequential and parallel scanners.
pub fn grid_sample(b: f64, a: f64, c: f64, xi_abs: f64, tol: f64) -> RegionSample {
    let t = Tetrad::new(b, a, c, xi_abs);
    match t.params() {
        Ok(p) => evaluate(t, &p, tol),
        Err(_) => RegionSample::outside(t),
    }
}

pub fn scan_grid(b: Axis, a: Axis, c: Axis, xi_abs: f64, tol: f64) -> Result<ScanGrid> {
    let total = check_grid(&b, &a, &c)?;
    let mut samples = Vec::with_capacity(total);
    for ib in 0..b.n {
        for ia in 0..a.n {
            for ic in 0..c.n {
                samples.push(grid_sample(b.value(ib), a.value(ia), c.value(ic), xi_abs, tol));
            }
        }
    }
    Ok(ScanGrid { b_axis: b, a_axis: a, c_axis: c, xi_abs, tol, samples })
}

/// Surface sampling of one zero set at fixed `|ξ|`: for each
/// `(b, log₁₀ ρ)` node every root `a` on the ray `c = ρa`. Because the set is
/// a cone this is the full picture of its projection onto the `|ξ|` slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePanel {
    pub manifold: Manifold,
    pub b_axis: Axis,
    pub log_rho_axis: Axis,
    pub xi_abs: f64,
    pub a_bracket: (f64, f64),
    /// Layout `ib·n_ρ + iρ`.
    pub cells: Vec<Vec<RaySolution>>,
}

impl SurfacePanel {
    pub fn index(&self, ib: usize, ir: usize) -> usize {
        ib * self.log_rho_axis.n + ir
    }

    pub fn point_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.iter().filter(|c| !c.is_empty()).count()
    }
}

pub fn surface_cell(m: Manifold, b: f64, rho: f64, xi_abs: f64, a_bracket: (f64, f64)) -> Vec<RaySolution> {
    solve_all_on_ray(b, rho, xi_abs, m.sign(), m.parity(), a_bracket).unwrap_or_default()
}

pub fn check_panel(b: &Axis, log_rho: &Axis) -> Result<()> {
    check_grid(b, log_rho, &Axis::new(0.0, 0.0, 1)).map(|_| ())
}

pub fn surface_panel(m: Manifold, b: Axis, log_rho: Axis, xi_abs: f64, a_bracket: (f64, f64)) -> Result<SurfacePanel> {
    check_panel(&b, &log_rho)?;
    let mut cells = Vec::with_capacity(b.n * log_rho.n);
    for ib in 0..b.n {
        for ir in 0..log_rho.n {
            cells.push(surface_cell(m, b.value(ib), log_rho.pow10(ir), xi_abs, a_bracket));
        }
    }
    Ok(SurfacePanel { manifold: m, b_axis: b, log_rho_axis: log_rho, xi_abs, a_bracket, cells })
}

/// A point certified to lie on two zero sets at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub tetrad: Tetrad,
    pub manifolds: [Manifold; 2],
    pub relative_residuals: [f64; 2],
}

fn other_residual(t: &Tetrad, other: Manifold) -> f64 {
    match t.params().and_then(|p| residual(&p, other.sign(), other.parity())) {
        Ok(r) => r.relative(),
        Err(_) => f64::NAN,
    }
}

/// Places where the sampled surface passes through `other`.
///
/// Along each `b` row, roots of neighbouring `ρ` nodes are paired by nearest
/// `a`; a sign change of `other`'s residual between a pair is refined by
/// Brent in `log ρ`, re-solving the surface on every evaluation. Only points
/// where both relative residuals end below [`CERTIFY_TOL`] are returned.
pub fn find_crossings(panel: &SurfacePanel, other: Manifold) -> Vec<Crossing> {
    let m = panel.manifold;
    let xi = panel.xi_abs;
    let mut out = Vec::new();
    for ib in 0..panel.b_axis.n {
        let b = panel.b_axis.value(ib);
        for ir in 0..panel.log_rho_axis.n.saturating_sub(1) {
            let (l0, l1) = (panel.log_rho_axis.value(ir), panel.log_rho_axis.value(ir + 1));
            for r0 in &panel.cells[panel.index(ib, ir)] {
                let Some(r1) = panel.cells[panel.index(ib, ir + 1)]
                    .iter()
                    .min_by(|x, y| (x.tetrad.a - r0.tetrad.a).abs().total_cmp(&(y.tetrad.a - r0.tetrad.a).abs()))
                else {
                    continue;
                };
                if (r1.tetrad.a / r0.tetrad.a - 1.0).abs() > 0.25 {
                    continue;
                }
                let (g0, g1) = (other_residual(&r0.tetrad, other), other_residual(&r1.tetrad, other));
                if !(g0.is_finite() && g1.is_finite()) || g0.signum() == g1.signum() {
                    continue;
                }
                let (a0, a1) = (r0.tetrad.a, r1.tetrad.a);
                let on_surface = |l: f64| -> Result<Tetrad> {
                    let w = (l - l0) / (l1 - l0);
                    let guess = a0 + w * (a1 - a0);
                    let rho = libm::pow(10.0, l);
                    Ok(polish_on_ray(Tetrad::new(b, guess, rho * guess, xi), m, 1.25)?.tetrad)
                };
                let g = |l: f64| on_surface(l).map_or(f64::NAN, |t| other_residual(&t, other));
                let Ok(l) = brent(g, l0, l1, 1e-14, 200) else { continue };
                let Ok(t) = on_surface(l) else { continue };
                let own = other_residual(&t, m);
                let oth = other_residual(&t, other);
                if own.abs() < CERTIFY_TOL && oth.abs() < CERTIFY_TOL {
                    out.push(Crossing { tetrad: t, manifolds: [m, other], relative_residuals: [own, oth] });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::construct_phi;

    #[test]
    fn family_point_classification() {
        let s = classify_point(Tetrad::new(4.0, 11.0 / 14.0, 22.0 / 7.0, 1.0), 1e-9).unwrap();
        assert_eq!(s.flags, [false, true, false, false]);
    }

    #[test]
    fn generic_point_has_no_flags() {
        let s = classify_point(Tetrad::new(1.0001, 1.0, 1.0, 0.5), VISUAL_TOL).unwrap();
        assert_eq!(s.flags, [false; 4]);
        assert!(s.residuals.iter().all(|r| r.abs() > 1e-2), "{:?}", s.residuals);
    }

    #[test]
    fn outside_region() {
        assert_eq!(classify_point(Tetrad::new(2.0, 0.0, 1.0, 0.1), 1e-3), Err(Error::OutsideRegion));
        assert_eq!(classify_point(Tetrad::new(2.0, 1.0, 1.0, 1.0), 1e-3), Err(Error::OutsideRegion));
        assert_eq!(classify_point(Tetrad::new(0.5, 1.0, 1.0, 0.1), 1e-3), Err(Error::OutsideRegion));
    }

    #[test]
    fn family_formula() {
        let t = parametric_family_even(4.0, 1.0, BetaSign::Minus).unwrap();
        assert!((t.a - 11.0 / 14.0).abs() < 1e-15);
        assert!((t.c - 22.0 / 7.0).abs() < 1e-14);
        let t = parametric_family_even(12.0, 1.0, BetaSign::Plus).unwrap();
        let r = residual(&t.params().unwrap(), BetaSign::Plus, Parity::Even).unwrap();
        assert!(r.value.abs() < 1e-9 * r.scale);
        assert_eq!(parametric_family_even(5.0, 1.0, BetaSign::Plus), Err(Error::OutOfInterval));
        assert_eq!(parametric_family_even(10.0, 1.0, BetaSign::Minus), Err(Error::OutOfInterval));
        assert_eq!(parametric_family_even(4.0, 0.0, BetaSign::Minus), Err(Error::OutOfInterval));
    }

    #[test]
    fn family_on_both_minus_branches() {
        for b in [1.5, 2.0, 6.0, 8.5] {
            let t = parametric_family_even(b, 0.7, BetaSign::Minus).unwrap();
            let s = classify_point(t, 1e-9).unwrap();
            assert!(s.flag(Manifold::EvenMinus));
            assert!(!s.flag(Manifold::OddMinus));
        }
        // Beyond 9 + 4√5 the formula gives a²b < |ξ|², outside the region.
        for b in [20.0, 40.0, 1e4] {
            assert_eq!(parametric_family_even(b, 0.7, BetaSign::Minus), Err(Error::InfeasibleFamilyPoint));
        }
    }

    #[test]
    fn ray_solver_reproduces_family() {
        let s = solve_on_ray(4.0, 4.0, 1.0, BetaSign::Minus, Parity::Even, (0.1, 5.0)).unwrap();
        assert!((s.tetrad.a - 11.0 / 14.0).abs() < 1e-9, "{}", s.tetrad.a);
    }

    #[test]
    fn ray_solver_odd_root_builds_eigenfunction() {
        let s = solve_on_ray(1.1, 1.0, 1.0, BetaSign::Minus, Parity::Odd, (0.1, 5.0)).unwrap();
        let p = s.tetrad.params().unwrap();
        let sol = construct_phi(&p, BetaSign::Minus, Parity::Odd, 1e-8).unwrap();
        assert!(sol.residual_eigen < 1e-9);
    }

    #[test]
    fn ray_solver_without_crossing() {
        // Even-minus on the c = 4a ray at b = 4 has its only root near 0.7857.
        let e = solve_on_ray(4.0, 4.0, 1.0, BetaSign::Minus, Parity::Even, (1.0, 5.0));
        assert_eq!(e, Err(Error::NotFound));
        let e = solve_on_ray(4.0, 4.0, 1.0, BetaSign::Minus, Parity::Even, (0.1, 0.4));
        assert_eq!(e, Err(Error::OutsideRegion));
    }

    #[test]
    fn cone_property() {
        let s = solve_on_ray(4.0, 4.0, 1.0, BetaSign::Minus, Parity::Even, (0.1, 5.0)).unwrap();
        for r in [0.5, 2.0] {
            let t = s.tetrad.scaled(r);
            let again = solve_on_ray(4.0, 4.0, r, BetaSign::Minus, Parity::Even, (0.1 * r, 5.0 * r)).unwrap();
            assert!((again.tetrad.a - t.a).abs() < 1e-9 * r);
            assert!(classify_point(t, 1e-9).unwrap().flag(Manifold::EvenMinus));
        }
    }

    #[test]
    fn small_grid_layout() {
        let g = scan_grid(Axis::new(2.0, 3.0, 2), Axis::new(1.0, 2.0, 2), Axis::new(1.0, 2.0, 2), 0.5, VISUAL_TOL).unwrap();
        assert_eq!(g.samples.len(), 8);
        let s = g.samples[g.index(1, 0, 1)];
        assert_eq!((s.tetrad.b, s.tetrad.a, s.tetrad.c), (3.0, 1.0, 2.0));
        assert!(scan_grid(Axis::new(2.0, 3.0, 513), Axis::new(1.0, 2.0, 2), Axis::new(1.0, 2.0, 2), 0.5, 1e-3).is_err());
    }

    #[test]
    fn grid_cell_near_family_point() {
        // Axes chosen so that (4, 11/14, 22/7) is a node.
        let g = scan_grid(
            Axis::new(3.0, 5.0, 3),
            Axis::new(11.0 / 14.0 - 0.1, 11.0 / 14.0 + 0.1, 3),
            Axis::new(22.0 / 7.0 - 0.2, 22.0 / 7.0 + 0.2, 3),
            1.0,
            VISUAL_TOL,
        )
        .unwrap();
        assert!(g.samples[g.index(1, 1, 1)].flag(Manifold::EvenMinus));
    }

    #[test]
    fn boundary_trend_towards_origin() {
        // Along the family ray the flagged points approach (b, 0, 0, 0).
        let base = parametric_family_even(4.0, 1.0, BetaSign::Minus).unwrap();
        let mut last = f64::INFINITY;
        for r in [1.0, 0.1, 0.01] {
            let t = base.scaled(r);
            assert!(classify_point(t, 1e-9).unwrap().flag(Manifold::EvenMinus));
            let dist = libm::sqrt(t.a * t.a + t.c * t.c + t.xi_abs * t.xi_abs);
            assert!(dist < last);
            last = dist;
        }
    }

    #[test]
    fn all_roots_include_first() {
        let all = solve_all_on_ray(4.0, 4.0, 1.0, BetaSign::Minus, Parity::Even, (0.1, 5.0)).unwrap();
        let first = solve_on_ray(4.0, 4.0, 1.0, BetaSign::Minus, Parity::Even, (0.1, 5.0)).unwrap();
        assert_eq!(all[0], first);
        assert!(all.windows(2).all(|w| w[0].tetrad.a < w[1].tetrad.a));
    }

    #[test]
    fn polishing_returns_nearby_root() {
        let t = Tetrad::new(4.0, 0.8, 3.2, 1.0);
        let s = polish_on_ray(t, Manifold::EvenMinus, 1.2).unwrap();
        assert!((s.tetrad.a - 11.0 / 14.0).abs() < 1e-12);
        assert!(polish_on_ray(t, Manifold::EvenMinus, 1.01).is_err());
    }

    #[test]
    fn even_sets_of_opposite_sign_cross() {
        // Around b ≈ 9.88 the even-plus surface passes through the even-minus one.
        let panel = surface_panel(
            Manifold::EvenPlus,
            Axis::new(9.88, 9.88, 1),
            Axis::new(-1.2, -0.5, 16),
            1.0,
            (0.01, 30.0),
        )
        .unwrap();
        assert!(panel.occupied_cells() > 0);
        let x = find_crossings(&panel, Manifold::EvenMinus);
        assert!(!x.is_empty());
        for c in x {
            let s = classify_point(c.tetrad, CERTIFY_TOL).unwrap();
            assert!(s.flag(Manifold::EvenPlus) && s.flag(Manifold::EvenMinus));
        }
    }
}
