//! Data-parallel versions of the region scans.
//!
//! Every sample is computed independently and written to its own slot, so the
//! result is identical to the sequential scan regardless of thread count.

use ncho_core::region::{check_grid, check_panel, grid_sample, surface_cell, Axis, Manifold, ScanGrid, SurfacePanel};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

pub const THREADS_ENV: &str = "NCHO_THREADS";

/// Thread cap from `NCHO_THREADS`; `None` means one per core.
pub fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::argument("NCHO_THREADS", &s, "must be a positive integer")),
        },
    }
}

pub fn pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::argument("thread pool", "", e.to_string()))
}

pub fn par_scan_grid(b: Axis, a: Axis, c: Axis, xi_abs: f64, tol: f64) -> CliResult<ScanGrid> {
    let total = check_grid(&b, &a, &c)?;
    let per_b = a.n * c.n;
    let samples = (0..total)
        .into_par_iter()
        .map(|i| {
            let (ib, rest) = (i / per_b, i % per_b);
            let (ia, ic) = (rest / c.n, rest % c.n);
            grid_sample(b.value(ib), a.value(ia), c.value(ic), xi_abs, tol)
        })
        .collect();
    Ok(ScanGrid { b_axis: b, a_axis: a, c_axis: c, xi_abs, tol, samples })
}

pub fn par_surface_panel(m: Manifold, b: Axis, log_rho: Axis, xi_abs: f64, a_bracket: (f64, f64)) -> CliResult<SurfacePanel> {
    check_panel(&b, &log_rho)?;
    let cells = (0..b.n * log_rho.n)
        .into_par_iter()
        .map(|i| {
            let (ib, ir) = (i / log_rho.n, i % log_rho.n);
            surface_cell(m, b.value(ib), log_rho.pow10(ir), xi_abs, a_bracket)
        })
        .collect();
    Ok(SurfacePanel { manifold: m, b_axis: b, log_rho_axis: log_rho, xi_abs, a_bracket, cells })
}
