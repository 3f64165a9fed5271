//! Adaptive Simpson integration with an explicit evaluation budget.

use crate::error::{Error, Result};

/// Evaluation budget used when callers do not pick one.
pub const DEFAULT_MAX_EVALUATIONS: usize = 2_000_000;

const MAX_DEPTH: u32 = 60;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Uses the classic recursive scheme with Richardson correction. Fails with
/// [`Error::Quadrature`] if the budget is exhausted or an interval can no
/// longer be bisected.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    adaptive_simpson_with_budget(f, a, b, tol, DEFAULT_MAX_EVALUATIONS)
}

pub fn adaptive_simpson_with_budget<F>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_evaluations: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "(0, ∞)"));
    }
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut state = Budget {
        used: 0,
        max: max_evaluations,
        failed: false,
    };

    // Start from several panels so a single coarse Simpson estimate cannot
    // look converged on a peaked integrand.
    const PANELS: usize = 8;
    let width = (hi - lo) / PANELS as f64;
    let mut total = 0.0;
    for i in 0..PANELS {
        let pa = lo + width * i as f64;
        let pb = if i + 1 == PANELS { hi } else { pa + width };
        let pm = 0.5 * (pa + pb);
        let (fpa, fpm, fpb) = (f(pa), f(pm), f(pb));
        state.used += 3;
        let s = simpson(pa, pb, fpa, fpm, fpb);
        total += recurse(&f, pa, pb, fpa, fpm, fpb, s, tol / PANELS as f64, MAX_DEPTH, &mut state);
    }

    if state.failed || !total.is_finite() {
        return Err(Error::Quadrature {
            tol,
            evaluations: state.used,
        });
    }
    Ok(sign * total)
}

struct Budget {
    used: usize,
    max: usize,
    failed: bool,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut Budget,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    budget.used += 2;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;

    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 || budget.used >= budget.max || !(a < lm && rm < b) {
        budget.failed = true;
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)
}
