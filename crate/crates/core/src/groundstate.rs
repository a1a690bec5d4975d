//! Closed-form discords on the level-crossing line `omega = omega_c(delta)`.
//!
//! At the crossing the zero-temperature state is the equal mixture of `|11>`
//! and the lower central-block eigenvector. Its discords have closed forms
//! in `delta` alone; both are evaluated here in a rearranged form in which
//! every `log2(1 - delta)` appears as `x log2 x`, so the formulas stay
//! accurate up to the `delta -> 1` edge.

use std::f64::consts::SQRT_2;

use crate::discord::{clamp_roundoff, xlog2x};
use crate::error::{Error, Result};
use crate::model::critical_omega;
use crate::optimize::{golden_section_max, scan_then_golden, Maximum};

/// Bracket width at which the asymmetry maximization stops.
pub const ARGMAX_TOL: f64 = 1e-8;
/// Largest `delta` probed by [`find_max_asymmetry`].
const DELTA_SEARCH_MAX: f64 = 1.0 - 1e-9;

fn check_domain(delta: f64) -> Result<()> {
    if delta >= 1.0 {
        return Err(Error::SingularClosedForm);
    }
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParams(format!(
            "delta = {delta} must lie in [0, 1)"
        )));
    }
    Ok(())
}

/// `2 - sqrt(2 (1 + delta))`, computed without cancellation near `delta = 1`.
fn gap_from_two(delta: f64) -> f64 {
    let s = (2.0 * (1.0 + delta)).sqrt();
    2.0 * (1.0 - delta) / (2.0 + s)
}

/// Discord asymmetry `Q^A - Q^B` of the degenerate ground state.
pub fn delta_closed_form(delta: f64) -> Result<f64> {
    check_domain(delta)?;
    let d = delta;
    let sp = (2.0 * (1.0 + d)).sqrt();
    let sm = (2.0 * (1.0 - d)).sqrt();
    // coefficient of log2(1 - d) after collecting, times -(1 - d)
    let k = (1.0 + d).sqrt() / ((1.0 + d).sqrt() + SQRT_2);
    let sum = 3.0 * ((3.0 - d) / (3.0 + d)).log2() - (1.0 + d).log2() - d * (9.0 - d * d).log2()
        + d * (1.0 + d).log2()
        + sp * (2.0 * (2.0 + sp).log2() - 1.0)
        + sm * ((2.0 - sm) / (2.0 + sm)).log2()
        - k * xlog2x(1.0 - d);
    // the constant terms cancel only to round-off at small delta
    clamp_roundoff("asymmetry", 0.25 * sum)
}

/// `(Q^B_c, Q^A_c)` on the crossing line.
pub fn q_critical(delta: f64) -> Result<(f64, f64)> {
    check_domain(delta)?;
    let d = delta;
    let q_b = {
        let s = (2.0 * (1.0 + d)).sqrt();
        0.25 * (12.0
            - xlog2x(3.0 - d)
            - xlog2x(1.0 + d)
            - xlog2x(gap_from_two(d))
            - xlog2x(2.0 + s))
    };
    let q_a = {
        let s = (2.0 * (1.0 - d)).sqrt();
        0.25 * (12.0 - xlog2x(3.0 + d) - xlog2x(1.0 - d) - xlog2x(2.0 - s) - xlog2x(2.0 + s))
    };
    Ok((q_b, q_a))
}

/// Closed-form quantities at one point of the crossing line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub delta_param: f64,
    pub omega_c: f64,
    pub delta_asym: f64,
    pub q_b_c: f64,
    pub q_a_c: f64,
}

pub fn critical_point(delta: f64) -> Result<CriticalPoint> {
    let (q_b_c, q_a_c) = q_critical(delta)?;
    Ok(CriticalPoint {
        delta_param: delta,
        omega_c: critical_omega(delta)?,
        delta_asym: delta_closed_form(delta)?,
        q_b_c,
        q_a_c,
    })
}

/// Maximizes the crossing-line asymmetry over `delta in [0, 1)`.
///
/// Returns `(argmax, max)`.
pub fn find_max_asymmetry() -> (f64, f64) {
    let m = scan_then_golden(asymmetry_or_zero, 0.0, DELTA_SEARCH_MAX, 101, ARGMAX_TOL);
    (m.x, m.value)
}

/// Golden-section maximization restricted to `[lo, hi]`.
pub fn find_max_asymmetry_in(lo: f64, hi: f64) -> Result<Maximum> {
    check_domain(lo)?;
    check_domain(hi)?;
    if lo > hi {
        return Err(Error::InvalidParams(format!("empty range [{lo}, {hi}]")));
    }
    Ok(golden_section_max(asymmetry_or_zero, lo, hi, ARGMAX_TOL))
}

fn asymmetry_or_zero(delta: f64) -> f64 {
    delta_closed_form(delta).unwrap_or(0.0)
}
