//! Closed-form fidelity budget for the trapped target state, and extraction
//! of the below-target population constant `alpha` from protocol runs.
//!
//! The stationary balance reads
//! `F (1 - e^{-n_T r M}) + e^{-M} s^2 = alpha (1 - F) s^2`
//! with `s^2 = sin^2(pi sqrt(n_T)/sqrt(n_T+1))`, wait multiple `M` and rate
//! ratio `r = gamma_c / gamma_q`. Dropping `s^2 -> pi^2/(4 n_T^2)` and
//! linearizing the loss factor gives the compact estimate
//! `F = pi^2 (alpha - e^{-M}) / (pi^2 alpha + 4 M n_T^3 r)`.
//! Both the exact solve and the compact form are exposed so their gap is
//! measurable; at small `n_T` the small-angle step distorts the pump
//! probability noticeably.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::protocol::{stabilization_step, StepRecord};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetParams {
    pub n_target: usize,
    /// Decay-phase wait in units of the coin reset time, `t = M / gamma_q`.
    pub wait_multiple: f64,
    /// Below-target population fraction, `P_{n_T - 1} = alpha (1 - F)`.
    pub alpha: f64,
    /// `gamma_c / gamma_q`.
    pub rate_ratio: f64,
}

impl BudgetParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_target < 1 {
            return Err(Error::InvalidParameter("n_target must be >= 1".into()));
        }
        if !(self.wait_multiple > 0.0) {
            return Err(Error::InvalidParameter("wait multiple must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter("alpha must be in [0,1]".into()));
        }
        if !(self.rate_ratio >= 0.0) {
            return Err(Error::InvalidParameter("rate ratio must be >= 0".into()));
        }
        Ok(())
    }
}

/// Squared pump/drop amplitude between `|n_T - 1>` and `|n_T>` at the
/// trapping angle: `sin^2(pi sqrt(n_T)/sqrt(n_T+1))`.
pub fn pump_overlap(n_target: usize) -> f64 {
    let n = n_target as f64;
    (PI * (n / (n + 1.0)).sqrt()).sin().powi(2)
}

/// Compact fidelity estimate
/// `F = pi^2 (alpha - e^{-M}) / (pi^2 alpha + 4 M n_T^3 rate_ratio)`.
/// Values can go negative where the approximations collapse; they are
/// returned as-is.
pub fn analytic_fidelity(b: &BudgetParams) -> Result<f64> {
    b.validate()?;
    let m = b.wait_multiple;
    let n = b.n_target as f64;
    let denom = PI.powi(2) * b.alpha + 4.0 * m * n.powi(3) * b.rate_ratio;
    if !(denom > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "non-positive denominator {denom} in fidelity estimate"
        )));
    }
    Ok(PI.powi(2) * (b.alpha - (-m).exp()) / denom)
}

/// Signed residual of the exact stationary balance at fidelity `f`;
/// zero iff `(f, b)` satisfy it exactly.
pub fn balance_residual(f: f64, b: &BudgetParams) -> f64 {
    let s2 = pump_overlap(b.n_target);
    let m = b.wait_multiple;
    let loss = 1.0 - (-(b.n_target as f64) * b.rate_ratio * m).exp();
    f * loss + (-m).exp() * s2 - b.alpha * (1.0 - f) * s2
}

/// Exact solve of the stationary balance for `F`.
pub fn solve_balance(b: &BudgetParams) -> Result<f64> {
    b.validate()?;
    let s2 = pump_overlap(b.n_target);
    let m = b.wait_multiple;
    let loss = 1.0 - (-(b.n_target as f64) * b.rate_ratio * m).exp();
    let denom = loss + b.alpha * s2;
    if !(denom > 0.0) {
        return Err(Error::InvalidParameter(
            "degenerate balance: zero loss and zero alpha".into(),
        ));
    }
    Ok(s2 * (b.alpha - (-m).exp()) / denom)
}

/// One stationary observation: target fidelity and the population of the
/// level just below the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaPoint {
    pub n_target: usize,
    pub fidelity: f64,
    pub below_target: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub mean: f64,
    pub points: Vec<AlphaPoint>,
}

/// Extract an `AlphaPoint` from a protocol run: the stationary state is the
/// record 10 steps past the stabilization step.
pub fn alpha_from_records(n_target: usize, records: &[StepRecord]) -> Result<AlphaPoint> {
    let stable = stabilization_step(records).ok_or(Error::NonStationary)?;
    let idx = records
        .iter()
        .position(|r| r.step == stable)
        .expect("stabilization step comes from the records");
    let pick = (idx + 10).min(records.len() - 1);
    let r = &records[pick];
    alpha_point(n_target, r.fidelity, r.populations[n_target - 1])
}

pub fn alpha_point(n_target: usize, fidelity: f64, below_target: f64) -> Result<AlphaPoint> {
    if n_target < 1 {
        return Err(Error::InvalidParameter("n_target must be >= 1".into()));
    }
    let gap = 1.0 - fidelity;
    if gap <= 1e-12 {
        return Err(Error::InvalidParameter(
            "fidelity too close to 1 for alpha extraction".into(),
        ));
    }
    Ok(AlphaPoint {
        n_target,
        fidelity,
        below_target,
        alpha: below_target / gap,
    })
}

/// Mean of the per-point ratios `P_{n_T - 1} / (1 - F)`.
pub fn estimate_alpha(points: &[AlphaPoint]) -> Result<AlphaEstimate> {
    if points.is_empty() {
        return Err(Error::InvalidParameter(
            "alpha estimation needs at least one stationary point".into(),
        ));
    }
    let mean = points.iter().map(|p| p.alpha).sum::<f64>() / points.len() as f64;
    Ok(AlphaEstimate {
        mean,
        points: points.to_vec(),
    })
}
