//! Numeric side of the OCC analysis: the profit-gap function, the
//! asymptotic ratio, the per-phase recurrence with integer interval bounds,
//! its tail, and the lower-bound formulas of the OCC nemesis.

use serde::Serialize;
use thiserror::Error;

use crate::strategy::GAMMA_ALTERNATIVE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("x must lie in (0, 1], got {0}")]
    XOutOfRange(f64),
    #[error("need gamma > x + 1 (gamma {gamma}, x {x})")]
    GammaTooSmall { gamma: f64, x: f64 },
    #[error("gamma must exceed 1, got {0}")]
    Gamma(f64),
    #[error("phase bound {j} too large: gamma^j exceeds 2^53")]
    Horizon { j: u32 },
    #[error("need at least {min} phases, got {j}")]
    TooFewPhases { j: u32, min: u32 },
    #[error("recurrence tail diverges: alpha sup {alpha} >= 1")]
    Divergent { alpha: f64 },
}

/// A `(gamma, x)` parameter pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OccParams {
    pub gamma: f64,
    pub x: f64,
}

impl OccParams {
    /// `gamma = (3 + sqrt 13) / 2`, `x = (5 - sqrt 13) / 2`.
    pub fn optimal() -> Self {
        let r = 13f64.sqrt();
        OccParams {
            gamma: (3.0 + r) / 2.0,
            x: (5.0 - r) / 2.0,
        }
    }

    pub fn alternative() -> Self {
        OccParams {
            gamma: GAMMA_ALTERNATIVE,
            x: 0.823_889,
        }
    }
}

/// `F(a, b, x) = (b - a x)^2 + a x (2 - x) - b`, the gap between the two
/// sides of the profit inequality. Non-negative on the whole domain.
pub fn profvalue_gap(a: u64, b: u64, x: f64) -> Result<f64, AnalysisError> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(AnalysisError::XOutOfRange(x));
    }
    let (a, b) = (a as f64, b as f64);
    Ok((b - a * x).powi(2) + a * x * (2.0 - x) - b)
}

fn check_pair(gamma: f64, x: f64) -> Result<(), AnalysisError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(AnalysisError::XOutOfRange(x));
    }
    if !(gamma.is_finite() && gamma > x + 1.0) {
        return Err(AnalysisError::GammaTooSmall { gamma, x });
    }
    Ok(())
}

/// `R = gamma (gamma x + x + gamma - 1) / (x (gamma - x - 1))`.
pub fn asymptotic_ratio(gamma: f64, x: f64) -> Result<f64, AnalysisError> {
    check_pair(gamma, x)?;
    Ok(gamma * (gamma * x + x + gamma - 1.0) / (x * (gamma - x - 1.0)))
}

/// Integer bounds on the profit committed in phase `j`:
/// `ceil(g^j) <= delta_j <= floor(g^j + (sqrt(8 g^j + 1) + 1) / 2)`.
pub fn delta_bounds(gamma: f64, j: u32) -> (u64, u64) {
    let p = gamma.powi(j as i32);
    (
        p.ceil() as u64,
        (p + 0.5 * ((8.0 * p + 1.0).sqrt() + 1.0)).floor() as u64,
    )
}

/// Bounds for one phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RecurrenceRow {
    pub j: u32,
    pub s_min: u64,
    pub s_max: u64,
    pub delta_min: u64,
    pub delta_max: u64,
    /// Upper bound on the ratio at the end of phase `j`.
    pub rprime: f64,
}

/// Seeded value of the bound after phase 1 (from a case analysis of small
/// cliques, not recomputed here).
pub const RPRIME_1: f64 = 10.0;

/// Largest phase index with `gamma^j <= 2^53`.
pub fn max_phase(gamma: f64) -> u32 {
    ((2f64.powi(53)).ln() / gamma.ln()).floor() as u32
}

/// Rows `j = 0..=max_j`.
///
/// `S_j` accumulates the delta bounds from `S_0 = 1`. The ratio bound
/// follows
///
/// ```text
/// R'_j = (x+1) / (x S_{j-1}) * (x S_{j-2} R'_{j-1} + delta_j) + 2
/// ```
///
/// evaluated at the worst corner of the intervals: `delta_j` and `S_{j-2}`
/// at their maxima, `S_{j-1}` at its minimum.
pub fn recurrence_table(gamma: f64, x: f64, max_j: u32) -> Result<Vec<RecurrenceRow>, AnalysisError> {
    check_pair(gamma, x)?;
    if max_j < 1 {
        return Err(AnalysisError::TooFewPhases { j: max_j, min: 1 });
    }
    if max_j > max_phase(gamma) {
        return Err(AnalysisError::Horizon { j: max_j });
    }
    let mut rows: Vec<RecurrenceRow> = Vec::with_capacity(max_j as usize + 1);
    for j in 0..=max_j {
        let (delta_min, delta_max) = if j == 0 { (1, 1) } else { delta_bounds(gamma, j) };
        let (s_min, s_max) = match rows.last() {
            None => (1, 1),
            Some(prev) => (prev.s_min + delta_min, prev.s_max + delta_max),
        };
        let rprime = match j {
            0 => 1.0,
            1 => RPRIME_1,
            _ => {
                let prev = &rows[j as usize - 1];
                let prev2 = &rows[j as usize - 2];
                (x + 1.0) / (x * prev.s_min as f64) * (x * prev2.s_max as f64 * prev.rprime + delta_max as f64) + 2.0
            }
        };
        rows.push(RecurrenceRow {
            j,
            s_min,
            s_max,
            delta_min,
            delta_max,
            rprime,
        });
    }
    Ok(rows)
}

/// Linear majorant `R'_j <= alpha R'_{j-1} + beta` of the recurrence tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBound {
    pub from_j: u32,
    pub horizon: u32,
    pub alpha_sup: f64,
    pub beta_sup: f64,
    /// Fixed point `beta / (1 - alpha)`.
    pub limit: f64,
}

/// `alpha / beta` coefficients of phase `j >= 2`.
fn tail_coefficients(rows: &[RecurrenceRow], x: f64, j: usize) -> (f64, f64) {
    let s1 = rows[j - 1].s_min as f64;
    let alpha = (x + 1.0) * rows[j - 2].s_max as f64 / s1;
    let beta = (x + 1.0) * rows[j].delta_max as f64 / (x * s1) + 2.0;
    (alpha, beta)
}

/// Fixed point of `r = alpha r + beta`.
pub fn fixed_point(alpha: f64, beta: f64) -> Result<f64, AnalysisError> {
    if alpha >= 1.0 {
        return Err(AnalysisError::Divergent { alpha });
    }
    Ok(beta / (1.0 - alpha))
}

/// Suprema of the tail coefficients over `from_j..=horizon`, together with
/// their limits as `j -> inf` (`(x+1)/gamma` and `(x+1)(gamma-1)/x + 2`).
pub fn tail_bound(gamma: f64, x: f64, from_j: u32, horizon: u32) -> Result<TailBound, AnalysisError> {
    if from_j < 2 {
        return Err(AnalysisError::TooFewPhases { j: from_j, min: 2 });
    }
    let rows = recurrence_table(gamma, x, horizon.max(from_j))?;
    let (mut alpha_sup, mut beta_sup) = ((x + 1.0) / gamma, (x + 1.0) * (gamma - 1.0) / x + 2.0);
    for j in from_j..=horizon.max(from_j) {
        let (a, b) = tail_coefficients(&rows, x, j as usize);
        alpha_sup = alpha_sup.max(a);
        beta_sup = beta_sup.max(b);
    }
    Ok(TailBound {
        from_j,
        horizon: horizon.max(from_j),
        alpha_sup,
        beta_sup,
        limit: fixed_point(alpha_sup, beta_sup)?,
    })
}

/// `R_hat_j = alpha R_hat_{j-1} + beta` for `j = from_j+1..=horizon`, seeded
/// with `seed` at `from_j`.
pub fn tail_majorant(alpha: f64, beta: f64, seed: f64, from_j: u32, horizon: u32) -> Vec<(u32, f64)> {
    let mut r = seed;
    (from_j + 1..=horizon)
        .map(|j| {
            r = alpha * r + beta;
            (j, r)
        })
        .collect()
}

/// Which regime of the OCC lower bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LowerBoundCase {
    /// `1 < gamma <= sqrt 3`: plain batches.
    Low,
    /// `sqrt 3 < gamma < 3`: last batch as triangles.
    Middle,
    /// `gamma >= 3`.
    High,
}

/// Lower bound on OCC's ratio forced by the batch construction.
pub fn occ_lower_bound(gamma: f64) -> Result<(LowerBoundCase, f64), AnalysisError> {
    if !(gamma.is_finite() && gamma > 1.0) {
        return Err(AnalysisError::Gamma(gamma));
    }
    let g = gamma;
    Ok(if g >= 3.0 {
        (LowerBoundCase::High, (g * g + 5.0 * g - 2.0) / (g - 1.0))
    } else if g > 3f64.sqrt() {
        (
            LowerBoundCase::Middle,
            (5.0 * g.powi(3) + 5.0 * g * g + 8.0 * g - 6.0) / (3.0 * g * (g - 1.0)),
        )
    } else {
        (LowerBoundCase::Low, plain_lower_bound(g))
    })
}

/// `gamma (gamma + 3) / (gamma - 1)`, the plain-construction ratio.
pub fn plain_lower_bound(gamma: f64) -> f64 {
    gamma * (gamma + 3.0) / (gamma - 1.0)
}
