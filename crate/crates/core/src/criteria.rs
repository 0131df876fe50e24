//! Decision criteria built on the series evaluations.
//!
//! The recommendation always follows the time-average growth rate `ḡ`: buy
//! when wealth grows over repeated equivalent rounds, do not buy when it
//! shrinks. The naive expected payout and the ensemble-average growth rate
//! are reported alongside for comparison only.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamble::{GambleSpec, PlayerState};
use crate::series::{
    bernoulli_gain, bernoulli_literal_lhs, ensemble_average_growth, expected_payout,
    time_average_growth, Classification, Series, SeriesResult, TruncationPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recommendation {
    Buy,
    DontBuy,
    /// `ḡ` diverges positively for every price that cannot bankrupt.
    BuyAtAnyNonBankruptingPrice,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub naive_expected_payout: SeriesResult,
    pub ensemble_growth: SeriesResult,
    pub time_growth: SeriesResult,
    pub bernoulli_literal: SeriesResult,
    pub recommendation: Recommendation,
}

/// Recommendation from the time-average growth rate alone.
pub fn recommend(time_growth: &SeriesResult) -> Recommendation {
    match time_growth.classification {
        Classification::Converged { value, .. } if value > 0.0 => Recommendation::Buy,
        Classification::Converged { .. } | Classification::DivergesNegative => {
            Recommendation::DontBuy
        }
        Classification::DivergesPositive => Recommendation::BuyAtAnyNonBankruptingPrice,
        Classification::Undefined { .. } => Recommendation::Undefined,
    }
}

pub fn evaluate(
    state: &PlayerState,
    spec: &GambleSpec,
    policy: &TruncationPolicy,
) -> Result<DecisionReport> {
    let time_growth = time_average_growth(state, spec, policy)?;
    Ok(DecisionReport {
        naive_expected_payout: expected_payout(spec, state.wealth(), policy)?,
        ensemble_growth: ensemble_average_growth(state, spec, policy)?,
        bernoulli_literal: bernoulli_literal_lhs(state, spec, policy)?,
        recommendation: recommend(&time_growth),
        time_growth,
    })
}

const MAX_BISECTIONS: usize = 200;
const BRACKET_GRID_POINTS: usize = 64;
/// Bracket scan starts at this fraction of wealth.
const BRACKET_GRID_START: f64 = 1e-6;
/// Bracket scan stops this far below the bankruptcy boundary.
const BOUNDARY_GAP: f64 = 1e-9;

/// Bisects a decreasing function with `f(lo) > 0 > f(hi)` down to adjacent
/// floats. Returns the endpoint with the smaller residual.
fn bisect<F>(mut f: F, mut lo: f64, mut f_lo: f64, mut hi: f64, mut f_hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok((mid, 0.0));
        }
        if v > 0.0 {
            lo = mid;
            f_lo = v;
        } else {
            hi = mid;
            f_hi = v;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    })
}

/// Geometric grid of `points` values from `start` to `end` inclusive.
pub fn log_spaced(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let (a, b) = (start.ln(), end.ln());
            let step = (b - a) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i == 0 {
                        start
                    } else if i == points - 1 {
                        end
                    } else {
                        (a + step * i as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Ticket price `c*` at which `ḡ(w, c*) = 0`.
///
/// `ḡ` is strictly decreasing in `c` and tends to `-∞` at the bankruptcy
/// boundary `c = w + min m_n`. A geometric scan from `w·10⁻⁶` up to just
/// below that boundary finds a bracket, which is then bisected to adjacent
/// floats. Series inside the solver are summed to `solver_tol·10⁻⁴` so that
/// truncation does not move the root.
pub fn breakeven_price(
    wealth: f64,
    spec: &GambleSpec,
    policy: &TruncationPolicy,
    solver_tol: f64,
) -> Result<f64> {
    if !(solver_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "solver tolerance must be positive, got {solver_tol}"
        )));
    }
    PlayerState::new(wealth, 0.0)?;
    let inner = policy.with_tolerance(policy.tolerance.min(solver_tol * 1e-4));
    let g = |c: f64| -> Result<f64> {
        let state = PlayerState::new(wealth, c)?;
        Ok(time_average_growth(&state, spec, &inner)?
            .extended_value()
            .unwrap_or(f64::NEG_INFINITY))
    };

    let g0 = g(0.0)?;
    if !(g0 > 0.0) {
        return Err(Error::NoSignChange(format!(
            "time-average growth at zero price is {g0}"
        )));
    }
    if g0 == f64::INFINITY {
        return Err(Error::NoSignChange(
            "time-average growth diverges positively; no finite break-even price".into(),
        ));
    }

    let upper = wealth + spec.min_payout(wealth) - BOUNDARY_GAP;
    if !(upper > 0.0) {
        return Err(Error::NoSignChange(
            "every positive price risks bankruptcy".into(),
        ));
    }
    let start = (wealth * BRACKET_GRID_START).min(upper);
    let (mut lo, mut f_lo) = (0.0, g0);
    let mut bracket = None;
    for c in log_spaced(start, upper, BRACKET_GRID_POINTS) {
        let v = g(c)?;
        if v == 0.0 {
            return Ok(c);
        }
        if v < 0.0 {
            bracket = Some((c, v));
            break;
        }
        lo = c;
        f_lo = v;
    }
    let (hi, f_hi) = bracket.ok_or_else(|| {
        Error::NoSignChange(format!(
            "time-average growth stays positive up to the bankruptcy boundary {upper}"
        ))
    })?;

    let (root, residual) = bisect(g, lo, f_lo, hi, f_hi)?;
    if residual.abs() > solver_tol {
        return Err(Error::SolverTolerance {
            tol: solver_tol,
            residual,
            at: root,
        });
    }
    Ok(root)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakEvenPoint {
    pub wealth: f64,
    pub breakeven_price: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakEvenFailure {
    pub wealth: f64,
    pub error: String,
}

/// Zero-growth line in the price-wealth plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakEvenCurve {
    pub points: Vec<BreakEvenPoint>,
    pub failures: Vec<BreakEvenFailure>,
    pub solver_tolerance: f64,
}

/// Solves [`breakeven_price`] on a log-spaced wealth grid. Points are solved
/// in parallel and returned in grid order; failed points are listed
/// separately.
pub fn breakeven_curve(
    w_min: f64,
    w_max: f64,
    num_points: usize,
    spec: &GambleSpec,
    policy: &TruncationPolicy,
    solver_tol: f64,
) -> Result<BreakEvenCurve> {
    if !(w_min > 0.0 && w_min < w_max && w_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < w_min < w_max, got {w_min}, {w_max}"
        )));
    }
    if num_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 points, got {num_points}"
        )));
    }
    let solved: Vec<(f64, Result<f64>)> = log_spaced(w_min, w_max, num_points)
        .into_par_iter()
        .map(|w| (w, breakeven_price(w, spec, policy, solver_tol)))
        .collect();

    let mut curve = BreakEvenCurve {
        points: Vec::new(),
        failures: Vec::new(),
        solver_tolerance: solver_tol,
    };
    for (wealth, r) in solved {
        match r {
            Ok(breakeven_price) => curve.points.push(BreakEvenPoint {
                wealth,
                breakeven_price,
            }),
            Err(e) => curve.failures.push(BreakEvenFailure {
                wealth,
                error: e.to_string(),
            }),
        }
    }
    Ok(curve)
}

/// Outcome of the two-step stake condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Stake {
    Price(f64),
    /// The expected gain diverges, so the condition is positive for every `c < w`.
    NeverZero,
    Undefined,
}

/// Largest stake satisfying `G - [ln w - ln(w - c)] = 0`, where `G` is the
/// expected log-utility gain of a free ticket.
pub fn bernoulli_stake(
    wealth: f64,
    spec: &GambleSpec,
    policy: &TruncationPolicy,
    solver_tol: f64,
) -> Result<Stake> {
    let inner = policy.with_tolerance(policy.tolerance.min(solver_tol * 1e-4));
    let gain = bernoulli_gain(wealth, spec, &inner)?;
    let g = match gain.classification {
        Classification::Converged { value, .. } => value,
        Classification::DivergesPositive => return Ok(Stake::NeverZero),
        Classification::Undefined { .. } => return Ok(Stake::Undefined),
        Classification::DivergesNegative => {
            return Err(Error::NoSignChange(
                "expected gain diverges negatively".into(),
            ))
        }
    };
    if !(g > 0.0) {
        return Err(Error::NoSignChange(format!(
            "a free ticket already has expected gain {g}"
        )));
    }
    let lhs = |c: f64| -> Result<f64> { Ok(g + (-c / wealth).ln_1p()) };

    // lhs(w(1 - 2^-k)) = g - k ln 2
    let mut k = 1;
    let mut hi = wealth * 0.5;
    while lhs(hi)? >= 0.0 {
        k += 1;
        hi = wealth * (1.0 - 0.5f64.powi(k));
        if hi >= wealth {
            return Err(Error::NoSignChange(
                "stake condition stays positive up to the full wealth".into(),
            ));
        }
    }
    let (root, residual) = bisect(lhs, 0.0, g, hi, lhs(hi)?)?;
    if residual.abs() > solver_tol {
        return Err(Error::SolverTolerance {
            tol: solver_tol,
            residual,
            at: root,
        });
    }
    Ok(Stake::Price(root))
}

/// Price `c < w` that makes the `n_max`-term partial sum of the two-step
/// condition vanish for Menger's payouts.
///
/// Each of the first `n_max` gain terms is `(1/2)^n·2^n = 1`, so the
/// condition reads `n_max = ln w - ln(w - c)`, i.e. `c = w(1 - e^(-n_max))`.
/// Beyond `n_max ≈ 36` that is within one ulp of `w`; the result is then
/// held at the largest float below `w`.
pub fn menger_partial_sum_price(wealth: f64, n_max: u64) -> Result<f64> {
    if !(wealth > 0.0 && wealth.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "wealth must be positive, got {wealth}"
        )));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let price = -wealth * (-(n_max as f64)).exp_m1();
    Ok(price.min(wealth.next_down()))
}

/// [`menger_partial_sum_price`] found by bisection on the summed gain terms
/// rather than from the closed form.
pub fn menger_partial_sum_root(wealth: f64, n_max: u64) -> Result<f64> {
    menger_partial_sum_price(wealth, n_max)?;
    let spec = GambleSpec::menger();
    let free = PlayerState::new(wealth, 0.0)?;
    let gain = Series::log_growth(&free, &spec).partial_sum(n_max)?;
    let condition = |c: f64| -> Result<f64> { Ok(gain + (-c / wealth).ln_1p()) };
    let (root, _) = bisect(condition, 0.0, gain, wealth, f64::NEG_INFINITY)?;
    Ok(root.min(wealth.next_down()))
}

/// `w - c` at the partial-sum price, `w·e^(-n_max)`. Stays resolvable long
/// after the price itself rounds to `w`.
pub fn menger_partial_sum_shortfall(wealth: f64, n_max: u64) -> f64 {
    wealth * (-(n_max as f64)).exp()
}
