//! Infinite-series evaluation with explicit truncation control.
//!
//! Every criterion in this crate is a sum over waiting times `n = 1, 2, ...`.
//! A [`Series`] pairs the term sequence with an *envelope* describing what is
//! known about its tail:
//!
//! * finite support (table gambles) - the sum is exact;
//! * a closed-form tail bound - summation stops once the bound on
//!   `|Σ_{n>N} t_n|` drops below the requested tolerance;
//! * nothing - a ratio test over a sliding window decides between
//!   divergence and a geometric tail estimate.
//!
//! Closed-form envelopes are used wherever the term structure allows one, so
//! slowly settling but convergent sums (a very rich player whose first few
//! dozen log-terms are nearly constant) are never mistaken for divergent ones.

use std::collections::VecDeque;
use std::f64::consts::LN_2;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamble::{
    self, capped_support, ln_probability, menger_log_ratio, payout, probability, GambleSpec,
    PayoutRule, PlayerState,
};

/// Why a series has no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UndefinedReason {
    /// Some outcome with positive probability leaves wealth `≤ 0`.
    BankruptcyTerm,
    /// A logarithm of a non-positive quantity outside the per-outcome terms.
    NonpositiveLogArgument,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Classification {
    Converged { value: f64, tail_bound: f64 },
    DivergesPositive,
    DivergesNegative,
    Undefined { reason: UndefinedReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub classification: Classification,
    pub terms_used: u64,
}

impl SeriesResult {
    pub fn converged(value: f64, tail_bound: f64, terms_used: u64) -> Self {
        SeriesResult {
            classification: Classification::Converged { value, tail_bound },
            terms_used,
        }
    }

    pub fn undefined(reason: UndefinedReason, terms_used: u64) -> Self {
        SeriesResult {
            classification: Classification::Undefined { reason },
            terms_used,
        }
    }

    fn with(classification: Classification, terms_used: u64) -> Self {
        SeriesResult {
            classification,
            terms_used,
        }
    }

    /// The value of a converged series.
    pub fn value(&self) -> Option<f64> {
        match self.classification {
            Classification::Converged { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn tail_bound(&self) -> Option<f64> {
        match self.classification {
            Classification::Converged { tail_bound, .. } => Some(tail_bound),
            _ => None,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self.classification, Classification::Converged { .. })
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self.classification, Classification::Undefined { .. })
    }

    /// Value on the extended real line: divergence maps to `±∞`, undefined
    /// results to `None`.
    pub fn extended_value(&self) -> Option<f64> {
        match self.classification {
            Classification::Converged { value, .. } => Some(value),
            Classification::DivergesPositive => Some(f64::INFINITY),
            Classification::DivergesNegative => Some(f64::NEG_INFINITY),
            Classification::Undefined { .. } => None,
        }
    }

    /// Same kind of classification, ignoring values.
    pub fn same_kind(&self, other: &SeriesResult) -> bool {
        std::mem::discriminant(&self.classification)
            == std::mem::discriminant(&other.classification)
            && match (self.classification, other.classification) {
                (
                    Classification::Undefined { reason: a },
                    Classification::Undefined { reason: b },
                ) => a == b,
                _ => true,
            }
    }
}

/// Truncation controls shared by all series evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Target for the tail bound of a convergent sum.
    pub tolerance: f64,
    /// Hard cap on the number of terms.
    pub max_terms: u64,
    /// Consecutive terms inspected by the ratio test.
    pub divergence_window: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tolerance: 1e-10,
            max_terms: 10_000,
            divergence_window: 16,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tolerance: f64, max_terms: u64, divergence_window: usize) -> Result<Self> {
        let policy = TruncationPolicy {
            tolerance,
            max_terms,
            divergence_window,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        TruncationPolicy { tolerance, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.divergence_window < 2 || (self.divergence_window as u64) > self.max_terms {
            return Err(Error::InvalidParameter(format!(
                "need max_terms ({}) >= divergence_window ({}) >= 2",
                self.max_terms, self.divergence_window
            )));
        }
        Ok(())
    }
}

/// A utility function of wealth, defined on `(0, ∞)`.
#[derive(Clone)]
pub enum Utility {
    /// `ln w`
    Log,
    /// `√w`
    Sqrt,
    Custom(CustomUtility),
}

#[derive(Clone)]
pub struct CustomUtility {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl CustomUtility {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CustomUtility {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, wealth: f64) -> f64 {
        (self.f)(wealth)
    }
}

impl fmt::Debug for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Utility::Log => f.write_str("Log"),
            Utility::Sqrt => f.write_str("Sqrt"),
            Utility::Custom(c) => write!(f, "Custom({})", c.name),
        }
    }
}

impl Utility {
    pub fn eval(&self, wealth: f64) -> f64 {
        match self {
            Utility::Log => wealth.ln(),
            Utility::Sqrt => wealth.sqrt(),
            Utility::Custom(c) => c.eval(wealth),
        }
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

type TermFn<'a> = Box<dyn Fn(u64) -> Result<f64> + Send + Sync + 'a>;
type TailFn<'a> = Box<dyn Fn(u64) -> f64 + Send + Sync + 'a>;

enum Envelope<'a> {
    /// Terms past this index are zero.
    Finite(u64),
    /// Upper bound on `|Σ_{n>N} t_n|` as a function of `N`; may be infinite
    /// for small `N`.
    Tail(TailFn<'a>),
    Heuristic,
}

/// A term sequence `t_1, t_2, ...` plus what is known about its tail.
pub struct Series<'a> {
    term: TermFn<'a>,
    envelope: Envelope<'a>,
}

/// Relative slack when testing term ratios against 1.
const RATIO_SLACK: f64 = 1e-12;

impl<'a> Series<'a> {
    pub fn term(&self, n: u64) -> Result<f64> {
        (self.term)(n)
    }

    /// `Σ_{n=1}^{n_max} t_n`.
    pub fn partial_sum(&self, n_max: u64) -> Result<f64> {
        let mut acc = CompensatedSum::default();
        for n in 1..=n_max {
            acc.add(self.term(n)?);
        }
        Ok(acc.value())
    }

    pub fn evaluate(&self, policy: &TruncationPolicy) -> Result<SeriesResult> {
        policy.validate()?;
        if let Envelope::Finite(len) = self.envelope {
            if len > policy.max_terms {
                return Err(Error::TruncationInconclusive {
                    terms: policy.max_terms,
                });
            }
        }

        let mut acc = CompensatedSum::default();
        let mut window: VecDeque<f64> = VecDeque::with_capacity(policy.divergence_window);

        for n in 1..=policy.max_terms {
            if let Envelope::Finite(len) = self.envelope {
                if n > len {
                    return Ok(SeriesResult::converged(acc.value(), 0.0, len));
                }
            }
            let t = self.term(n)?;
            if t.is_nan() {
                return Err(Error::NonFiniteTerm { n });
            }
            if t == f64::INFINITY {
                return Ok(SeriesResult::with(Classification::DivergesPositive, n));
            }
            if t == f64::NEG_INFINITY {
                // only ever produced by the logarithm of a ruined wealth
                return Ok(SeriesResult::undefined(UndefinedReason::BankruptcyTerm, n));
            }
            acc.add(t);

            match &self.envelope {
                Envelope::Finite(len) => {
                    if n == *len {
                        return Ok(SeriesResult::converged(acc.value(), 0.0, n));
                    }
                }
                Envelope::Tail(bound) => {
                    let tb = bound(n);
                    if tb <= policy.tolerance {
                        return Ok(SeriesResult::converged(acc.value(), tb, n));
                    }
                }
                Envelope::Heuristic => {
                    if window.len() == policy.divergence_window {
                        window.pop_front();
                    }
                    window.push_back(t);
                    if window.len() == policy.divergence_window {
                        if let Some(c) = ratio_test(&window, acc.value(), policy.tolerance) {
                            return Ok(SeriesResult::with(c, n));
                        }
                    }
                }
            }
        }
        Err(Error::TruncationInconclusive {
            terms: policy.max_terms,
        })
    }
}

/// Classifies from a full window of recent terms, or `None` to keep going.
fn ratio_test(window: &VecDeque<f64>, partial: f64, tolerance: f64) -> Option<Classification> {
    let all_pos = window.iter().all(|&t| t > 0.0);
    let all_neg = window.iter().all(|&t| t < 0.0);
    let mut rho: f64 = 0.0;
    let mut nondecreasing = true;
    for (a, b) in window.iter().zip(window.iter().skip(1)) {
        let (a, b) = (a.abs(), b.abs());
        if b < a * (1.0 - RATIO_SLACK) {
            nondecreasing = false;
        }
        let r = if a == 0.0 {
            if b == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            b / a
        };
        rho = rho.max(r);
    }
    if nondecreasing && all_pos {
        return Some(Classification::DivergesPositive);
    }
    if nondecreasing && all_neg {
        return Some(Classification::DivergesNegative);
    }
    if rho < 1.0 {
        let last = window.back().map_or(0.0, |t| t.abs());
        let estimate = last * rho / (1.0 - rho);
        if estimate <= tolerance {
            return Some(Classification::Converged {
                value: partial,
                tail_bound: estimate,
            });
        }
    }
    None
}

fn pow_q(spec: &GambleSpec, k: u64) -> f64 {
    let q = 1.0 - spec.probability_parameter();
    if k <= i32::MAX as u64 {
        q.powi(k as i32)
    } else {
        0.0
    }
}

/// `Σ_{k≥N} x^k = x^N / (1 - x)` for `0 ≤ x < 1`.
fn geometric_tail(x: f64, from: u64) -> f64 {
    let xn = if from <= i32::MAX as u64 {
        x.powi(from as i32)
    } else {
        0.0
    };
    xn / (1.0 - x)
}

/// Bound on `Σ_{n>N} p_n ln(1 + 2^(n-1)/w)` for geometric `p_n`.
///
/// Uses `ln(1 + x) ≤ ln 2 + max(0, ln x)`, so each term is at most
/// `p q^(n-1) (A + B (n-1))` with `A = ln 2 + max(0, -ln w)` and `B = ln 2`,
/// and sums the geometric-polynomial tail in closed form.
fn bernoulli_log_tail(p: f64, wealth: f64, from: u64) -> f64 {
    let q = 1.0 - p;
    let a = LN_2 + (-wealth.ln()).max(0.0);
    let b = LN_2;
    let nf = from as f64;
    let qn = if from <= i32::MAX as u64 {
        q.powi(from as i32)
    } else {
        0.0
    };
    p * (a * qn / (1.0 - q) + b * qn * (nf * (1.0 - q) + q) / ((1.0 - q) * (1.0 - q)))
}

/// Which closed-form envelope applies to `Σ p_n g(m_n)`.
#[derive(Clone, Copy)]
enum Shape {
    /// `g(m) = ln((w - c + m) / w)`.
    Log { price: f64 },
    /// `g(m) = √(w - c + m) - √w`.
    Sqrt { price: f64 },
    /// `g(m) = m`.
    Linear,
    /// No structure known.
    Opaque,
}

fn envelope<'a>(spec: &'a GambleSpec, wealth: f64, shape: Shape, g_at_zero: f64) -> Envelope<'a> {
    let p = spec.probability_parameter();
    let q = 1.0 - p;
    match spec.payout_rule() {
        PayoutRule::Table { rows } => Envelope::Finite(rows.len() as u64),
        PayoutRule::Capped { max_payout } => {
            // every outcome past the cap pays nothing, so the tail is q^N·g(0)
            let support = capped_support(*max_payout);
            let g0 = g_at_zero.abs();
            Envelope::Tail(Box::new(move |n| {
                if n >= support {
                    if g0 == 0.0 {
                        0.0
                    } else {
                        pow_q(spec, n) * g0
                    }
                } else {
                    f64::INFINITY
                }
            }))
        }
        PayoutRule::BernoulliOriginal => match shape {
            Shape::Log { price } => Envelope::Tail(Box::new(move |n| {
                // terms past N are non-negative once 2^N ≥ c
                if gamble::bernoulli_payout(n + 1) >= price {
                    bernoulli_log_tail(p, wealth, n)
                } else {
                    f64::INFINITY
                }
            })),
            Shape::Sqrt { price } => {
                let x = q * std::f64::consts::SQRT_2;
                if x < 1.0 {
                    Envelope::Tail(Box::new(move |n| {
                        if gamble::bernoulli_payout(n + 1) >= price {
                            p * geometric_tail(x, n)
                        } else {
                            f64::INFINITY
                        }
                    }))
                } else {
                    Envelope::Heuristic
                }
            }
            Shape::Linear => {
                let x = 2.0 * q;
                if x < 1.0 {
                    Envelope::Tail(Box::new(move |n| p * geometric_tail(x, n)))
                } else {
                    Envelope::Heuristic
                }
            }
            Shape::Opaque => Envelope::Heuristic,
        },
        PayoutRule::Menger => match shape {
            Shape::Log { price } if 2.0 * q < 1.0 => {
                let x = 2.0 * q;
                // 0 ≤ ln r_n ≤ 2^n once m_n ≥ c
                Envelope::Tail(Box::new(move |n| {
                    if gamble::menger_payout(n + 1, wealth) >= price {
                        2.0 * p * geometric_tail(x, n)
                    } else {
                        f64::INFINITY
                    }
                }))
            }
            _ => Envelope::Heuristic,
        },
    }
}

/// `ln(w - c + m_n)` without overflowing where `m_n` does.
fn ln_wealth_after(state: &PlayerState, spec: &GambleSpec, n: u64) -> Result<f64> {
    let w = state.wealth();
    let c = state.ticket_price();
    Ok(match spec.payout_rule() {
        PayoutRule::Menger => w.ln() + menger_log_ratio(n, w, c),
        PayoutRule::BernoulliOriginal if n > 1000 => (n - 1) as f64 * LN_2,
        _ => {
            let after = w - c + payout(spec, n, w)?;
            if after <= 0.0 {
                f64::NEG_INFINITY
            } else {
                after.ln()
            }
        }
    })
}

impl<'a> Series<'a> {
    /// `Σ p_n m_n`.
    pub fn expected_payout(spec: &'a GambleSpec, wealth: f64) -> Series<'a> {
        let term = move |n: u64| -> Result<f64> {
            let m = payout(spec, n, wealth)?;
            if m == 0.0 {
                return Ok(0.0);
            }
            if m.is_finite() {
                let t = probability(spec, n)? * m;
                if t.is_finite() && t != 0.0 {
                    return Ok(t);
                }
            }
            // one factor under- or overflowed; go through logs
            let ln_m = match spec.payout_rule() {
                PayoutRule::Menger => wealth.ln() + gamble::menger_exponent(n),
                _ => (n - 1) as f64 * LN_2,
            };
            Ok(m.signum() * (ln_probability(spec, n)? + ln_m).exp())
        };
        Series {
            term: Box::new(term),
            envelope: envelope(spec, wealth, Shape::Linear, 0.0),
        }
    }

    /// `Σ p_n ln r_n`: the time-average exponential growth rate.
    pub fn log_growth(state: &'a PlayerState, spec: &'a GambleSpec) -> Series<'a> {
        let w = state.wealth();
        let c = state.ticket_price();
        let term = move |n: u64| -> Result<f64> {
            let g = gamble::log_growth_factor(state, spec, n)?;
            if g == f64::NEG_INFINITY {
                return Ok(g);
            }
            Ok(probability(spec, n)? * g)
        };
        let g0 = ((w - c) / w).ln();
        Series {
            term: Box::new(term),
            envelope: envelope(spec, w, Shape::Log { price: c }, g0),
        }
    }

    /// `Σ p_n (u(w - c + m_n) - u(w))`.
    pub fn utility_change(
        state: &'a PlayerState,
        spec: &'a GambleSpec,
        utility: &'a Utility,
    ) -> Series<'a> {
        let w = state.wealth();
        let c = state.ticket_price();
        let u_before = utility.eval(w);
        let term = move |n: u64| -> Result<f64> {
            let pn = probability(spec, n)?;
            match utility {
                Utility::Log => {
                    let after = ln_wealth_after(state, spec, n)?;
                    if after == f64::NEG_INFINITY {
                        return Ok(after);
                    }
                    Ok(pn * (after - u_before))
                }
                Utility::Sqrt => {
                    let ln_after = ln_wealth_after(state, spec, n)?;
                    if ln_after == f64::NEG_INFINITY {
                        return Ok(f64::NEG_INFINITY);
                    }
                    let after = (0.5 * ln_after).exp();
                    if after.is_finite() && pn > 0.0 {
                        Ok(pn * (after - u_before))
                    } else {
                        let lnp = ln_probability(spec, n)?;
                        Ok((lnp + 0.5 * ln_after).exp() - pn * u_before)
                    }
                }
                Utility::Custom(f) => {
                    let after = w - c + payout(spec, n, w)?;
                    if after <= 0.0 {
                        return Ok(f64::NEG_INFINITY);
                    }
                    let u = f.eval(after);
                    if u.is_nan() || u == f64::NEG_INFINITY {
                        return Err(Error::UtilityDomain { wealth: after });
                    }
                    Ok(pn * (u - u_before))
                }
            }
        };
        let (shape, g0) = match utility {
            Utility::Log => (Shape::Log { price: c }, (w - c).ln() - u_before),
            Utility::Sqrt => (Shape::Sqrt { price: c }, (w - c).max(0.0).sqrt() - u_before),
            Utility::Custom(f) => (Shape::Opaque, f.eval(w - c) - u_before),
        };
        Series {
            term: Box::new(term),
            envelope: envelope(spec, w, shape, g0),
        }
    }
}

/// True when some outcome leaves the player with `w - c + m_n ≤ 0`.
pub fn risks_bankruptcy(state: &PlayerState, spec: &GambleSpec) -> bool {
    let w = state.wealth();
    w - state.ticket_price() + spec.min_payout(w) <= 0.0
}

/// Ensemble-average payout `Σ p_n m_n` of one round.
pub fn expected_payout(
    spec: &GambleSpec,
    wealth: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    if !(wealth > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wealth must be positive, got {wealth}"
        )));
    }
    Series::expected_payout(spec, wealth).evaluate(policy)
}

/// Time-average exponential growth rate `ḡ = Σ p_n ln r_n`.
pub fn time_average_growth(
    state: &PlayerState,
    spec: &GambleSpec,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    policy.validate()?;
    if risks_bankruptcy(state, spec) {
        return Ok(SeriesResult::undefined(UndefinedReason::BankruptcyTerm, 0));
    }
    Series::log_growth(state, spec).evaluate(policy)
}

/// Ensemble-average exponential growth rate `⟨g⟩ = ln Σ p_n r_n`.
///
/// The inner sum is `(w - c)/w · Σ p_n + Σ p_n m_n / w`, so its
/// classification is that of the expected payout.
pub fn ensemble_average_growth(
    state: &PlayerState,
    spec: &GambleSpec,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    policy.validate()?;
    let w = state.wealth();
    let c = state.ticket_price();
    let total_probability = match spec.payout_rule() {
        PayoutRule::Table { rows } => rows.iter().map(|r| r.probability).sum(),
        _ => 1.0,
    };
    let inner_of = |payout: &SeriesResult| -> Option<(f64, f64)> {
        match payout.classification {
            Classification::Converged { value, tail_bound } => {
                Some(((w - c) / w * total_probability + value / w, tail_bound / w))
            }
            _ => None,
        }
    };

    let payout = expected_payout(spec, w, policy)?;
    let (inner, inner_tail) = match inner_of(&payout) {
        Some(v) => v,
        None => return Ok(payout),
    };
    if inner <= 0.0 {
        return Ok(SeriesResult::undefined(
            UndefinedReason::NonpositiveLogArgument,
            payout.terms_used,
        ));
    }
    // |ln(x + e) - ln x| ≤ e / (x - e); tighten the inner sum if that misses
    let log_tail = |x: f64, e: f64| if e < x { e / (x - e) } else { f64::INFINITY };
    let mut result = (inner, inner_tail, payout.terms_used);
    if log_tail(inner, inner_tail) > policy.tolerance {
        let tighter = policy.with_tolerance(policy.tolerance * w * inner / 4.0);
        let payout = expected_payout(spec, w, &tighter)?;
        if let Some((x, e)) = inner_of(&payout) {
            result = (x, e, payout.terms_used);
        }
    }
    let (inner, inner_tail, terms) = result;
    if inner <= 0.0 {
        return Ok(SeriesResult::undefined(
            UndefinedReason::NonpositiveLogArgument,
            terms,
        ));
    }
    Ok(SeriesResult::converged(
        inner.ln(),
        log_tail(inner, inner_tail),
        terms,
    ))
}

/// Expected change in utility `Σ p_n (u(w - c + m_n) - u(w))`.
pub fn expected_utility_change(
    state: &PlayerState,
    spec: &GambleSpec,
    utility: &Utility,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    policy.validate()?;
    let u_before = utility.eval(state.wealth());
    if !u_before.is_finite() {
        return Err(Error::UtilityDomain {
            wealth: state.wealth(),
        });
    }
    if risks_bankruptcy(state, spec) {
        return Ok(SeriesResult::undefined(UndefinedReason::BankruptcyTerm, 0));
    }
    Series::utility_change(state, spec, utility).evaluate(policy)
}

/// Left-hand side of the two-step stake condition:
/// `Σ p_n (ln(w + m_n) - ln w) - [ln w - ln(w - c)]`.
///
/// The ticket price does not enter the per-outcome terms; it is charged once
/// as the utility lost at purchase, which is undefined for `c ≥ w`.
pub fn bernoulli_literal_lhs(
    state: &PlayerState,
    spec: &GambleSpec,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    policy.validate()?;
    let w = state.wealth();
    let c = state.ticket_price();
    if c >= w {
        return Ok(SeriesResult::undefined(
            UndefinedReason::NonpositiveLogArgument,
            0,
        ));
    }
    let gain = bernoulli_gain(w, spec, policy)?;
    let purchase_loss = -(-c / w).ln_1p();
    Ok(match gain.classification {
        Classification::Converged { value, tail_bound } => {
            SeriesResult::converged(value - purchase_loss, tail_bound, gain.terms_used)
        }
        _ => gain,
    })
}

/// Expected log-utility gain of a free ticket, `Σ p_n (ln(w + m_n) - ln w)`.
pub fn bernoulli_gain(
    wealth: f64,
    spec: &GambleSpec,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let free = PlayerState::new(wealth, 0.0)?;
    time_average_growth(&free, spec, policy)
}
