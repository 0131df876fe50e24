//! Gamble specifications and per-outcome quantities.
//!
//! A round of the lottery draws a waiting time `n ≥ 1` (the toss on which
//! the first head appears). The payout rule maps `n` to a payout `m_n`, and
//! the probability rule assigns `p_n`. For geometric rules with parameter
//! `p`, `p_n = (1 - p)^(n-1) p`; table rules list `(p_n, m_n)` explicitly.
//!
//! A player with wealth `w` who pays `c` for a ticket ends the round with
//! `w - c + m_n`, i.e. wealth is multiplied by the growth factor
//! `r_n = (w - c + m_n) / w`.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ p_n = 1` for table gambles.
pub const TABLE_SUM_TOLERANCE: f64 = 1e-9;

/// Default geometric parameter: a fair coin.
pub const FAIR_COIN: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub probability: f64,
    pub payout: f64,
}

/// How the payout depends on the waiting time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum PayoutRule {
    /// `m_n = 2^(n-1)`.
    BernoulliOriginal,
    /// `m_n = w·exp(2^n) - w`, scaled by the wealth the round is played with.
    Menger,
    /// `m_n = 2^(n-1)` while that does not exceed `max_payout`; larger
    /// prizes cannot be honoured and pay nothing.
    Capped { max_payout: f64 },
    /// Row `n` (1-based) holds `(p_n, m_n)`.
    Table { rows: Vec<TableRow> },
}

/// One round of a gamble: a payout rule plus its probability rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GambleSpec {
    payout_rule: PayoutRule,
    probability_parameter: f64,
}

impl GambleSpec {
    pub fn new(payout_rule: PayoutRule, probability_parameter: f64) -> Result<Self> {
        if !(probability_parameter > 0.0 && probability_parameter < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "geometric parameter must lie in (0, 1), got {probability_parameter}"
            )));
        }
        match &payout_rule {
            PayoutRule::Capped { max_payout } => {
                if !(max_payout.is_finite() && *max_payout > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "payout cap must be positive and finite, got {max_payout}"
                    )));
                }
            }
            PayoutRule::Table { rows } => validate_table(rows)?,
            PayoutRule::BernoulliOriginal | PayoutRule::Menger => {}
        }
        Ok(GambleSpec {
            payout_rule,
            probability_parameter,
        })
    }

    /// The original lottery with a fair coin.
    pub fn bernoulli() -> Self {
        GambleSpec {
            payout_rule: PayoutRule::BernoulliOriginal,
            probability_parameter: FAIR_COIN,
        }
    }

    pub fn menger() -> Self {
        GambleSpec {
            payout_rule: PayoutRule::Menger,
            probability_parameter: FAIR_COIN,
        }
    }

    pub fn capped(max_payout: f64) -> Result<Self> {
        Self::new(PayoutRule::Capped { max_payout }, FAIR_COIN)
    }

    pub fn table(rows: Vec<TableRow>) -> Result<Self> {
        Self::new(PayoutRule::Table { rows }, FAIR_COIN)
    }

    /// Same payout rule with a different geometric parameter.
    pub fn with_probability_parameter(self, p: f64) -> Result<Self> {
        Self::new(self.payout_rule, p)
    }

    pub fn payout_rule(&self) -> &PayoutRule {
        &self.payout_rule
    }

    pub fn probability_parameter(&self) -> f64 {
        self.probability_parameter
    }

    /// Number of outcomes for table gambles; `None` for the geometric rules.
    pub fn support_len(&self) -> Option<usize> {
        match &self.payout_rule {
            PayoutRule::Table { rows } => Some(rows.len()),
            _ => None,
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self.payout_rule, PayoutRule::Table { .. })
    }

    /// Smallest payout over the support. Payouts of the geometric rules are
    /// nondecreasing in `n` except for the forfeited prizes of `Capped`.
    pub fn min_payout(&self, wealth: f64) -> f64 {
        match &self.payout_rule {
            PayoutRule::BernoulliOriginal => 1.0,
            PayoutRule::Menger => menger_payout(1, wealth),
            // some n always has a prize above the cap
            PayoutRule::Capped { .. } => 0.0,
            PayoutRule::Table { rows } => {
                rows.iter().map(|r| r.payout).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

impl Default for GambleSpec {
    fn default() -> Self {
        Self::bernoulli()
    }
}

fn validate_table(rows: &[TableRow]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidTable("table has no rows".into()));
    }
    for (i, row) in rows.iter().enumerate() {
        if !(row.probability > 0.0 && row.probability.is_finite()) {
            return Err(Error::InvalidTable(format!(
                "row {}: probability must be strictly positive, got {}",
                i + 1,
                row.probability
            )));
        }
        if !row.payout.is_finite() {
            return Err(Error::InvalidTable(format!(
                "row {}: payout must be finite, got {}",
                i + 1,
                row.payout
            )));
        }
    }
    let total: f64 = rows.iter().map(|r| r.probability).sum();
    if (total - 1.0).abs() > TABLE_SUM_TOLERANCE {
        return Err(Error::InvalidTable(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Reads a `probability,payout` CSV with a header row.
pub fn read_table_csv<R: Read>(reader: R) -> Result<Vec<TableRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 {
        return Err(Error::InvalidTable(format!(
            "expected 2 columns (probability,payout), found {}",
            headers.len()
        )));
    }
    let mut rows = Vec::new();
    for record in rdr.deserialize() {
        let (probability, payout): (f64, f64) = record?;
        rows.push(TableRow {
            probability,
            payout,
        });
    }
    Ok(rows)
}

pub fn load_table_csv(path: impl AsRef<Path>) -> Result<GambleSpec> {
    let file = std::fs::File::open(path)?;
    GambleSpec::table(read_table_csv(file)?)
}

/// The player's wealth `w` and the ticket price `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerState {
    wealth: f64,
    ticket_price: f64,
}

impl PlayerState {
    pub fn new(wealth: f64, ticket_price: f64) -> Result<Self> {
        if !(wealth > 0.0 && wealth.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "wealth must be positive and finite, got {wealth}"
            )));
        }
        if !(ticket_price >= 0.0 && ticket_price.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ticket price must be non-negative and finite, got {ticket_price}"
            )));
        }
        Ok(PlayerState {
            wealth,
            ticket_price,
        })
    }

    pub fn wealth(&self) -> f64 {
        self.wealth
    }

    pub fn ticket_price(&self) -> f64 {
        self.ticket_price
    }

    pub fn with_wealth(&self, wealth: f64) -> Result<Self> {
        Self::new(wealth, self.ticket_price)
    }

    pub fn with_price(&self, ticket_price: f64) -> Result<Self> {
        Self::new(self.wealth, ticket_price)
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("waiting time starts at 1".into()));
    }
    Ok(())
}

fn table_row(rows: &[TableRow], n: u64) -> Result<TableRow> {
    usize::try_from(n - 1)
        .ok()
        .and_then(|i| rows.get(i).copied())
        .ok_or(Error::OutOfSupport { n, len: rows.len() })
}

/// `2^(n-1)`; saturates to infinity past the f64 range.
pub(crate) fn bernoulli_payout(n: u64) -> f64 {
    let e = (n - 1).min(i32::MAX as u64) as i32;
    2f64.powi(e)
}

pub(crate) fn menger_payout(n: u64, wealth: f64) -> f64 {
    wealth * menger_exponent(n).exp_m1()
}

/// `2^n`, the exponent in the Menger payout.
pub(crate) fn menger_exponent(n: u64) -> f64 {
    2f64.powi(n.min(i32::MAX as u64) as i32)
}

/// Largest `n` whose prize `2^(n-1)` does not exceed the cap (0 if none).
pub(crate) fn capped_support(max_payout: f64) -> u64 {
    if max_payout < 1.0 {
        return 0;
    }
    let mut n = max_payout.log2().floor() as u64 + 1;
    // log2 may round across an exact power of two
    while bernoulli_payout(n + 1) <= max_payout {
        n += 1;
    }
    while n > 0 && bernoulli_payout(n) > max_payout {
        n -= 1;
    }
    n
}

/// Payout `m_n` for waiting time `n`. The wealth argument only matters for
/// the Menger rule.
pub fn payout(spec: &GambleSpec, n: u64, wealth: f64) -> Result<f64> {
    check_n(n)?;
    Ok(match &spec.payout_rule {
        PayoutRule::BernoulliOriginal => bernoulli_payout(n),
        PayoutRule::Menger => menger_payout(n, wealth),
        PayoutRule::Capped { max_payout } => {
            let m = bernoulli_payout(n);
            if m <= *max_payout {
                m
            } else {
                0.0
            }
        }
        PayoutRule::Table { rows } => table_row(rows, n)?.payout,
    })
}

/// Probability `p_n` of waiting time `n`.
pub fn probability(spec: &GambleSpec, n: u64) -> Result<f64> {
    check_n(n)?;
    match &spec.payout_rule {
        PayoutRule::Table { rows } => Ok(table_row(rows, n)?.probability),
        _ => Ok(geometric_probability(spec.probability_parameter, n)),
    }
}

pub(crate) fn geometric_probability(p: f64, n: u64) -> f64 {
    let k = n - 1;
    if k <= i32::MAX as u64 {
        p * (1.0 - p).powi(k as i32)
    } else {
        (p.ln() + k as f64 * (-p).ln_1p()).exp()
    }
}

/// `ln p_n`, finite even where `p_n` underflows.
pub(crate) fn ln_probability(spec: &GambleSpec, n: u64) -> Result<f64> {
    match &spec.payout_rule {
        PayoutRule::Table { .. } => Ok(probability(spec, n)?.ln()),
        _ => {
            check_n(n)?;
            let p = spec.probability_parameter;
            Ok(p.ln() + (n - 1) as f64 * (-p).ln_1p())
        }
    }
}

/// Growth factor `r_n = (w - c + m_n) / w`. Zero or negative factors are
/// returned as-is; they mark bankrupting outcomes.
pub fn growth_factor(state: &PlayerState, spec: &GambleSpec, n: u64) -> Result<f64> {
    let w = state.wealth;
    let c = state.ticket_price;
    let m = payout(spec, n, w)?;
    Ok((w - c + m) / w)
}

/// `ln r_n`, evaluated without forming `r_n` where that would overflow.
/// Returns negative infinity for bankrupting outcomes (`r_n ≤ 0`).
pub fn log_growth_factor(state: &PlayerState, spec: &GambleSpec, n: u64) -> Result<f64> {
    let w = state.wealth;
    let c = state.ticket_price;
    check_n(n)?;
    let value = match &spec.payout_rule {
        PayoutRule::Menger => menger_log_ratio(n, w, c),
        PayoutRule::BernoulliOriginal if n > 1000 => {
            // 2^(n-1) dwarfs w - c; keep everything in log space.
            (n - 1) as f64 * std::f64::consts::LN_2 - w.ln()
        }
        _ => {
            let m = payout(spec, n, w)?;
            let after = (w - c) + m;
            let r = after / w;
            if after <= 0.0 {
                f64::NEG_INFINITY
            } else if (0.5..=2.0).contains(&r) {
                ((m - c) / w).ln_1p()
            } else if r.is_finite() {
                // near bankruptcy (m - c)/w ≈ -1 and ln1p would amplify its rounding
                r.ln()
            } else {
                after.ln() - w.ln()
            }
        }
    };
    Ok(value)
}

/// `ln((w - c + w·(exp(2^n) - 1)) / w) = 2^n + ln(1 - (c/w)·exp(-2^n))`.
pub(crate) fn menger_log_ratio(n: u64, wealth: f64, price: f64) -> f64 {
    let e = menger_exponent(n);
    let shortfall = price / wealth * (-e).exp();
    if shortfall >= 1.0 {
        f64::NEG_INFINITY
    } else {
        e + (-shortfall).ln_1p()
    }
}
