//! The St. Petersburg lottery under ensemble-average, time-average and
//! utility-based criteria.
//!
//! * [`gamble`] - payout and probability rules, growth factors.
//! * [`series`] - the infinite sums behind each criterion, with tail bounds
//!   and divergence classification.
//! * [`criteria`] - decision reports, break-even prices, the two-step stake
//!   condition.
//! * [`montecarlo`] - seeded simulation of the time-average, ensemble-average
//!   and sub-interval estimators.
//!
//! ```
//! use petersburg::{criteria, GambleSpec, PlayerState, TruncationPolicy};
//!
//! let state = PlayerState::new(100.0, 2.0).unwrap();
//! let report = criteria::evaluate(&state, &GambleSpec::bernoulli(), &TruncationPolicy::default()).unwrap();
//! assert_eq!(report.recommendation, criteria::Recommendation::Buy);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod error;
pub mod gamble;
pub mod montecarlo;
pub mod series;

pub use error::{Error, Result};
pub use gamble::{GambleSpec, PayoutRule, PlayerState, TableRow};
pub use series::{Classification, SeriesResult, TruncationPolicy, UndefinedReason, Utility};
