//! Library results against a brute-force summation oracle and values frozen
//! from a 40-digit evaluation of the same sums.

use petersburg::criteria::{self, Stake};
use petersburg::series::{self, Utility};
use petersburg::{GambleSpec, PlayerState, TruncationPolicy};

/// ḡ(100, 2) for the fair-coin lottery.
const G_BAR_100_2: f64 = 0.023_483_493_674_154_466;
/// Expected change of √w at w = 100, c = 2.
const SQRT_CHANGE_100_2: f64 = 0.166_173_985_552_501_93;
/// c* with ḡ(w, c*) = 0.
const BREAKEVEN: [(f64, f64); 4] = [
    (10.0, 2.883_761_824_581_901),
    (100.0, 4.360_194_029_785_506),
    (1000.0, 5.968_017_344_459_7),
    (10000.0, 7.617_581_141_116_640_2),
];
/// Bernoulli's stake at w = 100.
const STAKE_100: f64 = 4.204_809_016_721_878;

/// Plain sum of `p_n f(n)` for n = 1..1000, smallest terms first.
fn brute<F: Fn(f64) -> f64>(f: F) -> f64 {
    (1..=1000)
        .rev()
        .map(|n| 0.5f64.powi(n) * f(2f64.powi(n - 1)))
        .sum()
}

fn brute_g_bar(w: f64, c: f64) -> f64 {
    brute(|m| ((w - c + m) / w).ln())
}

fn brute_breakeven(w: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, w + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if brute_g_bar(w, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn policy() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn g_bar(w: f64, c: f64) -> f64 {
    let s = PlayerState::new(w, c).unwrap();
    series::time_average_growth(&s, &GambleSpec::bernoulli(), &policy())
        .unwrap()
        .value()
        .unwrap()
}

#[test]
fn oracle_reproduces_frozen_growth() {
    assert!((brute_g_bar(100.0, 2.0) - G_BAR_100_2).abs() < 1e-15);
}

#[test]
fn time_growth_matches_oracle() {
    let d = g_bar(100.0, 2.0) - G_BAR_100_2;
    assert!(d.abs() <= 1e-10, "{d}");
    let tight = series::time_average_growth(
        &PlayerState::new(100.0, 2.0).unwrap(),
        &GambleSpec::bernoulli(),
        &policy().with_tolerance(1e-15),
    )
    .unwrap();
    let d = tight.value().unwrap() - G_BAR_100_2;
    assert!(d.abs() < 1e-15, "{d}");
    for &(w, c) in &[(2.0, 0.5), (7.3, 3.1), (1e3, 6.0), (1e6, 20.0), (1.01, 1.5)] {
        let (lib, oracle) = (g_bar(w, c), brute_g_bar(w, c));
        assert!(
            (lib - oracle).abs() < 1e-10,
            "w={w} c={c}: {lib} vs {oracle}"
        );
    }
}

#[test]
fn sqrt_utility_matches_oracle() {
    let s = PlayerState::new(100.0, 2.0).unwrap();
    let r =
        series::expected_utility_change(&s, &GambleSpec::bernoulli(), &Utility::Sqrt, &policy())
            .unwrap();
    let v = r.value().unwrap();
    assert!((v - SQRT_CHANGE_100_2).abs() < 1e-10, "{v}");
    let oracle = brute(|m| (100.0 - 2.0 + m).sqrt() - 10.0);
    assert!((oracle - SQRT_CHANGE_100_2).abs() < 1e-13);
}

#[test]
fn breakeven_matches_oracle_and_frozen_values() {
    for &(w, frozen) in &BREAKEVEN {
        let c = criteria::breakeven_price(w, &GambleSpec::bernoulli(), &policy(), 1e-10).unwrap();
        assert!((c - frozen).abs() < 1e-8, "w={w}: {c} vs {frozen}");
        assert!((brute_breakeven(w) - frozen).abs() < 1e-8);
    }
}

#[test]
fn stake_matches_frozen_value() {
    match criteria::bernoulli_stake(100.0, &GambleSpec::bernoulli(), &policy(), 1e-12).unwrap() {
        Stake::Price(c) => assert!((c - STAKE_100).abs() < 1e-9, "{c}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn literal_lhs_matches_oracle() {
    let (w, c) = (100.0, 3.0);
    let s = PlayerState::new(w, c).unwrap();
    let lhs = series::bernoulli_literal_lhs(&s, &GambleSpec::bernoulli(), &policy())
        .unwrap()
        .value()
        .unwrap();
    let oracle = brute(|m| (w + m).ln() - w.ln()) - (w.ln() - (w - c).ln());
    assert!((lhs - oracle).abs() < 1e-10);
}

#[test]
fn capped_expectation_is_fifteen() {
    let r = series::expected_payout(&GambleSpec::capped(1e9).unwrap(), 100.0, &policy()).unwrap();
    assert!((r.value().unwrap() - 15.0).abs() <= 1e-12);
}
