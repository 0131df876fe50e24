use std::collections::BTreeMap;

use petersburg::criteria::{self, Recommendation};
use petersburg::gamble;
use petersburg::montecarlo::{self, MengerWealth, SampleStats, SimulationConfig};
use petersburg::series;
use petersburg::{Classification, GambleSpec, PlayerState, SeriesResult, TruncationPolicy};
use serde_json::{json, Value};

use crate::output::{num, opt_num, OutputEnvelope, Table};
use crate::{
    BreakevenArgs, EvaluateArgs, Failure, Format, MengerArgs, MengerWealthArg, Mode, Outcome,
    Shared, SimulateArgs,
};

/// Price grid for the `menger` command, as multiples of wealth.
const MENGER_PRICE_FRACTIONS: [f64; 9] = [0.0, 0.5, 0.9, 0.999, 1.0, 2.0, 5.0, 7.0, 8.0];

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(Failure::usage)
}

pub fn parse_payout(arg: &str, geom_p: f64) -> Result<GambleSpec, Failure> {
    let spec = match arg.split_once(':') {
        None if arg == "bernoulli" => GambleSpec::bernoulli(),
        None if arg == "menger" => GambleSpec::menger(),
        Some(("capped", cap)) => {
            let cap: f64 = cap
                .parse()
                .map_err(|_| Failure::usage(format!("invalid cap '{cap}'")))?;
            GambleSpec::capped(cap)?
        }
        Some(("table", path)) => return Ok(gamble::load_table_csv(path)?),
        _ => {
            return Err(Failure::usage(format!(
                "unknown payout '{arg}' (expected bernoulli, menger, capped:<X> or table:<path>)"
            )))
        }
    };
    Ok(spec.with_probability_parameter(geom_p)?)
}

fn policy(shared: &Shared) -> Result<TruncationPolicy, Failure> {
    let d = TruncationPolicy::default();
    Ok(TruncationPolicy::new(
        shared.tol,
        shared.max_terms,
        d.divergence_window.min(shared.max_terms as usize),
    )?)
}

fn shared_parameters(shared: &Shared) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    p.insert("payout".into(), json!(shared.payout));
    p.insert("geom_p".into(), json!(shared.geom_p));
    p.insert("tol".into(), json!(shared.tol));
    p.insert("max_terms".into(), json!(shared.max_terms));
    p.insert("format".into(), json!(format_name(shared.format)));
    p.insert("seed".into(), json!(shared.seed));
    p
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn kind(r: &SeriesResult) -> &'static str {
    match r.classification {
        Classification::Converged { .. } => "Converged",
        Classification::DivergesPositive => "DivergesPositive",
        Classification::DivergesNegative => "DivergesNegative",
        Classification::Undefined { .. } => "Undefined",
    }
}

fn reason(r: &SeriesResult) -> String {
    match r.classification {
        Classification::Undefined { reason } => format!("{reason:?}"),
        _ => String::new(),
    }
}

fn recommendation_name(r: Recommendation) -> String {
    format!("{r:?}")
}

fn series_row(name: &str, r: &SeriesResult) -> Vec<String> {
    vec![
        name.to_string(),
        kind(r).to_string(),
        reason(r),
        opt_num(r.value()),
        opt_num(r.tail_bound()),
        r.terms_used.to_string(),
    ]
}

pub fn evaluate(a: &EvaluateArgs) -> Result<Outcome, Failure> {
    let spec = parse_payout(&a.shared.payout, a.shared.geom_p)?;
    let state = PlayerState::new(a.wealth, a.price)?;
    let report = criteria::evaluate(&state, &spec, &policy(&a.shared)?)?;
    let code = if report.recommendation == Recommendation::Undefined {
        2
    } else {
        0
    };

    let text = match a.shared.format {
        Format::Json => {
            let mut p = shared_parameters(&a.shared);
            p.insert("wealth".into(), json!(a.wealth));
            p.insert("price".into(), json!(a.price));
            OutputEnvelope::new("evaluate", p, to_value(&report)?).to_json()?
        }
        Format::Csv => {
            let mut t = Table::new(&[
                "criterion",
                "classification",
                "reason",
                "value",
                "tail_bound",
                "terms_used",
            ]);
            t.row(series_row(
                "naive_expected_payout",
                &report.naive_expected_payout,
            ));
            t.row(series_row("ensemble_growth", &report.ensemble_growth));
            t.row(series_row("time_growth", &report.time_growth));
            t.row(series_row("bernoulli_literal", &report.bernoulli_literal));
            t.row(vec![
                "recommendation".into(),
                recommendation_name(report.recommendation),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]);
            t.finish()
        }
    };
    Ok(Outcome { text, code })
}

pub fn breakeven(a: &BreakevenArgs) -> Result<Outcome, Failure> {
    let spec = parse_payout(&a.shared.payout, a.shared.geom_p)?;
    let policy = policy(&a.shared)?;
    let mut p = shared_parameters(&a.shared);
    p.insert("wmin".into(), json!(a.wmin));
    p.insert("wmax".into(), json!(a.wmax));
    p.insert("points".into(), json!(a.points));
    p.insert("inset".into(), json!(a.inset));
    p.insert("solver_tol".into(), json!(a.solver_tol));
    if let Some(price) = a.price {
        p.insert("price".into(), json!(price));
    }

    if a.inset {
        let price = a.price.expect("clap enforces --price with --inset");
        if !(a.wmin > 0.0 && a.wmin < a.wmax && a.wmax.is_finite()) || a.points < 2 {
            return Err(Failure::usage("need 0 < wmin < wmax and points >= 2"));
        }
        let mut rows = Vec::with_capacity(a.points);
        for w in criteria::log_spaced(a.wmin, a.wmax, a.points) {
            let state = PlayerState::new(w, price)?;
            rows.push((w, series::time_average_growth(&state, &spec, &policy)?));
        }
        let text = match a.shared.format {
            Format::Json => {
                let points: Vec<Value> = rows
                    .iter()
                    .map(|(w, g)| json!({ "wealth": w, "g_bar": g.value(), "time_growth": g }))
                    .collect();
                OutputEnvelope::new("breakeven", p, json!({ "inset": points })).to_json()?
            }
            Format::Csv => {
                let mut t = Table::new(&["wealth", "g_bar"]);
                for (w, g) in &rows {
                    t.row(vec![num(*w), opt_num(g.value())]);
                }
                t.finish()
            }
        };
        return Ok(Outcome { text, code: 0 });
    }

    let curve = criteria::breakeven_curve(a.wmin, a.wmax, a.points, &spec, &policy, a.solver_tol)?;
    if !curve.failures.is_empty() {
        eprintln!(
            "warning: solver failed at {} of {} points",
            curve.failures.len(),
            a.points
        );
    }
    let text = match a.shared.format {
        Format::Json => OutputEnvelope::new("breakeven", p, to_value(&curve)?).to_json()?,
        Format::Csv => {
            let mut rows: Vec<(f64, Option<f64>)> = curve
                .points
                .iter()
                .map(|pt| (pt.wealth, Some(pt.breakeven_price)))
                .chain(curve.failures.iter().map(|f| (f.wealth, None)))
                .collect();
            rows.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut t = Table::new(&["wealth", "breakeven_price"]);
            for (w, c) in rows {
                t.row(vec![num(w), opt_num(c)]);
            }
            t.finish()
        }
    };
    Ok(Outcome { text, code: 0 })
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Time => "time",
        Mode::Ensemble => "ensemble",
        Mode::Subinterval => "subinterval",
    }
}

fn stats_csv(mode: Mode, s: &SampleStats) -> String {
    let mut t = Table::new(&[
        "mode",
        "estimate",
        "stderr",
        "stderr_reliable",
        "count",
        "max_n",
    ]);
    t.row(vec![
        mode_name(mode).into(),
        num(s.estimate),
        num(s.stderr),
        s.stderr_reliable.to_string(),
        s.count.to_string(),
        s.max_n.to_string(),
    ]);
    t.finish()
}

pub fn simulate(a: &SimulateArgs) -> Result<Outcome, Failure> {
    let spec = parse_payout(&a.shared.payout, a.shared.geom_p)?;
    let state = PlayerState::new(a.wealth, a.price)?;
    let workers = match a.workers {
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let config = SimulationConfig {
        seed: a.shared.seed,
        rounds: a.rounds,
        samples: a.samples,
        subintervals: a.subintervals,
        workers,
        menger_wealth: match a.menger_wealth {
            MengerWealthArg::PerRound => MengerWealth::PerRound,
            MengerWealthArg::Initial => MengerWealth::Initial,
        },
    };

    // worker count is deliberately not recorded: output must not depend on it
    let mut p = shared_parameters(&a.shared);
    p.insert("mode".into(), json!(mode_name(a.mode)));
    p.insert("wealth".into(), json!(a.wealth));
    p.insert("price".into(), json!(a.price));
    match a.mode {
        Mode::Time => {
            p.insert("rounds".into(), json!(a.rounds));
            p.insert("path".into(), json!(a.path));
        }
        Mode::Ensemble => {
            p.insert("samples".into(), json!(a.samples));
        }
        Mode::Subinterval => {
            p.insert("subintervals".into(), json!(a.subintervals));
        }
    }
    if matches!(spec.payout_rule(), petersburg::PayoutRule::Menger) {
        p.insert(
            "menger_wealth".into(),
            json!(match a.menger_wealth {
                MengerWealthArg::PerRound => "per-round",
                MengerWealthArg::Initial => "initial",
            }),
        );
    }

    let envelope = |results: Value| OutputEnvelope::new("simulate", p.clone(), results);

    match a.mode {
        Mode::Time => {
            let traj = montecarlo::simulate_trajectory(&state, &spec, &config)?;
            let stats = montecarlo::time_average_estimate(&traj);
            let code = if traj.bankrupt_at.is_some() { 2 } else { 0 };
            if let Some(round) = traj.bankrupt_at {
                eprintln!("warning: bankrupt after round {round}");
            }
            let text = match (a.shared.format, a.path) {
                (Format::Csv, true) => {
                    let mut t = Table::new(&["round", "wealth"]);
                    for (i, w) in traj.wealth_path.iter().enumerate() {
                        t.row(vec![i.to_string(), num(*w)]);
                    }
                    t.finish()
                }
                (Format::Csv, false) => match &stats {
                    Ok(s) => stats_csv(a.mode, s),
                    Err(_) => {
                        let mut t = Table::new(&["mode", "bankrupt_at"]);
                        t.row(vec![
                            "time".into(),
                            traj.bankrupt_at.unwrap_or_default().to_string(),
                        ]);
                        t.finish()
                    }
                },
                (Format::Json, _) => {
                    let mut results = serde_json::Map::new();
                    match &stats {
                        Ok(s) => {
                            results.insert("stats".into(), to_value(s)?);
                        }
                        Err(e) => {
                            results.insert("error".into(), json!(e.to_string()));
                        }
                    }
                    results.insert("bankrupt_at".into(), json!(traj.bankrupt_at));
                    if a.path {
                        results.insert("wealth_path".into(), json!(traj.wealth_path));
                        results.insert("log_wealth_path".into(), json!(traj.log_wealth_path));
                    }
                    envelope(Value::Object(results)).to_json()?
                }
            };
            Ok(Outcome { text, code })
        }
        Mode::Ensemble | Mode::Subinterval => {
            let stats = if a.mode == Mode::Ensemble {
                montecarlo::ensemble_average_estimate(&state, &spec, &config)
            } else {
                montecarlo::subinterval_estimate(&state, &spec, &config)
            };
            let stats = match stats {
                Ok(s) => s,
                Err(e @ petersburg::Error::NonpositiveReturn { .. }) => {
                    return Err(Failure {
                        code: 2,
                        message: e.to_string(),
                    })
                }
                Err(e) => return Err(e.into()),
            };
            let text = match a.shared.format {
                Format::Csv => stats_csv(a.mode, &stats),
                Format::Json => envelope(json!({ "stats": stats })).to_json()?,
            };
            Ok(Outcome { text, code: 0 })
        }
    }
}

pub fn menger(a: &MengerArgs) -> Result<Outcome, Failure> {
    let w = a.wealth;
    if !(w > 0.0 && w.is_finite()) {
        return Err(Failure::usage("--wealth must be positive and finite"));
    }
    let spec = GambleSpec::menger().with_probability_parameter(a.shared.geom_p)?;
    let policy = policy(&a.shared)?;

    let mut grid = Vec::new();
    for f in MENGER_PRICE_FRACTIONS {
        let c = f * w;
        let state = PlayerState::new(w, c)?;
        let literal = series::bernoulli_literal_lhs(&state, &spec, &policy)?;
        let time = series::time_average_growth(&state, &spec, &policy)?;
        grid.push((c, literal, time, criteria::recommend(&time)));
    }
    let closed = criteria::menger_partial_sum_price(w, a.nmax)?;
    let numeric = criteria::menger_partial_sum_root(w, a.nmax)?;
    let shortfall = criteria::menger_partial_sum_shortfall(w, a.nmax);
    let boundary = w + spec.min_payout(w);

    let text = match a.shared.format {
        Format::Json => {
            let mut p = shared_parameters(&a.shared);
            p.insert("wealth".into(), json!(w));
            p.insert("nmax".into(), json!(a.nmax));
            let rows: Vec<Value> = grid
                .iter()
                .map(|(c, lit, time, rec)| {
                    json!({
                        "price": c,
                        "bernoulli_literal": lit,
                        "time_growth": time,
                        "recommendation": rec,
                    })
                })
                .collect();
            let results = json!({
                "price_grid": rows,
                "bankruptcy_price": boundary,
                "partial_sum": {
                    "n_max": a.nmax,
                    "price": closed,
                    "shortfall": shortfall,
                    "numeric_root": numeric,
                    "difference": closed - numeric,
                },
            });
            OutputEnvelope::new("menger", p, results).to_json()?
        }
        Format::Csv => {
            let mut t = Table::new(&[
                "price",
                "bernoulli_literal",
                "time_growth",
                "recommendation",
            ]);
            for (c, lit, time, rec) in &grid {
                t.row(vec![
                    num(*c),
                    kind(lit).into(),
                    kind(time).into(),
                    recommendation_name(*rec),
                ]);
            }
            t.finish()
        }
    };
    Ok(Outcome { text, code: 0 })
}
