use std::fmt::Write as _;

use anyhow::Context;
use jndbem::psychometrics::{
    analyze as analyze_log, build_schedule, estimate_jnd, parse_responses, CurvePoint, JndEstimate, Side,
    TrialSchedule,
};
use serde::Serialize;
use std::collections::BTreeMap;

use crate::args::{JndAnalyzeArgs, StimuliArgs};
use crate::io::{read_bytes, write_file};
use crate::{to_json, usage, CliResult};

#[derive(Debug, Serialize)]
struct StimuliSummary {
    out: String,
    trials: usize,
    conditions: usize,
    trials_per_condition: u32,
    seed: u64,
}

pub fn stimuli(args: &StimuliArgs) -> CliResult<String> {
    let schedule = build_schedule(args.trials_per_condition, args.seed).map_err(|e| usage(e.to_string()))?;
    write_file(&args.out, to_json(&schedule).as_bytes())?;
    let summary = StimuliSummary {
        out: args.out.display().to_string(),
        trials: schedule.trials.len(),
        conditions: schedule.trials.len() / args.trials_per_condition as usize,
        trials_per_condition: args.trials_per_condition,
        seed: args.seed,
    };
    Ok(to_json(&summary))
}

#[derive(Debug, Serialize)]
pub struct JndReport {
    pub schedule_seed: u64,
    pub responses: usize,
    pub curve: Vec<CurvePoint>,
    pub by_side: BTreeMap<Side, Vec<CurvePoint>>,
    pub estimate: JndEstimate,
}

pub fn analyze(args: &JndAnalyzeArgs) -> CliResult<String> {
    let schedule: TrialSchedule = serde_json::from_slice(&read_bytes(&args.schedule)?)
        .with_context(|| format!("{}: invalid schedule", args.schedule.display()))?;
    let text = String::from_utf8(read_bytes(&args.responses)?)
        .with_context(|| format!("{}: not UTF-8", args.responses.display()))?;
    let log = parse_responses(&text).with_context(|| args.responses.display().to_string())?;
    let curve = analyze_log(&schedule, &log)
        .with_context(|| format!("analysing {} against {}", args.responses.display(), args.schedule.display()))?;
    let estimate = estimate_jnd(&curve).context("estimating JND")?;

    let report = JndReport {
        schedule_seed: schedule.meta.seed,
        responses: log.len(),
        curve: curve.points,
        by_side: curve.by_side,
        estimate,
    };
    Ok(if args.pretty { pretty(&report) } else { to_json(&report) })
}

fn pretty(r: &JndReport) -> String {
    let mut s = String::new();
    writeln!(s, "distance  n  chosen  proportion  monotone").unwrap();
    for (p, (_, m)) in r.curve.iter().zip(&r.estimate.monotone) {
        writeln!(s, "{:>8} {:>3} {:>6} {:>11.3} {:>9.3}", p.distance, p.n_trials, p.comparison_chosen, p.proportion, m)
            .unwrap();
    }
    writeln!(s, "M (75%) = {:.3} px", r.estimate.distance_75).unwrap();
    writeln!(s, "L (25%) = {:.3} px", r.estimate.distance_25).unwrap();
    writeln!(s, "JND     = {:.3} px", r.estimate.jnd).unwrap();
    s
}
