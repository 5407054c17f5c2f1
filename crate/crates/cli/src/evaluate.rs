use std::fmt::Write as _;

use jndbem::matching::{MatchConfig, PartitionCounts};
use jndbem::measures::{jndbem, pratt_fom, Breakdown, MeasureParams};
use jndbem::partition;
use serde::Serialize;

use crate::args::{EvaluateArgs, MeasureName, MeasureOpts};
use crate::io::read_edge_map;
use crate::{to_json, usage, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct ScoreReport {
    pub measure: &'static str,
    pub value: f64,
    pub breakdown: Breakdown,
    /// Counts per class of the one-to-one partition, for either measure.
    pub partition: PartitionCounts,
    pub params: MeasureParams,
}

pub(crate) fn measure_params(opts: &MeasureOpts) -> CliResult<MeasureParams> {
    let params = MeasureParams {
        alpha: opts.alpha,
        matching: MatchConfig {
            jnd: opts.jnd,
            max_depth: opts.max_depth,
        },
    };
    params.validate().map_err(|e| usage(e.to_string()))?;
    Ok(params)
}

pub fn run(args: &EvaluateArgs) -> CliResult<String> {
    let params = measure_params(&args.params)?;
    let (gt, _) = read_edge_map(&args.gt)?;
    let (dc, _) = read_edge_map(&args.candidate)?;

    let score = match args.measure {
        MeasureName::Jndbem => jndbem(&gt, &dc, &params),
        MeasureName::Fom => pratt_fom(&gt, &dc, params.alpha),
    }
    .map_err(anyhow::Error::from)?;
    let counts = partition(&gt, &dc, &params.matching)
        .map_err(anyhow::Error::from)?
        .counts();

    let report = ScoreReport {
        measure: args.measure.as_str(),
        value: score.value,
        breakdown: score.breakdown,
        partition: counts,
        params,
    };
    Ok(if args.pretty { pretty(&report) } else { to_json(&report) })
}

fn pretty(r: &ScoreReport) -> String {
    let mut s = String::new();
    let c = &r.partition;
    writeln!(s, "{:<10} {:.6}", r.measure, r.value).unwrap();
    writeln!(s, "gt pixels        {}", r.breakdown.gt_pixels).unwrap();
    writeln!(s, "candidate pixels {}", r.breakdown.candidate_pixels).unwrap();
    writeln!(s, "correct          {}", c.correct).unwrap();
    writeln!(s, "under jnd        {}", c.under_jnd).unwrap();
    writeln!(s, "misplaced        {}", c.misplaced).unwrap();
    writeln!(s, "missed           {}", c.missed).unwrap();
    writeln!(s, "spurious         {}", c.spurious).unwrap();
    s
}
