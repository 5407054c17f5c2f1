//! Constant-stimulus forced-choice experiment for calibrating the JND on
//! pixel displacement.
//!
//! Each trial shows a reference line, a constant stimulus at
//! [`STANDARD_DISTANCE`] px on one side and a comparison stimulus on the
//! other side at one of [`COMPARISON_DISTANCES`]. The subject picks the side
//! whose line is closer to the reference. The response curve is the
//! proportion of trials where the comparison was chosen, per distance.
//!
//! The JND is half the spread between the distances chosen 25% (`L`) and
//! 75% (`M`) of the time: `jnd = (L - M) / 2`.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::{Error, Result};

pub const STANDARD_DISTANCE: u32 = 10;
/// Comparison distances; the standard itself is excluded so there is never a tie.
pub const COMPARISON_DISTANCES: [u32; 10] = [5, 6, 7, 8, 9, 11, 12, 13, 14, 15];
pub const DEFAULT_TRIALS_PER_CONDITION: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub trial_id: u32,
    pub comparison_distance: u32,
    /// The constant stimulus sits on the opposite side.
    pub comparison_side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleMeta {
    pub standard: u32,
    pub trials_per_condition: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSchedule {
    pub meta: ScheduleMeta,
    pub trials: Vec<TrialSpec>,
}

impl TrialSchedule {
    pub fn get(&self, trial_id: u32) -> Option<&TrialSpec> {
        self.trials.iter().find(|t| t.trial_id == trial_id)
    }
}

/// Balanced schedule: every (distance, side) condition appears
/// `trials_per_condition` times, in a ChaCha8-seeded shuffle. Trial ids are
/// presentation indices starting at 0.
pub fn build_schedule(trials_per_condition: u32, seed: u64) -> Result<TrialSchedule> {
    if trials_per_condition == 0 {
        return Err(Error::param("trials_per_condition", "must be >= 1"));
    }
    let mut conditions = Vec::with_capacity(COMPARISON_DISTANCES.len() * 2 * trials_per_condition as usize);
    for &d in &COMPARISON_DISTANCES {
        for side in [Side::Left, Side::Right] {
            for _ in 0..trials_per_condition {
                conditions.push((d, side));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    conditions.shuffle(&mut rng);
    let trials = conditions
        .into_iter()
        .enumerate()
        .map(|(i, (d, side))| TrialSpec {
            trial_id: i as u32,
            comparison_distance: d,
            comparison_side: side,
        })
        .collect();
    Ok(TrialSchedule {
        meta: ScheduleMeta {
            standard: STANDARD_DISTANCE,
            trials_per_condition,
            seed,
        },
        trials,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub trial_id: u32,
    pub chosen_side: Side,
    /// Informational only.
    #[serde(default)]
    pub timestamp_ms: u64,
}

/// Parses a JSONL response log. Blank lines and objects carrying a `meta`
/// key (session headers) are skipped.
pub fn parse_responses(text: &str) -> Result<Vec<ResponseRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |e: serde_json::Error| Error::ResponseLog {
            line: i + 1,
            message: e.to_string(),
        };
        let value: serde_json::Value = serde_json::from_str(line).map_err(err)?;
        if value.get("meta").is_some() {
            continue;
        }
        out.push(serde_json::from_value(value).map_err(err)?);
    }
    Ok(out)
}

/// One JSON object per line, in the given order.
pub fn write_responses(records: &[ResponseRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("record serialises"));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub distance: u32,
    pub n_trials: u32,
    pub comparison_chosen: u32,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsychometricCurve {
    /// Pooled over sides, ascending distance.
    pub points: Vec<CurvePoint>,
    /// Per comparison side, for bias diagnosis. Distances without
    /// responses on that side are omitted.
    pub by_side: BTreeMap<Side, Vec<CurvePoint>>,
}

impl PsychometricCurve {
    /// Builds a curve directly from `(distance, proportion)` values, each
    /// weighted as a single trial. Intended for fixtures.
    pub fn from_proportions(points: &[(u32, f64)]) -> Self {
        let mut points: Vec<CurvePoint> = points
            .iter()
            .map(|&(distance, proportion)| CurvePoint {
                distance,
                n_trials: 1,
                comparison_chosen: 0,
                proportion,
            })
            .collect();
        points.sort_by_key(|p| p.distance);
        PsychometricCurve {
            points,
            by_side: BTreeMap::new(),
        }
    }

    /// Isotonic (non-increasing in distance) fit by pool-adjacent-violators,
    /// weighted by trial counts. Returns one proportion per point.
    pub fn monotone_proportions(&self) -> Vec<f64> {
        // blocks of (weighted mean, weight, point count)
        let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let w = p.n_trials.max(1) as f64;
            blocks.push((p.proportion, w, 1));
            while blocks.len() > 1 {
                let n = blocks.len();
                let (m2, w2, c2) = blocks[n - 1];
                let (m1, w1, c1) = blocks[n - 2];
                if m1 >= m2 {
                    break;
                }
                blocks.truncate(n - 2);
                blocks.push(((m1 * w1 + m2 * w2) / (w1 + w2), w1 + w2, c1 + c2));
            }
        }
        blocks
            .into_iter()
            .flat_map(|(m, _, c)| std::iter::repeat_n(m, c))
            .collect()
    }
}

fn curve_points(tally: &BTreeMap<u32, (u32, u32)>) -> Vec<CurvePoint> {
    tally
        .iter()
        .map(|(&distance, &(n, chosen))| CurvePoint {
            distance,
            n_trials: n,
            comparison_chosen: chosen,
            proportion: chosen as f64 / n as f64,
        })
        .collect()
}

/// Tallies a response log into a psychometric curve.
pub fn analyze(schedule: &TrialSchedule, log: &[ResponseRecord]) -> Result<PsychometricCurve> {
    let by_id: HashMap<u32, &TrialSpec> = schedule.trials.iter().map(|t| (t.trial_id, t)).collect();
    let mut seen = HashMap::new();
    let mut pooled: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
    let mut by_side: BTreeMap<Side, BTreeMap<u32, (u32, u32)>> = BTreeMap::new();

    for r in log {
        let trial = by_id.get(&r.trial_id).ok_or(Error::UnknownTrial(r.trial_id))?;
        if seen.insert(r.trial_id, ()).is_some() {
            return Err(Error::DuplicateResponse(r.trial_id));
        }
        let chose_comparison = (r.chosen_side == trial.comparison_side) as u32;
        for entry in [
            pooled.entry(trial.comparison_distance).or_default(),
            by_side
                .entry(trial.comparison_side)
                .or_default()
                .entry(trial.comparison_distance)
                .or_default(),
        ] {
            entry.0 += 1;
            entry.1 += chose_comparison;
        }
    }

    let mut distances: Vec<u32> = schedule.trials.iter().map(|t| t.comparison_distance).collect();
    distances.sort_unstable();
    distances.dedup();
    if let Some(&d) = distances.iter().find(|d| !pooled.contains_key(d)) {
        return Err(Error::NoResponses(d));
    }

    Ok(PsychometricCurve {
        points: curve_points(&pooled),
        by_side: by_side.iter().map(|(&s, t)| (s, curve_points(t))).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JndEstimate {
    /// `L`: distance at which the comparison is chosen 25% of the time.
    pub distance_25: f64,
    /// `M`: distance at which the comparison is chosen 75% of the time.
    pub distance_75: f64,
    pub jnd: f64,
    /// Isotonic proportions the crossings were read from.
    pub monotone: Vec<(u32, f64)>,
}

/// Distance where a non-increasing curve crosses `level`.
///
/// A run of points exactly at `level` yields the run's midpoint; otherwise
/// the crossing is linearly interpolated between the bracketing points.
fn crossing(points: &[(f64, f64)], level: f64) -> Result<f64> {
    if let Some(start) = points.iter().position(|&(_, p)| p == level) {
        let end = start + points[start..].iter().take_while(|&&(_, p)| p == level).count() - 1;
        return Ok((points[start].0 + points[end].0) / 2.0);
    }
    points
        .windows(2)
        .find(|w| w[0].1 > level && level > w[1].1)
        .map(|w| {
            let ((d0, p0), (d1, p1)) = (w[0], w[1]);
            d0 + (p0 - level) / (p0 - p1) * (d1 - d0)
        })
        .ok_or(Error::NotBracketed { threshold: level })
}

/// Estimates the JND from a curve after isotonic cleanup.
pub fn estimate_jnd(curve: &PsychometricCurve) -> Result<JndEstimate> {
    let monotone = curve.monotone_proportions();
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .zip(&monotone)
        .map(|(p, &m)| (p.distance as f64, m))
        .collect();
    let distance_75 = crossing(&pts, 0.75)?;
    let distance_25 = crossing(&pts, 0.25)?;
    let jnd = (distance_25 - distance_75) / 2.0;
    if jnd <= 0.0 {
        return Err(Error::NotBracketed { threshold: 0.25 });
    }
    Ok(JndEstimate {
        distance_25,
        distance_75,
        jnd,
        monotone: curve.points.iter().map(|p| p.distance).zip(monotone).collect(),
    })
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Probability that the model observer calls the comparison at `distance`
/// closer than the standard.
pub fn choice_probability(distance: f64, sigma: f64, lapse: f64) -> f64 {
    let z = (STANDARD_DISTANCE as f64 - distance) / (sigma * std::f64::consts::SQRT_2);
    lapse / 2.0 + (1.0 - lapse) * normal_cdf(z)
}

/// Simulated observer with Gaussian percept noise `sigma` on each of the
/// two line distances and a symmetric lapse rate. Timestamps are synthetic
/// (one second per trial).
pub fn simulate_observer(schedule: &TrialSchedule, sigma: f64, lapse: f64, seed: u64) -> Result<Vec<ResponseRecord>> {
    if !(sigma > 0.0) {
        return Err(Error::param("sigma", format!("must be > 0, got {sigma}")));
    }
    if !(0.0..0.5).contains(&lapse) {
        return Err(Error::param("lapse", format!("must lie in [0, 0.5), got {lapse}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(schedule
        .trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = choice_probability(t.comparison_distance as f64, sigma, lapse);
            let chose_comparison = rng.random::<f64>() < p;
            ResponseRecord {
                trial_id: t.trial_id,
                chosen_side: if chose_comparison {
                    t.comparison_side
                } else {
                    t.comparison_side.opposite()
                },
                timestamp_ms: i as u64 * 1000,
            }
        })
        .collect())
}
