//! Partition of a candidate edge map against ground truth.
//!
//! Three phases:
//!
//! 1. Pixels present in both maps are *correct* and leave both pools.
//! 2. Remaining ground-truth pixels are visited in raster order. Each one
//!    takes the nearest still-free candidate pixel within `max_depth`
//!    (ties broken by candidate raster order). The candidate becomes
//!    non-free. The pair is *under JND* when `d < jnd`, otherwise
//!    *misplaced*. A ground-truth pixel with no free candidate in range is
//!    *missed*.
//! 3. Candidate pixels that are still free are *spurious*.
//!
//! The search always runs from ground truth to candidate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::raster::{squared_distance, EdgeMap, Point};
use crate::{Error, Result};

/// Default JND threshold in pixels.
pub const DEFAULT_JND: f64 = 2.0;
/// Default search radius in pixels.
pub const DEFAULT_MAX_DEPTH: f64 = 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    /// Displacements strictly below this are imperceptible.
    pub jnd: f64,
    /// Euclidean search radius; candidates farther away are never matched.
    pub max_depth: f64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            jnd: DEFAULT_JND,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl MatchConfig {
    pub fn new(jnd: f64, max_depth: f64) -> Result<Self> {
        let cfg = MatchConfig { jnd, max_depth };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.jnd.is_finite() && self.jnd > 0.0) {
            return Err(Error::param("jnd", format!("must be > 0, got {}", self.jnd)));
        }
        if !(self.max_depth.is_finite() && self.max_depth > 0.0) {
            return Err(Error::param(
                "max_depth",
                format!("must be > 0, got {}", self.max_depth),
            ));
        }
        if self.jnd > self.max_depth {
            return Err(Error::param(
                "jnd",
                format!("jnd {} exceeds max_depth {}", self.jnd, self.max_depth),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchPair {
    pub gt: Point,
    pub candidate: Point,
    pub distance: f64,
}

/// Counts per class, for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartitionCounts {
    pub correct: usize,
    pub under_jnd: usize,
    pub misplaced: usize,
    pub missed: usize,
    pub spurious: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MatchPartition {
    pub correct: BTreeSet<Point>,
    /// Pairs with `d < jnd`, in ground-truth raster order.
    pub under_jnd: Vec<MatchPair>,
    /// Pairs with `jnd <= d <= max_depth`, in ground-truth raster order.
    pub misplaced: Vec<MatchPair>,
    pub missed: BTreeSet<Point>,
    pub spurious: BTreeSet<Point>,
}

impl MatchPartition {
    pub fn counts(&self) -> PartitionCounts {
        PartitionCounts {
            correct: self.correct.len(),
            under_jnd: self.under_jnd.len(),
            misplaced: self.misplaced.len(),
            missed: self.missed.len(),
            spurious: self.spurious.len(),
        }
    }

    /// Checks every structural invariant of a partition of `dc` against `gt`.
    /// Returns a description of the first violation found.
    pub fn check(&self, gt: &EdgeMap, dc: &EdgeMap, cfg: &MatchConfig) -> Result<(), String> {
        let mut gt_seen = BTreeSet::new();
        let mut dc_seen = BTreeSet::new();
        let claim = |set: &mut BTreeSet<Point>, p: Point, side: &str| {
            if set.insert(p) {
                Ok(())
            } else {
                Err(format!("{side} pixel {p:?} classified twice"))
            }
        };

        for &p in &self.correct {
            claim(&mut gt_seen, p, "gt")?;
            claim(&mut dc_seen, p, "candidate")?;
        }
        for pair in &self.under_jnd {
            if !(pair.distance > 0.0 && pair.distance < cfg.jnd) {
                return Err(format!("under-jnd pair {pair:?} has d outside (0, jnd)"));
            }
        }
        for pair in &self.misplaced {
            if !(pair.distance >= cfg.jnd && pair.distance <= cfg.max_depth) {
                return Err(format!("misplaced pair {pair:?} has d outside [jnd, max_depth]"));
            }
        }
        for pair in self.under_jnd.iter().chain(&self.misplaced) {
            let exact = (squared_distance(pair.gt, pair.candidate) as f64).sqrt();
            if exact != pair.distance {
                return Err(format!("pair {pair:?} records wrong distance {exact}"));
            }
            claim(&mut gt_seen, pair.gt, "gt")?;
            claim(&mut dc_seen, pair.candidate, "candidate")?;
        }
        for &p in &self.missed {
            claim(&mut gt_seen, p, "gt")?;
        }
        for &p in &self.spurious {
            claim(&mut dc_seen, p, "candidate")?;
        }
        if &gt_seen != gt.points() {
            return Err("ground-truth classes do not cover G_t exactly".into());
        }
        if &dc_seen != dc.points() {
            return Err("candidate classes do not cover D_c exactly".into());
        }
        Ok(())
    }
}

/// Partitions `dc` against `gt`. See the module docs for the procedure.
pub fn partition(gt: &EdgeMap, dc: &EdgeMap, cfg: &MatchConfig) -> Result<MatchPartition> {
    gt.same_dimensions(dc)?;
    cfg.validate()?;
    let (w, h) = (gt.width(), gt.height());

    let mut result = MatchPartition::default();
    let mut free = dc.mask();
    let mut pending = Vec::new();

    for p in gt.iter() {
        if dc.contains(&p) {
            result.correct.insert(p);
            free[p.y * w + p.x] = false;
        } else {
            pending.push(p);
        }
    }

    let radius = cfg.max_depth.floor() as usize;
    for p in pending {
        let y0 = p.y.saturating_sub(radius);
        let y1 = (p.y + radius).min(h.saturating_sub(1));
        let x0 = p.x.saturating_sub(radius);
        let x1 = (p.x + radius).min(w.saturating_sub(1));

        let mut best: Option<(u64, Point)> = None;
        // raster-order scan with strict improvement keeps the first of equal minima
        for y in y0..=y1 {
            for x in x0..=x1 {
                if !free[y * w + x] {
                    continue;
                }
                let q = Point::new(x, y);
                let d2 = squared_distance(p, q);
                if (d2 as f64).sqrt() > cfg.max_depth {
                    continue;
                }
                if best.is_none_or(|(b, _)| d2 < b) {
                    best = Some((d2, q));
                }
            }
        }

        match best {
            Some((d2, q)) => {
                free[q.y * w + q.x] = false;
                let pair = MatchPair {
                    gt: p,
                    candidate: q,
                    distance: (d2 as f64).sqrt(),
                };
                if pair.distance < cfg.jnd {
                    result.under_jnd.push(pair);
                } else {
                    result.misplaced.push(pair);
                }
            }
            None => {
                result.missed.insert(p);
            }
        }
    }

    result.spurious = dc
        .iter()
        .filter(|q| free[q.y * w + q.x])
        .collect();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(w: usize, h: usize, pts: &[(usize, usize)]) -> EdgeMap {
        EdgeMap::from_points(w, h, pts.iter().copied()).unwrap()
    }

    fn run(gt: &EdgeMap, dc: &EdgeMap) -> MatchPartition {
        let cfg = MatchConfig::default();
        let part = partition(gt, dc, &cfg).unwrap();
        part.check(gt, dc, &cfg).unwrap();
        part
    }

    #[test]
    fn identity() {
        let m = map(8, 8, &[(3, 3)]);
        let part = run(&m, &m);
        assert_eq!(part.correct.iter().copied().collect::<Vec<_>>(), vec![Point::new(3, 3)]);
        assert!(part.under_jnd.is_empty() && part.misplaced.is_empty());
        assert!(part.missed.is_empty() && part.spurious.is_empty());
    }

    #[test]
    fn one_pixel_shift_is_under_jnd() {
        let part = run(&map(12, 12, &[(5, 5)]), &map(12, 12, &[(6, 5)]));
        assert_eq!(
            part.under_jnd,
            vec![MatchPair { gt: Point::new(5, 5), candidate: Point::new(6, 5), distance: 1.0 }]
        );
        assert!(part.misplaced.is_empty());
    }

    #[test]
    fn three_pixel_shift_is_misplaced() {
        let part = run(&map(12, 12, &[(5, 5)]), &map(12, 12, &[(8, 5)]));
        assert_eq!(
            part.misplaced,
            vec![MatchPair { gt: Point::new(5, 5), candidate: Point::new(8, 5), distance: 3.0 }]
        );
    }

    #[test]
    fn beyond_depth_is_missed_and_spurious() {
        let part = run(&map(10, 20, &[(5, 5)]), &map(10, 20, &[(5, 15)]));
        assert_eq!(part.missed.iter().copied().collect::<Vec<_>>(), vec![Point::new(5, 5)]);
        assert_eq!(part.spurious.iter().copied().collect::<Vec<_>>(), vec![Point::new(5, 15)]);
    }

    #[test]
    fn depth_is_inclusive() {
        let part = run(&map(10, 20, &[(5, 5)]), &map(10, 20, &[(5, 14)]));
        assert_eq!(part.misplaced.len(), 1);
        assert_eq!(part.misplaced[0].distance, 9.0);
    }

    #[test]
    fn jnd_boundary_is_penalised() {
        let part = run(&map(12, 12, &[(5, 5)]), &map(12, 12, &[(7, 5)]));
        assert_eq!(part.misplaced.len(), 1);
        assert!(part.under_jnd.is_empty());
    }

    #[test]
    fn radius_one_ring_is_under_jnd() {
        let gt = map(5, 5, &[(2, 2)]);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let dc = map(5, 5, &[((2 + dx) as usize, (2 + dy) as usize)]);
                let part = run(&gt, &dc);
                assert_eq!(part.under_jnd.len(), 1, "offset ({dx},{dy})");
            }
        }
    }

    #[test]
    fn ties_go_to_first_candidate_in_raster_order() {
        // (4,5) and (6,5) both at distance 1; (5,4) comes first in raster order
        let gt = map(10, 10, &[(5, 5)]);
        let dc = map(10, 10, &[(6, 5), (4, 5), (5, 4)]);
        let part = run(&gt, &dc);
        assert_eq!(part.under_jnd[0].candidate, Point::new(5, 4));
        assert_eq!(part.spurious.len(), 2);
    }

    #[test]
    fn candidates_are_used_once() {
        // under-segmentation: two gt pixels compete for one candidate
        let gt = map(10, 10, &[(4, 5), (6, 5)]);
        let dc = map(10, 10, &[(5, 5)]);
        let part = run(&gt, &dc);
        assert_eq!(part.under_jnd.len(), 1);
        assert_eq!(part.under_jnd[0].gt, Point::new(4, 5));
        assert_eq!(part.missed.iter().copied().collect::<Vec<_>>(), vec![Point::new(6, 5)]);
    }

    #[test]
    fn coincident_pixels_are_removed_before_search() {
        // (3,3) is correct; gt (3,4) must not take it and falls through to (3,6)
        let gt = map(10, 10, &[(3, 3), (3, 4)]);
        let dc = map(10, 10, &[(3, 3), (3, 6)]);
        let part = run(&gt, &dc);
        assert_eq!(part.correct.len(), 1);
        assert_eq!(part.misplaced.len(), 1);
        assert_eq!(part.misplaced[0].candidate, Point::new(3, 6));
    }

    #[test]
    fn empty_maps() {
        let empty = EdgeMap::new(4, 4);
        let some = map(4, 4, &[(1, 1), (2, 2)]);
        assert_eq!(run(&empty, &empty), MatchPartition::default());
        assert_eq!(run(&some, &empty).missed.len(), 2);
        assert_eq!(run(&empty, &some).spurious.len(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let err = partition(&EdgeMap::new(4, 4), &EdgeMap::new(4, 5), &MatchConfig::default());
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(MatchConfig::new(2.0, 9.0).is_ok());
        assert!(MatchConfig::new(0.0, 9.0).is_err());
        assert!(MatchConfig::new(2.0, -1.0).is_err());
        assert!(MatchConfig::new(10.0, 9.0).is_err());
    }

    #[test]
    fn fractional_depth() {
        let cfg = MatchConfig::new(1.0, 1.5).unwrap();
        let gt = map(6, 6, &[(2, 2)]);
        let part = partition(&gt, &map(6, 6, &[(3, 3)]), &cfg).unwrap();
        assert_eq!(part.misplaced.len(), 1);
        let part = partition(&gt, &map(6, 6, &[(4, 2)]), &cfg).unwrap();
        assert_eq!(part.missed.len(), 1);
    }
}
