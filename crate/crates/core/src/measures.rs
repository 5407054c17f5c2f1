//! Edge map quality measures and the statistics used to compare them with
//! human opinion scores.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::matching::{partition, MatchConfig, PartitionCounts};
use crate::raster::{distance_transform, EdgeMap};
use crate::{Error, Result};

/// Default distance penalty.
pub const DEFAULT_ALPHA: f64 = 1.0 / 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureParams {
    pub alpha: f64,
    #[serde(rename = "match")]
    pub matching: MatchConfig,
}

impl Default for MeasureParams {
    fn default() -> Self {
        MeasureParams {
            alpha: DEFAULT_ALPHA,
            matching: MatchConfig::default(),
        }
    }
}

impl MeasureParams {
    pub fn validate(&self) -> Result<()> {
        validate_alpha(self.alpha)?;
        self.matching.validate()
    }
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("must be > 0, got {alpha}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Breakdown {
    /// Present for measures that build a one-to-one partition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<PartitionCounts>,
    /// Sum of `1 / (1 + alpha d^2)` over penalised pixels.
    pub weighted_sum: f64,
    pub gt_pixels: usize,
    pub candidate_pixels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub value: f64,
    pub breakdown: Breakdown,
}

/// A reference-based measure: `(ground truth, candidate) -> Score`.
///
/// Third-party measures plug into benchmarks through this trait.
pub trait EdgeMeasure {
    /// Stable identifier used in reports.
    fn name(&self) -> &str;
    fn score(&self, gt: &EdgeMap, dc: &EdgeMap) -> Result<Score>;
}

/// [`jndbem`] as an [`EdgeMeasure`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Jndbem(pub MeasureParams);

impl EdgeMeasure for Jndbem {
    fn name(&self) -> &str {
        "jndbem"
    }

    fn score(&self, gt: &EdgeMap, dc: &EdgeMap) -> Result<Score> {
        jndbem(gt, dc, &self.0)
    }
}

/// [`pratt_fom`] as an [`EdgeMeasure`].
#[derive(Debug, Clone, Copy)]
pub struct PrattFom {
    pub alpha: f64,
}

impl Default for PrattFom {
    fn default() -> Self {
        PrattFom {
            alpha: DEFAULT_ALPHA,
        }
    }
}

impl EdgeMeasure for PrattFom {
    fn name(&self) -> &str {
        "fom"
    }

    fn score(&self, gt: &EdgeMap, dc: &EdgeMap) -> Result<Score> {
        pratt_fom(gt, dc, self.alpha)
    }
}

/// Score for the degenerate cases: both empty is a perfect match, exactly
/// one empty is a total failure.
fn degenerate(gt: &EdgeMap, dc: &EdgeMap) -> Option<Score> {
    if !gt.is_empty() && !dc.is_empty() {
        return None;
    }
    let value = if gt.is_empty() && dc.is_empty() { 1.0 } else { 0.0 };
    Some(Score {
        value,
        breakdown: Breakdown {
            counts: None,
            weighted_sum: 0.0,
            gt_pixels: gt.len(),
            candidate_pixels: dc.len(),
        },
    })
}

/// JND-based edge map measure.
///
/// Correct and under-JND pixels count as 1, misplaced pairs contribute
/// `1 / (1 + alpha d^2)`, missed pixels 0, and spurious pixels only enlarge
/// the denominator `max(|G_t|, |D_c|)`.
pub fn jndbem(gt: &EdgeMap, dc: &EdgeMap, params: &MeasureParams) -> Result<Score> {
    gt.same_dimensions(dc)?;
    params.validate()?;
    let part = partition(gt, dc, &params.matching)?;
    let counts = part.counts();

    if let Some(mut score) = degenerate(gt, dc) {
        score.breakdown.counts = Some(counts);
        return Ok(score);
    }

    let weighted_sum: f64 = part
        .misplaced
        .iter()
        .map(|pair| 1.0 / (1.0 + params.alpha * pair.distance * pair.distance))
        .sum();
    let numerator = (counts.correct + counts.under_jnd) as f64 + weighted_sum;
    let value = numerator / gt.len().max(dc.len()) as f64;

    Ok(Score {
        value,
        breakdown: Breakdown {
            counts: Some(counts),
            weighted_sum,
            gt_pixels: gt.len(),
            candidate_pixels: dc.len(),
        },
    })
}

/// Pratt's figure of merit: sum over detected pixels of `1 / (1 + alpha d^2)`
/// with `d` the distance to the nearest ground-truth pixel, normalised by
/// `max(|G_t|, |D_c|)`. No one-to-one matching.
pub fn pratt_fom(gt: &EdgeMap, dc: &EdgeMap, alpha: f64) -> Result<Score> {
    gt.same_dimensions(dc)?;
    validate_alpha(alpha)?;
    if let Some(score) = degenerate(gt, dc) {
        return Ok(score);
    }

    let field = distance_transform(gt)?;
    let weighted_sum: f64 = dc
        .iter()
        .map(|p| 1.0 / (1.0 + alpha * field.squared(p.x, p.y) as f64))
        .sum();
    let value = weighted_sum / gt.len().max(dc.len()) as f64;

    Ok(Score {
        value,
        breakdown: Breakdown {
            counts: None,
            weighted_sum,
            gt_pixels: gt.len(),
            candidate_pixels: dc.len(),
        },
    })
}

/// Human ratings (1..=10) keyed by edge map identifier.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MosTable {
    rows: Vec<(String, u8)>,
}

impl MosTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: impl Into<String>, rating: i64) -> Result<()> {
        let id = id.into();
        if !(1..=10).contains(&rating) {
            return Err(Error::RatingOutOfRange { id, rating });
        }
        self.rows.push((id, rating as u8));
        Ok(())
    }

    pub fn from_rows<I, S>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut table = MosTable::new();
        for (id, rating) in rows {
            table.push(id, rating)?;
        }
        Ok(table)
    }

    pub fn rows(&self) -> &[(String, u8)] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Ratings grouped by identifier.
    pub fn group(&self) -> BTreeMap<&str, MosTable> {
        let mut groups: BTreeMap<&str, MosTable> = BTreeMap::new();
        for (id, rating) in &self.rows {
            groups
                .entry(id.as_str())
                .or_default()
                .rows
                .push((id.clone(), *rating));
        }
        groups
    }

    /// Normalised MOS per identifier.
    pub fn normalized_by_id(&self) -> BTreeMap<String, f64> {
        self.group()
            .into_iter()
            .map(|(id, t)| (id.to_owned(), normalize_mos(&t).expect("nonempty group")))
            .collect()
    }
}

/// Mean of `(rating - 1) / 9` over all rows.
pub fn normalize_mos(table: &MosTable) -> Result<f64> {
    if table.is_empty() {
        return Err(Error::EmptyMos);
    }
    let sum: f64 = table.rows.iter().map(|&(_, r)| (r as f64 - 1.0) / 9.0).sum();
    Ok(sum / table.rows.len() as f64)
}

fn check_pair(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::UndefinedCorrelation("sequences differ in length"));
    }
    if xs.len() < 2 {
        return Err(Error::UndefinedCorrelation("need at least two observations"));
    }
    Ok(())
}

/// Pearson product-moment correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pair(xs, ys)?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks, ties sharing the average of the ranks they span.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_pair(xs, ys)?;
    pearson(&average_ranks(xs), &average_ranks(ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(w: usize, h: usize, pts: &[(usize, usize)]) -> EdgeMap {
        EdgeMap::from_points(w, h, pts.iter().copied()).unwrap()
    }

    const P: MeasureParams = MeasureParams {
        alpha: DEFAULT_ALPHA,
        matching: MatchConfig {
            jnd: 2.0,
            max_depth: 9.0,
        },
    };

    #[test]
    fn identical_maps_score_one() {
        let m = map(10, 10, &[(1, 1), (2, 2), (7, 3)]);
        assert_eq!(jndbem(&m, &m, &P).unwrap().value, 1.0);
        assert_eq!(pratt_fom(&m, &m, DEFAULT_ALPHA).unwrap().value, 1.0);
    }

    #[test]
    fn sub_jnd_shift_is_free() {
        let gt = map(12, 12, &[(5, 5)]);
        let dc = map(12, 12, &[(6, 5)]);
        assert_eq!(jndbem(&gt, &dc, &P).unwrap().value, 1.0);
        let fom = pratt_fom(&gt, &dc, DEFAULT_ALPHA).unwrap().value;
        assert!((fom - 0.9).abs() < 1e-12, "{fom}");
    }

    #[test]
    fn three_pixel_shift_halves_both() {
        let gt = map(12, 12, &[(5, 5)]);
        let dc = map(12, 12, &[(8, 5)]);
        let j = jndbem(&gt, &dc, &P).unwrap();
        assert!((j.value - 0.5).abs() < 1e-12);
        assert_eq!(j.breakdown.counts.unwrap().misplaced, 1);
        assert!((pratt_fom(&gt, &dc, DEFAULT_ALPHA).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn distant_spurious_only_hits_denominator() {
        let gt = map(30, 30, &[(5, 5)]);
        let dc = map(30, 30, &[(5, 5), (25, 25)]);
        let s = jndbem(&gt, &dc, &P).unwrap();
        assert_eq!(s.value, 0.5);
        assert_eq!(s.breakdown.counts.unwrap().spurious, 1);
    }

    #[test]
    fn degenerate_maps() {
        let empty = EdgeMap::new(5, 5);
        let some = map(5, 5, &[(2, 2)]);
        assert_eq!(jndbem(&empty, &empty, &P).unwrap().value, 1.0);
        assert_eq!(jndbem(&some, &empty, &P).unwrap().value, 0.0);
        assert_eq!(jndbem(&empty, &some, &P).unwrap().value, 0.0);
        assert_eq!(pratt_fom(&empty, &empty, 0.1).unwrap().value, 1.0);
        assert_eq!(pratt_fom(&empty, &some, 0.1).unwrap().value, 0.0);
        assert_eq!(pratt_fom(&some, &empty, 0.1).unwrap().value, 0.0);
    }

    #[test]
    fn rejects_bad_alpha() {
        let m = map(5, 5, &[(2, 2)]);
        assert!(pratt_fom(&m, &m, 0.0).is_err());
        let params = MeasureParams { alpha: -1.0, ..P };
        assert!(jndbem(&m, &m, &params).is_err());
    }

    #[test]
    fn fom_is_one_only_for_exact_overlap() {
        let gt = map(10, 10, &[(1, 1), (2, 1)]);
        let dc = map(10, 10, &[(1, 1)]);
        assert_eq!(pratt_fom(&gt, &dc, DEFAULT_ALPHA).unwrap().value, 0.5);
    }

    #[test]
    fn measure_trait_names() {
        assert_eq!(Jndbem::default().name(), "jndbem");
        assert_eq!(PrattFom::default().name(), "fom");
    }

    #[test]
    fn mos_normalisation() {
        let all_ten = MosTable::from_rows([("a", 10), ("b", 10)]).unwrap();
        assert_eq!(normalize_mos(&all_ten).unwrap(), 1.0);
        let all_one = MosTable::from_rows([("a", 1)]).unwrap();
        assert_eq!(normalize_mos(&all_one).unwrap(), 0.0);
        let mixed = MosTable::from_rows([("a", 4), ("a", 7)]).unwrap();
        assert!((normalize_mos(&mixed).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(normalize_mos(&MosTable::new()), Err(Error::EmptyMos));
        assert!(MosTable::from_rows([("a", 0)]).is_err());
        assert!(MosTable::from_rows([("a", 11)]).is_err());
    }

    #[test]
    fn mos_grouping() {
        let t = MosTable::from_rows([("canny", 10), ("sobel", 1), ("canny", 1)]).unwrap();
        let by_id = t.normalized_by_id();
        assert_eq!(by_id["canny"], 0.5);
        assert_eq!(by_id["sobel"], 0.0);
    }

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1., 2., 3.], &[1., 2., 3.]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&[1., 2., 3.], &[3., 2., 1.]).unwrap() + 1.0).abs() < 1e-15);
        // means 2.5 and 3.75; cov sum = 3.5; sxx = 5, syy = 4.75
        let expected = 3.5 / (5.0f64 * 4.75).sqrt();
        let r = pearson(&[1., 2., 3., 4.], &[2., 4., 5., 4.]).unwrap();
        assert!((r - expected).abs() < 1e-12, "{r} vs {expected}");
            }

    #[test]
    fn pearson_errors() {
        assert!(matches!(pearson(&[1., 1.], &[1., 2.]), Err(Error::UndefinedCorrelation(_))));
        assert!(pearson(&[1.], &[1.]).is_err());
        assert!(pearson(&[1., 2.], &[1., 2., 3.]).is_err());
    }

    #[test]
    fn spearman_examples() {
        assert!((spearman(&[1., 2., 10., 11.], &[0.1, 0.5, 0.6, 9.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman(&[1., 2., 3.], &[9., 4., 1.]).unwrap() + 1.0).abs() < 1e-15);
        // xs ranks by hand: 1, 2.5, 2.5, 4, 5; ys ranks: 2, 1, 3, 5, 4
        let xs = [10., 20., 20., 30., 40.];
        let ys = [2., 1., 3., 5., 4.];
        assert_eq!(average_ranks(&xs), vec![1., 2.5, 2.5, 4., 5.]);
        let expected = pearson(&[1., 2.5, 2.5, 4., 5.], &[2., 1., 3., 5., 4.]).unwrap();
        assert!((spearman(&xs, &ys).unwrap() - expected).abs() < 1e-15);
        // sum dxdy = 7, sxx = 9.5, syy = 10
        assert!((expected - 7.0 / (9.5f64 * 10.0).sqrt()).abs() < 1e-12);
    }
}
