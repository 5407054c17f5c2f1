//! Detector x measure benchmark with optional MOS correlation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context};
use jndbem::detectors::{detect, DetectorConfig, DetectorKind};
use jndbem::measures::{normalize_mos, pearson, spearman, EdgeMeasure, Jndbem, MeasureParams, PrattFom};
use jndbem::synthetic::{render, SceneSpec};
use jndbem::{EdgeMap, GrayImage};
use serde::{Deserialize, Serialize};

use crate::args::{BenchArgs, MeasureName};
use crate::evaluate::measure_params;
use crate::io::{read_bytes, read_edge_map, read_image, read_mos_csv, sha256_hex, write_file};
use crate::{to_json, usage, CliResult};

/// Optional `--config` document. Detector entries override the defaults
/// field by field; `params` replaces the measure flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub detectors: BTreeMap<DetectorKind, serde_json::Value>,
    pub params: Option<MeasureParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputProvenance {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub image: InputProvenance,
    pub gt: InputProvenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mos: Option<InputProvenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<InputProvenance>,
    pub detectors: BTreeMap<DetectorKind, DetectorConfig>,
    pub params: MeasureParams,
    /// The benchmark itself draws no random numbers; listed for completeness.
    pub seeds: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlation {
    pub n: usize,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub provenance: Provenance,
    /// detector -> measure -> score.
    pub scores: BTreeMap<DetectorKind, BTreeMap<&'static str, f64>>,
    pub edge_pixels: BTreeMap<DetectorKind, usize>,
    pub gt_pixels: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized_mos: Option<BTreeMap<DetectorKind, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlations: Option<BTreeMap<&'static str, Correlation>>,
}

/// Builds a report from in-memory inputs.
pub fn build_report(
    image: &GrayImage,
    gt: &EdgeMap,
    detectors: &BTreeMap<DetectorKind, DetectorConfig>,
    measures: &[MeasureName],
    params: MeasureParams,
    mos: Option<&BTreeMap<DetectorKind, f64>>,
    provenance_inputs: (InputProvenance, InputProvenance, Option<InputProvenance>, Option<InputProvenance>),
) -> anyhow::Result<BenchReport> {
    let jnd = Jndbem(params);
    let fom = PrattFom { alpha: params.alpha };
    let measure_impls: Vec<&dyn EdgeMeasure> = measures
        .iter()
        .map(|m| match m {
            MeasureName::Jndbem => &jnd as &dyn EdgeMeasure,
            MeasureName::Fom => &fom as &dyn EdgeMeasure,
        })
        .collect();

    let mut scores = BTreeMap::new();
    let mut edge_pixels = BTreeMap::new();
    for (&kind, cfg) in detectors {
        let map = detect(image, cfg).with_context(|| format!("detector {}", kind.name()))?;
        edge_pixels.insert(kind, map.len());
        let row: &mut BTreeMap<&'static str, f64> = scores.entry(kind).or_default();
        for (name, m) in measures.iter().zip(&measure_impls) {
            row.insert(name.as_str(), m.score(gt, &map)?.value);
        }
    }

    let correlations = mos.map(|mos| {
        measures
            .iter()
            .map(|name| {
                let xs: Vec<f64> = scores.values().map(|row| row[name.as_str()]).collect();
                let ys: Vec<f64> = scores.keys().map(|k| mos[k]).collect();
                let corr = Correlation {
                    n: xs.len(),
                    pearson: pearson(&xs, &ys).ok(),
                    spearman: spearman(&xs, &ys).ok(),
                };
                (name.as_str(), corr)
            })
            .collect()
    });

    let (image_p, gt_p, mos_p, config_p) = provenance_inputs;
    Ok(BenchReport {
        provenance: Provenance {
            image: image_p,
            gt: gt_p,
            mos: mos_p,
            config: config_p,
            detectors: detectors.clone(),
            params,
            seeds: BTreeMap::new(),
        },
        scores,
        edge_pixels,
        gt_pixels: gt.len(),
        normalized_mos: mos.cloned(),
        correlations,
    })
}

fn file_provenance(path: &Path, bytes: &[u8]) -> InputProvenance {
    InputProvenance {
        source: path.display().to_string(),
        sha256: Some(sha256_hex(bytes)),
    }
}

fn detector_configs(
    selected: &[DetectorKind],
    overrides: &BTreeMap<DetectorKind, serde_json::Value>,
) -> CliResult<BTreeMap<DetectorKind, DetectorConfig>> {
    let mut out = BTreeMap::new();
    for &kind in selected {
        let mut value = serde_json::to_value(DetectorConfig::new(kind)).expect("config serialises");
        if let Some(serde_json::Value::Object(extra)) = overrides.get(&kind) {
            for (k, v) in extra {
                value[k] = v.clone();
            }
        }
        value["kind"] = serde_json::to_value(kind).expect("kind serialises");
        let cfg: DetectorConfig = serde_json::from_value(value)
            .map_err(|e| usage(format!("detector {} config: {e}", kind.name())))?;
        cfg.validate()
            .map_err(|e| usage(format!("detector {} config: {e}", kind.name())))?;
        out.insert(kind, cfg);
    }
    Ok(out)
}

pub fn run(args: &BenchArgs) -> CliResult<String> {
    let mut params = measure_params(&args.params)?;

    let mut config_p = None;
    let config = match &args.config {
        Some(path) => {
            let bytes = read_bytes(path)?;
            config_p = Some(file_provenance(path, &bytes));
            serde_json::from_slice::<BenchConfig>(&bytes)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => BenchConfig::default(),
    };
    if let Some(p) = config.params {
        p.validate().map_err(|e| usage(e.to_string()))?;
        params = p;
    }

    let (image, gt, image_p, gt_p) = match (&args.image, &args.gt) {
        (Some(ip), Some(gp)) => {
            let (image, ib) = read_image(ip)?;
            let (gt, gb) = read_edge_map(gp)?;
            (image, gt, file_provenance(ip, &ib), file_provenance(gp, &gb))
        }
        _ => {
            let (image, gt) = render(&SceneSpec::default_scene()).map_err(anyhow::Error::from)?;
            let builtin = || InputProvenance {
                source: "builtin:default-scene".into(),
                sha256: None,
            };
            (image, gt, builtin(), builtin())
        }
    };
    if (image.width(), image.height()) != (gt.width(), gt.height()) {
        return Err(anyhow!(
            "image is {}x{} but ground truth is {}x{}",
            image.width(),
            image.height(),
            gt.width(),
            gt.height()
        )
        .into());
    }

    let mut selected: Vec<DetectorKind> = args.detectors.iter().map(|&d| d.into()).collect();
    selected.sort();
    selected.dedup();
    let detectors = detector_configs(&selected, &config.detectors)?;
    let mut measures = args.measures.clone();
    measures.sort();
    measures.dedup();

    let mut mos_p = None;
    let mos = match &args.mos {
        Some(path) => {
            let bytes = read_bytes(path)?;
            mos_p = Some(file_provenance(path, &bytes));
            let table = read_mos_csv(&bytes).with_context(|| path.display().to_string())?;
            if table.is_empty() {
                return Err(anyhow!("{}: no MOS rows", path.display()).into());
            }
            let groups = table.group();
            let mut by_detector = BTreeMap::new();
            for kind in detectors.keys() {
                let rows = groups
                    .get(kind.name())
                    .ok_or_else(|| anyhow!("MOS file has no rows for `{}`", kind.name()))?;
                by_detector.insert(*kind, normalize_mos(rows).map_err(anyhow::Error::from)?);
            }
            Some(by_detector)
        }
        None => None,
    };

    let report = build_report(
        &image,
        &gt,
        &detectors,
        &measures,
        params,
        mos.as_ref(),
        (image_p, gt_p, mos_p, config_p),
    )?;

    if let Some(path) = &args.csv {
        write_file(path, score_csv(&report).as_bytes())?;
    }
    Ok(if args.pretty { pretty(&report) } else { to_json(&report) })
}

pub fn score_csv(report: &BenchReport) -> String {
    let mut s = String::from("detector,measure,value\n");
    for (kind, row) in &report.scores {
        for (measure, value) in row {
            writeln!(s, "{},{},{}", kind.name(), measure, value).unwrap();
        }
    }
    s
}

fn pretty(report: &BenchReport) -> String {
    let measures: Vec<&str> = report
        .scores
        .values()
        .next()
        .map(|row| row.keys().copied().collect())
        .unwrap_or_default();
    let mut s = String::new();
    write!(s, "{:<10}", "detector").unwrap();
    for m in &measures {
        write!(s, " {m:>10}").unwrap();
    }
    if report.normalized_mos.is_some() {
        write!(s, " {:>10}", "mos").unwrap();
    }
    s.push('\n');
    for (kind, row) in &report.scores {
        write!(s, "{:<10}", kind.name()).unwrap();
        for m in &measures {
            write!(s, " {:>10.4}", row[m]).unwrap();
        }
        if let Some(mos) = &report.normalized_mos {
            write!(s, " {:>10.4}", mos[kind]).unwrap();
        }
        s.push('\n');
    }
    if let Some(corr) = &report.correlations {
        for (m, c) in corr {
            let fmt = |v: Option<f64>| v.map_or("undefined".to_string(), |v| format!("{v:.4}"));
            writeln!(s, "{m}: pearson {} spearman {}", fmt(c.pearson), fmt(c.spearman)).unwrap();
        }
    }
    s
}
