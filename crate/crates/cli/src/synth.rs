use std::fs;

use anyhow::Context;
use jndbem::raster::save_pgm;
use jndbem::synthetic::{degrade, render, Degradation, SceneSpec};
use serde::Serialize;

use crate::args::SynthArgs;
use crate::io::{read_bytes, write_file};
use crate::{to_json, usage, CliResult};

#[derive(Debug, Serialize)]
struct SynthSummary {
    width: usize,
    height: usize,
    gt_pixels: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidate_pixels: Option<usize>,
    seed: u64,
    files: Vec<String>,
}

fn reseed(d: Degradation, seed: u64) -> Degradation {
    match d {
        Degradation::Jitter { max_r, .. } => Degradation::Jitter { max_r, seed },
        Degradation::Drop { rate, .. } => Degradation::Drop { rate, seed },
        Degradation::AddSpurious { count, .. } => Degradation::AddSpurious { count, seed },
        other => other,
    }
}

pub fn run(args: &SynthArgs) -> CliResult<String> {
    let spec = match &args.spec {
        Some(path) => {
            let bytes = read_bytes(path)?;
            serde_json::from_slice::<SceneSpec>(&bytes)
                .map_err(|e| usage(format!("{}: invalid scene spec: {e}", path.display())))?
        }
        None => SceneSpec::default_scene(),
    };
    // degradation i draws from seed + i so chained steps stay independent
    let degradations = args
        .degrade
        .iter()
        .enumerate()
        .map(|(i, text)| {
            serde_json::from_str::<Degradation>(text)
                .map(|d| reseed(d, args.seed.wrapping_add(i as u64)))
                .map_err(|e| usage(format!("invalid --degrade `{text}`: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let (image, gt) = render(&spec).map_err(|e| usage(format!("invalid scene spec: {e}")))?;
    fs::create_dir_all(&args.out_dir).with_context(|| format!("cannot create {}", args.out_dir.display()))?;

    let mut files = Vec::new();
    let image_path = args.out_dir.join("image.pgm");
    let gt_path = args.out_dir.join("gt.pgm");
    write_file(&image_path, &save_pgm(&image, true))?;
    write_file(&gt_path, &save_pgm(&gt.to_image(), true))?;
    files.push(image_path.display().to_string());
    files.push(gt_path.display().to_string());

    let mut candidate_pixels = None;
    if !degradations.is_empty() {
        let mut candidate = gt.clone();
        for d in &degradations {
            candidate = degrade(&candidate, d).map_err(|e| usage(e.to_string()))?;
        }
        let path = args.out_dir.join("candidate.pgm");
        write_file(&path, &save_pgm(&candidate.to_image(), true))?;
        files.push(path.display().to_string());
        candidate_pixels = Some(candidate.len());
    }

    Ok(to_json(&SynthSummary {
        width: spec.width,
        height: spec.height,
        gt_pixels: gt.len(),
        candidate_pixels,
        seed: args.seed,
        files,
    }))
}
