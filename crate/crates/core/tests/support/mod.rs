//! Independent brute-force oracles shared by the integration and
//! acceptance suites. Nothing here calls into the algorithms it checks.
#![allow(dead_code)]

use jndbem::{EdgeMap, GrayImage, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random map with up to `max_pixels` edge pixels (possibly fewer after dedup).
pub fn random_map(rng: &mut ChaCha8Rng, width: usize, height: usize, max_pixels: usize) -> EdgeMap {
    let n = rng.random_range(0..=max_pixels);
    let pts: Vec<(usize, usize)> = (0..n)
        .map(|_| (rng.random_range(0..width), rng.random_range(0..height)))
        .collect();
    EdgeMap::from_points(width, height, pts).unwrap()
}

pub fn random_nonempty_map(rng: &mut ChaCha8Rng, width: usize, height: usize, max_pixels: usize) -> EdgeMap {
    loop {
        let m = random_map(rng, width, height, max_pixels);
        if !m.is_empty() {
            return m;
        }
    }
}

fn sq(a: (usize, usize), b: (usize, usize)) -> u64 {
    let dx = a.0 as i64 - b.0 as i64;
    let dy = a.1 as i64 - b.1 as i64;
    (dx * dx + dy * dy) as u64
}

/// Minimum squared distance from every pixel to any edge, O(N * M).
pub fn brute_force_squared_field(map: &EdgeMap) -> Vec<u64> {
    let edges: Vec<(usize, usize)> = map.iter().map(|p| (p.x, p.y)).collect();
    let mut out = Vec::with_capacity(map.width() * map.height());
    for y in 0..map.height() {
        for x in 0..map.width() {
            out.push(edges.iter().map(|&e| sq((x, y), e)).min().unwrap());
        }
    }
    out
}

#[derive(Debug, Default, PartialEq)]
pub struct OraclePartition {
    pub correct: Vec<(usize, usize)>,
    /// (gt, candidate, distance)
    pub under_jnd: Vec<((usize, usize), (usize, usize), f64)>,
    pub misplaced: Vec<((usize, usize), (usize, usize), f64)>,
    pub missed: Vec<(usize, usize)>,
    pub spurious: Vec<(usize, usize)>,
}

/// Naive re-execution of the greedy procedure over plain vectors: exhaustive
/// scan of every free candidate per ground-truth pixel.
pub fn oracle_partition(gt: &EdgeMap, dc: &EdgeMap, jnd: f64, max_depth: f64) -> OraclePartition {
    let raster = |m: &EdgeMap| {
        let mut v: Vec<(usize, usize)> = m.iter().map(|p| (p.x, p.y)).collect();
        v.sort_by_key(|&(x, y)| (y, x));
        v
    };
    let gts = raster(gt);
    let mut cands: Vec<((usize, usize), bool)> = raster(dc).into_iter().map(|c| (c, true)).collect();
    let mut out = OraclePartition::default();

    let mut remaining = Vec::new();
    for g in gts {
        if let Some(c) = cands.iter_mut().find(|(c, _)| *c == g) {
            c.1 = false;
            out.correct.push(g);
        } else {
            remaining.push(g);
        }
    }
    for g in remaining {
        let mut best: Option<(usize, f64)> = None;
        for (i, (c, free)) in cands.iter().enumerate() {
            if !*free {
                continue;
            }
            let d = (sq(g, *c) as f64).sqrt();
            if d > max_depth {
                continue;
            }
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        match best {
            Some((i, d)) => {
                cands[i].1 = false;
                let entry = (g, cands[i].0, d);
                if d < jnd {
                    out.under_jnd.push(entry);
                } else {
                    out.misplaced.push(entry);
                }
            }
            None => out.missed.push(g),
        }
    }
    out.spurious = cands.into_iter().filter(|(_, f)| *f).map(|(c, _)| c).collect();
    out
}

/// Eq. value from scratch on an oracle partition.
pub fn oracle_jndbem(gt: &EdgeMap, dc: &EdgeMap, alpha: f64, jnd: f64, max_depth: f64) -> f64 {
    if gt.is_empty() && dc.is_empty() {
        return 1.0;
    }
    if gt.is_empty() || dc.is_empty() {
        return 0.0;
    }
    let part = oracle_partition(gt, dc, jnd, max_depth);
    let mut sum = (part.correct.len() + part.under_jnd.len()) as f64;
    for &(_, _, d) in &part.misplaced {
        sum += 1.0 / (1.0 + alpha * d * d);
    }
    sum / gt.len().max(dc.len()) as f64
}

/// Classical figure of merit via exhaustive nearest-edge search.
pub fn oracle_fom(gt: &EdgeMap, dc: &EdgeMap, alpha: f64) -> f64 {
    if gt.is_empty() && dc.is_empty() {
        return 1.0;
    }
    if gt.is_empty() || dc.is_empty() {
        return 0.0;
    }
    let sum: f64 = dc
        .iter()
        .map(|c| {
            let d2 = gt.iter().map(|g| sq((c.x, c.y), (g.x, g.y))).min().unwrap();
            1.0 / (1.0 + alpha * d2 as f64)
        })
        .sum();
    sum / gt.len().max(dc.len()) as f64
}

/// Ground-truth rule checked pixel by pixel against a rendered image and
/// its coverage mask: covered, and some in-bounds 4-neighbour differs.
pub fn boundary_scan(img: &GrayImage, covered: &[bool]) -> Vec<Point> {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !covered[y * w + x] {
                continue;
            }
            let v = img.get(x, y);
            let mut differs = false;
            if x > 0 && img.get(x - 1, y) != v {
                differs = true;
            }
            if x + 1 < w && img.get(x + 1, y) != v {
                differs = true;
            }
            if y > 0 && img.get(x, y - 1) != v {
                differs = true;
            }
            if y + 1 < h && img.get(x, y + 1) != v {
                differs = true;
            }
            if differs {
                out.push(Point::new(x, y));
            }
        }
    }
    out
}
