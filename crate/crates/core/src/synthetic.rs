//! Synthetic scenes with exact ground-truth boundaries, and controlled
//! degradations of edge maps.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`, so runs reproduce
//! across platforms.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::raster::{EdgeMap, GrayImage, Point};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    /// Filled axis-aligned rectangle covering `x..x+width` by `y..y+height`.
    Rect {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
        intensity: u8,
    },
    /// Filled disc: every pixel with `(x-cx)^2 + (y-cy)^2 <= radius^2`.
    Circle {
        cx: usize,
        cy: usize,
        radius: usize,
        intensity: u8,
    },
    /// 1 px Bresenham segment, endpoints inclusive.
    Line {
        x0: usize,
        y0: usize,
        x1: usize,
        y1: usize,
        intensity: u8,
    },
}

impl Primitive {
    fn intensity(&self) -> u8 {
        match *self {
            Primitive::Rect { intensity, .. }
            | Primitive::Circle { intensity, .. }
            | Primitive::Line { intensity, .. } => intensity,
        }
    }

    /// Covered pixels, assuming the primitive has been bounds-checked.
    fn pixels(&self) -> Vec<Point> {
        match *self {
            Primitive::Rect {
                x,
                y,
                width,
                height,
                ..
            } => (y..y + height)
                .flat_map(|py| (x..x + width).map(move |px| Point::new(px, py)))
                .collect(),
            Primitive::Circle { cx, cy, radius, .. } => {
                let r2 = radius * radius;
                (cy - radius..=cy + radius)
                    .flat_map(|py| {
                        (cx - radius..=cx + radius).filter_map(move |px| {
                            let (dx, dy) = (px.abs_diff(cx), py.abs_diff(cy));
                            (dx * dx + dy * dy <= r2).then_some(Point::new(px, py))
                        })
                    })
                    .collect()
            }
            Primitive::Line { x0, y0, x1, y1, .. } => bresenham(x0 as i64, y0 as i64, x1 as i64, y1 as i64),
        }
    }

    fn check_bounds(&self, width: usize, height: usize) -> Result<()> {
        let oob = |x: usize, y: usize| Error::OutOfBounds {
            x: x as i64,
            y: y as i64,
            width,
            height,
        };
        match *self {
            Primitive::Rect {
                x,
                y,
                width: w,
                height: h,
                ..
            } => {
                if w == 0 || h == 0 {
                    return Err(Error::param("rect", "width and height must be >= 1"));
                }
                if x + w > width || y + h > height {
                    return Err(oob(x + w - 1, y + h - 1));
                }
            }
            Primitive::Circle { cx, cy, radius, .. } => {
                if cx < radius || cy < radius {
                    return Err(Error::OutOfBounds {
                        x: cx as i64 - radius as i64,
                        y: cy as i64 - radius as i64,
                        width,
                        height,
                    });
                }
                if cx + radius >= width || cy + radius >= height {
                    return Err(oob(cx + radius, cy + radius));
                }
            }
            Primitive::Line { x0, y0, x1, y1, .. } => {
                for (x, y) in [(x0, y0), (x1, y1)] {
                    if x >= width || y >= height {
                        return Err(oob(x, y));
                    }
                }
            }
        }
        Ok(())
    }
}

fn bresenham(mut x0: i64, mut y0: i64, x1: i64, y1: i64) -> Vec<Point> {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::new();
    loop {
        out.push(Point::new(x0 as usize, y0 as usize));
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub background: u8,
    #[serde(default)]
    pub primitives: Vec<Primitive>,
}

impl SceneSpec {
    /// Built-in 128x128 scene of overlapping rectangles and discs at
    /// several contrasts. A stand-in for a typical evaluation image; every
    /// boundary pixel sits at least 14 px from the canvas border.
    pub fn default_scene() -> Self {
        SceneSpec {
            width: 128,
            height: 128,
            background: 40,
            primitives: vec![
                Primitive::Rect {
                    x: 16,
                    y: 16,
                    width: 44,
                    height: 32,
                    intensity: 200,
                },
                Primitive::Circle {
                    cx: 88,
                    cy: 40,
                    radius: 20,
                    intensity: 140,
                },
                Primitive::Rect {
                    x: 22,
                    y: 66,
                    width: 50,
                    height: 42,
                    intensity: 110,
                },
                Primitive::Circle {
                    cx: 92,
                    cy: 92,
                    radius: 18,
                    intensity: 230,
                },
                Primitive::Rect {
                    x: 52,
                    y: 56,
                    width: 30,
                    height: 20,
                    intensity: 170,
                },
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::param("dimensions", "canvas must be at least 1x1"));
        }
        self.primitives
            .iter()
            .try_for_each(|p| p.check_bounds(self.width, self.height))
    }
}

/// Rasterises `spec` in painter's order and extracts its ground truth.
///
/// A pixel is ground truth if some primitive covers it and at least one of
/// its in-bounds 4-neighbours has a different final intensity.
pub fn render(spec: &SceneSpec) -> Result<(GrayImage, EdgeMap)> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let mut img = GrayImage::filled(w, h, spec.background);
    let mut covered = vec![false; w * h];
    for prim in &spec.primitives {
        let v = prim.intensity();
        for p in prim.pixels() {
            img.set(p.x, p.y, v);
            covered[p.y * w + p.x] = true;
        }
    }

    let mut gt = EdgeMap::new(w, h);
    for y in 0..h {
        for x in 0..w {
            if !covered[y * w + x] {
                continue;
            }
            let v = img.get(x, y);
            let differs = [(0i64, -1i64), (-1, 0), (1, 0), (0, 1)].iter().any(|&(dx, dy)| {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                gt.in_bounds(nx, ny) && img.get(nx as usize, ny as usize) != v
            });
            if differs {
                gt.insert(Point::new(x, y))?;
            }
        }
    }
    Ok((img, gt))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Degradation {
    /// Shift every pixel; pixels leaving the raster are dropped.
    Translate { dx: i64, dy: i64 },
    /// Move each pixel to a uniform offset in `[-max_r, max_r]^2`, clamped
    /// into the raster. Collisions merge.
    Jitter { max_r: u32, seed: u64 },
    /// Remove each pixel independently with probability `rate`.
    Drop { rate: f64, seed: u64 },
    /// Add `count` distinct uniformly chosen non-edge pixels (all of them if
    /// fewer remain).
    AddSpurious { count: usize, seed: u64 },
    /// Add every pixel within Euclidean distance `radius` of an edge.
    Dilate { radius: u32 },
}

impl Degradation {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Degradation::Drop { rate, .. } if !(0.0..=1.0).contains(&rate) => {
                Err(Error::param("rate", format!("must lie in [0, 1], got {rate}")))
            }
            _ => Ok(()),
        }
    }
}

/// Applies a degradation. Pixels are visited in raster order, so output is
/// a deterministic function of `(map, d)`.
pub fn degrade(map: &EdgeMap, d: &Degradation) -> Result<EdgeMap> {
    d.validate()?;
    let (w, h) = (map.width(), map.height());
    let mut out = EdgeMap::new(w, h);
    match *d {
        Degradation::Translate { dx, dy } => {
            for p in map.iter() {
                let (x, y) = (p.x as i64 + dx, p.y as i64 + dy);
                if out.in_bounds(x, y) {
                    out.insert(Point::new(x as usize, y as usize))?;
                }
            }
        }
        Degradation::Jitter { max_r, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = max_r as i64;
            for p in map.iter() {
                let ox = rng.random_range(-r..=r);
                let oy = rng.random_range(-r..=r);
                let x = (p.x as i64 + ox).clamp(0, w as i64 - 1);
                let y = (p.y as i64 + oy).clamp(0, h as i64 - 1);
                out.insert(Point::new(x as usize, y as usize))?;
            }
        }
        Degradation::Drop { rate, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for p in map.iter() {
                if rng.random::<f64>() >= rate {
                    out.insert(p)?;
                }
            }
        }
        Degradation::AddSpurious { count, seed } => {
            out = map.clone();
            let mask = map.mask();
            let free: Vec<usize> = (0..w * h).filter(|&i| !mask[i]).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = count.min(free.len());
            for k in index::sample(&mut rng, free.len(), n) {
                let i = free[k];
                out.insert(Point::new(i % w, i / w))?;
            }
        }
        Degradation::Dilate { radius } => {
            let r = radius as i64;
            for p in map.iter() {
                for oy in -r..=r {
                    for ox in -r..=r {
                        if ox * ox + oy * oy > r * r {
                            continue;
                        }
                        let (x, y) = (p.x as i64 + ox, p.y as i64 + oy);
                        if out.in_bounds(x, y) {
                            out.insert(Point::new(x as usize, y as usize))?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
