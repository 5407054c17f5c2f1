//! Classical edge detectors producing binary candidate maps.
//!
//! All convolutions replicate border pixels.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::raster::{EdgeMap, GrayImage, Point};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Sobel,
    Prewitt,
    Log,
    Canny,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 4] = [
        DetectorKind::Sobel,
        DetectorKind::Prewitt,
        DetectorKind::Log,
        DetectorKind::Canny,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Sobel => "sobel",
            DetectorKind::Prewitt => "prewitt",
            DetectorKind::Log => "log",
            DetectorKind::Canny => "canny",
        }
    }
}

impl std::str::FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DetectorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param("detector", format!("unknown detector `{s}`")))
    }
}

/// Detector parameters. Fields irrelevant to `kind` are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorConfig {
    pub kind: DetectorKind,
    /// Smoothing scale for LoG and Canny.
    pub gaussian_sigma: f64,
    /// Sobel/Prewitt: fraction of the maximum gradient magnitude.
    pub threshold: f64,
    /// LoG: minimum absolute Laplacian difference across a sign change.
    pub zero_crossing_threshold: f64,
    /// Canny hysteresis fractions of the maximum magnitude.
    pub low: f64,
    pub high: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig::new(DetectorKind::Canny)
    }
}

impl DetectorConfig {
    pub fn new(kind: DetectorKind) -> Self {
        DetectorConfig {
            kind,
            gaussian_sigma: 1.4,
            threshold: 0.5,
            zero_crossing_threshold: 6.0,
            low: 0.1,
            high: 0.3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let frac = |name: &'static str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("must lie in (0, 1], got {v}")))
            }
        };
        match self.kind {
            DetectorKind::Sobel | DetectorKind::Prewitt => frac("threshold", self.threshold),
            DetectorKind::Log => {
                check_sigma(self.gaussian_sigma)?;
                if self.zero_crossing_threshold >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::param("zero_crossing_threshold", "must be >= 0"))
                }
            }
            DetectorKind::Canny => {
                check_sigma(self.gaussian_sigma)?;
                frac("low", self.low)?;
                frac("high", self.high)?;
                if self.low < self.high {
                    Ok(())
                } else {
                    Err(Error::param("low", format!("low {} must be < high {}", self.low, self.high)))
                }
            }
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::param("gaussian_sigma", format!("must be > 0, got {sigma}")))
    }
}

/// Normalised 1-D Gaussian of radius `ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Float raster used between filter stages.
#[derive(Debug, Clone, PartialEq)]
struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    fn from_image(img: &GrayImage) -> Self {
        Plane {
            width: img.width(),
            height: img.height(),
            data: img.pixels().iter().map(|&v| v as f64).collect(),
        }
    }

    #[inline]
    fn at(&self, x: isize, y: isize) -> f64 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.data[cy * self.width + cx]
    }

    fn convolve_separable(&self, kernel: &[f64]) -> Plane {
        let r = (kernel.len() / 2) as isize;
        let (w, h) = (self.width, self.height);
        let mut tmp = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                tmp[y * w + x] = kernel
                    .iter()
                    .enumerate()
                    .map(|(i, k)| k * self.at(x as isize + i as isize - r, y as isize))
                    .sum();
            }
        }
        let tmp = Plane { width: w, height: h, data: tmp };
        let mut out = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                out[y * w + x] = kernel
                    .iter()
                    .enumerate()
                    .map(|(i, k)| k * tmp.at(x as isize, y as isize + i as isize - r))
                    .sum();
            }
        }
        Plane { width: w, height: h, data: out }
    }
}

/// Separable Gaussian blur, re-quantised by rounding.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    check_sigma(sigma)?;
    let blurred = Plane::from_image(img).convolve_separable(&gaussian_kernel(sigma));
    let pixels = blurred
        .data
        .iter()
        .map(|v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    GrayImage::new(img.width(), img.height(), pixels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientOperator {
    Sobel,
    Prewitt,
}

/// Per-pixel gradient components and magnitude, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub width: usize,
    pub height: usize,
    pub gx: Vec<f64>,
    pub gy: Vec<f64>,
    pub magnitude: Vec<f64>,
}

impl Gradient {
    pub fn max_magnitude(&self) -> f64 {
        self.magnitude.iter().copied().fold(0.0, f64::max)
    }
}

/// 3x3 Sobel or Prewitt gradient. `gx` grows to the right, `gy` downwards.
pub fn gradient(img: &GrayImage, op: GradientOperator) -> Result<Gradient> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::param(
            "image",
            format!("gradient needs at least 3x3 pixels, got {w}x{h}"),
        ));
    }
    let centre = match op {
        GradientOperator::Sobel => 2.0,
        GradientOperator::Prewitt => 1.0,
    };
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    let mut magnitude = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let p = |dx: isize, dy: isize| img.get_clamped(x + dx, y + dy) as f64;
            let sx = (p(1, -1) - p(-1, -1)) + centre * (p(1, 0) - p(-1, 0)) + (p(1, 1) - p(-1, 1));
            let sy = (p(-1, 1) - p(-1, -1)) + centre * (p(0, 1) - p(0, -1)) + (p(1, 1) - p(1, -1));
            let i = y as usize * w + x as usize;
            gx[i] = sx;
            gy[i] = sy;
            magnitude[i] = sx.hypot(sy);
        }
    }
    Ok(Gradient {
        width: w,
        height: h,
        gx,
        gy,
        magnitude,
    })
}

/// 4-neighbour Laplacian of a float plane.
fn laplacian(p: &Plane) -> Plane {
    let (w, h) = (p.width, p.height);
    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            out[y as usize * w + x as usize] =
                p.at(x - 1, y) + p.at(x + 1, y) + p.at(x, y - 1) + p.at(x, y + 1) - 4.0 * p.at(x, y);
        }
    }
    Plane { width: w, height: h, data: out }
}

/// Quantised gradient direction as the `(dx, dy)` step to the neighbour
/// across the edge: 0, 45, 90 or 135 degrees.
pub fn quantized_direction(gx: f64, gy: f64) -> (isize, isize) {
    // angle measured with y pointing down, folded into [0, 180)
    let mut angle = gy.atan2(gx).to_degrees();
    if angle < 0.0 {
        angle += 180.0;
    }
    if !(22.5..157.5).contains(&angle) {
        (1, 0)
    } else if angle < 67.5 {
        (1, 1)
    } else if angle < 112.5 {
        (0, 1)
    } else {
        (-1, 1)
    }
}

/// Runs the configured detector.
pub fn detect(img: &GrayImage, cfg: &DetectorConfig) -> Result<EdgeMap> {
    cfg.validate()?;
    match cfg.kind {
        DetectorKind::Sobel => threshold_gradient(img, GradientOperator::Sobel, cfg.threshold),
        DetectorKind::Prewitt => threshold_gradient(img, GradientOperator::Prewitt, cfg.threshold),
        DetectorKind::Log => log_zero_crossings(img, cfg.gaussian_sigma, cfg.zero_crossing_threshold),
        DetectorKind::Canny => canny(img, cfg.gaussian_sigma, cfg.low, cfg.high),
    }
}

fn threshold_gradient(img: &GrayImage, op: GradientOperator, fraction: f64) -> Result<EdgeMap> {
    let g = gradient(img, op)?;
    let max = g.max_magnitude();
    let mut map = EdgeMap::new(g.width, g.height);
    if max == 0.0 {
        return Ok(map);
    }
    let cut = fraction * max;
    for y in 0..g.height {
        for x in 0..g.width {
            if g.magnitude[y * g.width + x] >= cut {
                map.insert(Point::new(x, y))?;
            }
        }
    }
    Ok(map)
}

/// Zero crossings of the Laplacian of the blurred image. Of the two
/// 4-neighbours straddling a sign change, the one with the smaller absolute
/// response is marked (the left/upper one on ties).
fn log_zero_crossings(img: &GrayImage, sigma: f64, min_jump: f64) -> Result<EdgeMap> {
    let blurred = Plane::from_image(&gaussian_blur(img, sigma)?);
    let lap = laplacian(&blurred);
    let (w, h) = (lap.width, lap.height);
    let mut map = EdgeMap::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let a = lap.data[y * w + x];
            for (nx, ny) in [(x + 1, y), (x, y + 1)] {
                if nx >= w || ny >= h {
                    continue;
                }
                let b = lap.data[ny * w + nx];
                let crosses = (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0);
                if crosses && (a - b).abs() > min_jump {
                    let p = if a.abs() <= b.abs() { Point::new(x, y) } else { Point::new(nx, ny) };
                    map.insert(p)?;
                }
            }
        }
    }
    Ok(map)
}

/// Non-maximum suppression along the quantised gradient direction.
///
/// A pixel survives if it is strictly greater than its neighbour on the
/// negative side and no smaller than the one on the positive side, so a
/// plateau two pixels wide keeps exactly one pixel.
pub fn non_maximum_suppression(g: &Gradient) -> Vec<f64> {
    let (w, h) = (g.width as isize, g.height as isize);
    let mag = |x: isize, y: isize| -> f64 {
        if x < 0 || y < 0 || x >= w || y >= h {
            0.0
        } else {
            g.magnitude[(y * w + x) as usize]
        }
    };
    let mut out = vec![0.0; g.magnitude.len()];
    for y in 0..h {
        for x in 0..w {
            let i = (y * w + x) as usize;
            let m = g.magnitude[i];
            if m == 0.0 {
                continue;
            }
            let (dx, dy) = quantized_direction(g.gx[i], g.gy[i]);
            if m > mag(x - dx, y - dy) && m >= mag(x + dx, y + dy) {
                out[i] = m;
            }
        }
    }
    out
}

fn canny(img: &GrayImage, sigma: f64, low: f64, high: f64) -> Result<EdgeMap> {
    let blurred = gaussian_blur(img, sigma)?;
    let g = gradient(&blurred, GradientOperator::Sobel)?;
    let (w, h) = (g.width, g.height);
    let mut map = EdgeMap::new(w, h);
    let max = g.max_magnitude();
    if max == 0.0 {
        return Ok(map);
    }
    let thin = non_maximum_suppression(&g);
    let (lo, hi) = (low * max, high * max);

    let mut marked = vec![false; w * h];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (i, &m) in thin.iter().enumerate() {
        if m > 0.0 && m >= hi {
            marked[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if !marked[j] && thin[j] > 0.0 && thin[j] >= lo {
                    marked[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    for (i, &on) in marked.iter().enumerate() {
        if on {
            map.insert(Point::new(i % w, i / w))?;
        }
    }
    Ok(map)
}
