//! Grayscale rasters, binary edge maps and distance machinery.

mod distance;
mod pgm;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use distance::{distance_transform, euclidean_distance, squared_distance, DistanceField};
pub use pgm::{load_pgm, save_pgm};

/// Intensity written for edge pixels when an [`EdgeMap`] is rasterised.
pub const EDGE_VALUE: u8 = 255;
/// Threshold used when reading edge maps back from rasters.
pub const EDGE_THRESHOLD: u8 = 128;

/// Pixel coordinate, `x` is the column and `y` the row.
///
/// Ordering is raster order: by row, then by column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: usize,
    pub y: usize,
}

impl Point {
    pub const fn new(x: usize, y: usize) -> Self {
        Point { x, y }
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<(usize, usize)> for Point {
    fn from((x, y): (usize, usize)) -> Self {
        Point { x, y }
    }
}

/// 8-bit grayscale image stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param("dimensions", "width and height must be at least 1"));
        }
        if pixels.len() != width * height {
            return Err(Error::param(
                "pixels",
                format!("expected {} values, got {}", width * height, pixels.len()),
            ));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    /// Image where every pixel has intensity `value`.
    ///
    /// # Panics
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        GrayImage {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut img = GrayImage::filled(width, height, 0);
        for y in 0..height {
            for x in 0..width {
                img.pixels[y * width + x] = f(x, y);
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Value at `(x, y)` with coordinates clamped into the image (edge replication).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }
}

/// Binary edge map: the set of edge pixel coordinates on a `width x height` raster.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    edges: BTreeSet<Point>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize) -> Self {
        EdgeMap {
            width,
            height,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a map from points, rejecting any coordinate outside the raster.
    /// Duplicates collapse.
    pub fn from_points<I, P>(width: usize, height: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: Into<Point>,
    {
        let mut map = EdgeMap::new(width, height);
        for p in points {
            map.insert(p.into())?;
        }
        Ok(map)
    }

    /// Thresholds `img`: a pixel is an edge iff its intensity is `>= threshold`.
    pub fn from_image(img: &GrayImage, threshold: u8) -> Self {
        let mut map = EdgeMap::new(img.width(), img.height());
        for y in 0..img.height() {
            for x in 0..img.width() {
                if img.get(x, y) >= threshold {
                    map.edges.insert(Point::new(x, y));
                }
            }
        }
        map
    }

    /// Rasterises the map with edges at [`EDGE_VALUE`] on a zero background.
    pub fn to_image(&self) -> GrayImage {
        let mut img = GrayImage::filled(self.width.max(1), self.height.max(1), 0);
        for p in &self.edges {
            img.set(p.x, p.y, EDGE_VALUE);
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn same_dimensions(&self, other: &EdgeMap) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch {
                left_width: self.width,
                left_height: self.height,
                right_width: other.width,
                right_height: other.height,
            });
        }
        Ok(())
    }

    pub fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Inserts a pixel. Returns `Ok(true)` if it was not already present.
    pub fn insert(&mut self, p: Point) -> Result<bool> {
        if p.x >= self.width || p.y >= self.height {
            return Err(Error::OutOfBounds {
                x: p.x as i64,
                y: p.y as i64,
                width: self.width,
                height: self.height,
            });
        }
        Ok(self.edges.insert(p))
    }

    pub fn remove(&mut self, p: &Point) -> bool {
        self.edges.remove(p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.edges.contains(p)
    }

    /// Cardinality `|E|`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge pixels in raster order.
    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.edges.iter().copied()
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.edges
    }

    /// Row-major occupancy mask.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.width * self.height];
        for p in &self.edges {
            mask[p.y * self.width + p.x] = true;
        }
        mask
    }
}

/// Thresholds an image into an edge map (`intensity >= threshold`).
pub fn edge_map_from_image(img: &GrayImage, threshold: u8) -> EdgeMap {
    EdgeMap::from_image(img, threshold)
}
