//! Exact Euclidean distance transform.
//!
//! Two separable passes of the Felzenszwalb-Huttenlocher lower-envelope
//! algorithm, carried out entirely in integer arithmetic so that every
//! squared distance is exact.

use super::{EdgeMap, Point};
use crate::{Error, Result};

/// Squared Euclidean distance between two pixels.
#[inline]
pub fn squared_distance(a: Point, b: Point) -> u64 {
    let dx = a.x.abs_diff(b.x) as u64;
    let dy = a.y.abs_diff(b.y) as u64;
    dx * dx + dy * dy
}

#[inline]
pub fn euclidean_distance(a: Point, b: Point) -> f64 {
    (squared_distance(a, b) as f64).sqrt()
}

/// Per-pixel distance to the nearest edge pixel of a source map.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    width: usize,
    height: usize,
    squared: Vec<u64>,
}

impl DistanceField {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Exact squared distance at `(x, y)`.
    #[inline]
    pub fn squared(&self, x: usize, y: usize) -> u64 {
        self.squared[y * self.width + x]
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        (self.squared(x, y) as f64).sqrt()
    }

    /// Row-major distances.
    pub fn values(&self) -> Vec<f64> {
        self.squared.iter().map(|&s| (s as f64).sqrt()).collect()
    }
}

const UNREACHED: u64 = u64::MAX;

/// Exact Euclidean distance transform of `map`.
pub fn distance_transform(map: &EdgeMap) -> Result<DistanceField> {
    if map.is_empty() {
        return Err(Error::NoEdgePixels);
    }
    let (w, h) = (map.width(), map.height());
    let mask = map.mask();

    // columns: squared distance to nearest edge in the same column
    let mut col = vec![UNREACHED; w * h];
    let mut f = vec![UNREACHED; h];
    let mut out = vec![0u64; h];
    for x in 0..w {
        for y in 0..h {
            f[y] = if mask[y * w + x] { 0 } else { UNREACHED };
        }
        lower_envelope(&f, &mut out);
        for y in 0..h {
            col[y * w + x] = out[y];
        }
    }

    // rows: combine column results
    let mut squared = vec![0u64; w * h];
    let mut f = vec![UNREACHED; w];
    let mut out = vec![0u64; w];
    for y in 0..h {
        f.copy_from_slice(&col[y * w..(y + 1) * w]);
        lower_envelope(&f, &mut out);
        squared[y * w..(y + 1) * w].copy_from_slice(&out);
    }

    Ok(DistanceField {
        width: w,
        height: h,
        squared,
    })
}

/// Abscissa where the parabolas rooted at `q` and `v` (`v < q`) intersect,
/// as an exact fraction `num / den` with `den > 0`.
#[inline]
fn intersection(f: &[u64], v: usize, q: usize) -> (i128, i128) {
    let fq = f[q] as i128 + (q as i128) * (q as i128);
    let fv = f[v] as i128 + (v as i128) * (v as i128);
    (fq - fv, 2 * (q as i128 - v as i128))
}

/// `a <= b` for fractions with positive denominators.
#[inline]
fn frac_le(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 <= b.0 * a.1
}

/// 1-D squared distance transform of sampled function `f`. Entries equal to
/// `UNREACHED` are absent sites. If there are no sites, `out` is all `UNREACHED`.
fn lower_envelope(f: &[u64], out: &mut [u64]) {
    let n = f.len();
    let mut sites: Vec<usize> = Vec::with_capacity(n);
    // boundaries[k] is where sites[k] starts to dominate; boundaries[0] is -inf
    let mut boundaries: Vec<(i128, i128)> = Vec::with_capacity(n);

    for q in (0..n).filter(|&q| f[q] != UNREACHED) {
        loop {
            let Some(&v) = sites.last() else {
                sites.push(q);
                boundaries.push((0, 0));
                break;
            };
            let s = intersection(f, v, q);
            if sites.len() > 1 && frac_le(s, boundaries[sites.len() - 1]) {
                sites.pop();
                boundaries.pop();
                continue;
            }
            sites.push(q);
            boundaries.push(s);
            break;
        }
    }

    if sites.is_empty() {
        out.fill(UNREACHED);
        return;
    }

    let mut k = 0;
    for (q, slot) in out.iter_mut().enumerate() {
        // advance while the next boundary lies strictly left of q
        while k + 1 < sites.len() && boundaries[k + 1].0 < (q as i128) * boundaries[k + 1].1 {
            k += 1;
        }
        let v = sites[k];
        let d = q.abs_diff(v) as u64;
        *slot = f[v] + d * d;
    }
}
