//! Edge map quality evaluation built around a just-noticeable-difference
//! (JND) threshold on pixel displacement.
//!
//! The crate is organised bottom-up:
//!
//! * [`raster`]: grayscale images, binary edge maps, PGM I/O and the exact
//!   Euclidean distance transform.
//! * [`matching`]: one-to-one, depth-constrained partition of a candidate
//!   edge map against ground truth.
//! * [`measures`]: the JND-based measure, Pratt's figure of merit, MOS
//!   normalisation and correlation statistics.
//! * [`detectors`]: Sobel, Prewitt, Laplacian of Gaussian and Canny.
//! * [`synthetic`]: synthetic scenes with exact ground truth, plus edge map
//!   degradations.
//! * [`psychometrics`]: the forced-choice experiment used to calibrate the
//!   JND constant.
//!
//! Coordinates are `(x = column, y = row)` with the origin at the top-left
//! corner. "Raster order" means row-major, top-left first.

pub mod detectors;
mod error;
pub mod matching;
pub mod measures;
pub mod psychometrics;
pub mod raster;
pub mod synthetic;

pub use error::{Error, Result};
pub use matching::{partition, MatchConfig, MatchPair, MatchPartition};
pub use measures::{jndbem, pratt_fom, EdgeMeasure, MeasureParams, Score};
pub use raster::{distance_transform, DistanceField, EdgeMap, GrayImage, Point};
