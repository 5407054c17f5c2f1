//! Shared fixtures for the criterion benchmarks.

use jndbem::synthetic::{degrade, render, Degradation, SceneSpec};
use jndbem::{EdgeMap, GrayImage};

/// Default scene image, its ground truth, and a jittered, partly dropped
/// candidate with some spurious pixels.
pub fn scene_fixture() -> (GrayImage, EdgeMap, EdgeMap) {
    let (img, gt) = render(&SceneSpec::default_scene()).expect("default scene renders");
    let mut dc = degrade(&gt, &Degradation::Jitter { max_r: 2, seed: 1 }).expect("jitter");
    dc = degrade(&dc, &Degradation::Drop { rate: 0.1, seed: 2 }).expect("drop");
    dc = degrade(&dc, &Degradation::AddSpurious { count: 100, seed: 3 }).expect("spurious");
    (img, gt, dc)
}
