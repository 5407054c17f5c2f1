mod support;

use jndbem::measures::{jndbem, pratt_fom, MeasureParams, DEFAULT_ALPHA};
use jndbem::psychometrics::{analyze, build_schedule, simulate_observer};
use jndbem::synthetic::{degrade, render, Degradation, Primitive, SceneSpec};
use jndbem::{distance_transform, partition, EdgeMap, MatchConfig};
use rand::Rng;
use support::*;

#[test]
fn distance_transform_matches_brute_force() {
    let mut r = rng(100);
    for case in 0..100 {
        let (w, h) = (r.random_range(1..=16), r.random_range(1..=16));
        let map = random_nonempty_map(&mut r, w, h, 12);
        let field = distance_transform(&map).unwrap();
        let expected = brute_force_squared_field(&map);
        for y in 0..h {
            for x in 0..w {
                assert_eq!(field.squared(x, y), expected[y * w + x], "case {case} at ({x},{y})");
                assert_eq!(field.get(x, y), (expected[y * w + x] as f64).sqrt());
            }
        }
    }
}

#[test]
fn distance_transform_dense_and_sparse_extremes() {
    let mut r = rng(7);
    for density in [1usize, 3, 60, 250] {
        let map = random_nonempty_map(&mut r, 16, 16, density);
        let field = distance_transform(&map).unwrap();
        let expected = brute_force_squared_field(&map);
        let got: Vec<u64> = (0..256).map(|i| field.squared(i % 16, i / 16)).collect();
        assert_eq!(got, expected, "density {density}");
    }
}

#[test]
fn partition_matches_naive_oracle() {
    let mut r = rng(200);
    let cfg = MatchConfig::default();
    for case in 0..200 {
        let (w, h) = (r.random_range(1..=12), r.random_range(1..=12));
        let gt = random_map(&mut r, w, h, 8);
        let dc = random_map(&mut r, w, h, 8);
        let part = partition(&gt, &dc, &cfg).unwrap();
        part.check(&gt, &dc, &cfg).unwrap_or_else(|e| panic!("case {case}: {e}"));

        let oracle = oracle_partition(&gt, &dc, cfg.jnd, cfg.max_depth);
        let pts = |s: &std::collections::BTreeSet<jndbem::Point>| s.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>();
        let pairs = |v: &[jndbem::MatchPair]| {
            v.iter().map(|m| ((m.gt.x, m.gt.y), (m.candidate.x, m.candidate.y), m.distance)).collect::<Vec<_>>()
        };
        assert_eq!(pts(&part.correct), oracle.correct, "case {case}");
        assert_eq!(pairs(&part.under_jnd), oracle.under_jnd, "case {case}");
        assert_eq!(pairs(&part.misplaced), oracle.misplaced, "case {case}");
        assert_eq!(pts(&part.missed), oracle.missed, "case {case}");
        assert_eq!(pts(&part.spurious), oracle.spurious, "case {case}");
    }
}

#[test]
fn partition_matches_oracle_with_small_depth() {
    // short radius exercises the missed/spurious paths much more often
    let mut r = rng(201);
    let cfg = MatchConfig::new(1.5, 2.5).unwrap();
    for _ in 0..200 {
        let gt = random_map(&mut r, 12, 12, 10);
        let dc = random_map(&mut r, 12, 12, 10);
        let part = partition(&gt, &dc, &cfg).unwrap();
        part.check(&gt, &dc, &cfg).unwrap();
        let oracle = oracle_partition(&gt, &dc, cfg.jnd, cfg.max_depth);
        assert_eq!(part.missed.len(), oracle.missed.len());
        assert_eq!(part.spurious.len(), oracle.spurious.len());
        assert_eq!(part.misplaced.len(), oracle.misplaced.len());
    }
}

#[test]
fn jndbem_matches_from_scratch_evaluation() {
    let mut r = rng(300);
    let params = MeasureParams::default();
    for case in 0..200 {
        let (w, h) = (r.random_range(1..=12), r.random_range(1..=12));
        let gt = random_map(&mut r, w, h, 8);
        let dc = random_map(&mut r, w, h, 8);
        let got = jndbem(&gt, &dc, &params).unwrap().value;
        let want = oracle_jndbem(&gt, &dc, params.alpha, params.matching.jnd, params.matching.max_depth);
        assert!((got - want).abs() < 1e-12, "case {case}: {got} vs {want}");
    }
}

#[test]
fn fom_matches_exhaustive_search() {
    let mut r = rng(301);
    for case in 0..200 {
        let (w, h) = (r.random_range(1..=14), r.random_range(1..=14));
        let gt = random_map(&mut r, w, h, 10);
        let dc = random_map(&mut r, w, h, 10);
        let got = pratt_fom(&gt, &dc, DEFAULT_ALPHA).unwrap().value;
        let want = oracle_fom(&gt, &dc, DEFAULT_ALPHA);
        assert!((got - want).abs() < 1e-12, "case {case}: {got} vs {want}");
    }
}

fn covered_mask(spec: &SceneSpec) -> Vec<bool> {
    let mut mask = vec![false; spec.width * spec.height];
    for y in 0..spec.height {
        for x in 0..spec.width {
            mask[y * spec.width + x] = spec.primitives.iter().any(|p| match *p {
                Primitive::Rect { x: rx, y: ry, width, height, .. } => {
                    x >= rx && x < rx + width && y >= ry && y < ry + height
                }
                Primitive::Circle { cx, cy, radius, .. } => {
                    let (dx, dy) = (x as i64 - cx as i64, y as i64 - cy as i64);
                    dx * dx + dy * dy <= (radius * radius) as i64
                }
                Primitive::Line { .. } => unreachable!("scenes here use areas only"),
            });
        }
    }
    mask
}

#[test]
fn rendered_ground_truth_matches_boundary_scan() {
    let mut r = rng(400);
    let mut scenes = vec![SceneSpec::default_scene()];
    for _ in 0..30 {
        let (w, h) = (r.random_range(8..40), r.random_range(8..40));
        let mut prims = Vec::new();
        for _ in 0..r.random_range(0..5) {
            if r.random_bool(0.5) {
                let (x, y) = (r.random_range(0..w - 1), r.random_range(0..h - 1));
                prims.push(Primitive::Rect {
                    x,
                    y,
                    width: r.random_range(1..=w - x),
                    height: r.random_range(1..=h - y),
                    intensity: r.random_range(0..4) * 80,
                });
            } else {
                let radius = r.random_range(0..4);
                prims.push(Primitive::Circle {
                    cx: r.random_range(radius..w - radius),
                    cy: r.random_range(radius..h - radius),
                    radius,
                    intensity: r.random_range(0..4) * 80,
                });
            }
        }
        scenes.push(SceneSpec { width: w, height: h, background: 0, primitives: prims });
    }
    // hidden shared boundary between equal-intensity overlapping rectangles
    scenes.push(SceneSpec {
        width: 30,
        height: 20,
        background: 0,
        primitives: vec![
            Primitive::Rect { x: 2, y: 2, width: 12, height: 10, intensity: 200 },
            Primitive::Rect { x: 10, y: 4, width: 12, height: 10, intensity: 200 },
        ],
    });

    for (i, spec) in scenes.iter().enumerate() {
        let (img, gt) = render(spec).unwrap();
        let expected = boundary_scan(&img, &covered_mask(spec));
        assert_eq!(gt.iter().collect::<Vec<_>>(), expected, "scene {i}");
    }

    let (_, gt) = render(scenes.last().unwrap()).unwrap();
    // (13, 5) lies on the first rectangle's right side, inside the second
    assert!(!gt.contains(&jndbem::Point::new(13, 5)));
    assert!(!gt.contains(&jndbem::Point::new(10, 6)));
}

#[test]
fn analyze_matches_direct_tally() {
    for seed in 0..20 {
        let schedule = build_schedule(10, seed).unwrap();
        let log = simulate_observer(&schedule, 2.0, 0.02, seed + 1000).unwrap();
        let curve = analyze(&schedule, &log).unwrap();
        for point in &curve.points {
            let (mut n, mut k) = (0, 0);
            for rec in &log {
                let t = schedule.trials.iter().find(|t| t.trial_id == rec.trial_id).unwrap();
                if t.comparison_distance == point.distance {
                    n += 1;
                    if rec.chosen_side == t.comparison_side {
                        k += 1;
                    }
                }
            }
            assert_eq!((point.n_trials, point.comparison_chosen), (n, k));
            assert_eq!(point.proportion, k as f64 / n as f64);
        }
    }
}

#[test]
fn translation_response_on_isolated_vertical_edges() {
    // vertical lines 24 px apart: each GT pixel's nearest free candidate is its own translate
    let pts = (0..4).flat_map(|i| (20..80).map(move |y| (20 + 24 * i, y)));
    let gt = EdgeMap::from_points(128, 100, pts).unwrap();
    let params = MeasureParams::default();
    for k in [1i64, 2, 3, 5] {
        let dc = degrade(&gt, &Degradation::Translate { dx: k, dy: 0 }).unwrap();
        let want = if k == 1 { 1.0 } else { 1.0 / (1.0 + (k * k) as f64 / 9.0) };
        let got = jndbem(&gt, &dc, &params).unwrap().value;
        assert!((got - want).abs() < 1e-9, "k={k}: {got} vs {want}");
        assert!((got - support::oracle_jndbem(&gt, &dc, DEFAULT_ALPHA, 2.0, 9.0)).abs() < 1e-12);
    }
}
