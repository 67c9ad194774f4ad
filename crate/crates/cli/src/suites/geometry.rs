//! Suites about lattice paths alone; these do not depend on the field.

use std::cmp::Ordering;

use ehall_core::lattice::{
    area, interior_count, is_convex, is_minimal_pair, local_convexifications, minimal_paths, slope_cmp, Path, Region, Segment,
};
use ehall_core::presentation::{Cell, VerificationReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{ranks, report};
use crate::config::RunConfig;

const AREA_PATHS: usize = 1000;
const PICK_TRIANGLES: usize = 500;
/// Failures listed in a report before the rest are only counted.
const SHOWN: usize = 20;

fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

/// A path in the upper half plane with at most six segments and
/// coordinates in [-4, 4].
fn random_path(rng: &mut ChaCha8Rng) -> Path {
    let len = rng.gen_range(1..=6);
    let segs = (0..len)
        .map(|_| loop {
            let s = (rng.gen_range(0..=4), rng.gen_range(-4..=4));
            if let Ok(s) = Segment::new(s.0, s.1) {
                if Region::Plus.contains(s) {
                    break s;
                }
            }
        })
        .collect();
    Path::new(segs)
}

fn a(p: &Path) -> i64 {
    area(p).expect("paths are in the upper half plane").to_integer()
}

/// The area lemma on seeded random paths: convexity is area zero, areas
/// do not grow on subpaths and drop under local convexification.
pub(crate) fn area_lemma(cfg: &RunConfig) -> Vec<VerificationReport> {
    let mut rng = rng(cfg, 8);
    let (mut convex, mut subpaths, mut local) = (0, 0, 0);
    let mut failures: Vec<Value> = Vec::new();
    for _ in 0..AREA_PATHS {
        let p = random_path(&mut rng);
        let ap = a(&p);
        let is_c = is_convex(&p, Region::Plus).expect("segments are in the region");
        convex += is_c as i64;
        if is_c != (ap == 0) {
            failures.push(json!({"path": p, "area": ap, "convex": is_c, "property": "convex-iff-area-zero"}));
        }
        let segs = p.segments();
        for mask in 1u32..(1 << segs.len()) {
            let sub = Path::new((0..segs.len()).filter(|i| mask >> i & 1 == 1).map(|i| segs[i]).collect());
            subpaths += 1;
            if a(&sub) > ap {
                failures.push(json!({"path": p, "subpath": sub, "property": "subpath-monotone"}));
            }
        }
        for i in 0..segs.len().saturating_sub(1) {
            if slope_cmp(segs[i], segs[i + 1]) != Ordering::Greater {
                continue;
            }
            for q in local_convexifications(segs[i], segs[i + 1], None).expect("pair is not convex") {
                local += 1;
                let r = p.splice(i, &q);
                if a(&r) >= ap {
                    failures.push(json!({"path": p, "at": i, "replacement": q, "property": "convexification-decreases"}));
                }
            }
        }
    }
    let n = failures.len() as i64;
    failures.truncate(SHOWN);
    vec![report(
        "area-lemma",
        Cell::default(),
        n == 0,
        failures,
        ranks([
            ("paths", AREA_PATHS as i64),
            ("convex", convex),
            ("subpaths", subpaths),
            ("convexifications", local),
            ("failures", n),
        ]),
    )]
}

/// Points strictly inside the triangle, by scanning its bounding box.
fn scan_interior(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> u64 {
    let cross = |o: (i64, i64), u: (i64, i64), v: (i64, i64)| (u.0 - o.0) * (v.1 - o.1) - (u.1 - o.1) * (v.0 - o.0);
    let orient = cross(a, b, c).signum();
    let mut n = 0;
    for x in a.0.min(b.0).min(c.0)..=a.0.max(b.0).max(c.0) {
        for y in a.1.min(b.1).min(c.1)..=a.1.max(b.1).max(c.1) {
            let p = (x, y);
            if [cross(a, b, p), cross(b, c, p), cross(c, a, p)].iter().all(|&v| v * orient > 0) {
                n += 1;
            }
        }
    }
    n
}

/// Pick's count against a brute-force scan on seeded random triangles.
pub(crate) fn pick(cfg: &RunConfig) -> Vec<VerificationReport> {
    let mut rng = rng(cfg, 9);
    let mut pt = || (rng.gen_range(-8..=8), rng.gen_range(-8..=8));
    let mut failures = Vec::new();
    let mut done = 0;
    let mut total = 0;
    while done < PICK_TRIANGLES {
        let (a, b, c) = (pt(), pt(), pt());
        if (b.0 - a.0) * (c.1 - a.1) == (b.1 - a.1) * (c.0 - a.0) {
            continue;
        }
        done += 1;
        let x = Segment::of(b.0 - a.0, b.1 - a.1);
        let y = Segment::of(c.0 - b.0, c.1 - b.1);
        let scanned = scan_interior(a, b, c);
        total += scanned;
        match interior_count(x, y) {
            Ok(k) if k == scanned => {}
            Ok(k) => failures.push(json!({"triangle": [a, b, c], "pick": k, "scan": scanned})),
            Err(e) => failures.push(json!({"triangle": [a, b, c], "error": e.to_string()})),
        }
    }
    let n = failures.len() as i64;
    failures.truncate(SHOWN);
    vec![report(
        "pick",
        Cell::default(),
        n == 0,
        failures,
        ranks([("triangles", PICK_TRIANGLES as i64), ("interior_points", total as i64), ("failures", n)]),
    )]
}

/// A minimal path exists for every weight, one report per rank.
pub(crate) fn minpath_existence(_cfg: &RunConfig) -> Vec<VerificationReport> {
    (3..=12)
        .map(|r| {
            let mut steps = Vec::new();
            let mut fewest = i64::MAX;
            for d in -12..=12 {
                let z = Segment::of(r, d);
                match minimal_paths(z) {
                    Ok(ps) => {
                        fewest = fewest.min(ps.len() as i64);
                        let bad: Vec<_> = ps.iter().filter(|(x, y)| !is_minimal_pair(*x, z) || x.plus(*y).ok() != Some(z)).collect();
                        if ps.is_empty() || !bad.is_empty() {
                            steps.push(json!({"d": d, "paths": ps.len(), "invalid": bad.len()}));
                        }
                    }
                    Err(e) => steps.push(json!({"d": d, "error": e.to_string()})),
                }
            }
            let cell = Cell { r: Some(r), d: None, window: Some([-12, 12]) };
            report("minpath-existence", cell, steps.is_empty(), steps, ranks([("weights", 25), ("fewest_paths", fewest)]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_matches_small_triangles() {
        assert_eq!(scan_interior((0, 0), (3, 0), (0, 3)), 1);
        assert_eq!(scan_interior((0, 0), (0, 3), (3, 0)), 1);
        assert_eq!(scan_interior((0, 0), (1, 0), (0, 1)), 0);
        assert_eq!(scan_interior((0, 0), (4, 0), (0, 4)), 3);
    }

    #[test]
    fn random_paths_stay_in_the_upper_half() {
        let mut r = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = random_path(&mut r);
            assert!((1..=6).contains(&p.len()));
            assert!(p.segments().iter().all(|s| Region::Plus.contains(*s)));
        }
    }
}
