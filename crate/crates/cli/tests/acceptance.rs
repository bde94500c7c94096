//! Acceptance suite. Prints one PASS/FAIL line per criterion to stderr
//! (visible without `--nocapture`) and fails if any criterion regresses.
//!
//! Two criteria are stated more strongly than the mathematics allows; their
//! lines report the literal reading, and the suite asserts the corrected
//! statement printed next to it (see `KNOWN_LITERAL_FAILURES`).

use std::io::Write;
use std::path::Path;
use std::process::Command;

use stretch_core::stretch::{asymmetry_bound, find_reparam, ratio_bound, transverse_bounds};
use stretch_core::{CylinderSpec, ExtScalar, RaySpec, TransverseCurveData};
use stretch_oracle::{self as oracle, CorpusConfig, RawCylinder, Rng};

const CORPUS_SIZE: usize = 1000;
const REL_TOL_HEIGHT: f64 = 1e-10;
const REL_TOL_POINTS: f64 = 1e-10;
const ABS_TOL_MIN_LEAF: f64 = 1e-9;
const GRID_STEPS: usize = 1_000_000;
const MIN_CLAMPED: usize = 50;
/// Log-domain rounding slack for `h' <= h <= h*`.
const SANDWICH_SLACK: f64 = 1e-12;
const ASYM_TOL_40: f64 = 1e-3;
const ASYM_TOL_80: f64 = 1e-6;
const ENDPOINT_TOL: f64 = 1e-3;
const DIVERGENCE_PAIRS: usize = 100;
const DIVERGENCE_NATS: f64 = 10.0;
const ASYMMETRY_TOL: f64 = 5e-2;
const TRANSVERSE_RATIO_TOL: f64 = 1e-12;

type Check = fn() -> Outcome;

/// Criteria whose literal statement is false in general. The suite still
/// asserts the corrected statement for them.
const KNOWN_LITERAL_FAILURES: [usize; 2] = [2, 7];

struct Outcome {
    /// The criterion as written.
    literal: bool,
    /// What the suite asserts; equal to `literal` except for the criteria in
    /// `KNOWN_LITERAL_FAILURES`.
    asserted: bool,
    detail: String,
}

impl Outcome {
    fn plain(pass: bool, detail: String) -> Self {
        Outcome {
            literal: pass,
            asserted: pass,
            detail,
        }
    }
}

fn spec(raw: &RawCylinder) -> CylinderSpec {
    CylinderSpec::from_arcs("c", raw.width, raw.bands.clone()).unwrap()
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

/// Smallest `t` (up to a few ulps) with `e^t w >= target`.
fn first_time_reaching(w: f64, target: f64) -> f64 {
    let mut t = (target / w).ln();
    while t.exp() * w < target {
        t += 1e-15 * t.abs().max(1.0);
    }
    t
}

fn main_corpus() -> Vec<RawCylinder> {
    oracle::corpus(0xacce_0001, CORPUS_SIZE, &CorpusConfig::default())
}

fn small_width_corpus() -> Vec<RawCylinder> {
    let cfg = CorpusConfig {
        width_range: (0.05, 0.3),
        non_unit_range: (0.01, 0.9),
        ..CorpusConfig::default()
    };
    oracle::corpus(0xacce_0005, CORPUS_SIZE, &cfg)
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut angle_mismatch = 0;
    let mut cases = 0;
    for raw in main_corpus() {
        let cyl = spec(&raw);
        for t in [0.0, 0.5, 1.0] {
            let xs = oracle::boundary_points(&raw, t);
            let exact = oracle::cosh_height_by_ratio(&xs);
            if exact != oracle::cosh_height_by_angle(&xs) {
                angle_mismatch += 1;
            }
            let got = 1.0 + cyl.cosh_height_minus_one(t, 0).unwrap().to_f64();
            worst = worst.max(rel(got, oracle::to_f64(&exact)));
            cases += 1;
        }
    }
    Outcome::plain(
        worst <= REL_TOL_HEIGHT && angle_mismatch == 0,
        format!(
            "{cases} cases, max rel err of 1 + 2bc vs exact ratio formula {worst:.2e} (tol {REL_TOL_HEIGHT:e}); angle form differs in {angle_mismatch}"
        ),
    )
}

fn interlaced<T: PartialOrd>(xs: &[T]) -> bool {
    let odd: Vec<&T> = xs.iter().step_by(2).collect();
    let even: Vec<&T> = xs.iter().skip(1).step_by(2).collect();
    odd.windows(2).all(|p| p[0] < p[1]) && even.windows(2).all(|p| p[0] > p[1]) && odd.last() < even.last()
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let (mut cases, mut not_increasing, mut not_interlaced, mut multi_band) = (0, 0, 0, 0);
    for raw in main_corpus() {
        let cyl = spec(&raw);
        for t in [0.0, 0.5, 1.0] {
            let exact = oracle::boundary_points(&raw, t);
            let got: Vec<ExtScalar> = cyl
                .boundary_points(t, 0)
                .unwrap()
                .iter()
                .map(|p| p.finite().unwrap())
                .collect();
            for (g, w) in got.iter().zip(&exact) {
                worst = worst.max(rel(g.to_f64(), oracle::to_f64(w)));
            }
            if !got.windows(2).all(|p| p[0] < p[1]) {
                not_increasing += 1;
            }
            if !interlaced(&got) || !interlaced(&exact) {
                not_interlaced += 1;
            }
            if raw.bands.len() > 2 {
                multi_band += 1;
            }
            cases += 1;
        }
    }
    let agree = worst <= REL_TOL_POINTS;
    Outcome {
        literal: agree && not_increasing == 0,
        asserted: agree && not_interlaced == 0,
        detail: format!(
            "{cases} cases, max rel err matrix vs nested fraction {worst:.2e} (tol {REL_TOL_POINTS:e}); \
             x_1 < x_2 < ... fails in {not_increasing} cases ({multi_band} have N >= 2, where x_3 < x_2 always); \
             convergent interlacing x_1 < x_3 < ... < x_4 < x_2 fails in {not_interlaced}"
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = oracle::rng(0xacce_0003);
    let cfg = CorpusConfig::default();
    let (mut worst, mut clamped): (f64, usize) = (0.0, 0);
    for _ in 0..CORPUS_SIZE {
        let raw = oracle::random_cylinder(&mut rng, &cfg);
        let t = rng.gen_range(-1.5..=1.0);
        let (a_i, a_p) = raw.side_sums(t);
        let (_, grid) = oracle::grid_min_leaf(a_i, a_p, t.exp() * raw.width, GRID_STEPS);
        let m = spec(&raw).min_leaf(t);
        clamped += usize::from(!m.interior);
        worst = worst.max((m.h_star.to_f64() - grid).abs());
    }
    Outcome::plain(
        worst <= ABS_TOL_MIN_LEAF && clamped >= MIN_CLAMPED,
        format!(
            "{CORPUS_SIZE} instances, max |h* - grid min| {worst:.2e} (tol {ABS_TOL_MIN_LEAF:e}, step w(t)/{GRID_STEPS}); {clamped} clamped (need {MIN_CLAMPED})"
        ),
    )
}

fn criterion_4() -> Outcome {
    let (mut checked, mut violations) = (0, 0);
    for raw in main_corpus() {
        let cyl = spec(&raw);
        let far = [40.0, 80.0].map(|target| first_time_reaching(raw.width, target));
        for t in [-1.0, 0.0, 1.0, 2.0, 3.0].into_iter().chain(far) {
            let b = cyl.bracket(t).unwrap();
            checked += 1;
            if !b.is_ordered(SANDWICH_SLACK) {
                violations += 1;
            }
        }
    }
    Outcome::plain(
        violations == 0,
        format!("{checked} brackets, {violations} violations of h' <= h <= h* (log slack {SANDWICH_SLACK:e})"),
    )
}

fn criterion_5() -> Outcome {
    let (mut worst40, mut worst80): (f64, f64) = (0.0, 0.0);
    for raw in small_width_corpus() {
        let cyl = spec(&raw);
        let law = cyl.asymptote();
        for target in [40.0, 80.0] {
            let t = first_time_reaching(raw.width, target);
            let asym = law.length_at(t);
            let b = cyl.bracket(t).unwrap();
            for v in [b.lower, b.upper, b.crosscheck_lower] {
                let dev = ((v.logmag() - asym.logmag()).exp() - 1.0).abs();
                if target == 40.0 {
                    worst40 = worst40.max(dev);
                } else {
                    worst80 = worst80.max(dev);
                }
            }
        }
    }
    Outcome::plain(
        worst40 <= ASYM_TOL_40 && worst80 <= ASYM_TOL_80,
        format!(
            "{CORPUS_SIZE} cylinders (w in [0.05, 0.3], non-unit arcs <= 0.9): max |ratio - 1| {worst40:.2e} at e^t w = 40 (tol {ASYM_TOL_40:e}), {worst80:.2e} at 80 (tol {ASYM_TOL_80:e})"
        ),
    )
}

fn criterion_6() -> Outcome {
    let (mut worst_low, mut worst_high): (f64, f64) = (0.0, 0.0);
    for raw in small_width_corpus() {
        let cyl = spec(&raw);
        let (a_i, a_p) = raw.limit_side_sums();
        let t = first_time_reaching(raw.width, 40.0);
        let xs = cyl.boundary_points(t, 0).unwrap();
        let n = xs.len();
        let low = xs[n - 2].finite().unwrap();
        let high = xs[n - 1].finite().unwrap() * ExtScalar::from_log(-t.exp() * raw.width);
        worst_low = worst_low.max(rel(low.to_f64(), a_i));
        worst_high = worst_high.max(rel(high.to_f64(), 1.0 / a_p));
    }
    Outcome::plain(
        worst_low <= ENDPOINT_TOL && worst_high <= ENDPOINT_TOL,
        format!(
            "max rel err x_2N-1 vs a_i(inf) {worst_low:.2e}, x_2N e^-w(t) vs 1/a_p(inf) {worst_high:.2e} at e^t w = 40 (tol {ENDPOINT_TOL:e})"
        ),
    )
}

fn random_ray(rng: &mut impl Rng, id: &str, weights: &[f64]) -> RaySpec {
    let cfg = CorpusConfig::default();
    let cyls = weights
        .iter()
        .enumerate()
        .map(|(j, &w)| {
            let raw = oracle::random_cylinder(rng, &cfg);
            CylinderSpec::from_arcs(format!("l{j}"), w, raw.bands).unwrap()
        })
        .collect();
    RaySpec::new(id, 0.0, cyls).unwrap()
}

/// Both directed bounds after the witness, on 21 points ending at `t_end`:
/// `(last values exceed the threshold, last three points increase)`.
fn divergence_at(g: &RaySpec, moved: &RaySpec, t_end: f64) -> (bool, bool, f64) {
    let grid: Vec<f64> = (0..=20).map(|k| t_end - 2.0 + 0.1 * k as f64).collect();
    let cols: Vec<(f64, f64)> = grid
        .iter()
        .map(|&t| (ratio_bound(g, moved, t).unwrap(), ratio_bound(moved, g, t).unwrap()))
        .collect();
    let last = cols[cols.len() - 1];
    let tail = &cols[cols.len() - 3..];
    let big = last.0 > DIVERGENCE_NATS && last.1 > DIVERGENCE_NATS;
    let increasing = tail.windows(2).all(|p| p[1].0 > p[0].0 && p[1].1 > p[0].1);
    (big, increasing, last.0.min(last.1))
}

fn criterion_7() -> Outcome {
    let mut rng = oracle::rng(0xacce_0007);
    let (mut witness_ok, mut literal_ok, mut gap_ok) = (0, 0, 0);
    let mut literal_min = f64::INFINITY;
    for _ in 0..DIVERGENCE_PAIRS {
        let m = rng.gen_range(2..=4);
        let (wg, wh) = oracle::weight_pair(&mut rng, m, 1e-3);
        let g = random_ray(&mut rng, "g", &wg);
        let h = random_ray(&mut rng, "h", &wh);
        let r = find_reparam(&g, &h).unwrap();
        let moved = h.shifted(r.u);
        let w = |ray: &RaySpec, id: &str| ray.effective_weight(id).unwrap();
        let gap0 = w(&g, &r.j0) - w(&moved, &r.j0);
        let gap1 = w(&moved, &r.j1) - w(&g, &r.j1);
        if gap0 > 0.0 && gap1 > 0.0 {
            witness_ok += 1;
        }
        let min_w = g
            .core_ids()
            .flat_map(|id| [w(&g, id), w(&moved, id)])
            .fold(f64::INFINITY, f64::min);
        let (big, inc, low) = divergence_at(&g, &moved, first_time_reaching(min_w, 40.0));
        literal_min = literal_min.min(low);
        if big && inc {
            literal_ok += 1;
        }
        let (big, inc, _) = divergence_at(&g, &moved, first_time_reaching(gap0.min(gap1), 40.0));
        if big && inc {
            gap_ok += 1;
        }
    }
    let n = DIVERGENCE_PAIRS;
    Outcome {
        literal: witness_ok == n && literal_ok == n,
        asserted: witness_ok == n && gap_ok == n,
        detail: format!(
            "{n} pairs: witness strict inequalities {witness_ok}/{n}; both bounds > {DIVERGENCE_NATS} nats and increasing \
             at e^t min w >= 40: {literal_ok}/{n} (smallest {literal_min:.2} nats; near-proportional pairs have \
             bound ~ 20(1 - e^(-spread/2))); at e^t min(witness gaps) >= 40: {gap_ok}/{n}"
        ),
    }
}

fn criterion_8() -> Outcome {
    let cyl = CylinderSpec::from_arcs("l1", 1.0, vec![vec![1.0], vec![1.0]]).unwrap();
    let ray = RaySpec::new("r", 0.0, vec![cyl]).unwrap();
    let c = 1.0;
    let t = first_time_reaching(1.0, 40.0);
    let a = asymmetry_bound(&ray, t, c).unwrap();
    let expected = t.exp() * (c.exp() - 1.0) / 2.0;
    let err = rel(a.backward_lower, expected);
    Outcome::plain(
        a.forward == c && a.backward_lower > 10.0 && err <= ASYMMETRY_TOL,
        format!(
            "forward = {} (c = {c}); backward lower bound {:.4} nats vs e^t w (e^c - 1)/2 = {expected:.4}, rel err {err:.2e} (tol {ASYMMETRY_TOL:e})",
            a.forward, a.backward_lower
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = oracle::rng(0xacce_0009);
    let cfg = CorpusConfig::default();
    let (mut order_bad, mut worst_ratio, mut gap_bad, mut not_vanishing): (usize, f64, usize, usize) = (0, 0.0, 0, 0);
    let mut cases = 0;
    for i in 0..200 {
        let cores = rng.gen_range(1..=3);
        let cyls: Vec<CylinderSpec> = (0..cores)
            .map(|j| {
                let raw = oracle::random_cylinder(&mut rng, &cfg);
                CylinderSpec::from_arcs(format!("l{j}"), raw.width, raw.bands).unwrap()
            })
            .collect();
        let ray = RaySpec::new(format!("r{i}"), rng.gen_range(-1.0..=1.0), cyls).unwrap();
        let curve = TransverseCurveData {
            id: "a".into(),
            crossings: (0..cores).map(|j| (format!("l{j}"), rng.gen_range(1..=4))).collect(),
            turnings: (0..cores).map(|j| (format!("l{j}"), rng.gen_range(0..=3))).collect(),
        };
        let mut prev_turning = f64::INFINITY;
        let mut last_turning = 0.0;
        for k in 0..12 {
            let t = k as f64;
            let now = transverse_bounds(&curve, &ray, t).unwrap();
            let next = transverse_bounds(&curve, &ray, t + 1.0).unwrap();
            cases += 1;
            if now.lower > now.upper {
                order_bad += 1;
            }
            let ratio = (next.lower.logmag() - now.lower.logmag()).exp();
            worst_ratio = worst_ratio.max(rel(ratio, std::f64::consts::E));
            let gap = now.upper.to_f64() - now.lower.to_f64();
            let turning = now.turning.to_f64();
            if (gap - turning).abs() > 1e-12 * now.upper.to_f64() || turning > prev_turning {
                gap_bad += 1;
            }
            prev_turning = turning;
            last_turning = turning;
        }
        if last_turning > 1e-6 {
            not_vanishing += 1;
        }
    }
    Outcome::plain(
        order_bad == 0 && worst_ratio <= TRANSVERSE_RATIO_TOL && gap_bad == 0 && not_vanishing == 0,
        format!(
            "{cases} evaluations: lower > upper in {order_bad}; max rel err lower(t+1)/lower(t) vs e {worst_ratio:.2e} (tol {TRANSVERSE_RATIO_TOL:e}); \
             upper - lower != sum m_j h*_j or increasing in {gap_bad}; turning term above 1e-6 at t = 11 for {not_vanishing} rays"
        ),
    )
}

fn run_binary(args: &[&str], threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_stretch-lab"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion_10() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let fixtures = ["minimal.json", "unit_w2.json", "two_rays.json", "identical.json", "disjoint.json", "curves.json"];
    let (mut runs, mut mismatches) = (0, 0);
    for name in fixtures {
        let path = dir.join(name);
        let input = path.to_str().unwrap();
        let mut commands = vec![vec!["sweep", "--input", input, "--format", "csv", "--t-min", "-1", "--t-max", "6", "--steps", "57"]];
        if name != "minimal.json" && name != "unit_w2.json" && name != "curves.json" {
            commands.push(vec!["compare", "--input", input, "--format", "csv", "--t-max", "5", "--steps", "51"]);
        }
        for args in commands {
            let first = run_binary(&args, "1");
            for threads in ["1", "4", "8"] {
                runs += 1;
                if run_binary(&args, threads) != first {
                    mismatches += 1;
                }
            }
        }
    }
    Outcome::plain(
        mismatches == 0,
        format!("{runs} repeated sweep/compare CSV runs on {} fixtures (1, 4, 8 threads): {mismatches} differ", fixtures.len()),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 10] = [
        ("two-path height agreement", criterion_1),
        ("continued fraction vs Moebius products", criterion_2),
        ("minimizer oracle", criterion_3),
        ("sandwich chain", criterion_4),
        ("asymptotic law", criterion_5),
        ("endpoint limits", criterion_6),
        ("divergence theorem", criterion_7),
        ("asymmetry theorem", criterion_8),
        ("transverse bracket", criterion_9),
        ("end-to-end determinism", criterion_10),
    ];
    let mut stderr = std::io::stderr().lock();
    let mut regressions = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let n = k + 1;
        let outcome = check();
        let status = if outcome.literal { "PASS" } else { "FAIL" };
        let note = if !outcome.literal && KNOWN_LITERAL_FAILURES.contains(&n) {
            if outcome.asserted {
                " [literal statement unattainable; corrected statement holds]"
            } else {
                " [corrected statement also fails]"
            }
        } else {
            ""
        };
        writeln!(stderr, "criterion {n:>2} {status} {name}{note}: {}", outcome.detail).unwrap();
        let ok = if KNOWN_LITERAL_FAILURES.contains(&n) {
            outcome.asserted
        } else {
            outcome.literal
        };
        if !ok {
            regressions.push(n);
        }
    }
    assert!(regressions.is_empty(), "criteria failed: {regressions:?}");
}
