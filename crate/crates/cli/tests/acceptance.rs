//! One PASS/FAIL line per acceptance criterion. Exits non-zero if a hard
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bicover::decision::{build_coverage, decide, DecisionResult, Direction};
use bicover::geom::{circumcircle3, validate_polygon, ConvexPolygon, Disk, Point};
use bicover::mec::mec;
use bicover::optimizer::{solve, verify_cover};
use bicover::oracle::{h_point, random_convex_polygon, GoldenRecord};

const NAMED: &str = include_str!("../../../testdata/golden/named.json");
const RANDOM: &str = include_str!("../../../testdata/golden/random.json");

struct Instance {
    poly: ConvexPolygon,
    rstar: f64,
}

fn instances() -> Vec<Instance> {
    let recs: Vec<GoldenRecord> = serde_json::from_str(RANDOM).unwrap();
    recs.iter()
        .map(|r| Instance {
            poly: random_convex_polygon(r.n, r.seed.unwrap()),
            rstar: r.rstar,
        })
        .collect()
}

fn rect(w: f64, h: f64) -> ConvexPolygon {
    let pts = [(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)];
    validate_polygon(&pts.map(|(x, y)| Point::new(x, y))).unwrap()
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bicover")).args(args).output().unwrap()
}

/// Witness and structural checks shared by every decide call.
#[derive(Default)]
struct Audit {
    witnesses: usize,
    witness_failures: usize,
    calls: usize,
    piece_violations: Vec<String>,
}

impl Audit {
    fn record(&mut self, poly: &ConvexPolygon, res: &DecisionResult) {
        self.calls += 1;
        if let Some(w) = &res.witness {
            self.witnesses += 1;
            if verify_cover(poly, &w.disks[0], &w.disks[1]) != Ok(true) {
                self.witness_failures += 1;
            }
        }
        let n = poly.n();
        let s = &res.stats;
        if s.pieces_f > 20 * n || s.pieces_g > 20 * n || s.sweep.hull_pops > s.sweep.hull_inserts {
            self.piece_violations.push(format!(
                "n={n} F={} G={} pops={} inserts={}",
                s.pieces_f, s.pieces_g, s.sweep.hull_pops, s.sweep.hull_inserts
            ));
        }
    }

    fn witness(&mut self, poly: &ConvexPolygon, disks: &[Disk; 2]) {
        self.witnesses += 1;
        if verify_cover(poly, &disks[0], &disks[1]) != Ok(true) {
            self.witness_failures += 1;
        }
    }
}

fn report(k: usize, name: &str, pass: bool, detail: String) -> bool {
    println!("{} [{k}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn decision_agreement(inst: &[Instance], audit: &mut Audit) -> (bool, String) {
    let mut bad = Vec::new();
    for (i, it) in inst.iter().enumerate() {
        let above = decide(&it.poly, 1.001 * it.rstar).unwrap();
        let below = decide(&it.poly, 0.999 * it.rstar).unwrap();
        audit.record(&it.poly, &above);
        audit.record(&it.poly, &below);
        if !above.answer || below.answer {
            bad.push(i);
        }
    }
    let ok = inst.len() - bad.len();
    (
        bad.is_empty(),
        format!(
            "{ok}/{} instances decided yes at 1.001 r* and no at 0.999 r*; failing {bad:?}",
            inst.len()
        ),
    )
}

fn optimization_accuracy(inst: &[Instance], audit: &mut Audit) -> (bool, String) {
    let mut worst: f64 = 0.0;
    for it in inst {
        let res = solve(&it.poly, 1e-9).unwrap();
        audit.witness(&it.poly, &res.disks);
        worst = worst.max((res.r_high - it.rstar).abs() / it.rstar);
    }
    let sq = solve(&rect(1.0, 1.0), 1e-9).unwrap();
    let re = solve(&rect(4.0, 1.0), 1e-9).unwrap();
    audit.witness(&rect(1.0, 1.0), &sq.disks);
    audit.witness(&rect(4.0, 1.0), &re.disks);
    let named: Vec<GoldenRecord> = serde_json::from_str(NAMED).unwrap();
    let pinned = |name: &str| named.iter().find(|r| r.name == name).unwrap().rstar;
    let sq_ok = (sq.r_high - 0.559017).abs() <= 1e-6 && (sq.r_high - pinned("unit_square")).abs() <= 1e-6;
    let re_ok = (re.r_high - 1.118034).abs() <= 1e-6 && (re.r_high - pinned("rect_1x4")).abs() <= 1e-6;
    (
        worst <= 1e-3 && sq_ok && re_ok,
        format!(
            "worst relative error {worst:.3e} (limit 1e-3); square {:.9}, rectangle {:.9} (±1e-6)",
            sq.r_high, re.r_high
        ),
    )
}

fn monotonicity(inst: &[Instance], audit: &mut Audit) -> (bool, String) {
    let mut inversions = 0;
    let mut f_drops = 0;
    for it in inst.iter().take(50) {
        let mut seen_yes = false;
        for k in 0..20 {
            let r = it.rstar * (0.95 + 0.1 * k as f64 / 19.0);
            let res = decide(&it.poly, r).unwrap();
            audit.record(&it.poly, &res);
            inversions += (seen_yes && !res.answer) as usize;
            seen_yes |= res.answer;
        }
        let l = it.poly.perimeter();
        let cov = build_coverage(&it.poly, 1.05 * it.rstar, Direction::Ccw);
        let Ok(cov) = cov else { continue };
        let mut prev = f64::NEG_INFINITY;
        for w in cov.breakpoints().windows(2) {
            for j in 0..11 {
                let v = cov.eval(w[0] + (w[1] - w[0]) * j as f64 / 11.0);
                f_drops += (v < prev - 1e-9 * l) as usize;
                prev = prev.max(v);
            }
        }
    }
    let mut h_drops = 0;
    for it in inst.iter().step_by(10).take(10) {
        let (p, l) = (&it.poly, it.poly.perimeter());
        let mut prev = f64::NEG_INFINITY;
        for k in 0..50 {
            let s = l * k as f64 / 50.0;
            let mut h = p.to_lifted(h_point(p, p.from_lifted(s))).0;
            while h < s - 1e-9 * l {
                h += l;
            }
            h_drops += (h < prev - 1e-9 * l) as usize;
            prev = prev.max(h);
        }
    }
    (
        inversions + f_drops + h_drops == 0,
        format!("{inversions} yes->no inversions over 50x20 radii, {f_drops} F decreases, {h_drops} h(p) regressions over 10x50 samples"),
    )
}

fn brute_mec(pts: &[Point]) -> f64 {
    let covers = |d: &Disk| {
        pts.iter()
            .all(|&p| p.dist(d.center) <= d.radius * (1.0 + 1e-12) + 1e-15)
    };
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        if pts.len() == 1 {
            return 0.0;
        }
        for j in i + 1..pts.len() {
            let d = Disk::new(pts[i].lerp(pts[j], 0.5), 0.5 * pts[i].dist(pts[j]));
            if d.radius < best && covers(&d) {
                best = d.radius;
            }
            for k in j + 1..pts.len() {
                if let Ok(d) = circumcircle3(pts[i], pts[j], pts[k]) {
                    if d.radius < best && covers(&d) {
                        best = d.radius;
                    }
                }
            }
        }
    }
    best
}

fn mec_equivalence() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=25);
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let got = mec(&pts).unwrap().disk.radius;
        let want = brute_mec(&pts);
        let rel = if want > 0.0 { (got - want).abs() / want } else { got };
        worst = worst.max(rel);
    }
    (
        worst <= 1e-9,
        format!("200 point sets, worst relative radius error {worst:.3e} (limit 1e-9)"),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Returns (hard pass, inside soft band, detail, piece bound held).
fn linearity() -> (bool, bool, String, bool) {
    let out = bin(&[
        "bench",
        "--sizes",
        "1024,2048,4096,8192,16384,32768,65536",
        "--trials",
        "5",
    ]);
    if !out.status.success() {
        return (
            false,
            false,
            format!("bench failed: {}", String::from_utf8_lossy(&out.stderr)),
            false,
        );
    }
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows: Vec<(usize, f64, usize)> = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let f: Vec<&str> = line.split(',').collect();
        rows.push((f[0].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap()));
    }
    let pieces_ok = rows.iter().all(|&(n, _, p)| p <= 20 * n);
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.0).collect();
    sizes.dedup();
    let medians: Vec<f64> = sizes
        .iter()
        .map(|&n| median(rows.iter().filter(|r| r.0 == n).map(|r| r.1).collect()))
        .collect();
    let ratios: Vec<f64> = medians.windows(2).map(|w| w[1] / w[0]).collect();
    let hard = ratios.iter().all(|&q| q <= 4.0);
    let soft = ratios.iter().all(|&q| (1.3..=3.0).contains(&q));
    let shown: Vec<String> = ratios.iter().map(|q| format!("{q:.2}")).collect();
    let detail = format!(
        "doubling ratios [{}] (band [1.3, 3.0]{}), median ms at 65536: {:.1}",
        shown.join(", "),
        if soft { "" } else { ", soft miss" },
        medians.last().unwrap()
    );
    (hard, soft, detail, pieces_ok)
}

fn determinism(audit: &mut Audit) -> (bool, String) {
    let dir = std::env::temp_dir().join(format!("bicover-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut same = 0;
    let mut total = 0;
    for (n, seed) in [(16, 1), (64, 7), (300, 42)] {
        let args = ["gen", "--n", &n.to_string(), "--seed", &seed.to_string()].map(String::from);
        let a = bin(&args.each_ref().map(|s| s.as_str()));
        let b = bin(&args.each_ref().map(|s| s.as_str()));
        total += 1;
        same += (a.status.success() && a.stdout == b.stdout) as usize;

        let path = dir.join(format!("p{n}.json"));
        std::fs::write(&path, &a.stdout).unwrap();
        let p = path.to_str().unwrap();
        let r1 = bin(&["solve", "--input", p]);
        let r2 = bin(&["solve", "--input", p]);
        total += 1;
        same += (r1.status.success() && r1.stdout == r2.stdout) as usize;
        if r1.status.code() == Some(4) || r2.status.code() == Some(4) {
            audit.witness_failures += 1;
        }
        audit.witnesses += 2;
    }
    let _ = std::fs::remove_dir_all(&dir);
    (
        same == total,
        format!("{same}/{total} generator and result outputs byte-identical across two runs"),
    )
}

/// Runs `f` and logs its wall time to stderr.
fn timed<T>(label: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    eprintln!("  {label}: {:.1} s", start.elapsed().as_secs_f64());
    out
}

fn main() -> ExitCode {
    let inst = instances();
    let mut audit = Audit::default();
    let mut hard_ok = true;

    let (ok, d) = timed("decision", || decision_agreement(&inst, &mut audit));
    hard_ok &= report(1, "decision agrees with oracle", ok, d);
    let (ok, d) = timed("optimization", || optimization_accuracy(&inst, &mut audit));
    hard_ok &= report(2, "optimization accuracy", ok, d);

    let (mono_ok, mono_d) = timed("monotonicity", || monotonicity(&inst, &mut audit));
    let (mec_ok, mec_d) = timed("mec", mec_equivalence);
    let (lin_hard, lin_soft, lin_d, bench_pieces_ok) = timed("bench", linearity);
    let (det_ok, det_d) = timed("determinism", || determinism(&mut audit));

    hard_ok &= report(
        3,
        "witness soundness",
        audit.witness_failures == 0,
        format!(
            "{} of {} witnesses failed verification",
            audit.witness_failures, audit.witnesses
        ),
    );
    let struct_ok = audit.piece_violations.is_empty() && bench_pieces_ok;
    hard_ok &= report(
        4,
        "structural bounds",
        struct_ok,
        format!(
            "{} decide calls, pieces <= 20n and pops <= inserts violated {} times{}; bench rows {}",
            audit.calls,
            audit.piece_violations.len(),
            audit
                .piece_violations
                .first()
                .map(|s| format!(" (first: {s})"))
                .unwrap_or_default(),
            if bench_pieces_ok { "within 20n" } else { "exceed 20n" }
        ),
    );
    hard_ok &= report(5, "monotonicity", mono_ok, mono_d);
    hard_ok &= report(6, "MEC oracle equivalence", mec_ok, mec_d);
    let tag = if lin_hard && !lin_soft { " [soft]" } else { "" };
    hard_ok &= report(7, &format!("empirical linearity{tag}"), lin_hard, lin_d);
    hard_ok &= report(8, "determinism", det_ok, det_d);

    if hard_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
