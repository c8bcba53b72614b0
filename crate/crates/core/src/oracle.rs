//! Slow reference implementations: optimal radius by split search, the
//! balanced split point, a sampling decision procedure, and the random
//! polygon generator shared by tests, benchmarks and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{
    incircle_relative, validate_polygon_with, BoundaryPoint, Chain, ConvexPolygon, GeomError, Point, Validation,
    COCIRCULAR_FULL_LIMIT, EPS_GEOM,
};
use crate::mec::{is_chain_coverable, mec, tau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Boundary samples for the outer search.
    pub x_samples: usize,
    pub refine_rounds: usize,
    /// Picks the phase of the sample grid.
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            x_samples: 1024,
            refine_rounds: 3,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn quick() -> Self {
        OracleConfig {
            x_samples: 64,
            refine_rounds: 2,
            seed: 0,
        }
    }
}

fn chain_radius(poly: &ConvexPolygon, s: f64, span: f64) -> f64 {
    tau(poly, &Chain::from_lifted(poly, s, span))
}

/// Radii of the two chains `x -> y` and `y -> x`.
pub fn tau_pair(poly: &ConvexPolygon, x: BoundaryPoint, y: BoundaryPoint) -> (f64, f64) {
    (tau(poly, &Chain::new(poly, x, y)), tau(poly, &Chain::new(poly, y, x)))
}

/// Lifted offset `d` in `[0, L]` from `s` where `tau(s, s+d)` meets
/// `tau(s+d, s+L)`, and the larger of the two there.
fn balanced_split(poly: &ConvexPolygon, s: f64, rel_tol: f64) -> (f64, f64) {
    let l = poly.perimeter();
    let value = |d: f64| {
        let a = chain_radius(poly, s, d);
        let b = chain_radius(poly, s + d, l - d);
        (a, b)
    };
    let (mut lo, mut hi) = (0.0, l);
    while hi - lo > rel_tol * l {
        let mid = 0.5 * (lo + hi);
        let (a, b) = value(mid);
        if a <= b {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a_lo, b_lo) = value(lo);
    let (a_hi, b_hi) = value(hi);
    let best = a_lo.max(b_lo).min(a_hi.max(b_hi));
    (lo, best)
}

/// Farthest counterclockwise point `h` from `p` with `tau(p, h) <= tau(h, p)`.
pub fn h_point(poly: &ConvexPolygon, p: BoundaryPoint) -> BoundaryPoint {
    let s = poly.to_lifted(p).0;
    let l = poly.perimeter();
    let slack = 1e-12 * poly.scale();
    let (mut lo, mut hi) = (0.0, l);
    while hi - lo > 1e-12 * l {
        let mid = 0.5 * (lo + hi);
        if chain_radius(poly, s, mid) <= chain_radius(poly, s + mid, l - mid) + slack {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    poly.from_lifted(s + lo)
}

/// Best radius over splits starting at lifted `s`.
fn split_value(poly: &ConvexPolygon, s: f64) -> f64 {
    balanced_split(poly, s, 1e-12).1
}

/// Optimal two-disk radius by searching boundary splits.
///
/// Every sample `x` gets its balanced partner by bisection; the best samples
/// are then refined on finer local grids.
pub fn rstar_bruteforce(poly: &ConvexPolygon, cfg: &OracleConfig) -> f64 {
    let l = poly.perimeter();
    let m = cfg.x_samples.max(8);
    let phase = ChaCha8Rng::seed_from_u64(cfg.seed).gen::<f64>() * (cfg.seed != 0) as u8 as f64;
    let step = l / m as f64;
    let mut vals: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let s = (i as f64 + phase) * step;
            (split_value(poly, s), s)
        })
        .collect();
    // split points at vertices are where optima like to sit
    for i in 0..poly.n() {
        let s = poly.vertex_lifted(i);
        vals.push((split_value(poly, s), s));
    }
    vals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = vals[0].0;
    let mut seeds: Vec<f64> = vals.iter().take(4).map(|v| v.1).collect();
    let mut width = step;
    let grid = 32;
    for _ in 0..cfg.refine_rounds {
        let mut next = Vec::new();
        for &c in &seeds {
            let mut local = (f64::INFINITY, c);
            for k in 0..=2 * grid {
                let s = c - width + width * k as f64 / grid as f64;
                let v = split_value(poly, s);
                if v < local.0 {
                    local = (v, s);
                }
            }
            best = best.min(local.0);
            next.push(local.1);
        }
        seeds = next;
        width *= 2.0 / grid as f64;
    }
    // the split value is V-shaped around a local optimum: finish by
    // golden-section search inside the last grid cell pair
    if cfg.refine_rounds > 0 {
        for &c in &seeds {
            best = best.min(golden_min(|s| split_value(poly, s), c - width, c + width, 1e-13 * l));
        }
    }
    best
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.min(fd);
    for _ in 0..80 {
        if b - a <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        best = best.min(fc).min(fd);
    }
    best
}

/// Largest `d` in `[0, L]` with the chain of arc length `d` from `s` (in the
/// given direction) coverable by radius `r`.
fn reach(poly: &ConvexPolygon, s: f64, r: f64, ccw: bool) -> f64 {
    let l = poly.perimeter();
    let ok = |d: f64| {
        let chain = if ccw {
            Chain::from_lifted(poly, s, d)
        } else {
            Chain::from_lifted(poly, s - d, d)
        };
        is_chain_coverable(poly, &chain, r)
    };
    if ok(l) {
        return l;
    }
    let mut lo = 0.0;
    let mut hi = (l / 64.0).min(2.0 * r);
    while ok(hi) {
        lo = hi;
        hi = (2.0 * hi).min(l);
    }
    while hi - lo > 1e-12 * l {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Sampling decision: yes when some sample `x` has coverable chains reaching
/// counterclockwise and clockwise far enough to meet. Never a false yes; may
/// answer no slightly above the optimal radius.
pub fn decide_bruteforce(poly: &ConvexPolygon, r: f64, cfg: &OracleConfig) -> bool {
    if r.is_nan() || r <= 0.0 {
        return false;
    }
    if mec(poly.vertices()).map(|m| m.disk.radius <= r).unwrap_or(false) {
        return true;
    }
    let l = poly.perimeter();
    let m = cfg.x_samples.max(8);
    let samples = (0..m)
        .map(|i| i as f64 * l / m as f64)
        .chain((0..poly.n()).map(|i| poly.vertex_lifted(i)));
    for s in samples {
        let f = reach(poly, s, r, true);
        let g = reach(poly, s, r, false);
        if f + g >= l {
            return true;
        }
    }
    false
}

/// Reproducible random convex polygon: stratified random angles on a rotated
/// ellipse with small radial jitter, retried with less jitter until strict
/// validation accepts it.
pub fn random_convex_polygon(n: usize, seed: u64) -> ConvexPolygon {
    assert!(n >= 3, "random_convex_polygon needs n >= 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let tau = std::f64::consts::TAU;
    let mut jitter = 0.4 / (n * n) as f64;
    loop {
        let b = rng.gen_range(0.35..1.0);
        let rot = rng.gen_range(0.0..tau);
        let (sr, cr) = rot.sin_cos();
        let place = |t: f64, rad: f64| {
            let (x, y) = (rad * t.cos(), rad * b * t.sin());
            Point::new(cr * x - sr * y, sr * x + cr * y)
        };
        let angles: Vec<f64> = (0..n)
            .map(|k| (k as f64 + rng.gen_range(0.15..0.85)) * tau / n as f64)
            .collect();
        let mut pts: Vec<Point> = angles
            .iter()
            .map(|&t| place(t, 1.0 + jitter * rng.gen_range(-1.0..1.0)))
            .collect();
        // a near-cocircular quadruple only needs one of its vertices moved;
        // large polygons clear flagged windows in bulk before validating
        if n > COCIRCULAR_FULL_LIMIT {
            for _ in 0..64 {
                let flagged: Vec<usize> = (0..n)
                    .filter(|&i| {
                        let q = [i, (i + 1) % n, (i + 2) % n, (i + 3) % n].map(|k| pts[k]);
                        incircle_relative(q[0], q[1], q[2], q[3]).abs() <= EPS_GEOM
                    })
                    .map(|i| (i + 3) % n)
                    .collect();
                if flagged.is_empty() {
                    break;
                }
                for k in flagged {
                    pts[k] = place(angles[k], 1.0 + jitter * rng.gen_range(-1.0..1.0));
                }
            }
        }
        for _ in 0..4 * n + 64 {
            match validate_polygon_with(&pts, Validation::strict()) {
                Ok(p) if p.n() == n => return p,
                Err(GeomError::CocircularQuadruple(q)) => {
                    let k = q[3];
                    pts[k] = place(angles[k], 1.0 + jitter * rng.gen_range(-1.0..1.0));
                }
                _ => break,
            }
        }
        jitter *= 0.5;
    }
}

/// Hex FNV-1a digest of the vertex coordinates' bit patterns.
pub fn polygon_hash(poly: &ConvexPolygon) -> String {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for p in poly.vertices() {
        for b in
            p.x.to_bits()
                .to_le_bytes()
                .into_iter()
                .chain(p.y.to_bits().to_le_bytes())
        {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

/// One frozen oracle result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenRecord {
    pub name: String,
    pub polygon_hash: String,
    pub n: usize,
    /// Generator seed; absent for hand-written polygons.
    pub seed: Option<u64>,
    pub rstar: f64,
    pub cfg: OracleConfig,
}

impl GoldenRecord {
    pub fn compute(name: &str, poly: &ConvexPolygon, seed: Option<u64>, cfg: &OracleConfig) -> Self {
        GoldenRecord {
            name: name.to_string(),
            polygon_hash: polygon_hash(poly),
            n: poly.n(),
            seed,
            rstar: rstar_bruteforce(poly, cfg),
            cfg: *cfg,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::validate_polygon;

    fn poly(pts: &[(f64, f64)]) -> ConvexPolygon {
        validate_polygon(&pts.iter().map(|&(x, y)| Point::new(x, y)).collect::<Vec<_>>()).unwrap()
    }

    fn square() -> ConvexPolygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn tau_pair_examples() {
        let p = square();
        let (a, b) = tau_pair(&p, BoundaryPoint::vertex(0, 4), BoundaryPoint::vertex(2, 4));
        assert!((a - 0.5f64.sqrt()).abs() < 1e-15 && (b - 0.5f64.sqrt()).abs() < 1e-15);
        let x = BoundaryPoint { edge: 1, t: 0.2 };
        let y = BoundaryPoint { edge: 1, t: 0.6 };
        let (c, d) = tau_pair(&p, x, y);
        assert!((c - 0.2).abs() < 1e-12);
        assert!((d - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(tau_pair(&p, y, x), (d, c));
    }

    #[test]
    fn h_point_examples() {
        let p = square();
        let h = h_point(&p, BoundaryPoint::vertex(0, 4));
        // boundary coordinates snap to vertices within the geometric tolerance
        assert!(p.realize(h).dist(Point::new(1.0, 1.0)) < 1e-8);

        let hex: Vec<(f64, f64)> = (0..6)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / 6.0;
                (t.cos(), t.sin())
            })
            .collect();
        let hp = poly(&hex);
        for i in 0..6 {
            let h = h_point(&hp, BoundaryPoint::vertex(i, 6));
            assert!(hp.realize(h).dist(hp.vertex(i + 3)) < 1e-8, "vertex {i}");
        }
    }

    #[test]
    fn h_point_is_monotone_and_balanced() {
        for seed in 1..=10 {
            let p = random_convex_polygon(12, seed);
            let l = p.perimeter();
            let mut prev: Option<f64> = None;
            for k in 0..50 {
                let s = k as f64 * l / 50.0;
                let x = p.from_lifted(s);
                let h = h_point(&p, x);
                let mut sh = p.to_lifted(h).0;
                while sh < s {
                    sh += l;
                }
                let (a, b) = tau_pair(&p, x, h);
                assert!(a <= b + 1e-9, "seed {seed} k {k}");
                let beyond = p.from_lifted(sh + 1e-3 * l);
                let (a2, b2) = tau_pair(&p, x, beyond);
                assert!(a2 > b2 - 1e-12, "seed {seed} k {k}");
                if let Some(q) = prev {
                    assert!(sh >= q - 1e-9 * l, "seed {seed} k {k}");
                }
                prev = Some(sh);
            }
        }
    }

    #[test]
    fn rstar_examples() {
        let cfg = OracleConfig {
            x_samples: 256,
            ..OracleConfig::default()
        };
        let sq = rstar_bruteforce(&square(), &cfg);
        assert!((sq - 5f64.sqrt() / 4.0).abs() < 1e-7, "{sq}");
        let rect = poly(&[(0.0, 0.0), (4.0, 0.0), (4.0, 1.0), (0.0, 1.0)]);
        let rr = rstar_bruteforce(&rect, &cfg);
        assert!((rr - 5f64.sqrt() / 2.0).abs() < 1e-7, "{rr}");
    }

    #[test]
    fn rstar_below_one_disk() {
        for seed in 1..=20 {
            let p = random_convex_polygon(10, seed);
            let r = rstar_bruteforce(&p, &OracleConfig::quick());
            let one = mec(p.vertices()).unwrap().disk.radius;
            assert!(r <= one * (1.0 + 1e-12) && r > 0.0);
        }
    }

    #[test]
    fn decide_bruteforce_examples() {
        let p = square();
        let cfg = OracleConfig::quick();
        assert!(decide_bruteforce(&p, 0.58, &cfg));
        assert!(!decide_bruteforce(&p, 0.54, &cfg));
        assert!(decide_bruteforce(&p, 0.75, &cfg));
        assert!(!decide_bruteforce(&p, 0.0, &cfg));
    }

    #[test]
    fn generator_contract() {
        let a = random_convex_polygon(4, 7);
        let b = random_convex_polygon(4, 7);
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(random_convex_polygon(3, 99).n(), 3);
        for seed in 1..=100 {
            let p = random_convex_polygon(64, seed);
            assert_eq!(p.n(), 64);
            assert!(validate_polygon_with(p.vertices(), Validation::strict()).is_ok());
        }
    }
}
