//! Minimum enclosing disk of point sets and boundary chains.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{circumcircle3, orient, Chain, ConvexPolygon, Disk, Point, EPS_GEOM};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MecError {
    #[error("minimum enclosing disk of an empty point set")]
    EmptyInput,
}

/// Smallest enclosing disk together with the points that pin it.
#[derive(Clone, Debug, PartialEq)]
pub struct MecResult {
    pub disk: Disk,
    /// Two (diametral) or three points on the boundary of `disk`; a single
    /// point when the input collapses to one location.
    pub support: Vec<Point>,
}

const CONTAIN_REL: f64 = 1e-12;

#[inline]
fn inside(d: &Disk, p: Point, abs: f64) -> bool {
    d.center.dist(p) <= d.radius * (1.0 + CONTAIN_REL) + abs
}

/// Randomized incremental minimum enclosing disk (expected linear time).
///
/// The input is put into a canonical order and shuffled with a seed derived
/// from its contents, so the result does not depend on the order of `points`
/// and repeated calls are bit-identical.
pub fn mec(points: &[Point]) -> Result<MecResult, MecError> {
    if points.is_empty() {
        return Err(MecError::EmptyInput);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    let seed = pts.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, p| {
        (h ^ p.x.to_bits().rotate_left(17) ^ p.y.to_bits()).wrapping_mul(0x0100_0000_01b3)
    });
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let span = pts
        .iter()
        .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
        .max(f64::MIN_POSITIVE);
    let abs = 1e-15 * span;

    let mut disk = Disk::new(pts[0], 0.0);
    let mut support = vec![pts[0]];
    for i in 1..pts.len() {
        if !inside(&disk, pts[i], abs) {
            (disk, support) = with_one(&pts[..i], pts[i], abs);
        }
    }
    Ok(MecResult {
        disk,
        support: minimal_support(support),
    })
}

fn diametral(a: Point, b: Point) -> Disk {
    let c = (a + b) * 0.5;
    Disk::new(c, c.dist(a).max(c.dist(b)))
}

fn with_one(pts: &[Point], p: Point, abs: f64) -> (Disk, Vec<Point>) {
    let mut disk = Disk::new(p, 0.0);
    let mut support = vec![p];
    for j in 0..pts.len() {
        if !inside(&disk, pts[j], abs) {
            (disk, support) = with_two(&pts[..j], p, pts[j], abs);
        }
    }
    (disk, support)
}

fn with_two(pts: &[Point], p: Point, q: Point, abs: f64) -> (Disk, Vec<Point>) {
    let mut disk = diametral(p, q);
    let mut support = vec![p, q];
    for &s in pts {
        if !inside(&disk, s, abs) {
            match circumcircle3(p, q, s) {
                Ok(d) => {
                    disk = d;
                    support = vec![p, q, s];
                }
                Err(_) => {
                    // collinear: the outer pair spans the disk
                    let (a, b) = farthest_pair(&[p, q, s]);
                    disk = diametral(a, b);
                    support = vec![a, b];
                }
            }
        }
    }
    (disk, support)
}

fn farthest_pair(pts: &[Point; 3]) -> (Point, Point) {
    let mut best = (pts[0], pts[1]);
    for (a, b) in [(pts[0], pts[2]), (pts[1], pts[2])] {
        if a.dist2(b) > best.0.dist2(best.1) {
            best = (a, b);
        }
    }
    best
}

/// Drops a redundant third support point when the triangle is not acute.
fn minimal_support(support: Vec<Point>) -> Vec<Point> {
    if support.len() != 3 {
        return support;
    }
    let (a, b, c) = (support[0], support[1], support[2]);
    if orient(a, b, c).abs() <= EPS_GEOM * a.dist2(b).max(a.dist2(c)) {
        let (p, q) = farthest_pair(&[a, b, c]);
        return vec![p, q];
    }
    for (p, q, o) in [(a, b, c), (b, c, a), (a, c, b)] {
        // angle at o is right or obtuse: pq is a diameter candidate
        if (p - o).dot(q - o) <= 0.0 {
            return vec![p, q];
        }
    }
    support
}

/// Smallest radius of a disk covering the chain (its vertex set suffices).
pub fn tau(poly: &ConvexPolygon, chain: &Chain) -> f64 {
    let pts = chain.points(poly);
    mec(&pts).map(|m| m.disk.radius).unwrap_or(0.0)
}

pub fn is_chain_coverable(poly: &ConvexPolygon, chain: &Chain, r: f64) -> bool {
    r >= 0.0 && tau(poly, chain) <= r * (1.0 + EPS_GEOM)
}
