//! Smallest two-disk radius by bisection over [`decide`], and cover checks.

use serde::Serialize;
use thiserror::Error;

use crate::decision::{decide, DecisionError, Witness};
use crate::geom::{circle_segment_intersections, BoundaryPoint, ConvexPolygon, Disk, EPS_GEOM};
use crate::mec::mec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error("tolerance must lie in (0, 0.1], got {0}")]
    InvalidTolerance(f64),
    #[error("disk radii differ: {0} vs {1}")]
    RadiusMismatch(f64, f64),
}

pub const DEFAULT_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveResult {
    /// Largest radius shown infeasible (0 if none was probed).
    pub r_low: f64,
    /// Smallest radius shown feasible.
    pub r_high: f64,
    /// Witness at `r_high`.
    pub disks: [Disk; 2],
    pub splits: [BoundaryPoint; 2],
    pub iterations: usize,
}

/// Radius of the minimum enclosing disk, which one disk already achieves.
pub fn upper_bound(poly: &ConvexPolygon) -> f64 {
    mec(poly.vertices()).map(|m| m.disk.radius).unwrap_or(0.0)
}

/// Bisects `[0, upper_bound]` until `r_high - r_low <= tol * r_high`.
pub fn solve(poly: &ConvexPolygon, tol: f64) -> Result<SolveResult, OptimizerError> {
    if !(tol > 0.0 && tol <= 0.1) {
        return Err(OptimizerError::InvalidTolerance(tol));
    }
    let mut hi = upper_bound(poly);
    let mut lo = 0.0;
    let mut witness = decide(poly, hi)?
        .witness
        .expect("the enclosing disk radius is feasible");
    let mut iterations = 0;
    while hi - lo > tol * hi && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let res = decide(poly, mid)?;
        match res.witness {
            Some(w) if res.answer => {
                hi = mid;
                witness = w;
            }
            _ => lo = mid,
        }
    }
    let Witness { disks, splits } = witness;
    Ok(SolveResult {
        r_low: lo,
        r_high: hi,
        disks,
        splits,
        iterations,
    })
}

/// Whether `d1 ∪ d2` contains the polygon. Each edge is cut at its crossings
/// with both circles; on every piece the two ends and the midpoint must share
/// a disk, which by convexity puts the whole piece in it.
pub fn verify_cover(poly: &ConvexPolygon, d1: &Disk, d2: &Disk) -> Result<bool, OptimizerError> {
    let big = d1.radius.max(d2.radius);
    if (d1.radius - d2.radius).abs() > EPS_GEOM * big {
        return Err(OptimizerError::RadiusMismatch(d1.radius, d2.radius));
    }
    for i in 0..poly.n() {
        let (a, b) = poly.edge(i);
        let mut ts = vec![0.0, 1.0];
        for d in [d1, d2] {
            ts.extend(circle_segment_intersections(d, a, b).into_iter().map(|(t, _)| t));
        }
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            let pts = [a.lerp(b, w[0]), a.lerp(b, 0.5 * (w[0] + w[1])), a.lerp(b, w[1])];
            let inside = |d: &Disk| pts.iter().all(|&p| d.contains(p));
            if !inside(d1) && !inside(d2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{validate_polygon, Point};

    fn poly(pts: &[(f64, f64)]) -> ConvexPolygon {
        validate_polygon(&pts.iter().map(|&(x, y)| Point::new(x, y)).collect::<Vec<_>>()).unwrap()
    }

    fn square() -> ConvexPolygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn upper_bound_examples() {
        assert!((upper_bound(&square()) - 0.5f64.sqrt()).abs() < 1e-15);
        let h = 3f64.sqrt() / 2.0;
        let tri = poly(&[(0.0, 0.0), (1.0, 0.0), (0.5, h)]);
        assert!((upper_bound(&tri) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let thin = poly(&[(0.0, 0.0), (10.0, 0.0), (10.0, 0.01), (0.0, 0.01)]);
        assert!((upper_bound(&thin) - 5.0).abs() < 1e-4);
    }

    #[test]
    fn verify_cover_examples() {
        let sq = square();
        let a = Point::new(0.5, 0.25);
        let b = Point::new(0.5, 0.75);
        assert_eq!(verify_cover(&sq, &Disk::new(a, 0.57), &Disk::new(b, 0.57)), Ok(true));
        assert_eq!(verify_cover(&sq, &Disk::new(a, 0.5), &Disk::new(b, 0.5)), Ok(false));
        let m = mec(sq.vertices()).unwrap().disk;
        assert_eq!(verify_cover(&sq, &m, &m), Ok(true));
        assert_eq!(
            verify_cover(&sq, &Disk::new(a, 0.5), &Disk::new(b, 0.6)),
            Err(OptimizerError::RadiusMismatch(0.5, 0.6))
        );
    }

    #[test]
    fn verify_cover_catches_gap_inside_an_edge() {
        // both corners of the bottom edge are covered but its middle is not
        let sq = square();
        let d1 = Disk::new(Point::new(-0.3, 0.3), 0.5);
        let d2 = Disk::new(Point::new(1.3, 0.3), 0.5);
        assert_eq!(verify_cover(&sq, &d1, &d2), Ok(false));
    }

    #[test]
    fn solve_square_and_rectangle() {
        let sq = solve(&square(), 1e-9).unwrap();
        assert!((sq.r_high - 5f64.sqrt() / 4.0).abs() < 1e-6, "{}", sq.r_high);
        assert!(sq.r_high - sq.r_low <= 1e-9 * sq.r_high);
        assert_eq!(verify_cover(&square(), &sq.disks[0], &sq.disks[1]), Ok(true));

        let rect = poly(&[(0.0, 0.0), (4.0, 0.0), (4.0, 1.0), (0.0, 1.0)]);
        let res = solve(&rect, 1e-9).unwrap();
        assert!((res.r_high - 5f64.sqrt() / 2.0).abs() < 1e-6, "{}", res.r_high);
        assert_eq!(verify_cover(&rect, &res.disks[0], &res.disks[1]), Ok(true));
    }

    #[test]
    fn solve_rejects_bad_tolerance() {
        for tol in [0.0, -1.0, 0.5, f64::NAN] {
            assert!(matches!(
                solve(&square(), tol),
                Err(OptimizerError::InvalidTolerance(_))
            ));
        }
    }

    #[test]
    fn solve_scales_with_polygon() {
        let p = crate::oracle::random_convex_polygon(12, 3);
        let base = solve(&p, 1e-9).unwrap().r_high;
        for c in [0.5, 3.0] {
            let scaled = solve(&p.transformed(|q| q * c).unwrap(), 1e-9).unwrap().r_high;
            assert!(
                (scaled - c * base).abs() <= 2e-9 * c * base,
                "c={c}: {scaled} vs {}",
                c * base
            );
        }
    }
}
