//! Planar primitives, the convex polygon model and its boundary parameterization.
//!
//! Boundary positions are handled in two forms: [`BoundaryPoint`] (an edge index
//! plus a parameter along the directed edge) and [`LiftedCoord`] (arc length
//! measured counterclockwise from the first vertex). Lifted values may be
//! unrolled past the perimeter so that circular comparisons become ordinary
//! inequalities.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used for every degeneracy test, scaled by the polygon
/// diameter (or by the local radius for disk predicates).
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn dist2(self, o: Point) -> f64 {
        (self - o).norm2()
    }

    /// Counterclockwise rotation by a right angle.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    #[inline]
    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    #[inline]
    fn div(self, k: f64) -> Point {
        Point::new(self.x / k, self.y / k)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Signed doubled area of the triangle `a b c`; positive for a left turn.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius >= 0.0 && radius.is_finite());
        Disk { center, radius }
    }

    /// Closed containment with a relative slack of `rel * radius`.
    #[inline]
    pub fn contains_with(&self, p: Point, rel: f64) -> bool {
        let lim = self.radius * (1.0 + rel);
        self.center.dist2(p) <= lim * lim
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.contains_with(p, EPS_GEOM)
    }

    /// The radius-`r` disk whose boundary passes through `a` and `b` with its
    /// center on the left of the directed chord `a -> b`. Returns `None` when
    /// the chord is longer than `2r` beyond tolerance.
    pub fn left_through(a: Point, b: Point, r: f64) -> Option<Disk> {
        let d = b - a;
        let len2 = d.norm2();
        let h2 = r * r - 0.25 * len2;
        if h2 < -EPS_GEOM * r * r {
            return None;
        }
        let len = len2.sqrt();
        let mid = (a + b) * 0.5;
        if len == 0.0 {
            // any direction works; keep something deterministic
            return Some(Disk::new(mid + Point::new(0.0, r), r));
        }
        let h = h2.max(0.0).sqrt();
        Some(Disk::new(mid + d.perp() * (h / len), r))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotConvex(usize),
    #[error("edge {0} is degenerate (shorter than tolerance)")]
    DegenerateEdge(usize),
    #[error("vertices {0:?} are cocircular within tolerance")]
    CocircularQuadruple([usize; 4]),
    #[error("points are collinear")]
    Collinear,
}

/// Knobs for [`validate_polygon_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    /// Reject inputs having four cocircular vertices.
    pub reject_cocircular: bool,
}

impl Validation {
    pub fn strict() -> Self {
        Validation {
            reject_cocircular: true,
        }
    }
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    /// `cumulative[i]` is the arc length from vertex 0 to vertex `i`; the last
    /// entry equals the perimeter.
    cumulative: Vec<f64>,
    scale: f64,
}

/// Validates `points` as a convex polygon. Clockwise input is reversed (the
/// first vertex is kept). Cocircular quadruples are accepted; see
/// [`validate_polygon_with`] for the strict variant.
pub fn validate_polygon(points: &[Point]) -> Result<ConvexPolygon, GeomError> {
    validate_polygon_with(points, Validation::default())
}

pub fn validate_polygon_with(points: &[Point], opts: Validation) -> Result<ConvexPolygon, GeomError> {
    let n = points.len();
    if n < 3 {
        return Err(GeomError::TooFewVertices(n));
    }
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(GeomError::NonFinite(i));
    }
    let mut verts = points.to_vec();
    let area2: f64 = (0..n).map(|i| verts[i].cross(verts[(i + 1) % n])).sum();
    if area2 < 0.0 {
        verts[1..].reverse();
    }
    let scale = bounding_diameter(&verts);
    if scale <= 0.0 || !scale.is_finite() {
        return Err(GeomError::DegenerateEdge(0));
    }
    for i in 0..n {
        if verts[i].dist(verts[(i + 1) % n]) < EPS_GEOM * scale {
            return Err(GeomError::DegenerateEdge(i));
        }
    }
    // strict left turn everywhere plus a single winding
    let mut turning = 0.0;
    for i in 0..n {
        let a = verts[(i + n - 1) % n];
        let b = verts[i];
        let c = verts[(i + 1) % n];
        let u = b - a;
        let w = c - b;
        if u.cross(w) <= EPS_GEOM * u.norm() * w.norm() {
            return Err(GeomError::NotConvex(i));
        }
        turning += u.cross(w).atan2(u.dot(w));
    }
    if (turning - std::f64::consts::TAU).abs() > 1e-6 {
        return Err(GeomError::NotConvex(0));
    }
    if opts.reject_cocircular {
        if let Some(q) = find_cocircular(&verts) {
            return Err(GeomError::CocircularQuadruple(q));
        }
    }
    Ok(ConvexPolygon::from_ccw_unchecked(verts, scale))
}

fn bounding_diameter(pts: &[Point]) -> f64 {
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    lo.dist(hi)
}

/// Above this size only windows of consecutive vertices are examined.
pub(crate) const COCIRCULAR_FULL_LIMIT: usize = 96;

/// In-circle determinant of four points, scaled by their own spread and
/// divided by its Hadamard bound, so the result lies in `[-1, 1]`.
pub(crate) fn incircle_relative(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let rows = [a - d, b - d, c - d];
    let span = rows.iter().fold(0.0f64, |m, r| m.max(r.norm()));
    if span == 0.0 {
        return 0.0;
    }
    let m: Vec<[f64; 3]> = rows
        .iter()
        .map(|r| {
            let (x, y) = (r.x / span, r.y / span);
            [x, y, x * x + y * y]
        })
        .collect();
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let bound: f64 = m
        .iter()
        .map(|r| (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt())
        .product();
    if bound == 0.0 {
        0.0
    } else {
        det / bound
    }
}

fn find_cocircular(v: &[Point]) -> Option<[usize; 4]> {
    let n = v.len();
    if n < 4 {
        return None;
    }
    let flat = |q: [usize; 4]| incircle_relative(v[q[0]], v[q[1]], v[q[2]], v[q[3]]).abs() <= EPS_GEOM;
    if n <= COCIRCULAR_FULL_LIMIT {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if let Some(l) = (k + 1..n).find(|&l| flat([i, j, k, l])) {
                        return Some([i, j, k, l]);
                    }
                }
            }
        }
        None
    } else {
        (0..n)
            .map(|i| [i, (i + 1) % n, (i + 2) % n, (i + 3) % n])
            .find(|&q| flat(q))
    }
}

impl ConvexPolygon {
    fn from_ccw_unchecked(vertices: Vec<Point>, scale: f64) -> Self {
        let n = vertices.len();
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 0..n {
            acc += vertices[i].dist(vertices[(i + 1) % n]);
            cumulative.push(acc);
        }
        ConvexPolygon {
            vertices,
            cumulative,
            scale,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertex `i` with cyclic indexing.
    #[inline]
    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.n()]
    }

    #[inline]
    pub fn perimeter(&self) -> f64 {
        self.cumulative[self.n()]
    }

    /// Diagonal of the bounding box; the length scale for tolerances.
    #[inline]
    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    #[inline]
    pub fn edge_len(&self, i: usize) -> f64 {
        let i = i % self.n();
        self.cumulative[i + 1] - self.cumulative[i]
    }

    /// Arc length of vertex `i`, unrolled: vertex `i + n` maps to `s_i + L`.
    #[inline]
    pub fn vertex_lifted(&self, i: usize) -> f64 {
        let n = self.n();
        (i / n) as f64 * self.perimeter() + self.cumulative[i % n]
    }

    pub fn realize(&self, b: BoundaryPoint) -> Point {
        let (a, c) = self.edge(b.edge);
        a.lerp(c, b.t)
    }

    pub fn to_lifted(&self, b: BoundaryPoint) -> LiftedCoord {
        LiftedCoord(self.cumulative[b.edge % self.n()] + b.t * self.edge_len(b.edge))
    }

    /// Inverse of [`to_lifted`](Self::to_lifted); `s` is reduced modulo the perimeter.
    pub fn from_lifted(&self, s: f64) -> BoundaryPoint {
        let l = self.perimeter();
        let mut s = s.rem_euclid(l);
        if s >= l {
            s = 0.0;
        }
        // last i with cumulative[i] <= s
        let i = match self.cumulative[..self.n()].binary_search_by(|c| c.partial_cmp(&s).unwrap_or(Ordering::Less)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let t = (s - self.cumulative[i]) / self.edge_len(i);
        BoundaryPoint::new(i, t, self.n())
    }

    /// Realized point at lifted coordinate `s` (any real).
    pub fn point_at(&self, s: f64) -> Point {
        self.realize(self.from_lifted(s))
    }

    /// Edge index (not reduced) holding unrolled coordinate `s >= 0`, with the
    /// vertex convention of [`BoundaryPoint`].
    pub fn lifted_edge(&self, s: f64) -> usize {
        let l = self.perimeter();
        let wraps = (s / l).floor().max(0.0) as usize;
        let b = self.from_lifted(s);
        // from_lifted may round s just below a wrap back to edge 0
        let base = wraps * self.n() + b.edge;
        let sb = self.vertex_lifted(base);
        if sb > s + EPS_GEOM * l && base > 0 {
            base - self.n()
        } else {
            base
        }
    }

    /// Mirror image (x -> -x) with vertex order fixed up to stay
    /// counterclockwise. Vertex 0 is kept in place; lifted coordinate `s`
    /// maps to `(L - s) mod L`.
    pub fn mirrored(&self) -> ConvexPolygon {
        let n = self.n();
        let verts = (0..n)
            .map(|k| {
                let p = self.vertices[(n - k) % n];
                Point::new(-p.x, p.y)
            })
            .collect();
        ConvexPolygon::from_ccw_unchecked(verts, self.scale)
    }

    /// Scale and translate every vertex; used by equivariance checks.
    pub fn transformed(&self, f: impl Fn(Point) -> Point) -> Result<ConvexPolygon, GeomError> {
        let pts: Vec<Point> = self.vertices.iter().map(|&p| f(p)).collect();
        validate_polygon(&pts)
    }
}

/// A point of the polygon boundary given as `(edge, t)` with `t` in `[0, 1)`.
/// Points at a vertex always use `t = 0` on the edge leaving that vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub edge: usize,
    pub t: f64,
}

impl BoundaryPoint {
    /// Canonicalizes `t` into `[0, 1)` and the edge index into `[0, n)`.
    pub fn new(edge: usize, t: f64, n: usize) -> Self {
        let mut edge = edge % n;
        let mut t = t;
        if t >= 1.0 {
            let k = t.floor();
            edge = (edge + k as usize) % n;
            t -= k;
        }
        if t < 0.0 {
            t = 0.0;
        }
        BoundaryPoint { edge, t }
    }

    pub fn vertex(i: usize, n: usize) -> Self {
        BoundaryPoint { edge: i % n, t: 0.0 }
    }

    pub fn is_vertex(&self) -> bool {
        self.t == 0.0
    }
}

/// Arc-length coordinate along the boundary, measured counterclockwise from
/// vertex 0.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LiftedCoord(pub f64);

impl LiftedCoord {
    pub fn reduced(self, perimeter: f64) -> LiftedCoord {
        LiftedCoord(self.0.rem_euclid(perimeter))
    }
}

/// Order of `a` and `b` by counterclockwise distance from `anchor`.
pub fn circular_compare(anchor: LiftedCoord, a: LiftedCoord, b: LiftedCoord, perimeter: f64) -> Ordering {
    let da = (a.0 - anchor.0).rem_euclid(perimeter);
    let db = (b.0 - anchor.0).rem_euclid(perimeter);
    da.partial_cmp(&db).unwrap_or(Ordering::Equal)
}

/// Counterclockwise boundary chain from `start` to `end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chain {
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
    span: f64,
}

impl Chain {
    /// Chain from `start` to `end`; equal endpoints give a single point.
    pub fn new(poly: &ConvexPolygon, start: BoundaryPoint, end: BoundaryPoint) -> Self {
        let l = poly.perimeter();
        let span = (poly.to_lifted(end).0 - poly.to_lifted(start).0).rem_euclid(l);
        Chain { start, end, span }
    }

    /// The whole boundary, starting and ending at `start`.
    pub fn full(poly: &ConvexPolygon, start: BoundaryPoint) -> Self {
        Chain {
            start,
            end: start,
            span: poly.perimeter(),
        }
    }

    /// Chain starting at lifted `s` of arc length `span` (clamped to `[0, L]`).
    pub fn from_lifted(poly: &ConvexPolygon, s: f64, span: f64) -> Self {
        let span = span.clamp(0.0, poly.perimeter());
        Chain {
            start: poly.from_lifted(s),
            end: poly.from_lifted(s + span),
            span,
        }
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    /// Start point, interior polygon vertices in order, end point; duplicates
    /// (endpoints sitting on a vertex) are dropped.
    pub fn points(&self, poly: &ConvexPolygon) -> Vec<Point> {
        let n = poly.n();
        let l = poly.perimeter();
        let s0 = poly.to_lifted(self.start).0;
        let s1 = s0 + self.span;
        let tol = EPS_GEOM * poly.scale();
        let mut out = vec![poly.realize(self.start)];
        let mut i = self.start.edge + 1;
        loop {
            let si = poly.cumulative[i % n] + (i / n) as f64 * l;
            if si >= s1 - tol {
                break;
            }
            out.push(poly.vertex(i));
            i += 1;
        }
        let end = poly.realize(self.end);
        // a full loop ends where it started
        let last_far = out.last().is_some_and(|q| q.dist(end) > tol);
        if self.span > 0.0 && last_far && out[0].dist(end) > tol {
            out.push(end);
        }
        out
    }
}

/// Circle through three points.
pub fn circumcircle3(a: Point, b: Point, c: Point) -> Result<Disk, GeomError> {
    let scale = a.dist(b).max(b.dist(c)).max(a.dist(c));
    let d = 2.0 * orient(a, b, c);
    if scale == 0.0 || d.abs() <= EPS_GEOM * scale * scale {
        return Err(GeomError::Collinear);
    }
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point::new(a.x + ux, a.y + uy);
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Ok(Disk::new(center, radius))
}

/// Intersections of the circle bounding `d` with segment `a b`, as parameters
/// in `[0, 1]` sorted ascending. A grazing contact is reported once.
pub fn circle_segment_intersections(d: &Disk, a: Point, b: Point) -> Vec<(f64, Point)> {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return Vec::new();
    }
    let t0 = (d.center - a).dot(ab) / len2;
    let foot = a + ab * t0;
    let h = foot.dist(d.center);
    let r = d.radius;
    let slack = EPS_GEOM * r.max(f64::MIN_POSITIVE);
    let inside = |t: f64| (-1e-12..=1.0 + 1e-12).contains(&t);
    let mut out = Vec::with_capacity(2);
    if h > r + slack {
        return out;
    }
    if (h - r).abs() <= slack {
        if inside(t0) {
            let t = t0.clamp(0.0, 1.0);
            out.push((t, a + ab * t));
        }
        return out;
    }
    let dt = ((r * r - h * h).max(0.0)).sqrt() / len2.sqrt();
    for t in [t0 - dt, t0 + dt] {
        if inside(t) {
            let t = t.clamp(0.0, 1.0);
            out.push((t, a + ab * t));
        }
    }
    out
}

/// Largest parameter `t` (unclamped) where the line `a + t (b - a)` meets the
/// circle of `d`; `None` when the line misses it.
pub fn line_circle_exit(d: &Disk, a: Point, b: Point) -> Option<f64> {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return None;
    }
    let t0 = (d.center - a).dot(ab) / len2;
    let foot = a + ab * t0;
    let h2 = foot.dist2(d.center);
    let r2 = d.radius * d.radius;
    if h2 > r2 * (1.0 + 2.0 * EPS_GEOM) {
        return None;
    }
    Some(t0 + ((r2 - h2).max(0.0) / len2).sqrt())
}
