//! Radius-`r` circular hulls of boundary points inserted in boundary order,
//! the dual disk intersection, and the edge events where hull neighbors change.
//!
//! The hull keeps its vertices counterclockwise in a deque. A new point is
//! inserted either after every point so far ([`End::Back`], counterclockwise
//! sweep) or before every point ([`End::Front`], clockwise sweep). Either way
//! it becomes adjacent to both ends of the deque, so pops can happen at both
//! ends; each vertex is popped at most once, which gives the amortized bound.
//! Every insertion is logged and can be undone, which is how a sweep walks a
//! reverse-built hull forward again.

use std::collections::VecDeque;

use thiserror::Error;

use crate::geom::{circle_segment_intersections, orient, BoundaryPoint, ConvexPolygon, Disk, Point};

/// Relative slack for "inside a radius-`r` disk" tests on hull arcs.
pub const HULL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("hull radius must be positive, got {0}")]
    NonpositiveRadius(f64),
    #[error("inserted point breaks the boundary order")]
    OrderViolation,
    #[error("point is not a vertex of the hull")]
    NotAHullVertex,
    #[error("hull is empty")]
    EmptyHull,
}

/// Where a hull point comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    /// Polygon vertex with the given index.
    Vertex(usize),
    /// Any other boundary point (a sweep position or a chain end).
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HullPoint {
    pub p: Point,
    pub site: Site,
}

impl HullPoint {
    pub fn vertex(p: Point, i: usize) -> Self {
        HullPoint {
            p,
            site: Site::Vertex(i),
        }
    }
    pub fn free(p: Point) -> Self {
        HullPoint { p, site: Site::Free }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    /// The point follows all inserted points counterclockwise.
    Back,
    /// The point precedes all inserted points counterclockwise.
    Front,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertStatus {
    NonEmpty,
    BecameEmpty,
    /// The hull was already empty before this insertion.
    Empty,
}

#[derive(Clone, Debug)]
struct Record {
    end: End,
    near: Vec<HullPoint>,
    far: Vec<HullPoint>,
    pushed: bool,
    emptied: bool,
}

#[derive(Clone, Debug)]
pub struct CircularHull {
    r: f64,
    verts: VecDeque<HullPoint>,
    infeasible: bool,
    log: Vec<Record>,
    inserts: usize,
    pops: usize,
    check_order: bool,
}

/// `p` lies strictly inside the radius-`r` disk through `a`, `b` (center on the
/// left of `a -> b`).
#[inline]
fn strictly_inside_arc(a: Point, b: Point, p: Point, r: f64) -> bool {
    match Disk::left_through(a, b, r) {
        Some(d) => d.center.dist(p) < r * (1.0 - 1e-12),
        None => false,
    }
}

#[inline]
fn arc_covers(a: Point, b: Point, p: Point, r: f64) -> bool {
    match Disk::left_through(a, b, r) {
        Some(d) => d.contains_with(p, HULL_TOL),
        None => false,
    }
}

impl CircularHull {
    pub fn new(r: f64) -> Result<Self, HullError> {
        if r <= 0.0 || !r.is_finite() {
            return Err(HullError::NonpositiveRadius(r));
        }
        Ok(CircularHull {
            r,
            verts: VecDeque::new(),
            infeasible: false,
            log: Vec::new(),
            inserts: 0,
            pops: 0,
            check_order: false,
        })
    }

    /// Makes insertions verify the boundary order (costs a few orientation tests).
    pub fn with_order_checks(mut self) -> Self {
        self.check_order = true;
        self
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.r
    }

    /// No disk of radius `r` holds every inserted point.
    #[inline]
    pub fn is_infeasible(&self) -> bool {
        self.infeasible
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    /// Hull vertices counterclockwise (meaningless once empty).
    pub fn vertices(&self) -> impl ExactSizeIterator<Item = &HullPoint> + '_ {
        self.verts.iter()
    }

    #[inline]
    pub fn get(&self, i: usize) -> HullPoint {
        self.verts[i]
    }

    pub fn front(&self) -> Option<HullPoint> {
        self.verts.front().copied()
    }

    pub fn back(&self) -> Option<HullPoint> {
        self.verts.back().copied()
    }

    /// Total insertions and total pops over the life of the hull (undo does
    /// not rewind the counters).
    pub fn counters(&self) -> (usize, usize) {
        (self.inserts, self.pops)
    }

    /// Number of logged insertions that can be undone.
    pub fn depth(&self) -> usize {
        self.log.len()
    }

    /// Counterclockwise insertion.
    pub fn insert(&mut self, p: Point) -> Result<InsertStatus, HullError> {
        self.insert_at(HullPoint::free(p), End::Back)
    }

    pub fn insert_at(&mut self, hp: HullPoint, end: End) -> Result<InsertStatus, HullError> {
        self.inserts += 1;
        if self.infeasible {
            self.log.push(Record {
                end,
                near: Vec::new(),
                far: Vec::new(),
                pushed: false,
                emptied: false,
            });
            return Ok(InsertStatus::Empty);
        }
        if self.check_order {
            self.check_order_of(hp.p, end)?;
        }
        let r = self.r;
        let p = hp.p;
        let mut rec = Record {
            end,
            near: Vec::new(),
            far: Vec::new(),
            pushed: false,
            emptied: false,
        };
        if self.verts.len() >= 2 {
            let (first, last) = (self.verts[0].p, self.verts[self.verts.len() - 1].p);
            if arc_covers(last, first, p, r) {
                // already inside the hull: nothing changes
                self.log.push(rec);
                return Ok(InsertStatus::NonEmpty);
            }
        }
        let ok = match end {
            End::Back => {
                while self.verts.len() >= 2 {
                    let k = self.verts.len();
                    let (a, b) = (self.verts[k - 2].p, self.verts[k - 1].p);
                    if strictly_inside_arc(a, p, b, r) {
                        rec.near.push(self.verts.pop_back().unwrap());
                    } else {
                        break;
                    }
                }
                while self.verts.len() >= 2 {
                    let (f, g) = (self.verts[0].p, self.verts[1].p);
                    if strictly_inside_arc(p, g, f, r) {
                        rec.far.push(self.verts.pop_front().unwrap());
                    } else {
                        break;
                    }
                }
                self.valid_after(p, End::Back)
            }
            End::Front => {
                while self.verts.len() >= 2 {
                    let (f, g) = (self.verts[0].p, self.verts[1].p);
                    if strictly_inside_arc(p, g, f, r) {
                        rec.near.push(self.verts.pop_front().unwrap());
                    } else {
                        break;
                    }
                }
                while self.verts.len() >= 2 {
                    let k = self.verts.len();
                    let (a, b) = (self.verts[k - 2].p, self.verts[k - 1].p);
                    if strictly_inside_arc(a, p, b, r) {
                        rec.far.push(self.verts.pop_back().unwrap());
                    } else {
                        break;
                    }
                }
                self.valid_after(p, End::Front)
            }
        };
        self.pops += rec.near.len() + rec.far.len();
        let status = if ok {
            match end {
                End::Back => self.verts.push_back(hp),
                End::Front => self.verts.push_front(hp),
            }
            rec.pushed = true;
            InsertStatus::NonEmpty
        } else {
            self.infeasible = true;
            rec.emptied = true;
            InsertStatus::BecameEmpty
        };
        self.log.push(rec);
        Ok(status)
    }

    /// Local consistency of the two new arcs around `p` after the pops.
    fn valid_after(&self, p: Point, end: End) -> bool {
        let r = self.r;
        let k = self.verts.len();
        if k == 0 {
            return true;
        }
        let (first, last) = (self.verts[0].p, self.verts[k - 1].p);
        let lim = 2.0 * r * (1.0 + HULL_TOL);
        if p.dist(first) > lim || p.dist(last) > lim {
            return false;
        }
        if k == 1 {
            return true;
        }
        let second = self.verts[1].p;
        let before_last = self.verts[k - 2].p;
        // cyclic order is: ..., before_last, last, p, first, second, ...
        let _ = end;
        arc_covers(last, p, before_last, r)
            && arc_covers(last, p, first, r)
            && arc_covers(p, first, last, r)
            && arc_covers(p, first, second, r)
    }

    fn check_order_of(&self, p: Point, end: End) -> Result<(), HullError> {
        let k = self.verts.len();
        if k < 2 {
            return Ok(());
        }
        let (first, last) = (self.verts[0].p, self.verts[k - 1].p);
        let scale = first.dist(last).max(p.dist(first)).max(p.dist(last));
        let tol = -1e-9 * scale * scale;
        let ok = match end {
            End::Back => orient(self.verts[k - 2].p, last, p) >= tol && orient(last, p, first) >= tol,
            End::Front => orient(p, first, self.verts[1].p) >= tol && orient(last, p, first) >= tol,
        };
        if ok {
            Ok(())
        } else {
            Err(HullError::OrderViolation)
        }
    }

    /// Reverts the most recent insertion. Returns `false` if nothing is logged.
    pub fn undo(&mut self) -> bool {
        let Some(rec) = self.log.pop() else {
            return false;
        };
        if rec.emptied {
            self.infeasible = false;
        }
        if rec.pushed {
            match rec.end {
                End::Back => {
                    self.verts.pop_back();
                }
                End::Front => {
                    self.verts.pop_front();
                }
            }
        }
        let (back_pops, front_pops) = match rec.end {
            End::Back => (rec.near, rec.far),
            End::Front => (rec.far, rec.near),
        };
        for v in back_pops.into_iter().rev() {
            self.verts.push_back(v);
        }
        for v in front_pops.into_iter().rev() {
            self.verts.push_front(v);
        }
        true
    }

    /// Vertices popped by the most recent insertion at its own end, in pop
    /// order, each paired with the vertex that was exposed right after it
    /// left (the new neighbor on that side).
    pub fn last_near_pops(&self) -> Vec<(HullPoint, Option<HullPoint>)> {
        let Some(rec) = self.log.last() else {
            return Vec::new();
        };
        let n = rec.near.len();
        // after the pops and the push, the exposed vertex of the last pop sits
        // next to the new point
        (0..n)
            .map(|k| {
                let exposed = if k + 1 < n {
                    Some(rec.near[k + 1])
                } else if !rec.pushed {
                    None
                } else {
                    match rec.end {
                        End::Back => self.verts.len().checked_sub(2).map(|i| self.verts[i]),
                        End::Front => self.verts.get(1).copied(),
                    }
                };
                (rec.near[k], exposed)
            })
            .collect()
    }

    fn index_of(&self, v: Point) -> Result<usize, HullError> {
        if self.infeasible {
            return Err(HullError::EmptyHull);
        }
        self.verts
            .iter()
            .position(|h| h.p == v)
            .ok_or(HullError::NotAHullVertex)
    }

    /// Counterclockwise and clockwise neighbors of hull vertex `v`.
    pub fn neighbors(&self, v: Point) -> Result<(Point, Point), HullError> {
        let i = self.index_of(v)?;
        let k = self.verts.len();
        Ok((self.verts[(i + 1) % k].p, self.verts[(i + k - 1) % k].p))
    }

    /// Disk bounding the arc from `v` to its counterclockwise neighbor.
    pub fn supporting_disk(&self, v: Point) -> Result<Disk, HullError> {
        let (ccw, _) = self.neighbors(v)?;
        Disk::left_through(v, ccw, self.r).ok_or(HullError::EmptyHull)
    }

    /// The dual region: intersection of the radius-`r` disks centered at the
    /// inserted points.
    pub fn dual_intersection(&self) -> Result<DiskIntersection, HullError> {
        if self.infeasible {
            return Err(HullError::EmptyHull);
        }
        let pts: Vec<Point> = self.verts.iter().map(|h| h.p).collect();
        Ok(DiskIntersection::from_hull(&pts, self.r))
    }

    /// Whether `c` is within `r` of every inserted point.
    pub fn center_feasible(&self, c: Point) -> bool {
        if self.infeasible {
            return false;
        }
        let k = self.verts.len();
        in_disk_intersection(k, |i| self.verts[i].p, self.r, c)
    }

    /// Events on the segment `a b` produced by the most recent insertion: for
    /// every vertex it popped at its own end, the points of `a b` on the
    /// circle bounding the arc between that vertex and the neighbor exposed
    /// after it.
    pub fn events_on_segment(&self, a: Point, b: Point, a_at: BoundaryPoint, poly: &ConvexPolygon) -> Vec<EdgeEvent> {
        let Some(rec) = self.log.last() else {
            return Vec::new();
        };
        let edge = a_at.edge;
        let len = poly.edge_len(edge);
        let tol = 1e-9;
        let mut out = Vec::new();
        for (v, exposed) in self.last_near_pops() {
            let Some(w) = exposed else { continue };
            let disk = match rec.end {
                End::Front => Disk::left_through(v.p, w.p, self.r),
                End::Back => Disk::left_through(w.p, v.p, self.r),
            };
            let Some(disk) = disk else { continue };
            for (t, _) in circle_segment_intersections(&disk, a, b) {
                let at_v = (a + (b - a) * t).dist(v.p) <= tol * len.max(1e-300);
                if at_v || t <= tol || t >= 1.0 - tol {
                    continue;
                }
                out.push(EdgeEvent {
                    location: BoundaryPoint { edge, t },
                    kind: EventKind::NeighborChange,
                    departing_vertex: v.p,
                    supporting_disk: disk,
                });
            }
        }
        out.sort_by(|x, y| x.location.t.total_cmp(&y.location.t));
        out
    }
}

/// Membership of `c` in the intersection of radius-`r` disks centered at the
/// `k` hull vertices `at(0..k)` (counterclockwise, locally consistent).
pub fn in_disk_intersection(k: usize, at: impl Fn(usize) -> Point, r: f64, c: Point) -> bool {
    find_violator(k, at, r, c).is_none()
}

/// Index of a hull vertex farther than `r` from `c`, if any.
///
/// Small hulls are scanned; larger ones are located by an angular binary
/// search over the vertices of the disk intersection (centers of consecutive
/// arc disks) around an interior pivot, which needs O(log k) work.
pub fn find_violator(k: usize, at: impl Fn(usize) -> Point, r: f64, c: Point) -> Option<usize> {
    let lim2 = (r * (1.0 + HULL_TOL)).powi(2);
    let scan = || (0..k).find(|&i| at(i).dist2(c) > lim2);
    if k <= 12 {
        return scan();
    }
    let w = |i: usize| -> Option<Point> {
        let i = i % k;
        Disk::left_through(at(i), at((i + 1) % k), r).map(|d| d.center)
    };
    let (Some(w0), Some(w1), Some(w2)) = (w(0), w(k / 3), w(2 * k / 3)) else {
        return scan();
    };
    let o = (w0 + w1 + w2) / 3.0;
    let span = w0.dist(w1).max(w1.dist(w2)).max(w0.dist(w2));
    if span <= 1e-9 * r {
        // the region is (nearly) a point
        return scan();
    }
    let base = (w0 - o).y.atan2((w0 - o).x);
    let rel = |p: Point| ((p - o).y.atan2((p - o).x) - base).rem_euclid(std::f64::consts::TAU);
    let target = rel(c);
    // last j in [0, k) with rel(w_j) <= target; rel(w_0) = 0
    let (mut lo, mut hi) = (0usize, k);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        match w(mid) {
            Some(p) if rel(p) <= target => lo = mid,
            Some(_) => hi = mid,
            None => return scan(),
        }
    }
    // between w_lo and w_{lo+1} the boundary is the arc centered at vertex lo+1
    let h = (lo + 1) % k;
    (at(h).dist2(c) > lim2).then_some(h)
}

/// Boundary of the intersection of radius-`r` disks centered at the vertices
/// of a circular hull.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskIntersection {
    pub r: f64,
    pub arcs: Vec<IntersectionArc>,
}

/// Arc of the intersection boundary, counterclockwise from `from` to `to`, on
/// the circle of radius `r` centered at the hull vertex `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntersectionArc {
    pub center: Point,
    pub from: Point,
    pub to: Point,
}

impl DiskIntersection {
    fn from_hull(pts: &[Point], r: f64) -> Self {
        let k = pts.len();
        if k == 1 {
            let p = pts[0] + Point::new(r, 0.0);
            return DiskIntersection {
                r,
                arcs: vec![IntersectionArc {
                    center: pts[0],
                    from: p,
                    to: p,
                }],
            };
        }
        let w: Vec<Point> = (0..k)
            .map(|i| {
                Disk::left_through(pts[i], pts[(i + 1) % k], r)
                    .map(|d| d.center)
                    .unwrap_or((pts[i] + pts[(i + 1) % k]) * 0.5)
            })
            .collect();
        let arcs = (0..k)
            .map(|i| IntersectionArc {
                center: pts[i],
                from: w[(i + k - 1) % k],
                to: w[i],
            })
            .collect();
        DiskIntersection { r, arcs }
    }

    /// Vertices of the region (centers of the hull's supporting disks).
    pub fn vertices(&self) -> Vec<Point> {
        self.arcs.iter().map(|a| a.to).collect()
    }

    pub fn contains(&self, c: Point) -> bool {
        let k = self.arcs.len();
        in_disk_intersection(k, |i| self.arcs[i].center, self.r, c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    NeighborChange,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeEvent {
    pub location: BoundaryPoint,
    pub kind: EventKind,
    pub departing_vertex: Point,
    pub supporting_disk: Disk,
}

/// Sweep direction of the moving point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ccw,
    Cw,
}

/// Events on polygon edge `edge` for a hull anchored at vertex `anchor`.
///
/// With [`Direction::Cw`] the hull holds the vertices from `edge + 1` up to
/// `anchor` (inserted clockwise from the anchor) and the point moving on the
/// edge sits before them; the events are where its counterclockwise hull
/// neighbor changes. With [`Direction::Ccw`] the hull holds the vertices from
/// `anchor` up to `edge` and the events are where the clockwise neighbor of a
/// point moving on the edge changes.
pub fn edge_events(
    poly: &ConvexPolygon,
    anchor: usize,
    edge: usize,
    r: f64,
    direction: Direction,
) -> Result<Vec<EdgeEvent>, HullError> {
    let n = poly.n();
    let mut hull = CircularHull::new(r)?;
    let (a, b) = poly.edge(edge);
    match direction {
        Direction::Cw => {
            // anchor, anchor-1, ..., edge+1, then the edge start
            let stop = (edge + 1) % n;
            let mut i = anchor % n;
            loop {
                hull.insert_at(HullPoint::vertex(poly.vertex(i), i), End::Front)?;
                if i == stop {
                    break;
                }
                i = (i + n - 1) % n;
            }
            if hull.is_infeasible() {
                return Ok(Vec::new());
            }
            hull.insert_at(HullPoint::vertex(a, edge % n), End::Front)?;
            if hull.is_infeasible() {
                hull.undo();
                return Ok(events_by_resweep(&hull, poly, edge, direction));
            }
            Ok(hull.events_on_segment(a, b, BoundaryPoint::vertex(edge, n), poly))
        }
        Direction::Ccw => {
            let mut i = anchor % n;
            loop {
                hull.insert_at(HullPoint::vertex(poly.vertex(i), i), End::Back)?;
                if i == edge % n {
                    break;
                }
                i = (i + 1) % n;
            }
            if hull.is_infeasible() {
                return Ok(Vec::new());
            }
            hull.insert_at(HullPoint::vertex(b, (edge + 1) % n), End::Back)?;
            if hull.is_infeasible() {
                hull.undo();
                return Ok(events_by_resweep(&hull, poly, edge, direction));
            }
            Ok(hull.events_on_segment(a, b, BoundaryPoint::vertex(edge, n), poly))
        }
    }
}

/// When the far endpoint of the edge empties the hull, the moving point only
/// reaches part of the edge; the pops of a point on the edge at the coverable
/// limit are used instead.
fn events_by_resweep(hull: &CircularHull, poly: &ConvexPolygon, edge: usize, direction: Direction) -> Vec<EdgeEvent> {
    let n = poly.n();
    let (a, b) = poly.edge(edge);
    let mut probe = hull.clone();
    // the reachable part is an interval touching the hull side of the edge;
    // find its end by bisection and insert that point
    let (near, far) = match direction {
        Direction::Cw => (b, a),
        Direction::Ccw => (a, b),
    };
    let end = match direction {
        Direction::Cw => End::Front,
        Direction::Ccw => End::Back,
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let ok = probe.insert_at(HullPoint::free(near.lerp(far, mid)), end) == Ok(InsertStatus::NonEmpty);
        probe.undo();
        if ok {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if probe.insert_at(HullPoint::free(near.lerp(far, lo)), end) != Ok(InsertStatus::NonEmpty) {
        return Vec::new();
    }
    probe.events_on_segment(a, b, BoundaryPoint::vertex(edge, n), poly)
}
