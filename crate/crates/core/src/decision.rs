//! Linear-time decision: do two disks of radius `r` cover a convex polygon?
//!
//! For a boundary point `x` let `f(x)` be the farthest point reachable
//! counterclockwise by one radius-`r` disk and `g(x)` the farthest clockwise.
//! In lifted coordinates (`F(s)` in `[s, s + L]`, `G(s)` in `[s - L, s]`) two
//! disks suffice iff `F(s) - G(s) >= L` for some `s`.
//!
//! `F` is built by one sweep of `x` over the boundary. The chain from `x` to
//! `f(x)` is split at an anchor vertex `a`: the vertices between `x` and `a`
//! live in a circular hull built clockwise from `a` (and undone one vertex at
//! a time as `x` passes them), the vertices from `a` up to the edge holding
//! `f(x)` live in a second hull built counterclockwise. On every piece the
//! covering disk of the chain is pinned by `f(x)` and one or two further
//! points (its determinators), which gives a closed form for `f`; pieces end
//! where that certificate stops holding. `G` is `F` of the mirrored polygon.

use serde::Serialize;
use thiserror::Error;

use crate::geom::{line_circle_exit, BoundaryPoint, Chain, ConvexPolygon, Disk, Point};
use crate::hull::{find_violator, CircularHull, End, HullPoint, InsertStatus, HULL_TOL};
use crate::mec::mec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecisionError {
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("one disk of radius {0} already covers the polygon")]
    OneDiskSuffices(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Ccw,
    Cw,
}

/// Shape of the covering disk of `x .. f(x)` on a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PieceType {
    /// Pinned by `x`, `f(x)` and one vertex.
    T1,
    /// `x` and `f(x)` are diametral.
    T2,
    /// `f(x)` is diametral to a vertex; `f` is constant.
    T3,
    /// Pinned by `f(x)` and two vertices; `f` is constant.
    T4,
}

/// Determinator of the covering disk other than `f(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Det {
    X,
    /// Polygon vertex, unrolled index.
    V(usize),
}

/// One or two determinators. For two, the disk center is the one left of
/// `d[0] -> d[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Basis {
    d: [Det; 2],
    len: u8,
}

impl Basis {
    fn one(a: Det) -> Self {
        Basis { d: [a, a], len: 1 }
    }
    fn two(a: Det, b: Det) -> Self {
        Basis { d: [a, b], len: 2 }
    }
    fn dets(&self) -> &[Det] {
        &self.d[..self.len as usize]
    }
    fn kind(&self) -> PieceType {
        let has_x = self.dets().contains(&Det::X);
        match (has_x, self.len) {
            (true, 1) => PieceType::T2,
            (true, _) => PieceType::T1,
            (false, 1) => PieceType::T3,
            (false, _) => PieceType::T4,
        }
    }
}

/// `f` on `[s0, s1]` (lifted, unrolled) given by one closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub s0: f64,
    pub s1: f64,
    pub kind: PieceType,
    x_edge: usize,
    y_edge: usize,
    basis: Basis,
}

#[derive(Clone, Copy, Debug)]
struct Solved {
    /// Parameter of `f(x)` on its edge.
    t: f64,
    y: Point,
    center: Point,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepStats {
    pub hull_inserts: usize,
    pub hull_pops: usize,
    pub pivots: usize,
    /// Steps where the certified path failed and a slower one was used.
    pub fallbacks: usize,
    /// Self-audit mismatches (only counted in debug mode).
    pub audit_failures: usize,
}

impl SweepStats {
    fn absorb(&mut self, h: &CircularHull) {
        let (i, p) = h.counters();
        self.hull_inserts += i;
        self.hull_pops += p;
    }

    fn add(&mut self, o: &SweepStats) {
        self.hull_inserts += o.hull_inserts;
        self.hull_pops += o.hull_pops;
        self.pivots += o.pivots;
        self.fallbacks += o.fallbacks;
        self.audit_failures += o.audit_failures;
    }
}

/// Piecewise closed form of `F` (counterclockwise) or `G` (clockwise) over
/// one period `[0, L]`.
#[derive(Clone, Debug)]
pub struct CoverageFunction {
    direction: Direction,
    /// Polygon the pieces refer to (the mirror image for `G`).
    poly: ConvexPolygon,
    r: f64,
    pieces: Vec<Piece>,
    pub stats: SweepStats,
}

impl CoverageFunction {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    fn period(&self) -> f64 {
        self.poly.perimeter()
    }

    /// Piece boundaries in the caller's coordinates, within `[0, L]`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let l = self.period();
        let mut out: Vec<f64> = self.pieces.iter().map(|p| p.s0).collect();
        out.push(l);
        if self.direction == Direction::Cw {
            for s in &mut out {
                *s = l - *s;
            }
            out.reverse();
        }
        out
    }

    fn locate(&self, s: f64) -> &Piece {
        let i = self.pieces.partition_point(|p| p.s1 < s);
        &self.pieces[i.min(self.pieces.len() - 1)]
    }

    /// `(f lifted, covering disk center)` in the pieces' own polygon.
    fn eval_raw(&self, s: f64) -> (f64, Point) {
        let p = self.locate(s);
        match eval_piece(&self.poly, self.r, p, s) {
            Some(sol) => (
                self.poly.vertex_lifted(p.y_edge) + sol.t * self.poly.edge_len(p.y_edge),
                sol.center,
            ),
            None => (s, self.poly.point_at(s)),
        }
    }

    /// `F(s)` or `G(s)` for lifted `s` in `[0, L]`, in the caller's coordinates.
    pub fn eval(&self, s: f64) -> f64 {
        self.eval_with_center(s).0
    }

    /// The value and the center of a radius-`r` disk covering the chain
    /// between `s` and it.
    pub fn eval_with_center(&self, s: f64) -> (f64, Point) {
        let l = self.period();
        match self.direction {
            Direction::Ccw => self.eval_raw(s.clamp(0.0, l)),
            Direction::Cw => {
                let sm = (l - s).clamp(0.0, l);
                let (fm, c) = self.eval_raw(sm);
                (s - (fm - sm), Point::new(-c.x, c.y))
            }
        }
    }
}

fn x_at(poly: &ConvexPolygon, edge: usize, s: f64) -> Point {
    let (a, b) = poly.edge(edge);
    let t = ((s - poly.vertex_lifted(edge)) / poly.edge_len(edge)).clamp(0.0, 1.0);
    a.lerp(b, t)
}

fn det_point(poly: &ConvexPolygon, d: Det, x: Point) -> Point {
    match d {
        Det::X => x,
        Det::V(i) => poly.vertex(i),
    }
}

/// Farthest point of the line through edge `y_edge` covered together with
/// the basis points.
fn solve(poly: &ConvexPolygon, r: f64, basis: &Basis, x: Point, y_edge: usize) -> Option<Solved> {
    let (a, b) = poly.edge(y_edge);
    match basis.len {
        1 => {
            let p = det_point(poly, basis.d[0], x);
            let t = line_circle_exit(&Disk::new(p, 2.0 * r), a, b)?;
            let y = a.lerp(b, t);
            Some(Solved {
                t,
                y,
                center: (p + y) * 0.5,
            })
        }
        _ => {
            let p = det_point(poly, basis.d[0], x);
            let q = det_point(poly, basis.d[1], x);
            let center = Disk::left_through(p, q, r)?.center;
            let t = line_circle_exit(&Disk::new(center, r), a, b)?;
            Some(Solved {
                t,
                y: a.lerp(b, t),
                center,
            })
        }
    }
}

fn eval_piece(poly: &ConvexPolygon, r: f64, p: &Piece, s: f64) -> Option<Solved> {
    let x = x_at(poly, p.x_edge, s);
    solve(poly, r, &p.basis, x, p.y_edge)
}

/// The solution is the farthest point for its determinators alone: moving
/// `f(x)` forward leaves every disk through them.
fn pinned(poly: &ConvexPolygon, basis: &Basis, sol: &Solved, x: Point, y_edge: usize, r: f64) -> bool {
    let (a, b) = poly.edge(y_edge);
    let e = b - a;
    let d = sol.y - sol.center;
    let tol = 1e-12 * r * e.norm();
    if e.dot(d) < -tol {
        return false;
    }
    if basis.len == 1 {
        return true;
    }
    let u = sol.center - det_point(poly, basis.d[0], x);
    let v = sol.center - det_point(poly, basis.d[1], x);
    let uv = u.cross(v);
    let tol = 1e-12 * r * r;
    if uv.abs() <= tol {
        // diametral pair: the cone is a half plane
        return true;
    }
    u.cross(d) * uv.signum() >= -tol && d.cross(v) * uv.signum() >= -tol
}

/// Interior validity probes per piece before bisecting for its end.
const PROBES: usize = 4;

/// Relative excess over `r` below which a violation that makes the working
/// set infeasible is treated as a tie.
const TIE_TOL: f64 = 1e-8;

/// Everything needed to test candidate centers against the current chain.
struct Sweep<'a> {
    poly: &'a ConvexPolygon,
    r: f64,
    n: usize,
    /// Vertices strictly after `x` up to the anchor, built clockwise.
    hull_a: CircularHull,
    /// Anchor vertex (unrolled); `None` while `f(x)` is on the edge of `x`.
    anchor: Option<usize>,
    /// Vertices from the anchor up to the start of the edge of `f(x)`.
    hull_b: CircularHull,
    x_edge: usize,
    y_edge: usize,
    stats: SweepStats,
}

impl<'a> Sweep<'a> {
    fn new(poly: &'a ConvexPolygon, r: f64, x_edge: usize) -> Self {
        Sweep {
            poly,
            r,
            n: poly.n(),
            hull_a: CircularHull::new(r).expect("positive radius"),
            anchor: None,
            hull_b: CircularHull::new(r).expect("positive radius"),
            x_edge,
            y_edge: x_edge,
            stats: SweepStats::default(),
        }
    }

    fn retire_hulls(&mut self) {
        self.stats.absorb(&self.hull_a);
        self.stats.absorb(&self.hull_b);
        self.hull_a = CircularHull::new(self.r).expect("positive radius");
        self.hull_b = CircularHull::new(self.r).expect("positive radius");
    }

    /// Re-anchors at the start of the edge of `f(x)`.
    fn reanchor(&mut self) {
        self.retire_hulls();
        if self.y_edge <= self.x_edge {
            self.anchor = None;
            return;
        }
        let a = self.y_edge;
        self.anchor = Some(a);
        for i in (self.x_edge + 1..=a).rev() {
            let st = self
                .hull_a
                .insert_at(HullPoint::vertex(self.poly.vertex(i), i), End::Front)
                .expect("hull insertion");
            if st != InsertStatus::NonEmpty {
                self.stats.fallbacks += 1;
            }
        }
        self.hull_b
            .insert_at(HullPoint::vertex(self.poly.vertex(a), a), End::Back)
            .expect("hull insertion");
    }

    /// Moves `x` onto the next edge.
    fn advance_x(&mut self) {
        self.x_edge += 1;
        match self.anchor {
            Some(a) if self.x_edge < a => {
                self.hull_a.undo();
            }
            _ => self.reanchor(),
        }
    }

    /// Moves `f(x)` onto the next edge.
    fn advance_y(&mut self) -> bool {
        if self.y_edge + 1 >= self.x_edge + self.n {
            return false;
        }
        self.y_edge += 1;
        let v = self.y_edge;
        if self.anchor.is_none() {
            self.reanchor();
            return true;
        }
        let st = self
            .hull_b
            .insert_at(HullPoint::vertex(self.poly.vertex(v), v), End::Back)
            .expect("hull insertion");
        if st != InsertStatus::NonEmpty {
            // numerically on the fence: the vertex is coverable by construction
            self.hull_b.undo();
            self.stats.fallbacks += 1;
        }
        true
    }

    fn in_chain(&self, d: Det) -> bool {
        match d {
            Det::X => true,
            Det::V(i) => i > self.x_edge && i <= self.y_edge,
        }
    }

    /// A chain point farther than `r` from `c`, if any.
    fn violator(&self, c: Point, x: Point) -> Option<Det> {
        let lim2 = (self.r * (1.0 + HULL_TOL)).powi(2);
        if x.dist2(c) > lim2 {
            return Some(Det::X);
        }
        for h in [&self.hull_a, &self.hull_b] {
            if h.is_empty() {
                continue;
            }
            if h.is_infeasible() {
                // hull went empty through rounding: fall back to a scan
                return self.scan_violator(c);
            }
            if let Some(k) = find_violator(h.len(), |i| h.get(i).p, self.r, c) {
                return match h.get(k).site {
                    crate::hull::Site::Vertex(i) => Some(Det::V(i)),
                    crate::hull::Site::Free => None,
                };
            }
        }
        None
    }

    fn scan_violator(&self, c: Point) -> Option<Det> {
        let lim2 = (self.r * (1.0 + HULL_TOL)).powi(2);
        (self.x_edge + 1..=self.y_edge)
            .find(|&i| self.poly.vertex(i).dist2(c) > lim2)
            .map(Det::V)
    }

    /// Farthest point of the current edge line for the working set alone,
    /// by trying every basis of at most two of its points.
    fn best_for(&self, w: &[Det], x: Point) -> Option<(Basis, Solved)> {
        let lim2 = (self.r * (1.0 + HULL_TOL)).powi(2);
        let mut best: Option<(Basis, Solved)> = None;
        let mut consider = |b: Basis| {
            if let Some(sol) = solve(self.poly, self.r, &b, x, self.y_edge) {
                let ok = w.iter().all(|&d| det_point(self.poly, d, x).dist2(sol.center) <= lim2);
                if ok && best.as_ref().is_none_or(|(_, s)| sol.t > s.t) {
                    best = Some((b, sol));
                }
            }
        };
        for (i, &p) in w.iter().enumerate() {
            consider(Basis::one(p));
            for (j, &q) in w.iter().enumerate() {
                if i != j {
                    consider(Basis::two(p, q));
                }
            }
        }
        best
    }

    /// Optimal basis at `s`, advancing the edge of `f(x)` when needed.
    fn pivot(&mut self, s: f64, warm: &[Det]) -> Option<(Basis, Solved)> {
        let mut w: Vec<Det> = warm.iter().copied().filter(|&d| self.in_chain(d)).collect();
        if !w.contains(&Det::X) {
            w.push(Det::X);
        }
        let x = x_at(self.poly, self.x_edge, s);
        let tie2 = (self.r * (1.0 + TIE_TOL)).powi(2);
        // previous solution and the violator added against it
        let mut last: Option<(Basis, Solved, Det)> = None;
        for _ in 0..4 * self.n + 64 {
            self.stats.pivots += 1;
            let Some((b, sol)) = self.best_for(&w, x) else {
                self.stats.fallbacks += 1;
                if let Some((b, sol, v)) = last {
                    if det_point(self.poly, v, x).dist2(sol.center) <= tie2 {
                        // near-diametral tie: the violation is rounding noise
                        return Some((b, sol));
                    }
                }
                // the working set does not reach this edge line: restart small
                if w.len() <= 1 {
                    return None;
                }
                w = vec![Det::X];
                last = None;
                continue;
            };
            match self.violator(sol.center, x) {
                Some(v) if !b.dets().contains(&v) => {
                    last = Some((b, sol, v));
                    w = b.dets().to_vec();
                    w.push(v);
                }
                Some(_) => {
                    self.stats.fallbacks += 1;
                    return Some((b, sol));
                }
                None if sol.t > 1.0 => {
                    if !self.advance_y() {
                        return None;
                    }
                    w = b.dets().to_vec();
                }
                None => return Some((b, sol)),
            }
        }
        self.stats.fallbacks += 1;
        None
    }

    /// The basis still gives `f(x)` at `s` (same edges).
    fn certified(&self, basis: &Basis, s: f64) -> bool {
        let x = x_at(self.poly, self.x_edge, s);
        let Some(sol) = solve(self.poly, self.r, basis, x, self.y_edge) else {
            return false;
        };
        let tt = 1e-12;
        if !(sol.t >= -tt && sol.t <= 1.0 + tt) {
            return false;
        }
        self.violator(sol.center, x).is_none() && pinned(self.poly, basis, &sol, x, self.y_edge, self.r)
    }

    /// At `limit` `x` coincides with the next vertex `w`, where a basis
    /// through `x` and the same basis through `w` give the same disk, so the
    /// former can fail before `limit` and still look valid at it. The latter
    /// has a fixed disk and holds exactly while `x` is inside it; if it holds
    /// somewhere in `(s, limit)`, returns such a point.
    fn late_violation(&self, basis: &Basis, s: f64, limit: f64) -> Option<f64> {
        if !basis.dets().contains(&Det::X) || self.x_edge + 1 > self.y_edge {
            return None;
        }
        let w = Det::V(self.x_edge + 1);
        let swap = |d: Det| if d == Det::X { w } else { d };
        let alt = match basis.dets() {
            [a] => Basis::one(swap(*a)),
            [a, b] if swap(*a) == swap(*b) => Basis::one(w),
            [a, b] => Basis::two(swap(*a), swap(*b)),
            _ => return None,
        };
        let wp = self.poly.vertex(self.x_edge + 1);
        let sol = solve(self.poly, self.r, &alt, wp, self.y_edge)?;
        let (a, b) = self.poly.edge(self.x_edge);
        let back = line_circle_exit(&Disk::new(sol.center, self.r), b, a)?;
        let entry = self.poly.vertex_lifted(self.x_edge) + (1.0 - back) * self.poly.edge_len(self.x_edge);
        let lo = entry.max(s);
        if limit - lo <= 1e-12 * self.poly.perimeter() {
            return None;
        }
        let p = 0.5 * (lo + limit);
        (self.certified(&alt, p) && !self.certified(basis, p)).then_some(p)
    }

    /// End of the piece starting at `s` with `basis`, at most `limit`.
    fn piece_end(&self, basis: &Basis, s: f64, limit: f64, tol: f64) -> f64 {
        let mut hi = limit;
        for k in 1..PROBES {
            let p = s + (limit - s) * k as f64 / PROBES as f64;
            if !self.certified(basis, p) {
                hi = p;
                break;
            }
        }
        if hi == limit && self.certified(basis, limit) {
            match self.late_violation(basis, s, limit) {
                Some(p) => hi = p,
                None => return limit,
            }
        }
        let mut lo = s;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.certified(basis, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// Sweeps `x` over `[0, L]` of `poly` and returns the pieces of `F`.
fn sweep(poly: &ConvexPolygon, r: f64, audit: bool) -> (Vec<Piece>, SweepStats) {
    let n = poly.n();
    let l = poly.perimeter();
    let tol = 1e-12 * l;
    let mut sw = Sweep::new(poly, r, 0);
    let mut pieces: Vec<Piece> = Vec::with_capacity(3 * n);
    let mut warm: Vec<Det> = vec![Det::X];
    let mut s = 0.0;
    while sw.x_edge < n {
        let edge_end = poly.vertex_lifted(sw.x_edge + 1);
        while s < edge_end - tol {
            let Some((basis, _)) = sw.pivot(s, &warm) else {
                // no certificate here: skip a sliver rather than loop
                sw.stats.fallbacks += 1;
                s = (s + tol.max(1e-9 * poly.edge_len(sw.x_edge))).min(edge_end);
                continue;
            };
            let mut end = sw.piece_end(&basis, s, edge_end, tol);
            if end <= s {
                sw.stats.fallbacks += 1;
                end = (s + tol).min(edge_end);
            }
            push_piece(
                &mut pieces,
                Piece {
                    s0: s,
                    s1: end,
                    kind: basis.kind(),
                    x_edge: sw.x_edge,
                    y_edge: sw.y_edge,
                    basis,
                },
            );
            warm = basis.dets().to_vec();
            s = end;
        }
        s = edge_end;
        sw.advance_x();
    }
    sw.retire_hulls();
    if let Some(last) = pieces.last_mut() {
        last.s1 = l;
    }
    let mut stats = sw.stats;
    if audit {
        stats.audit_failures += audit_pieces(poly, r, &pieces);
    }
    (pieces, stats)
}

fn push_piece(pieces: &mut Vec<Piece>, p: Piece) {
    if let Some(last) = pieces.last_mut() {
        if last.basis == p.basis && last.x_edge == p.x_edge && last.y_edge == p.y_edge {
            last.s1 = p.s1;
            return;
        }
    }
    pieces.push(p);
}

/// Compares every piece at its midpoint with a from-scratch evaluation.
fn audit_pieces(poly: &ConvexPolygon, r: f64, pieces: &[Piece]) -> usize {
    let l = poly.perimeter();
    let mut bad = 0;
    for p in pieces {
        let s = 0.5 * (p.s0 + p.s1);
        let Some(sol) = eval_piece(poly, r, p, s) else {
            bad += 1;
            continue;
        };
        let fast = poly.vertex_lifted(p.y_edge) + sol.t * poly.edge_len(p.y_edge);
        if let Some((fresh, _, _)) = fresh_farthest(poly, r, s) {
            if (fast - fresh).abs() > 1e-9 * l {
                bad += 1;
                eprintln!("audit: piece {:?} at s={s}: swept {fast}, fresh {fresh}", p.kind);
            }
        }
    }
    bad
}

/// `f` at lifted `s` computed from scratch: lifted value, disk center, type.
fn fresh_farthest(poly: &ConvexPolygon, r: f64, s: f64) -> Option<(f64, Point, PieceType)> {
    let l = poly.perimeter();
    let s = s.rem_euclid(l);
    let edge = poly.lifted_edge(s).min(poly.n() - 1);
    let mut sw = Sweep::new(poly, r, edge);
    let (b, sol) = sw.pivot(s, &[Det::X])?;
    let y = poly.vertex_lifted(sw.y_edge) + sol.t * poly.edge_len(sw.y_edge);
    Some((y, sol.center, b.kind()))
}

fn debug_enabled() -> bool {
    std::env::var("BICOVER_DEBUG").is_ok_and(|v| v == "1")
}

fn check_radius(r: f64) -> Result<(), DecisionError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(DecisionError::InvalidRadius(r))
    }
}

/// The minimum enclosing disk when it has radius at most `r`.
pub fn one_disk_check(poly: &ConvexPolygon, r: f64) -> Option<Disk> {
    let m = mec(poly.vertices()).ok()?;
    (m.disk.radius <= r).then_some(m.disk)
}

/// `f(x)` (or `g(x)` for [`Direction::Cw`]) with a covering disk of the chain
/// between `x` and it, and the piece type there.
pub fn farthest_coverable(
    poly: &ConvexPolygon,
    x: BoundaryPoint,
    r: f64,
    direction: Direction,
) -> Result<(BoundaryPoint, Disk, PieceType), DecisionError> {
    check_radius(r)?;
    if one_disk_check(poly, r).is_some() {
        return Err(DecisionError::OneDiskSuffices(r));
    }
    let s = poly.to_lifted(x).0;
    match direction {
        Direction::Ccw => {
            let (y, c, kind) = fresh_farthest(poly, r, s).ok_or(DecisionError::InvalidRadius(r))?;
            Ok((poly.from_lifted(y), Disk::new(c, r), kind))
        }
        Direction::Cw => {
            let m = poly.mirrored();
            let l = poly.perimeter();
            let sm = (l - s).rem_euclid(l);
            let (y, c, kind) = fresh_farthest(&m, r, sm).ok_or(DecisionError::InvalidRadius(r))?;
            Ok((poly.from_lifted(l - y), Disk::new(Point::new(-c.x, c.y), r), kind))
        }
    }
}

/// `x0 = v0` and three successive counterclockwise farthest points.
pub fn anchor_points(poly: &ConvexPolygon, r: f64) -> Result<[BoundaryPoint; 4], DecisionError> {
    let n = poly.n();
    let mut out = [BoundaryPoint::vertex(0, n); 4];
    for k in 1..4 {
        out[k] = farthest_coverable(poly, out[k - 1], r, Direction::Ccw)?.0;
    }
    Ok(out)
}

/// Piecewise form of `F` ([`Direction::Ccw`]) or `G` ([`Direction::Cw`]).
pub fn build_coverage(poly: &ConvexPolygon, r: f64, direction: Direction) -> Result<CoverageFunction, DecisionError> {
    check_radius(r)?;
    if one_disk_check(poly, r).is_some() {
        return Err(DecisionError::OneDiskSuffices(r));
    }
    let own = match direction {
        Direction::Ccw => poly.clone(),
        Direction::Cw => poly.mirrored(),
    };
    let (pieces, stats) = sweep(&own, r, debug_enabled());
    Ok(CoverageFunction {
        direction,
        poly: own,
        r,
        pieces,
        stats,
    })
}

/// Two disks of equal radius and the boundary points where their chains meet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub disks: [Disk; 2],
    /// `disks[0]` covers the chain from `splits[0]` to `splits[1]`,
    /// `disks[1]` the rest.
    pub splits: [BoundaryPoint; 2],
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DecisionStats {
    pub pieces_f: usize,
    pub pieces_g: usize,
    pub sweep: SweepStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecisionResult {
    pub answer: bool,
    pub witness: Option<Witness>,
    pub stats: DecisionStats,
}

/// Whether two disks of radius `r` cover `poly`, with a witness on yes.
pub fn decide(poly: &ConvexPolygon, r: f64) -> Result<DecisionResult, DecisionError> {
    check_radius(r)?;
    if let Some(d) = one_disk_check(poly, r) {
        let n = poly.n();
        return Ok(DecisionResult {
            answer: true,
            witness: Some(Witness {
                disks: [d, d],
                splits: [BoundaryPoint::vertex(0, n), BoundaryPoint::vertex(0, n)],
            }),
            stats: DecisionStats::default(),
        });
    }
    let f = build_coverage(poly, r, Direction::Ccw)?;
    let g = build_coverage(poly, r, Direction::Cw)?;
    let mut stats = DecisionStats {
        pieces_f: f.len(),
        pieces_g: g.len(),
        sweep: f.stats,
    };
    stats.sweep.add(&g.stats);
    let witness = search_split(poly, r, &f, &g);
    Ok(DecisionResult {
        answer: witness.is_some(),
        witness,
        stats,
    })
}

/// Looks for `s` with `F(s) - G(s) >= L` over the merged breakpoints and
/// turns the first verified hit into a witness.
fn search_split(poly: &ConvexPolygon, r: f64, f: &CoverageFunction, g: &CoverageFunction) -> Option<Witness> {
    let l = poly.perimeter();
    let slack = 1e-12 * l;
    let gap = |s: f64| f.eval(s) - g.eval(s) - l;
    let mut cuts: Vec<f64> = f.breakpoints();
    cuts.extend(g.breakpoints());
    cuts.push(0.0);
    cuts.push(l);
    cuts.retain(|s| (0.0..=l).contains(s));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= slack);

    let mut tried = 0;
    let mut try_at = |s: f64| -> Option<Witness> {
        tried += 1;
        witness_at(poly, r, f, g, s)
    };
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        for s in [a, b] {
            if gap(s) >= -slack {
                if let Some(wit) = try_at(s) {
                    return Some(wit);
                }
            }
        }
        // F and G are nondecreasing, so F(b) - G(a) bounds the gap on [a, b]
        if b - a <= slack || f.eval(b) - g.eval(a) - l < -slack {
            continue;
        }
        let (s, v) = golden_max(&gap, a, b, 1e-12 * l);
        if v >= -slack {
            if let Some(wit) = try_at(s) {
                return Some(wit);
            }
        }
    }
    let _ = tried;
    None
}

fn golden_max(h: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut hc, mut hd) = (h(c), h(d));
    for _ in 0..60 {
        if b - a <= tol {
            break;
        }
        if hc >= hd {
            b = d;
            d = c;
            hd = hc;
            c = b - ratio * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + ratio * (b - a);
            hd = h(d);
        }
    }
    if hc >= hd {
        (c, hc)
    } else {
        (d, hd)
    }
}

/// Witness for the split at `s`: the chains `s .. split` and `split .. s + L`
/// with `split` halfway between `G(s) + L` and `F(s)`, each covered by its
/// minimum enclosing disk grown to radius `r`.
fn witness_at(poly: &ConvexPolygon, r: f64, f: &CoverageFunction, g: &CoverageFunction, s: f64) -> Option<Witness> {
    let l = poly.perimeter();
    let fs = f.eval(s);
    let gs = g.eval(s) + l;
    let split = if gs <= fs { 0.5 * (gs + fs) } else { fs };
    let c1 = Chain::from_lifted(poly, s, split - s);
    let c2 = Chain::from_lifted(poly, split, s + l - split);
    let m1 = mec(&c1.points(poly)).ok()?;
    let m2 = mec(&c2.points(poly)).ok()?;
    // tighter than the containment slack so the witness verifies with room
    let lim = r * (1.0 + 1e-12);
    if m1.disk.radius > lim || m2.disk.radius > lim {
        return None;
    }
    Some(Witness {
        disks: [Disk::new(m1.disk.center, r), Disk::new(m2.disk.center, r)],
        splits: [poly.from_lifted(s), poly.from_lifted(split)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::validate_polygon;
    use crate::oracle::{decide_bruteforce, random_convex_polygon, OracleConfig};

    fn poly(pts: &[(f64, f64)]) -> ConvexPolygon {
        validate_polygon(&pts.iter().map(|&(x, y)| Point::new(x, y)).collect::<Vec<_>>()).unwrap()
    }

    fn square() -> ConvexPolygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn one_disk_examples() {
        let d = one_disk_check(&square(), 0.8).unwrap();
        assert!(d.center.dist(Point::new(0.5, 0.5)) < 1e-15);
        assert!(one_disk_check(&square(), 0.7).is_none());
        let t = poly(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.9)]);
        let m = mec(t.vertices()).unwrap().disk;
        assert_eq!(one_disk_check(&t, 10.0), Some(m));
    }

    #[test]
    fn decide_square_examples() {
        let sq = square();
        assert!(decide(&sq, 0.60).unwrap().answer);
        assert!(!decide(&sq, 0.50).unwrap().answer);
        let big = decide(&sq, 0.75).unwrap();
        assert!(big.answer);
        let w = big.witness.unwrap();
        assert_eq!(w.disks[0], w.disks[1]);
        assert_eq!(decide(&sq, 0.0), Err(DecisionError::InvalidRadius(0.0)));
    }

    /// Oracle for `f`: bisection on the coverable chain length.
    fn bisect_f(p: &ConvexPolygon, s: f64, r: f64) -> f64 {
        let l = p.perimeter();
        let (mut lo, mut hi) = (0.0, l);
        while hi - lo > 1e-13 * l {
            let mid = 0.5 * (lo + hi);
            if crate::mec::tau(p, &Chain::from_lifted(p, s, mid)) <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        s + lo
    }

    /// A radius strictly between `r*` and the one-disk radius.
    fn two_disk_radius(p: &ConvexPolygon) -> f64 {
        let rs = crate::oracle::rstar_bruteforce(p, &OracleConfig::quick());
        let one = mec(p.vertices()).unwrap().disk.radius;
        rs + 0.3 * (one - rs)
    }

    #[test]
    fn farthest_square_vertex() {
        let sq = square();
        let (y, d, _) = farthest_coverable(&sq, BoundaryPoint::vertex(0, 4), 0.6, Direction::Ccw).unwrap();
        assert_eq!(y.edge, 1);
        let want = bisect_f(&sq, 0.0, 0.6);
        assert!((sq.to_lifted(y).0 - want).abs() < 1e-9, "{y:?} vs {want}");
        assert!((d.radius - 0.6).abs() < 1e-15);
        for q in Chain::new(&sq, BoundaryPoint::vertex(0, 4), y).points(&sq) {
            assert!(d.contains(q));
        }
    }

    #[test]
    fn farthest_within_edge() {
        let thin = poly(&[(0.0, 0.0), (10.0, 0.0), (10.0, 0.1), (0.0, 0.1)]);
        let (y, _, kind) = farthest_coverable(&thin, BoundaryPoint { edge: 0, t: 0.1 }, 0.5, Direction::Ccw).unwrap();
        assert_eq!(kind, PieceType::T2);
        assert_eq!(y.edge, 0);
        assert!((thin.to_lifted(y).0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn farthest_matches_bisection_on_random_polygons() {
        for seed in 1..=30 {
            let p = random_convex_polygon(5 + (seed as usize % 20), seed);
            let r = two_disk_radius(&p);
            let l = p.perimeter();
            for k in 0..20 {
                let s = k as f64 * l / 20.0 + 0.013 * l;
                let x = p.from_lifted(s);
                let s = p.to_lifted(x).0;
                let (y, _, _) = farthest_coverable(&p, x, r, Direction::Ccw).unwrap();
                let mut fy = p.to_lifted(y).0;
                while fy < s {
                    fy += l;
                }
                let want = bisect_f(&p, s, r);
                assert!((fy - want).abs() < 1e-8 * l, "seed {seed} k {k}: {fy} vs {want}");
            }
        }
    }

    #[test]
    fn coverage_pointwise_and_monotone() {
        for seed in 1..=20 {
            let p = random_convex_polygon(4 + (seed as usize * 3) % 40, seed);
            let r = two_disk_radius(&p);
            let l = p.perimeter();
            for dir in [Direction::Ccw, Direction::Cw] {
                let cov = build_coverage(&p, r, dir).unwrap();
                assert!(cov.len() <= 20 * p.n());
                for k in 0..200 {
                    let s = (k as f64 + 0.37) * l / 200.0;
                    let v = cov.eval(s);
                    match dir {
                        Direction::Ccw => {
                            assert!(v >= s - 1e-9 * l && v <= s + l);
                            let want = bisect_f(&p, s, r);
                            assert!((v - want).abs() < 1e-9 * l, "seed {seed} s {s}: {v} vs {want}");
                        }
                        Direction::Cw => assert!(v <= s + 1e-9 * l && v >= s - l),
                    }
                }
                let mut prev = f64::NEG_INFINITY;
                for w in cov.breakpoints().windows(2) {
                    for k in 0..11 {
                        let v = cov.eval(w[0] + (w[1] - w[0]) * k as f64 / 11.0);
                        assert!(v >= prev - 1e-9 * l, "seed {seed} {dir:?}: decreasing");
                        prev = v;
                    }
                }
            }
        }
    }

    #[test]
    fn agrees_with_bruteforce_decision() {
        let cfg = OracleConfig::quick();
        for seed in 1..=25 {
            let p = random_convex_polygon(4 + seed as usize % 13, seed);
            let rs = crate::oracle::rstar_bruteforce(&p, &OracleConfig::default());
            for factor in [0.9, 0.99, 1.01, 1.1] {
                let r = rs * factor;
                let fast = decide(&p, r).unwrap();
                assert_eq!(fast.answer, factor > 1.0, "seed {seed} factor {factor}");
                if factor > 1.02 {
                    assert!(decide_bruteforce(&p, r, &cfg));
                }
            }
        }
    }
}
