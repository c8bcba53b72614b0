//! JSON polygon and result files, and SVG figures.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{validate_polygon_with, ConvexPolygon, Disk, GeomError, Point, Validation};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid polygon: {0}")]
    Polygon(#[from] GeomError),
    #[error("{0}")]
    Shape(String),
}

/// `{"vertices": [[x, y], ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonFile {
    pub fn from_polygon(poly: &ConvexPolygon) -> Self {
        PolygonFile {
            vertices: poly.vertices().iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn points(&self) -> Vec<Point> {
        self.vertices.iter().map(|&[x, y]| Point::new(x, y)).collect()
    }

    pub fn to_polygon(&self, opts: Validation) -> Result<ConvexPolygon, IoError> {
        Ok(validate_polygon_with(&self.points(), opts)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

/// Parses and validates a polygon file in one step.
pub fn read_polygon(text: &str, opts: Validation) -> Result<ConvexPolygon, IoError> {
    PolygonFile::parse(text)?.to_polygon(opts)
}

/// Moves every point by a seeded offset of length at most `1e-7` times the
/// largest coordinate extent, to break exact cocircularity in hand-made
/// inputs.
pub fn perturb_points(points: &[Point], seed: u64) -> Vec<Point> {
    let (mut lo, mut hi) = (
        Point::new(f64::INFINITY, f64::INFINITY),
        Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in points {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let size = if points.is_empty() { 0.0 } else { hi.dist(lo) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points
        .iter()
        .map(|&p| {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let m = 1e-7 * size * rng.gen_range(0.0..1.0);
            p + Point::new(a.cos(), a.sin()) * m
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskRecord {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

impl From<&Disk> for DiskRecord {
    fn from(d: &Disk) -> Self {
        DiskRecord {
            cx: d.center.x,
            cy: d.center.y,
            r: d.radius,
        }
    }
}

impl DiskRecord {
    pub fn to_disk(&self) -> Result<Disk, IoError> {
        if !(self.cx.is_finite() && self.cy.is_finite() && self.r.is_finite() && self.r >= 0.0) {
            return Err(IoError::Shape(format!("bad disk {self:?}")));
        }
        Ok(Disk::new(Point::new(self.cx, self.cy), self.r))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Left out unless asked for, so reruns give identical bytes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub radius: f64,
    pub disks: Vec<DiskRecord>,
    /// Lifted boundary coordinates where the two covered chains meet.
    pub splits: [f64; 2],
    pub bracket: [f64; 2],
    pub meta: Meta,
}

impl ResultFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let rf: ResultFile = serde_json::from_str(text)?;
        if rf.disks.len() != 2 {
            return Err(IoError::Shape(format!("expected 2 disks, found {}", rf.disks.len())));
        }
        Ok(rf)
    }

    pub fn disks(&self) -> Result<[Disk; 2], IoError> {
        match self.disks.as_slice() {
            [a, b] => Ok([a.to_disk()?, b.to_disk()?]),
            other => Err(IoError::Shape(format!("expected 2 disks, found {}", other.len()))),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

/// Polygon outline, both disks and the split points. The view box is the
/// bounding box of polygon and disks plus a 5% margin; y points up.
pub fn render_svg(poly: &ConvexPolygon, disks: &[Disk; 2], splits: &[Point]) -> String {
    let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
    let (mut x1, mut y1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in poly.vertices() {
        (x0, y0, x1, y1) = (x0.min(p.x), y0.min(p.y), x1.max(p.x), y1.max(p.y));
    }
    for d in disks {
        let c = d.center;
        x0 = x0.min(c.x - d.radius);
        y0 = y0.min(c.y - d.radius);
        x1 = x1.max(c.x + d.radius);
        y1 = y1.max(c.y + d.radius);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    let m = 0.05 * w.max(h);
    let stroke = 0.004 * w.max(h);
    let num = |v: f64| format!("{v:.17e}");

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        num(x0 - m),
        num(-(y1 + m)),
        num(w + 2.0 * m),
        num(h + 2.0 * m)
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" stroke-width="{}">"#, num(stroke));
    let pts: Vec<String> = poly
        .vertices()
        .iter()
        .map(|p| format!("{},{}", num(p.x), num(p.y)))
        .collect();
    let _ = writeln!(
        s,
        r##"<polygon points="{}" fill="#dde6f0" stroke="#203040"/>"##,
        pts.join(" ")
    );
    for (d, color) in disks.iter().zip(["#c03020", "#2060c0"]) {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{color}"/>"#,
            num(d.center.x),
            num(d.center.y),
            num(d.radius)
        );
    }
    for p in splits {
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#000000"/>"##,
            num(p.x - 2.0 * stroke),
            num(p.y - 2.0 * stroke),
            num(4.0 * stroke),
            num(4.0 * stroke)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#;

    #[test]
    fn polygon_file_round_trip() {
        let p = read_polygon(SQUARE, Validation::default()).unwrap();
        assert_eq!(p.n(), 4);
        let text = PolygonFile::from_polygon(&p).to_json();
        let q = read_polygon(&text, Validation::default()).unwrap();
        assert_eq!(p.vertices(), q.vertices());
    }

    #[test]
    fn polygon_file_errors() {
        assert!(matches!(
            read_polygon("{", Validation::default()),
            Err(IoError::Json(_))
        ));
        assert!(matches!(
            read_polygon(r#"{"vertices": [[0,0],[1,0]]}"#, Validation::default()),
            Err(IoError::Polygon(GeomError::TooFewVertices(2)))
        ));
        assert!(matches!(
            read_polygon(r#"{"vertices": [[0,0],[1]]}"#, Validation::default()),
            Err(IoError::Json(_))
        ));
        assert!(matches!(
            read_polygon(r#"{"vertices": [], "x": 1}"#, Validation::default()),
            Err(IoError::Json(_))
        ));
        assert!(matches!(
            read_polygon(SQUARE, Validation::strict()),
            Err(IoError::Polygon(GeomError::CocircularQuadruple(_)))
        ));
    }

    #[test]
    fn floats_round_trip_exactly() {
        let v = [0.1 + 0.2, 1.0 / 3.0, 5f64.sqrt() / 4.0, 1e-300, -2.5e17];
        let f = PolygonFile {
            vertices: v.iter().map(|&x| [x, -x]).collect(),
        };
        assert_eq!(PolygonFile::parse(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn result_file_round_trip() {
        let rf = ResultFile {
            radius: 0.5590169943749474,
            disks: vec![
                DiskRecord {
                    cx: 0.25,
                    cy: 0.5,
                    r: 0.5590169943749474,
                },
                DiskRecord {
                    cx: 0.75,
                    cy: 0.5,
                    r: 0.5590169943749474,
                },
            ],
            splits: [0.5, 2.5],
            bracket: [0.559016994, 0.5590169943749474],
            meta: Meta {
                tool_version: "0.1.0".into(),
                seed: None,
                timings_ms: None,
            },
        };
        let text = rf.to_json();
        assert!(!text.contains("timings_ms"));
        assert_eq!(ResultFile::parse(&text).unwrap(), rf);
        let one = text.replacen("{\n      \"cx\": 0.25", "{\"cx\": 0.25", 1);
        assert_eq!(ResultFile::parse(&one).unwrap(), rf);
        let bad = r#"{"radius":1,"disks":[],"splits":[0,0],"bracket":[0,1],"meta":{"tool_version":"x"}}"#;
        assert!(matches!(ResultFile::parse(bad), Err(IoError::Shape(_))));
    }

    #[test]
    fn perturbation_breaks_cocircularity() {
        let pts = PolygonFile::parse(SQUARE).unwrap().points();
        let moved = perturb_points(&pts, 7);
        assert_eq!(moved, perturb_points(&pts, 7));
        for (a, b) in pts.iter().zip(&moved) {
            assert!(a.dist(*b) <= 1e-7 * 2f64.sqrt());
        }
        assert!(validate_polygon_with(&moved, Validation::strict()).is_ok());
    }

    #[test]
    fn svg_element_counts() {
        let p = read_polygon(r#"{"vertices": [[0,0],[1,0],[0.5,0.9]]}"#, Validation::default()).unwrap();
        let d = Disk::new(Point::new(0.3, 0.3), 0.4);
        let svg = render_svg(&p, &[d, Disk::new(Point::new(0.6, 0.4), 0.4)], &[Point::new(0.0, 0.0)]);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
