#![no_main]

use bicover::geom::{validate_polygon_with, Point, Validation};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let pts: Vec<Point> = data
        .chunks_exact(16)
        .map(|c| {
            let x = f64::from_le_bytes(c[..8].try_into().unwrap());
            let y = f64::from_le_bytes(c[8..].try_into().unwrap());
            Point::new(x, y)
        })
        .collect();
    for opts in [Validation::default(), Validation::strict()] {
        if let Ok(p) = validate_polygon_with(&pts, opts) {
            let l = p.perimeter();
            for k in 0..8 {
                let s = l * k as f64 / 8.0;
                let b = p.from_lifted(s);
                assert!(b.edge < p.n() && (0.0..=1.0).contains(&b.t));
                assert!((p.to_lifted(b).0 - s).abs() <= 1e-9 * l);
            }
        }
    }
});
