#![no_main]

use bicover::geom::Validation;
use bicover::io::{read_polygon, PolygonFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for opts in [Validation::default(), Validation::strict()] {
        if let Ok(p) = read_polygon(text, opts) {
            assert!(p.n() >= 3);
            assert!(p.perimeter().is_finite() && p.perimeter() > 0.0);
            // a validated polygon survives a write and re-read unchanged
            let again = read_polygon(&PolygonFile::from_polygon(&p).to_json(), opts).unwrap();
            assert_eq!(p.vertices(), again.vertices());
        }
    }
});
