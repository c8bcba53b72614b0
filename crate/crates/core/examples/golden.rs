//! Recomputes the frozen oracle values under `testdata/golden/`.
//!
//! cargo run --release -p bicover --example golden

use std::path::PathBuf;

use bicover::geom::{validate_polygon, Point};
use bicover::oracle::{random_convex_polygon, GoldenRecord, OracleConfig};

const SIZES: [usize; 5] = [4, 8, 16, 32, 64];

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../testdata/golden");
    std::fs::create_dir_all(&dir)?;
    let cfg = OracleConfig::default();

    let named: Vec<(&str, Vec<(f64, f64)>)> = vec![
        ("unit_square", vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
        ("rect_1x4", vec![(0.0, 0.0), (4.0, 0.0), (4.0, 1.0), (0.0, 1.0)]),
        ("triangle", vec![(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)]),
    ];
    let named: Vec<GoldenRecord> = named
        .iter()
        .map(|(name, pts)| {
            let pts: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
            GoldenRecord::compute(name, &validate_polygon(&pts).unwrap(), None, &cfg)
        })
        .collect();
    std::fs::write(dir.join("named.json"), serde_json::to_string_pretty(&named)? + "\n")?;

    let jobs: Vec<(usize, u64)> = SIZES.iter().flat_map(|&n| (1..=20).map(move |s| (n, s))).collect();
    let mut random: Vec<GoldenRecord> = std::thread::scope(|scope| {
        let threads = std::thread::available_parallelism().map_or(4, |c| c.get());
        let chunks: Vec<_> = jobs
            .chunks(jobs.len().div_ceil(threads))
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|&(n, seed)| {
                            let p = random_convex_polygon(n, seed);
                            GoldenRecord::compute(&format!("random_n{n}_s{seed}"), &p, Some(seed), &cfg)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        chunks.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    random.sort_by_key(|r| (r.n, r.seed));
    std::fs::write(dir.join("random.json"), serde_json::to_string_pretty(&random)? + "\n")?;
    println!("wrote {} + {} records to {}", named.len(), random.len(), dir.display());
    Ok(())
}
