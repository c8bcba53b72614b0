//! `bicover bench`: decision time against polygon size.

use std::time::Instant;

use clap::{Args, ValueEnum};

use bicover::decision::decide;
use bicover::geom::{validate_polygon, ConvexPolygon};
use bicover::optimizer::{solve, upper_bound};
use bicover::oracle::random_convex_polygon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RMode {
    /// Slightly above the optimum, below the one-disk radius.
    NearOpt,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Ascending polygon sizes.
    #[arg(long, value_delimiter = ',', default_value = "1024,2048,4096,8192,16384,32768,65536")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = RMode::NearOpt)]
    pub r_mode: RMode,
    /// Seed of the first trial; trial k uses seed + k.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Vertices kept when estimating the optimum of a large polygon.
const SUBSAMPLE: usize = 512;

/// `1.05` times the optimum of an evenly subsampled copy (an inscribed
/// polygon, so never above the true optimum), capped halfway to the one-disk
/// radius so the decision does not short-circuit.
pub fn near_opt_radius(poly: &ConvexPolygon) -> f64 {
    let step = poly.n().div_ceil(SUBSAMPLE);
    let sub = if step > 1 {
        let pts: Vec<_> = poly.vertices().iter().step_by(step).copied().collect();
        validate_polygon(&pts).unwrap_or_else(|_| poly.clone())
    } else {
        poly.clone()
    };
    let est = solve(&sub, 1e-6)
        .map(|s| s.r_high)
        .unwrap_or_else(|_| upper_bound(poly));
    (1.05 * est).min(0.5 * (est + upper_bound(poly)))
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn run(a: &BenchArgs) -> Result<u8, String> {
    if a.sizes.is_empty() || a.sizes.windows(2).any(|w| w[0] >= w[1]) || a.sizes[0] < 3 {
        return Err("--sizes must be ascending and at least 3".into());
    }
    if a.trials == 0 {
        return Err("--trials must be positive".into());
    }
    println!("n,trial,decide_ms,pieces");
    let mut medians = Vec::with_capacity(a.sizes.len());
    for &n in &a.sizes {
        let mut times = Vec::with_capacity(a.trials);
        for trial in 0..a.trials {
            let poly = random_convex_polygon(n, a.seed + trial as u64);
            let r = match a.r_mode {
                RMode::NearOpt => near_opt_radius(&poly),
            };
            let start = Instant::now();
            let res = decide(&poly, r).map_err(|e| e.to_string())?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let pieces = res.stats.pieces_f.max(res.stats.pieces_g);
            println!("{n},{trial},{ms:.3},{pieces}");
            times.push(ms);
        }
        medians.push(median(&mut times));
    }
    // time growth per doubling of n, so non-doubling size steps compare too
    let ratios: Vec<String> = a
        .sizes
        .windows(2)
        .zip(medians.windows(2))
        .map(|(n, t)| {
            let doublings = (n[1] as f64 / n[0] as f64).log2();
            format!("{}->{}:{:.3}", n[0], n[1], (t[1] / t[0]).powf(1.0 / doublings))
        })
        .collect();
    println!("# median doubling ratios {}", ratios.join(" "));
    Ok(0)
}
