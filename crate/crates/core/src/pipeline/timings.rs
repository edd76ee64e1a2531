use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::gestures::{generate, GestureType};
use crate::maskops::BinaryMask;
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub gesture: GestureType,
    pub n: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
    /// Generations that ended in an error (still timed).
    pub failures: usize,
}

/// Wall-clock cost of generating each gesture type once per region.
pub fn measure_timings(regions: &[&BinaryMask], seed: u64) -> Vec<TimingRow> {
    GestureType::ALL
        .iter()
        .map(|&t| {
            let mut ms = Vec::with_capacity(regions.len());
            let mut failures = 0;
            for (k, region) in regions.iter().enumerate() {
                let start = Instant::now();
                let ok = generate(t, region, derive_seed(&[seed, k as u64, t as u64])).is_ok();
                ms.push(start.elapsed().as_secs_f64() * 1e3);
                failures += !ok as usize;
            }
            let n = ms.len();
            let mean = if n == 0 { 0.0 } else { ms.iter().sum::<f64>() / n as f64 };
            let var = if n < 2 { 0.0 } else { ms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 };
            TimingRow { gesture: t, n, mean_ms: mean, std_ms: var.sqrt(), failures }
        })
        .collect()
}

/// One line per gesture type: `mean ± std` in seconds.
pub fn render_timings(rows: &[TimingRow]) -> String {
    let mut out = String::from("gesture        n      time (s)\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<12} {:>5}  {:.4} ± {:.4}",
            r.gesture.as_str(),
            r.n,
            r.mean_ms / 1e3,
            r.std_ms / 1e3
        );
    }
    out
}
