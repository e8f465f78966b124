//! Lower bound on the degrees of freedom of a generic 3-user channel for a
//! small grid of alphabet degrees and coefficient ranges.

use iadof::channel::ChannelMatrix;
use iadof::dofbound::{ratio_limit, sweep, BoundOptions};

fn main() -> iadof::Result<()> {
    let h = ChannelMatrix::generic(3)?;
    let cells = sweep(&h, &[0, 1], &[2, 3, 4], &BoundOptions::default())?;
    println!("{:>2} {:>2} {:>12} {:>12} {:>10}", "d", "N", "total", "ratio", "ms");
    for c in &cells {
        println!(
            "{:>2} {:>2} {:>12.6} {:>12.6} {:>10}",
            c.degree,
            c.range,
            c.total,
            c.ratio_bound.unwrap_or(f64::NAN),
            c.runtime_ms
        );
    }
    println!("ratio limit for d = 1: {}", ratio_limit(3, 1));
    Ok(())
}
