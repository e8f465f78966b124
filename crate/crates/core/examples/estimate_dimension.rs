//! Monte Carlo information dimension against the closed form.

use iadof::dimest::{aligned_grid, compare_with_formula, estimate_dimension, DimensionConfig};
use iadof::ifs::IfsSpec;

fn main() -> iadof::Result<()> {
    let spec = IfsSpec::cantor();
    let grid = aligned_grid(&spec, 3, 3u64.pow(9));
    let est = estimate_dimension(&spec, &DimensionConfig::new(grid, 200_000, 1))?;
    for (k, h) in est.k_grid.iter().zip(&est.entropies) {
        println!("k = {k:>6}  H = {h:.4}");
    }
    let cmp = compare_with_formula(&spec, &est, 0.02)?;
    println!("slope {:.4}, formula {:.4}, agrees: {}", cmp.empirical, cmp.formula, cmp.agrees);
    Ok(())
}
