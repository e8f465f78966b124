//! Draw from a self-similar law and check the self-similarity equation.

use iadof::ifs::{fixed_point_discrepancy, fixed_point_discrepancy_with_ratio, sample, IfsSpec};

fn main() -> iadof::Result<()> {
    let spec = IfsSpec::cantor();
    let xs = sample(&spec, 20, 100_000, 42)?;
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    println!("mean of 100000 draws: {mean:.5} (exact 1.5)");
    println!("KS(X, rX'+W)        = {:.5}", fixed_point_discrepancy(&spec, 20, 100_000, 42)?);
    println!("KS with wrong ratio = {:.5}", fixed_point_discrepancy_with_ratio(&spec, 0.3, 20, 100_000, 42)?);
    Ok(())
}
