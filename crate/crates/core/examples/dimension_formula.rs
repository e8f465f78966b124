//! Closed-form dimension and the separation bound for a few self-similar laws.

use iadof::ifs::{hochman_dimension, separation_check, IfsSpec};

fn main() -> iadof::Result<()> {
    let specs = [
        ("cantor", IfsSpec::load(r#"{"r": "1/3", "atoms": [0, 2]}"#)?),
        ("quarter", IfsSpec::load(r#"{"r": "1/4", "atoms": [0, 1]}"#)?),
        ("skewed", IfsSpec::load(r#"{"r": "1/2", "atoms": [0, 1], "probs": ["1/4", "3/4"]}"#)?),
        ("overlapping", IfsSpec::load(r#"{"r": "2/3", "atoms": [0, 1]}"#)?),
    ];
    for (name, spec) in &specs {
        let sep = separation_check(spec)?;
        println!(
            "{name:<12} dim = {:.6}  bound m/(m+M) = {:.4}  separated: {}",
            hochman_dimension(spec),
            sep.bound,
            sep.satisfied
        );
    }
    Ok(())
}
