//! Exact coincidences between compositions of the maps `x -> r x + w`.

use iadof::ifs::{exact_overlap_search, IfsSpec};

fn main() -> iadof::Result<()> {
    for doc in [
        r#"{"r": "1/2", "atoms": [0, 1]}"#,
        r#"{"r": "1/2", "atoms": [0, 1, 3]}"#,
    ] {
        let spec = IfsSpec::load(doc)?;
        let found = exact_overlap_search(&spec, 3, 0.0)?;
        println!("{doc}: {} exact overlaps up to length 3", found.len());
        for o in found.iter().take(5) {
            println!("  {:?} ~ {:?}", o.left, o.right);
        }
    }
    Ok(())
}
