//! Build the input alphabet for a generic channel and for one whose cross
//! gains share a generator.

use iadof::algebra::DEFAULT_ENUMERATION_CAP;
use iadof::channel::{load_channel, ChannelMatrix};
use iadof::dofbound::build_w_n;

fn main() -> iadof::Result<()> {
    let h = ChannelMatrix::generic(3)?;
    let w = build_w_n(&h, 1, 2, DEFAULT_ENUMERATION_CAP)?;
    println!("generic: |W| = {}, unique = {}, r = {}", w.cardinality, w.unique_representation, w.r_n);

    let shared = load_channel(r#"{"K": 2, "generators": ["a", "b", "g"], "entries": [["a", "g"], ["2*g", "b"]]}"#)?;
    for n in [2, 3, 4] {
        let w = build_w_n(&shared, 1, n, DEFAULT_ENUMERATION_CAP)?;
        println!("shared gain, N = {n}: |W| = {} of {} tuples", w.cardinality, n.pow(3));
    }
    let w = build_w_n(&shared, 1, 2, DEFAULT_ENUMERATION_CAP)?;
    let names = shared.generators();
    let shown: Vec<String> = w.elements().unwrap().iter().map(|x| x.display(names).to_string()).collect();
    println!("{}", shown.join(", "));
    Ok(())
}
