//! Parse a channel document with polynomial entries and evaluate it.

use iadof::channel::{load_channel, store_channel};

const DOC: &str = r#"{
  "K": 2,
  "generators": ["a", "b", "g"],
  "valuation": {"a": "1.5", "b": "0.25", "g": "2"},
  "entries": [["a", "g^2 - 1/2"], ["3*a*g", "b"]]
}"#;

fn main() -> iadof::Result<()> {
    let h = load_channel(DOC)?;
    for i in 0..h.k() {
        for j in 0..h.k() {
            let e = h.entry(i, j);
            println!("h[{i}][{j}] = {:<12} ~ {}", e.display(h.generators()).to_string(), e.evaluate(h.valuation())?);
        }
    }
    println!("fully connected: {}", h.fully_connected());
    println!("{}", store_channel(&h));
    Ok(())
}
