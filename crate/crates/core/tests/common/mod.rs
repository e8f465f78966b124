#![allow(dead_code)]

use std::collections::HashMap;

use iadof::algebra::{AlgebraElement, Rational};
use iadof::channel::ChannelMatrix;

/// Law of `sum_j h_ij W_j` over every tuple of letters, with `j` ranging over
/// all users or all but `i`.
pub fn tuple_law(
    h: &ChannelMatrix,
    receiver: usize,
    include_diagonal: bool,
    letters: &[AlgebraElement],
) -> HashMap<AlgebraElement, Rational> {
    let users: Vec<usize> = (0..h.k()).filter(|&j| include_diagonal || j != receiver).collect();
    let n = letters.len() as u64;
    let total = n.pow(users.len() as u32);
    let mut counts: HashMap<AlgebraElement, u64> = HashMap::new();
    for t in 0..total {
        let mut idx = t;
        let mut sum = AlgebraElement::zero(h.nvars());
        for &j in &users {
            sum = &sum + &(h.entry(receiver, j) * &letters[(idx % n) as usize]);
            idx /= n;
        }
        *counts.entry(sum).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(v, c)| (v, Rational::new(c.into(), total.into())))
        .collect()
}

/// `-sum p log2 p` from exact probabilities, summed in ascending order.
pub fn entropy_of(law: &HashMap<AlgebraElement, Rational>) -> f64 {
    use num_traits::ToPrimitive;
    let mut terms: Vec<f64> = law
        .values()
        .map(|p| {
            let x = p.to_f64().unwrap();
            -x * x.log2()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

pub fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}
