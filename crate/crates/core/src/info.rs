//! Shannon entropy in bits.

/// Entropy of a probability vector. Zero entries contribute nothing.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    let terms: Vec<f64> = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .collect();
    stable_sum(terms)
}

/// Entropy of the empirical distribution given by occurrence counts.
///
/// Counts are sorted before summation, so the result does not depend on the
/// order in which they are supplied.
pub fn entropy_from_counts<I>(counts: I) -> f64
where
    I: IntoIterator,
    I::Item: Into<u128>,
{
    let mut counts: Vec<u128> = counts.into_iter().map(Into::into).filter(|&c| c > 0).collect();
    counts.sort_unstable();
    let total: u128 = counts.iter().sum();
    if total == 0 || counts.len() == 1 {
        return 0.0;
    }
    let n = total as f64;
    stable_sum(counts.iter().map(|&c| {
        let c = c as f64;
        c / n * (n / c).log2()
    }))
}

/// Neumaier-compensated sum.
pub fn stable_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
