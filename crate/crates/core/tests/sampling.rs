use iadof::dimest::{aligned_grid, estimate_dimension, quantized_entropy, DimensionConfig};
use iadof::ifs::{fixed_point_discrepancy, fixed_point_discrepancy_with_ratio, sample, IfsSpec, SAMPLE_CHUNK};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn samples_do_not_depend_on_thread_count() {
    let spec = IfsSpec::cantor();
    let n = 3 * SAMPLE_CHUNK + 17;
    let one = in_pool(1, || sample(&spec, 12, n, 99).unwrap());
    let four = in_pool(4, || sample(&spec, 12, n, 99).unwrap());
    assert_eq!(one, four);
    assert_ne!(one, sample(&spec, 12, n, 100).unwrap());
}

#[test]
fn prefixes_are_stable() {
    let spec = IfsSpec::uniform(0.25, vec![0.0, 1.0]).unwrap();
    let long = sample(&spec, 10, 2 * SAMPLE_CHUNK, 5).unwrap();
    let short = sample(&spec, 10, SAMPLE_CHUNK + 3, 5).unwrap();
    assert_eq!(&long[..short.len()], short.as_slice());
}

#[test]
fn moments_match_the_series() {
    // X = sum r^k W_k with W uniform on {0, 2}: E X = 1 / (1 - r), Var X = 1 / (1 - r^2).
    let spec = IfsSpec::cantor();
    let xs = sample(&spec, 30, 400_000, 1).unwrap();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - 1.5).abs() < 0.01, "mean {mean}");
    assert!((var - 1.125).abs() < 0.015, "variance {var}");
    assert!(xs.iter().all(|&x| (0.0..=3.0).contains(&x)));
}

#[test]
fn self_similarity_is_detected() {
    let spec = IfsSpec::cantor();
    let good = fixed_point_discrepancy(&spec, 20, 100_000, 8).unwrap();
    let bad = fixed_point_discrepancy_with_ratio(&spec, 0.3, 20, 100_000, 8).unwrap();
    assert!(good < 0.01, "{good}");
    assert!(bad > 0.05, "{bad}");
}

#[test]
fn quantized_entropy_grows_by_one_bit_per_level() {
    let spec = IfsSpec::uniform(0.5, vec![0.0, 1.0]).unwrap();
    let xs = sample(&spec, 24, 200_000, 3).unwrap();
    // uniform on [0, 2]: H(floor(k x)) = log2(2k)
    for k in [2u64, 4, 8, 16] {
        let h = quantized_entropy(&xs, k, false).unwrap();
        assert!((h - (2.0 * k as f64).log2()).abs() < 0.01, "k = {k}: {h}");
    }
}

#[test]
fn estimate_is_reproducible() {
    let spec = IfsSpec::uniform(0.25, vec![0.0, 1.0]).unwrap();
    let cfg = DimensionConfig::new(aligned_grid(&spec, 4, 4096), 50_000, 17);
    let a = estimate_dimension(&spec, &cfg).unwrap();
    let b = in_pool(2, || estimate_dimension(&spec, &cfg).unwrap());
    assert_eq!(a.entropies, b.entropies);
    assert_eq!(a.slope.to_bits(), b.slope.to_bits());
    assert!(a.entropies.windows(2).all(|w| w[1] >= w[0]));
}
