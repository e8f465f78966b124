mod common;

use iadof::algebra::{AlgebraElement, Rational};
use iadof::channel::ChannelMatrix;
use iadof::dofbound::{build_w_n, separability_check, signal_law, sumset_distribution};
use num_traits::One;
use proptest::prelude::*;

use common::{entropy_of, tuple_law};

const CAP: usize = 1_000_000;

/// A small channel whose entries are integer combinations of two generators
/// and the constant, so that collisions are common.
fn channel(k: usize, coeffs: &[(i64, i64, i64)]) -> ChannelMatrix {
    let names = vec!["u".to_string(), "v".to_string()];
    let rows = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let (c, a, b) = coeffs[i * k + j];
                    let e = AlgebraElement::integer(2, c)
                        .try_add(&AlgebraElement::generator(2, 0).scale_integer(a))
                        .unwrap()
                        .try_add(&AlgebraElement::generator(2, 1).scale_integer(b))
                        .unwrap();
                    if e.is_zero() {
                        AlgebraElement::one(2)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    ChannelMatrix::new(names, rows, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_law_matches_enumeration(
        k in 2usize..4,
        coeffs in proptest::collection::vec((-2i64..3, -1i64..2, -1i64..2), 9),
        degree in 0u32..2,
        n in 1u64..4,
        receiver in 0usize..3,
        diag in any::<bool>(),
    ) {
        let h = channel(k, &coeffs);
        let receiver = receiver % k;
        let w = build_w_n(&h, degree, n, CAP).unwrap();
        let letters = w.elements().unwrap();
        prop_assume!((letters.len() as u64).pow(k as u32) <= 100_000);

        let fast = sumset_distribution(&h, receiver, diag, &w, CAP).unwrap();
        let slow = tuple_law(&h, receiver, diag, letters);
        prop_assert_eq!(fast.support_size(), slow.len());
        let mut total = Rational::from_integer(0.into());
        for (v, p) in &slow {
            prop_assert_eq!(&fast.probability(v), p);
            total += p;
        }
        prop_assert!(total.is_one());
        let h_fast = signal_law(&h, receiver, diag, &w, CAP).unwrap().entropy_bits();
        prop_assert!((h_fast - entropy_of(&slow)).abs() < 1e-12);
    }

    #[test]
    fn separability_matches_collision_count(
        coeffs in proptest::collection::vec((-2i64..3, -1i64..2, -1i64..2), 9),
        n in 1u64..4,
        receiver in 0usize..3,
    ) {
        let h = channel(3, &coeffs);
        let w = build_w_n(&h, 0, n, CAP).unwrap();
        let letters = w.elements().unwrap();
        let interference = tuple_law(&h, receiver, false, letters);
        let hii = h.entry(receiver, receiver);
        let mut sums = std::collections::HashSet::new();
        let mut injective = true;
        for x in letters {
            for v in interference.keys() {
                injective &= sums.insert(&(hii * x) + v);
            }
        }
        // distinct letters scale to distinct values, so collisions come from sums only
        prop_assert_eq!(separability_check(&h, receiver, &w, CAP).unwrap(), injective);
        if injective {
            let full = signal_law(&h, receiver, true, &w, CAP).unwrap().entropy_bits();
            let interf = signal_law(&h, receiver, false, &w, CAP).unwrap().entropy_bits();
            let diag = (letters.len() as f64).log2();
            prop_assert!((full - diag - interf).abs() < 1e-12);
        }
    }
}
