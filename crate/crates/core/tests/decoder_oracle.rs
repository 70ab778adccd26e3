//! Lookup tables against exhaustive enumeration on small codes.

use std::collections::HashMap;

use pgrand_core::noise::count_patterns;
use pgrand_core::*;
use proptest::prelude::*;

fn setup(n: usize, k: usize, gates: usize, seed: u64) -> ParityCheckMatrix {
    let c = sample_random_encoder(n, gates, seed).unwrap();
    build_parity_check(&c, &default_measured_qubits(n, k)).unwrap()
}

/// First pattern (in enumeration order) for every reachable syndrome.
fn brute_force(h: &ParityCheckMatrix) -> HashMap<BitString, PauliString> {
    let mut first = HashMap::new();
    for e in enumerate_patterns(h.num_qubits(), h.num_qubits()).unwrap() {
        let s = h.syndrome(&e).unwrap();
        first.entry(s).or_insert(e);
    }
    first
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn table_stores_first_lightest_pattern(
        (n, k, t) in (2usize..=6).prop_flat_map(|n| (Just(n), 1..n, 0..=n)),
        seed in any::<u64>(),
        gates in 1usize..40,
    ) {
        let h = setup(n, k, gates, seed);
        let noise = DepolarizingParams::new(n, 0.1).unwrap();
        let table = build_table(&h, t, &noise, &BuildOptions::default()).unwrap();
        let oracle = brute_force(&h);
        let mut stored = vec![0u64; t + 1];
        for (s, e) in &oracle {
            let got = table.decode(s).unwrap();
            if e.weight() <= t {
                stored[e.weight()] += 1;
                prop_assert_eq!(got.as_ref(), Some(e), "syndrome {}", s);
            } else {
                prop_assert!(got.is_none());
            }
        }
        prop_assert_eq!(table.patterns_stored(), &stored[..]);
        prop_assert_eq!(table.len() as u64, stored.iter().sum::<u64>());
        for e in table.entries().iter().map(|(_, e)| e) {
            prop_assert!(e.weight() <= t);
        }
        let seen: Vec<u128> = (0..=t).map(|w| count_patterns(n, w).unwrap().exact.try_into().unwrap()).collect();
        prop_assert_eq!(table.patterns_seen(), &seen[..]);
    }

    #[test]
    fn serialization_round_trips(
        (n, k, t) in (2usize..=10).prop_flat_map(|n| (Just(n), 1..n, 0..=3usize.min(n))),
        seed in any::<u64>(),
    ) {
        let h = setup(n, k, 30, seed);
        let noise = DepolarizingParams::new(n, 0.05).unwrap();
        let table = build_table(&h, t, &noise, &BuildOptions::default()).unwrap();
        let bytes = table.to_bytes();
        let back = SyndromeTable::from_bytes(&bytes).unwrap();
        prop_assert_eq!(back.to_bytes(), bytes);
        prop_assert_eq!(back.entries(), table.entries());
        prop_assert_eq!(back.provenance(), table.provenance());
    }

    #[test]
    fn resume_matches_fresh_build(seed in any::<u64>(), split in 0usize..3) {
        let (n, k, t) = (14, 5, 3);
        let h = setup(n, k, 80, seed);
        let noise = DepolarizingParams::new(n, 0.05).unwrap();
        let opts = BuildOptions::default();
        let partial = build_table(&h, split, &noise, &opts).unwrap();
        let resumed = resume_table(partial, &h, t, &noise, &opts, |_| Ok(())).unwrap();
        let fresh = build_table(&h, t, &noise, &opts).unwrap();
        prop_assert_eq!(resumed.to_bytes(), fresh.to_bytes());
    }
}

#[test]
fn build_is_independent_of_thread_count() {
    let h = setup(24, 8, 300, 7);
    let noise = DepolarizingParams::new(24, 0.02).unwrap();
    let build = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| build_table(&h, 4, &noise, &BuildOptions::default()).unwrap().to_bytes())
    };
    assert_eq!(build(1), build(4));
}

#[test]
fn memory_budget_is_enforced() {
    let h = setup(40, 10, 300, 1);
    let noise = DepolarizingParams::new(40, 0.02).unwrap();
    let tiny = BuildOptions { memory_budget_bytes: 1 << 16 };
    assert!(matches!(build_table(&h, 4, &noise, &tiny), Err(Error::ResourceLimit { .. })));
}

#[test]
fn corrupt_tables_are_rejected() {
    let h = setup(8, 3, 30, 2);
    let noise = DepolarizingParams::new(8, 0.05).unwrap();
    let bytes = build_table(&h, 2, &noise, &BuildOptions::default()).unwrap().to_bytes();
    let mut bad = bytes.clone();
    bad[0] ^= 1;
    assert!(SyndromeTable::from_bytes(&bad).is_err());
    assert!(SyndromeTable::from_bytes(&bytes[..bytes.len() - 1]).is_err());
}
