use sparsecode::dictionary::{partition_bits, partition_subblocks};

/// Best `sum log2 L_k` over all nonincreasing power-of-two compositions of
/// at most `total` columns into `k` blocks.
fn exhaustive_best(total: usize, k: usize) -> Option<u32> {
    fn go(remaining: usize, k: usize, max_exp: u32) -> Option<u32> {
        if k == 0 {
            return Some(0);
        }
        (0..=max_exp)
            .filter(|&e| (1usize << e) <= remaining)
            .filter_map(|e| go(remaining - (1 << e), k - 1, e).map(|rest| rest + e))
            .max()
    }
    go(total, k, usize::BITS - 1)
}

#[test]
fn matches_exhaustive_search_up_to_64_columns() {
    let mut checked = 0;
    for total in 1..=64usize {
        for k in 1..=4usize {
            let Ok(parts) = partition_subblocks(total, k) else {
                assert!(k > 1 && 2 * k > total, "refused ({total}, {k})");
                continue;
            };
            assert_eq!(parts.len(), k);
            assert!(parts.iter().all(|l| l.is_power_of_two()));
            assert!(parts.iter().sum::<usize>() <= total);
            assert!(parts.windows(2).all(|w| w[0] >= w[1]), "not descending: {parts:?}");
            assert_eq!(Some(partition_bits(&parts)), exhaustive_best(total, k), "({total}, {k}) -> {parts:?}");
            assert_eq!(partition_subblocks(total, k).unwrap(), parts);
            checked += 1;
        }
    }
    assert!(checked > 200);
}

#[test]
fn reported_sizes() {
    assert_eq!(partition_subblocks(4096, 3).unwrap(), [2048, 1024, 1024]);
    assert_eq!(partition_subblocks(4096, 5).unwrap(), [1024, 1024, 1024, 512, 512]);
    assert_eq!(partition_subblocks(16384, 5).unwrap(), [4096, 4096, 4096, 2048, 2048]);
    assert_eq!(exhaustive_best(16384, 5), Some(58));
}
