#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use chebias::{Permutation, PermutationGroup};
use proptest::prelude::*;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

/// Small groups from one to three random generators on 3 to 6 points.
pub fn group_strategy() -> impl Strategy<Value = Arc<PermutationGroup>> {
    (3usize..=6)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(perm_strategy(n), 1..=3)))
        .prop_filter_map("group too large", |(n, gens)| {
            PermutationGroup::generate_with_cap(n, &gens, 720).ok().map(Arc::new)
        })
}

/// Trial division, for cross-checking the sieve.
pub fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}
