//! Random instance strategies shared by the property tests.

use proptest::prelude::*;

use crate::graph::DagInstance;

/// A DAG on `n` vertices whose edges point forward in a shuffled order, so
/// vertex ids are not already topologically sorted. Parallel edges occur.
pub fn dag(max_n: usize, max_m: usize, max_k: usize) -> impl Strategy<Value = DagInstance> {
    (3..=max_n)
        .prop_flat_map(move |n| {
            let pair = (0..n, 0..n, 1u32..=10).prop_filter("distinct endpoints", |(a, b, _)| a != b);
            (
                Just(n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(pair, 1..=max_m),
                1..=max_k.min(n - 1),
            )
        })
        .prop_map(|(n, perm, raw, k)| {
            let edges = raw
                .into_iter()
                .map(|(a, b, c)| {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    (perm[lo], perm[hi], c as f64)
                })
                .collect();
            DagInstance::new(n, edges, k).expect("forward edges are acyclic")
        })
}

/// An instance together with an arbitrary nonnegative edge weighting.
pub fn dag_with_weights(
    max_n: usize,
    max_m: usize,
    max_k: usize,
) -> impl Strategy<Value = (DagInstance, Vec<f64>)> {
    dag(max_n, max_m, max_k).prop_flat_map(|g| {
        let m = g.m();
        (Just(g), proptest::collection::vec(0.0f64..1.0, m))
    })
}
