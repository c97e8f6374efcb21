//! Seeded random graph generators for tests and benchmarks.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphBuilder};

/// Uniform G(n, m): `m` distinct edges drawn without replacement.
/// `m` is capped at `n (n - 1) / 2`.
pub fn gnm(n: usize, m: usize, seed: u64) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    let m = m.min(total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::with_nodes(n);
    if m * 4 > total {
        // Dense: sample pair indices directly.
        for idx in index::sample(&mut rng, total, m) {
            let (u, v) = unrank_pair(idx);
            b.edge(u, v);
        }
        return b.build().0;
    }
    let mut seen = std::collections::HashSet::with_capacity(m);
    while seen.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            b.edge(u, v);
        }
    }
    b.build().0
}

/// Maps `0..n(n-1)/2` onto pairs `(u, v)` with `u < v`.
fn unrank_pair(idx: usize) -> (usize, usize) {
    // v is the largest integer with v (v - 1) / 2 <= idx.
    let mut v = ((1.0 + (1.0 + 8.0 * idx as f64).sqrt()) / 2.0) as usize;
    while v * (v - 1) / 2 > idx {
        v -= 1;
    }
    while (v + 1) * v / 2 <= idx {
        v += 1;
    }
    (idx - v * (v - 1) / 2, v)
}

/// Barabási–Albert preferential attachment: each new node attaches to
/// `k` distinct existing nodes chosen proportionally to degree.
pub fn barabasi_albert(n: usize, k: usize, seed: u64) -> Graph {
    let k = k.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::with_nodes(n);
    let core = (k + 1).min(n);
    let mut endpoints = Vec::with_capacity(2 * n * k);
    for u in 0..core {
        for v in u + 1..core {
            b.edge(u, v);
            endpoints.extend([u, v]);
        }
    }
    let mut chosen = Vec::with_capacity(k);
    for u in core..n {
        chosen.clear();
        while chosen.len() < k {
            let v = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        for &v in &chosen {
            b.edge(u, v);
            endpoints.extend([u, v]);
        }
    }
    b.build().0
}
