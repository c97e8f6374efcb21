//! K-core decomposition by bucket peeling.

use crate::graph::Graph;

/// Coreness index per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coreness {
    values: Vec<u32>,
    peel_order: Vec<usize>,
}

impl Coreness {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, node: usize) -> u32 {
        self.values[node]
    }

    pub fn max(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Nodes in the order they were peeled (outermost shell first).
    pub fn peel_order(&self) -> &[usize] {
        &self.peel_order
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&k| f64::from(k)).collect()
    }
}

/// Coreness of every node in O(n + m).
///
/// Nodes are kept in an array ordered by current degree, with `bin_start[d]`
/// pointing at the first slot holding degree `d`. Peeling walks the array
/// left to right; when a neighbor's degree drops it is swapped to the front
/// of its bin and the bin boundary advances. Ties start out in index order,
/// so the peel order is reproducible.
pub fn kcore_decomposition(g: &Graph) -> Coreness {
    let n = g.node_count();
    let mut degree: Vec<usize> = g.degrees();
    let max_degree = degree.iter().copied().max().unwrap_or(0);

    let mut bin_start = vec![0usize; max_degree + 2];
    for &d in &degree {
        bin_start[d + 1] += 1;
    }
    for d in 0..=max_degree {
        bin_start[d + 1] += bin_start[d];
    }

    let mut order = vec![0usize; n];
    let mut pos = vec![0usize; n];
    let mut fill = bin_start.clone();
    for v in 0..n {
        let slot = fill[degree[v]];
        order[slot] = v;
        pos[v] = slot;
        fill[degree[v]] += 1;
    }

    for i in 0..n {
        let v = order[i];
        let dv = degree[v];
        for &u in g.neighbors(v) {
            let du = degree[u];
            if du > dv {
                let front = bin_start[du];
                let w = order[front];
                if w != u {
                    order.swap(front, pos[u]);
                    pos[w] = pos[u];
                    pos[u] = front;
                }
                bin_start[du] += 1;
                degree[u] -= 1;
            }
        }
    }

    Coreness {
        values: degree.into_iter().map(|d| d as u32).collect(),
        peel_order: order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    #[test]
    fn clique_coreness() {
        let c = kcore_decomposition(&complete(4));
        assert_eq!(c.values(), &[3, 3, 3, 3]);
        assert_eq!(c.max(), 3);
    }

    #[test]
    fn star_is_one_core() {
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i)));
        assert_eq!(kcore_decomposition(&star).values(), &[1; 6]);
    }

    #[test]
    fn isolated_nodes_get_zero() {
        let g = Graph::from_edges(4, [(0, 1)]);
        assert_eq!(kcore_decomposition(&g).values(), &[1, 1, 0, 0]);
    }

    #[test]
    fn clique_with_tail() {
        // K4 on 0..4 plus a path 3-4-5.
        let mut edges: Vec<_> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        edges.extend([(3, 4), (4, 5)]);
        let g = Graph::from_edges(6, edges);
        assert_eq!(kcore_decomposition(&g).values(), &[3, 3, 3, 3, 1, 1]);
    }

    #[test]
    fn peel_order_is_a_permutation() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3)]);
        let c = kcore_decomposition(&g);
        let mut seen = c.peel_order().to_vec();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.peel_order()[0], 4);
    }
}
