//! Simple undirected graphs in compressed sparse row form.
//!
//! Nodes carry dense indices `0..n` plus an arbitrary string label. Indices
//! are assigned in first-appearance order when a graph is read from an edge
//! list, which keeps rankings and tie orders reproducible across runs.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::io::BufRead;

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kshell;
use crate::sir::{self, ThresholdFormula};

/// Immutable simple undirected unweighted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    labels: Vec<String>,
}

/// Counts of input edges that were discarded while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

impl BuildReport {
    pub fn dropped(&self) -> usize {
        self.self_loops + self.duplicate_edges
    }
}

/// Accumulates labelled nodes and edges, then freezes them into a [`Graph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    self_loops: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder pre-populated with `n` nodes labelled by their index.
    pub fn with_nodes(n: usize) -> Self {
        let mut b = Self::default();
        for i in 0..n {
            b.node(&i.to_string());
        }
        b
    }

    /// Returns the index of `label`, creating the node on first sight.
    pub fn node(&mut self, label: &str) -> usize {
        match self.index.entry(label.to_owned()) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = self.labels.len();
                self.labels.push(label.to_owned());
                e.insert(id);
                id
            }
        }
    }

    pub fn edge_by_label(&mut self, a: &str, b: &str) {
        let u = self.node(a);
        let v = self.node(b);
        self.edge(u, v);
    }

    /// Adds an edge between existing node indices. Self-loops are counted and dropped.
    pub fn edge(&mut self, u: usize, v: usize) {
        assert!(
            u < self.labels.len() && v < self.labels.len(),
            "edge ({u}, {v}) references a node that was never added"
        );
        if u == v {
            self.self_loops += 1;
        } else {
            self.edges.push((u.min(v), u.max(v)));
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn build(self) -> (Graph, BuildReport) {
        let GraphBuilder {
            labels,
            mut edges,
            self_loops,
            ..
        } = self;
        let raw = edges.len();
        edges.sort_unstable();
        edges.dedup();
        let report = BuildReport {
            self_loops,
            duplicate_edges: raw - edges.len(),
        };

        let n = labels.len();
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        // With edges sorted by (min, max), every row is filled in ascending order.
        for &(u, v) in &edges {
            targets[cursor[u]] = v;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            cursor[v] += 1;
        }
        let g = Graph {
            offsets,
            targets,
            labels,
        };
        debug_assert!((0..n).all(|i| g.neighbors(i).windows(2).all(|w| w[0] < w[1])));
        (g, report)
    }
}

/// Result of reading an edge list.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub graph: Graph,
    pub report: BuildReport,
}

/// Reads a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` are comments. Each remaining non-blank line
/// names two node labels; any further columns (weights, timestamps) are
/// ignored. Self-loops and repeated edges are dropped and tallied in the
/// returned [`BuildReport`].
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Parsed> {
    let mut builder = GraphBuilder::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Io(e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => builder.edge_by_label(a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two node labels, found `{trimmed}`"),
                })
            }
        }
    }
    if builder.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (graph, report) = builder.build();
    if report.dropped() > 0 {
        warn!(
            "dropped {} self-loop(s) and {} duplicate edge(s) while reading edge list",
            report.self_loops, report.duplicate_edges
        );
    }
    Ok(Parsed { graph, report })
}

pub fn parse_edge_list_str(text: &str) -> Result<Parsed> {
    parse_edge_list(text.as_bytes())
}

/// Set of node indices validated against a graph size.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, nodes: I) -> Result<Self> {
        let mut members: Vec<usize> = nodes.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= n) {
            return Err(Error::NodeOutOfRange { node: bad, n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members })
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }
}

/// Connected component partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component id per node. Ids are numbered by each component's smallest node index.
    pub membership: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Id of the largest component; equal sizes resolve to the lowest id.
    pub fn largest(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (id, &size) in self.sizes.iter().enumerate() {
            if best.is_none_or(|b| size > self.sizes[b]) {
                best = Some(id);
            }
        }
        best
    }
}

/// Summary statistics of a network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub mean_degree_sq: f64,
    pub max_coreness: u32,
    pub giant_size: usize,
    pub beta_th: f64,
}

impl Graph {
    /// Graph on nodes `0..n` labelled by index. Self-loops and repeats are dropped.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Graph {
        let mut b = GraphBuilder::with_nodes(n);
        for (u, v) in edges {
            b.edge(u, v);
        }
        b.build().0
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Sorted neighbor indices of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Linear lookup of a label. Use [`Graph::label_index`] for many lookups.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Writes the graph as an edge list readable by [`parse_edge_list`].
    ///
    /// Isolated nodes are written as a self-loop line so they survive a re-parse.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for u in 0..self.node_count() {
            if self.degree(u) == 0 {
                out.push_str(&format!("{0} {0}\n", self.labels[u]));
            }
            for &v in self.neighbors(u).iter().filter(|&&v| v > u) {
                out.push_str(&self.labels[u]);
                out.push(' ');
                out.push_str(&self.labels[v]);
                out.push('\n');
            }
        }
        out
    }

    /// Exact hop distances from `source`. Entries are `None` for unreachable
    /// nodes and for nodes farther than `max_depth`.
    pub fn bfs_distances(&self, source: usize, max_depth: Option<usize>) -> Result<Vec<Option<usize>>> {
        self.check_node(source)?;
        let mut dist = vec![None; self.node_count()];
        let mut bfs = Bfs::new(self.node_count());
        bfs.run(self, source, max_depth, |v, d| dist[v] = Some(d));
        Ok(dist)
    }

    pub fn connected_components(&self) -> Components {
        let n = self.node_count();
        let mut membership = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if membership[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0;
            membership[start] = id;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in self.neighbors(u) {
                    if membership[v] == usize::MAX {
                        membership[v] = id;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        Components { membership, sizes }
    }

    /// Induced subgraph on the nodes with `keep[i] == true`, preserving
    /// labels and relative node order.
    pub fn induced_subgraph(&self, keep: &[bool]) -> Graph {
        assert_eq!(keep.len(), self.node_count());
        let mut new_index = vec![usize::MAX; keep.len()];
        let mut labels = Vec::new();
        for (i, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            new_index[i] = labels.len();
            labels.push(self.labels[i].clone());
        }
        let mut offsets = Vec::with_capacity(labels.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (i, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            // Relabeling is monotone, so rows stay sorted.
            targets.extend(
                self.neighbors(i)
                    .iter()
                    .filter(|&&v| keep[v])
                    .map(|&v| new_index[v]),
            );
            offsets.push(targets.len());
        }
        Graph {
            offsets,
            targets,
            labels,
        }
    }

    pub fn largest_connected_component(&self) -> Result<Graph> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let comps = self.connected_components();
        let giant = comps.largest().expect("non-empty graph has a component");
        let keep: Vec<bool> = comps.membership.iter().map(|&c| c == giant).collect();
        Ok(self.induced_subgraph(&keep))
    }

    /// Graph with `victims` deleted. Survivors keep their labels, isolated ones included.
    pub fn remove_nodes(&self, victims: &NodeSet) -> Graph {
        let mut keep = vec![true; self.node_count()];
        for v in victims.iter() {
            keep[v] = false;
        }
        self.induced_subgraph(&keep)
    }

    pub fn stats(&self, threshold: ThresholdFormula) -> Result<GraphStats> {
        graph_stats(self, threshold)
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                n: self.node_count(),
            })
        }
    }
}

pub fn graph_stats(g: &Graph, threshold: ThresholdFormula) -> Result<GraphStats> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let degrees = g.degrees();
    let mean_degree = 2.0 * g.edge_count() as f64 / n as f64;
    let mean_degree_sq = degrees.iter().map(|&k| (k * k) as f64).sum::<f64>() / n as f64;
    let comps = g.connected_components();
    Ok(GraphStats {
        n,
        m: g.edge_count(),
        mean_degree,
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        mean_degree_sq,
        max_coreness: kshell::kcore_decomposition(g).max(),
        giant_size: comps.largest().map_or(0, |c| comps.sizes[c]),
        beta_th: sir::epidemic_threshold(g, threshold)?,
    })
}

/// Reusable breadth-first search scratch space.
pub(crate) struct Bfs {
    dist: Vec<usize>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Bfs {
    pub(crate) fn new(n: usize) -> Self {
        Bfs {
            dist: vec![usize::MAX; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// Calls `visit(node, depth)` for every node within `max_depth` of
    /// `source`, source included, in nondecreasing depth order.
    pub(crate) fn run<F: FnMut(usize, usize)>(
        &mut self,
        g: &Graph,
        source: usize,
        max_depth: Option<usize>,
        mut visit: F,
    ) {
        for &t in &self.touched {
            self.dist[t] = usize::MAX;
        }
        self.touched.clear();
        self.queue.clear();

        let limit = max_depth.unwrap_or(usize::MAX);
        self.dist[source] = 0;
        self.touched.push(source);
        self.queue.push_back(source);
        while let Some(u) = self.queue.pop_front() {
            let d = self.dist[u];
            visit(u, d);
            if d == limit {
                continue;
            }
            for &v in g.neighbors(u) {
                if self.dist[v] == usize::MAX {
                    self.dist[v] = d + 1;
                    self.touched.push(v);
                    self.queue.push_back(v);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i)))
    }

    #[test]
    fn parses_simple_list() {
        let p = parse_edge_list_str("a b\nb c").unwrap();
        assert_eq!(p.graph.node_count(), 3);
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.graph.labels(), &["a", "b", "c"]);
        assert_eq!(p.report.dropped(), 0);
    }

    #[test]
    fn drops_loops_and_duplicates() {
        let p = parse_edge_list_str("a a\na b\na b").unwrap();
        assert_eq!(p.graph.node_count(), 2);
        assert_eq!(p.graph.edge_count(), 1);
        assert_eq!(p.report.self_loops, 1);
        assert_eq!(p.report.duplicate_edges, 1);
        assert_eq!(p.report.dropped(), 2);
    }

    #[test]
    fn reversed_duplicate_counts_once() {
        let p = parse_edge_list_str("x y\ny x\n").unwrap();
        assert_eq!(p.graph.edge_count(), 1);
        assert_eq!(p.report.duplicate_edges, 1);
    }

    #[test]
    fn ignores_comments_and_weights() {
        let text = "% header\n# another\n\n a b 0.5\nb c 3 extra\n";
        let p = parse_edge_list_str(text).unwrap();
        assert_eq!(p.graph.edge_count(), 2);
    }

    #[test]
    fn one_token_line_is_an_error() {
        let err = parse_edge_list_str("a b\nlonely\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                message: "expected two node labels, found `lonely`".into()
            }
        );
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(parse_edge_list_str("").unwrap_err(), Error::EmptyGraph);
        assert_eq!(parse_edge_list_str("# only comments\n").unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn edge_list_round_trip_keeps_isolated_nodes() {
        let mut b = GraphBuilder::new();
        b.edge_by_label("p", "q");
        b.node("alone");
        let (g, _) = b.build();
        let again = parse_edge_list_str(&g.to_edge_list()).unwrap().graph;
        assert_eq!(again.node_count(), 3);
        assert_eq!(again.edge_count(), 1);
        assert!(again.find("alone").is_some());
    }

    #[test]
    fn lcc_of_connected_triangle_is_itself() {
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let lcc = tri.largest_connected_component().unwrap();
        assert_eq!(lcc, tri);
    }

    #[test]
    fn lcc_picks_triangle_over_edge() {
        let g = Graph::from_edges(5, [(3, 4), (0, 1), (1, 2), (0, 2)]);
        let lcc = g.largest_connected_component().unwrap();
        assert_eq!(lcc.node_count(), 3);
        assert_eq!(lcc.labels(), &["0", "1", "2"]);
    }

    #[test]
    fn lcc_tie_prefers_smallest_index() {
        let g = Graph::from_edges(4, [(2, 3), (0, 1)]);
        let lcc = g.largest_connected_component().unwrap();
        assert_eq!(lcc.labels(), &["0", "1"]);
    }

    #[test]
    fn lcc_of_empty_graph_fails() {
        let g = Graph::from_edges(0, []);
        assert_eq!(g.largest_connected_component().unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn stats_of_k4_and_path() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let s = k4.stats(ThresholdFormula::Hmf).unwrap();
        assert_eq!(s.mean_degree, 3.0);
        assert_eq!(s.max_degree, 3);
        assert_eq!(s.max_coreness, 3);
        assert_eq!(s.giant_size, 4);

        let p3 = path(3).stats(ThresholdFormula::Hmf).unwrap();
        assert!((p3.mean_degree_sq - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bfs_on_path_and_star() {
        let p3 = path(3);
        assert_eq!(p3.bfs_distances(0, None).unwrap(), vec![Some(0), Some(1), Some(2)]);
        assert_eq!(p3.bfs_distances(0, Some(1)).unwrap(), vec![Some(0), Some(1), None]);

        let s = star(3);
        assert_eq!(
            s.bfs_distances(1, None).unwrap(),
            vec![Some(1), Some(0), Some(2), Some(2)]
        );
        assert!(matches!(
            s.bfs_distances(9, None),
            Err(Error::NodeOutOfRange { node: 9, n: 4 })
        ));
    }

    #[test]
    fn bfs_marks_unreachable_as_none() {
        let g = Graph::from_edges(3, [(0, 1)]);
        assert_eq!(g.bfs_distances(2, None).unwrap(), vec![None, None, Some(0)]);
    }

    #[test]
    fn component_counts() {
        assert_eq!(path(4).connected_components().count(), 1);
        assert_eq!(Graph::from_edges(5, []).connected_components().count(), 5);
    }

    #[test]
    fn removal_cases() {
        let p3 = path(3);
        assert_eq!(p3.remove_nodes(&NodeSet::default()), p3);

        let cut = p3.remove_nodes(&NodeSet::new(3, [1]).unwrap());
        assert_eq!(cut.node_count(), 2);
        assert_eq!(cut.edge_count(), 0);
        assert_eq!(cut.connected_components().count(), 2);
        assert_eq!(cut.labels(), &["0", "2"]);

        let s = star(4).remove_nodes(&NodeSet::new(5, [0]).unwrap());
        assert_eq!(s.node_count(), 4);
        assert_eq!(s.edge_count(), 0);
    }

    #[test]
    fn node_set_rejects_out_of_range() {
        assert_eq!(
            NodeSet::new(3, [0, 3]).unwrap_err(),
            Error::NodeOutOfRange { node: 3, n: 3 }
        );
    }
}
