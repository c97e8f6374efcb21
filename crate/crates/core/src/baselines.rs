//! Comparison centralities: degree, Gravity, Collective Influence,
//! ClusterRank, DIL and personalized PageRank.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph};
use crate::kshell;

/// Per-node scores tagged with the method and parameters that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityVector {
    pub method: String,
    pub params: BTreeMap<String, f64>,
    pub scores: Vec<f64>,
}

impl CentralityVector {
    pub fn new(method: impl Into<String>, scores: Vec<f64>) -> Self {
        Self {
            method: method.into(),
            params: BTreeMap::new(),
            scores,
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_owned(), value);
        self
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Runs `f` once per node, in parallel, with a private BFS workspace per worker.
fn per_node_bfs<F>(g: &Graph, f: F) -> Vec<f64>
where
    F: Fn(&mut Bfs, usize) -> f64 + Sync,
{
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(|| Bfs::new(n), |bfs, i| f(bfs, i))
        .collect()
}

pub fn degree_centrality(g: &Graph) -> CentralityVector {
    let scores = g.degrees().into_iter().map(|k| k as f64).collect();
    CentralityVector::new("degree", scores)
}

/// Gravity centrality: `sum_{j != i, d(i,j) <= radius} ks_i * ks_j / d(i,j)^2`
/// with k-shell indices as masses.
pub fn gravity(g: &Graph, radius: usize) -> CentralityVector {
    let ks = kshell::kcore_decomposition(g);
    let scores = per_node_bfs(g, |bfs, i| {
        let mi = f64::from(ks.get(i));
        let mut total = 0.0;
        bfs.run(g, i, Some(radius), |j, d| {
            if d > 0 {
                total += mi * f64::from(ks.get(j)) / (d * d) as f64;
            }
        });
        total
    });
    CentralityVector::new("gravity", scores).with_param("radius", radius as f64)
}

/// Collective Influence: `(k_i - 1) * sum_{j : d(i,j) = ell} (k_j - 1)`,
/// clamped at zero.
pub fn collective_influence(g: &Graph, ell: usize) -> CentralityVector {
    let scores = per_node_bfs(g, |bfs, i| {
        let reduced = g.degree(i) as f64 - 1.0;
        let mut frontier = 0.0;
        bfs.run(g, i, Some(ell), |j, d| {
            if d == ell {
                frontier += g.degree(j) as f64 - 1.0;
            }
        });
        (reduced * frontier).max(0.0)
    });
    CentralityVector::new("ci", scores).with_param("ell", ell as f64)
}

/// Number of triangles through each node's incident edges: `common[i][k]`
/// for the `k`-th neighbor of `i`, aligned with `g.neighbors(i)`.
fn edge_triangles(g: &Graph, i: usize) -> Vec<usize> {
    let a = g.neighbors(i);
    a.iter()
        .map(|&j| {
            let b = g.neighbors(j);
            let (mut x, mut y, mut c) = (0, 0, 0);
            while x < a.len() && y < b.len() {
                match a[x].cmp(&b[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        c += 1;
                        x += 1;
                        y += 1;
                    }
                }
            }
            c
        })
        .collect()
}

/// Local clustering coefficient. Zero for degree below two.
pub fn clustering_coefficient(g: &Graph, i: usize) -> f64 {
    let k = g.degree(i);
    if k < 2 {
        return 0.0;
    }
    // Each triangle through i is seen from both of its other corners.
    let links: usize = edge_triangles(g, i).iter().sum::<usize>() / 2;
    2.0 * links as f64 / (k * (k - 1)) as f64
}

/// ClusterRank for undirected graphs: `10^(-c_i) * sum_{j in N_i} (k_j + 1)`.
pub fn cluster_rank(g: &Graph) -> CentralityVector {
    let scores = (0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let followers: f64 = g.neighbors(i).iter().map(|&j| g.degree(j) as f64 + 1.0).sum();
            10f64.powf(-clustering_coefficient(g, i)) * followers
        })
        .collect();
    CentralityVector::new("clusterrank", scores)
}

/// DIL: degree plus the importance of incident lines.
///
/// For edge `(i, j)` with `p` triangles through it, `U = (k_i - p - 1)(k_j - p - 1)`,
/// `I = U / (p/2 + 1)` and the share credited to `i` is
/// `I * (k_i - 1) / (k_i + k_j - 2)`. An isolated edge contributes nothing.
pub fn dil(g: &Graph) -> CentralityVector {
    let scores = (0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let ki = g.degree(i) as f64;
            let tri = edge_triangles(g, i);
            let lines: f64 = g
                .neighbors(i)
                .iter()
                .zip(tri)
                .map(|(&j, p)| {
                    let kj = g.degree(j) as f64;
                    let denom = ki + kj - 2.0;
                    if denom <= 0.0 {
                        return 0.0;
                    }
                    let p = p as f64;
                    let importance = (ki - p - 1.0) * (kj - p - 1.0) / (p / 2.0 + 1.0);
                    importance * (ki - 1.0) / denom
                })
                .sum();
            ki + lines
        })
        .collect();
    CentralityVector::new("dil", scores)
}

/// Teleport distribution for personalized PageRank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    /// Proportional to degree, favouring hubs.
    Degree,
    Uniform,
}

impl FromStr for Preference {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "degree" => Ok(Preference::Degree),
            "uniform" => Ok(Preference::Uniform),
            other => Err(format!("unknown preference `{other}` (expected degree or uniform)")),
        }
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preference::Degree => "degree",
            Preference::Uniform => "uniform",
        })
    }
}

pub const PPR_TOLERANCE: f64 = 1e-10;
pub const PPR_MAX_ITERATIONS: usize = 10_000;

fn preference_vector(g: &Graph, preference: Preference) -> Vec<f64> {
    let n = g.node_count();
    match preference {
        Preference::Uniform => vec![1.0 / n as f64; n],
        Preference::Degree if g.edge_count() > 0 => {
            let total = 2.0 * g.edge_count() as f64;
            g.degrees().into_iter().map(|k| k as f64 / total).collect()
        }
        // No edges: every node is dangling, fall back to uniform.
        Preference::Degree => vec![1.0 / n as f64; n],
    }
}

/// Personalized PageRank by power iteration.
///
/// With probability `1 - teleport` the walker follows a uniformly chosen
/// incident edge, otherwise it jumps according to `preference`. Mass on
/// nodes without edges is redistributed by the preference vector.
pub fn personalized_pagerank(
    g: &Graph,
    teleport: f64,
    preference: Preference,
) -> Result<CentralityVector> {
    if !(teleport > 0.0 && teleport < 1.0) {
        return Err(Error::InvalidParameter {
            name: "teleport",
            value: teleport,
            reason: "must lie in (0, 1)",
        });
    }
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let pref = preference_vector(g, preference);
    let degrees = g.degrees();
    let follow = 1.0 - teleport;
    let mut x = pref.clone();
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..PPR_MAX_ITERATIONS {
        let dangling: f64 = (0..n).filter(|&i| degrees[i] == 0).map(|i| x[i]).sum();
        let jump = teleport + follow * dangling;
        next.par_iter_mut().enumerate().for_each(|(v, out)| {
            let walk: f64 = g.neighbors(v).iter().map(|&u| x[u] / degrees[u] as f64).sum();
            *out = follow * walk + jump * pref[v];
        });
        residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if residual < PPR_TOLERANCE {
            let total: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= total);
            return Ok(CentralityVector::new("ppr", x)
                .with_param("teleport", teleport)
                .with_param("preference_degree", f64::from(preference == Preference::Degree)));
        }
    }
    Err(Error::NotConverged {
        iterations: PPR_MAX_ITERATIONS,
        residual,
    })
}
