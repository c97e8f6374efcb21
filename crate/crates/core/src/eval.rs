//! Ranking-quality metrics: monotonicity, Kendall tau-b, network efficiency
//! under node removal, and rank-biased overlap.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph};

/// Scores closer than this after rounding are treated as tied.
pub const DEFAULT_TIE_EPSILON: f64 = 1e-9;

/// Nodes sorted by descending score, with tie groups and competition ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankingList {
    /// Node indices, best first. Ties are ordered by node index.
    pub order: Vec<usize>,
    /// 1-based competition rank per node: tied nodes share the smallest position.
    pub rank: Vec<usize>,
    /// Size of each tie group, in order.
    pub groups: Vec<usize>,
}

impl RankingList {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn top(&self, k: usize) -> &[usize] {
        &self.order[..k.min(self.order.len())]
    }

    /// Per-node key where larger means better ranked and ties compare equal.
    pub fn ordinal_keys(&self) -> Vec<f64> {
        self.rank.iter().map(|&r| -(r as f64)).collect()
    }
}

fn quantize(x: f64, eps: f64) -> f64 {
    if eps > 0.0 {
        (x / eps).round()
    } else {
        x
    }
}

/// Orders nodes by descending score. Scores are rounded to multiples of
/// `tie_epsilon` first, and equal rounded scores form one tie group.
pub fn rank_nodes(scores: &[f64], tie_epsilon: f64) -> RankingList {
    let keys: Vec<f64> = scores.iter().map(|&s| quantize(s, tie_epsilon)).collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));

    let mut rank = vec![0; scores.len()];
    let mut groups = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let key = keys[order[start]];
        let end = start + order[start..].iter().take_while(|&&v| keys[v] == key).count();
        for &v in &order[start..end] {
            rank[v] = start + 1;
        }
        groups.push(end - start);
        start = end;
    }
    RankingList {
        order,
        rank,
        groups,
    }
}

/// `(1 - sum n_r (n_r - 1) / (n (n - 1)))^2` over tie groups `n_r`.
pub fn monotonicity(r: &RankingList) -> Result<f64> {
    let n = r.len();
    if n < 2 {
        return Err(Error::TooFewNodes { needed: 2, got: n });
    }
    let tied: f64 = r.groups.iter().map(|&g| (g * (g - 1)) as f64).sum();
    let m = 1.0 - tied / (n * (n - 1)) as f64;
    Ok(m * m)
}

/// Kendall tau-b. `degenerate` is set when either list is constant, in
/// which case `tau` is reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KendallTau {
    pub tau: f64,
    pub degenerate: bool,
}

/// `sum t (t - 1) / 2` over runs of equal values in a sorted slice.
fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0u64;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as u64;
        total += t * (t - 1) / 2;
        i = j;
    }
    total
}

/// Stable merge sort by `total_cmp`, returning the number of inversions.
fn sort_counting_swaps(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = sort_counting_swaps(&mut v[..mid], &mut buf[..mid])
        + sort_counting_swaps(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j].total_cmp(&v[i]) == Ordering::Less {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall tau-b in O(n log n) (Knight's algorithm).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<KendallTau> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewNodes { needed: 2, got: n });
    }
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let eq = |a: f64, b: f64| a.total_cmp(&b) == Ordering::Equal;
    let xs: Vec<u64> = pairs.iter().map(|p| p.0.to_bits()).collect();
    let tx = tied_pairs(&xs);
    let mut joint = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && eq(pairs[j].0, pairs[i].0) && eq(pairs[j].1, pairs[i].1) {
            j += 1;
        }
        let t = (j - i) as u64;
        joint += t * (t - 1) / 2;
        i = j;
    }

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = sort_counting_swaps(&mut ys, &mut buf);
    let ybits: Vec<u64> = ys.iter().map(|v| v.to_bits()).collect();
    let ty = tied_pairs(&ybits);

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    if tx == n0 || ty == n0 {
        return Ok(KendallTau {
            tau: 0.0,
            degenerate: true,
        });
    }
    // concordant - discordant over pairs untied in both lists
    let diff = n0 as i128 - tx as i128 - ty as i128 + joint as i128 - 2 * swaps as i128;
    let denom = ((n0 - tx) as f64 * (n0 - ty) as f64).sqrt();
    Ok(KendallTau {
        tau: (diff as f64 / denom).clamp(-1.0, 1.0),
        degenerate: false,
    })
}

/// Mean inverse shortest-path length over ordered pairs. Unreachable pairs
/// contribute 0.
pub fn network_efficiency(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes { needed: 2, got: n });
    }
    Ok(inverse_distance_sum(g) / (n as f64 * (n as f64 - 1.0)))
}

fn inverse_distance_sum(g: &Graph) -> f64 {
    let n = g.node_count();
    let per_source: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || Bfs::new(n),
            |bfs, s| {
                let mut sum = 0.0;
                bfs.run(g, s, None, |_, d| {
                    if d > 0 {
                        sum += 1.0 / d as f64;
                    }
                });
                sum
            },
        )
        .collect();
    // Fixed summation order keeps the result independent of thread count.
    per_source.iter().sum()
}

/// Node count used to normalize efficiency after removals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EfficiencyNorm {
    /// Surviving nodes only.
    #[default]
    Residual,
    /// Node count of the intact graph.
    Original,
}

impl std::str::FromStr for EfficiencyNorm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "residual" => Ok(Self::Residual),
            "original" => Ok(Self::Original),
            other => Err(format!("unknown efficiency normalization `{other}` (expected residual or original)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackStep {
    pub step: usize,
    /// Node removed at this step, as an index into the intact graph.
    pub removed: Option<usize>,
    pub components: usize,
    pub efficiency: f64,
    pub decline: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub initial_efficiency: f64,
    pub norm: EfficiencyNorm,
    pub steps: Vec<AttackStep>,
}

impl AttackReport {
    pub fn final_components(&self) -> usize {
        self.steps.last().map_or(0, |s| s.components)
    }
}

/// Removes the first `steps` distinct nodes of `order` one at a time,
/// recording efficiency, its decline relative to the intact graph, and the
/// number of connected components. Row 0 is the intact graph.
pub fn efficiency_decline(
    g: &Graph,
    order: &[usize],
    steps: usize,
    norm: EfficiencyNorm,
) -> Result<AttackReport> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes { needed: 2, got: n });
    }
    let mut seen = vec![false; n];
    let mut victims = Vec::with_capacity(steps);
    for &v in order {
        if victims.len() == steps {
            break;
        }
        g.check_node(v)?;
        if !seen[v] {
            seen[v] = true;
            victims.push(v);
        }
    }
    if victims.len() < steps {
        return Err(Error::OrderTooShort {
            requested: steps,
            available: victims.len(),
        });
    }

    let eta0 = network_efficiency(g)?;
    let mut rows = vec![AttackStep {
        step: 0,
        removed: None,
        components: g.connected_components().count(),
        efficiency: eta0,
        decline: 0.0,
    }];
    let mut keep = vec![true; n];
    for (i, &v) in victims.iter().enumerate() {
        keep[v] = false;
        let residual = g.induced_subgraph(&keep);
        let alive = residual.node_count();
        let denom_n = match norm {
            EfficiencyNorm::Residual => alive,
            EfficiencyNorm::Original => n,
        } as f64;
        let eta = if alive < 2 {
            0.0
        } else {
            inverse_distance_sum(&residual) / (denom_n * (denom_n - 1.0))
        };
        rows.push(AttackStep {
            step: i + 1,
            removed: Some(v),
            components: residual.connected_components().count(),
            efficiency: eta,
            decline: if eta0 > 0.0 { 1.0 - eta / eta0 } else { 0.0 },
        });
    }
    Ok(AttackReport {
        initial_efficiency: eta0,
        norm,
        steps: rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RboParams {
    pub p: f64,
    pub depth: usize,
}

impl RboParams {
    pub fn new(p: f64, depth: usize) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "persistence must lie strictly between 0 and 1",
            });
        }
        if depth == 0 {
            return Err(Error::InvalidParameter {
                name: "depth",
                value: 0.0,
                reason: "depth must be at least 1",
            });
        }
        Ok(Self { p, depth })
    }
}

/// Rank-biased overlap `(1 - p) sum_{d=1}^{depth} p^(d-1) A_d`, where `A_d`
/// is the Jaccard overlap of the two depth-`d` prefixes.
///
/// The Jaccard form differs from the classic prefix-length denominator.
/// Depth is capped at the list length.
pub fn rbo(x: &RankingList, y: &RankingList, params: RboParams) -> Result<f64> {
    let params = RboParams::new(params.p, params.depth)?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    // 1 = seen in x only, 2 = y only, 3 = both
    let mut seen = vec![0u8; n];
    let (mut inter, mut union) = (0usize, 0usize);
    let mut total = 0.0;
    let mut weight = 1.0 - params.p;
    for d in 0..params.depth.min(n) {
        for (node, bit) in [(x.order[d], 1u8), (y.order[d], 2u8)] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
            let before = seen[node];
            if before & bit != 0 {
                continue;
            }
            seen[node] |= bit;
            if before == 0 {
                union += 1;
            } else {
                inter += 1;
            }
        }
        total += weight * inter as f64 / union as f64;
        weight *= params.p;
    }
    Ok(total)
}
