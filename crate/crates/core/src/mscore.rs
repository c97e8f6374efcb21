//! M-Centrality: a node's k-shell position blended with the degree variation
//! in its neighbourhood.
//!
//! For node `i` with degree `k_i`, neighbourhood `N_i` and neighbour degree
//! sum `S_i = sum_{j in N_i} k_j`, the local attribute is
//!
//! ```text
//! delta_d(i) = |N_i| * sum_{j in N_i} |k_j - k_i| / S_i
//! ```
//!
//! and the score is `M_i = mu * coreness(i) + (1 - mu) * delta_d(i)`. When
//! `mu` is not supplied it is derived from the Shannon entropy of the two
//! attribute distributions: the less uniform attribute (lower entropy)
//! receives the larger weight.

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::graph::Graph;
use crate::kshell::{self, Coreness};

/// Below this many nodes the per-node loop runs sequentially.
const PAR_THRESHOLD: usize = 4096;

/// Degree variation in each node's neighbourhood. Zero for isolated nodes.
pub fn delta_d(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let node = |i: usize| -> f64 {
        let nbrs = g.neighbors(i);
        if nbrs.is_empty() {
            return 0.0;
        }
        let ki = nbrs.len() as f64;
        let (spread, total) = nbrs.iter().fold((0.0, 0.0), |(spread, total), &j| {
            let kj = g.degree(j) as f64;
            (spread + (kj - ki).abs(), total + kj)
        });
        ki * spread / total
    };
    if n < PAR_THRESHOLD {
        (0..n).map(node).collect()
    } else {
        (0..n).into_par_iter().map(node).collect()
    }
}

/// Which attribute carried no information when weights were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    Coreness,
    DeltaD,
}

/// Entropy-derived attribute weights. `mu` weights coreness, `1 - mu` weights ΔD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyWeights {
    pub mu: f64,
    pub entropy_global: f64,
    pub entropy_local: f64,
    /// Set when one attribute was identically zero and was given weight 0.
    pub degenerate: Option<Attribute>,
}

impl EntropyWeights {
    pub fn weight_global(&self) -> f64 {
        self.mu
    }

    pub fn weight_local(&self) -> f64 {
        1.0 - self.mu
    }
}

/// Normalized Shannon entropy of a nonnegative attribute, in `[0, 1]`.
///
/// Returns `None` when the attribute sums to zero. Zero entries contribute
/// nothing (`0 ln 0 = 0`).
pub fn normalized_entropy(values: &[f64]) -> Option<f64> {
    let total: f64 = values.iter().sum();
    if total <= 0.0 || values.len() < 2 {
        return None;
    }
    let h: f64 = values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| {
            let r = v / total;
            r * r.ln()
        })
        .sum();
    Some(-h / (values.len() as f64).ln())
}

/// Weights for the coreness and ΔD attributes from their entropies.
///
/// `w_i = (1 - E_i) / (2 - E_1 - E_2)` and `mu = w_1`. If exactly one
/// attribute is all zero it gets weight 0. If both are flat (entropy 1) they
/// are weighted equally.
pub fn entropy_weights(coreness: &[f64], delta_d: &[f64]) -> Result<EntropyWeights> {
    if coreness.len() != delta_d.len() {
        return Err(Error::LengthMismatch {
            left: coreness.len(),
            right: delta_d.len(),
        });
    }
    if coreness.len() < 2 {
        return Err(Error::TooFewNodes {
            needed: 2,
            got: coreness.len(),
        });
    }
    let global = normalized_entropy(coreness);
    let local = normalized_entropy(delta_d);
    let weights = match (global, local) {
        (Some(e1), Some(e2)) => {
            let (d1, d2) = (1.0 - e1, 1.0 - e2);
            let mu = if (d1 + d2).abs() < 1e-15 {
                0.5
            } else {
                (d1 / (d1 + d2)).clamp(0.0, 1.0)
            };
            EntropyWeights {
                mu,
                entropy_global: e1,
                entropy_local: e2,
                degenerate: None,
            }
        }
        (Some(e1), None) => {
            warn!("ΔD is zero for every node; M-Centrality reduces to coreness");
            EntropyWeights {
                mu: 1.0,
                entropy_global: e1,
                entropy_local: f64::NAN,
                degenerate: Some(Attribute::DeltaD),
            }
        }
        (None, Some(e2)) => {
            warn!("coreness is zero for every node; M-Centrality reduces to ΔD");
            EntropyWeights {
                mu: 0.0,
                entropy_global: f64::NAN,
                entropy_local: e2,
                degenerate: Some(Attribute::Coreness),
            }
        }
        (None, None) => return Err(Error::DegenerateAttributes),
    };
    Ok(weights)
}

/// Scores with the attributes that produced them.
#[derive(Debug, Clone)]
pub struct MCentrality {
    pub coreness: Coreness,
    pub delta_d: Vec<f64>,
    /// Present when `mu` came from entropy weighting rather than an override.
    pub weights: Option<EntropyWeights>,
    pub mu: f64,
    pub scores: Vec<f64>,
}

/// `mu * coreness + (1 - mu) * delta_d`, elementwise.
pub fn combine(mu: f64, coreness: &[f64], delta_d: &[f64]) -> Vec<f64> {
    coreness
        .iter()
        .zip(delta_d)
        .map(|(&ks, &dd)| mu * ks + (1.0 - mu) * dd)
        .collect()
}

pub fn m_centrality(g: &Graph, mu_override: Option<f64>) -> Result<MCentrality> {
    if let Some(mu) = mu_override {
        check_probability("mu", mu)?;
    }
    let coreness = kshell::kcore_decomposition(g);
    let dd = delta_d(g);
    let ks = coreness.as_f64();
    let (mu, weights) = match mu_override {
        Some(mu) => (mu, None),
        None => {
            let w = entropy_weights(&ks, &dd)?;
            (w.mu, Some(w))
        }
    };
    let scores = combine(mu, &ks, &dd);
    Ok(MCentrality {
        coreness,
        delta_d: dd,
        weights,
        mu,
        scores,
    })
}
