//! Discrete-time SIR spreading used to measure each node's influence.
//!
//! Every run starts from one infected seed. In each synchronous step every
//! infected node tries once to infect each susceptible neighbour with
//! probability `beta` and then recovers (`gamma = 1`). A node's influence is
//! the mean final number of recovered nodes over `runs` independent runs.
//!
//! Each run draws from its own ChaCha stream keyed by
//! `(master_seed, seed_node, run_index)`, so results do not depend on how
//! work is scheduled across threads.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::CentralityVector;
use crate::error::{check_probability, Error, Result};
use crate::eval::{self, KendallTau};
use crate::graph::Graph;

/// Mean-field estimate used for the epidemic threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdFormula {
    /// `<k> / <k^2>`
    Hmf,
    /// `<k> / (<k^2> - <k>)`
    #[default]
    HmfCorrected,
}

impl FromStr for ThresholdFormula {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "hmf" => Ok(Self::Hmf),
            "hmf_corrected" | "hmf-corrected" => Ok(Self::HmfCorrected),
            other => Err(format!("unknown threshold formula `{other}` (expected hmf or hmf_corrected)")),
        }
    }
}

pub fn epidemic_threshold(g: &Graph, formula: ThresholdFormula) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count() as f64;
    let (k1, k2) = g.degrees().into_iter().fold((0.0, 0.0), |(a, b), k| {
        let k = k as f64;
        (a + k, b + k * k)
    });
    let (mean, second) = (k1 / n, k2 / n);
    let denom = match formula {
        ThresholdFormula::Hmf => second,
        ThresholdFormula::HmfCorrected => second - mean,
    };
    if mean <= 0.0 || denom <= 0.0 {
        return Err(Error::ThresholdUndefined {
            mean_degree: mean,
            second_moment: second,
        });
    }
    Ok(mean / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SirConfig {
    pub beta: f64,
    pub runs: usize,
    pub master_seed: u64,
}

impl SirConfig {
    pub const DEFAULT_RUNS: usize = 100;

    pub fn new(beta: f64, runs: usize, master_seed: u64) -> Result<Self> {
        check_probability("beta", beta)?;
        Ok(Self {
            beta,
            runs,
            master_seed,
        })
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(beta, self.runs, self.master_seed)
    }

    /// Recovery probability per step. Fixed.
    pub const fn gamma(&self) -> f64 {
        1.0
    }
}

/// Fractions of the epidemic threshold at which spreading is simulated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaGrid {
    fractions: Vec<f64>,
}

impl Default for BetaGrid {
    fn default() -> Self {
        Self {
            fractions: (1..=8).map(|i| f64::from(i) * 0.2).collect(),
        }
    }
}

impl BetaGrid {
    /// Grid must be nonempty, nonnegative and strictly increasing.
    pub fn new(fractions: Vec<f64>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::InvalidParameter {
                name: "beta_fractions",
                value: f64::NAN,
                reason: "grid is empty",
            });
        }
        if let Some(&bad) = fractions.iter().find(|f| !(**f >= 0.0 && f.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "beta_fraction",
                value: bad,
                reason: "must be finite and nonnegative",
            });
        }
        if let Some(w) = fractions.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter {
                name: "beta_fraction",
                value: w[1],
                reason: "grid must be strictly increasing",
            });
        }
        Ok(Self { fractions })
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }
}

fn run_rng(master_seed: u64, seed_node: usize, run_index: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&(seed_node as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(run_index as u64).to_le_bytes());
    key[24..].copy_from_slice(b"sir-run\0");
    ChaCha8Rng::from_seed(key)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Susceptible,
    Infected,
    Recovered,
}

/// Scratch buffers reused across runs on one thread.
struct Epidemic {
    state: Vec<State>,
    touched: Vec<usize>,
    current: Vec<usize>,
    next: Vec<usize>,
}

impl Epidemic {
    fn new(n: usize) -> Self {
        Self {
            state: vec![State::Susceptible; n],
            touched: Vec::new(),
            current: Vec::new(),
            next: Vec::new(),
        }
    }

    fn run(&mut self, g: &Graph, seed: usize, beta: f64, rng: &mut impl Rng) -> usize {
        for &v in &self.touched {
            self.state[v] = State::Susceptible;
        }
        self.touched.clear();
        self.current.clear();

        self.state[seed] = State::Infected;
        self.touched.push(seed);
        self.current.push(seed);
        while !self.current.is_empty() {
            self.next.clear();
            for &u in &self.current {
                for &v in g.neighbors(u) {
                    if self.state[v] == State::Susceptible && rng.random::<f64>() < beta {
                        self.state[v] = State::Infected;
                        self.touched.push(v);
                        self.next.push(v);
                    }
                }
            }
            // Infection attempts of this generation are done; all of it recovers.
            for &u in &self.current {
                self.state[u] = State::Recovered;
            }
            std::mem::swap(&mut self.current, &mut self.next);
        }
        self.touched.len()
    }
}

/// Final recovered count of one run seeded at `seed_node`.
pub fn sir_run(g: &Graph, seed_node: usize, cfg: &SirConfig, run_index: usize) -> Result<usize> {
    g.check_node(seed_node)?;
    let mut rng = run_rng(cfg.master_seed, seed_node, run_index);
    Ok(Epidemic::new(g.node_count()).run(g, seed_node, cfg.beta, &mut rng))
}

/// Mean outbreak size per seed node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SirInfluence {
    pub mean_recovered: Vec<f64>,
    pub beta: f64,
    pub runs: usize,
}

pub fn spreading_influence(g: &Graph, cfg: &SirConfig) -> Result<SirInfluence> {
    check_probability("beta", cfg.beta)?;
    if cfg.runs == 0 {
        return Err(Error::InvalidParameter {
            name: "runs",
            value: 0.0,
            reason: "at least one run is required",
        });
    }
    let n = g.node_count();
    // Integer totals make the reduction order irrelevant.
    let totals: Vec<u64> = (0..n)
        .into_par_iter()
        .map_init(
            || Epidemic::new(n),
            |epi, node| {
                (0..cfg.runs)
                    .map(|r| {
                        let mut rng = run_rng(cfg.master_seed, node, r);
                        epi.run(g, node, cfg.beta, &mut rng) as u64
                    })
                    .sum()
            },
        )
        .collect();
    Ok(SirInfluence {
        mean_recovered: totals
            .into_iter()
            .map(|t| t as f64 / cfg.runs as f64)
            .collect(),
        beta: cfg.beta,
        runs: cfg.runs,
    })
}

/// One cell of a correlation sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub method: String,
    pub beta: f64,
    pub beta_frac: f64,
    pub tau: f64,
    pub degenerate: bool,
}

/// Kendall tau between each centrality and SIR influence at every grid point.
///
/// Centrality ties are resolved with [`eval::rank_nodes`] at the default
/// tolerance before correlating.
pub fn sir_correlation_sweep(
    g: &Graph,
    methods: &[CentralityVector],
    grid: &BetaGrid,
    beta_th: f64,
    cfg: &SirConfig,
) -> Result<Vec<SweepRow>> {
    let keys: Vec<Vec<f64>> = methods
        .iter()
        .map(|m| {
            if m.len() != g.node_count() {
                return Err(Error::LengthMismatch {
                    left: m.len(),
                    right: g.node_count(),
                });
            }
            Ok(eval::rank_nodes(&m.scores, eval::DEFAULT_TIE_EPSILON).ordinal_keys())
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(methods.len() * grid.fractions().len());
    for &frac in grid.fractions() {
        let beta = frac * beta_th;
        let influence = spreading_influence(g, &cfg.with_beta(beta)?)?;
        for (m, key) in methods.iter().zip(&keys) {
            let KendallTau { tau, degenerate } = eval::kendall_tau(key, &influence.mean_recovered)?;
            rows.push(SweepRow {
                method: m.method.clone(),
                beta,
                beta_frac: frac,
                tau,
                degenerate,
            });
        }
    }
    Ok(rows)
}
