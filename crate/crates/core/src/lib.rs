//! Node-influence ranking on undirected networks.
//!
//! M-Centrality scores each node by mixing its k-shell index with the
//! variation of degrees around it. The crate also ships the usual comparison
//! centralities, an SIR spreading simulator, and the metrics used to judge a
//! ranking: monotonicity, Kendall tau-b, efficiency decline under targeted
//! removal, and rank-biased overlap.
//!
//! ```
//! use mcentrality::{parse_edge_list_str, m_centrality, rank_nodes, DEFAULT_TIE_EPSILON};
//!
//! let g = parse_edge_list_str("a b\nb c\nc a\nc d\n").unwrap().graph;
//! let m = m_centrality(&g, Some(0.5)).unwrap();
//! let ranking = rank_nodes(&m.scores, DEFAULT_TIE_EPSILON);
//! assert_eq!(g.label(ranking.order[0]), "c");
//! ```

pub mod baselines;
pub mod error;
pub mod eval;
pub mod generate;
pub mod graph;
pub mod kshell;
pub mod mscore;
pub mod methods;
pub mod sir;

pub use baselines::{
    cluster_rank, collective_influence, degree_centrality, dil, gravity, personalized_pagerank,
    CentralityVector, Preference,
};
pub use error::{Error, Result};
pub use eval::{
    efficiency_decline, kendall_tau, monotonicity, network_efficiency, rank_nodes, rbo,
    AttackReport, AttackStep, EfficiencyNorm, KendallTau, RankingList, RboParams,
    DEFAULT_TIE_EPSILON,
};
pub use graph::{
    graph_stats, parse_edge_list, parse_edge_list_str, BuildReport, Components, Graph,
    GraphBuilder, GraphStats, NodeSet, Parsed,
};
pub use kshell::{kcore_decomposition, Coreness};
pub use mscore::{delta_d, entropy_weights, m_centrality, Attribute, EntropyWeights, MCentrality};
pub use methods::{Method, MethodParams};
pub use sir::{
    epidemic_threshold, sir_correlation_sweep, sir_run, spreading_influence, BetaGrid, SirConfig,
    SirInfluence, SweepRow, ThresholdFormula,
};
