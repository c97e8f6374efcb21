//! Uniform dispatch over every ranking method by name.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{self, CentralityVector, Preference};
use crate::error::Result;
use crate::graph::Graph;
use crate::kshell;
use crate::mscore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    M,
    DeltaD,
    KShell,
    Degree,
    Gravity,
    Ci,
    ClusterRank,
    Dil,
    Ppr,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::M,
        Method::DeltaD,
        Method::KShell,
        Method::Degree,
        Method::Gravity,
        Method::Ci,
        Method::ClusterRank,
        Method::Dil,
        Method::Ppr,
    ];

    /// The methods compared against each other in spreading and attack experiments.
    pub const COMPARED: [Method; 6] = [
        Method::M,
        Method::Gravity,
        Method::Dil,
        Method::ClusterRank,
        Method::Ppr,
        Method::Ci,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::M => "m",
            Method::DeltaD => "deltad",
            Method::KShell => "kshell",
            Method::Degree => "degree",
            Method::Gravity => "gravity",
            Method::Ci => "ci",
            Method::ClusterRank => "clusterrank",
            Method::Dil => "dil",
            Method::Ppr => "ppr",
        }
    }

    pub fn compute(self, g: &Graph, params: &MethodParams) -> Result<CentralityVector> {
        Ok(match self {
            Method::M => {
                let m = mscore::m_centrality(g, params.mu)?;
                CentralityVector::new("m", m.scores).with_param("mu", m.mu)
            }
            Method::DeltaD => CentralityVector::new("deltad", mscore::delta_d(g)),
            Method::KShell => {
                CentralityVector::new("kshell", kshell::kcore_decomposition(g).as_f64())
            }
            Method::Degree => baselines::degree_centrality(g),
            Method::Gravity => baselines::gravity(g, params.radius),
            Method::Ci => baselines::collective_influence(g, params.ell),
            Method::ClusterRank => baselines::cluster_rank(g),
            Method::Dil => baselines::dil(g),
            Method::Ppr => baselines::personalized_pagerank(g, params.teleport, params.preference)?,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "m" | "mc" => Method::M,
            "deltad" | "delta_d" | "dd" => Method::DeltaD,
            "kshell" | "ks" => Method::KShell,
            "degree" | "dc" => Method::Degree,
            "gravity" | "gr" => Method::Gravity,
            "ci" | "coi" => Method::Ci,
            "clusterrank" | "cr" => Method::ClusterRank,
            "dil" => Method::Dil,
            "ppr" => Method::Ppr,
            other => {
                let names: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
                return Err(format!("unknown method `{other}` (expected one of {})", names.join(", ")));
            }
        })
    }
}

/// Tunable parameters shared by all methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MethodParams {
    /// Fixed M-Centrality weight; `None` derives it from entropy.
    pub mu: Option<f64>,
    pub radius: usize,
    pub ell: usize,
    pub teleport: f64,
    pub preference: Preference,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self {
            mu: None,
            radius: 3,
            ell: 3,
            teleport: 0.15,
            preference: Preference::Degree,
        }
    }
}
