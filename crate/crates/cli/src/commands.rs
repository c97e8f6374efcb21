use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context as _, Result};
use log::{info, warn};
use mcentrality::{
    efficiency_decline, epidemic_threshold, graph_stats, kcore_decomposition, m_centrality,
    mscore, parse_edge_list, rank_nodes, rbo, sir_correlation_sweep, BetaGrid, EfficiencyNorm,
    Error, Graph, Method, MethodParams, Preference, RboParams, SirConfig, ThresholdFormula,
    DEFAULT_TIE_EPSILON,
};

use crate::output::{Cell, Precision, Table};
use crate::{
    usage, AttackArgs, Command, Context, GraphArgs, MuSweepArgs, ParamArgs, RankArgs, RboArgs,
    SirArgs, StatsArgs,
};

const DEFAULT_TOP: usize = 15;
const DEFAULT_STEPS: usize = 15;
const DEFAULT_RUNS: usize = SirConfig::DEFAULT_RUNS;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_MU_SWEEP: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const DEFAULT_RBO_P: [f64; 6] = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

pub(crate) fn build(ctx: &Context, cmd: &Command) -> Result<Vec<Table>> {
    match cmd {
        Command::Stats(a) => stats(ctx, a),
        Command::Rank(a) => rank(ctx, a),
        Command::MuSweep(a) => mu_sweep(ctx, a),
        Command::Attack(a) => attack(ctx, a),
        Command::Sir(a) => sir(ctx, a),
        Command::Rbo(a) => rbo_cmd(ctx, a),
    }
}

fn parse_name<T: FromStr<Err = String>>(s: &str) -> Result<T> {
    s.parse().map_err(usage)
}

fn input_path(ctx: &Context, arg: &Option<PathBuf>) -> Result<PathBuf> {
    arg.clone()
        .or_else(|| ctx.cfg.input.clone())
        .ok_or_else(|| usage("no input file given (pass a path or set `input` in the config)"))
}

fn read_graph(path: &Path) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let parsed = parse_edge_list(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
    info!(
        "{}: {} nodes, {} edges",
        path.display(),
        parsed.graph.node_count(),
        parsed.graph.edge_count()
    );
    Ok(parsed.graph)
}

fn load(ctx: &Context, args: &GraphArgs) -> Result<Graph> {
    let g = read_graph(&input_path(ctx, &args.input)?)?;
    let lcc = if args.no_lcc {
        false
    } else if args.lcc {
        true
    } else {
        ctx.cfg.lcc.unwrap_or(true)
    };
    if !lcc {
        return Ok(g);
    }
    let giant = g.largest_connected_component()?;
    if giant.node_count() < g.node_count() {
        info!(
            "using largest component: {} of {} nodes",
            giant.node_count(),
            g.node_count()
        );
    }
    Ok(giant)
}

fn check_unit(name: &str, v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(usage(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn method_params(ctx: &Context, p: &ParamArgs) -> Result<MethodParams> {
    let cfg = &ctx.cfg;
    let d = MethodParams::default();
    let preference = match (p.preference, &cfg.preference) {
        (Some(pref), _) => pref,
        (None, Some(s)) => parse_name::<Preference>(s)?,
        (None, None) => d.preference,
    };
    Ok(MethodParams {
        mu: p.mu.or(cfg.mu).map(|m| check_unit("mu", m)).transpose()?,
        radius: p.radius.or(cfg.radius).unwrap_or(d.radius),
        ell: p.ell.or(cfg.ell).unwrap_or(d.ell),
        teleport: p.teleport.or(cfg.teleport).unwrap_or(d.teleport),
        preference,
    })
}

fn methods(ctx: &Context, given: &[Method], default: &[Method]) -> Result<Vec<Method>> {
    if !given.is_empty() {
        return Ok(given.to_vec());
    }
    match &ctx.cfg.methods {
        Some(names) if !names.is_empty() => names.iter().map(|s| parse_name(s)).collect(),
        _ => Ok(default.to_vec()),
    }
}

fn threshold(ctx: &Context, arg: Option<ThresholdFormula>) -> Result<ThresholdFormula> {
    match (arg, &ctx.cfg.threshold) {
        (Some(t), _) => Ok(t),
        (None, Some(s)) => parse_name(s),
        (None, None) => Ok(ThresholdFormula::default()),
    }
}

fn formula_name(t: ThresholdFormula) -> &'static str {
    match t {
        ThresholdFormula::Hmf => "hmf",
        ThresholdFormula::HmfCorrected => "hmf_corrected",
    }
}

fn stats(ctx: &Context, a: &StatsArgs) -> Result<Vec<Table>> {
    let g = read_graph(&input_path(ctx, &a.input)?)?;
    let formula = threshold(ctx, a.threshold)?;
    let s = graph_stats(&g, formula)?;
    let mut t = Table::new(
        "stats",
        &[
            "n",
            "m",
            "mean_degree",
            "max_degree",
            "mean_degree_sq",
            "max_coreness",
            "giant_size",
            "beta_th",
        ],
    )
    .flat()
    .meta("threshold", formula_name(formula));
    t.push(vec![
        s.n.into(),
        s.m.into(),
        s.mean_degree.into(),
        s.max_degree.into(),
        s.mean_degree_sq.into(),
        s.max_coreness.into(),
        s.giant_size.into(),
        s.beta_th.into(),
    ]);
    Ok(vec![t])
}

fn rank(ctx: &Context, a: &RankArgs) -> Result<Vec<Table>> {
    let g = load(ctx, &a.graph)?;
    let params = method_params(ctx, &a.params)?;
    let top = a.top.or(ctx.cfg.top).unwrap_or(usize::MAX);
    let mut tables = Vec::new();
    for method in methods(ctx, &a.method, &[Method::M])? {
        let name = format!("rank_{}", method.name());
        if method == Method::M {
            let m = m_centrality(&g, params.mu)?;
            let ranking = rank_nodes(&m.scores, DEFAULT_TIE_EPSILON);
            let mut t = Table::new(name, &["label", "ks", "delta_d", "m_score", "rank"])
                .meta("method", "m")
                .meta("mu", m.mu)
                .meta("mu_source", if m.weights.is_some() { "entropy" } else { "fixed" });
            if let Some(w) = m.weights {
                info!("entropy weight mu = {:.6}", w.mu);
                t = t
                    .meta("entropy_coreness", json_real(w.entropy_global))
                    .meta("entropy_delta_d", json_real(w.entropy_local));
            }
            for &v in ranking.top(top) {
                t.push(vec![
                    g.label(v).into(),
                    m.coreness.get(v).into(),
                    m.delta_d[v].into(),
                    m.scores[v].into(),
                    ranking.rank[v].into(),
                ]);
            }
            tables.push(t);
        } else {
            let scores = method.compute(&g, &params)?;
            let ranking = rank_nodes(&scores.scores, DEFAULT_TIE_EPSILON);
            let mut t = Table::new(name, &["label", "score", "rank"]).meta("method", method.name());
            for (k, v) in &scores.params {
                t = t.meta(k, *v);
            }
            for &v in ranking.top(top) {
                t.push(vec![g.label(v).into(), scores.scores[v].into(), ranking.rank[v].into()]);
            }
            tables.push(t);
        }
    }
    Ok(tables)
}

fn json_real(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, Into::into)
}

fn mu_sweep(ctx: &Context, a: &MuSweepArgs) -> Result<Vec<Table>> {
    let g = load(ctx, &a.graph)?;
    let mus: Vec<f64> = if !a.mu.is_empty() {
        a.mu.clone()
    } else {
        ctx.cfg.mu_sweep.clone().unwrap_or_else(|| DEFAULT_MU_SWEEP.to_vec())
    };
    if mus.is_empty() {
        return Err(usage("mu sweep list is empty"));
    }
    for &m in &mus {
        check_unit("mu", m)?;
    }
    let top = a.top.or(ctx.cfg.top).unwrap_or(DEFAULT_TOP).min(g.node_count());

    let ks = kcore_decomposition(&g).as_f64();
    let dd = mscore::delta_d(&g);
    let rankings: Vec<_> = mus
        .iter()
        .map(|&mu| rank_nodes(&mscore::combine(mu, &ks, &dd), DEFAULT_TIE_EPSILON))
        .collect();

    let headers: Vec<String> = std::iter::once("position".to_owned())
        .chain(mus.iter().map(|&m| format!("mu={}", Precision::default().format(m))))
        .collect();
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut t = Table::new("mu_sweep", &header_refs);
    if let Ok(w) = mscore::entropy_weights(&ks, &dd) {
        t = t.meta("entropy_mu", w.mu);
    }
    for pos in 0..top {
        let mut row: Vec<Cell> = vec![(pos + 1).into()];
        row.extend(rankings.iter().map(|r| Cell::from(g.label(r.order[pos]))));
        t.push(row);
    }
    Ok(vec![t])
}

fn read_order(path: &Path, g: &Graph) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let index = g.label_index();
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(|label| {
            index
                .get(label)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(label.to_owned()).into())
        })
        .collect()
}

fn norm_name(n: EfficiencyNorm) -> &'static str {
    match n {
        EfficiencyNorm::Residual => "residual",
        EfficiencyNorm::Original => "original",
    }
}

fn attack(ctx: &Context, a: &AttackArgs) -> Result<Vec<Table>> {
    let g = load(ctx, &a.graph)?;
    let steps = a.steps.or(ctx.cfg.steps).unwrap_or(DEFAULT_STEPS);
    let norm = match (a.norm, &ctx.cfg.efficiency_norm) {
        (Some(n), _) => n,
        (None, Some(s)) => parse_name(s)?,
        (None, None) => EfficiencyNorm::default(),
    };
    let params = method_params(ctx, &a.params)?;

    let orders: Vec<(String, Vec<usize>)> = match a.order.as_ref().or(ctx.cfg.order.as_ref()) {
        Some(path) => vec![("order".to_owned(), read_order(path, &g)?)],
        None => methods(ctx, &a.method, &Method::COMPARED)?
            .into_iter()
            .map(|m| {
                let scores = m.compute(&g, &params)?;
                Ok((m.name().to_owned(), rank_nodes(&scores.scores, DEFAULT_TIE_EPSILON).order))
            })
            .collect::<Result<_>>()?,
    };

    let mut tables = Vec::new();
    for (name, order) in orders {
        let report = efficiency_decline(&g, &order, steps, norm)?;
        let mut t = Table::new(format!("attack_{name}"), &["step", "removed_label", "components", "eta", "nu"])
            .meta("method", name.as_str())
            .meta("norm", norm_name(norm));
        for s in &report.steps {
            t.push(vec![
                s.step.into(),
                s.removed.map(|v| g.label(v)).into(),
                s.components.into(),
                s.efficiency.into(),
                s.decline.into(),
            ]);
        }
        info!("{name}: {} components after {steps} removals", report.final_components());
        tables.push(t);
    }
    Ok(tables)
}

fn sir(ctx: &Context, a: &SirArgs) -> Result<Vec<Table>> {
    let g = load(ctx, &a.graph)?;
    let params = method_params(ctx, &a.params)?;
    let formula = threshold(ctx, a.threshold)?;
    let fractions = if !a.beta_frac.is_empty() {
        a.beta_frac.clone()
    } else {
        ctx.cfg
            .beta_fractions
            .clone()
            .unwrap_or_else(|| BetaGrid::default().fractions().to_vec())
    };
    let grid = BetaGrid::new(fractions).map_err(|e| usage(e.to_string()))?;
    let runs = a.runs.or(ctx.cfg.runs).unwrap_or(DEFAULT_RUNS);
    if runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let seed = a.seed.or(ctx.cfg.seed).unwrap_or(DEFAULT_SEED);
    let methods = methods(ctx, &a.method, &Method::COMPARED)?;

    let beta_th = epidemic_threshold(&g, formula)?;
    info!("epidemic threshold ({}) = {beta_th:.6}", formula_name(formula));
    let vectors = methods
        .iter()
        .map(|m| m.compute(&g, &params))
        .collect::<mcentrality::Result<Vec<_>>>()?;
    let cfg = SirConfig::new(0.0, runs, seed)?;
    let mut rows = sir_correlation_sweep(&g, &vectors, &grid, beta_th, &cfg)?;
    let position = |name: &str| vectors.iter().position(|v| v.method == name).unwrap_or(usize::MAX);
    rows.sort_by_key(|r| position(&r.method));

    let mut t = Table::new("sir", &["method", "beta", "beta_frac", "tau"])
        .json_column("degenerate")
        .meta("beta_th", beta_th)
        .meta("threshold", formula_name(formula))
        .meta("runs", runs)
        .meta("seed", seed);
    for r in rows {
        if r.degenerate {
            warn!(
                "{} at beta_frac {}: a ranking is constant, tau reported as 0",
                r.method, r.beta_frac
            );
        }
        t.push(vec![
            r.method.into(),
            r.beta.into(),
            r.beta_frac.into(),
            r.tau.into(),
            r.degenerate.into(),
        ]);
    }
    Ok(vec![t])
}

fn rbo_cmd(ctx: &Context, a: &RboArgs) -> Result<Vec<Table>> {
    let g = load(ctx, &a.graph)?;
    let params = method_params(ctx, &a.params)?;
    let reference = a.method.unwrap_or(Method::M);
    let against: Vec<Method> = if !a.against.is_empty() {
        a.against.clone()
    } else if let Some(names) = &ctx.cfg.against {
        names.iter().map(|s| parse_name(s)).collect::<Result<_>>()?
    } else {
        Method::COMPARED.into_iter().filter(|&m| m != reference).collect()
    };
    let ps = if !a.p.is_empty() {
        a.p.clone()
    } else {
        ctx.cfg.p.clone().unwrap_or_else(|| DEFAULT_RBO_P.to_vec())
    };
    let depth = a.depth.or(ctx.cfg.depth).unwrap_or(g.node_count());
    let checked: Vec<RboParams> = ps
        .iter()
        .map(|&p| RboParams::new(p, depth).map_err(|e| usage(e.to_string())))
        .collect::<Result<_>>()?;

    let rank_of = |m: Method| -> Result<_> {
        Ok(rank_nodes(&m.compute(&g, &params)?.scores, DEFAULT_TIE_EPSILON))
    };
    let base = rank_of(reference)?;
    let mut tables = Vec::new();
    for other in against {
        let ranking = rank_of(other)?;
        let mut t = Table::new(format!("rbo_{}_{}", reference.name(), other.name()), &["p", "rbo"])
            .meta("method", reference.name())
            .meta("against", other.name())
            .meta("depth", depth);
        for prm in &checked {
            t.push(vec![prm.p.into(), rbo(&base, &ranking, *prm)?.into()]);
        }
        tables.push(t);
    }
    Ok(tables)
}
