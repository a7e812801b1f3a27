//! Sweep driver: a plain-text config describes a parameter grid, trials
//! run in parallel with per-trial counter-based seeds, and the collected
//! records serialize to a deterministic CSV plus a JSON mirror.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificates::{METHOD_EXACT_P2, METHOD_ITERATIVE};
use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Multigraph};
use crate::link::{build_link_graph, link_full};
use crate::models::{sample_er, sample_multipartite_er};
use crate::rng::RngSeed;
use crate::solver::{lambda_estimate, lambda_exact_p2, SolverOptions};
use crate::words::{sample_triangular, SampleMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelId {
    Er,
    MultiEr,
    Configuration,
    Triangular,
}

impl ModelId {
    fn parse(s: &str) -> Option<ModelId> {
        match s {
            "er" => Some(ModelId::Er),
            "multi-er" => Some(ModelId::MultiEr),
            "config" => Some(ModelId::Configuration),
            "triangular" => Some(ModelId::Triangular),
            _ => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            ModelId::Er => "er",
            ModelId::MultiEr => "multi-er",
            ModelId::Configuration => "config",
            ModelId::Triangular => "triangular",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub model: ModelId,
    pub trials: usize,
    pub seed: u64,
    pub out_base: Option<PathBuf>,
    pub envelope_c: Option<f64>,
    pub exact2: bool,
    pub m: Vec<usize>,
    pub k: Vec<usize>,
    pub part_size: Vec<usize>,
    pub degree: Vec<usize>,
    pub rho: Vec<f64>,
    pub p: Vec<f64>,
    pub restarts: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
}

const MAX_TRIALS: usize = 1 << 20;

/// One grid point; axes irrelevant to the model stay `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub part_size: Option<usize>,
    pub degree: Option<usize>,
    pub rho: Option<f64>,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub cell: usize,
    pub trial: usize,
    pub stream: u64,
    pub model: String,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub part_size: Option<usize>,
    pub degree: Option<usize>,
    pub rho: Option<f64>,
    pub p: f64,
    pub lambda: Option<f64>,
    pub converged: bool,
    pub method: String,
    pub residual: Option<f64>,
    pub edge_count: Option<usize>,
    pub min_valency: Option<usize>,
    pub max_valency: Option<usize>,
    pub loop_count: Option<usize>,
    pub duplicated_pairs: Option<usize>,
    pub envelope: Option<f64>,
    pub error: Option<String>,
    /// Seconds; reported in JSON only, so CSV output is run-invariant.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: usize,
    pub completed: usize,
    pub mean: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub q10: Option<f64>,
    pub q50: Option<f64>,
    pub q90: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRun {
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<CellSummary>,
    pub all_complete: bool,
}

fn parse_list<T: std::str::FromStr>(line: usize, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(|s| {
            s.trim().parse::<T>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad list entry '{}'", s.trim()),
            })
        })
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(line: usize, v: &str) -> Result<T> {
    v.trim().parse::<T>().map_err(|_| Error::Parse {
        line,
        msg: format!("bad value '{}'", v.trim()),
    })
}

/// Plain key=value format with [experiment], [grid], and [solver]
/// sections; '#' comments, blank lines ignored, comma-separated lists.
pub fn parse_experiment_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig {
        name: String::new(),
        model: ModelId::Er,
        trials: 1,
        seed: 0,
        out_base: None,
        envelope_c: None,
        exact2: true,
        m: Vec::new(),
        k: Vec::new(),
        part_size: Vec::new(),
        degree: Vec::new(),
        rho: Vec::new(),
        p: Vec::new(),
        restarts: 8,
        max_iters: 100_000,
        grad_tol: 1e-10,
    };
    let mut section = String::new();
    let mut saw_model = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            match name {
                "experiment" | "grid" | "solver" => section = name.to_string(),
                other => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unknown section '{other}'"),
                    })
                }
            }
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(Error::Parse {
            line,
            msg: format!("expected key=value, got '{content}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        match (section.as_str(), key) {
            ("experiment", "name") => cfg.name = value.to_string(),
            ("experiment", "model") => {
                cfg.model = ModelId::parse(value).ok_or(Error::Parse {
                    line,
                    msg: format!("unknown model '{value}'"),
                })?;
                saw_model = true;
            }
            ("experiment", "trials") => cfg.trials = parse_scalar(line, value)?,
            ("experiment", "seed") => cfg.seed = parse_scalar(line, value)?,
            ("experiment", "out") => cfg.out_base = Some(PathBuf::from(value)),
            ("experiment", "envelope_c") => cfg.envelope_c = Some(parse_scalar(line, value)?),
            ("experiment", "exact2") => cfg.exact2 = parse_scalar(line, value)?,
            ("grid", "m") => cfg.m = parse_list(line, value)?,
            ("grid", "k") => cfg.k = parse_list(line, value)?,
            ("grid", "part_size") => cfg.part_size = parse_list(line, value)?,
            ("grid", "degree") => cfg.degree = parse_list(line, value)?,
            ("grid", "rho") => cfg.rho = parse_list(line, value)?,
            ("grid", "p") => cfg.p = parse_list(line, value)?,
            ("solver", "restarts") => cfg.restarts = parse_scalar(line, value)?,
            ("solver", "max_iters") => cfg.max_iters = parse_scalar(line, value)?,
            ("solver", "grad_tol") => cfg.grad_tol = parse_scalar(line, value)?,
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown key '{key}' in section '[{section}]'"),
                })
            }
        }
    }
    if !saw_model {
        return Err(Error::Parse {
            line: 0,
            msg: "missing model".into(),
        })
    }
    validate_config(&cfg)?;
    Ok(cfg)
}

fn validate_config(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.trials == 0 || cfg.trials >= MAX_TRIALS {
        return Err(Error::Parameter(format!(
            "trials must lie in [1, {MAX_TRIALS}), got {}",
            cfg.trials
        )));
    }
    if cfg.p.is_empty() {
        return Err(Error::Parameter("grid axis p is empty".into()));
    }
    let need = |ok: bool, axis: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "model {} requires a non-empty grid axis {axis}",
                cfg.model.name()
            )))
        }
    };
    match cfg.model {
        ModelId::Er | ModelId::Triangular => {
            need(!cfg.m.is_empty(), "m")?;
            need(!cfg.rho.is_empty(), "rho")?;
        }
        ModelId::MultiEr => {
            need(!cfg.k.is_empty(), "k")?;
            need(!cfg.part_size.is_empty(), "part_size")?;
            need(!cfg.rho.is_empty(), "rho")?;
        }
        ModelId::Configuration => {
            need(!cfg.m.is_empty(), "m")?;
            need(!cfg.degree.is_empty(), "degree")?;
            for &m in &cfg.m {
                for &d in &cfg.degree {
                    if (m * d) % 2 != 0 {
                        return Err(Error::Parameter(format!(
                            "degree sum {m}*{d} is odd"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Row-major cartesian product of the model's axes, p varying fastest.
pub fn build_cells(cfg: &ExperimentConfig) -> Vec<Cell> {
    let mut cells = Vec::new();
    let push = |m: Option<usize>,
                    k: Option<usize>,
                    part: Option<usize>,
                    degree: Option<usize>,
                    rho: Option<f64>,
                    p: f64,
                    cells: &mut Vec<Cell>| {
        cells.push(Cell {
            index: cells.len(),
            m,
            k,
            part_size: part,
            degree,
            rho,
            p,
        });
    };
    match cfg.model {
        ModelId::Er | ModelId::Triangular => {
            for &m in &cfg.m {
                for &rho in &cfg.rho {
                    for &p in &cfg.p {
                        push(Some(m), None, None, None, Some(rho), p, &mut cells);
                    }
                }
            }
        }
        ModelId::MultiEr => {
            for &k in &cfg.k {
                for &part in &cfg.part_size {
                    for &rho in &cfg.rho {
                        for &p in &cfg.p {
                            push(None, Some(k), Some(part), None, Some(rho), p, &mut cells);
                        }
                    }
                }
            }
        }
        ModelId::Configuration => {
            for &m in &cfg.m {
                for &d in &cfg.degree {
                    for &p in &cfg.p {
                        push(Some(m), None, None, Some(d), None, p, &mut cells);
                    }
                }
            }
        }
    }
    cells
}

fn duplicated_pairs(g: &Multigraph) -> usize {
    let mut mult: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(u, v) in g.edges() {
        *mult.entry((u.min(v), u.max(v))).or_insert(0) += 1;
    }
    mult.values().filter(|&&c| c >= 2).count()
}

fn sample_for_cell(cfg: &ExperimentConfig, cell: &Cell, seed: &RngSeed) -> Result<Multigraph> {
    match cfg.model {
        ModelId::Er => sample_er(cell.m.unwrap(), cell.rho.unwrap(), seed),
        ModelId::MultiEr => sample_multipartite_er(
            cell.k.unwrap(),
            cell.part_size.unwrap(),
            cell.rho.unwrap(),
            seed,
        ),
        ModelId::Configuration => {
            let d = DegreeSequence::new(vec![cell.degree.unwrap(); cell.m.unwrap()]);
            sample_configuration(&d, seed)
        }
        ModelId::Triangular => {
            let p = sample_triangular(
                cell.m.unwrap(),
                SampleMode::Binomial(cell.rho.unwrap()),
                seed,
            )?;
            link_full(&build_link_graph(&p)?)
        }
    }
}

fn sample_configuration(d: &DegreeSequence, seed: &RngSeed) -> Result<Multigraph> {
    crate::models::sample_configuration(d, seed).map(|(_, g)| g)
}

fn run_trial(cfg: &ExperimentConfig, cell: &Cell, trial: usize) -> TrialRecord {
    let stream = ((cell.index as u64) << 20) | trial as u64;
    let seed = RngSeed::new(cfg.seed).with_stream(stream);
    let start = Instant::now();
    let mut rec = TrialRecord {
        cell: cell.index,
        trial,
        stream,
        model: cfg.model.name().to_string(),
        m: cell.m,
        k: cell.k,
        part_size: cell.part_size,
        degree: cell.degree,
        rho: cell.rho,
        p: cell.p,
        lambda: None,
        converged: false,
        method: String::new(),
        residual: None,
        edge_count: None,
        min_valency: None,
        max_valency: None,
        loop_count: None,
        duplicated_pairs: None,
        envelope: None,
        error: None,
        wall_time: 0.0,
    };
    if let (Some(c), Some(rho), Some(m)) = (cfg.envelope_c, cell.rho, cell.m) {
        if cfg.model == ModelId::Er {
            let p = cell.p;
            rec.envelope =
                Some(1.0 - c * p.powi(4) / (rho * m as f64).powf(1.0 / (2.0 * p * p)));
        }
    }
    let graph = sample_for_cell(cfg, cell, &seed);
    match graph {
        Err(e) => rec.error = Some(e.to_string()),
        Ok(g) => {
            let vals = g.valencies();
            rec.edge_count = Some(g.edge_count());
            rec.min_valency = vals.iter().copied().min();
            rec.max_valency = vals.iter().copied().max();
            rec.loop_count = Some((0..g.vertex_count()).map(|u| g.loop_count(u)).sum());
            rec.duplicated_pairs = Some(duplicated_pairs(&g));
            if cell.p == 2.0 && cfg.exact2 {
                match lambda_exact_p2(&g) {
                    Ok(l) => {
                        rec.lambda = Some(l);
                        rec.converged = true;
                        rec.method = METHOD_EXACT_P2.to_string();
                    }
                    Err(e) => rec.error = Some(e.to_string()),
                }
            } else {
                let opts = SolverOptions {
                    restarts: cfg.restarts,
                    max_iters: cfg.max_iters,
                    grad_tol: cfg.grad_tol,
                    seed: cfg.seed ^ stream.rotate_left(17),
                    ..SolverOptions::default()
                };
                match lambda_estimate(&g, cell.p, &opts) {
                    Ok(est) => {
                        rec.lambda = Some(est.lambda);
                        rec.converged = est.converged;
                        rec.residual = Some(est.residual);
                        rec.method = METHOD_ITERATIVE.to_string();
                    }
                    Err(e) => rec.error = Some(e.to_string()),
                }
            }
        }
    }
    rec.wall_time = start.elapsed().as_secs_f64();
    rec
}

fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    Some(sorted[idx])
}

/// Per-cell statistics over completed trials, derivable from the raw
/// records alone.
pub fn summaries_from_records(records: &[TrialRecord]) -> Vec<CellSummary> {
    let mut by_cell: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        let entry = by_cell.entry(r.cell).or_default();
        if let Some(l) = r.lambda {
            entry.push(l);
        }
    }
    by_cell
        .into_iter()
        .map(|(cell, mut ls)| {
            ls.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mean = if ls.is_empty() {
                None
            } else {
                Some(ls.iter().sum::<f64>() / ls.len() as f64)
            };
            CellSummary {
                cell,
                completed: ls.len(),
                mean,
                min: ls.first().copied(),
                max: ls.last().copied(),
                q10: quantile(&ls, 0.1),
                q50: quantile(&ls, 0.5),
                q90: quantile(&ls, 0.9),
            }
        })
        .collect()
}

/// Runs every (cell, trial) job, optionally skipping jobs whose records
/// are already in hand, and returns records in (cell, trial) order
/// regardless of scheduling.
pub fn run_experiment_resuming(
    cfg: &ExperimentConfig,
    threads: usize,
    existing: Vec<TrialRecord>,
) -> Result<ExperimentRun> {
    let cells = build_cells(cfg);
    if cells.is_empty() {
        return Err(Error::Parameter("empty parameter grid".into()));
    }
    let mut have: BTreeMap<(usize, usize), TrialRecord> = existing
        .into_iter()
        .filter(|r| r.error.is_none())
        .map(|r| ((r.cell, r.trial), r))
        .collect();
    let jobs: Vec<(usize, usize)> = cells
        .iter()
        .flat_map(|c| (0..cfg.trials).map(move |t| (c.index, t)))
        .filter(|key| !have.contains_key(key))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    let fresh: Vec<TrialRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(ci, t)| run_trial(cfg, &cells[ci], t))
            .collect()
    });
    for r in fresh {
        have.insert((r.cell, r.trial), r);
    }
    let records: Vec<TrialRecord> = have.into_values().collect();
    let all_complete = records.len() == cells.len() * cfg.trials
        && records.iter().all(|r| r.error.is_none());
    let summaries = summaries_from_records(&records);
    Ok(ExperimentRun {
        records,
        summaries,
        all_complete,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig, threads: usize) -> Result<ExperimentRun> {
    run_experiment_resuming(cfg, threads, Vec::new())
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn fmt_opt_usize(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str = "cell,trial,stream,model,m,k,part_size,degree,rho,p,lambda,\
converged,method,residual,edge_count,min_valency,max_valency,loop_count,duplicated_pairs,\
envelope,error";

/// Raw records as CSV; all floats carry 17 significant digits and wall
/// time is deliberately absent, making the bytes a pure function of
/// (config, seed).
pub fn emit_csv(run: &ExperimentRun) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &run.records {
        let fields = [
            r.cell.to_string(),
            r.trial.to_string(),
            r.stream.to_string(),
            r.model.clone(),
            fmt_opt_usize(r.m),
            fmt_opt_usize(r.k),
            fmt_opt_usize(r.part_size),
            fmt_opt_usize(r.degree),
            fmt_opt_f64(r.rho),
            fmt_f64(r.p),
            fmt_opt_f64(r.lambda),
            r.converged.to_string(),
            r.method.clone(),
            fmt_opt_f64(r.residual),
            fmt_opt_usize(r.edge_count),
            fmt_opt_usize(r.min_valency),
            fmt_opt_usize(r.max_valency),
            fmt_opt_usize(r.loop_count),
            fmt_opt_usize(r.duplicated_pairs),
            fmt_opt_f64(r.envelope),
            r.error.clone().unwrap_or_default(),
        ];
        let row: Vec<String> = fields.iter().map(|f| csv_escape(f)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_json(run: &ExperimentRun) -> Result<String> {
    serde_json::to_string_pretty(run).map_err(Error::from)
}

pub fn load_run_json(text: &str) -> Result<ExperimentRun> {
    let run: ExperimentRun = serde_json::from_str(text)?;
    // Summaries must be recomputable from the raw records.
    if summaries_from_records(&run.records) != run.summaries {
        return Err(Error::Parameter(
            "stored summaries disagree with raw records".into(),
        ));
    }
    Ok(run)
}

/// Writes `<base>.csv` and `<base>.json`, returning both paths.
pub fn write_outputs(run: &ExperimentRun, base: &Path) -> Result<(PathBuf, PathBuf)> {
    let csv_path = base.with_extension("csv");
    let json_path = base.with_extension("json");
    std::fs::write(&csv_path, emit_csv(run))?;
    std::fs::write(&json_path, emit_json(run)?)?;
    Ok((csv_path, json_path))
}
