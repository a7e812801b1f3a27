//! Command-line front end: eigenvalue runs, graph and presentation
//! sampling, link analysis, certificate emission, and experiment sweeps.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use plap::certificates::{
    flp_certificate, kazhdan_certificate, CertificateOutcome, Evidence, METHOD_EXACT_P2,
    METHOD_ITERATIVE,
};
use plap::experiment::{
    load_run_json, parse_experiment_config, run_experiment_resuming, write_outputs,
};
use plap::graph::{parse_graph, render_graph, DegreeSequence, Multigraph, VertexFunction};
use plap::ks::{decompose_light_heavy, net_enumerate_tiny, net_round, remainder_inequality_suite, NetParams};
use plap::link::{build_link_graph, link_structure_report};
use plap::models::{
    sample_configuration, sample_er, sample_multipartite_er, sample_multipartite_matching,
    DegreeMatrix,
};
use plap::rng::RngSeed;
use plap::solver::{lambda_estimate, lambda_exact_p2, SolverOptions};
use plap::words::{
    density_count_gromov, density_count_triangular, gromov_lift, parse_presentation,
    render_presentation, sample_gromov, sample_triangular, PresentationKind, SampleMode,
};
use plap::{Error, Result};

/// Print a line to stdout, exiting quietly when the reading end has closed.
/// Piping into `head` or a pager closes the pipe early, and the default
/// panic on that is pure noise.
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(name = "plap", version, about = "p-Laplacian eigenvalues, random models, certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// First nontrivial eigenvalue of a graph read from FILE.
    Lambda {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: f64,
        /// Dense symmetric solve; valid only at p = 2.
        #[arg(long)]
        exact2: bool,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Sample a random graph and write it with a metadata sidecar.
    GenGraph {
        /// er | config | multi-er | multi-deg
        #[arg(long)]
        model: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Part size for the multipartite models.
        #[arg(long = "M")]
        part_size: Option<usize>,
        #[arg(long)]
        rho: Option<f64>,
        /// Degrees for model 'config' (whitespace-separated integers) or
        /// 'multi-deg' (header "k <k> M <M>" then k rows of k integers).
        #[arg(long)]
        deg_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a random presentation and write it in text form.
    GenGroup {
        /// triangular | gromov
        #[arg(long, default_value = "triangular")]
        kind: String,
        /// Generator count.
        #[arg(long)]
        m: usize,
        /// Relator length; gromov only.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        rho: Option<f64>,
        /// Density exponent; relator count is rounded from the density
        /// formula.
        #[arg(long)]
        density: Option<f64>,
        /// Explicit relator count.
        #[arg(long)]
        count: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the link graph of a presentation and report its structure.
    Link {
        #[arg(long)]
        presentation: PathBuf,
        /// Include each class's edge list in the output.
        #[arg(long)]
        classes: bool,
    },
    /// Rewrite a divisible-length presentation over block-word generators.
    Lift {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Diagnostics for the concentration machinery.
    Ks {
        /// inequalities | net | decomposition
        #[arg(long)]
        check: String,
        /// key=value parameter file for the chosen check.
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Turn link eigenvalues into a fixed-point or (T) certificate.
    Certify {
        /// JSON array of {link_id, lambda, method} evidence.
        #[arg(long)]
        links: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        /// flp | kazhdan
        #[arg(long, default_value = "flp")]
        property: String,
        /// Largest link vertex count; required for flp.
        #[arg(long)]
        max_vertices: Option<usize>,
    },
    /// Run a configured parameter sweep.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Reuse completed trials from the existing JSON output.
        #[arg(long)]
        resume: bool,
    },
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::from)
}

fn cmd_lambda(
    graph: &Path,
    p: f64,
    exact2: bool,
    restarts: usize,
    seed: u64,
    as_json: bool,
) -> Result<()> {
    let g = parse_graph(&read_to_string(graph)?)?;
    let (lambda, converged, restarts_used, residual, method) = if exact2 {
        if p != 2.0 {
            return Err(Error::Parameter(format!(
                "--exact2 requires p = 2, got {p}"
            )));
        }
        (lambda_exact_p2(&g)?, true, 0, 0.0, METHOD_EXACT_P2)
    } else {
        let opts = SolverOptions {
            restarts,
            seed,
            ..SolverOptions::default()
        };
        let est = lambda_estimate(&g, p, &opts)?;
        (
            est.lambda,
            est.converged,
            est.restarts_used,
            est.residual,
            METHOD_ITERATIVE,
        )
    };
    if as_json {
        let doc = json!({
            "lambda": lambda,
            "converged": converged,
            "restarts_used": restarts_used,
            "residual": residual,
            "method": method,
        });
        outln!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        outln!("lambda = {lambda:.12}");
        outln!("method = {method}");
        outln!("converged = {converged}");
        if method == METHOD_ITERATIVE {
            outln!("restarts_used = {restarts_used}");
            outln!("residual = {residual:.3e}");
        }
    }
    Ok(())
}

fn parse_degree_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        for tok in line.split_whitespace() {
            out.push(tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad degree '{tok}'"),
            })?);
        }
    }
    Ok(out)
}

fn parse_degree_matrix(text: &str) -> Result<DegreeMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty degree matrix file".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "k" || toks[2] != "M" {
        return Err(Error::Parse {
            line: ln,
            msg: format!("expected 'k <count> M <size>', got '{header}'"),
        });
    }
    let k: usize = toks[1].parse().map_err(|_| Error::Parse {
        line: ln,
        msg: "bad part count".into(),
    })?;
    let part: usize = toks[3].parse().map_err(|_| Error::Parse {
        line: ln,
        msg: "bad part size".into(),
    })?;
    let mut rows = Vec::with_capacity(k);
    for (ln, line) in lines {
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: ln,
                    msg: format!("bad entry '{t}'"),
                })
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    DegreeMatrix::new(k, part, rows)
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("missing required flag {flag}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen_graph(
    model: &str,
    m: Option<usize>,
    k: Option<usize>,
    part_size: Option<usize>,
    rho: Option<f64>,
    deg_file: Option<&Path>,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let rng = RngSeed::new(seed);
    let mut params = json!({});
    let g: Multigraph = match model {
        "er" => {
            let m = require(m, "--m")?;
            let rho = require(rho, "--rho")?;
            params = json!({"m": m, "rho": rho});
            sample_er(m, rho, &rng)?
        }
        "config" => {
            let path = require(deg_file, "--deg-file")?;
            let degrees = parse_degree_list(&read_to_string(path)?)?;
            params = json!({"degrees": degrees});
            let (_, g) = sample_configuration(&DegreeSequence::new(degrees.clone()), &rng)?;
            g
        }
        "multi-er" => {
            let k = require(k, "--k")?;
            let part = require(part_size, "--M")?;
            let rho = require(rho, "--rho")?;
            params = json!({"k": k, "M": part, "rho": rho});
            sample_multipartite_er(k, part, rho, &rng)?
        }
        "multi-deg" => {
            let path = require(deg_file, "--deg-file")?;
            let dm = parse_degree_matrix(&read_to_string(path)?)?;
            params = json!({"k": dm.parts(), "M": dm.part_size()});
            sample_multipartite_matching(&dm, &rng)?
        }
        other => {
            return Err(Error::Parameter(format!(
                "unknown model '{other}' (er | config | multi-er | multi-deg)"
            )))
        }
    };
    std::fs::write(out, render_graph(&g))?;
    let meta = json!({
        "model": model,
        "seed": seed,
        "stream": 0,
        "params": params,
        "vertex_count": g.vertex_count(),
        "edge_count": g.edge_count(),
    });
    let meta_path = PathBuf::from(format!("{}.meta.json", out.display()));
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta)?)?;
    outln!(
        "wrote {} ({} vertices, {} edges) and {}",
        out.display(),
        g.vertex_count(),
        g.edge_count(),
        meta_path.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen_group(
    kind: &str,
    m: usize,
    l: Option<usize>,
    rho: Option<f64>,
    density: Option<f64>,
    count: Option<u64>,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let given = [rho.is_some(), density.is_some(), count.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if given != 1 {
        return Err(Error::Parameter(
            "exactly one of --rho, --density, --count must be given".into(),
        ));
    }
    let rng = RngSeed::new(seed);
    let presentation = match kind {
        "triangular" => {
            let mode = if let Some(rho) = rho {
                SampleMode::Binomial(rho)
            } else {
                let n = count.unwrap_or_else(|| density_count_triangular(m, density.unwrap()));
                SampleMode::Density(n)
            };
            sample_triangular(m, mode, &rng)?
        }
        "gromov" => {
            let l = require(l, "--l")?;
            let mode = if let Some(rho) = rho {
                SampleMode::Binomial(rho)
            } else {
                let n = count.unwrap_or_else(|| density_count_gromov(m, l, density.unwrap()));
                SampleMode::Density(n)
            };
            sample_gromov(m, l, mode, &rng)?
        }
        other => {
            return Err(Error::Parameter(format!(
                "unknown kind '{other}' (triangular | gromov)"
            )))
        }
    };
    std::fs::write(out, render_presentation(&presentation))?;
    outln!(
        "wrote {} ({} generators, {} relators)",
        out.display(),
        presentation.generators,
        presentation.relators.len()
    );
    Ok(())
}

fn cmd_link(presentation: &Path, classes: bool) -> Result<()> {
    let p = parse_presentation(&read_to_string(presentation)?)?;
    let l = build_link_graph(&p)?;
    let report = link_structure_report(&l, None)?;
    let mut per_class = Vec::new();
    for c in &report.per_class {
        let mut entry = json!({
            "class": c.class,
            "distinct_pairs": c.distinct_pairs,
            "duplicated_pairs": c.duplicated_pairs,
            "max_multiplicity": c.max_multiplicity,
            "duplicates_form_matching": c.duplicates_form_matching,
        });
        if classes {
            entry["edges"] = json!(l.class_edges(c.class)?);
        }
        per_class.push(entry);
    }
    let doc = json!({
        "vertices": l.vertex_count(),
        "relators": l.relator_count(),
        "total_edges": report.total_edges,
        "per_class": per_class,
    });
    outln!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn cmd_lift(presentation: &Path, out: &Path) -> Result<()> {
    let p = parse_presentation(&read_to_string(presentation)?)?;
    if !matches!(p.kind, PresentationKind::Gromov { .. }) {
        return Err(Error::Parameter(
            "lift expects a gromov-kind presentation".into(),
        ));
    }
    let lift = gromov_lift(&p)?;
    std::fs::write(out, render_presentation(&lift.lifted))?;
    let phi: Vec<String> = lift
        .phi
        .iter()
        .map(|w| {
            w.letters()
                .iter()
                .map(|l| format!("{}{}", if l.inverted { 'G' } else { 'g' }, l.gen))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let doc = json!({
        "generators": lift.lifted.generators,
        "relators": lift.lifted.relators.len(),
        "part_size": lift.part_size,
        "parts": lift.parts,
        "phi": phi,
    });
    outln!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn read_kv(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in read_to_string(path)?.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(Error::Parse {
            line: i + 1,
            msg: format!("expected key=value, got '{line}'"),
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn kv_f64(kv: &BTreeMap<String, String>, key: &str, default: Option<f64>) -> Result<f64> {
    match kv.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::Parameter(format!("bad value for '{key}': {v}"))),
        None => default.ok_or_else(|| Error::Parameter(format!("missing parameter '{key}'"))),
    }
}

fn cmd_ks(check: &str, params: &Path, samples: usize, seed: u64) -> Result<()> {
    let kv = read_kv(params)?;
    let rng = RngSeed::new(seed);
    let doc = match check {
        "inequalities" => {
            let lo = kv_f64(&kv, "p_lo", Some(2.0))?;
            let hi = kv_f64(&kv, "p_hi", Some(6.0))?;
            let r = remainder_inequality_suite(samples, (lo, hi), &rng)?;
            json!({
                "check": "inequalities",
                "samples": r.samples,
                "violations_lower": r.violations_lower,
                "violations_upper": r.violations_upper,
                "violations_tilde": r.violations_tilde,
                "violations_p3": r.violations_p3,
                "min_ratio_lower": r.min_ratio_lower,
                "max_ratio_upper": r.max_ratio_upper,
                "max_ratio_tilde": r.max_ratio_tilde,
                "max_excess_p3": r.max_excess_p3,
            })
        }
        "net" => {
            let p = kv_f64(&kv, "p", None)?;
            let eps = kv_f64(&kv, "epsilon", None)?;
            let theta = kv_f64(&kv, "theta", None)?;
            let degrees: Vec<usize> = kv
                .get("degrees")
                .ok_or_else(|| Error::Parameter("missing parameter 'degrees'".into()))?
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::Parameter(format!("bad degree '{t}'")))
                })
                .collect::<Result<_>>()?;
            let m = degrees.len();
            let net = NetParams::new(p, eps, theta, DegreeSequence::new(degrees))?;
            let enumerated = if m <= 4 {
                Some(net_enumerate_tiny(&net)?.len())
            } else {
                None
            };
            let bound = (4.0 * std::f64::consts::E * net.r_upper / eps).powi(m as i32);
            let mut max_gap = 0.0f64;
            let mut norms = (f64::INFINITY, f64::NEG_INFINITY);
            let mut rounded = 0usize;
            let mut r = rng.rng();
            use plap::graph::{center_to_zero_p_mean, normalize_to_sphere, weighted_p_norm};
            use rand::Rng;
            for _ in 0..samples.min(10_000) {
                let raw = VertexFunction(
                    (0..m).map(|_| r.gen_range(-1.0..1.0)).collect(),
                );
                let Ok((centered, _)) = center_to_zero_p_mean(&raw, &net.d, p) else {
                    continue;
                };
                let Ok(x) = normalize_to_sphere(&centered, &net.d, p) else {
                    continue;
                };
                let (y, _) = net_round(&x, &net)?;
                rounded += 1;
                for u in 0..m {
                    max_gap = max_gap.max((x[u] - y[u]).abs());
                }
                let n = weighted_p_norm(&y, &net.d, p)?;
                norms.0 = norms.0.min(n);
                norms.1 = norms.1.max(n);
            }
            json!({
                "check": "net",
                "p": p, "epsilon": eps, "theta": theta, "m": m,
                "enumerated_points": enumerated,
                "count_bound": bound,
                "r_upper": net.r_upper,
                "r_lower": net.r_lower,
                "rounded_samples": rounded,
                "max_coordinate_gap": max_gap,
                "rounded_norm_min": norms.0,
                "rounded_norm_max": norms.1,
            })
        }
        "decomposition" => {
            let graph_path = kv
                .get("graph")
                .ok_or_else(|| Error::Parameter("missing parameter 'graph'".into()))?;
            let p = kv_f64(&kv, "p", None)?;
            let g = parse_graph(&read_to_string(Path::new(graph_path))?)?;
            let opts = SolverOptions {
                restarts: 4,
                seed,
                ..SolverOptions::default()
            };
            let est = lambda_estimate(&g, p, &opts)?;
            let d_max = g.valencies().iter().copied().max().unwrap_or(0);
            let dec = decompose_light_heavy(&g, &est.minimizer, p, d_max)?;
            json!({
                "check": "decomposition",
                "p": p,
                "lambda": est.lambda,
                "threshold": dec.threshold,
                "light_edges": dec.light_edges,
                "heavy_edges": dec.heavy_edges,
                "x_total": dec.x_total,
                "x_light": dec.x_light,
                "x_heavy": dec.x_heavy,
                "x_tilde_light": dec.x_tilde_light,
                "identity_gap": dec.identity_gap,
            })
        }
        other => {
            return Err(Error::Parameter(format!(
                "unknown check '{other}' (inequalities | net | decomposition)"
            )))
        }
    };
    outln!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn cmd_certify(
    links: &Path,
    p: f64,
    epsilon: f64,
    property: &str,
    max_vertices: Option<usize>,
) -> Result<ExitCode> {
    let evidence: Vec<Evidence> = serde_json::from_str(&read_to_string(links)?)?;
    let outcome = match property {
        "flp" => {
            let mv = require(max_vertices, "--max-vertices")?;
            flp_certificate(&evidence, p, epsilon, mv)?
        }
        "kazhdan" => kazhdan_certificate(&evidence)?,
        other => {
            return Err(Error::Parameter(format!(
                "unknown property '{other}' (flp | kazhdan)"
            )))
        }
    };
    match outcome {
        CertificateOutcome::Issued {
            certificate,
            warnings,
        } => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            outln!("{}", serde_json::to_string_pretty(&certificate)?);
            Ok(ExitCode::SUCCESS)
        }
        CertificateOutcome::Refused { reason } => {
            outln!("{}", serde_json::to_string_pretty(&json!({"refused": reason}))?);
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_experiment(config: &Path, threads: usize, resume: bool) -> Result<ExitCode> {
    let cfg = parse_experiment_config(&read_to_string(config)?)?;
    let out_base = cfg
        .out_base
        .clone()
        .ok_or_else(|| Error::Parameter("config is missing 'out' in [experiment]".into()))?;
    let existing = if resume {
        let json_path = out_base.with_extension("json");
        if json_path.exists() {
            load_run_json(&read_to_string(&json_path)?)?.records
        } else {
            Vec::new()
        }
    } else {
        Vec::new()
    };
    let run = run_experiment_resuming(&cfg, threads, existing)?;
    let (csv_path, json_path) = write_outputs(&run, &out_base)?;
    outln!("wrote {} and {}", csv_path.display(), json_path.display());
    for s in &run.summaries {
        match (s.mean, s.min, s.max) {
            (Some(mean), Some(min), Some(max)) => outln!(
                "cell {:>4}: n={:<4} mean={mean:.6} min={min:.6} max={max:.6}",
                s.cell, s.completed
            ),
            _ => outln!("cell {:>4}: no completed trials", s.cell),
        }
    }
    if run.all_complete {
        outln!("all trials complete");
        Ok(ExitCode::SUCCESS)
    } else {
        outln!("incomplete: some trials failed");
        Ok(ExitCode::FAILURE)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Lambda {
            graph,
            p,
            exact2,
            restarts,
            seed,
            json,
        } => {
            cmd_lambda(&graph, p, exact2, restarts, seed, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::GenGraph {
            model,
            m,
            k,
            part_size,
            rho,
            deg_file,
            seed,
            out,
        } => {
            cmd_gen_graph(&model, m, k, part_size, rho, deg_file.as_deref(), seed, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::GenGroup {
            kind,
            m,
            l,
            rho,
            density,
            count,
            seed,
            out,
        } => {
            cmd_gen_group(&kind, m, l, rho, density, count, seed, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Link {
            presentation,
            classes,
        } => {
            cmd_link(&presentation, classes)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Lift { presentation, out } => {
            cmd_lift(&presentation, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ks {
            check,
            params,
            samples,
            seed,
        } => {
            cmd_ks(&check, &params, samples, seed)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Certify {
            links,
            p,
            epsilon,
            property,
            max_vertices,
        } => cmd_certify(&links, p, epsilon, &property, max_vertices),
        Cmd::Experiment {
            config,
            threads,
            resume,
        } => cmd_experiment(&config, threads, resume),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
