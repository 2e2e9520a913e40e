//! `dkgraph` command line: argument parsing and dispatch to `dkgraph-core`.
//!
//! Results go to stdout as JSON (experiments may write CSV instead),
//! diagnostics to stderr. Exit status is 0 on success, 2 on usage errors and
//! 1 on domain errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ColorChoice, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dkgraph::asymptotics::{band_bound_sweep, greedy_bound_rows, nu_dominance, sequence_rows, spectrum_rows};
use dkgraph::io::{read_graph, write_edge_list, GraphJson};
use dkgraph::lp::Q;
use dkgraph::model1k::{
    alpha_from_p, change_statistic, er_embedding, expected_stats_1k, fit_1k_with_table, log_prob_1k,
    p_from_alpha, prob_degree_present, psi_1k, NaturalParams1K, ProbabilityParams1K,
};
use dkgraph::model2k::{
    expected_stats_2k, fit_2k_with_table, log_prob_2k, psi_2k, reduced_pairs, Coordinates2K, Existence,
    NaturalParams2K,
};
use dkgraph::polytope::{existence_verdict_1k, interior_membership, polytope_a, polytope_b};
use dkgraph::{
    bi_degree_vector, degree_vector, degrees_from_bidegrees, edges_from_degrees, enumerate_with_cap,
    mc_degree_presence, mc_nonzero_count, near_regular_graph, regular_graph, scaled_bi_degree,
    singularity_experiment, spectrum_graph, Cap, ExperimentConfig, ExperimentReport, Graph, GreedyRule,
    KeyKind, NewtonOptions, PartitionTable, SequenceKind,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] dkgraph::Error),
    /// `--require-exists` was given and the MLE does not exist.
    #[error("MLE does not exist")]
    NoMle,
    #[error("write failed: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "dkgraph", version, color = ColorChoice::Never)]
#[command(about = "Exact 1K and 2K exponential random graph models on small graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    #[value(name = "1k")]
    OneK,
    #[value(name = "2k")]
    TwoK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coords {
    Scaled,
    EdgeCount,
}

impl From<Coords> for Coordinates2K {
    fn from(c: Coords) -> Self {
        match c {
            Coords::Scaled => Coordinates2K::Scaled,
            Coords::EdgeCount => Coordinates2K::EdgeCount,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KeyKindArg {
    Degree,
    ReducedDegree,
    Bidegree,
    Isolated,
}

impl From<KeyKindArg> for KeyKind {
    fn from(k: KeyKindArg) -> Self {
        match k {
            KeyKindArg::Degree => KeyKind::DegreeVector,
            KeyKindArg::ReducedDegree => KeyKind::ReducedDegreeVector,
            KeyKindArg::Bidegree => KeyKind::ScaledBiDegree,
            KeyKindArg::Isolated => KeyKind::IsolatedNodeCount,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolytopeArg {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Regular,
    NearRegular,
    Spectrum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    #[value(name = "prop5")]
    DegreePresence,
    #[value(name = "prop6")]
    NonzeroCount,
    Singularity,
    NuDominance,
    #[value(name = "fig4")]
    GreedyBound,
    Spectrum,
    ErEmbedding,
    BandBound,
    Lambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SequenceArg {
    SqrtN,
    SqrtNLogN,
}

impl From<SequenceArg> for SequenceKind {
    fn from(s: SequenceArg) -> Self {
        match s {
            SequenceArg::SqrtN => SequenceKind::SqrtN,
            SequenceArg::SqrtNLogN => SequenceKind::SqrtNLogN,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Inclusive,
    Strict,
}

impl From<RuleArg> for GreedyRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Inclusive => GreedyRule::Inclusive,
            RuleArg::Strict => GreedyRule::Strict,
        }
    }
}

const EXPERIMENT_HELP: &str = "\
CSV columns per experiment:
  prop5         n,a_n,k,clipped,trials,frequency,std_error,lambda
  prop6         n,trials,mean,std_error,sqrt_n_log_n,normalized
  singularity   n,p,c,band_low,band_high,prob_er,prob_1k
  nu-dominance  n,f,dominance_ratio,nu_sum_ok
  fig4          n,count,ratio
  spectrum      n,nonzeros,closed_form,ratio
  er-embedding  n,p,theta,theta_full_logit,max_deviation,max_deviation_full_logit
  band-bound    n,k,prob_alpha,prob_zero,bound,lambda_bound,holds
  lambda        n,a_n,k,clipped,lambda,h";

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree and bi-degree statistics of one graph, optionally its log-probability.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        /// Also report the log-probability under this model (needs --alpha).
        #[arg(long, requires = "alpha")]
        model: Option<Model>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_extended)]
        alpha: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "scaled")]
        coordinates: Coords,
        #[arg(long)]
        cap_override: bool,
    },
    /// Log-partition function and expected statistics.
    Psi {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        n: usize,
        /// Natural parameters; "-inf" is accepted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_extended, conflicts_with = "p")]
        alpha: Option<Vec<f64>>,
        /// 1K probability parameters p_0..p_{n-1}, converted to natural parameters.
        #[arg(long, value_delimiter = ',', conflicts_with = "er_p")]
        p: Option<Vec<f64>>,
        /// 1K parameters of the Erdos-Renyi embedding for edge probability P.
        #[arg(long, conflicts_with = "alpha")]
        er_p: Option<f64>,
        #[arg(long, value_enum, default_value = "scaled")]
        coordinates: Coords,
        /// 1K change statistic for moving a node from degree K to K'.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        change: Option<Vec<usize>>,
        #[arg(long)]
        cap_override: bool,
    },
    /// Maximum likelihood fit from observed graphs.
    Fit {
        #[arg(long)]
        model: Model,
        #[arg(long, num_args = 1.., required = true)]
        obs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// JSON output (the default; accepted for scripting).
        #[arg(long)]
        json: bool,
        /// Exit with status 1 when the MLE does not exist.
        #[arg(long)]
        require_exists: bool,
        #[arg(long, value_enum, default_value = "scaled")]
        coordinates: Coords,
        #[arg(long)]
        cap_override: bool,
    },
    /// Whether the MLE exists, and which condition fails if not.
    Exists {
        #[arg(long)]
        model: Model,
        #[arg(long, num_args = 1.., required = true)]
        obs: Vec<PathBuf>,
        #[arg(long)]
        require_exists: bool,
        #[arg(long)]
        cap_override: bool,
    },
    /// Exhaustive partition table, or polytope vertices with --polytope.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "degree")]
        key_kind: KeyKindArg,
        /// Only graphs without isolated nodes.
        #[arg(long)]
        restricted: bool,
        #[arg(long, value_enum)]
        polytope: Option<PolytopeArg>,
        /// Allow n = 8.
        #[arg(long)]
        cap_override: bool,
    },
    /// Builds a graph and prints it as an edge list.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Print the JSON mirror instead of the edge list.
        #[arg(long)]
        json: bool,
    },
    /// Experiment tables as JSON, or CSV with --csv.
    #[command(after_help = EXPERIMENT_HELP)]
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Offset sequence for prop5 and lambda.
        #[arg(long, value_enum, default_value = "sqrt-n-log-n")]
        sequence: SequenceArg,
        /// Constant in a_n (prop5, lambda) or band half-width (singularity).
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        /// 1K parameters for singularity (default: all zero).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_extended)]
        alpha: Option<Vec<f64>>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        step: Option<usize>,
        #[arg(long, value_enum, default_value = "inclusive")]
        rule: RuleArg,
        #[arg(long, default_value_t = 0.9)]
        c_low: f64,
        #[arg(long, default_value_t = 1.1)]
        c_high: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        cap_override: bool,
    },
}

fn parse_extended(s: &str) -> std::result::Result<f64, String> {
    match s.trim() {
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("{t:?}: {e}")).and_then(|x| {
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("{t:?} is not allowed"))
            }
        }),
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "dkgraph: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Stats { graph, model, alpha, coordinates, cap_override } => {
            stats(graph, *model, alpha.as_deref(), (*coordinates).into(), cap(*cap_override), out)
        }
        Command::Psi { model, n, alpha, p, er_p, coordinates, change, cap_override } => psi(
            *model,
            *n,
            alpha.as_deref(),
            p.as_deref(),
            *er_p,
            (*coordinates).into(),
            change.as_deref(),
            cap(*cap_override),
            out,
        ),
        Command::Fit { model, obs, tol, max_iter, json: _, require_exists, coordinates, cap_override } => {
            if tol.is_nan() || *tol <= 0.0 {
                return Err(usage("--tol must be positive"));
            }
            let opts = NewtonOptions { tolerance: *tol, max_iter: *max_iter };
            fit(*model, obs, opts, *require_exists, (*coordinates).into(), cap(*cap_override), out)
        }
        Command::Exists { model, obs, require_exists, cap_override } => {
            exists(*model, obs, *require_exists, cap(*cap_override), out)
        }
        Command::Enumerate { n, key_kind, restricted, polytope, cap_override } => {
            enumerate(*n, (*key_kind).into(), *restricted, *polytope, cap(*cap_override), out)
        }
        Command::Construct { kind, n, k, l, json } => construct(*kind, *n, *k, *l, *json, out),
        Command::Experiment { .. } => experiment(command, out),
    }
}

fn cap(over: bool) -> Cap {
    if over {
        Cap::Extended
    } else {
        Cap::Default
    }
}

/// Extended reals as JSON, `-inf` as the string "-inf".
fn extended(v: &[f64]) -> Value {
    v.iter().map(|&x| if x == f64::NEG_INFINITY { json!("-inf") } else { json!(x) }).collect()
}

fn emit(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(dkgraph::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<Graph>> {
    paths
        .iter()
        .map(|p| {
            read_graph(p).map_err(|e| match e {
                dkgraph::Error::Io(io) => {
                    dkgraph::Error::InvalidArgument(format!("cannot read {}: {io}", p.display()))
                }
                e => dkgraph::Error::InvalidArgument(format!("{}: {e}", p.display())),
            })
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(CliError::from)
}

fn same_n(graphs: &[Graph]) -> Result<usize> {
    let n = graphs[0].n();
    if graphs.iter().any(|g| g.n() != n) {
        return Err(usage("observations must all have the same number of nodes"));
    }
    Ok(n)
}

fn check_cap(n: usize, cap: Cap) -> Result<()> {
    if n > cap.max_n() {
        let hint = if cap == Cap::Default { " (use --cap-override for n = 8)" } else { "" };
        return Err(CliError::Domain(dkgraph::Error::CapExceeded {
            n,
            cap: cap.max_n(),
            graphs: format!("2^{}{hint}", n * n.saturating_sub(1) / 2),
        }));
    }
    Ok(())
}

fn table_1k(n: usize, cap: Cap) -> Result<PartitionTable> {
    check_cap(n, cap)?;
    Ok(enumerate_with_cap(n, KeyKind::ReducedDegreeVector, false, cap)?)
}

fn table_2k(n: usize, cap: Cap) -> Result<PartitionTable> {
    check_cap(n, cap)?;
    Ok(enumerate_with_cap(n, KeyKind::ScaledBiDegree, true, cap)?)
}

fn params_1k(n: usize, alpha: &[f64]) -> Result<NaturalParams1K> {
    if n < 2 || alpha.len() != n - 1 {
        return Err(usage(format!("1K at n = {n} needs {} parameters, got {}", n.saturating_sub(1), alpha.len())));
    }
    Ok(NaturalParams1K::new(n, alpha.to_vec())?)
}

fn params_2k(n: usize, alpha: &[f64], coords: Coordinates2K) -> Result<NaturalParams2K> {
    let len = (n * n.saturating_sub(1) / 2).saturating_sub(1);
    if n < 2 || alpha.len() != len {
        return Err(usage(format!("2K at n = {n} needs {len} parameters, got {}", alpha.len())));
    }
    Ok(NaturalParams2K::new(n, coords, alpha.to_vec())?)
}

fn stats(
    path: &PathBuf,
    model: Option<Model>,
    alpha: Option<&[f64]>,
    coords: Coordinates2K,
    cap: Cap,
    out: &mut dyn Write,
) -> Result<()> {
    if alpha.is_some() && model.is_none() {
        return Err(usage("--alpha needs --model"));
    }
    let g = read_all(std::slice::from_ref(path))?.remove(0);
    let n = g.n();
    let d = degree_vector(&g);
    let b = bi_degree_vector(&g);
    let s = scaled_bi_degree(&g);
    let mut v = json!({
        "n": n,
        "edge_count": g.edge_count(),
        "degree_vector": d.counts(),
        "bi_degree_vector": b.counts(),
        "bi_degree_pairs": dkgraph::graph::degree_pairs(n).collect::<Vec<_>>(),
        "scaled_bi_degree": s.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "scaled_bi_degree_sum": s.sum().to_string(),
        "edges_from_degrees": edges_from_degrees(&d)?,
        "degrees_from_bidegrees": degrees_from_bidegrees(&b)?.counts(),
    });
    if let (Some(model), Some(alpha)) = (model, alpha) {
        let lp = match model {
            Model::OneK => log_prob_1k(&g, &params_1k(n, alpha)?, &table_1k(n, cap)?)?,
            Model::TwoK => log_prob_2k(&g, &params_2k(n, alpha, coords)?, &table_2k(n, cap)?)?,
        };
        v["log_prob"] = json!(lp);
    }
    emit(out, &v)
}

#[allow(clippy::too_many_arguments)]
fn psi(
    model: Model,
    n: usize,
    alpha: Option<&[f64]>,
    p: Option<&[f64]>,
    er_p: Option<f64>,
    coords: Coordinates2K,
    change: Option<&[usize]>,
    cap: Cap,
    out: &mut dyn Write,
) -> Result<()> {
    match model {
        Model::OneK => {
            let params = match (alpha, p) {
                _ if er_p.is_some() => er_embedding(n, er_p.unwrap_or_default())?,
                (Some(a), None) => params_1k(n, a)?,
                (None, Some(p)) => {
                    if p.len() != n {
                        return Err(usage(format!("--p at n = {n} needs {n} entries, got {}", p.len())));
                    }
                    alpha_from_p(&ProbabilityParams1K::new(p.to_vec())?)?
                }
                (None, None) => NaturalParams1K::zero(n)?,
                (Some(_), Some(_)) => return Err(usage("--alpha and --p conflict")),
            };
            let change = match change {
                None => None,
                Some(&[k, k2]) => Some(k..=k2),
                Some(_) => return Err(usage("--change takes two degrees K,K'")),
            };
            check_cap(n, cap)?;
            let table = table_1k(n, cap)?;
            let full = enumerate_with_cap(n, KeyKind::DegreeVector, false, cap)?;
            let mut v = json!({
                "model": "1k",
                "n": n,
                "alpha": extended(params.alpha()),
                "psi": psi_1k(&params, &table)?,
                "expected_stats": expected_stats_1k(&params, &table)?,
                "p": p_from_alpha(&params),
                "degree_presence": (0..n).map(|k| prob_degree_present(k, &params, &full)).collect::<dkgraph::Result<Vec<_>>>()?,
            });
            if let Some(r) = change {
                v["change_statistic"] = json!(change_statistic(&params, *r.start(), *r.end())?);
            }
            emit(out, &v)
        }
        Model::TwoK => {
            if p.is_some() || er_p.is_some() || change.is_some() {
                return Err(usage("--p, --er-p and --change apply to the 1K model only"));
            }
            let params = match alpha {
                Some(a) => params_2k(n, a, coords)?,
                None => NaturalParams2K::zero(n)?.to_coordinates(coords),
            };
            let table = table_2k(n, cap)?;
            emit(
                out,
                &json!({
                    "model": "2k",
                    "n": n,
                    "alpha": extended(params.alpha()),
                    "coordinates": params.coordinates(),
                    "pairs": reduced_pairs(n),
                    "psi": psi_2k(&params, &table)?,
                    "expected_stats": expected_stats_2k(&params, &table)?,
                }),
            )
        }
    }
}

fn fit(
    model: Model,
    paths: &[PathBuf],
    opts: NewtonOptions,
    require: bool,
    coords: Coordinates2K,
    cap: Cap,
    out: &mut dyn Write,
) -> Result<()> {
    let graphs = read_all(paths)?;
    let n = same_n(&graphs)?;
    let exists = match model {
        Model::OneK => {
            let r = fit_1k_with_table(&graphs, &table_1k(n, cap)?, None, opts)?;
            emit(out, &r)?;
            r.exists
        }
        Model::TwoK => {
            let r = fit_2k_with_table(&graphs, &table_2k(n, cap)?, coords, opts)?;
            emit(out, &r)?;
            r.exists == Existence::Exists
        }
    };
    if require && !exists {
        return Err(CliError::NoMle);
    }
    Ok(())
}

fn exists(model: Model, paths: &[PathBuf], require: bool, cap: Cap, out: &mut dyn Write) -> Result<()> {
    let graphs = read_all(paths)?;
    let n = same_n(&graphs)?;
    let ok = match model {
        Model::OneK => {
            if n < 2 {
                return Err(usage("1K needs n >= 2"));
            }
            let m = Q::from_integer(graphs.len().into());
            let mut sums = vec![0u64; n - 1];
            for g in &graphs {
                for (s, c) in sums.iter_mut().zip(degree_vector(g).reduced()) {
                    *s += c;
                }
            }
            let mean: Vec<Q> = sums.iter().map(|&s| Q::from_integer(s.into()) / &m).collect();
            let verdict = existence_verdict_1k(n, &mean)?;
            let mut v = json!({
                "model": "1k",
                "n": n,
                "observations": graphs.len(),
                "mean": mean.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "exists": verdict.exists,
                "failed": verdict.failed,
            });
            if n <= cap.max_n() {
                v["hull_check"] = json!(interior_membership(&polytope_a(n)?, &mean)?);
            }
            emit(out, &v)?;
            verdict.exists
        }
        Model::TwoK => {
            // hull test only: a zero-iteration fit still classifies the mean
            let opts = NewtonOptions { tolerance: f64::INFINITY, max_iter: 0 };
            let r = fit_2k_with_table(&graphs, &table_2k(n, cap)?, Coordinates2K::Scaled, opts)?;
            emit(
                out,
                &json!({
                    "model": "2k",
                    "n": n,
                    "observations": graphs.len(),
                    "mean": r.observed_mean,
                    "exists": r.exists == Existence::Exists,
                    "existence": r.exists,
                    "dropped_pairs": r.dropped_pairs,
                }),
            )?;
            r.exists == Existence::Exists
        }
    };
    if require && !ok {
        return Err(CliError::NoMle);
    }
    Ok(())
}

fn enumerate(
    n: usize,
    kind: KeyKind,
    restricted: bool,
    polytope: Option<PolytopeArg>,
    cap: Cap,
    out: &mut dyn Write,
) -> Result<()> {
    check_cap(n, cap)?;
    if let Some(which) = polytope {
        let p = match which {
            PolytopeArg::A => polytope_a(n)?,
            PolytopeArg::B => polytope_b(n)?,
        };
        let vertices: Vec<Vec<String>> =
            p.vertices.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
        return emit(
            out,
            &json!({ "n": n, "label": p.label, "dimension": p.dimension, "vertices": vertices }),
        );
    }
    let t = enumerate_with_cap(n, kind, restricted, cap)?;
    let mut v: Value = t.to_json();
    v["total"] = json!(t.total());
    emit(out, &v)
}

fn construct(
    kind: ConstructKind,
    n: usize,
    k: Option<usize>,
    l: Option<usize>,
    json_out: bool,
    out: &mut dyn Write,
) -> Result<()> {
    let g = match (kind, k, l) {
        (ConstructKind::Regular, Some(k), None) => regular_graph(n, k)?,
        (ConstructKind::NearRegular, Some(k), Some(l)) => near_regular_graph(n, k, l)?,
        (ConstructKind::Spectrum, None, None) => spectrum_graph(n)?,
        (ConstructKind::Regular, ..) => return Err(usage("regular takes --n and --k")),
        (ConstructKind::NearRegular, ..) => return Err(usage("near-regular takes --n, --k and --l")),
        (ConstructKind::Spectrum, ..) => return Err(usage("spectrum takes only --n")),
    };
    if json_out {
        emit(out, &GraphJson::from(&g))
    } else {
        write!(out, "{}", write_edge_list(&g))?;
        Ok(())
    }
}

fn report<R: Serialize>(r: &ExperimentReport<R>, csv: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match csv {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| dkgraph::Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
            r.write_csv(file)?;
            Ok(())
        }
        None => emit(out, r),
    }
}

fn experiment(command: &Command, out: &mut dyn Write) -> Result<()> {
    let Command::Experiment {
        kind,
        seed,
        trials,
        n,
        sequence,
        c,
        p,
        alpha,
        nmax,
        step,
        rule,
        c_low,
        c_high,
        csv,
        cap_override,
    } = command
    else {
        unreachable!("experiment dispatch");
    };
    let csv = csv.as_ref();
    let cap = cap(*cap_override);
    let need_n = |default: &[usize]| -> Vec<usize> { n.clone().unwrap_or_else(|| default.to_vec()) };
    let unused = |flag: &str, set: bool| -> Result<()> {
        if set {
            Err(usage(format!("{flag} does not apply to experiment {kind:?}")))
        } else {
            Ok(())
        }
    };
    if !matches!(kind, ExperimentKind::GreedyBound) {
        unused("--nmax", nmax.is_some())?;
        unused("--step", step.is_some())?;
    }
    if !matches!(kind, ExperimentKind::Singularity) {
        unused("--alpha", alpha.is_some())?;
    }
    match kind {
        ExperimentKind::DegreePresence | ExperimentKind::NonzeroCount => {
            unused("--p", p.is_some())?;
            let config = ExperimentConfig {
                n_values: need_n(&[51, 101, 201]),
                trials: trials.unwrap_or(500),
                seed: *seed,
                sequence: (*sequence).into(),
                c: c.unwrap_or(0.0),
            };
            if *kind == ExperimentKind::DegreePresence {
                report(&mc_degree_presence(&config)?, csv, out)
            } else {
                report(&mc_nonzero_count(&config)?, csv, out)
            }
        }
        ExperimentKind::Lambda => {
            unused("--p", p.is_some())?;
            unused("--trials", trials.is_some())?;
            let config = ExperimentConfig {
                n_values: need_n(&[51, 101, 201]),
                trials: 1,
                seed: *seed,
                sequence: (*sequence).into(),
                c: c.unwrap_or(0.0),
            };
            report(&sequence_rows(&config)?, csv, out)
        }
        ExperimentKind::Singularity => {
            unused("--trials", trials.is_some())?;
            let ns = need_n(&[5, 6, 7]);
            let p = match p.as_deref() {
                None => 0.5,
                Some(&[p]) => p,
                Some(_) => return Err(usage("singularity takes a single --p")),
            };
            if alpha.is_some() && ns.len() != 1 {
                return Err(usage("--alpha needs a single --n"));
            }
            let mut rows = Vec::new();
            for &m in &ns {
                check_cap(m, cap)?;
                let a = match alpha {
                    Some(a) => params_1k(m, a)?,
                    None => NaturalParams1K::zero(m)?,
                };
                rows.push(singularity_experiment(m, p, c.unwrap_or(0.5), &a, cap)?);
            }
            let r = ExperimentReport { experiment: "singularity".into(), seed: None, trials: None, rows };
            report(&r, csv, out)
        }
        ExperimentKind::NuDominance => {
            unused("--trials", trials.is_some())?;
            let n_max = match n.as_deref() {
                None => 12,
                Some(&[m]) => m,
                Some(_) => return Err(usage("nu-dominance takes a single --n (the largest size)")),
            };
            report(&nu_dominance(n_max)?, csv, out)
        }
        ExperimentKind::GreedyBound => {
            unused("--n", n.is_some())?;
            report(&greedy_bound_rows(nmax.unwrap_or(200), step.unwrap_or(10), (*rule).into())?, csv, out)
        }
        ExperimentKind::Spectrum => report(&spectrum_rows(&need_n(&[51, 101, 201]))?, csv, out),
        ExperimentKind::ErEmbedding => {
            let ns = need_n(&[3, 4]);
            for &m in &ns {
                check_cap(m, cap)?;
            }
            let ps = p.clone().unwrap_or_else(|| vec![0.3, 0.5, 0.7]);
            report(&dkgraph::asymptotics::er_embedding_rows(&ns, &ps)?, csv, out)
        }
        ExperimentKind::BandBound => {
            let ns = need_n(&[2, 3, 4, 5]);
            for &m in &ns {
                check_cap(m, cap)?;
            }
            report(&band_bound_sweep(&ns, trials.unwrap_or(50), *c_low, *c_high, *seed, cap)?, csv, out)
        }
    }
}

/// Where each library operation is reached from the command line: operation
/// name and an argument vector exercising it (paths relative to `tests/data`).
pub const DISPATCH: &[(&str, &[&str])] = &[
    ("degree_vector", &["stats", "--graph", "example.edges"]),
    ("bi_degree_vector", &["stats", "--graph", "example.edges"]),
    ("scaled_bi_degree", &["stats", "--graph", "example.edges"]),
    ("edges_from_degrees", &["stats", "--graph", "example.edges"]),
    ("degrees_from_bidegrees", &["stats", "--graph", "example.edges"]),
    ("enumerate", &["enumerate", "--n", "4", "--key-kind", "bidegree", "--restricted"]),
    ("count_no_isolated", &["experiment", "nu-dominance", "--n", "8"]),
    ("nu", &["experiment", "nu-dominance", "--n", "8"]),
    ("dominance_ratio", &["experiment", "nu-dominance", "--n", "8"]),
    ("regular_graph", &["construct", "regular", "--n", "7", "--k", "4"]),
    ("near_regular_graph", &["construct", "near-regular", "--n", "7", "--k", "3", "--l", "4"]),
    ("spectrum_graph", &["construct", "spectrum", "--n", "9"]),
    ("spectrum_bidegree_nonzeros", &["experiment", "spectrum", "--n", "9,10"]),
    ("polytope_b", &["enumerate", "--n", "4", "--polytope", "b"]),
    ("polytope_a", &["enumerate", "--n", "4", "--polytope", "a"]),
    ("mle_exists_1k", &["exists", "--model", "1k", "--obs", "tri.edges", "path.edges", "edge.edges"]),
    ("interior_membership", &["exists", "--model", "1k", "--obs", "tri.edges", "edge.edges"]),
    ("alpha_from_p", &["psi", "--model", "1k", "--n", "3", "--p", "0.2,0.3,0.5"]),
    ("psi_1k", &["psi", "--model", "1k", "--n", "3", "--alpha", "0,0"]),
    ("log_prob_1k", &["stats", "--graph", "example.edges", "--model", "1k", "--alpha", "0.1,-inf,0.3"]),
    ("expected_stats_1k", &["psi", "--model", "1k", "--n", "4", "--alpha", "0.3,-0.4,0.8"]),
    ("change_statistic", &["psi", "--model", "1k", "--n", "4", "--alpha", "0.3,-0.4,0.8", "--change", "1,2"]),
    ("fit_1k", &["fit", "--model", "1k", "--obs", "tri.edges", "path.edges", "edge.edges"]),
    ("er_embedding", &["psi", "--model", "1k", "--n", "4", "--er-p", "0.3"]),
    ("prob_degree_present", &["psi", "--model", "1k", "--n", "5"]),
    ("psi_2k", &["psi", "--model", "2k", "--n", "3", "--alpha", "0,0.5"]),
    ("log_prob_2k", &["stats", "--graph", "tri.edges", "--model", "2k", "--alpha", "0,0.5"]),
    ("fit_2k", &["fit", "--model", "2k", "--obs", "tri.edges", "path.edges"]),
    ("bidegree_nonzero_upper_bound", &["experiment", "fig4", "--nmax", "50", "--step", "10"]),
    ("lambda_k", &["experiment", "lambda", "--n", "51,101", "--c", "1"]),
    ("mc_degree_presence", &["experiment", "prop5", "--n", "21", "--trials", "20", "--c", "0"]),
    ("mc_nonzero_count", &["experiment", "prop6", "--n", "100", "--trials", "20"]),
    ("h_sequence", &["experiment", "lambda", "--n", "51,101", "--sequence", "sqrt-n", "--c", "1"]),
    ("singularity_experiment", &["experiment", "singularity", "--n", "5", "--p", "0.9", "--c", "0.5"]),
    ("band_bound", &["experiment", "band-bound", "--n", "3,4", "--trials", "3"]),
];
