//! Command-line front end: spectral bounds, centrality, communities,
//! rankings, sweeps, projections, and partition scoring.
//!
//! Data goes to standard output (or `--out`), diagnostics to standard
//! error. Exit codes: 0 success, 2 usage, 3 data error, 4 numerical error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hetnet::io;
use hetnet::prelude::*;
use hetnet::ErrorKind;

mod grid;
mod output;

use output::{Payload, Sink};

#[derive(Parser)]
#[command(
    name = "hetnet",
    version,
    about = "Heterogeneous network analysis: b-centrality, communities, rankings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dominant eigenvalue of the adjacency matrix and the alpha bound.
    SpectralRadius(SpectralRadiusCmd),
    /// Per-node b-centrality scores at one alpha.
    Centrality(CentralityCmd),
    /// Detect communities by spectral modularity maximization.
    Communities(CommunitiesCmd),
    /// Within-community ranks across an alpha grid, with role labels.
    Rank(RankCmd),
    /// Score/rank sweep over an alpha grid as plot-ready CSV.
    Sweep(SweepCmd),
    /// Normalized mutual information between two partition files.
    Nmi(NmiCmd),
    /// Collapse a two-layer relation onto one layer.
    Project(ProjectCmd),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["builtin", "input", "gml"])))]
struct InputArgs {
    /// Bundled dataset (southern_women, southern_women_binary_projection,
    /// southern_women_weighted_projection).
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,

    /// Layered-graph file.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// GML file; node `value` attributes become a conference layer unless
    /// --no-conference-synthesis is given.
    #[arg(long, value_name = "PATH")]
    gml: Option<PathBuf>,

    /// Load GML as a single-layer graph, ignoring node values.
    #[arg(long, requires = "gml")]
    no_conference_synthesis: bool,
}

impl InputArgs {
    fn load(&self) -> hetnet::Result<LayeredGraph> {
        if let Some(name) = &self.builtin {
            io::load_builtin(name)
        } else if let Some(path) = &self.input {
            io::load_graph(path)
        } else {
            let path = self.gml.as_ref().expect("clap enforces one source");
            io::load_gml(path, !self.no_conference_synthesis)
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format for the data stream.
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    output: Format,

    /// Write data to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Series,
}

#[derive(Args)]
struct PipelineArgs {
    /// Indirect attenuation factor.
    #[arg(long)]
    alpha: f64,

    /// Direct attenuation factor.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,

    /// Centrality computation.
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,

    /// Series terms (with --method series).
    #[arg(long, default_value_t = 3)]
    terms: usize,
}

impl PipelineArgs {
    fn centrality(&self, matrix: &NModeMatrix) -> hetnet::Result<CentralityMatrix> {
        let params = CentralityParams::new(self.alpha, self.beta)?;
        match self.method {
            Method::Exact => bonacich_exact(matrix, params),
            Method::Series => bonacich_series(matrix, params, self.terms),
        }
    }
}

#[derive(Args)]
struct SpectralRadiusCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CentralityCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CommunitiesCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,

    /// Skip integer rounding of centrality values in the null model.
    #[arg(long)]
    no_rounding: bool,

    /// Partition file with reference communities; NMI is reported.
    #[arg(long, value_name = "PATH", conflicts_with = "truth_builtin")]
    truth: Option<PathBuf>,

    /// Compare against the bundled ground truth of --builtin.
    #[arg(long, requires = "builtin")]
    truth_builtin: bool,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RankCmd {
    #[command(flatten)]
    input: InputArgs,

    /// Alpha grid, `start:end:step` or comma-separated values.
    #[arg(long, value_name = "SPEC")]
    grid: String,

    #[arg(long, default_value_t = 1.0)]
    beta: f64,

    /// Alpha for the community detection pass (default: largest grid value).
    #[arg(long, value_name = "ALPHA")]
    detect_alpha: Option<f64>,

    /// Centrality method for the community detection pass.
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,

    #[arg(long, default_value_t = 3)]
    terms: usize,

    #[arg(long)]
    no_rounding: bool,

    /// Rank by scores restricted to each node's community rather than by
    /// total scores.
    #[arg(long, value_enum, default_value_t = Scope::Within)]
    scope: Scope,

    /// Restrict the ranked nodes to one layer (by name).
    #[arg(long, value_name = "LAYER")]
    layer: Option<String>,

    /// Minimum rank gain across the sweep that marks a bridge.
    #[arg(long, default_value_t = 1.0)]
    bridge_threshold: f64,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Scope {
    Within,
    Total,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    input: InputArgs,

    /// Alpha grid, `start:end:step` or comma-separated values.
    #[arg(long, value_name = "SPEC")]
    grid: String,

    #[arg(long, default_value_t = 1.0)]
    beta: f64,

    /// Alpha for the community detection pass (default: largest grid value).
    #[arg(long, value_name = "ALPHA")]
    detect_alpha: Option<f64>,

    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,

    #[arg(long, default_value_t = 3)]
    terms: usize,

    #[arg(long)]
    no_rounding: bool,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct NmiCmd {
    /// First partition file (label<TAB>community).
    first: PathBuf,
    /// Second partition file.
    second: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ProjectCmd {
    #[command(flatten)]
    input: InputArgs,

    /// Layer to keep.
    #[arg(long, value_name = "LAYER")]
    target: String,

    /// Layer projected over.
    #[arg(long, value_name = "LAYER")]
    via: String,

    /// Count shared neighbors instead of a 0/1 indicator.
    #[arg(long)]
    weighted: bool,

    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("hetnet: {err}");
            match err.kind() {
                ErrorKind::Numerical => ExitCode::from(4),
                ErrorKind::Data => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: Cli) -> hetnet::Result<()> {
    match cli.command {
        Command::SpectralRadius(cmd) => spectral_radius_cmd(cmd),
        Command::Centrality(cmd) => centrality_cmd(cmd),
        Command::Communities(cmd) => communities_cmd(cmd),
        Command::Rank(cmd) => rank_cmd(cmd),
        Command::Sweep(cmd) => sweep_cmd(cmd),
        Command::Nmi(cmd) => nmi_cmd(cmd),
        Command::Project(cmd) => project_cmd(cmd),
    }
}

fn spectral_radius_cmd(cmd: SpectralRadiusCmd) -> hetnet::Result<()> {
    let graph = cmd.input.load()?;
    let matrix = build_nmode(&graph)?;
    let info = spectral_radius(&matrix)?;
    let bound = max_alpha(&matrix)?;
    let mut payload = Payload::new("spectral-radius");
    payload.number("lambda_max", info.lambda_max);
    match bound {
        MaxAlpha::Bounded(b) => payload.number("max_alpha", b),
        MaxAlpha::Unbounded => payload.null("max_alpha"),
    }
    payload.integer("iterations", info.iterations as u64);
    payload.number("residual", info.residual);
    Sink::new(cmd.output.out.as_deref()).write_keyed(cmd.output.output == Format::Json, &payload)
}

fn centrality_cmd(cmd: CentralityCmd) -> hetnet::Result<()> {
    let graph = cmd.input.load()?;
    let matrix = build_nmode(&graph)?;
    let c = cmd.pipeline.centrality(&matrix)?;
    let scores = node_scores(&c);
    let mut rows: Vec<(String, f64)> = matrix
        .labels()
        .iter()
        .cloned()
        .zip(scores.iter().copied())
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));

    let sink = Sink::new(cmd.output.out.as_deref());
    if cmd.output.output == Format::Json {
        let mut payload = Payload::new("centrality");
        payload.number("alpha", cmd.pipeline.alpha);
        payload.number("beta", cmd.pipeline.beta);
        payload.string(
            "method",
            match cmd.pipeline.method {
                Method::Exact => "exact",
                Method::Series => "series",
            },
        );
        payload.number("interaction_radius", 1.0 / (1.0 - cmd.pipeline.alpha));
        payload.score_rows("scores", &rows);
        sink.write_json(&payload)
    } else {
        let mut text = String::from("label\tscore\n");
        for (label, score) in &rows {
            text.push_str(&format!("{label}\t{score:?}\n"));
        }
        sink.write_text(&text)
    }
}

fn detect_options(method: Method, terms: usize, no_rounding: bool) -> DetectOptions {
    DetectOptions {
        method: match method {
            Method::Exact => CentralityMethod::Exact,
            Method::Series => CentralityMethod::Series { terms },
        },
        rounding: !no_rounding,
    }
}

fn communities_cmd(cmd: CommunitiesCmd) -> hetnet::Result<()> {
    let graph = cmd.input.load()?;
    let matrix = build_nmode(&graph)?;
    let options = detect_options(cmd.pipeline.method, cmd.pipeline.terms, cmd.no_rounding);
    let result = detect_communities_with(&matrix, cmd.pipeline.alpha, cmd.pipeline.beta, options)?;
    let discovered = Labeling::from_partition(matrix.labels(), &result.partition)?;

    let reference = if cmd.truth_builtin {
        let name = cmd.input.builtin.as_deref().expect("clap requires builtin");
        Some(io::builtin_ground_truth(name)?)
    } else if let Some(path) = &cmd.truth {
        Some(io::load_partition(path)?)
    } else {
        None
    };
    let score = match &reference {
        Some(truth) => {
            let comparable = discovered.restricted(|l| truth.community_of(l).is_some());
            Some(nmi(&comparable, truth)?)
        }
        None => None,
    };

    let sink = Sink::new(cmd.output.out.as_deref());
    if cmd.output.output == Format::Json {
        let mut payload = Payload::new("communities");
        payload.number("alpha", result.alpha);
        payload.number("beta", cmd.pipeline.beta);
        payload.integer("communities", result.partition.community_count() as u64);
        payload.number("q_raw", result.partition.q);
        payload.number("q_normalized", result.q_normalized);
        payload.split_rows("splits", &result.splits);
        match score {
            Some(v) => payload.number("nmi", v),
            None => payload.null("nmi"),
        }
        payload.labeling("partition", &discovered);
        sink.write_json(&payload)?;
    } else {
        sink.write_text(&io::partition_to_string(&discovered))?;
        eprintln!(
            "q_raw {:?}  q_normalized {:?}  communities {}",
            result.partition.q,
            result.q_normalized,
            result.partition.community_count()
        );
        for (i, split) in result.splits.iter().enumerate() {
            eprintln!(
                "split {}: eigenvalue {:?} delta_q {:?}",
                i + 1,
                split.eigenvalue,
                split.delta_q
            );
        }
        if let Some(v) = score {
            eprintln!("nmi {v:?}");
        }
    }
    Ok(())
}

struct SweepData {
    labels: Vec<String>,
    scores: ScoreTable,
    ranks: RankTable,
}

fn sweep_pipeline(
    matrix: &NModeMatrix,
    grid: &[f64],
    beta: f64,
    detect_alpha: Option<f64>,
    options: DetectOptions,
    scope: Scope,
    layer: Option<&str>,
) -> hetnet::Result<SweepData> {
    let detect_alpha = detect_alpha.unwrap_or_else(|| grid[grid.len() - 1]);
    let communities = detect_communities_with(matrix, detect_alpha, beta, options)?;
    let table = match scope {
        Scope::Total => alpha_sweep(matrix, grid, beta)?,
        Scope::Within => alpha_sweep_within(matrix, grid, beta, &communities.partition)?,
    };

    let (labels, table, partition) = match layer {
        None => (matrix.labels().to_vec(), table, communities.partition),
        Some(name) => {
            let layer = matrix
                .layers()
                .iter()
                .find(|l| l.name == name)
                .ok_or_else(|| hetnet::Error::UnknownBuiltin {
                    name: name.to_string(),
                    available: matrix
                        .layers()
                        .iter()
                        .map(|l| l.name.clone())
                        .collect::<Vec<_>>()
                        .join(", "),
                })?
                .clone();
            let labels = matrix.labels()[layer.offset..layer.offset + layer.size].to_vec();
            let scores = table.scores.rows(layer.offset, layer.size).into_owned();
            let assignment =
                communities.partition.assignment[layer.offset..layer.offset + layer.size].to_vec();
            (
                labels,
                ScoreTable {
                    grid: table.grid,
                    scores,
                    beta,
                },
                Partition::from_assignment(assignment),
            )
        }
    };
    let ranks = rank_within_groups(&table, &partition)?;
    Ok(SweepData {
        labels,
        scores: table,
        ranks,
    })
}

fn rank_cmd(cmd: RankCmd) -> hetnet::Result<()> {
    let graph = cmd.input.load()?;
    let matrix = build_nmode(&graph)?;
    let grid = grid::parse(&cmd.grid)?;
    let options = detect_options(cmd.method, cmd.terms, cmd.no_rounding);
    let data = sweep_pipeline(
        &matrix,
        &grid,
        cmd.beta,
        cmd.detect_alpha,
        options,
        cmd.scope,
        cmd.layer.as_deref(),
    )?;
    let roles = classify_roles(&data.ranks, cmd.bridge_threshold)?;

    let sink = Sink::new(cmd.output.out.as_deref());
    if cmd.output.output == Format::Json {
        let mut payload = Payload::new("rank");
        payload.grid("grid", &grid);
        payload.number("beta", cmd.beta);
        payload.rank_rows("nodes", &data.labels, &data.scores, &data.ranks, &roles);
        sink.write_json(&payload)
    } else {
        sink.write_text(&io::ranks_csv_string(
            &data.labels,
            &data.scores,
            &data.ranks,
        ))?;
        for role in &roles {
            if role.role != Role::Stable {
                eprintln!(
                    "{}\t{}\tdelta_rank {:?}",
                    data.labels[role.node],
                    match role.role {
                        Role::Leader => "leader",
                        Role::Bridge => "bridge",
                        Role::Stable => unreachable!(),
                    },
                    role.delta_rank
                );
            }
        }
        Ok(())
    }
}

fn sweep_cmd(cmd: SweepCmd) -> hetnet::Result<()> {
    let graph = cmd.input.load()?;
    let matrix = build_nmode(&graph)?;
    let grid = grid::parse(&cmd.grid)?;
    let options = detect_options(cmd.method, cmd.terms, cmd.no_rounding);
    let data = sweep_pipeline(
        &matrix,
        &grid,
        cmd.beta,
        cmd.detect_alpha,
        options,
        Scope::Total,
        None,
    )?;
    let sink = Sink::new(cmd.output.out.as_deref());
    if cmd.output.output == Format::Json {
        let mut payload = Payload::new("sweep");
        payload.grid("grid", &grid);
        payload.number("beta", cmd.beta);
        let roles: Vec<RoleLabel> = Vec::new();
        payload.rank_rows("nodes", &data.labels, &data.scores, &data.ranks, &roles);
        sink.write_json(&payload)
    } else {
        sink.write_text(&io::ranks_csv_string(
            &data.labels,
            &data.scores,
            &data.ranks,
        ))
    }
}

fn nmi_cmd(cmd: NmiCmd) -> hetnet::Result<()> {
    let first = io::load_partition(&cmd.first)?;
    let second = io::load_partition(&cmd.second)?;
    let score = nmi(&first, &second)?;
    let sink = Sink::new(cmd.output.out.as_deref());
    if cmd.output.output == Format::Json {
        let mut payload = Payload::new("nmi");
        payload.number("nmi", score);
        sink.write_json(&payload)
    } else {
        sink.write_text(&format!("{score:?}\n"))
    }
}

fn project_cmd(cmd: ProjectCmd) -> hetnet::Result<()> {
    let graph = cmd.input.load()?;
    let target = graph
        .layer_index(&cmd.target)
        .ok_or_else(|| hetnet::Error::UnknownBuiltin {
            name: cmd.target.clone(),
            available: layer_names(&graph),
        })?;
    let via = graph
        .layer_index(&cmd.via)
        .ok_or_else(|| hetnet::Error::UnknownBuiltin {
            name: cmd.via.clone(),
            available: layer_names(&graph),
        })?;
    let matrix = if cmd.weighted {
        project_unipartite_weighted(&graph, target, via)?
    } else {
        project_unipartite_binary(&graph, target, via)?
    };
    // emit as a loadable graph file
    let mut projected = LayeredGraph::new(false);
    projected
        .add_layer(&cmd.target)
        .expect("projected graph starts empty");
    for label in matrix.labels() {
        projected.add_node(0, label).expect("labels were unique");
    }
    for i in 0..matrix.dimension() {
        for j in (i + 1)..matrix.dimension() {
            let w = matrix.values()[(i, j)];
            if w != 0.0 {
                projected
                    .add_edge(matrix.label(i), matrix.label(j), w)
                    .expect("upper triangle visited once");
            }
        }
    }
    let sink = Sink::new(cmd.output.out.as_deref());
    if cmd.output.output == Format::Json {
        let mut payload = Payload::new("project");
        payload.string("target", &cmd.target);
        payload.string("via", &cmd.via);
        payload.string("mode", if cmd.weighted { "weighted" } else { "binary" });
        payload.graph("graph", &projected);
        sink.write_json(&payload)
    } else {
        sink.write_text(&io::graph_to_string(&projected))
    }
}

fn layer_names(graph: &LayeredGraph) -> String {
    (0..graph.layer_count())
        .map(|l| graph.layer_name(l).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
