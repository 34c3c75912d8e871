//! `fairnet` command line: generate two-group networks, measure them, run
//! contagion simulations, and execute declarative sweeps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use fairnet_cli::edgelist::{parse_graph, write_graph, IngestOptions, IngestReport};
use fairnet_cli::manifest::RunManifest;
use fairnet_cli::report;
use fairnet_cli::svg;
use fairnet_cli::sweepfile::SweepFile;
use fairnet_cli::CliError;
use fairnet_core::contagion::{
    self, ContagionConfig, ContagionKind, SeedingBucket,
};
use fairnet_core::experiments::{run_sweep, time_to_equality, HeatmapMatrix};
use fairnet_core::generators::{self, GeneratorConfig, ModelPreset};
use fairnet_core::graph::LabeledGraph;
use fairnet_core::measures::{MeasureOptions, MeasureReport};

#[derive(Parser)]
#[command(
    name = "fairnet",
    version,
    about = "Two-group network models, SI contagion, and information-access equality measures"
)]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "FAIRNET_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a network and write it as an edge-list file.
    Generate(GenerateArgs),
    /// Compute the structural and equality measures of a graph file.
    Measure(MeasureArgs),
    /// Run one spreading process and write trace and curve CSVs.
    Simulate(SimulateArgs),
    /// Execute a sweep spec and write heatmaps plus a run manifest.
    Sweep(SweepArgs),
    /// Validate a graph file and print its ingestion report.
    IngestCheck(IngestCheckArgs),
}

fn parse_preset(s: &str) -> Result<ModelPreset, String> {
    ModelPreset::from_token(s).ok_or_else(|| {
        let all: Vec<&str> = ModelPreset::ALL.iter().map(|p| p.token()).collect();
        format!("unknown preset; expected one of: {}", all.join(", "))
    })
}

fn parse_kind(s: &str) -> Result<ContagionKind, String> {
    ContagionKind::from_token(s).ok_or_else(|| "expected \"simple\" or \"complex\"".to_string())
}

fn parse_bucket(s: &str) -> Result<SeedingBucket, String> {
    SeedingBucket::from_token(s)
        .ok_or_else(|| "expected \"low\", \"mid\", or \"high\"".to_string())
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_preset)]
    preset: ModelPreset,
    /// Node count N.
    #[arg(long, default_value_t = 5000)]
    n: usize,
    /// Minority fraction m.
    #[arg(long, default_value_t = 0.2)]
    m: f64,
    /// Links per arriving node l.
    #[arg(long, default_value_t = 2)]
    l: usize,
    /// Homophily h (ignored where the preset pins it).
    #[arg(long = "h")]
    homophily: Option<f64>,
    /// Preferential-attachment exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Diversified links per node.
    #[arg(long = "l-d")]
    l_d: Option<usize>,
    /// Diversification probability.
    #[arg(long = "p-d")]
    p_d: Option<f64>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Output file name, relative to --out-dir.
    #[arg(long, default_value = "graph.tsv")]
    out: String,
}

#[derive(Args)]
struct IngestFlags {
    /// Graph file to read.
    #[arg(long)]
    graph: PathBuf,
    /// Drop nodes with unrecognized group tokens instead of failing.
    #[arg(long)]
    drop_unlabeled: bool,
    /// Reduce to the largest connected component after parsing.
    #[arg(long)]
    take_lcc: bool,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    input: IngestFlags,
    /// Output format: "json" or "csv".
    #[arg(long, default_value = "json")]
    format: String,
    /// Write to this file instead of stdout (relative to --out-dir).
    #[arg(long)]
    out: Option<String>,
    /// Node count above which distance statistics switch to sampled mode.
    #[arg(long, default_value_t = 20_000)]
    exact_limit: usize,
    /// Sources for sampled distance statistics.
    #[arg(long, default_value_t = 1000)]
    sample_sources: usize,
    #[arg(long, default_value_t = 0)]
    distance_seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: IngestFlags,
    /// Contagion kind: "simple" or "complex".
    #[arg(long, value_parser = parse_kind, default_value = "simple")]
    kind: ContagionKind,
    /// Activation threshold for complex contagion.
    #[arg(long = "a", default_value_t = 0.1)]
    activation: f64,
    #[arg(long, default_value_t = 0.7)]
    r_within: f64,
    #[arg(long, default_value_t = 0.7)]
    r_between: f64,
    /// Seed count s.
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    /// Minority seeding bucket: "low", "mid", or "high".
    #[arg(long, value_parser = parse_bucket, default_value = "low")]
    bucket: SeedingBucket,
    #[arg(long, default_value_t = 100)]
    bins: usize,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Run id written into the CSV rows.
    #[arg(long, default_value_t = 0)]
    run_id: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep spec file (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Override the spec's equality-band threshold for the summary.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct IngestCheckArgs {
    #[command(flatten)]
    input: IngestFlags,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => cmd_generate(&cli.out_dir, args),
        Command::Measure(args) => cmd_measure(&cli.out_dir, args),
        Command::Simulate(args) => cmd_simulate(&cli.out_dir, args),
        Command::Sweep(args) => cmd_sweep(&cli.out_dir, args),
        Command::IngestCheck(args) => cmd_ingest_check(args),
    }
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::internal(format!("cannot create {}: {e}", dir.display())))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn load_graph(flags: &IngestFlags) -> Result<(LabeledGraph, IngestReport), CliError> {
    let text = fs::read_to_string(&flags.graph)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", flags.graph.display())))?;
    let options = IngestOptions {
        drop_unlabeled: flags.drop_unlabeled,
        take_lcc: flags.take_lcc,
    };
    parse_graph(&text, options)
        .map_err(|e| CliError::data(format!("{} [{}]: {e}", flags.graph.display(), e.code())))
}

fn cmd_generate(out_dir: &Path, args: GenerateArgs) -> Result<(), CliError> {
    let mut config = GeneratorConfig {
        n: args.n,
        minority_fraction: args.m,
        links_per_node: args.l,
        rng_seed: args.rng_seed,
        ..GeneratorConfig::default()
    }
    .resolved_for(args.preset);
    if let Some(h) = args.homophily {
        config.homophily = h;
    }
    if let Some(alpha) = args.alpha {
        config.alpha = alpha;
    }
    if let Some(l_d) = args.l_d {
        config.diversified_links = l_d;
    }
    if let Some(p_d) = args.p_d {
        config.diversification = p_d;
    }
    config.validate().map_err(CliError::usage)?;

    let generation = generators::generate(&config).map_err(CliError::usage)?;
    ensure_out_dir(out_dir)?;
    let path = write_file(out_dir, &args.out, &write_graph(&generation.graph))?;

    let tally = generation.graph.group_tally();
    println!(
        "generated {} nodes, {} edges ({} cross-group) -> {}",
        generation.graph.node_count(),
        generation.graph.edge_count(),
        tally.e_cross,
        path.display()
    );
    let stats = generation.stats;
    if stats.uniform_fallback_nodes > 0
        || stats.skipped_attachment_links > 0
        || stats.skipped_diversified_links > 0
    {
        println!(
            "growth degeneracies: {} uniform fallbacks, {} skipped attachment links, \
             {} skipped diversified links",
            stats.uniform_fallback_nodes,
            stats.skipped_attachment_links,
            stats.skipped_diversified_links
        );
    }
    Ok(())
}

fn cmd_measure(out_dir: &Path, args: MeasureArgs) -> Result<(), CliError> {
    let (graph, _) = load_graph(&args.input)?;
    let options = MeasureOptions {
        exact_distance_limit: args.exact_limit,
        sample_sources: args.sample_sources,
        distance_seed: args.distance_seed,
    };
    let measured = MeasureReport::compute(&graph, &options).map_err(CliError::data)?;
    let rendered = match args.format.as_str() {
        "json" => report::measure_json(&measured),
        "csv" => report::measure_csv(&measured),
        other => {
            return Err(CliError::usage(format!(
                "unknown format \"{other}\"; expected json or csv"
            )))
        }
    };
    match args.out {
        Some(name) => {
            ensure_out_dir(out_dir)?;
            let path = write_file(out_dir, &name, &rendered)?;
            println!("wrote {}", path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn cmd_simulate(out_dir: &Path, args: SimulateArgs) -> Result<(), CliError> {
    let (graph, _) = load_graph(&args.input)?;
    let config = ContagionConfig {
        kind: args.kind,
        activation_threshold: args.activation,
        r_within: args.r_within,
        r_between: args.r_between,
        seed_count: args.seeds,
        bucket: args.bucket,
        max_steps: args.max_steps,
        bins: args.bins,
        rng_seed: args.rng_seed,
    };
    config.validate().map_err(CliError::usage)?;
    let trace = contagion::simulate(&graph, &config).map_err(CliError::data)?;

    ensure_out_dir(out_dir)?;
    let trace_path = write_file(out_dir, "trace.csv", &report::trace_csv(args.run_id, &trace))?;
    let efficiency = contagion::efficiency_curve(&trace, &graph);
    let efficiency_path = write_file(
        out_dir,
        "efficiency.csv",
        &report::efficiency_csv(args.run_id, &efficiency),
    )?;
    println!(
        "T = {} ({}), {} of {} seeds minority",
        trace.termination_step(),
        trace.terminal.token(),
        trace.seed_minority_count,
        trace.seeds.len()
    );
    println!("wrote {}", trace_path.display());
    println!("wrote {}", efficiency_path.display());
    match contagion::equality_curve(&trace, &graph, config.bins) {
        Ok(curve) => {
            let path = write_file(
                out_dir,
                "equality.csv",
                &report::equality_csv(args.run_id, &curve),
            )?;
            println!("wrote {}", path.display());
        }
        Err(err) => eprintln!("equality curve skipped: {err}"),
    }
    Ok(())
}

fn cmd_sweep(out_dir: &Path, args: SweepArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.spec)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", args.spec.display())))?;
    let file = SweepFile::parse(&text)?;
    let base_dir = args.spec.parent().unwrap_or_else(|| Path::new("."));
    let spec = file.resolve(base_dir)?;
    let epsilon = args.epsilon.unwrap_or(file.equality_epsilon);
    if epsilon <= 0.0 {
        return Err(CliError::usage("epsilon must be positive"));
    }

    let started = Instant::now();
    let output = run_sweep(&spec).map_err(CliError::data)?;
    let sweep_ms = started.elapsed().as_millis();
    if output.row_labels.is_empty() {
        let detail: Vec<String> = output
            .diagnostics
            .iter()
            .map(|d| format!("{}: {}", d.label, d.message))
            .collect();
        return Err(CliError::data(format!(
            "every sweep row failed: {}",
            detail.join("; ")
        )));
    }

    ensure_out_dir(out_dir)?;
    let spec_json = serde_json::to_value(&file)
        .map_err(|e| CliError::internal(format!("spec serialization: {e}")))?;
    let mut manifest = RunManifest::new(spec.master_seed, spec_json);
    manifest.diagnostics = output.diagnostics.clone();
    let mut written: Vec<PathBuf> = Vec::new();

    let write_tracked = |name: String,
                         contents: String,
                         manifest: &mut RunManifest,
                         written: &mut Vec<PathBuf>|
     -> Result<(), CliError> {
        match write_file(out_dir, &name, &contents) {
            Ok(path) => {
                manifest.record_output(name, contents.as_bytes());
                written.push(path);
                Ok(())
            }
            Err(err) => {
                for path in written.iter() {
                    let _ = fs::remove_file(path);
                }
                Err(err)
            }
        }
    };

    let writing = Instant::now();
    let mut summary = String::from("cell,row,time_to_equality\n");
    for cell in &output.cells {
        let label = cell.cell.label();
        for (matrix, stem) in [(&cell.equality, "equality"), (&cell.efficiency, "efficiency")] {
            write_tracked(
                format!("{stem}-{label}.csv"),
                report::heatmap_csv(matrix),
                &mut manifest,
                &mut written,
            )?;
            write_tracked(
                format!("{stem}-{label}.stderr.csv"),
                report::heatmap_stderr_csv(matrix),
                &mut manifest,
                &mut written,
            )?;
            write_tracked(
                format!("{stem}-{label}.svg"),
                svg::heatmap_svg(matrix, &format!("{stem} {label}")),
                &mut manifest,
                &mut written,
            )?;
        }
        append_summary(&mut summary, &label, &cell.equality, epsilon);
    }
    write_tracked("summary.csv".to_string(), summary, &mut manifest, &mut written)?;

    manifest.timings_ms.insert("sweep".to_string(), sweep_ms);
    manifest
        .timings_ms
        .insert("write".to_string(), writing.elapsed().as_millis());
    write_file(out_dir, "manifest.json", &manifest.to_json())?;

    println!(
        "{} rows x {} cells -> {} files in {}",
        output.row_labels.len(),
        output.cells.len(),
        manifest.outputs.len() + 1,
        out_dir.display()
    );
    for diag in &output.diagnostics {
        eprintln!("row {} skipped: {}", diag.label, diag.message);
    }
    Ok(())
}

/// Per-row settling time of the mean curve, for the sweep summary.
fn append_summary(summary: &mut String, cell_label: &str, matrix: &HeatmapMatrix, epsilon: f64) {
    use fairnet_core::contagion::EqualityCurve;
    for (row, values) in matrix.rows.iter().zip(matrix.values.iter()) {
        let curve = EqualityCurve {
            delta: values.clone(),
            frac_maj: vec![0.0; values.len()],
            frac_min: vec![0.0; values.len()],
        };
        let settled = time_to_equality(&curve, epsilon)
            .map(|t| format!("{t}"))
            .unwrap_or_default();
        summary.push_str(&format!("{cell_label},{row},{settled}\n"));
    }
}

fn cmd_ingest_check(args: IngestCheckArgs) -> Result<(), CliError> {
    let (graph, ingest) = load_graph(&args.input)?;
    let tally = graph.group_tally();
    println!("nodes declared:        {}", ingest.nodes_declared);
    println!("unlabeled dropped:     {}", ingest.nodes_dropped_unlabeled);
    println!("edges declared:        {}", ingest.edges_declared);
    println!("edges dropped:         {}", ingest.edges_dropped_unlabeled);
    println!("components:            {}", ingest.component_count);
    println!("largest component:     {}", ingest.largest_component);
    println!("took lcc:              {}", ingest.took_lcc);
    println!(
        "final graph:           {} nodes ({} maj / {} min), {} edges",
        graph.node_count(),
        tally.n_maj,
        tally.n_min,
        graph.edge_count()
    );
    println!(
        "edge composition:      {} maj-maj, {} min-min, {} cross",
        tally.e_mm, tally.e_nn, tally.e_cross
    );
    Ok(())
}
