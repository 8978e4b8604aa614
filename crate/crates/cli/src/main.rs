use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use netboot::cv::{ProxySampling, ProxyStatistic};
use netboot::{
    boot_ci, boot_dd, bootstrap_statistics, compare_densities, configuration_model, gamma_fragility, graph_stats,
    load_adjacency_matrix, load_edge_list, lsmi, lsmi_cv, lsmi_dd, run_coverage, sample_degree_sequence, write_edge_list,
    AdjacencyMatrix, CoverageConfig, CvConfig, DegreeDistribution, EdgeList, IntervalMethod, Patch, Seeds, StreamKey,
    VertexStatistic,
};

#[derive(Parser)]
#[command(name = "netboot", version, about = "Patchwork and vertex bootstrap inference on networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a polylogarithmic configuration-model graph as an edge list
    Generate {
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
    },
    /// Order, size, density, mean degree and transitivity of an edge list
    Stats {
        #[arg(long)]
        graph: PathBuf,
        /// Also fit the fragility parameter to the degree CCDF
        #[arg(long)]
        gamma: bool,
    },
    /// Grow a patch of snowball samples and print it as JSON
    Lsmi {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with = "seeds")]
        n_seed: Option<usize>,
        /// Explicit seed vertices, by their ids in the edge list
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long)]
        n_wave: usize,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
    },
    /// Degree distribution estimate from a patch file
    Estimate {
        #[arg(long)]
        patch: PathBuf,
    },
    /// Weighted bootstrap intervals from a patch file
    Bootstrap {
        #[arg(long)]
        patch: PathBuf,
        #[arg(long = "B", default_value_t = 100)]
        b: usize,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, value_enum, default_value_t = CiMethod::Percentile)]
        ci_method: CiMethod,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
    },
    /// Patchwork bootstrap with cross-validated seed-wave combination
    Patchwork {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        n_seeds: Vec<usize>,
        #[arg(long)]
        n_wave: usize,
        #[arg(long = "B", default_value_t = 100)]
        b: usize,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, default_value_t = 19)]
        proxy_reps: usize,
        #[arg(long, default_value_t = 30)]
        proxy_size: usize,
        /// Draw proxy samples with replacement
        #[arg(long)]
        proxy_replace: bool,
        #[arg(long, value_enum, default_value_t = ProxyKind::Weighted)]
        proxy_statistic: ProxyKind,
        #[arg(long, default_value_t = 1)]
        patch_repeats: usize,
        #[arg(long, value_enum, default_value_t = CiMethod::Percentile)]
        ci_method: CiMethod,
        /// Report the mean degree or the density mu / (n - 1)
        #[arg(long, value_enum, default_value_t = Target::Mu)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
    },
    /// Vertex bootstrap of statistics of an adjacency matrix
    Vertboot {
        #[arg(long)]
        matrix: PathBuf,
        /// Header lines to skip before the matrix entries
        #[arg(long, default_value_t = 0)]
        skip: usize,
        #[arg(long)]
        directed: bool,
        #[arg(long = "B", default_value_t = 500)]
        b: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "density")]
        stat: Vec<Stat>,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
        /// Write every replicate value to this CSV file
        #[arg(long)]
        replicates_out: Option<PathBuf>,
    },
    /// Pairwise density comparison of several networks
    Compare {
        #[arg(long, num_args = 2.., required = true)]
        matrix: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        skip: usize,
        #[arg(long)]
        directed: bool,
        #[arg(long = "B", default_value_t = 500)]
        b: usize,
        #[arg(long, default_value_t = 1)]
        rng_seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Monte Carlo coverage experiment
    Coverage {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads; 0 uses every core
        #[arg(long, env = "NETBOOT_WORKERS", default_value_t = 0)]
        workers: usize,
        /// Write the CSV table here instead of standard output
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the per-replication JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CiMethod {
    Percentile,
    Basic,
}

impl From<CiMethod> for IntervalMethod {
    fn from(m: CiMethod) -> Self {
        match m {
            CiMethod::Percentile => IntervalMethod::Percentile,
            CiMethod::Basic => IntervalMethod::Basic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProxyKind {
    Weighted,
    Mean,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Target {
    Mu,
    Density,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    Density,
    MeanDegree,
    Transitivity,
}

impl From<Stat> for VertexStatistic {
    fn from(s: Stat) -> Self {
        match s {
            Stat::Density => VertexStatistic::Density,
            Stat::MeanDegree => VertexStatistic::MeanDegree,
            Stat::Transitivity => VertexStatistic::Transitivity,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<netboot::Error> for Failure {
    fn from(e: netboot::Error) -> Self {
        Failure { code: if e.is_input_error() { 1 } else { 2 }, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn input_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", path.display()) }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| input_failure(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| input_failure(path, e))
}

fn read_graph(path: &Path) -> Result<EdgeList, Failure> {
    load_edge_list(open(path)?).map_err(|e| input_failure(path, e))
}

fn read_matrix(path: &Path, skip: usize, directed: bool) -> Result<AdjacencyMatrix, Failure> {
    match load_adjacency_matrix(open(path)?, skip, directed) {
        Ok(load) => Ok(load.matrix),
        Err(e) => Err(Failure { code: if e.is_input_error() { 1 } else { 2 }, message: format!("{}: {e}", path.display()) }),
    }
}

fn read_patch(path: &Path) -> Result<Patch, Failure> {
    let patch: Patch = serde_json::from_reader(open(path)?).map_err(|e| input_failure(path, e))?;
    patch.validate().map_err(|e| input_failure(path, e))?;
    Ok(patch)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    writeln!(out)?;
    Ok(())
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Replaces internal vertex indices with the ids used in the input file.
fn relabel_patch(patch: &mut Patch, ids: &[u64]) {
    for l in &mut patch.lsmis {
        l.seed = ids[l.seed] as usize;
        for wave in &mut l.waves {
            for inc in wave {
                inc.id = ids[inc.id] as usize;
                inc.via = inc.via.map(|v| ids[v] as usize);
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate { delta, lambda, order, out, rng_seed } => {
            let dist = DegreeDistribution::polylog(delta, lambda)?;
            let mut rng = StreamKey::new(rng_seed).rng();
            let degrees = sample_degree_sequence(&dist, order, &mut rng)?;
            let (g, cleanup) = configuration_model(&degrees, &mut rng)?;
            let mut w = create(&out)?;
            write_edge_list(&g, &mut w)?;
            w.flush()?;
            #[derive(Serialize)]
            struct Summary {
                order: usize,
                size: usize,
                mean_degree: f64,
                distribution_mean: f64,
                self_loops_erased: usize,
                duplicates_erased: usize,
            }
            print_json(&Summary {
                order: g.order(),
                size: g.size(),
                mean_degree: g.mean_degree(),
                distribution_mean: dist.mean(),
                self_loops_erased: cleanup.self_loops,
                duplicates_erased: cleanup.duplicates,
            })
        }
        Command::Stats { graph, gamma } => {
            let g = read_graph(&graph)?.graph;
            let mut stats = graph_stats(&g);
            if gamma {
                stats.gamma = Some(gamma_fragility(&g)?.gamma);
            }
            print_json(&stats)
        }
        Command::Lsmi { graph, n_seed, seeds, n_wave, rng_seed } => {
            let edges = read_graph(&graph)?;
            let seeds = match n_seed {
                Some(n) => Seeds::Random(n),
                None if seeds.is_empty() => return Err(invalid("give --n-seed or --seeds")),
                None => Seeds::Explicit(
                    seeds
                        .iter()
                        .map(|id| {
                            edges.original_ids.iter().position(|x| x == id).ok_or_else(|| invalid(format!("no vertex {id}")))
                        })
                        .collect::<Result<_, _>>()?,
                ),
            };
            let mut patch = lsmi(&edges.graph, seeds, n_wave, &mut StreamKey::new(rng_seed).rng())?;
            relabel_patch(&mut patch, &edges.original_ids);
            print_json(&patch)
        }
        Command::Estimate { patch } => print_json(&lsmi_dd(&read_patch(&patch)?)?),
        Command::Bootstrap { patch, b, level, ci_method, rng_seed } => {
            let est = lsmi_dd(&read_patch(&patch)?)?;
            let boot = boot_dd(&est, b, &mut StreamKey::new(rng_seed).rng())?;
            let intervals = boot_ci(&boot, &est, level, ci_method.into())?;
            #[derive(Serialize)]
            struct Out {
                #[serde(rename = "B")]
                b: usize,
                estimate: netboot::DegreeDistributionEstimate,
                intervals: netboot::BootIntervals,
            }
            print_json(&Out { b, estimate: est, intervals })
        }
        Command::Patchwork {
            graph,
            n_seeds,
            n_wave,
            b,
            level,
            proxy_reps,
            proxy_size,
            proxy_replace,
            proxy_statistic,
            patch_repeats,
            ci_method,
            target,
            rng_seed,
        } => {
            let edges = read_graph(&graph)?;
            let cfg = CvConfig {
                b,
                level,
                proxy_reps,
                proxy_size,
                method: ci_method.into(),
                proxy_sampling: if proxy_replace { ProxySampling::WithReplacement } else { ProxySampling::WithoutReplacement },
                proxy_statistic: match proxy_statistic {
                    ProxyKind::Weighted => ProxyStatistic::Weighted,
                    ProxyKind::Mean => ProxyStatistic::Mean,
                },
                patch_repeats,
                ..CvConfig::new(n_seeds, n_wave)
            };
            let mut res = lsmi_cv(&edges.graph, &cfg, &mut StreamKey::new(rng_seed).rng())?;
            if target == Target::Density {
                res = res.to_density(edges.graph.order())?;
            }
            res.seeds = res.seeds.iter().map(|&s| edges.original_ids[s] as usize).collect();
            print_json(&res)
        }
        Command::Vertboot { matrix, skip, directed, b, stat, level, rng_seed, replicates_out } => {
            let a = read_matrix(&matrix, skip, directed)?;
            let stats: Vec<VertexStatistic> = stat.into_iter().map(Into::into).collect();
            let mut out = bootstrap_statistics(&a, b, &stats, level, &mut StreamKey::new(rng_seed).rng())?;
            if let Some(path) = replicates_out {
                let mut w = create(&path)?;
                let header: Vec<String> =
                    out.iter().map(|s| serde_json::to_value(s.stat).unwrap().as_str().unwrap_or_default().to_string()).collect();
                writeln!(w, "{}", header.join(","))?;
                for i in 0..b {
                    let row: Vec<String> = out.iter().map(|s| s.replicates[i].to_string()).collect();
                    writeln!(w, "{}", row.join(","))?;
                }
                w.flush()?;
                let shown = path.display().to_string();
                out.iter_mut().for_each(|s| s.replicates_path = Some(shown.clone()));
            }
            print_json(&out)
        }
        Command::Compare { matrix, skip, directed, b, rng_seed, format } => {
            let matrices = matrix.iter().map(|p| read_matrix(p, skip, directed)).collect::<Result<Vec<_>, _>>()?;
            let rows = compare_densities(&matrices, b, &mut StreamKey::new(rng_seed).rng())?;
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        networks: Vec<String>,
                        comparisons: &'a [netboot::vertex::DensityComparison],
                    }
                    print_json(&Out { networks: matrix.iter().map(|p| p.display().to_string()).collect(), comparisons: &rows })
                }
                Format::Csv => {
                    let mut out = io::stdout().lock();
                    writeln!(out, "a,b,density_a,density_b,se_a,se_b,z,p_value,degenerate_se")?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{}",
                            matrix[r.a].display(),
                            matrix[r.b].display(),
                            r.density_a,
                            r.density_b,
                            r.se_a,
                            r.se_b,
                            r.z,
                            r.p_value,
                            r.degenerate_se
                        )?;
                    }
                    Ok(())
                }
            }
        }
        Command::Coverage { config, workers, csv, json } => {
            let cfg: CoverageConfig = serde_json::from_reader(open(&config)?).map_err(|e| input_failure(&config, e))?;
            let report = run_coverage(&cfg, workers)?;
            let table = format!("{}\n{}\n", netboot::montecarlo::CSV_HEADER, report.csv_row());
            match csv {
                Some(path) => {
                    let mut w = create(&path)?;
                    w.write_all(table.as_bytes())?;
                    w.flush()?;
                }
                None => io::stdout().lock().write_all(table.as_bytes())?,
            }
            if let Some(path) = json {
                let mut w = create(&path)?;
                serde_json::to_writer_pretty(&mut w, &report).map_err(|e| Failure { code: 1, message: e.to_string() })?;
                writeln!(w)?;
                w.flush()?;
            }
            Ok(())
        }
    }
}
