//! Command-line front end: inspect instances, run individual pipeline
//! stages, solve single instances, and drive full benchmark suites.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use achci::bench::{ensure_corpus, run_experiment, run_suite, RunConfig};
use achci::geometry::generate_separators;
use achci::heuristics::{achci, brute_force_optimal, nearest_neighbor, nearest_neighbor_best, Tour};
use achci::mds::{embed_2d, embedding_stress, gram_from_costs};
use achci::plot::{scatter_svg, tour_svg};
use achci::shortest_paths::{all_pairs_costs, build_visibility_graph, deviation_factor, CostMatrix};
use achci::tsplib::load_instance;

#[derive(Parser)]
#[command(name = "achci", about = "Convex-hull cheapest insertion for TSPs with blocked paths", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algo {
    Achci,
    Nn,
    NnBest,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a TSPLIB file and print a summary.
    Parse { file: PathBuf },
    /// Generate any missing benchmark instances listed in the config.
    GenInstances {
        #[arg(long, default_value = "bench.toml")]
        config: PathBuf,
    },
    /// Write the separator set for an instance as JSON.
    Separators {
        file: PathBuf,
        #[arg(short, default_value_t = 0)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the true-path cost matrix and report the deviation factor.
    Costs {
        file: PathBuf,
        #[arg(short, default_value_t = 0)]
        k: usize,
        /// Save the matrix in binary form.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Embed the cost matrix to 2D and report spectrum and stress.
    Embed {
        file: PathBuf,
        #[arg(short, default_value_t = 0)]
        k: usize,
        /// Write a scatter plot of the embedding.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Solve one instance and print the tour.
    Solve {
        file: PathBuf,
        #[arg(short, default_value_t = 0)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Algo::Achci)]
        algo: Algo,
        /// NN start node, 1-based.
        #[arg(long, default_value_t = 1)]
        start: usize,
        /// Draw the instance, separators, and tour.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the full benchmark suite from a config file.
    Bench {
        #[arg(long, default_value = "bench.toml")]
        config: PathBuf,
        /// Run one named instance for every configured k instead of the
        /// whole manifest.
        #[arg(long)]
        only: Option<String>,
    },
}

fn costs_for(file: &PathBuf, k: usize) -> Result<(achci::tsplib::Instance, achci::geometry::SeparatorSet, CostMatrix)> {
    let inst = load_instance(file).with_context(|| format!("loading {}", file.display()))?;
    let seps = generate_separators(&inst, k)?;
    let g = build_visibility_graph(&inst, &seps)?;
    let c = all_pairs_costs(&g)?;
    Ok((inst, seps, c))
}

fn print_tour(label: &str, t: &Tour) {
    let order: Vec<String> = t.order.iter().map(|v| (v + 1).to_string()).collect();
    println!("{label} cost {:.6}", t.cost);
    println!("  order (1-based): {}", order.join(" "));
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Parse { file } => {
            let inst = load_instance(&file)?;
            let xs: Vec<f64> = inst.coords.iter().map(|p| p.x).collect();
            let ys: Vec<f64> = inst.coords.iter().map(|p| p.y).collect();
            let minmax = |v: &[f64]| {
                (v.iter().cloned().fold(f64::INFINITY, f64::min),
                 v.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
            };
            let (x0, x1) = minmax(&xs);
            let (y0, y1) = minmax(&ys);
            println!("{}: {} nodes, x in [{x0}, {x1}], y in [{y0}, {y1}]", inst.name, inst.n());
        }
        Command::GenInstances { config } => {
            let cfg = RunConfig::load(&config)?;
            let written = ensure_corpus(&cfg)?;
            println!("{written} instance(s) written to {}", cfg.data_dir.display());
        }
        Command::Separators { file, k, output } => {
            let inst = load_instance(&file)?;
            let seps = generate_separators(&inst, k)?;
            let json = serde_json::to_string_pretty(&seps)?;
            match output {
                Some(path) => fs::write(&path, json + "\n")?,
                None => println!("{json}"),
            }
        }
        Command::Costs { file, k, output } => {
            let (inst, _, c) = costs_for(&file, k)?;
            let df = deviation_factor(&c, &inst)?;
            println!("{} k={k}: n={}, deviation factor {df:.6}", inst.name, c.n());
            if let Some(path) = output {
                c.save(&path)?;
                println!("matrix written to {}", path.display());
            }
        }
        Command::Embed { file, k, svg } => {
            let (inst, _, c) = costs_for(&file, k)?;
            let gram = gram_from_costs(&c)?;
            let e = embed_2d(&gram)?;
            println!(
                "{} k={k}: eigenvalues ({:.4}, {:.4}), {} clamped (mass {:.4}), stress {:.6}",
                inst.name,
                e.eigenvalues.0,
                e.eigenvalues.1,
                e.spectrum.clamped,
                e.spectrum.negative_mass,
                embedding_stress(&c, &e)
            );
            if let Some(path) = svg {
                let pts: Vec<(f64, f64)> = e.coords.iter().map(|p| (p.x, p.y)).collect();
                let title = format!("{} MDS embedding (k = {k})", inst.name);
                fs::write(&path, scatter_svg(&pts, "x", "y", &title))?;
            }
        }
        Command::Solve { file, k, algo, start, svg } => {
            let (inst, seps, c) = costs_for(&file, k)?;
            let tour = match algo {
                Algo::Achci => {
                    let gram = gram_from_costs(&c)?;
                    let e = embed_2d(&gram)?;
                    let t = achci(&c, &e)?;
                    print_tour("ACHCI", &t);
                    t
                }
                Algo::Nn => {
                    let s = start
                        .checked_sub(1)
                        .filter(|&s| s < c.n())
                        .with_context(|| format!("start {start} out of range 1..={}", c.n()))?;
                    let t = nearest_neighbor(&c, s);
                    print_tour("NN", &t);
                    t
                }
                Algo::NnBest => {
                    let (t, s) = nearest_neighbor_best(&c);
                    print_tour(&format!("NN (best start {})", s + 1), &t);
                    t
                }
                Algo::Brute => {
                    let t = brute_force_optimal(&c)?;
                    print_tour("optimal", &t);
                    t
                }
            };
            if let Some(path) = svg {
                fs::write(&path, tour_svg(&inst, &seps, Some(&tour)))?;
            }
        }
        Command::Bench { config, only } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(name) = &only {
                cfg.instances.retain(|s| &s.name == name);
                if cfg.instances.is_empty() {
                    bail!("instance {name:?} not in config manifest");
                }
            }
            ensure_corpus(&cfg)?;
            if only.is_some() {
                let inst = load_instance(&cfg.data_dir.join(format!("{}.tsp", cfg.instances[0].name)))?;
                for &k in &cfg.k_values {
                    let row = run_experiment(&inst, k, &cfg)?;
                    println!(
                        "{} n={} k={}: df {:.4}, nn {:.3}, achci {:.3}, reduction {:.2}%",
                        row.instance, row.n, row.k, row.df, row.nn_cost, row.achci_cost, row.reduction_pct
                    );
                }
            } else {
                let report = run_suite(&cfg)?;
                println!(
                    "{} rows ({} failed): win rate {:.1}%, mean reduction {:.2}%",
                    report.summary.rows,
                    report.failures.len(),
                    100.0 * report.summary.win_rate,
                    report.summary.mean_reduction_pct
                );
                if let Some(b) = report.summary.runtime_fit_exponent {
                    println!("runtime fit exponent {b:.2}");
                }
                for (name, k, msg) in &report.failures {
                    eprintln!("failed: {name} k={k}: {msg}");
                }
                println!("reports in {}", cfg.output_dir.display());
            }
        }
    }
    Ok(())
}
