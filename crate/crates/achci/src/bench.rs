//! Benchmark orchestration: configuration, the per-row experiment pipeline,
//! suite execution with cost-matrix caching, and CSV/JSON/SVG reports.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{generate_separators, Point, SeparatorSet};
use crate::heuristics::{achci, nearest_neighbor, nearest_neighbor_best};
use crate::mds::{embed_2d, gram_from_costs};
use crate::plot;
use crate::shortest_paths::{all_pairs_costs, build_visibility_graph, deviation_factor, CostMatrix};
use crate::tsplib::{load_instance, save_instance, Instance};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config {path}: {msg}")]
    BadConfig { path: String, msg: String },
    #[error("{instance} (k = {k}): {msg}")]
    Row { instance: String, k: usize, msg: String },
    #[error("report row {line}: {msg}")]
    BadReportRow { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One manifest entry: an instance name and its expected node count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub name: String,
    pub n: usize,
}

/// Suite configuration. The pipeline is RNG-free; corpus generation is
/// seeded from instance names, so no seed field is needed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    pub k_values: Vec<usize>,
    /// 1-based NN start node; ignored when `nn_best_of_all` is set.
    #[serde(default = "default_nn_start")]
    pub nn_start: usize,
    #[serde(default)]
    pub nn_best_of_all: bool,
    /// When disabled, timing columns are written as zero so reports are
    /// byte-identical across runs.
    #[serde(default = "default_true")]
    pub timings: bool,
    /// Drop manifest entries with more nodes than this.
    #[serde(default)]
    pub max_n: Option<usize>,
    pub instances: Vec<InstanceSpec>,
}

fn default_nn_start() -> usize {
    1
}

fn default_true() -> bool {
    true
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, BenchError> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| BenchError::BadConfig {
            path: path.display().to_string(),
            msg: e.to_string(),
        })
    }

    /// Manifest after the `max_n` filter, in declaration order.
    pub fn selected_instances(&self) -> Vec<&InstanceSpec> {
        self.instances
            .iter()
            .filter(|s| self.max_n.map_or(true, |m| s.n <= m))
            .collect()
    }
}

/// One Table-1-style cell: both heuristics on one (instance, k) scene.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub df: f64,
    pub nn_cost: f64,
    pub achci_cost: f64,
    pub reduction_pct: f64,
    pub nn_time_s: f64,
    pub achci_time_s: f64,
}

pub const ROW_CSV_HEADER: &str =
    "instance,n,k,df,nn_cost,achci_cost,reduction_pct,nn_time_s,achci_time_s";

impl ExperimentRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.n,
            self.k,
            self.df,
            self.nn_cost,
            self.achci_cost,
            self.reduction_pct,
            self.nn_time_s,
            self.achci_time_s
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub rows: usize,
    pub wins: usize,
    pub win_rate: f64,
    pub mean_reduction_pct: f64,
    pub runtime_fit_exponent: Option<f64>,
}

#[derive(Debug)]
pub struct SuiteReport {
    pub rows: Vec<ExperimentRow>,
    pub failures: Vec<(String, usize, String)>,
    pub summary: SuiteSummary,
}

/// Deterministic per-name seed for corpus generation.
fn name_seed(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Generate a deterministic point cloud seeded by the instance name: a
/// jittered grid on roughly [0, 1000]² with random gaps, after the
/// drilled-board layouts common in the TSPLIB families the manifest is
/// named for. Coordinates are rounded to 4 decimals; duplicates rejected.
pub fn generate_instance(name: &str, n: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(name_seed(name));
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    let cols = (n as f64).sqrt().ceil() as usize;
    let step = 1000.0 / cols as f64;
    let mut row = 0usize;
    while coords.len() < n {
        for col in 0..cols {
            if coords.len() == n {
                break;
            }
            // Random gaps in the nominal rows; later overflow rows are kept
            // dense so generation always terminates.
            if row < cols + 2 && rng.gen_bool(0.25) {
                continue;
            }
            let x = col as f64 * step + rng.gen_range(0.0..step * 0.4);
            let y = row as f64 * step + rng.gen_range(0.0..step * 0.4);
            let xq = (x * 1e4).round() / 1e4;
            let yq = (y * 1e4).round() / 1e4;
            if seen.insert((xq.to_bits(), yq.to_bits())) {
                coords.push(Point::new(xq, yq));
            }
        }
        row += 1;
    }
    Instance::new(name, coords).expect("generated coordinates are finite")
}

/// Materialize every missing manifest instance under `data_dir`. Existing
/// files (for example real TSPLIB data dropped in by the user) are kept.
pub fn ensure_corpus(config: &RunConfig) -> Result<usize, BenchError> {
    fs::create_dir_all(&config.data_dir)?;
    let mut written = 0;
    for spec in config.selected_instances() {
        let path = config.data_dir.join(format!("{}.tsp", spec.name));
        if !path.exists() {
            let inst = generate_instance(&spec.name, spec.n);
            save_instance(&inst, &path).map_err(|e| BenchError::Row {
                instance: spec.name.clone(),
                k: 0,
                msg: e.to_string(),
            })?;
            written += 1;
        }
    }
    Ok(written)
}

/// Compute (or load from cache) the true-path cost matrix for an instance
/// with `k` separators.
pub fn cost_matrix_cached(
    inst: &Instance,
    seps: &SeparatorSet,
    cache_dir: Option<&Path>,
) -> Result<CostMatrix, String> {
    let cache_path = cache_dir.map(|d| d.join(format!("{}.k{}.acm", inst.name, seps.k)));
    if let Some(path) = &cache_path {
        if path.exists() {
            match CostMatrix::load(path) {
                Ok(c) if c.n() == inst.n() => return Ok(c),
                Ok(_) => log::warn!("cache {} has wrong size; recomputing", path.display()),
                Err(e) => log::warn!("cache {}: {e}; recomputing", path.display()),
            }
        }
    }
    let g = build_visibility_graph(inst, seps).map_err(|e| e.to_string())?;
    let c = all_pairs_costs(&g).map_err(|e| e.to_string())?;
    if let Some(path) = &cache_path {
        if let Some(dir) = path.parent() {
            let _ = fs::create_dir_all(dir);
        }
        if let Err(e) = c.save(path) {
            log::warn!("failed to write cache {}: {e}", path.display());
        }
    }
    Ok(c)
}

/// Full pipeline for one (instance, k) cell: separators, true costs,
/// deviation factor, NN, and ACHCI. ACHCI time covers the Gram build,
/// eigendecomposition, hull, and insertions; the shared Dijkstra phase is
/// deliberately not attributed to either heuristic.
pub fn run_experiment(
    inst: &Instance,
    k: usize,
    config: &RunConfig,
) -> Result<ExperimentRow, BenchError> {
    let fail = |msg: String| BenchError::Row { instance: inst.name.clone(), k, msg };

    let seps = generate_separators(inst, k).map_err(|e| fail(e.to_string()))?;
    let c = cost_matrix_cached(inst, &seps, config.cache_dir.as_deref()).map_err(fail)?;
    let df = deviation_factor(&c, inst).map_err(|e| fail(e.to_string()))?;

    let t0 = Instant::now();
    let nn = if config.nn_best_of_all {
        nearest_neighbor_best(&c).0
    } else {
        let start = config.nn_start.checked_sub(1).filter(|&s| s < c.n()).ok_or_else(|| {
            fail(format!("nn_start {} out of range 1..={}", config.nn_start, c.n()))
        })?;
        nearest_neighbor(&c, start)
    };
    let nn_time = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let gram = gram_from_costs(&c).map_err(|e| fail(e.to_string()))?;
    let embedding = embed_2d(&gram).map_err(|e| fail(e.to_string()))?;
    let tour = achci(&c, &embedding).map_err(|e| fail(e.to_string()))?;
    let achci_time = t1.elapsed().as_secs_f64();

    Ok(ExperimentRow {
        instance: inst.name.clone(),
        n: inst.n(),
        k,
        df,
        nn_cost: nn.cost,
        achci_cost: tour.cost,
        reduction_pct: 100.0 * (nn.cost - tour.cost) / nn.cost,
        nn_time_s: if config.timings { nn_time } else { 0.0 },
        achci_time_s: if config.timings { achci_time } else { 0.0 },
    })
}

/// Least-squares power-law fit t = a·n^b over (n, t) samples with t > 0;
/// returns (exponent b, intercept ln a).
pub fn fit_power_law(samples: &[(f64, f64)]) -> Option<(f64, f64)> {
    let logs: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(n, t)| n > 0.0 && t > 0.0)
        .map(|&(n, t)| (n.ln(), t.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let m = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let b = (m * sxy - sx * sy) / denom;
    let a = (sy - b * sx) / m;
    Some((b, a))
}

/// Run every (instance, k) cell of the manifest. Rows execute in a worker
/// pool; per-row failures are recorded and the suite continues. Reports are
/// written to `output_dir`.
pub fn run_suite(config: &RunConfig) -> Result<SuiteReport, BenchError> {
    fs::create_dir_all(&config.output_dir)?;
    let selected = config.selected_instances();

    // Parse instances up front so a bad file fails its rows, not the suite.
    let loaded: Vec<Result<Instance, String>> = selected
        .iter()
        .map(|spec| {
            load_instance(&config.data_dir.join(format!("{}.tsp", spec.name)))
                .map_err(|e| e.to_string())
        })
        .collect();

    let cells: Vec<(usize, usize)> = (0..selected.len())
        .flat_map(|i| config.k_values.iter().map(move |&k| (i, k)))
        .collect();

    let results: Vec<Result<ExperimentRow, BenchError>> = cells
        .par_iter()
        .map(|&(i, k)| match &loaded[i] {
            Ok(inst) => run_experiment(inst, k, config),
            Err(e) => Err(BenchError::Row {
                instance: selected[i].name.clone(),
                k,
                msg: e.clone(),
            }),
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (idx, res) in results.into_iter().enumerate() {
        match res {
            Ok(row) => rows.push(row),
            Err(e) => {
                let (i, k) = cells[idx];
                log::error!("row failed: {e}");
                failures.push((selected[i].name.clone(), k, e.to_string()));
            }
        }
    }

    let summary = summarize(&rows);
    write_reports(config, &rows, &summary)?;
    Ok(SuiteReport { rows, failures, summary })
}

pub fn summarize(rows: &[ExperimentRow]) -> SuiteSummary {
    let wins = rows.iter().filter(|r| r.reduction_pct > 0.0).count();
    let mean = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.reduction_pct).sum::<f64>() / rows.len() as f64
    };
    let samples: Vec<(f64, f64)> =
        rows.iter().map(|r| (r.n as f64, r.achci_time_s)).collect();
    SuiteSummary {
        rows: rows.len(),
        wins,
        win_rate: if rows.is_empty() { 0.0 } else { wins as f64 / rows.len() as f64 },
        mean_reduction_pct: mean,
        runtime_fit_exponent: fit_power_law(&samples).map(|(b, _)| b),
    }
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(ROW_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ExperimentRow>, BenchError> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line != ROW_CSV_HEADER {
                return Err(BenchError::BadReportRow {
                    line: 1,
                    msg: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(BenchError::BadReportRow {
                line: idx + 1,
                msg: format!("expected 9 fields, got {}", fields.len()),
            });
        }
        let bad = |msg: String| BenchError::BadReportRow { line: idx + 1, msg };
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
        rows.push(ExperimentRow {
            instance: fields[0].to_string(),
            n: fields[1].parse().map_err(|e| bad(format!("n: {e}")))?,
            k: fields[2].parse().map_err(|e| bad(format!("k: {e}")))?,
            df: num(fields[3])?,
            nn_cost: num(fields[4])?,
            achci_cost: num(fields[5])?,
            reduction_pct: num(fields[6])?,
            nn_time_s: num(fields[7])?,
            achci_time_s: num(fields[8])?,
        });
    }
    Ok(rows)
}

/// Write rows.csv, summary.json, and the three SVG report plots.
pub fn write_reports(
    config: &RunConfig,
    rows: &[ExperimentRow],
    summary: &SuiteSummary,
) -> Result<(), BenchError> {
    fs::create_dir_all(&config.output_dir)?;
    fs::write(config.output_dir.join("rows.csv"), rows_to_csv(rows))?;
    let json = serde_json::to_string_pretty(summary).expect("summary serializes");
    fs::write(config.output_dir.join("summary.json"), json + "\n")?;
    write_plots(&config.output_dir, rows)?;
    Ok(())
}

pub fn write_plots(dir: &Path, rows: &[ExperimentRow]) -> Result<(), BenchError> {
    let ratios: Vec<f64> = rows.iter().map(|r| r.achci_cost / r.nn_cost).collect();
    let scatter: Vec<(f64, f64)> =
        rows.iter().zip(&ratios).map(|(r, &ratio)| (r.df, ratio)).collect();
    fs::write(
        dir.join("scatter.svg"),
        plot::scatter_svg(
            &scatter,
            "deviation factor",
            "ACHCI / NN cost ratio",
            "Tour cost ratio vs deviation factor",
        ),
    )?;
    fs::write(
        dir.join("histogram.svg"),
        plot::histogram_svg(&ratios, 20, "ACHCI / NN cost ratio", "Tour cost ratio"),
    )?;
    let samples: Vec<(f64, f64)> =
        rows.iter().map(|r| (r.n as f64, r.achci_time_s)).collect();
    let (exponent, intercept) = fit_power_law(&samples).unwrap_or((0.0, 0.0));
    fs::write(
        dir.join("runtime.svg"),
        plot::loglog_runtime_svg(
            &samples,
            exponent,
            intercept,
            &format!("ACHCI runtime (fitted exponent {exponent:.2})"),
        ),
    )?;
    Ok(())
}
