//! Subcommand implementations behind the `plateau` binary.
//!
//! Each `cmd_*` takes a validated [`RunConfig`], writes its files under
//! `config.output.dir` and returns the paths it wrote.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use plateau_core::io::export::{format_float, sample_field, write_grid_csv, write_mesh_scalars_csv, write_obj};
use plateau_core::io::{to_json_string, Document, GridField, InitialSpec, RunConfig};
use plateau_core::search::{classify_energies, split_by_fingerprint};
use plateau_core::{
    build_surface, fourier_initial, nesterov_run_with, random_initial_stream, run_batch, Configuration, PlateauError,
    Problem, Result, SolutionCluster, SolveReport,
};
use serde::Serialize;

/// Process exit status for a failed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Io = 1,
    Config = 2,
    Numerical = 3,
}

pub fn exit_status(err: &PlateauError) -> ExitStatus {
    match err {
        PlateauError::Io(_) => ExitStatus::Io,
        e if e.is_config_error() => ExitStatus::Config,
        _ => ExitStatus::Numerical,
    }
}

/// The machine-readable error object printed on stderr.
pub fn error_json(err: &PlateauError) -> String {
    let kind = match exit_status(err) {
        ExitStatus::Io => "io",
        ExitStatus::Config => "config",
        ExitStatus::Numerical => "numerical",
    };
    serde_json::json!({
        "error": { "kind": kind, "message": err.to_string(), "exit_code": exit_status(err) as i32 }
    })
    .to_string()
}

/// Command-line values that replace fields of the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<usize>,
    pub radius: Option<f64>,
    pub rho: Option<f64>,
    pub eta: Option<f64>,
    pub iters: Option<usize>,
    /// Seeds the random search and a `random` initial configuration.
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub s_values: Option<Vec<f64>>,
    pub m: Option<i64>,
    pub samples: Option<usize>,
    pub digits: Option<usize>,
    pub field: Option<GridField>,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, c: &mut RunConfig) {
        if let Some(n) = self.n {
            c.n = n;
        }
        if let Some(r) = self.radius {
            c.radius = r;
        }
        if let Some(rho) = self.rho {
            c.optimizer.rho = rho;
        }
        if let Some(eta) = self.eta {
            c.optimizer.eta = eta;
        }
        if let Some(it) = self.iters {
            c.optimizer.max_iters = it;
        }
        if let Some(s) = self.seed {
            c.search.seed = s;
            if let InitialSpec::Random { seed, .. } = &mut c.initial {
                *seed = s;
            }
        }
        if self.jobs.is_some() {
            c.jobs = self.jobs;
        }
        if let Some(out) = &self.out {
            c.output.dir.clone_from(out);
        }
        if let Some(s) = &self.s_values {
            c.search.s_values.clone_from(s);
        }
        if let Some(m) = self.m {
            c.search.m = m;
        }
        if let Some(n) = self.samples {
            c.search.samples = n;
        }
        if let Some(d) = self.digits {
            c.search.digits = d;
        }
        if let Some(f) = self.field {
            c.grid.field = f;
        }
        if let Some(n) = self.n_r {
            c.grid.n_r = n;
        }
        if let Some(n) = self.n_theta {
            c.grid.n_theta = n;
        }
    }
}

/// Reads a config file, applies overrides and validates the result.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let text = fs::read_to_string(path)?;
    let mut c = RunConfig::from_json(&text)?;
    overrides.apply(&mut c);
    c.validate()?;
    Ok(c)
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = dir.join(name);
    Ok((path.clone(), BufWriter::new(File::create(path)?)))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

fn problem(c: &RunConfig) -> Result<Problem> {
    let mut diagnostics = c.diagnostics.clone();
    diagnostics.fingerprint |= c.search.split_by_shape;
    Problem::new(&c.curve, c.n, c.radius, c.optimizer.clone(), diagnostics)
}

/// One optimization from the configured initial configuration.
///
/// Writes `report.json`, plus `surface.obj` / `surface_scalars.csv` and
/// `dilatation_grid.csv` when enabled.
pub fn cmd_solve(c: &RunConfig) -> Result<Vec<PathBuf>> {
    let p = problem(c)?;
    let report = p.solve(&c.initial_configuration()?)?;
    log::info!(
        "{}: E = {:e}, D = {}, {} iterations in {:.2} s",
        p.curve.label(),
        report.final_energy,
        report.dirichlet_energy,
        report.iters_run,
        report.wall_time
    );
    let dir = &c.output.dir;
    fs::create_dir_all(dir)?;
    let mut written = vec![write_text(dir, "report.json", &to_json_string(&Document::new("solve", c, &report))?)?];

    let needs_surface = c.output.mesh || c.output.dilatation_grid;
    if needs_surface {
        let surface = build_surface(&p.basis, &p.curve, &report.final_config)?;
        if c.output.mesh {
            let mesh = surface.sample_mesh(c.output.mesh_n_r, c.output.mesh_n_theta)?;
            let (path, mut w) = create(dir, "surface.obj")?;
            write_obj(&mut w, &mesh)?;
            w.flush()?;
            written.push(path);
            let (path, mut w) = create(dir, "surface_scalars.csv")?;
            write_mesh_scalars_csv(&mut w, &mesh)?;
            w.flush()?;
            written.push(path);
        }
        if c.output.dilatation_grid {
            let g = &c.grid;
            let rows = sample_field(&surface, GridField::Dilatation, g.n_r, g.n_theta, g.max_radius);
            let (path, mut w) = create(dir, "dilatation_grid.csv")?;
            write_grid_csv(&mut w, &rows)?;
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}

#[derive(Serialize)]
struct RunEntry<'a> {
    index: usize,
    s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a SolveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct RunSummary {
    index: usize,
    s: f64,
    dirichlet_energy: Option<f64>,
    final_energy: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    m: i64,
    digits: usize,
    runs: Vec<RunSummary>,
    clusters: &'a [SolutionCluster],
}

fn clusters_for(c: &RunConfig, runs: &[Result<SolveReport>]) -> Vec<SolutionCluster> {
    let energies: Vec<Option<f64>> = runs.iter().map(|r| r.as_ref().ok().map(|r| r.dirichlet_energy)).collect();
    let clusters = classify_energies(&energies, c.search.digits);
    if !c.search.split_by_shape || runs.iter().any(|r| r.is_err()) {
        return clusters;
    }
    let reports: Vec<SolveReport> = runs.iter().filter_map(|r| r.as_ref().ok().cloned()).collect();
    split_by_fingerprint(&clusters, &reports, 1e-3)
}

/// First numerical failure among the runs, reported after all files are written.
fn first_failure(runs: Vec<Result<SolveReport>>) -> Result<()> {
    runs.into_iter().find_map(|r| r.err()).map_or(Ok(()), Err)
}

/// Fourier-family sweep over `search.s_values`.
///
/// Writes `run_XXX.json` per value and `summary.json` with the clusters.
/// An empty grid is a config error.
pub fn cmd_sweep(c: &RunConfig) -> Result<Vec<PathBuf>> {
    let s_values = &c.search.s_values;
    if s_values.is_empty() {
        return Err(PlateauError::invalid("sweep needs at least one s value"));
    }
    let p = problem(c)?;
    let initials = s_values.iter().map(|&s| fourier_initial(c.n, s, c.search.m)).collect::<Result<Vec<_>>>()?;
    let runs = run_batch(&p, &initials, c.jobs())?;

    let dir = &c.output.dir;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (index, (run, &s)) in runs.iter().zip(s_values).enumerate() {
        let entry = RunEntry { index, s, report: run.as_ref().ok(), error: run.as_ref().err().map(|e| e.to_string()) };
        let name = format!("run_{index:03}.json");
        written.push(write_text(dir, &name, &to_json_string(&Document::new("sweep_run", c, &entry))?)?);
    }
    let clusters = clusters_for(c, &runs);
    let summary = SweepSummary {
        m: c.search.m,
        digits: c.search.digits,
        runs: runs
            .iter()
            .zip(s_values)
            .enumerate()
            .map(|(index, (r, &s))| RunSummary {
                index,
                s,
                dirichlet_energy: r.as_ref().ok().map(|r| r.dirichlet_energy),
                final_energy: r.as_ref().ok().map(|r| r.final_energy),
                error: r.as_ref().err().map(|e| e.to_string()),
            })
            .collect(),
        clusters: &clusters,
    };
    written.push(write_text(dir, "summary.json", &to_json_string(&Document::new("sweep", c, &summary))?)?);
    for cl in &clusters {
        log::info!("cluster {}: {} run(s), mean D = {}", cl.key, cl.members.len(), cl.energy_mean);
    }
    first_failure(runs)?;
    Ok(written)
}

#[derive(Serialize)]
struct SearchSummary<'a> {
    samples: usize,
    seed: u64,
    knots: usize,
    digits: usize,
    failed: Vec<usize>,
    clusters: &'a [SolutionCluster],
}

/// Seeded random multi-start. Sample `k` uses stream `k` of the seed.
///
/// Writes `energies.csv` and `clusters.json`.
pub fn cmd_random_search(c: &RunConfig) -> Result<Vec<PathBuf>> {
    let s = &c.search;
    let p = problem(c)?;
    let initials = (0..s.samples as u64)
        .map(|k| random_initial_stream(c.n, s.seed, k, s.knots))
        .collect::<Result<Vec<Configuration>>>()?;
    let runs = run_batch(&p, &initials, c.jobs())?;

    let dir = &c.output.dir;
    fs::create_dir_all(dir)?;
    let (csv, mut w) = create(dir, "energies.csv")?;
    writeln!(w, "sample,dirichlet_energy,final_energy,monotone")?;
    for (k, r) in runs.iter().enumerate() {
        match r {
            Ok(r) => {
                writeln!(w, "{k},{},{},{}", format_float(r.dirichlet_energy), format_float(r.final_energy), r.monotone)?
            }
            Err(_) => writeln!(w, "{k},nan,nan,")?,
        }
    }
    w.flush()?;

    let clusters = clusters_for(c, &runs);
    let summary = SearchSummary {
        samples: s.samples,
        seed: s.seed,
        knots: s.knots,
        digits: s.digits,
        failed: runs.iter().enumerate().filter(|(_, r)| r.is_err()).map(|(k, _)| k).collect(),
        clusters: &clusters,
    };
    let json = write_text(dir, "clusters.json", &to_json_string(&Document::new("random_search", c, &summary))?)?;
    log::info!("{} sample(s), {} cluster(s)", s.samples, clusters.len());
    first_failure(runs)?;
    Ok(vec![csv, json])
}

/// Samples `grid.field` on a polar grid of the optimized surface.
///
/// With `max_iters = 0` this is the surface of the initial configuration.
/// Writes `<field>_grid.csv`.
pub fn cmd_grid(c: &RunConfig) -> Result<Vec<PathBuf>> {
    let p = problem(c)?;
    let initial = c.initial_configuration()?;
    let config = if c.optimizer.max_iters == 0 {
        initial
    } else {
        nesterov_run_with(&p.basis, &p.curve, &initial, &p.settings, &p.diagnostics)?.final_config
    };
    let surface = build_surface(&p.basis, &p.curve, &config)?;
    let g = &c.grid;
    let rows = sample_field(&surface, g.field, g.n_r, g.n_theta, g.max_radius);
    let name = match g.field {
        GridField::Dilatation => "dilatation_grid.csv",
        GridField::MeanCurvature => "mean_curvature_grid.csv",
    };
    fs::create_dir_all(&c.output.dir)?;
    let (path, mut w) = create(&c.output.dir, name)?;
    write_grid_csv(&mut w, &rows)?;
    w.flush()?;
    Ok(vec![path])
}
