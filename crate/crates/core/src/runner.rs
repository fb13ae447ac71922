//! Batch front end: single runs, parameter sweeps, snapshot analysis and
//! plotting, each writing its files atomically into an output directory.
//!
//! Worker threads only ever split independent work (replicas, per-agent
//! demand updates), so the `threads` option never changes an output byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ModelConfig};
use crate::error::{Error, Result};
use crate::plot::{csv_error, read_kde_csv, render_svg, ChartLabels, Series};
use crate::report::{analyze_wealth, AnalysisReport, KDE_POINTS};
use crate::simulation::{simulate, RunOutput};
use crate::stats::kde::{kde_with_bandwidth, linspace, silverman_bandwidth};
use crate::stats::{KdeEstimate, TailVerdict};

pub const SNAPSHOT_FILE: &str = "snapshots.csv";
pub const REPORT_FILE: &str = "report.json";
pub const KDE_FILE: &str = "kde.csv";
pub const CONFIG_FILE: &str = "config.json";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const OVERLAY_FILE: &str = "overlay.svg";

/// Overrides applied on top of a config file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Replaces the config's seed (the sweep base seed for sweeps).
    pub seed: Option<u64>,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

/// Run `f` on a pool of the requested size.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Write `contents` to `path` through a temporary sibling and a rename, so
/// readers never observe a partially written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Results of one simulated configuration.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub config: ExperimentConfig,
    pub output: RunOutput,
    pub report: AnalysisReport,
    pub kde: Option<KdeEstimate>,
}

impl RunArtifacts {
    pub fn terminal_wealth(&self) -> &[f64] {
        self.output.terminal().map(|(_, w)| w).unwrap_or(&[])
    }

    /// Write config, snapshots, report and KDE into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        write_atomic(&dir.join(CONFIG_FILE), self.config.to_json().as_bytes())?;
        let mut csv = Vec::new();
        self.output
            .write_csv(&mut csv)
            .map_err(|e| Error::io(dir.join(SNAPSHOT_FILE), e))?;
        write_atomic(&dir.join(SNAPSHOT_FILE), &csv)?;
        write_atomic(&dir.join(REPORT_FILE), self.report.to_json().as_bytes())?;
        if let Some(kde) = &self.kde {
            write_atomic(&dir.join(KDE_FILE), kde.to_csv().as_bytes())?;
        }
        Ok(())
    }
}

/// Simulate a config and analyze its final snapshot.
pub fn execute(config: &ExperimentConfig) -> Result<RunArtifacts> {
    let output = simulate(config)?;
    let (round, wealth) = output
        .terminal()
        .ok_or_else(|| Error::Config("no snapshot rounds recorded".into()))?;
    let (mut report, kde) = analyze_wealth(wealth, output.monopolists());
    report.model = Some(config.model.name().into());
    report.round = Some(round);
    Ok(RunArtifacts {
        config: config.clone(),
        output,
        report,
        kde,
    })
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub artifacts: RunArtifacts,
}

/// Load a config, apply overrides, run it and write every output file.
pub fn run_experiment(config_path: &Path, options: RunOptions) -> Result<RunSummary> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = options.seed {
        config.seed = seed;
    }
    let output_dir = config.output_dir();
    let artifacts = with_threads(options.threads, || execute(&config))??;
    artifacts.write_to(&output_dir)?;
    Ok(RunSummary { output_dir, artifacts })
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Omega,
    Theta,
    Delta,
    DampedFraction,
    #[serde(alias = "p_m")]
    MonopolistFraction,
}

impl SweepVariable {
    /// Short name used in legends and file names.
    pub fn symbol(self) -> &'static str {
        match self {
            SweepVariable::Omega => "omega",
            SweepVariable::Theta => "theta",
            SweepVariable::Delta => "delta",
            SweepVariable::DampedFraction => "damped",
            SweepVariable::MonopolistFraction => "p_m",
        }
    }

    /// Copy of `base` with this variable set to `value`.
    pub fn apply(self, base: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut config = base.clone();
        let slot = match (self, &mut config.model) {
            (SweepVariable::Omega, ModelConfig::Angle(p)) => &mut p.omega,
            (SweepVariable::Theta, ModelConfig::Angle(p)) => &mut p.theta,
            (SweepVariable::Delta, ModelConfig::Market(p)) => &mut p.delta,
            (SweepVariable::Delta, ModelConfig::Pairwise(p)) => &mut p.delta,
            (SweepVariable::DampedFraction, ModelConfig::Market(p)) => &mut p.damped_fraction,
            (SweepVariable::DampedFraction, ModelConfig::Pairwise(p)) => &mut p.damped_fraction,
            (SweepVariable::MonopolistFraction, ModelConfig::Pairwise(p)) => &mut p.monopolist_fraction,
            (var, model) => {
                return Err(Error::Config(format!(
                    "sweep variable {} does not apply to the {} model",
                    var.symbol(),
                    model.name()
                )))
            }
        };
        *slot = value;
        config.validate()?;
        Ok(config)
    }
}

fn default_replicas() -> usize {
    1
}

/// A base config, one varied parameter and a replica count.
///
/// Replica `r` of every value runs with seed `base.seed + r`, so any single
/// replica can be reproduced by running the base config with that seed and
/// value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: ExperimentConfig,
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("sweep needs at least one value".into()));
        }
        if self.replicas == 0 {
            return Err(Error::Config("sweep needs at least one replica".into()));
        }
        if self.base.seed.checked_add(self.replicas as u64 - 1).is_none() {
            return Err(Error::Config("replica seeds overflow u64".into()));
        }
        for &v in &self.values {
            self.variable.apply(&self.base, v)?;
        }
        Ok(())
    }

    pub fn replica_seed(&self, replica: usize) -> u64 {
        self.base.seed + replica as u64
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| self.base.output_dir())
    }

    /// Legend label for a sweep value, e.g. `p_m=0.1`.
    pub fn label(&self, value: f64) -> String {
        format!("{}={value}", self.variable.symbol())
    }

    fn value_dir(&self, value: f64) -> String {
        format!("{}_{value}", self.variable.symbol())
    }
}

/// Fitted statistics of one replica.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicaRow {
    pub value: f64,
    pub replica: usize,
    pub seed: u64,
    pub shape: Option<f64>,
    pub scale: Option<f64>,
    pub gini: Option<f64>,
    pub monopolist_mean: Option<f64>,
    pub other_mean: Option<f64>,
    pub tail: TailVerdict,
}

impl ReplicaRow {
    fn from_report(value: f64, replica: usize, seed: u64, report: &AnalysisReport) -> Self {
        Self {
            value,
            replica,
            seed,
            shape: report.gamma_mle.map(|f| f.shape),
            scale: report.gamma_mle.map(|f| f.scale),
            gini: report.gini_empirical,
            monopolist_mean: report.roles.and_then(|r| r.monopolist_mean),
            other_mean: report.roles.and_then(|r| r.other_mean),
            tail: report.tail.verdict,
        }
    }
}

/// Averages over the replicas of one sweep value. A column is averaged
/// only when every replica has it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueMean {
    pub value: f64,
    pub replicas: usize,
    pub shape: Option<f64>,
    pub scale: Option<f64>,
    pub gini: Option<f64>,
    pub monopolist_mean: Option<f64>,
    pub other_mean: Option<f64>,
}

fn mean_of(rows: &[ReplicaRow], pick: impl Fn(&ReplicaRow) -> Option<f64>) -> Option<f64> {
    let vals: Option<Vec<f64>> = rows.iter().map(pick).collect();
    vals.filter(|v| !v.is_empty()).map(|v| v.iter().sum::<f64>() / v.len() as f64)
}

impl ValueMean {
    fn of(value: f64, rows: &[ReplicaRow]) -> Self {
        Self {
            value,
            replicas: rows.len(),
            shape: mean_of(rows, |r| r.shape),
            scale: mean_of(rows, |r| r.scale),
            gini: mean_of(rows, |r| r.gini),
            monopolist_mean: mean_of(rows, |r| r.monopolist_mean),
            other_mean: mean_of(rows, |r| r.other_mean),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub output_dir: PathBuf,
    pub rows: Vec<ReplicaRow>,
    pub means: Vec<ValueMean>,
    /// Pooled density of mean-normalized final wealth, one per value.
    pub densities: Vec<(String, KdeEstimate)>,
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Aggregate table: replica rows of each value followed by its mean row.
pub fn sweep_csv(variable: SweepVariable, rows: &[ReplicaRow], means: &[ValueMean]) -> String {
    let mut out = format!(
        "{},replica,seed,shape,scale,gini,monopolist_mean_wealth,other_mean_wealth,tail\n",
        variable.symbol()
    );
    for m in means {
        for r in rows.iter().filter(|r| r.value == m.value) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.value,
                r.replica,
                r.seed,
                cell(r.shape),
                cell(r.scale),
                cell(r.gini),
                cell(r.monopolist_mean),
                cell(r.other_mean),
                r.tail
            );
        }
        let _ = writeln!(
            out,
            "{},mean,,{},{},{},{},{},",
            m.value,
            cell(m.shape),
            cell(m.scale),
            cell(m.gini),
            cell(m.monopolist_mean),
            cell(m.other_mean)
        );
    }
    out
}

/// Run every (value, replica) pair, then write per-replica outputs, the
/// aggregate table, pooled densities and their overlay chart.
pub fn run_sweep(spec_path: &Path, options: RunOptions) -> Result<SweepSummary> {
    let mut spec = SweepSpec::load(spec_path)?;
    if let Some(seed) = options.seed {
        spec.base.seed = seed;
        spec.validate()?;
    }
    with_threads(options.threads, || sweep(&spec))?
}

/// Execute a validated sweep on the current rayon pool.
pub fn sweep(spec: &SweepSpec) -> Result<SweepSummary> {
    spec.validate()?;
    let out = spec.output_dir();
    let jobs: Vec<(f64, usize)> = spec
        .values
        .iter()
        .flat_map(|&v| (0..spec.replicas).map(move |r| (v, r)))
        .collect();

    // Collected in job order, so completion order never leaks into output.
    let results: Vec<Result<RunArtifacts>> = jobs
        .par_iter()
        .map(|&(value, replica)| {
            let seed = spec.replica_seed(replica);
            let wrap = |e: Error| Error::Replica {
                seed,
                source: Box::new(e),
            };
            let mut config = spec.variable.apply(&spec.base, value).map_err(wrap)?;
            config.seed = seed;
            config.output = None;
            let artifacts = execute(&config).map_err(wrap)?;
            let dir = out.join(spec.value_dir(value)).join(format!("replica_{replica}"));
            artifacts.write_to(&dir).map_err(wrap)?;
            Ok(artifacts)
        })
        .collect();
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;

    let rows: Vec<ReplicaRow> = jobs
        .iter()
        .zip(&runs)
        .map(|(&(value, replica), run)| ReplicaRow::from_report(value, replica, spec.replica_seed(replica), &run.report))
        .collect();
    let means: Vec<ValueMean> = spec
        .values
        .iter()
        .map(|&v| {
            let of_value: Vec<ReplicaRow> = rows.iter().filter(|r| r.value == v).copied().collect();
            ValueMean::of(v, &of_value)
        })
        .collect();
    write_atomic(&out.join(SWEEP_FILE), sweep_csv(spec.variable, &rows, &means).as_bytes())?;

    let pooled: Vec<Vec<f64>> = spec
        .values
        .iter()
        .map(|&v| {
            jobs.iter()
                .zip(&runs)
                .filter(|((value, _), _)| *value == v)
                .flat_map(|(_, run)| normalized(run.terminal_wealth()))
                .collect()
        })
        .collect();
    let densities = pooled_densities(spec, &pooled);
    let mut series = Vec::with_capacity(densities.len());
    for (value, (label, kde)) in spec.values.iter().zip(&densities) {
        let name = format!("kde_{}.csv", spec.value_dir(*value));
        write_atomic(&out.join(name), kde.to_csv().as_bytes())?;
        series.push(Series::new(label.clone(), kde.grid.clone(), kde.density.clone()));
    }
    if !series.is_empty() {
        let labels = ChartLabels {
            title: format!("Final wealth densities by {}", spec.variable.symbol()),
            x_axis: "wealth / mean wealth".into(),
            y_axis: "density".into(),
        };
        write_atomic(&out.join(OVERLAY_FILE), render_svg(&series, &labels)?.as_bytes())?;
    }
    Ok(SweepSummary {
        output_dir: out,
        rows,
        means,
        densities,
    })
}

fn normalized(wealth: &[f64]) -> Vec<f64> {
    let mean = wealth.iter().sum::<f64>() / wealth.len().max(1) as f64;
    if mean > 0.0 {
        wealth.iter().map(|w| w / mean).collect()
    } else {
        Vec::new()
    }
}

/// KDEs of each pooled sample on one shared grid from 0 past the largest
/// value. Samples whose bandwidth is undefined are skipped.
fn pooled_densities(spec: &SweepSpec, pooled: &[Vec<f64>]) -> Vec<(String, KdeEstimate)> {
    let bandwidths: Vec<Option<f64>> = pooled.iter().map(|s| silverman_bandwidth(s).ok()).collect();
    let hi = pooled
        .iter()
        .zip(&bandwidths)
        .filter_map(|(s, h)| h.map(|h| s.iter().copied().fold(0.0, f64::max) + 3.0 * h))
        .fold(0.0, f64::max);
    if hi <= 0.0 {
        return Vec::new();
    }
    let grid = linspace(0.0, hi, KDE_POINTS);
    spec.values
        .iter()
        .zip(pooled.iter().zip(&bandwidths))
        .filter_map(|(&v, (sample, h))| h.map(|h| (spec.label(v), kde_with_bandwidth(sample, &grid, h))))
        .collect()
}

/// Final-round wealth read back from a snapshot CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSample {
    pub model: &'static str,
    pub round: u64,
    pub wealth: Vec<f64>,
    pub monopolists: Option<Vec<bool>>,
}

/// Read the last recorded round of any snapshot CSV written by a run.
pub fn read_snapshot(path: &Path) -> Result<SnapshotSample> {
    let data_err = |message: String| Error::Data {
        path: path.into(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let (model, round_col) = match (column("round"), column("period"), column("is_monopolist")) {
        (Some(c), _, Some(_)) => ("pairwise", c),
        (Some(c), _, None) => ("angle", c),
        (None, Some(c), _) => ("market", c),
        _ => return Err(data_err("no round or period column".into())),
    };
    let id_col = column("agent_id").ok_or_else(|| data_err("no agent_id column".into()))?;
    let wealth_col = column("wealth").ok_or_else(|| data_err("no wealth column".into()))?;
    let mono_col = column("is_monopolist");

    let mut last: Option<u64> = None;
    let mut rows: Vec<(u64, f64, bool)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = i + 2;
        let field = |c: usize| record.get(c).unwrap_or("").trim();
        let round: u64 = field(round_col)
            .parse()
            .map_err(|_| data_err(format!("row {line}: bad round '{}'", field(round_col))))?;
        let id: u64 = field(id_col)
            .parse()
            .map_err(|_| data_err(format!("row {line}: bad agent_id '{}'", field(id_col))))?;
        let wealth: f64 = field(wealth_col)
            .parse()
            .map_err(|_| data_err(format!("row {line}: bad wealth '{}'", field(wealth_col))))?;
        let mono = match mono_col.map(field) {
            None | Some("0") => false,
            Some("1") => true,
            Some(other) => return Err(data_err(format!("row {line}: bad is_monopolist '{other}'"))),
        };
        match last {
            Some(r) if round < r => continue,
            Some(r) if round == r => {}
            _ => {
                last = Some(round);
                rows.clear();
            }
        }
        rows.push((id, wealth, mono));
    }
    let round = last.ok_or_else(|| data_err("no data rows".into()))?;
    rows.sort_by_key(|r| r.0);
    if rows.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(data_err(format!("duplicate agent_id in round {round}")));
    }
    Ok(SnapshotSample {
        model,
        round,
        wealth: rows.iter().map(|r| r.1).collect(),
        monopolists: mono_col.map(|_| rows.iter().map(|r| r.2).collect()),
    })
}

/// Analyze the final round of a snapshot CSV.
pub fn analyze_snapshot(path: &Path) -> Result<(AnalysisReport, Option<KdeEstimate>)> {
    let sample = read_snapshot(path)?;
    let (mut report, kde) = analyze_wealth(&sample.wealth, sample.monopolists.as_deref());
    report.model = Some(sample.model.into());
    report.round = Some(sample.round);
    Ok((report, kde))
}

/// Render `grid,density` CSVs into one SVG. Labels default to file stems.
pub fn plot_files(out: &Path, inputs: &[PathBuf], labels: &[String]) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::Config("plot needs at least one KDE CSV".into()));
    }
    if !labels.is_empty() && labels.len() != inputs.len() {
        return Err(Error::Config(format!(
            "{} labels given for {} series",
            labels.len(),
            inputs.len()
        )));
    }
    let series = inputs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let label = labels.get(i).cloned().unwrap_or_else(|| {
                p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            });
            read_kde_csv(p, label)
        })
        .collect::<Result<Vec<_>>>()?;
    write_atomic(out, render_svg(&series, &ChartLabels::default())?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle_base() -> ExperimentConfig {
        ExperimentConfig::from_json(r#"{"model": {"kind": "angle", "omega": 0.5}, "agents": 200, "rounds": 2000, "seed": 9}"#)
            .unwrap()
    }

    #[test]
    fn sweep_variables_apply_only_to_their_model() {
        let base = angle_base();
        let c = SweepVariable::Omega.apply(&base, 0.3).unwrap();
        assert!(matches!(c.model, ModelConfig::Angle(p) if p.omega == 0.3));
        assert_eq!(SweepVariable::MonopolistFraction.apply(&base, 0.1).unwrap_err().exit_code(), 2);
        assert_eq!(SweepVariable::Omega.apply(&base, 1.5).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn sweep_spec_validation() {
        let ok = r#"{"base": {"model": {"kind": "pairwise"}, "agents": 10, "rounds": 1, "seed": 4},
                     "variable": "p_m", "values": [0, 0.1], "replicas": 3}"#;
        let spec = SweepSpec::from_json(ok).unwrap();
        assert_eq!(spec.variable, SweepVariable::MonopolistFraction);
        assert_eq!((0..3).map(|r| spec.replica_seed(r)).collect::<Vec<_>>(), vec![4, 5, 6]);
        assert_eq!(spec.label(0.0), "p_m=0");
        assert_eq!(spec.label(0.4), "p_m=0.4");

        let empty = ok.replace("[0, 0.1]", "[]");
        assert!(SweepSpec::from_json(&empty).is_err());
        let unknown = ok.replace("\"replicas\"", "\"replica\"");
        assert!(SweepSpec::from_json(&unknown).is_err());
        let overflow = ok.replace("\"seed\": 4", &format!("\"seed\": {}", u64::MAX));
        assert!(SweepSpec::from_json(&overflow).is_err());
    }

    #[test]
    fn replica_errors_name_the_seed_and_keep_the_exit_class() {
        let err = Error::Replica {
            seed: 11,
            source: Box::new(Error::DegenerateMarket { period: 3 }),
        };
        assert!(err.to_string().contains("seed 11"));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn sweep_means_and_csv() {
        let row = |value, replica, shape| ReplicaRow {
            value,
            replica,
            seed: 1 + replica as u64,
            shape: Some(shape),
            scale: Some(1.0),
            gini: Some(0.5),
            monopolist_mean: None,
            other_mean: None,
            tail: TailVerdict::Inconclusive,
        };
        let rows = vec![row(0.1, 0, 1.0), row(0.1, 1, 2.0)];
        let means = vec![ValueMean::of(0.1, &rows)];
        assert_eq!(means[0].shape, Some(1.5));
        assert_eq!(means[0].monopolist_mean, None);
        let csv = sweep_csv(SweepVariable::Omega, &rows, &means);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "omega,replica,seed,shape,scale,gini,monopolist_mean_wealth,other_mean_wealth,tail");
        assert_eq!(lines[1], "0.1,0,1,1,1,0.5,,,inconclusive");
        assert_eq!(lines[3], "0.1,mean,,1.5,1,0.5,,,");
    }

    #[test]
    fn snapshot_reader_keeps_last_round() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        std::fs::write(
            &path,
            "round,agent_id,is_monopolist,x,y,wealth,ref_price\n0,0,1,1,1,2,1\n0,1,0,1,1,2,1\n5,1,0,1,1,3,1\n5,0,1,0,1,1,1\n",
        )
        .unwrap();
        let s = read_snapshot(&path).unwrap();
        assert_eq!(s.model, "pairwise");
        assert_eq!(s.round, 5);
        assert_eq!(s.wealth, vec![1.0, 3.0]);
        assert_eq!(s.monopolists, Some(vec![true, false]));

        std::fs::write(&path, "period,agent_id,x,y,wealth,price\n").unwrap();
        assert_eq!(read_snapshot(&path).unwrap_err().exit_code(), 3);
        std::fs::write(&path, "foo,bar\n1,2\n").unwrap();
        assert!(matches!(read_snapshot(&path), Err(Error::Data { .. })));
        assert_eq!(read_snapshot(&dir.path().join("missing.csv")).unwrap_err().exit_code(), 4);
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("a.txt");
        write_atomic(&path, b"hello").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"hello");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn zero_threads_is_rejected() {
        assert_eq!(with_threads(Some(0), || ()).unwrap_err().exit_code(), 2);
        assert_eq!(with_threads(Some(2), || rayon::current_num_threads()).unwrap(), 2);
    }
}
