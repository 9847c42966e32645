//! Command-line front end.
//!
//! Exit codes: 0 success, 2 malformed input or arguments, 3 numeric failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::bench::{run_error_analysis, run_speed_analysis, BenchConfig, ErrorReport, SpeedReport, PROTOCOL_METHODS};
use crate::error::SpecError;
use crate::estimators::{
    BgAdaptiveConfig, EstimatorSpec, Method, PreparedMtnufft, SpectrumEstimate, TaperMode, DEFAULT_EPSILON,
};
use crate::grid::{BandPlan, SamplingGrid, SignalBand, SignalSeries};
use crate::inference::{f_test, suboptimality};
use crate::simkit::{generate_grid, generate_line_plus_noise, NoiseModel, NoiseSource, Scheme, SimConfig};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Input(m) => write!(f, "input error: {m}"),
            Self::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::InvalidInput(_)
            | SpecError::NotIncreasing { .. }
            | SpecError::NonFinite(_)
            | SpecError::PlanMismatch { .. } => Self::Input(e.to_string()),
            _ => Self::Numeric(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "mtspec", version, about = "Multitaper spectra of nonuniformly sampled series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Estimate a power spectrum from a `t,x` CSV.
    Spectrum(SpectrumArgs),
    /// Harmonic F-test for line components.
    Ftest(FtestArgs),
    /// Eigenvalue deviation of shifted nominal tapers per band.
    Subopt(SuboptArgs),
    /// Write a simulated series as `t,x` CSV.
    Simulate(SimulateArgs),
    /// Monte Carlo error analysis and throughput.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BandArgs {
    /// Upper edge of the signal band.
    #[arg(long, default_value_t = 0.5)]
    pub f_max: f64,
    /// Analysis half-bandwidth.
    #[arg(long, default_value_t = 0.05)]
    pub f_w: f64,
    /// Spacing of band centers [default: f_w / 5].
    #[arg(long)]
    pub spacing: Option<f64>,
}

impl BandArgs {
    fn plan(&self) -> CliResult<(SignalBand, BandPlan)> {
        let sb = SignalBand::new(self.f_max)?;
        let plan = BandPlan::new(self.f_max, self.f_w, self.spacing.unwrap_or(self.f_w / 5.0))?;
        Ok((sb, plan))
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpectrumArgs {
    #[arg(short, long)]
    #[serde(skip)]
    pub input: PathBuf,
    #[arg(short, long)]
    #[serde(skip)]
    pub output: PathBuf,
    /// Run manifest [default: output with a .json extension].
    #[arg(long)]
    #[serde(skip)]
    pub manifest: Option<PathBuf>,
    #[arg(long, default_value = "mtnufft")]
    pub method: Method,
    /// Taper count (initial count for bg_adaptive).
    #[arg(short, long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// bg_adaptive: largest taper count.
    #[arg(long, default_value_t = 8)]
    pub k_max: usize,
    /// bg_adaptive: bandwidth increment [default: 0.01 f_max / 0.5].
    #[arg(long)]
    pub f_w_step: Option<f64>,
    /// bg_adaptive: sidelobe leakage threshold in dB.
    #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
    pub leakage_db: f64,
    #[command(flatten)]
    pub band: BandArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FtestArgs {
    #[arg(short, long)]
    #[serde(skip)]
    pub input: PathBuf,
    #[arg(short, long)]
    #[serde(skip)]
    pub output: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub manifest: Option<PathBuf>,
    #[arg(short, long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Use exact nominal-band tapers instead of interpolated ones.
    #[arg(long)]
    pub exact_nominal: bool,
    #[command(flatten)]
    pub band: BandArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SuboptArgs {
    /// Sampling times from the `t` column of a `t,x` CSV.
    #[arg(short, long, conflicts_with = "scheme", required_unless_present = "scheme")]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    /// Use a simulated grid instead of an input file.
    #[arg(long)]
    pub scheme: Option<Scheme>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    #[serde(skip)]
    pub output: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub manifest: Option<PathBuf>,
    #[arg(short, long, default_value_t = 4)]
    pub k: usize,
    #[command(flatten)]
    pub band: BandArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SimulateArgs {
    #[arg(long, default_value = "uniform")]
    pub scheme: Scheme,
    /// Seed of the grid and the noise.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Nominal sample count [default: scheme preset].
    #[arg(long)]
    pub n: Option<usize>,
    /// Jitter standard deviation [default: scheme preset].
    #[arg(long)]
    pub jitter_sigma: Option<f64>,
    /// Samples per unit time [default: scheme preset].
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Frequency of an added cosine line.
    #[arg(long)]
    pub line_freq: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phase: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise_var: f64,
    /// iid or band_limited.
    #[arg(long, default_value = "iid")]
    pub noise_model: NoiseModel,
    /// Band edge of band-limited noise.
    #[arg(long, default_value_t = 0.5)]
    pub f_max: f64,
    #[arg(short, long)]
    #[serde(skip)]
    pub output: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BenchArgs {
    /// Four methods by four schemes, f_w = 0.05, K = 4, 1000 trials.
    #[arg(long, conflicts_with_all = ["methods", "schemes"])]
    pub paper_protocol: bool,
    #[arg(long, value_delimiter = ',', required_unless_present = "paper_protocol")]
    pub methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', required_unless_present = "paper_protocol")]
    pub schemes: Vec<Scheme>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// iid or band_limited.
    #[arg(long, default_value = "band_limited")]
    pub noise_model: NoiseModel,
    #[arg(long, default_value_t = 10)]
    pub speed_reps: usize,
    /// Skip the throughput measurement.
    #[arg(long)]
    pub no_speed: bool,
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    pub out_dir: PathBuf,
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("mtspec: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Ftest(a) => cmd_ftest(a),
        Command::Subopt(a) => cmd_subopt(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// A series read from CSV with the digest of the raw file.
pub struct Input {
    pub series: SignalSeries,
    pub sha256: String,
}

/// Read a `t,x` CSV. Comments start with `#`; rows are sorted by time if
/// needed and duplicate times are rejected.
pub fn read_series(path: &Path) -> CliResult<Input> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    let sha256 = format!("{:x}", Sha256::digest(&bytes));
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(bytes.as_slice());
    let headers = rdr.headers().map_err(|e| io_err(path, e))?.clone();
    if headers.is_empty() {
        return Err(CliError::Input(format!("{}: empty file", path.display())));
    }
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "x" {
        return Err(CliError::Input(format!(
            "{}: expected header `t,x`, found `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows: Vec<(f64, f64, u64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize, name: &str| -> CliResult<f64> {
            let s = rec.get(i).unwrap_or("");
            let v: f64 = s
                .parse()
                .map_err(|_| CliError::Input(format!("{}:{line}: cannot parse {name} = {s:?}", path.display())))?;
            if !v.is_finite() {
                return Err(CliError::Input(format!("{}:{line}: {name} = {s} is not finite", path.display())));
            }
            Ok(v)
        };
        rows.push((field(0, "t")?, field(1, "x")?, line));
    }
    if rows.is_empty() {
        return Err(CliError::Input(format!("{}: no samples", path.display())));
    }
    if rows.windows(2).any(|w| w[1].0 < w[0].0) {
        log::warn!("{}: times are not sorted; sorting", path.display());
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    if let Some(w) = rows.windows(2).find(|w| w[1].0 == w[0].0) {
        return Err(CliError::Input(format!(
            "{}: duplicate time {} at lines {} and {}",
            path.display(),
            w[0].0,
            w[0].2,
            w[1].2
        )));
    }
    let grid = SamplingGrid::new(rows.iter().map(|r| r.0).collect())?;
    let series = SignalSeries::new(grid, rows.iter().map(|r| r.1).collect())?;
    Ok(Input { series, sha256 })
}

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// SHA-256 of the canonical (key-sorted) JSON of a configuration.
pub fn config_hash(config: &serde_json::Value) -> String {
    format!("{:x}", Sha256::digest(config.to_string().as_bytes()))
}

fn canonical(command: &str, args: &impl Serialize, input_sha256: Option<&str>) -> CliResult<serde_json::Value> {
    let args = serde_json::to_value(args).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(json!({ "command": command, "args": args, "input_sha256": input_sha256 }))
}

/// Write a CSV whose first line is `# config_hash=...`.
fn write_csv(path: &Path, hash: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "# config_hash={hash}").map_err(|e| io_err(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn write_manifest(
    path: &Path,
    config: &serde_json::Value,
    hash: &str,
    outputs: &[&Path],
    extra: serde_json::Value,
) -> CliResult<()> {
    let doc = json!({
        "tool": "mtspec",
        "version": env!("CARGO_PKG_VERSION"),
        "config_hash": hash,
        "config": config,
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "result": extra,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Input(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

fn manifest_path(output: &Path, manifest: &Option<PathBuf>) -> PathBuf {
    manifest.clone().unwrap_or_else(|| output.with_extension("json"))
}

fn failed_bands(est: &SpectrumEstimate) -> Vec<String> {
    (0..est.len())
        .filter(|&i| est.flags[i].failed)
        .map(|i| format!("{} (f_c = {})", i, est.plan.centers()[i]))
        .collect()
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> CliResult<()> {
    let input = read_series(&a.input)?;
    let (sb, plan) = a.band.plan()?;
    let spec = match a.method {
        Method::Mtnufft => EstimatorSpec::Mtnufft { k_tapers: a.k, epsilon: a.epsilon },
        Method::Mtnufft0 => EstimatorSpec::Mtnufft0 { k_tapers: a.k, epsilon: a.epsilon },
        Method::BgFixed => EstimatorSpec::BgFixed { k_tapers: a.k },
        Method::BgAdaptive => EstimatorSpec::BgAdaptive(BgAdaptiveConfig {
            k_init: a.k,
            k_max: a.k_max,
            f_w_init: a.band.f_w,
            f_w_step: a.f_w_step.unwrap_or(0.01 * a.band.f_max / 0.5),
            leakage_db: a.leakage_db,
        }),
        Method::Baseline => EstimatorSpec::Baseline,
    };
    let est = spec.estimate(&input.series, &sb, &plan)?;
    let config = canonical("spectrum", a, Some(&input.sha256))?;
    let hash = config_hash(&config);
    let db = est.power_db();
    let rows = (0..est.len()).map(|i| {
        vec![
            fmt_num(plan.centers()[i]),
            fmt_num(est.power[i]),
            fmt_num(db[i]),
            est.k_used[i].to_string(),
            fmt_num(est.f_w_used[i]),
            est.flags[i].label().to_string(),
        ]
    });
    write_csv(&a.output, &hash, &["f_center", "power", "power_db", "k_used", "f_w_used", "flag"], rows)?;
    let failed = failed_bands(&est);
    let mpath = manifest_path(&a.output, &a.manifest);
    write_manifest(
        &mpath,
        &config,
        &hash,
        &[&a.output],
        json!({ "method": est.method, "bands": est.len(), "failed_bands": failed }),
    )?;
    if !failed.is_empty() {
        return Err(CliError::Numeric(format!("taper construction failed at bands {}", failed.join(", "))));
    }
    Ok(())
}

pub fn cmd_ftest(a: &FtestArgs) -> CliResult<()> {
    let input = read_series(&a.input)?;
    let (sb, plan) = a.band.plan()?;
    let mode = if a.exact_nominal { TaperMode::ExactNominal } else { TaperMode::Interpolated };
    let est = PreparedMtnufft::new(input.series.grid(), &sb, &plan, a.k, a.epsilon, mode)?;
    let j = est.eigencoefficients(input.series.values())?;
    let r = f_test(&j, est.tapers(), &plan)?;
    let config = canonical("ftest", a, Some(&input.sha256))?;
    let hash = config_hash(&config);
    let crit = |label: &str| r.critical(label).map(fmt_num).unwrap_or_default();
    let (c05, c01, cr) = (crit("p05"), crit("p01"), crit("rayleigh"));
    let rows = (0..plan.len()).map(|i| {
        let flag = match (r.invalid[i], plan.is_boundary(i)) {
            (false, false) => "ok",
            (true, false) => "invalid",
            (false, true) => "boundary",
            (true, true) => "invalid|boundary",
        };
        vec![
            fmt_num(plan.centers()[i]),
            fmt_num(r.f_stat[i]),
            fmt_num(r.amplitude[i].re),
            fmt_num(r.amplitude[i].im),
            c05.clone(),
            c01.clone(),
            cr.clone(),
            r.saturated[i].to_string(),
            flag.to_string(),
        ]
    });
    let header = [
        "f_center",
        "f_stat",
        "amplitude_re",
        "amplitude_im",
        "crit_p05",
        "crit_p01",
        "crit_rayleigh",
        "saturated",
        "flag",
    ];
    write_csv(&a.output, &hash, &header, rows)?;
    write_manifest(
        &manifest_path(&a.output, &a.manifest),
        &config,
        &hash,
        &[&a.output],
        json!({ "dof": r.dof, "critical_values": r.critical_values, "saturated_bands": r.saturated.iter().filter(|s| **s).count() }),
    )
}

pub fn cmd_subopt(a: &SuboptArgs) -> CliResult<()> {
    let (grid, digest) = match (&a.input, a.scheme) {
        (Some(p), _) => {
            let inp = read_series(p)?;
            (inp.series.grid().clone(), Some(inp.sha256))
        }
        (None, Some(s)) => (generate_grid(&SimConfig::standard(s, a.seed))?, None),
        (None, None) => return Err(CliError::Input("need --input or --scheme".into())),
    };
    let (sb, plan) = a.band.plan()?;
    let r = suboptimality(&grid, &sb, &plan, a.k)?;
    let config = canonical("subopt", a, digest.as_deref())?;
    let hash = config_hash(&config);
    let rows = (0..plan.len()).map(|i| {
        let flag = if r.failed[i] { "failed" } else { "ok" };
        vec![fmt_num(plan.centers()[i]), fmt_num(r.epsilon_measure[i]), flag.to_string()]
    });
    write_csv(&a.output, &hash, &["f_center", "epsilon", "flag"], rows)?;
    let max = r.epsilon_measure.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
    write_manifest(
        &manifest_path(&a.output, &a.manifest),
        &config,
        &hash,
        &[&a.output],
        json!({ "max_epsilon": max, "nominal_eigenvalues": r.nominal_eigenvalues }),
    )?;
    if r.failed.iter().any(|f| *f) {
        let bands: Vec<String> = (0..plan.len()).filter(|&i| r.failed[i]).map(|i| i.to_string()).collect();
        return Err(CliError::Numeric(format!("eigensolve failed at bands {}", bands.join(", "))));
    }
    Ok(())
}

pub fn cmd_simulate(a: &SimulateArgs) -> CliResult<()> {
    let mut cfg = SimConfig::standard(a.scheme, a.seed);
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(s) = a.jitter_sigma {
        cfg.jitter_sigma = s;
    }
    if let Some(l) = a.intensity {
        cfg.intensity = l;
    }
    let grid = generate_grid(&cfg)?;
    let noise_seed = crate::simkit::derive_seed(a.seed, 1, 0);
    let series = match (a.line_freq, a.noise_model) {
        (Some(f), NoiseModel::Iid) => {
            generate_line_plus_noise(&grid, f, a.amplitude, a.phase, a.noise_var, noise_seed)?
        }
        (line, model) => {
            let noise = if a.noise_var > 0.0 {
                NoiseSource::new(model, &grid, a.f_max, a.noise_var)?.sample(noise_seed)
            } else {
                SignalSeries::new(grid.clone(), vec![0.0; grid.len()])?
            };
            match line {
                Some(f) => {
                    let x = grid
                        .times()
                        .iter()
                        .zip(noise.values())
                        .map(|(t, z)| a.amplitude * (2.0 * std::f64::consts::PI * f * t + a.phase).cos() + z)
                        .collect();
                    SignalSeries::new(grid.clone(), x)?
                }
                None => noise,
            }
        }
    };
    let config = canonical("simulate", a, None)?;
    let hash = config_hash(&config);
    let rows = series.grid().times().iter().zip(series.values()).map(|(t, x)| vec![fmt_num(*t), fmt_num(*x)]);
    write_csv(&a.output, &hash, &["t", "x"], rows)
}

pub fn cmd_bench(a: &BenchArgs) -> CliResult<()> {
    let (methods, schemes) = if a.paper_protocol {
        (PROTOCOL_METHODS.to_vec(), Scheme::ALL.to_vec())
    } else {
        (a.methods.clone(), a.schemes.clone())
    };
    let mut cfg = BenchConfig { trials: a.trials, noise: a.noise_model, ..BenchConfig::default() };
    if let Some(s) = a.seed {
        cfg.base_seed = s;
    }
    std::fs::create_dir_all(&a.out_dir).map_err(|e| io_err(&a.out_dir, e))?;
    let config = json!({ "command": "bench", "args": a, "bench": cfg, "methods": methods, "schemes": schemes });
    let hash = config_hash(&config);

    let errors = run_error_analysis(&methods, &schemes, &cfg)?;
    let err_path = a.out_dir.join("error_analysis.csv");
    write_csv(&err_path, &hash, &ERROR_HEADER, errors.iter().flat_map(error_rows))?;
    let mut outputs = vec![err_path];

    let speed: Vec<SpeedReport> =
        if a.no_speed { Vec::new() } else { run_speed_analysis(&methods, &schemes, a.speed_reps, &cfg)? };
    if !speed.is_empty() {
        let speed_path = a.out_dir.join("speed.csv");
        let rows = speed.iter().map(|s| {
            vec![
                s.scheme.to_string(),
                s.method.to_string(),
                s.n_samples.to_string(),
                s.n_bands.to_string(),
                fmt_num(s.spectra_per_second),
                fmt_num(s.spectra_per_second_std),
                s.batch_size.to_string(),
                s.reps.to_string(),
            ]
        });
        write_csv(
            &speed_path,
            &hash,
            &[
                "scheme",
                "method",
                "n_samples",
                "n_bands",
                "spectra_per_second",
                "spectra_per_second_std",
                "batch_size",
                "reps",
            ],
            rows,
        )?;
        outputs.push(speed_path);
    }
    let refs: Vec<&Path> = outputs.iter().map(PathBuf::as_path).collect();
    write_manifest(&a.out_dir.join("bench.json"), &config, &hash, &refs, json!({ "error": errors, "speed": speed }))
}

const ERROR_HEADER: [&str; 11] = [
    "scheme",
    "method",
    "f_center",
    "included",
    "mse_db_mean",
    "mse_db_sem",
    "power_norm_mean",
    "power_norm_sem",
    "power_variance",
    "k_used",
    "f_w_used",
];

fn error_rows(r: &ErrorReport) -> impl Iterator<Item = Vec<String>> + '_ {
    (0..r.centers.len()).map(move |i| {
        vec![
            r.scheme.to_string(),
            r.method.to_string(),
            fmt_num(r.centers[i]),
            r.included[i].to_string(),
            fmt_num(r.mse_db[i].mean),
            fmt_num(r.mse_db[i].sem),
            fmt_num(r.normalized_power[i].mean),
            fmt_num(r.normalized_power[i].sem),
            fmt_num(r.power_variance[i]),
            r.k_used[i].to_string(),
            fmt_num(r.f_w_used[i]),
        ]
    })
}
