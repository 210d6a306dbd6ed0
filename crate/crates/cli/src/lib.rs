//! Subcommands of the `simplexwise` binary.
//!
//! Every command writes its result to a caller-supplied writer and reports
//! whether the outcome was positive; `main` turns that into an exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use simplexwise::geometry::{load_cloud, perturb, CloudFormat};
use simplexwise::invariants::{amd, pdd, sdd, sdm, sdv, Pdd};
use simplexwise::io::{
    fmt_sig17, moments_to_json, pdd_to_json, scd_to_json, sdd_to_json, vector_to_json,
};
use simplexwise::metrics::{
    bottleneck, emd, linf, moment_lower_bound, scd_dist, sdd_dist, CostMatrix,
    WeightedDistribution,
};
use simplexwise::oracle::{is_isometric_bruteforce, OracleOptions, Orientation};
use simplexwise::oriented::{cdm, scd};
use simplexwise::{
    Cloud, DistanceMode, Equivalence, MomentVector, Scd, Sdd, SignFeature, StrengthConfig,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] simplexwise::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

/// Whether a command found what it was asked to confirm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Positive,
    Negative,
}

#[derive(Parser, Debug)]
#[command(
    name = "simplexwise",
    version,
    about = "Isometry invariants and distances for finite point clouds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute an invariant of one cloud and print it as JSON.
    Invariant(InvariantArgs),
    /// Distance between the invariants of two clouds.
    Dist(DistArgs),
    /// Pairwise distance matrix of every cloud file in a directory, as CSV.
    Matrix(MatrixArgs),
    /// Check that distances to randomly perturbed copies stay within twice the noise.
    Perturb(PerturbArgs),
    /// Brute-force isometry test of two small clouds.
    Oracle(OracleArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Sdv,
    Pdd,
    Amd,
    Sdd,
    Scd,
    Sdm,
    Cdm,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Lac,
    Emd,
    Bottleneck,
    Linf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceArg {
    Rigid,
    Isometry,
}

impl From<EquivalenceArg> for Equivalence {
    fn from(e: EquivalenceArg) -> Self {
        match e {
            EquivalenceArg::Rigid => Equivalence::Rigid,
            EquivalenceArg::Isometry => Equivalence::Isometry,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Xyz,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureArg {
    Strength,
    Area,
}

/// Settings shared by every command that builds invariants.
#[derive(Args, Debug, Clone)]
pub struct InvariantOptions {
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Number of anchor points for sdd and sdm.
    #[arg(long, default_value_t = 2)]
    pub h: usize,
    /// Number of neighbors for amd; defaults to m - 1.
    #[arg(long)]
    pub k: Option<usize>,
    /// Moment order for sdm and cdm.
    #[arg(long, default_value_t = 1)]
    pub l: u32,
    /// Merge RDDs closer than this in the max-metric (0 merges exact duplicates).
    #[arg(long)]
    pub collapse_tol: Option<f64>,
    /// Keep one sdd entry per anchor subset.
    #[arg(long)]
    pub uncollapsed: bool,
    #[arg(long, value_enum, default_value_t = FeatureArg::Strength)]
    pub sign_feature: FeatureArg,
    /// Override the Lipschitz constant dividing the sign feature.
    #[arg(long)]
    pub c_n: Option<f64>,
    /// Use the given coordinates as they are instead of moving the centroid to the origin.
    #[arg(long)]
    pub no_precenter: bool,
}

impl InvariantOptions {
    fn strength_config(&self) -> CliResult<StrengthConfig> {
        let feature = match self.sign_feature {
            FeatureArg::Strength => SignFeature::Strength,
            FeatureArg::Area => SignFeature::Area,
        };
        let cfg = StrengthConfig::new(feature);
        Ok(match self.c_n {
            Some(c) => cfg.with_c_n(c)?,
            None => cfg,
        })
    }

    fn collapse(&self) -> CliResult<Option<f64>> {
        match (self.uncollapsed, self.collapse_tol) {
            (true, Some(_)) => Err(usage("--uncollapsed and --collapse-tol exclude each other")),
            (true, None) => Ok(None),
            (false, tol) => Ok(Some(tol.unwrap_or(0.0))),
        }
    }

    fn format_for(&self, path: &Path) -> CloudFormat {
        match self.format {
            Some(FormatArg::Csv) => CloudFormat::Csv,
            Some(FormatArg::Xyz) => CloudFormat::Xyz,
            None => CloudFormat::from_path(path),
        }
    }

    fn load(&self, path: &Path) -> CliResult<Cloud> {
        Ok(load_cloud(path, self.format_for(path))?)
    }
}

#[derive(Args, Debug)]
pub struct InvariantArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[command(flatten)]
    pub options: InvariantOptions,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Comparison {
    #[arg(long, value_enum, default_value_t = Kind::Sdd)]
    pub invariant: Kind,
    /// Defaults to emd for distributions and linf for vectors.
    #[arg(long, value_enum)]
    pub metric: Option<Metric>,
    #[arg(long, value_enum, default_value_t = EquivalenceArg::Rigid)]
    pub equivalence: EquivalenceArg,
    #[command(flatten)]
    pub options: InvariantOptions,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[command(flatten)]
    pub comparison: Comparison,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[arg(long)]
    pub dir: PathBuf,
    #[command(flatten)]
    pub comparison: Comparison,
    /// Skip the exact computation for pairs whose first-moment bound exceeds --threshold.
    #[arg(long, requires = "threshold")]
    pub prefilter: bool,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Worker threads for the pairwise computations.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub comparison: Comparison,
    /// Comma-separated noise radii.
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Tolerance relative to the larger diameter.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Largest cloud size the search accepts.
    #[arg(long, default_value_t = 9)]
    pub guard: usize,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<Status> {
    match cli.command {
        Command::Invariant(args) => cmd_invariant(&args, out),
        Command::Dist(args) => cmd_dist(&args, out),
        Command::Matrix(args) => cmd_matrix(&args, out),
        Command::Perturb(args) => cmd_perturb(&args, out),
        Command::Oracle(args) => cmd_oracle(&args, out),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn amd_k(cloud: &Cloud, k: Option<usize>) -> usize {
    k.unwrap_or(cloud.len().saturating_sub(1))
}

pub fn cmd_invariant(args: &InvariantArgs, out: &mut dyn Write) -> CliResult<Status> {
    let o = &args.options;
    let cloud = o.load(&args.input)?;
    let (m, n) = (cloud.len(), cloud.dim());
    let mut doc = match args.kind {
        Kind::Sdv => vector_to_json("sdv", m, n, &sdv(&cloud)?)?,
        Kind::Pdd => pdd_to_json(&pdd(&cloud)?)?,
        Kind::Amd => vector_to_json("amd", m, n, &amd(&cloud, amd_k(&cloud, o.k))?)?,
        Kind::Sdd => sdd_to_json(&sdd(&cloud, o.h, o.collapse()?)?)?,
        Kind::Scd => scd_to_json(&scd(&cloud, o.strength_config()?, !o.no_precenter)?)?,
        Kind::Sdm => moments_to_json("sdm", &sdm(&cloud, o.h, o.l)?)?,
        Kind::Cdm => moments_to_json("cdm", &cdm(&cloud, o.l, o.strength_config()?, !o.no_precenter)?)?,
    };
    doc.push('\n');
    emit(&doc, args.output.as_deref(), out)?;
    Ok(Status::Positive)
}

/// An invariant computed once per cloud and compared pairwise.
enum Prepared {
    Vector(Vec<f64>),
    Pdd(Pdd),
    Sdd(Sdd),
    Scd(Scd),
    Moments(MomentVector),
}

/// A validated comparison: which invariant, how it is built and which metric applies.
struct Plan {
    kind: Kind,
    metric: Metric,
    equivalence: Equivalence,
    cfg: StrengthConfig,
    options: InvariantOptions,
    collapse: Option<f64>,
}

impl Plan {
    fn new(c: &Comparison) -> CliResult<Self> {
        let metric = c.metric.unwrap_or(match c.invariant {
            Kind::Pdd | Kind::Sdd | Kind::Scd => Metric::Emd,
            _ => Metric::Linf,
        });
        let allowed: &[Metric] = match c.invariant {
            Kind::Sdv | Kind::Amd => &[Metric::Linf, Metric::Bottleneck],
            Kind::Sdm | Kind::Cdm => &[Metric::Linf],
            Kind::Pdd => &[Metric::Emd],
            Kind::Sdd | Kind::Scd => &[Metric::Emd, Metric::Lac],
        };
        if !allowed.contains(&metric) {
            return Err(usage(format!(
                "metric {metric:?} does not apply to {:?}",
                c.invariant
            )));
        }
        if c.equivalence == EquivalenceArg::Isometry && c.invariant != Kind::Scd {
            return Err(usage(
                "--equivalence isometry applies to scd; distance-based invariants ignore orientation already",
            ));
        }
        let collapse = match (c.invariant, metric) {
            (Kind::Sdd, Metric::Lac) => {
                if c.options.collapse_tol.is_some() {
                    return Err(usage("lac compares uncollapsed distributions; drop --collapse-tol"));
                }
                None
            }
            _ => c.options.collapse()?,
        };
        Ok(Self {
            kind: c.invariant,
            metric,
            equivalence: c.equivalence.into(),
            cfg: c.options.strength_config()?,
            options: c.options.clone(),
            collapse,
        })
    }

    fn mode(&self) -> DistanceMode {
        match self.metric {
            Metric::Lac => DistanceMode::Lac,
            _ => DistanceMode::Emd,
        }
    }

    fn prepare(&self, cloud: &Cloud) -> CliResult<Prepared> {
        let o = &self.options;
        let precenter = !o.no_precenter;
        Ok(match self.kind {
            Kind::Sdv => Prepared::Vector(sdv(cloud)?),
            Kind::Amd => Prepared::Vector(amd(cloud, amd_k(cloud, o.k))?),
            Kind::Pdd => Prepared::Pdd(pdd(cloud)?),
            Kind::Sdd => Prepared::Sdd(sdd(cloud, o.h, self.collapse)?),
            Kind::Scd => {
                let s = scd(cloud, self.cfg, precenter)?;
                Prepared::Scd(if self.metric == Metric::Lac { s.expanded() } else { s })
            }
            Kind::Sdm => Prepared::Moments(sdm(cloud, o.h, o.l)?),
            Kind::Cdm => Prepared::Moments(cdm(cloud, o.l, self.cfg, precenter)?),
        })
    }

    /// First-moment vector whose `L∞` difference bounds the EMD from below.
    fn bound_vector(&self, cloud: &Cloud) -> CliResult<Option<MomentVector>> {
        if self.metric != Metric::Emd {
            return Ok(None);
        }
        Ok(match self.kind {
            Kind::Sdd => Some(sdm(cloud, self.options.h, 1)?),
            Kind::Scd => Some(cdm(cloud, 1, self.cfg, !self.options.no_precenter)?),
            _ => None,
        })
    }

    fn distance(&self, a: &Prepared, b: &Prepared) -> CliResult<f64> {
        Ok(match (a, b) {
            (Prepared::Vector(x), Prepared::Vector(y)) => match self.metric {
                Metric::Bottleneck => {
                    let points = |v: &[f64]| v.iter().map(|&t| vec![t]).collect::<Vec<_>>();
                    bottleneck(&points(x), &points(y))?
                }
                _ => linf(x, y)?,
            },
            (Prepared::Moments(x), Prepared::Moments(y)) => moment_lower_bound(x, y)?,
            (Prepared::Pdd(x), Prepared::Pdd(y)) => pdd_emd(x, y)?,
            (Prepared::Sdd(x), Prepared::Sdd(y)) => sdd_dist(x, y, self.mode())?,
            (Prepared::Scd(x), Prepared::Scd(y)) => {
                scd_dist(x, y, self.mode(), self.equivalence, &self.cfg)?
            }
            _ => unreachable!("both sides are prepared by the same plan"),
        })
    }
}

fn pdd_emd(x: &Pdd, y: &Pdd) -> CliResult<f64> {
    let weights = |p: &Pdd| {
        WeightedDistribution::from_counts(&p.rows().iter().map(|r| r.1).collect::<Vec<_>>())
    };
    let costs = CostMatrix::from_fn(x.rows().len(), y.rows().len(), |i, j| {
        linf(&x.rows()[i].0, &y.rows()[j].0)
    })?;
    Ok(emd(&weights(x)?, &weights(y)?, &costs)?)
}

pub fn cmd_dist(args: &DistArgs, out: &mut dyn Write) -> CliResult<Status> {
    let plan = Plan::new(&args.comparison)?;
    let o = &args.comparison.options;
    let (a, b) = (o.load(&args.a)?, o.load(&args.b)?);
    let d = plan.distance(&plan.prepare(&a)?, &plan.prepare(&b)?)?;
    writeln!(out, "{}", fmt_sig17(d)).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    Ok(Status::Positive)
}

fn cloud_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let io_err = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        let known = matches!(
            path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
            Some("csv" | "xyz" | "txt")
        );
        if path.is_file() && known {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.len() < 2 {
        return Err(usage(format!(
            "{} holds {} cloud file(s); at least 2 are needed",
            dir.display(),
            files.len()
        )));
    }
    Ok(files)
}

pub fn cmd_matrix(args: &MatrixArgs, out: &mut dyn Write) -> CliResult<Status> {
    let plan = Plan::new(&args.comparison)?;
    if args.prefilter && plan.metric != Metric::Emd {
        return Err(usage("--prefilter applies to sdd or scd compared with emd"));
    }
    let files = cloud_files(&args.dir)?;
    let clouds = files
        .iter()
        .map(|f| args.comparison.options.load(f))
        .collect::<CliResult<Vec<_>>>()?;
    let prepared = clouds.iter().map(|c| plan.prepare(c)).collect::<CliResult<Vec<_>>>()?;
    let bounds = if args.prefilter {
        clouds.iter().map(|c| plan.bound_vector(c)).collect::<CliResult<Vec<_>>>()?
    } else {
        vec![None; clouds.len()]
    };
    let k = files.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let compute = || {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                if let (Some(x), Some(y), Some(t)) = (&bounds[i], &bounds[j], args.threshold) {
                    if moment_lower_bound(x, y)? > t {
                        return Ok(f64::INFINITY);
                    }
                }
                plan.distance(&prepared[i], &prepared[j])
            })
            .collect::<CliResult<Vec<f64>>>()
    };
    let values = match args.jobs {
        Some(0) => return Err(usage("--jobs must be at least 1")),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| usage(e.to_string()))?
            .install(compute)?,
        None => compute()?,
    };
    let mut matrix = vec![0.0; k * k];
    for (&(i, j), v) in pairs.iter().zip(values) {
        matrix[i * k + j] = v;
        matrix[j * k + i] = v;
    }
    let names: Vec<String> = files
        .iter()
        .map(|f| f.file_name().unwrap_or_default().to_string_lossy().into_owned())
        .collect();
    let mut csv = format!("name,{}\n", names.join(","));
    for (i, name) in names.iter().enumerate() {
        let row: Vec<String> = matrix[i * k..(i + 1) * k].iter().map(|&v| fmt_sig17(v)).collect();
        csv.push_str(&format!("{name},{}\n", row.join(",")));
    }
    emit(&csv, args.output.as_deref(), out)?;
    Ok(Status::Positive)
}

/// Seed of one perturbation trial, distinct for every radius and trial index.
fn trial_seed(seed: u64, eps_index: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ ((eps_index as u64) << 32)
        ^ trial as u64
}

pub fn cmd_perturb(args: &PerturbArgs, out: &mut dyn Write) -> CliResult<Status> {
    let plan = Plan::new(&args.comparison)?;
    if !matches!(plan.kind, Kind::Sdd | Kind::Scd) {
        return Err(usage("perturb compares sdd or scd distributions"));
    }
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if let Some(e) = args.eps.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(usage(format!("noise radius {e} must be finite and non-negative")));
    }
    let cloud = args.comparison.options.load(&args.input)?;
    let base = plan.prepare(&cloud)?;
    let mut status = Status::Positive;
    let mut report = String::new();
    for (idx, &eps) in args.eps.iter().enumerate() {
        let worst = (0..args.trials)
            .into_par_iter()
            .map(|t| {
                let moved = perturb(&cloud, eps, trial_seed(args.seed, idx, t))?;
                plan.distance(&base, &plan.prepare(&moved)?)
            })
            .collect::<CliResult<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let pass = worst <= 2.0 * eps + 1e-9;
        if !pass {
            status = Status::Negative;
        }
        let ratio = if eps > 0.0 { fmt_sig17(worst / eps) } else { "n/a".into() };
        report.push_str(&format!(
            "eps={} trials={} max={} ratio={ratio} {}\n",
            fmt_sig17(eps),
            args.trials,
            fmt_sig17(worst),
            if pass { "PASS" } else { "FAIL" }
        ));
    }
    emit(&report, None, out)?;
    Ok(status)
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> CliResult<Status> {
    let load = |p: &Path| -> CliResult<Cloud> {
        let format = match args.format {
            Some(FormatArg::Csv) => CloudFormat::Csv,
            Some(FormatArg::Xyz) => CloudFormat::Xyz,
            None => CloudFormat::from_path(p),
        };
        Ok(load_cloud(p, format)?)
    };
    let (a, b) = (load(&args.a)?, load(&args.b)?);
    let options = OracleOptions {
        tol: args.tol,
        guard: args.guard,
    };
    let verdict = is_isometric_bruteforce(&a, &b, options)?;
    let text = match verdict.orientation {
        Orientation::Rigid => "isometric rigid",
        Orientation::Reflected => "isometric reflected",
        Orientation::None => "not isometric",
    };
    emit(&format!("{text}\n"), None, out)?;
    Ok(if verdict.isometric { Status::Positive } else { Status::Negative })
}
