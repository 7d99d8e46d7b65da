//! Command-line front end: run configuration, the three commands and report
//! rendering. Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 bad
//! input or configuration.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{get_family, sample_valid_params, CatalogEntry, FamilyTag, ParamPoint};
use crate::error::{Error, Result};
use crate::perturb::{PerturbationKind, Perturbed};
use crate::spectral::{self, Isospectrality, Remainder};
use crate::superpotential::{GridSpec, Superpotential};
use crate::verifier::{self, Check, CheckResult, Grid, PointRun, ResidualReport, Tolerances};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const DEFAULT_CHECKS: [Check; 6] = [
    Check::Translation,
    Check::Compatibility,
    Check::InfeldHull,
    Check::Algebra,
    Check::Equivalence,
    Check::Remainder,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub kind: PerturbationKind,
    pub size: f64,
}

/// One point or a list of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamInput {
    One(ParamPoint),
    Many(Vec<ParamPoint>),
}

impl ParamInput {
    fn into_vec(self) -> Vec<ParamPoint> {
        match self {
            ParamInput::One(p) => vec![p],
            ParamInput::Many(v) => v,
        }
    }
}

fn default_levels() -> usize {
    5
}

fn default_spectrum_points() -> usize {
    4000
}

fn default_timestamp() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: FamilyTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<Sampler>,
    /// Explicit translated-parameter values; defaults to `m, m-1, m-2` per point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<f64>>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// Levels compared by the spectral check.
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_spectrum_points")]
    pub spectrum_points: usize,
    #[serde(default = "default_timestamp")]
    pub timestamp: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb: Option<Perturbation>,
}

impl RunConfig {
    pub fn new(family: FamilyTag) -> Self {
        RunConfig {
            family,
            params: None,
            sample: None,
            m_list: None,
            grid: GridSpec::default(),
            checks: None,
            tolerances: Tolerances::default(),
            format: Format::Json,
            out: None,
            jobs: None,
            levels: default_levels(),
            spectrum_points: default_spectrum_points(),
            timestamp: true,
            perturb: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.tolerances.validate()?;
        if let Some(checks) = &self.checks {
            if checks.is_empty() {
                return Err(Error::Usage("at least one check must be selected".into()));
            }
        }
        match (&self.params, &self.sample) {
            (Some(_), Some(_)) => return Err(Error::Usage("give either params or a sampler, not both".into())),
            (None, None) => return Err(Error::Usage("no parameters: pass --params or --sample".into())),
            (None, Some(s)) if s.count == 0 => return Err(Error::Usage("sample count must be at least 1".into())),
            _ => {}
        }
        if self.sample.is_some() && self.m_list.is_some() {
            return Err(Error::Usage("--m-list cannot be combined with sampled parameters".into()));
        }
        if let Some(ms) = &self.m_list {
            if ms.is_empty() || ms.iter().any(|m| !m.is_finite()) {
                return Err(Error::Usage("m list must hold finite values".into()));
            }
        }
        if self.levels == 0 {
            return Err(Error::Usage("spectral level count k must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        if let Some(p) = &self.perturb {
            if !p.size.is_finite() {
                return Err(Error::Usage("perturbation size must be finite".into()));
            }
        }
        Ok(())
    }

    /// Parameter points, with `m` replaced by the first entry of `m_list`.
    pub fn points(&self) -> Result<Vec<ParamPoint>> {
        let mut points = match (&self.params, &self.sample) {
            (Some(p), _) => p.clone().into_vec(),
            (None, Some(s)) => sample_valid_params(self.family, s.count, s.seed)?,
            (None, None) => Vec::new(),
        };
        if points.is_empty() {
            return Err(Error::Usage("empty parameter list".into()));
        }
        if let Some(ms) = &self.m_list {
            for p in &mut points {
                p.m = ms[0];
            }
        }
        Ok(points)
    }

    fn m_list_for(&self, point: &ParamPoint) -> Vec<f64> {
        self.m_list
            .clone()
            .unwrap_or_else(|| vec![point.m, point.m - 1.0, point.m - 2.0])
    }

    fn selected_checks(&self) -> (Vec<Check>, bool) {
        match &self.checks {
            Some(c) => {
                let mut v = c.clone();
                v.sort();
                v.dedup();
                (v, true)
            }
            None => (DEFAULT_CHECKS.to_vec(), false),
        }
    }

    fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            builder = builder.num_threads(j);
        }
        builder.build().map_err(|e| Error::Usage(format!("thread pool: {e}")))
    }
}

fn instantiate(config: &RunConfig, point: &ParamPoint) -> Result<(CatalogEntry, Arc<dyn Superpotential>)> {
    let entry = get_family(config.family, point)?;
    let base = entry.superpotential();
    let family: Arc<dyn Superpotential> = match config.perturb {
        Some(p) => Arc::new(Perturbed::new(base, p.kind, p.size)),
        None => base,
    };
    Ok((entry, family))
}

/// Report for one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub index: usize,
    #[serde(flatten)]
    pub residuals: ResidualReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remainder: Option<Remainder>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Isospectrality>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub family: FamilyTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb: Option<Perturbation>,
    pub points: Vec<PointReport>,
    pub pass: bool,
}

fn timestamp(enabled: bool) -> Option<u64> {
    enabled.then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    })
}

fn verify_point(config: &RunConfig, index: usize, point: &ParamPoint) -> Result<PointReport> {
    let (entry, family) = instantiate(config, point)?;
    let (checks, explicit) = config.selected_checks();
    let m_list = config.m_list_for(point);
    let m = m_list[0];
    let run = PointRun {
        family: family.as_ref(),
        name: config.family.as_str().to_string(),
        params: entry.params.clone(),
        m_list: m_list.clone(),
        grid: config.grid,
        tolerances: config.tolerances,
        expected: Some(entry.expected),
    };
    let mut residuals = verifier::run_identity_checks(&run, &checks)?;
    let mut remainder = None;
    let mut spectrum = None;
    let unsupported = |what: &str| Error::Unsupported(format!("complex family unsupported for {what}"));

    if checks.contains(&Check::Remainder) {
        if family.is_real() {
            let grid = Grid::build(family.as_ref(), m, &config.grid)?;
            let r = spectral::remainder(family.as_ref(), m, &grid.points)?;
            residuals
                .checks
                .insert(Check::Remainder, CheckResult::new(r.flatness_residual, config.tolerances.remainder));
            remainder = Some(r);
        } else if explicit {
            return Err(unsupported("remainder"));
        } else {
            residuals
                .checks
                .insert(Check::Remainder, CheckResult::skipped("complex family unsupported for spectra"));
        }
    }
    if checks.contains(&Check::Spectrum) {
        if !family.is_real() {
            return Err(unsupported("spectra"));
        }
        let iso = spectral::check_isospectrality(family.as_ref(), m, config.levels, config.spectrum_points)?;
        residuals
            .checks
            .insert(Check::Spectrum, CheckResult::new(iso.mismatch, config.tolerances.spectrum));
        spectrum = Some(iso);
    }
    let pass = residuals.all_pass();
    Ok(PointReport {
        index,
        residuals,
        remainder,
        spectrum,
        pass,
    })
}

/// Runs every parameter point concurrently; results keep input order.
fn run_points<T: Send>(
    config: &RunConfig,
    f: impl Fn(usize, &ParamPoint) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let points = config.points()?;
    let pool = config.thread_pool()?;
    let results: Vec<Result<T>> =
        pool.install(|| points.par_iter().enumerate().map(|(i, p)| f(i, p)).collect());
    results.into_iter().collect()
}

pub fn verify(config: &RunConfig) -> Result<VerifyReport> {
    config.validate()?;
    let points = run_points(config, |i, p| verify_point(config, i, p))?;
    let pass = points.iter().all(|p| p.pass);
    Ok(VerifyReport {
        command: "verify".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        generated_unix: timestamp(config.timestamp),
        family: config.family,
        perturb: config.perturb,
        points,
        pass,
    })
}

/// Sampled series for plotting: `x` then one column per series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ScanTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn fmt_m(m: f64) -> String {
    format!("m={m}")
}

/// `epsilon(x)` at every m of `m_list` side by side, and for real families
/// the partner potentials at each m, on the grid built at `m_list[0]`.
pub fn scan_table(family: &dyn Superpotential, m_list: &[f64], spec: &GridSpec) -> Result<ScanTable> {
    let m0 = *m_list.first().ok_or_else(|| Error::Usage("empty m list".into()))?;
    let grid = Grid::build(family, m0, spec)?;
    let mut columns = vec!["x".to_string()];
    let mut series: Vec<Vec<f64>> = Vec::new();
    for &m in m_list {
        let eps: Vec<_> = grid
            .points
            .iter()
            .map(|&x| verifier::compatibility_lhs(family, m, x))
            .collect::<Result<_>>()?;
        columns.push(format!("eps_re[{}]", fmt_m(m)));
        series.push(eps.iter().map(|e| e.re).collect());
        columns.push(format!("eps_im[{}]", fmt_m(m)));
        series.push(eps.iter().map(|e| e.im).collect());
    }
    if family.is_real() {
        for &m in m_list {
            let (vm, vp) = spectral::partner_potentials(family, m, &grid.points)?;
            columns.push(format!("v_minus[{}]", fmt_m(m)));
            series.push(vm.values);
            columns.push(format!("v_plus[{}]", fmt_m(m)));
            series.push(vp.values);
        }
    }
    let rows = grid
        .points
        .iter()
        .enumerate()
        .map(|(i, &x)| std::iter::once(x).chain(series.iter().map(|s| s[i])).collect())
        .collect();
    Ok(ScanTable { columns, rows })
}

pub fn scan(config: &RunConfig) -> Result<ScanTable> {
    config.validate()?;
    let points = config.points()?;
    if points.len() != 1 {
        return Err(Error::Usage(format!("scan takes one parameter point, got {}", points.len())));
    }
    let (_, family) = instantiate(config, &points[0])?;
    scan_table(family.as_ref(), &config.m_list_for(&points[0]), &config.grid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub index: usize,
    pub params: ParamPoint,
    #[serde(flatten)]
    pub result: Isospectrality,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub family: FamilyTag,
    pub levels: usize,
    pub points: Vec<SpectrumPoint>,
    pub pass: bool,
}

pub fn spectrum(config: &RunConfig) -> Result<SpectrumReport> {
    config.validate()?;
    if !config.family.is_real() {
        return Err(Error::Unsupported("complex family unsupported for spectra".into()));
    }
    let tol = config.tolerances.spectrum;
    let points = run_points(config, |index, point| {
        let (entry, family) = instantiate(config, point)?;
        let m = config.m_list_for(point)[0];
        let result = spectral::check_isospectrality(family.as_ref(), m, config.levels, config.spectrum_points)?;
        let pass = result.mismatch < tol;
        Ok(SpectrumPoint {
            index,
            params: entry.params,
            result,
            tolerance: tol,
            pass,
        })
    })?;
    let pass = points.iter().all(|p| p.pass);
    Ok(SpectrumReport {
        command: "spectrum".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        generated_unix: timestamp(config.timestamp),
        family: config.family,
        levels: config.levels,
        points,
        pass,
    })
}

// ---------------------------------------------------------------------------
// rendering

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn csv_string(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_error)?;
    for r in rows {
        w.write_record(&r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render_verify(report: &VerifyReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let header = ["point", "check", "residual", "tolerance", "pass", "note"].map(String::from);
            let rows = report.points.iter().flat_map(|p| {
                p.residuals.checks.iter().map(move |(check, r)| {
                    vec![
                        p.index.to_string(),
                        check.to_string(),
                        fmt_float(r.residual),
                        fmt_float(r.tolerance),
                        r.pass.to_string(),
                        r.note.clone().unwrap_or_default(),
                    ]
                })
            });
            csv_string(&header, rows)
        }
    }
}

pub fn render_scan(table: &ScanTable, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(table),
        Format::Csv => csv_string(
            &table.columns,
            table.rows.iter().map(|r| r.iter().map(|v| fmt_float(*v)).collect()),
        ),
    }
}

pub fn render_spectrum(report: &SpectrumReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let header = ["point", "level", "e_plus", "e_minus_shifted", "error_plus", "error_minus_shifted", "remainder"]
                .map(String::from);
            let rows = report.points.iter().flat_map(|p| {
                let r = &p.result;
                (0..r.plus.eigenvalues.len()).map(move |i| {
                    vec![
                        p.index.to_string(),
                        i.to_string(),
                        fmt_float(r.plus.eigenvalues[i]),
                        fmt_float(r.minus_shifted.eigenvalues[i]),
                        fmt_float(r.plus.error_estimates[i]),
                        fmt_float(r.minus_shifted.error_estimates[i]),
                        fmt_float(r.remainder.r),
                    ]
                })
            });
            csv_string(&header, rows)
        }
    }
}

// ---------------------------------------------------------------------------
// command line

#[derive(Debug, Parser)]
#[command(name = "shapeinv", version, about = "Check shape-invariance identities of extended superpotential families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run residual checks and write a verdict report.
    Verify(CommonArgs),
    /// Emit epsilon(x) and partner potentials on the grid for plotting.
    Scan(CommonArgs),
    /// Compare spectra of V+(., m) and V-(., m-1) + R.
    Spectrum(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Family tag, e.g. X1-hyperbolic.
    #[arg(long)]
    pub family: Option<String>,
    /// Parameter point(s): a JSON file, inline JSON, or key=value pairs
    /// such as "omega=1,d=1,m=-2".
    #[arg(long)]
    pub params: Option<String>,
    /// Draw N valid parameter points.
    #[arg(long, value_name = "N")]
    pub sample: Option<usize>,
    /// Sampler seed.
    #[arg(long, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated m values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub m_list: Option<Vec<f64>>,
    /// Comma-separated subset of translation, compatibility, infeld_hull,
    /// algebra, equivalence, remainder, spectrum.
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
    /// Grid size for the identity checks.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Tolerance applied to every identity check.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Report format (default json).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for multi-point runs.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Number of spectral levels.
    #[arg(short = 'k', long)]
    pub levels: Option<usize>,
    /// Finite-difference grid size for spectra.
    #[arg(long)]
    pub spectrum_points: Option<usize>,
    /// Omit the generation time so reports are byte-reproducible.
    #[arg(long)]
    pub no_timestamp: bool,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub perturb: Option<f64>,
    #[arg(long, hide = true)]
    pub perturb_kind: Option<String>,
}

fn parse_key_values(s: &str) -> Result<ParamPoint> {
    let mut values = BTreeMap::new();
    let mut ell = None;
    let mut m = None;
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Schema(format!("expected key=value, got '{pair}'")))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "ell" => ell = Some(v.parse::<u32>().map_err(|e| Error::Schema(format!("ell: {e}")))?),
            _ => {
                let x = v.parse::<f64>().map_err(|e| Error::Schema(format!("{k}: {e}")))?;
                if k == "m" {
                    m = Some(x);
                } else {
                    values.insert(k.to_string(), x);
                }
            }
        }
    }
    let m = m.ok_or_else(|| Error::Schema("parameter point needs 'm'".into()))?;
    Ok(ParamPoint { values, ell, m })
}

fn parse_params(arg: &str) -> Result<ParamInput> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else if Path::new(arg).is_file() {
        fs::read_to_string(arg)?
    } else {
        return parse_key_values(arg).map(ParamInput::One);
    };
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("params: {e}")))
}

impl CommonArgs {
    pub fn into_config(self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<RunConfig>(&text).map_err(|e| Error::Schema(format!("config: {e}")))?
            }
            None => {
                let tag = self
                    .family
                    .as_deref()
                    .ok_or_else(|| Error::Usage("--family is required".into()))?;
                RunConfig::new(tag.parse()?)
            }
        };
        if let Some(tag) = &self.family {
            config.family = tag.parse()?;
        }
        if let Some(p) = &self.params {
            config.params = Some(parse_params(p)?);
            config.sample = None;
        }
        if let Some(count) = self.sample {
            config.sample = Some(Sampler { count, seed: self.seed });
            config.params = None;
        }
        if self.m_list.is_some() {
            config.m_list = self.m_list.clone();
        }
        if let Some(checks) = &self.checks {
            config.checks = Some(checks.iter().map(|c| c.parse()).collect::<Result<_>>()?);
        }
        if let Some(n) = self.grid_points {
            config.grid.n_points = n;
        }
        if let Some(t) = self.tol {
            config.tolerances = Tolerances::uniform(t);
        }
        if let Some(f) = self.format {
            config.format = f;
        }
        if self.out.is_some() {
            config.out = self.out.clone();
        }
        if self.jobs.is_some() {
            config.jobs = self.jobs;
        }
        if let Some(k) = self.levels {
            config.levels = k;
        }
        if let Some(n) = self.spectrum_points {
            config.spectrum_points = n;
        }
        if self.no_timestamp {
            config.timestamp = false;
        }
        match (self.perturb, &self.perturb_kind) {
            (Some(size), kind) => {
                let kind = kind.as_deref().unwrap_or("translation").parse()?;
                config.perturb = Some(Perturbation { kind, size });
            }
            (None, Some(_)) => return Err(Error::Usage("--perturb-kind needs --perturb".into())),
            (None, None) => {}
        }
        Ok(config)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Verify(args) => {
            let config = args.into_config()?;
            let report = verify(&config)?;
            emit(&render_verify(&report, config.format)?, config.out.as_deref())?;
            Ok(report.pass)
        }
        Command::Scan(args) => {
            let config = args.into_config()?;
            let table = scan(&config)?;
            emit(&render_scan(&table, config.format)?, config.out.as_deref())?;
            Ok(true)
        }
        Command::Spectrum(args) => {
            let config = args.into_config()?;
            let report = spectrum(&config)?;
            emit(&render_spectrum(&report, config.format)?, config.out.as_deref())?;
            Ok(report.pass)
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_VIOLATION,
        Err(e) => {
            eprintln!("shapeinv: {e}");
            EXIT_INPUT
        }
    }
}
