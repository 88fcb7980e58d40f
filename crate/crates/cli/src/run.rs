//! Snapshot, timeline and Monte Carlo runs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;
use vvlc_core::cir::{evolve, link_cir, mimo_matrix, ImpulseResponse, PathTap};
use vvlc_core::geometry::{RxElement, TxElement};
use vvlc_core::metrics::{describe, ChannelStats};
use vvlc_core::scatter::{populate, Family};
use vvlc_core::scene::{build_scene, ScenarioConfig, Scene};
use vvlc_core::{Error as CoreError, ErrorCategory};

use crate::config::{apply_overrides, parse_config, ConfigError};
use crate::output::{self, LinkStats, Manifest, SummaryDocument, TimelineWriter};

/// Realization count of a Monte Carlo run when none is given.
pub const DEFAULT_REALIZATIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Snapshot,
    Timeline,
    MonteCarlo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Snapshot => "snapshot",
            Mode::Timeline => "timeline",
            Mode::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub mode: Mode,
    /// Config file; `None` runs the defaults.
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Overrides the config's seed.
    pub seed: Option<u64>,
    /// Monte Carlo only.
    pub realizations: Option<usize>,
    /// `key=value` items applied over the config file, in order.
    pub overrides: Vec<String>,
    /// Worker threads for Monte Carlo; `None` uses all cores.
    pub threads: Option<usize>,
}

impl RunRequest {
    pub fn new(mode: Mode, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            mode,
            config_path: None,
            out_dir: out_dir.into(),
            seed: None,
            realizations: None,
            overrides: Vec::new(),
            threads: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("config error: {0}")]
    Request(String),
    #[error("geometry error: {0}")]
    Geometry(CoreError),
    #[error("io error: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e.category() {
            ErrorCategory::Config => RunError::Config(ConfigError::Domain(e)),
            ErrorCategory::Geometry => RunError::Geometry(e),
        }
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Request(_) => 1,
            RunError::Geometry(_) => 2,
            RunError::Io { .. } => 3,
        }
    }
}

/// Output file name and contents.
type Files = BTreeMap<String, String>;

/// Summary of a finished run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: ScenarioConfig,
    /// Written files, manifest included.
    pub files: Vec<PathBuf>,
}

/// Resolves the request's config: file (or defaults), overrides, then seed.
pub fn resolve_config(request: &RunRequest) -> Result<ScenarioConfig, RunError> {
    let base = match &request.config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| RunError::Io { path: path.clone(), source })?;
            parse_config(&text)?
        }
        None => ScenarioConfig::default(),
    };
    let mut config = apply_overrides(base, &request.overrides)?;
    if let Some(seed) = request.seed {
        config.seed = seed;
    }
    Ok(config)
}

pub fn run(request: &RunRequest) -> Result<RunOutcome, RunError> {
    let config = resolve_config(request)?;
    let realizations = match request.mode {
        Mode::MonteCarlo => {
            let n = request.realizations.unwrap_or(DEFAULT_REALIZATIONS);
            if n == 0 {
                return Err(RunError::Request("realization count must be at least 1".into()));
            }
            Some(n)
        }
        _ if request.realizations.is_some() => {
            return Err(RunError::Request(format!(
                "--realizations applies to monte-carlo runs, not {}",
                request.mode.name()
            )));
        }
        _ => None,
    };
    let scene = build_scene(config.clone())?;
    let files = match request.mode {
        Mode::Snapshot => snapshot(&scene)?,
        Mode::Timeline => timeline(&scene)?,
        Mode::MonteCarlo => {
            let n = realizations.unwrap_or(DEFAULT_REALIZATIONS);
            match request.threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| RunError::Request(format!("thread pool: {e}")))?
                    .install(|| monte_carlo(&scene, n))?,
                None => monte_carlo(&scene, n)?,
            }
        }
    };
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        core_version: vvlc_core::VERSION,
        mode: request.mode.name(),
        seed: config.seed,
        realizations,
        config_hash: config_hash(&config),
        files: files
            .iter()
            .map(|(name, body)| (name.clone(), output::sha256_hex(body.as_bytes())))
            .collect(),
    };
    let written = write_all(&request.out_dir, &files, &output::json(&manifest))?;
    Ok(RunOutcome { config, files: written })
}

/// SHA-256 of the config's canonical JSON form.
pub fn config_hash(config: &ScenarioConfig) -> String {
    let json = serde_json::to_string(config).expect("serializable");
    output::sha256_hex(json.as_bytes())
}

fn write_all(dir: &Path, files: &Files, manifest: &str) -> Result<Vec<PathBuf>, RunError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::with_capacity(files.len() + 1);
    for (name, body) in files.iter().map(|(n, b)| (n.as_str(), b.as_str())).chain([("manifest.json", manifest)]) {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(io(&path))?;
        written.push(path);
    }
    Ok(written)
}

/// Stats of a tap list, `None` when it carries no power.
fn stats_or_none(taps: &[PathTap]) -> Result<Option<ChannelStats>, RunError> {
    match ChannelStats::of(taps) {
        Ok(s) => Ok(Some(s)),
        Err(CoreError::NoReceivedPower) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn link_stats(cir: &ImpulseResponse) -> Result<LinkStats, RunError> {
    let family = |f: Family| -> Result<Option<ChannelStats>, RunError> {
        let taps: Vec<PathTap> = cir.of_family(f).copied().collect();
        stats_or_none(&taps)
    };
    let (tx, rx) = cir.link();
    Ok(LinkStats {
        tx: tx.label(),
        rx: rx.label(),
        total: stats_or_none(cir.taps())?,
        sb11: family(Family::Wall1)?,
        sb12: family(Family::Wall2)?,
        sb13: family(Family::Mobile)?,
    })
}

fn snapshot(scene: &Scene) -> Result<Files, RunError> {
    let scene = populate(scene, 0)?;
    let matrix = mimo_matrix(&scene)?;
    let mut files = Files::new();
    let mut stats = Vec::new();
    for cir in matrix.iter() {
        files.insert(format!("taps_{}.csv", output::link_name(cir)), output::taps_csv(cir));
        stats.push(link_stats(cir)?);
    }
    files.insert("stats.json".into(), output::json(&stats));
    Ok(files)
}

fn timeline(scene: &Scene) -> Result<Files, RunError> {
    let scene = populate(scene, 0)?;
    let grid = scene.config().time_grid();
    let mut writer = TimelineWriter::new();
    for snap in evolve(&scene, &grid)? {
        let link = snap.matrix.get(TxElement::P, RxElement::Q);
        writer.push(snap.time, link, snap.matrix.iter());
    }
    let mut files = Files::new();
    files.insert("timeline.csv".into(), writer.summary);
    files.insert("timeline_taps.csv".into(), writer.taps);
    Ok(files)
}

/// Link (p, q) stats of realizations `0..n`, in index order.
pub fn monte_carlo_stats(scene: &Scene, n: usize) -> Result<Vec<ChannelStats>, RunError> {
    let results: Vec<Result<ChannelStats, CoreError>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let scene = populate(scene, i)?;
            let cir = link_cir(&scene, TxElement::P, RxElement::Q)?;
            ChannelStats::of(cir.taps())
        })
        .collect();
    results.into_iter().map(|r| r.map_err(RunError::from)).collect()
}

fn monte_carlo(scene: &Scene, n: usize) -> Result<Files, RunError> {
    let rows = monte_carlo_stats(scene, n)?;
    let column = |f: fn(&ChannelStats) -> f64| {
        let values: Vec<f64> = rows.iter().map(f).collect();
        describe(&values).ok()
    };
    let summary = SummaryDocument {
        realizations: n,
        link: "p_q".into(),
        gain_db: column(|s| s.gain_db),
        rms_delay_spread_s: column(|s| s.rms_delay_spread),
    };
    let mut files = Files::new();
    files.insert("realizations.csv".into(), output::realizations_csv(&rows));
    files.insert("summary.json".into(), output::json(&summary));
    Ok(files)
}
