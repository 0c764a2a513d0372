//! The `lcong` command line: single verifications, config-driven sweeps,
//! value tables and cache maintenance.
//!
//! Exit codes: 0 when every in-hypothesis check holds, 1 when one fails,
//! 2 for usage or configuration errors, 3 for I/O, cache or internal errors.

pub mod cache;
pub mod config;
pub mod registry;
pub mod report;
pub mod tables;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bernoulli::BernoulliCache;
use crate::characters::Parity;
use cache::{default_cache_path, FileCache, CACHE_DIR_ENV};
use config::{Job, SweepConfig, Values};
use registry::{expand, REGISTRY};
use report::{Summary, SweepReport};
use tables::{value_tables, TableKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },
    #[error("cache error: {0}")]
    Cache(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

/// Runs every job of `config`, writing reports and extending the cache if configured.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, CliError> {
    config.validate()?;
    let start = Instant::now();
    let mut tasks = Vec::new();
    for job in &config.jobs {
        tasks.extend(expand(job)?);
    }

    let global = BernoulliCache::global();
    let file_cache = config.cache.as_ref().map(FileCache::new);
    let known = match &file_cache {
        Some(fc) => Some(fc.load_into(global)?),
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let results: Vec<_> = pool.install(|| {
        use rayon::prelude::*;
        tasks.par_iter().map(|t| (t.entry.id, t.evaluate())).collect()
    });

    let mut verdicts = Vec::new();
    let mut skips = Vec::new();
    for (id, result) in results {
        match result {
            Ok(vs) => verdicts.extend(vs),
            Err(reason) => skips.push((id.to_string(), reason)),
        }
    }
    let report = SweepReport {
        config: config.clone(),
        summary: Summary::tally(&verdicts, skips.len()),
        verdicts,
        skips,
        duration: start.elapsed(),
    };
    if let Some(dir) = &config.output {
        report.write_to(dir)?;
    }
    if let (Some(fc), Some(known)) = (file_cache, known) {
        fc.append_new(global, &known)?;
    }
    Ok(report)
}

#[derive(Debug, Parser)]
#[command(name = "lcong", version, about = "Exact Bernoulli numbers, L-values and their congruences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one congruence id over the given parameter ranges.
    Verify {
        id: String,
        /// Config file supplying defaults for jobs with this id.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every job of a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print exact values.
    Table {
        kind: TableKind,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Inspect or maintain the generalized Bernoulli cache.
    Cache {
        action: CacheAction,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Number of entries `verify` recomputes.
        #[arg(long, default_value_t = 256)]
        sample: usize,
    },
    /// List the congruence ids and their parameters.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Stat,
    Clear,
    Verify,
}

/// Parameter values, each a list like `3`, `1,3,5`, `0..20` or `0..20:2`.
#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<Values>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<Values>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<Values>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<Values>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<Values>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<Values>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<Values>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<Values>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<Values>,
    /// Character modulus (`2^3`, `8`) or character (`2^3:0,1`); repeatable.
    #[arg(long)]
    pub chi: Vec<String>,
    #[arg(long)]
    pub parity: Option<Parity>,
    #[arg(long)]
    pub primitive: Option<bool>,
}

impl ParamArgs {
    fn to_job(&self, id: &str) -> Job {
        Job {
            id: id.to_string(),
            p: self.p.clone(),
            m: self.m.clone(),
            k: self.k.clone(),
            l: self.l.clone(),
            n: self.n.clone(),
            q: self.q.clone(),
            a: self.a.clone(),
            h: self.h.clone(),
            d: self.d.clone(),
            chi: (!self.chi.is_empty()).then(|| self.chi.clone()),
            parity: self.parity,
            primitive: self.primitive,
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// Directory for report.csv and report.jsonl.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Cache file; defaults to the config's, then to $LCONG_CACHE_DIR.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Print only the summary, not one row per verdict.
    #[arg(long)]
    pub summary_only: bool,
}

impl RunArgs {
    fn apply(&self, config: &mut SweepConfig) {
        if self.output.is_some() {
            config.output.clone_from(&self.output);
        }
        if self.cache.is_some() {
            config.cache.clone_from(&self.cache);
        } else if config.cache.is_none() && std::env::var_os(CACHE_DIR_ENV).is_some() {
            config.cache = Some(default_cache_path());
        }
        if self.parallelism.is_some() {
            config.parallelism = self.parallelism;
        }
    }
}

fn verify_config(id: &str, file: Option<&PathBuf>, params: &ParamArgs) -> Result<SweepConfig, CliError> {
    let flags = params.to_job(id);
    let mut config = match file {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig::default(),
    };
    config.jobs.retain(|j| j.id == id);
    if config.jobs.is_empty() {
        config.jobs.push(flags);
    } else {
        config.jobs.iter_mut().for_each(|j| j.override_with(&flags));
    }
    Ok(config)
}

fn sweep(config: SweepConfig, run: &RunArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = run_sweep(&config)?;
    write!(out, "{}", report.table(!run.summary_only)).map_err(stdout_error)?;
    Ok(if report.all_hold() { 0 } else { 1 })
}

fn stdout_error(e: std::io::Error) -> CliError {
    CliError::Output { path: "<stdout>".into(), source: e }
}

fn table(kind: TableKind, params: &ParamArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ks = params.k.as_ref().ok_or_else(|| CliError::Config("table needs --k".into()))?;
    let ks: Vec<u64> = ks
        .0
        .iter()
        .map(|&k| u64::try_from(k).map_err(|_| CliError::Config(format!("k = {k} is negative"))))
        .collect::<Result<_, _>>()?;
    let chars = if kind.needs_characters() {
        let job = params.to_job("1.4");
        if job.chi.is_none() && (job.p.is_none() || job.m.is_none()) {
            return Err(CliError::Config("table needs --chi, or both --p and --m".into()));
        }
        registry::characters_of(&job)?
    } else {
        Vec::new()
    };
    write!(out, "{}", value_tables(kind, &ks, &chars).render()).map_err(stdout_error)?;
    Ok(0)
}

fn cache_command(action: CacheAction, path: Option<PathBuf>, sample: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let fc = FileCache::new(path.unwrap_or_else(default_cache_path));
    let mut lines = Vec::new();
    let code = match action {
        CacheAction::Stat => {
            let c = fc.read()?;
            lines.push(format!("{}: {} lines, {} entries, {} corrupt", fc.path().display(), c.lines, c.entries.len(), c.corrupt.len()));
            lines.extend(c.corrupt.iter().map(|(l, w)| format!("  line {l}: {w}")));
            0
        }
        CacheAction::Clear => {
            fc.clear()?;
            lines.push(format!("removed {}", fc.path().display()));
            0
        }
        CacheAction::Verify => {
            let v = fc.verify(sample)?;
            lines.push(format!(
                "{}: {} entries, {} checked, {} mismatched, {} corrupt",
                fc.path().display(),
                v.entries,
                v.checked,
                v.mismatches.len(),
                v.corrupt.len()
            ));
            lines.extend(v.mismatches.iter().map(|m| format!("  mismatch {m}")));
            lines.extend(v.corrupt.iter().map(|m| format!("  corrupt {m}")));
            if v.mismatches.is_empty() && v.corrupt.is_empty() {
                0
            } else {
                3
            }
        }
    };
    for l in lines {
        writeln!(out, "{l}").map_err(stdout_error)?;
    }
    Ok(code)
}

fn list(out: &mut dyn Write) -> Result<i32, CliError> {
    for entry in REGISTRY {
        let mut params: Vec<&str> = entry.params.iter().map(|p| p.name()).collect();
        if entry.characters {
            params.insert(0, "chi");
        }
        writeln!(out, "{:<13}{:<14}{}", entry.id, params.join(","), entry.summary).map_err(stdout_error)?;
    }
    Ok(0)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify { id, config, params, run } => {
            let mut cfg = verify_config(&id, config.as_ref(), &params)?;
            run.apply(&mut cfg);
            sweep(cfg, &run, out)
        }
        Command::Sweep { config, run } => {
            let mut cfg = SweepConfig::load(&config)?;
            run.apply(&mut cfg);
            sweep(cfg, &run, out)
        }
        Command::Table { kind, params } => table(kind, &params, out),
        Command::Cache { action, cache, sample } => cache_command(action, cache, sample, out),
        Command::List => list(out),
    }
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "lcong: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("lcong").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["verify", "1.3", "--k", "0..10:2", "--n", "1..3", "--q", "1,3"]).0, 0);
        // k = 0 breaks E_k ≡ E_{k+2} (mod 3)
        let (code, out, _) = run(&["verify", "1.2", "--p", "3", "--k", "0", "--l", "2"]);
        assert_eq!(code, 1, "{out}");
        assert_eq!(run(&["verify", "9.9"]).0, 2);
        assert_eq!(run(&["verify", "1.3", "--k", "1"]).0, 2);
        assert_eq!(run(&["bogus"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn tables_and_list() {
        let (code, out, _) = run(&["table", "script-l", "--chi", "2^3:0,1", "--k", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("22"));
        let (code, out, _) = run(&["table", "euler", "--k", "0..8:2"]);
        assert_eq!(code, 0);
        assert!(out.contains("1385"));
        assert_eq!(run(&["table", "l-values", "--k", "1"]).0, 2);
        let (_, out, _) = run(&["list"]);
        assert_eq!(out.lines().count(), REGISTRY.len());
    }
}
