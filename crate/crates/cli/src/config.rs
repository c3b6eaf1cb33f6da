use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every command. Unset flags fall back to the config file, then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Field size (a prime up to 7).
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Size of the cuspidal τ (τ lives on GL_k).
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Number of copies of τ in the Speh representation; π lives on GL_c.
    #[arg(long, global = true)]
    pub c: Option<usize>,
    /// Rank for `cuspidals` (defaults to k).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Index of τ in the cuspidal list of GL_k(F_q).
    #[arg(long, global = true)]
    pub tau: Option<usize>,
    /// Index of π: a character exponent when c = 1, otherwise an index into the cuspidal list.
    #[arg(long, global = true)]
    pub pi: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// File of `key=value` lines with the same keys as the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q: u32,
    pub k: usize,
    pub c: usize,
    pub n: Option<usize>,
    pub tau: usize,
    pub pi: Option<usize>,
    pub tol: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { q: 2, k: 2, c: 2, n: None, tau: 0, pi: None, tol: 1e-8, seed: 0, out: None, format: Format::Json, threads: None }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| anyhow::anyhow!("bad value {value:?} for {key}: {e}"))
}

/// Reads `key=value` lines into `flags`; blank lines and `#` comments are ignored.
pub fn parse_config_file(text: &str) -> Result<Flags> {
    let mut f = Flags::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected key=value, got {raw:?}", lineno + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "q" => f.q = Some(parse_value(key, value)?),
            "k" => f.k = Some(parse_value(key, value)?),
            "c" => f.c = Some(parse_value(key, value)?),
            "n" => f.n = Some(parse_value(key, value)?),
            "tau" => f.tau = Some(parse_value(key, value)?),
            "pi" => f.pi = Some(parse_value(key, value)?),
            "tol" => f.tol = Some(parse_value(key, value)?),
            "seed" => f.seed = Some(parse_value(key, value)?),
            "threads" => f.threads = Some(parse_value(key, value)?),
            "out" => f.out = Some(PathBuf::from(value)),
            "format" => {
                f.format = Some(Format::from_str(value, true).map_err(|e| anyhow::anyhow!("bad format {value:?}: {e}"))?)
            }
            _ => bail!("line {}: unknown key {key:?}", lineno + 1),
        }
    }
    Ok(f)
}

fn load(path: &Path) -> Result<Flags> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config_file(&text)
}

impl RunConfig {
    /// Flags over config file over defaults.
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => load(p)?,
            None => Flags::default(),
        };
        let d = RunConfig::default();
        let cfg = RunConfig {
            q: flags.q.or(file.q).unwrap_or(d.q),
            k: flags.k.or(file.k).unwrap_or(d.k),
            c: flags.c.or(file.c).unwrap_or(d.c),
            n: flags.n.or(file.n),
            tau: flags.tau.or(file.tau).unwrap_or(d.tau),
            pi: flags.pi.or(file.pi),
            tol: flags.tol.or(file.tol).unwrap_or(d.tol),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or(d.format),
            threads: flags.threads.or(file.threads),
        };
        if cfg.k == 0 || cfg.c == 0 || cfg.n == Some(0) {
            bail!("k, c and n must be positive");
        }
        if !(cfg.tol > 0.0) {
            bail!("tolerance must be positive");
        }
        Ok(cfg)
    }
}
