//! Command implementations behind the `irslab` binary, and the verification
//! suite run by `irslab suite` and the acceptance tests.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use irslab_core::schreier::DEFAULT_MAX_INDEX;
use irslab_core::subgroup::DEFAULT_MAX_ORDER;
use irslab_core::Error;

pub mod commands;
pub mod report;
pub mod suite;

/// Exit codes shared by every command.
pub mod exit {
    pub const OK: i32 = 0;
    /// A check ran and found a violation.
    pub const VIOLATION: i32 = 1;
    /// Malformed input, unreadable files or failed preconditions.
    pub const INPUT: i32 = 2;
    /// A configured resource bound was exceeded.
    pub const RESOURCE: i32 = 3;
}

/// Environment variable overriding the group-order bound.
pub const MAX_ORDER_VAR: &str = "IRSLAB_MAX_ORDER";

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: exit::INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource(_) => exit::RESOURCE,
            _ => exit::INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::input(format!("json error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Everything a run depends on. Two runs with equal configs write identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub max_order: usize,
    pub max_index: usize,
    pub resolution: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let tolerances = [
            ("admits", irslab_core::lie::ADMITS_TOLERANCE),
            ("cocycle", 5e-3),
            ("continuity", irslab_core::lie::CONTINUITY_TOLERANCE),
            ("haar", 1e-6),
            ("unimodular", 1e-3),
        ];
        Self {
            seed: 0,
            tolerances: tolerances.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            max_order: DEFAULT_MAX_ORDER,
            max_index: DEFAULT_MAX_INDEX,
            resolution: irslab_core::lie::DEFAULT_RESOLUTION,
        }
    }
}

impl RunConfig {
    /// Defaults with the order bound taken from `IRSLAB_MAX_ORDER` when set.
    pub fn from_env() -> CliResult<Self> {
        let mut cfg = Self::default();
        if let Ok(v) = std::env::var(MAX_ORDER_VAR) {
            cfg.max_order =
                v.trim().parse().map_err(|_| CliError::input(format!("{MAX_ORDER_VAR}={v:?} is not an integer")))?;
        }
        Ok(cfg)
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    /// An independent random stream per use site, all derived from the seed.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Pretty JSON with a trailing newline. Object keys come out sorted.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

/// Writes to `out` when given, else to stdout.
pub fn emit(value: &Value, out: Option<&Path>) -> CliResult<()> {
    let text = to_pretty(value);
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}
