//! Command-line front end for `netsparse`.
//!
//! Every command that writes a graph also writes `<output>.json` holding the
//! parameters, seed and realized edge ratio of the run.

pub mod args;
pub mod commands;
pub mod scaling;

use std::fmt;
use std::path::{Path, PathBuf};

use netsparse::graph::load_graph_file;
use netsparse::{Graph, GraphFormat};
use serde::Serialize;

pub use args::Cli;

pub const THREADS_ENV: &str = "NETSPARSE_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unreadable input content; exit status 2.
    Usage(String),
    /// Anything that failed after inputs were accepted; exit status 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<netsparse::Error> for CliError {
    fn from(e: netsparse::Error) -> Self {
        if e.is_input_error() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Flag first, then the environment variable; `None` leaves rayon's default.
pub fn resolve_threads(flag: Option<usize>) -> CliResult<Option<usize>> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => Some(v.trim().parse().map_err(|_| {
                CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))
            })?),
            _ => None,
        },
    };
    if threads == Some(0) {
        return Err(CliError::Usage("thread count must be positive".into()));
    }
    Ok(threads)
}

pub fn run(cli: Cli) -> CliResult<()> {
    let threads = resolve_threads(cli.threads)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start worker pool: {e}")))?;
    pool.install(|| commands::dispatch(cli.command))
}

pub(crate) fn format_for(path: &Path, arg: args::FormatArg) -> GraphFormat {
    match arg {
        args::FormatArg::Auto => GraphFormat::from_path(path),
        args::FormatArg::Edgelist => GraphFormat::EdgeList,
        args::FormatArg::Mtx => GraphFormat::MatrixMarket,
    }
}

pub(crate) fn load(path: &Path, arg: args::FormatArg) -> CliResult<Graph> {
    load_graph_file(path, format_for(path, arg)).map_err(|e| match e {
        netsparse::Error::Io(io) => CliError::Runtime(format!("{}: {io}", path.display())),
        other => {
            let mapped = CliError::from(other);
            match mapped {
                CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
                CliError::Runtime(m) => CliError::Runtime(format!("{}: {m}", path.display())),
            }
        }
    })
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_appends_json() {
        assert_eq!(sidecar_path(Path::new("out/g.el")), PathBuf::from("out/g.el.json"));
    }

    #[test]
    fn thread_flag_validation() {
        assert_eq!(resolve_threads(Some(3)).unwrap(), Some(3));
        assert!(matches!(resolve_threads(Some(0)), Err(CliError::Usage(_))));
    }

    #[test]
    fn input_errors_map_to_usage() {
        let e: CliError = netsparse::Graph::from_edges(2, [(0, 5, 1.0)]).unwrap_err().into();
        assert_eq!(e.exit_code(), 2);
        let io: CliError = std::io::Error::other("disk").into();
        assert_eq!(io.exit_code(), 1);
    }
}
