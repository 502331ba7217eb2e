//! Command-line driver: configuration, route dispatch, sweeps, figure bundles
//! and output encoding.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod error;
pub mod figures;
pub mod record;
pub mod run;
pub mod validate;

pub use config::{Config, Format, Route};
pub use error::CliError;

/// Environment variable overriding the worker count of the configuration.
pub const WORKERS_ENV: &str = "THERMALINK_WORKERS";

/// Worker count: command-line flag, then environment, then configuration.
pub fn resolve_workers(
    flag: Option<usize>,
    env: Option<&str>,
    config: Option<usize>,
) -> Result<Option<usize>, CliError> {
    let from_env = match env {
        Some(s) if !s.trim().is_empty() => Some(
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("{WORKERS_ENV}=`{s}` is not a positive integer")))?,
        ),
        _ => None,
    };
    let n = flag.or(from_env).or(config);
    if n == Some(0) {
        return Err(CliError::Config("worker count must be at least 1".into()));
    }
    Ok(n)
}

/// Runs `f` on a pool with `workers` threads (the global pool when `None`).
#[cfg(feature = "parallel")]
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<T: Send>(_workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    Ok(f())
}
