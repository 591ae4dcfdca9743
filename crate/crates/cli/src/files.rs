use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_rational::Ratio;
use serde::Serialize;
use toeplitz_core::seqfile::SequenceFile;
use toeplitz_core::{Scale, ScaleSpec, SymbolSequence};

use crate::error::{CliError, CliResult};

pub type Metadata = BTreeMap<String, String>;

pub fn meta<const N: usize>(pairs: [(&str, String); N]) -> Metadata {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn write_sequence(
    path: &Path,
    seq: SymbolSequence,
    alphabet: Option<Vec<i8>>,
    metadata: Metadata,
) -> CliResult<()> {
    SequenceFile::new(seq, alphabet, metadata)?.write(path)?;
    Ok(())
}

pub fn read_sequence(path: &Path) -> CliResult<SequenceFile> {
    Ok(SequenceFile::read(path)?)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    write_text(path, &(text + "\n"))
}

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn parse_scale(spec: &str, window: usize) -> CliResult<Scale> {
    Ok(spec.parse::<ScaleSpec>()?.materialize(window)?)
}

/// `a/b` or an integer.
pub fn parse_ratio(s: &str) -> CliResult<Ratio<u64>> {
    let bad = || CliError::Usage(format!("expected a ratio a/b, got {s:?}"));
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let a: u64 = a.parse().map_err(|_| bad())?;
    let b: u64 = b.parse().map_err(|_| bad())?;
    if b == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(a, b))
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_list(s: &str) -> CliResult<Vec<u64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("expected a comma-separated integer list, got {s:?}")))
        })
        .collect()
}

pub fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
