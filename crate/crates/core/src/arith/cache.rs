//! Factorization cache file.
//!
//! One entry per line, `<n>=<p1>^<e1>,<p2>^<e2>,...`, with `^1` optional and
//! `#` starting a comment line. Every entry is re-verified on load.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigUint;

use super::factor::Factorization;
use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct FactorCache {
    path: Option<PathBuf>,
    entries: HashMap<BigUint, Factorization>,
    sink: Mutex<()>,
}

impl FactorCache {
    pub fn load(path: &Path) -> Result<Self> {
        let mut cache = FactorCache {
            path: Some(path.to_path_buf()),
            ..FactorCache::default()
        };
        if !path.exists() {
            return Ok(cache);
        }
        let reader = BufReader::new(File::open(path)?);
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (n, f) = parse_entry(trimmed).map_err(|message| Error::Cache {
                path: path.display().to_string(),
                line: i + 1,
                message,
            })?;
            cache.entries.insert(n, f);
        }
        Ok(cache)
    }

    pub fn from_entries(entries: impl IntoIterator<Item = Factorization>) -> Self {
        FactorCache {
            entries: entries
                .into_iter()
                .map(|f| (f.value().clone(), f))
                .collect(),
            ..FactorCache::default()
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, n: &BigUint) -> Option<&Factorization> {
        self.entries.get(n)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends one entry to the backing file. Writers are serialized.
    pub fn append(&self, f: &Factorization) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let _guard = self.sink.lock().unwrap_or_else(|e| e.into_inner());
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        writeln!(file, "{}", format_entry(f))?;
        Ok(())
    }
}

pub fn format_entry(f: &Factorization) -> String {
    let body: Vec<String> = f
        .factors()
        .iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    format!("{}={}", f.value(), body.join(","))
}

pub fn parse_entry(line: &str) -> std::result::Result<(BigUint, Factorization), String> {
    let (lhs, rhs) = line.split_once('=').ok_or("missing '='")?;
    let n: BigUint = lhs
        .trim()
        .parse()
        .map_err(|_| format!("bad integer {lhs:?}"))?;
    let mut factors = Vec::new();
    if !rhs.trim().is_empty() {
        for part in rhs.split(',') {
            let part = part.trim();
            let (p, e) = match part.split_once('^') {
                Some((p, e)) => (p, e.trim().parse::<u32>().map_err(|_| format!("bad exponent in {part:?}"))?),
                None => (part, 1),
            };
            let p: BigUint = p.trim().parse().map_err(|_| format!("bad prime {p:?}"))?;
            factors.push((p, e));
        }
    }
    factors.sort();
    let f = Factorization::new(factors).map_err(|e| e.to_string())?;
    if f.value() != &n {
        return Err(format!("factors multiply to {}, not {n}", f.value()));
    }
    Ok((n, f))
}
