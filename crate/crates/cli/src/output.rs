//! Run bookkeeping: metadata headers, input digests and manifest sidecars.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_dir() {
            collect_files(&path, out)?;
        } else {
            out.push(path);
        }
    }
    Ok(())
}

/// Digest of a file, or of a directory's sorted `(relative path, digest)` list.
pub fn digest_path(path: &Path) -> Result<String> {
    if path.is_dir() {
        let mut files = Vec::new();
        collect_files(path, &mut files)?;
        files.sort();
        let mut listing = String::new();
        for f in files {
            let rel = f.strip_prefix(path).unwrap_or(&f);
            let bytes = fs::read(&f).with_context(|| format!("reading {}", f.display()))?;
            let _ = writeln!(listing, "{}\t{}", rel.display(), sha256_hex(&bytes));
        }
        Ok(sha256_hex(listing.as_bytes()))
    } else {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(sha256_hex(&bytes))
    }
}

#[derive(Debug, Serialize)]
struct Digest_ {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    subcommand: &'a str,
    parameters: &'a serde_json::Value,
    inputs: Vec<Digest_>,
    outputs: Vec<Digest_>,
    seed: u64,
    version: &'a str,
    threads: usize,
    duration_secs: f64,
}

/// One invocation: what ran, on what, and where the results go.
pub struct Run {
    subcommand: String,
    parameters: serde_json::Value,
    inputs: Vec<PathBuf>,
    seed: u64,
    out: Option<PathBuf>,
    started: Instant,
}

impl Run {
    pub fn new(subcommand: &str, parameters: &impl Serialize, seed: u64, out: Option<PathBuf>) -> Self {
        Run {
            subcommand: subcommand.to_string(),
            parameters: serde_json::to_value(parameters).unwrap_or(serde_json::Value::Null),
            inputs: Vec::new(),
            seed,
            out,
            started: Instant::now(),
        }
    }

    pub fn input(&mut self, path: &Path) {
        if path != Path::new("-") && !self.inputs.iter().any(|p| p == path) {
            self.inputs.push(path.to_path_buf());
        }
    }

    pub fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    /// `#key<TAB>value` lines opening every TSV result.
    pub fn header(&self, extra: &[(&str, String)]) -> String {
        let mut s = format!("#tool\thedono {VERSION}\n#command\t{}\n#seed\t{}\n", self.subcommand, self.seed);
        for (k, v) in extra {
            let _ = writeln!(s, "#{k}\t{v}");
        }
        s
    }

    /// Writes `body` to `--out` (or stdout) and each extra file to its path,
    /// each with a manifest next to it.
    pub fn finish(self, body: &str, extra: &[(PathBuf, Vec<u8>)]) -> Result<()> {
        let mut written: Vec<(PathBuf, Vec<u8>)> = Vec::new();
        match &self.out {
            Some(p) => written.push((p.clone(), body.as_bytes().to_vec())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(body.as_bytes())?;
                stdout.flush()?;
            }
        }
        written.extend(extra.iter().cloned());
        for (path, bytes) in &written {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        }
        let outputs: Vec<Digest_> = written
            .iter()
            .map(|(p, b)| Digest_ {
                path: p.display().to_string(),
                sha256: sha256_hex(b),
            })
            .collect();
        self.write_manifests(written.iter().map(|(p, _)| p.clone()).collect(), outputs)
    }

    /// Manifest for outputs some other code already wrote, such as a directory.
    pub fn finish_written(self, paths: &[PathBuf]) -> Result<()> {
        let outputs = paths
            .iter()
            .map(|p| {
                Ok(Digest_ {
                    path: p.display().to_string(),
                    sha256: digest_path(p)?,
                })
            })
            .collect::<Result<_>>()?;
        self.write_manifests(paths.to_vec(), outputs)
    }

    fn write_manifests(&self, paths: Vec<PathBuf>, outputs: Vec<Digest_>) -> Result<()> {
        if paths.is_empty() {
            return Ok(());
        }
        let inputs = self
            .inputs
            .iter()
            .map(|p| {
                Ok(Digest_ {
                    path: p.display().to_string(),
                    sha256: digest_path(p)?,
                })
            })
            .collect::<Result<_>>()?;
        let manifest = Manifest {
            subcommand: &self.subcommand,
            parameters: &self.parameters,
            inputs,
            outputs,
            seed: self.seed,
            version: VERSION,
            threads: rayon::current_num_threads(),
            duration_secs: self.started.elapsed().as_secs_f64(),
        };
        let json = serde_json::to_string_pretty(&manifest)? + "\n";
        for p in paths {
            let mut name = p.into_os_string();
            name.push(".manifest");
            let mp = PathBuf::from(name);
            fs::write(&mp, &json).with_context(|| format!("writing {}", mp.display()))?;
        }
        Ok(())
    }
}

/// `NA` for undefined values.
pub fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}
