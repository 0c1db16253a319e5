//! Locating and loading inputs.

use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};

use hedono::bench::LabeledCorpus;
use hedono::dictionary::{apply_stop_lens, load_dictionary};
use hedono::{Dictionary, FreqVector};

use crate::args::{CorpusArg, DictArg};
use crate::output::Run;

pub fn data_dir() -> PathBuf {
    std::env::var_os("HEDONO_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

/// The path itself if it exists, else the same name under the data
/// directory, trying a `.tsv` suffix for bare dictionary names.
pub fn resolve(name: &Path) -> PathBuf {
    if name.exists() || name == Path::new("-") {
        return name.to_path_buf();
    }
    let dir = data_dir();
    let under = dir.join(name);
    if under.exists() {
        return under;
    }
    let mut with_ext = under.clone().into_os_string();
    with_ext.push(".tsv");
    let with_ext = PathBuf::from(with_ext);
    if with_ext.exists() {
        return with_ext;
    }
    name.to_path_buf()
}

pub fn load_dict(run: &mut Run, name: &str, delta_h: f64, strict: bool) -> Result<Dictionary> {
    let path = resolve(Path::new(name));
    run.input(&path);
    let d = load_dictionary(&path, strict)
        .with_context(|| format!("loading dictionary {}", path.display()))?
        .into_value();
    if delta_h == 0.0 {
        return Ok(d);
    }
    Ok(apply_stop_lens(&d, delta_h)?.into_value())
}

pub fn load_dict_arg(run: &mut Run, a: &DictArg) -> Result<Dictionary> {
    load_dict(run, &a.dict, a.delta_h, a.strict)
}

pub fn load_corpus(run: &mut Run, a: &CorpusArg, seed: u64) -> Result<LabeledCorpus> {
    let path = resolve(&a.corpus);
    run.input(&path);
    let corpus = LabeledCorpus::load(&path).with_context(|| format!("loading corpus {}", path.display()))?;
    if corpus.is_empty() {
        return Err(anyhow!("corpus {} has no documents", path.display()));
    }
    match a.subsample {
        Some(f) => Ok(corpus.subsample(f, seed)?),
        None => Ok(corpus),
    }
}

pub fn read_text(run: &mut Run, path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    let path = resolve(path);
    run.input(&path);
    let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

/// Raw text, or a `word<TAB>count` file when `word_vector` is set.
pub fn read_vector(run: &mut Run, path: &Path, word_vector: bool) -> Result<FreqVector> {
    let text = read_text(run, path)?;
    if word_vector {
        FreqVector::from_tsv(&text).with_context(|| format!("parsing word vector {}", path.display()))
    } else {
        Ok(FreqVector::from_text(&text))
    }
}
