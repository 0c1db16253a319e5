use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use hedono::dictionary::{apply_stop_lens, mask_words, validate};
use hedono::Dictionary;

use crate::args::{LensArgs, MaskArgs, ValidateArgs};
use crate::data::{load_dict, resolve};
use crate::output::Run;

pub fn validate_cmd(mut run: Run, a: &ValidateArgs) -> Result<()> {
    let path = resolve(Path::new(&a.dict));
    run.input(&path);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let d = Dictionary::parse_tsv_raw(&text).with_context(|| format!("parsing {}", path.display()))?;
    let report = validate(&d);
    let body = run.header(&[("dictionary", d.name.clone())]) + &report.to_string();
    run.finish(&body, &[])
}

// Dictionary outputs stay in canonical form, so they carry no run header;
// the manifest records where they came from.
pub fn lens_cmd(mut run: Run, a: &LensArgs) -> Result<()> {
    let d = load_dict(&mut run, &a.dict, 0.0, false)?;
    let lensed = apply_stop_lens(&d, a.delta_h)?.into_value();
    run.finish(&lensed.to_tsv(), &[])
}

pub fn mask_cmd(mut run: Run, a: &MaskArgs) -> Result<()> {
    let d = load_dict(&mut run, &a.dict, 0.0, false)?;
    let mut patterns = a.words.clone();
    if let Some(f) = &a.words_file {
        run.input(f);
        let text = fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
        patterns.extend(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from));
    }
    let masked = mask_words(&d, &patterns).into_value();
    run.finish(&masked.to_tsv(), &[])
}
