use std::fs;

use anyhow::{Context, Result};

use hedono::import::{import_dictionary, reviews_from_csv, write_review_dirs, ImportFormat};

use crate::args::{ImportArgs, ImportKind};
use crate::output::Run;

pub fn import_cmd(mut run: Run, a: &ImportArgs) -> Result<()> {
    run.input(&a.source);
    let format = match a.format {
        ImportKind::Labmt => ImportFormat::Labmt,
        ImportKind::Anew => ImportFormat::Anew,
        ImportKind::Wk => ImportFormat::Wk,
        ImportKind::Ol => ImportFormat::Ol,
        ImportKind::Mpqa => ImportFormat::Mpqa,
        ImportKind::Reviews => return import_reviews(run, a),
    };
    let d = import_dictionary(format, &a.source)?;
    for w in &d.warnings {
        log::info!("{w}");
    }
    let d = d.into_value();
    log::info!("{}: {} entries", d.name, d.len());
    run.finish(&d.to_tsv(), &[])
}

fn import_reviews(run: Run, a: &ImportArgs) -> Result<()> {
    let Some(dir) = run.out().map(|p| p.to_path_buf()) else {
        return Err(hedono::Error::InvalidArgument("importing reviews needs --out <dir>".into()).into());
    };
    let bytes = fs::read(&a.source).with_context(|| format!("reading {}", a.source.display()))?;
    let reviews = reviews_from_csv(&String::from_utf8_lossy(&bytes))?;
    write_review_dirs(&reviews, &dir)?;
    log::info!("wrote {} reviews to {}", reviews.len(), dir.display());
    run.finish_written(&[dir])
}
