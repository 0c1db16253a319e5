//! Checks against the downloaded dictionaries. Each test returns early when
//! its files are missing (see scripts/fetch-fixtures.sh).

use std::path::{Path, PathBuf};

use hedono::compare::{pair_compare, top_mismatches};
use hedono::dictionary::load_dictionary;
use hedono::Dictionary;

fn data_dir() -> PathBuf {
    std::env::var_os("HEDONO_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn dict(name: &str) -> Option<Dictionary> {
    let path = data_dir().join(format!("{name}.tsv"));
    if !path.exists() {
        eprintln!("skipping: {} not found", path.display());
        return None;
    }
    Some(load_dictionary(&path, false).unwrap().into_value())
}

#[test]
fn labmt_polarity_counts() {
    let Some(d) = dict("labmt") else { return };
    assert_eq!(d.len(), 10222);
    let pos = d.entries.iter().filter(|e| e.score > 5.0).count();
    let neg = d.entries.iter().filter(|e| e.score < 5.0).count();
    assert_eq!((pos, neg), (7152, 2977));
}

#[test]
fn sue_is_a_top_labmt_wk_mismatch() {
    let (Some(labmt), Some(wk)) = (dict("labmt"), dict("wk")) else { return };
    let report = pair_compare(&labmt, &wk);
    assert!(top_mismatches(&report, 10).iter().any(|m| m.word == "sue"));
}

#[test]
fn binary_dictionaries_load_as_binary() {
    for name in ["ol", "mpqa"] {
        let Some(d) = dict(name) else { continue };
        assert!(d.is_binary(), "{name}");
        assert!(d.entries.iter().all(|e| e.score == 1.0 || e.score == -1.0 || e.score == 0.0));
    }
}
