use std::path::Path;

use hedono::shift::{export_shift, render_shift_svg, FreqDirection, SentimentSign, ShiftDocument, ShiftItem, ShiftResult};

fn item(word: &str, contribution: f64, sign: SentimentSign, dir: FreqDirection) -> ShiftItem {
    ShiftItem {
        word: word.into(),
        contribution,
        sentiment_sign: sign,
        freq_direction: dir,
        score: 0.0,
        p_ref: 0.0,
        p_comp: 0.0,
    }
}

fn toy() -> ShiftResult {
    use FreqDirection::*;
    use SentimentSign::*;
    ShiftResult {
        dictionary: "toy & co".into(),
        delta_h: 1.0,
        ref_score: 6.25,
        comp_score: 5.5,
        normalized: true,
        items: vec![
            item("war", 61.5, MoreNegative, Up),
            item("love", 40.0, MorePositive, Down),
            item("<3", -12.25, MorePositive, Up),
            item("hat*", 10.75, MoreNegative, Up),
        ],
    }
}

/// Set HEDONO_BLESS=1 to rewrite the expected file after a deliberate change.
#[test]
fn svg_matches_golden_file() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/shift_toy.svg");
    let svg = render_shift_svg(&toy(), 10);
    if std::env::var_os("HEDONO_BLESS").is_some() {
        std::fs::write(&path, &svg).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg, expected);
}

#[test]
fn json_export_round_trips() {
    let doc = export_shift(&toy(), 3);
    assert_eq!(doc.items.len(), 3);
    let text = doc.to_json().unwrap();
    assert_eq!(ShiftDocument::from_json(&text).unwrap(), doc);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["items"][0]["word"], "war");
    assert!(v["items"][0].get("score").is_none());
}
