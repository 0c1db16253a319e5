use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "hedono",
    version,
    about = "Dictionary-based sentiment measurement: scores, word shifts, dictionary comparison, benchmarks and time series",
    propagate_version = true
)]
pub struct Cli {
    /// Seed for every random step of the run.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the result here, with a `.manifest` sidecar, instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// More log output on stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect and transform dictionaries.
    #[command(subcommand)]
    Dict(DictCommand),
    /// Split text into tokens.
    Tokenize(TokenizeArgs),
    /// Share of a text's words and tokens each dictionary covers.
    Coverage(CoverageArgs),
    /// Average sentiment of documents.
    Score(ScoreArgs),
    /// Per-word decomposition of the score difference between two texts.
    Shift(ShiftArgs),
    /// Compare two dictionaries over their shared words.
    Compare(CompareArgs),
    /// Compare every ordered pair of dictionaries.
    CompareGrid(GridArgs),
    /// Benchmarks on a labeled review corpus.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Sentiment time series from timestamped text streams.
    Series(SeriesArgs),
    /// Convert upstream dictionary or corpus files into canonical form.
    Import(ImportArgs),
}

/// A dictionary file or a name looked up in the data directory.
#[derive(Debug, Clone, Args, Serialize)]
pub struct DictArg {
    /// Dictionary TSV, or a bare name such as `labmt` found in $HEDONO_DATA_DIR.
    #[arg(long = "dict", value_name = "DICT")]
    pub dict: String,

    /// Drop entries within this distance of the neutral score.
    #[arg(long = "delta-h", default_value_t = 0.0)]
    pub delta_h: f64,

    /// Fail on repeated entries instead of resolving them.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum DictCommand {
    /// Counts and problems: conflicts, repeats, out-of-scale scores.
    Validate(ValidateArgs),
    /// Apply the stop lens and write the reduced dictionary.
    Lens(LensArgs),
    /// Remove words (`word`) or stems (`stem*`) and write the result.
    Mask(MaskArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    pub dict: String,
}

#[derive(Debug, Args, Serialize)]
pub struct LensArgs {
    pub dict: String,
    #[arg(long = "delta-h")]
    pub delta_h: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct MaskArgs {
    pub dict: String,
    /// Comma-separated patterns.
    #[arg(long, visible_alias = "block", value_delimiter = ',')]
    pub words: Vec<String>,
    /// File with one pattern per line.
    #[arg(long)]
    pub words_file: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TokenizeArgs {
    /// Text file, or `-` for stdin.
    #[arg(default_value = "-")]
    pub input: PathBuf,
    /// Print a ranked `word<TAB>count` vector instead of the token stream.
    #[arg(long)]
    pub counts: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Curve {
    None,
    ByRank,
    Cumulative,
}

#[derive(Debug, Args, Serialize)]
pub struct CoverageArgs {
    /// Dictionaries to measure; repeat the flag.
    #[arg(long = "dict", required = true)]
    pub dicts: Vec<String>,
    #[arg(long = "delta-h", default_value_t = 0.0)]
    pub delta_h: f64,
    /// Text files, word-vector TSVs (with --word-vectors) or corpus directories.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Inputs are `word<TAB>count` files.
    #[arg(long)]
    pub word_vectors: bool,
    /// Also print a coverage curve over word rank.
    #[arg(long, value_enum, default_value_t = Curve::None)]
    pub curve: Curve,
    /// Trailing window of ranks for the by-rank curve.
    #[arg(long, default_value_t = hedono::textproc::DEFAULT_RANK_WINDOW)]
    pub window: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub dict: DictArg,
    /// Text files, or `-` for stdin.
    #[arg(required = true)]
    pub docs: Vec<PathBuf>,
    /// Score the word-vector files instead of raw text.
    #[arg(long)]
    pub word_vectors: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ShiftArgs {
    #[command(flatten)]
    pub dict: DictArg,
    /// Reference text.
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Comparison text.
    #[arg(long)]
    pub comp: PathBuf,
    #[arg(long)]
    pub word_vectors: bool,
    /// Number of items to print and draw.
    #[arg(long, default_value_t = 50)]
    pub top: usize,
    /// Also write the chart as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Print the structured document instead of TSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// Dictionary on the x axis; its entries are looked up in y.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long = "delta-h", default_value_t = 0.0)]
    pub delta_h: f64,
    /// Number of mismatches to list.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// List every matched pair instead of the mismatches.
    #[arg(long)]
    pub pairs: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    #[arg(required = true, num_args = 2..)]
    pub dicts: Vec<String>,
    #[arg(long = "delta-h", default_value_t = 0.0)]
    pub delta_h: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorpusArg {
    /// Directory with `pos/` and `neg/`, or a `label<TAB>text` file.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Use a seeded share of the corpus.
    #[arg(long)]
    pub subsample: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Threshold classification of single and concatenated reviews.
    Reviews(ReviewsArgs),
    /// Naive Bayes accuracy over repeated seeded splits.
    Nb(NbArgs),
    /// F1 as scores are binarized or entries removed.
    Sweep(SweepArgs),
    /// Fit the decision threshold on a training split.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ReviewsArgs {
    #[command(flatten)]
    pub dict: DictArg,
    #[command(flatten)]
    pub corpus: CorpusArg,
    /// `dictionary-mean`, `corpus-mean` or a number.
    #[arg(long, default_value = "dictionary-mean")]
    pub policy: String,
    /// Classify sentences instead of whole reviews.
    #[arg(long)]
    pub sentences: bool,
    /// Numbers of reviews to concatenate, e.g. `1,2,5,10`.
    #[arg(long, value_delimiter = ',')]
    pub concat: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Histogram bins for the class overlap.
    #[arg(long, default_value_t = hedono::bench::DEFAULT_OVERLAP_BINS)]
    pub bins: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Ratio,
    Difference,
}

#[derive(Debug, Args, Serialize)]
pub struct NbArgs {
    #[command(flatten)]
    pub corpus: CorpusArg,
    #[arg(long, default_value_t = 0.1)]
    pub train_fraction: f64,
    #[arg(long, default_value_t = 5000)]
    pub vocab: usize,
    #[arg(long, default_value_t = 30)]
    pub drop_top: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Also list this many informative words per class from the first trial's model.
    #[arg(long, default_value_t = 0)]
    pub informative: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Ratio)]
    pub mode: ModeArg,
    /// Print every trial's accuracy.
    #[arg(long)]
    pub per_trial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Binarization,
    Removal,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub dict: DictArg,
    #[command(flatten)]
    pub corpus: CorpusArg,
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    /// Removal order: `most-frequent`, `least-frequent`, `random` or `all`.
    #[arg(long, default_value = "all")]
    pub strategy: String,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value = "dictionary-mean")]
    pub policy: String,
}

#[derive(Debug, Args, Serialize)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub dict: DictArg,
    #[command(flatten)]
    pub corpus: CorpusArg,
    #[arg(long, default_value_t = 0.5)]
    pub train_fraction: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct SeriesArgs {
    #[command(subcommand)]
    #[serde(skip)]
    pub correlate: Option<SeriesCommand>,
    #[arg(long = "dict", required = true)]
    pub dict: Option<String>,
    #[arg(long = "delta-h", default_value_t = 0.0)]
    pub delta_h: f64,
    /// Bin width in seconds: 900, 3600, 10800, 43200 or 86400.
    #[arg(long, default_value_t = 86400)]
    pub resolution: i64,
    /// Add a column with the mean-centred, range-scaled score.
    #[arg(long)]
    pub normalize: bool,
    /// Newline-delimited `{"t": ..., "text": ...}` files, or `-` for stdin.
    #[arg(required = true)]
    pub streams: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SeriesCommand {
    /// Pearson correlation of series on their shared bins.
    Correlate(CorrelateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CorrelateArgs {
    #[arg(required = true)]
    pub series: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ImportKind {
    Labmt,
    Anew,
    Wk,
    Ol,
    Mpqa,
    /// `label,text` review CSV, written out as `pos/` and `neg/` directories.
    Reviews,
}

#[derive(Debug, Args, Serialize)]
pub struct ImportArgs {
    #[arg(value_enum)]
    pub format: ImportKind,
    /// Upstream file, or the directory holding it.
    pub source: PathBuf,
}
