use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eef_textcat::bench::{self, ClassifierKind, LengthDist, SweepConfig, SyntheticConfig};
use eef_textcat::corpus::{Dataset, RawCollection, TokenizerConfig};
use eef_textcat::eef::ThetaDomain;
use eef_textcat::features::{ig_scores_with, IgConfig, SelectionMode};
use eef_textcat::model::MultinomialModel;
use eef_textcat::verify::{run_verify, VerifyConfig};
use eef_textcat::{Error, Result};

#[derive(Parser)]
#[command(
    name = "eef-textcat",
    version,
    about = "Class-specific feature text categorization benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep feature counts and report accuracy per classifier as CSV.
    Sweep(SweepArgs),
    /// Check closed forms against brute-force enumeration.
    Verify(VerifyArgs),
    /// Write a synthetic corpus in the tokenized-line format.
    Synth(SynthArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Training corpus: a class-per-directory tree or a tokenized-line file.
    #[arg(long)]
    train: PathBuf,
    /// Test corpus; without it the training corpus is split.
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long, default_value_t = 0.3)]
    test_frac: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma list (`100,200,500`) or range `start:end:step`.
    #[arg(long, default_value = "1,2,5,10,20,50")]
    k: String,
    #[arg(long, value_delimiter = ',', default_value = "eef,ppt,mnb")]
    classifiers: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Selection for eef and ppt: class-specific or common.
    #[arg(long, default_value = "class-specific")]
    mode: String,
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = 1.0)]
    theta_max: f64,
    #[arg(long, default_value_t = 1e-10)]
    theta_tol: f64,
    /// Pseudo-count for the information-gain document table.
    #[arg(long, default_value_t = 0.5)]
    ig_pseudo_count: f64,
    #[arg(long, default_value_t = 2)]
    min_len: usize,
    /// File of stop words, one per line (directory corpora only).
    #[arg(long)]
    stop_words: Option<PathBuf>,
    /// Leave `wall_ms` empty so repeated runs give identical CSV.
    #[arg(long)]
    no_timing: bool,
    /// Report CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump the IG score table (`term,class,ig`).
    #[arg(long)]
    ig_out: Option<PathBuf>,
    /// Also save the fitted multinomial model.
    #[arg(long)]
    model_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 4)]
    classes: usize,
    #[arg(long, default_value_t = 200)]
    vocab: usize,
    #[arg(long, default_value_t = 500)]
    docs_per_class: usize,
    #[arg(long, default_value_t = 0.5)]
    separation: f64,
    #[arg(long, default_value_t = 20)]
    min_len: u64,
    #[arg(long, default_value_t = 100)]
    max_len: u64,
    #[arg(long, default_value_t = 1.0)]
    zipf: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Hold out this fraction per class into `--test-out`.
    #[arg(long, requires = "test_out")]
    test_frac: Option<f64>,
    #[arg(long)]
    test_out: Option<PathBuf>,
}

fn parse_k_list(arg: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidConfig(format!("bad --k value `{arg}`"));
    if let Some((range, step)) = arg.rsplit_once(':').filter(|_| arg.matches(':').count() == 2) {
        let (start, end) = range.split_once(':').ok_or_else(bad)?;
        let (start, end, step): (usize, usize, usize) = (
            start.trim().parse().map_err(|_| bad())?,
            end.trim().parse().map_err(|_| bad())?,
            step.trim().parse().map_err(|_| bad())?,
        );
        if step == 0 {
            return Err(bad());
        }
        return Ok((start..=end).step_by(step).collect());
    }
    arg.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn writer_for(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut tokenizer = TokenizerConfig {
        min_len: args.min_len,
        ..TokenizerConfig::default()
    };
    if let Some(path) = &args.stop_words {
        tokenizer = tokenizer.with_stop_words(
            fs::read_to_string(path)?
                .lines()
                .map(str::trim)
                .filter(|w| !w.is_empty()),
        );
    }

    let train = RawCollection::load(&args.train, &tokenizer)?;
    let data = match &args.test {
        Some(test) => Dataset::from_train_test(&train, &RawCollection::load(test, &tokenizer)?)?,
        None => Dataset::split(&train, args.test_frac, args.seed)?,
    };

    let config = SweepConfig {
        k_values: parse_k_list(&args.k)?,
        classifiers: args
            .classifiers
            .iter()
            .map(|c| c.parse())
            .collect::<Result<Vec<ClassifierKind>>>()?,
        smoothing_alpha: args.alpha,
        theta: ThetaDomain::new(args.theta_min, args.theta_max, args.theta_tol)?,
        specific_mode: args.mode.parse::<SelectionMode>()?,
        ig: IgConfig {
            pseudo_count: args.ig_pseudo_count,
        },
        record_timing: !args.no_timing,
    };

    eprintln!(
        "train: {} docs, {} classes, {} terms; test: {} docs",
        data.train.documents().len(),
        data.train.n_classes(),
        data.train.vocab_size(),
        data.test.len()
    );

    if let Some(path) = &args.ig_out {
        let table = ig_scores_with(&data.train, &config.ig);
        table.write_csv(
            data.train.vocabulary(),
            data.train.class_names(),
            BufWriter::new(File::create(path)?),
        )?;
    }
    if let Some(path) = &args.model_out {
        let model = MultinomialModel::fit(&data.train, config.smoothing_alpha)?;
        model.write_to(BufWriter::new(File::create(path)?))?;
    }

    let report = bench::run_sweep(&config, &data)?;
    for row in report.rows.iter().filter(|r| !r.thetas.is_empty()) {
        let thetas: Vec<String> = row.thetas.iter().map(|t| format!("{t:.6}")).collect();
        eprintln!("{} k={} theta=[{}]", row.classifier, row.k, thetas.join(", "));
    }
    let mut out = writer_for(args.out.as_deref())?;
    report.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    if args.classes == 0 || args.vocab < args.classes.max(2) || !(0.0..=1.0).contains(&args.separation) {
        return Err(Error::InvalidConfig(
            "need classes >= 1, vocab >= max(classes, 2) and separation in [0, 1]".into(),
        ));
    }
    let corpus = bench::generate_synthetic(&SyntheticConfig {
        n_classes: args.classes,
        vocab_size: args.vocab,
        docs_per_class: args.docs_per_class,
        length: LengthDist::Uniform {
            min: args.min_len,
            max: args.max_len,
        },
        separation: args.separation,
        zipf_exponent: args.zipf,
        seed: args.seed,
    });
    let collection = corpus.to_collection();

    match (args.test_frac, &args.test_out) {
        (Some(frac), Some(test_path)) => {
            let (train, test) = collection.split(frac, args.seed)?;
            let mut out = writer_for(args.out.as_deref())?;
            train.write_lines(&mut out)?;
            out.flush()?;
            let mut test_out = BufWriter::new(File::create(test_path)?);
            test.write_lines(&mut test_out)?;
            test_out.flush()?;
        }
        _ => {
            let mut out = writer_for(args.out.as_deref())?;
            collection.write_lines(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => run_verify(&VerifyConfig {
            cases: args.cases,
            seed: args.seed,
        })
        .map(|report| println!("{report}")),
        Command::Synth(args) => synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
