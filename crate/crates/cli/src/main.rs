use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use tweetlens::features::FeatureCombo;
use tweetlens::pipeline::{self, PipelineConfig};
use tweetlens::{eval, Error};

/// Topic extraction and sentiment classification for annotated tweet corpora.
#[derive(Debug, Parser)]
#[command(name = "tweetlens", version)]
struct Cli {
    /// TOML configuration file (flat keys, see below for defaults).
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Overrides every RNG seed (LDA, forest, folds).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the dataset CSV path.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Overrides the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label histogram and majority rate -> stats.json.
    Stats,
    /// LDA topics of the positive and negative tweets -> topics_*.json, wordcloud_*.svg.
    Topics,
    /// Cross-validated results per feature combination -> evaluation.json, table1.txt.
    Evaluate {
        /// Comma-separated combinations of U, L, M (default: config `combos`).
        #[arg(long, value_delimiter = ',')]
        combos: Option<Vec<String>>,
    },
    /// Top attributes by information gain -> attributes_<combo>.json.
    Attributes {
        #[arg(long, default_value = "UL")]
        combo: String,
    },
    /// Feature matrix CSV plus JSON manifest -> features_<combo>.csv/.json.
    Features {
        #[arg(long, default_value = "ULM")]
        combo: String,
    },
    /// Trains a forest on a feature-matrix CSV -> <model name>.
    Train {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "model.json")]
        model_name: String,
    },
    /// Predicts a feature-matrix CSV with a trained forest -> predictions.csv.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Prints the effective configuration as TOML.
    Config,
}

fn parse_combos(tokens: &[String]) -> Result<Vec<FeatureCombo>, Error> {
    tokens.iter().map(|t| t.parse()).collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.set_seed(seed);
    }
    if let Some(data) = cli.data {
        cfg.dataset = data;
    }
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }

    match cli.command {
        Command::Stats => {
            let stats = pipeline::cmd_stats(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
        Command::Topics => {
            let outcome = pipeline::cmd_topics(&cfg)?;
            for (name, export) in [("positive", &outcome.positive), ("negative", &outcome.negative)] {
                let Some(export) = export else { continue };
                println!("{name}:");
                for topic in &export.topics {
                    let words: Vec<&str> = topic.words.iter().map(|w| w.term.as_str()).collect();
                    println!("  {:>2}: {}", topic.id, words.join(" "));
                }
            }
        }
        Command::Evaluate { combos } => {
            let combos = match combos {
                Some(tokens) => parse_combos(&tokens)?,
                None => cfg.parsed_combos()?,
            };
            let reports = pipeline::cmd_evaluate(&cfg, &combos)?;
            print!("{}", eval::format_table(&reports));
        }
        Command::Attributes { combo } => {
            for entry in pipeline::cmd_attributes(&cfg, combo.parse()?)? {
                println!("{:>3}  {:<30} {:.4}", entry.rank, entry.name, entry.gain_bits);
            }
        }
        Command::Features { combo } => {
            let (csv, manifest) = pipeline::cmd_features(&cfg, combo.parse()?)?;
            println!("{}\n{}", csv.display(), manifest.display());
        }
        Command::Train { matrix, model_name } => {
            println!("{}", pipeline::cmd_train(&cfg, &matrix, &model_name)?.display());
        }
        Command::Predict { model, matrix } => {
            println!("{}", pipeline::cmd_predict(&cfg, &model, &matrix)?.display());
        }
        Command::Config => print!("{}", cfg.to_toml()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let defaults = format!(
        "Configuration keys and defaults:\n\n{}\n\
         Optional keys, unset by default: lda_alpha (then 50 / lda_topics), m_try (then m_try_rule),\n\
         max_depth (unlimited), retweet_column, followers_column, followees_column (absent),\n\
         stopwords_path, emphatics_path, pos_lexicon_path, polarity_path, hashtag_overrides_path\n\
         (bundled lists).\n\n\
         Exit codes: 0 success, 2 usage or configuration error, 3 data error, 4 internal invariant violation.",
        PipelineConfig::default().to_toml()
    );
    let matches = Cli::command().after_long_help(defaults).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
