//! Cross-validates the default feature combinations on a synthetic corpus.
//!
//! `cargo run --release --example synthetic_eval -- [n_tweets] [seed]`

use std::time::Instant;

use tweetlens::eval::format_table;
use tweetlens::pipeline::{evaluate_workspace, PipelineConfig, Workspace};
use tweetlens::synth::synthetic_corpus;

fn main() -> tweetlens::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(2000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);

    let cfg = PipelineConfig {
        output_dir: std::env::temp_dir().join("tweetlens-synthetic-eval"),
        ..PipelineConfig::default()
    };
    let start = Instant::now();
    let ws = Workspace::from_corpus(&cfg, synthetic_corpus(n, seed))?;
    eprintln!("featurized {n} tweets in {:.1?}", start.elapsed());
    let reports = evaluate_workspace(&cfg, &ws, &cfg.parsed_combos()?)?;
    print!("{}", format_table(&reports));
    eprintln!("total {:.1?}", start.elapsed());
    Ok(())
}
