//! Synthetic annotated tweets for demos, tests and benchmarks.
//!
//! Labels follow a skewed five-point distribution dominated by neutral
//! tweets; polar tweets lean on sentiment-bearing words, hashtags and
//! emphatic markers so that every feature set carries some signal.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, LabeledTweet, SentimentLabel};

const POSITIVE: &[&str] = &[
    "cool", "awesome", "excited", "nice", "perfect", "future", "love", "great", "amazing", "faster",
    "safer", "happy", "brilliant", "wonderful", "exciting",
];
const NEGATIVE: &[&str] = &[
    "ridiculous", "difficult", "crash", "dangerous", "scary", "hate", "terrible", "accident", "worried",
    "stupid", "afraid", "awful", "risky", "killed", "worst",
];
const NEUTRAL: &[&str] = &[
    "google", "car", "cars", "drive", "road", "test", "news", "company", "technology", "people", "city",
    "autonomous", "driverless", "uber", "tesla", "week", "report", "law", "state", "traffic", "vehicle",
    "driver", "highway", "engineers", "program", "announced", "california", "insurance", "industry",
    "model", "future", "today",
];
const FILLER: &[&str] = &["the", "a", "is", "about", "with", "to", "of", "in", "on", "my", "this"];
const POS_TAGS: &[&str] = &["lovemycar", "futureisnow", "awesometech"];
const NEG_TAGS: &[&str] = &["fail", "scarytech", "nothanks"];
const NEUTRAL_TAGS: &[&str] = &["selfdrivingcars", "google", "tech", "driverless"];

/// Label weights for 1..=5, shaped like a typical opinion corpus.
const LABEL_WEIGHTS: [f64; 5] = [0.016, 0.099, 0.611, 0.208, 0.066];

fn draw_label(rng: &mut ChaCha8Rng) -> u8 {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, w) in LABEL_WEIGHTS.iter().enumerate() {
        acc += w;
        if u < acc {
            return i as u8 + 1;
        }
    }
    5
}

fn pick<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
    words.choose(rng).expect("non-empty word list")
}

/// One synthetic tweet text for `label`.
fn tweet_text(rng: &mut ChaCha8Rng, label: u8, serial: usize) -> (String, bool) {
    let strength = f64::from(label.abs_diff(3)) / 2.0;
    let polar: &[&str] = match label {
        4 | 5 => POSITIVE,
        1 | 2 => NEGATIVE,
        _ => NEUTRAL,
    };
    let mut words: Vec<String> = Vec::new();
    let retweet = rng.gen_bool(0.12);
    if retweet {
        words.push("RT".into());
        words.push(format!("@user{}", rng.gen_range(0..40)));
    }
    for _ in 0..rng.gen_range(5..12) {
        let r: f64 = rng.gen();
        let w = if label != 3 && r < 0.25 + 0.25 * strength {
            pick(rng, polar)
        } else if r < 0.75 {
            pick(rng, NEUTRAL)
        } else if label == 3 && r < 0.8 {
            // neutral tweets occasionally mention opinion words too
            let side = if rng.gen_bool(0.5) { POSITIVE } else { NEGATIVE };
            pick(rng, side)
        } else {
            pick(rng, FILLER)
        };
        words.push(w.to_string());
    }
    if strength > 0.9 && rng.gen_bool(0.6) {
        let i = rng.gen_range(0..words.len());
        words[i] = words[i].to_uppercase();
    }
    if strength > 0.4 && rng.gen_bool(0.4) {
        words.insert(rng.gen_range(0..words.len()), pick(rng, &["really", "so", "totally", "very"]).into());
    }
    let tag = match label {
        4 | 5 if rng.gen_bool(0.3) => Some(pick(rng, POS_TAGS)),
        1 | 2 if rng.gen_bool(0.3) => Some(pick(rng, NEG_TAGS)),
        _ if rng.gen_bool(0.35) => Some(pick(rng, NEUTRAL_TAGS)),
        _ => None,
    };
    if let Some(t) = tag {
        words.push(format!("#{t}"));
    }
    if rng.gen_bool(if label == 3 { 0.45 } else { 0.2 }) {
        words.push(format!("http://t.co/x{serial:05}"));
    }
    let mut text = words.join(" ");
    if strength > 0.4 && rng.gen_bool(0.35 * strength) {
        text.push_str("!!!");
    } else if rng.gen_bool(0.1) {
        text.push('!');
    }
    (text, retweet)
}

/// `n` synthetic tweets, a pure function of `(n, seed)`.
pub fn synthetic_corpus(n: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tweets = (0..n)
        .map(|i| {
            let label = draw_label(&mut rng);
            let (text, is_retweet) = tweet_text(&mut rng, label, i);
            LabeledTweet {
                id: (i + 1).to_string(),
                text,
                label: SentimentLabel::new(label).expect("label in range"),
                followers: None,
                followees: None,
                is_retweet,
            }
        })
        .collect();
    Corpus::new(tweets)
}

/// Synthetic tweets rendered as a CSV with the default column names,
/// including a sprinkle of `not_relevant` rows that loading drops.
pub fn synthetic_csv(n: usize, seed: u64) -> String {
    let corpus = synthetic_corpus(n, seed);
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["_unit_id", "sentiment", "text"]).expect("in-memory write");
    for (i, t) in corpus.tweets().iter().enumerate() {
        wtr.write_record([t.id.as_str(), &t.label.to_string(), &t.text])
            .expect("in-memory write");
        if i % 50 == 49 {
            wtr.write_record([&format!("nr{i}"), "not_relevant", "unrelated text"])
                .expect("in-memory write");
        }
    }
    String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8")
}
