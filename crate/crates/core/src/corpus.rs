//! Annotated tweet ingestion.
//!
//! Rows come from a CrowdFlower-style CSV export. Which header carries the
//! sentiment, the text and the optional metadata is configured through a
//! [`ColumnMapping`]; rows marked non-relevant are dropped on load.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinal sentiment label, 1 (most negative) to 5 (most positive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct SentimentLabel(u8);

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 5] = [
        SentimentLabel(1),
        SentimentLabel(2),
        SentimentLabel(3),
        SentimentLabel(4),
        SentimentLabel(5),
    ];

    pub fn new(value: u8) -> Option<Self> {
        (1..=5).contains(&value).then_some(SentimentLabel(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0 >= 4
    }

    pub fn is_negative(self) -> bool {
        self.0 <= 2
    }
}

impl TryFrom<u8> for SentimentLabel {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, String> {
        SentimentLabel::new(value).ok_or_else(|| format!("sentiment {value} outside 1..=5"))
    }
}

impl From<SentimentLabel> for u8 {
    fn from(label: SentimentLabel) -> u8 {
        label.0
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTweet {
    pub id: String,
    pub text: String,
    pub label: SentimentLabel,
    pub followers: Option<u64>,
    pub followees: Option<u64>,
    pub is_retweet: bool,
}

/// Which CSV headers hold which field.
///
/// `id`, `retweet`, `followers` and `followees` are optional; when unmapped
/// (or mapped to a header the file lacks) ids fall back to the 1-based data
/// row number, follower counts are absent, and the retweet flag is derived
/// from a leading `RT ` in the text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub id: Option<String>,
    pub sentiment: String,
    pub text: String,
    pub retweet: Option<String>,
    pub followers: Option<String>,
    pub followees: Option<String>,
    pub not_relevant_marker: String,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            id: Some("_unit_id".into()),
            sentiment: "sentiment".into(),
            text: "text".into(),
            retweet: None,
            followers: None,
            followees: None,
            not_relevant_marker: "not_relevant".into(),
        }
    }
}

impl ColumnMapping {
    /// Mapping matching the header written by [`Corpus::write_csv`].
    pub fn canonical() -> Self {
        ColumnMapping {
            id: Some("id".into()),
            sentiment: "sentiment".into(),
            text: "text".into(),
            retweet: Some("is_retweet".into()),
            followers: Some("followers".into()),
            followees: Some("followees".into()),
            not_relevant_marker: "not_relevant".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    tweets: Vec<LabeledTweet>,
    histogram: BTreeMap<SentimentLabel, usize>,
}

/// Summary written by the `stats` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub total: usize,
    pub histogram: BTreeMap<String, usize>,
    pub majority_rate: f64,
}

impl Corpus {
    pub fn new(tweets: Vec<LabeledTweet>) -> Self {
        let mut histogram: BTreeMap<SentimentLabel, usize> =
            SentimentLabel::ALL.iter().map(|&l| (l, 0)).collect();
        for t in &tweets {
            *histogram.entry(t.label).or_default() += 1;
        }
        Corpus { tweets, histogram }
    }

    pub fn tweets(&self) -> &[LabeledTweet] {
        &self.tweets
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    /// Count per label; every label 1..=5 is present, possibly with 0.
    pub fn histogram(&self) -> &BTreeMap<SentimentLabel, usize> {
        &self.histogram
    }

    pub fn majority_rate(&self) -> f64 {
        if self.tweets.is_empty() {
            return 0.0;
        }
        let max = self.histogram.values().copied().max().unwrap_or(0);
        max as f64 / self.tweets.len() as f64
    }

    pub fn stats(&self) -> CorpusStats {
        CorpusStats {
            total: self.len(),
            histogram: self
                .histogram
                .iter()
                .map(|(l, &c)| (l.to_string(), c))
                .collect(),
            majority_rate: self.majority_rate(),
        }
    }

    pub fn load_csv(path: impl AsRef<Path>, mapping: &ColumnMapping) -> Result<Corpus> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Corpus::from_reader(file, mapping)
    }

    pub fn from_reader<R: Read>(reader: R, mapping: &ColumnMapping) -> Result<Corpus> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(reader);

        let headers = rdr.byte_headers()?.clone();
        if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
            return Err(Error::EmptyCorpus("file has no header row".into()));
        }
        let headers: Vec<String> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let h = decode_field(h);
                if i == 0 {
                    h.trim_start_matches('\u{feff}').to_string()
                } else {
                    h
                }
            })
            .collect();
        let find = |name: &str| headers.iter().position(|h| h == name);
        let required = |name: &str| find(name).ok_or_else(|| Error::Schema(name.to_string()));

        let sentiment_col = required(&mapping.sentiment)?;
        let text_col = required(&mapping.text)?;
        let id_col = mapping.id.as_deref().and_then(find);
        let retweet_col = mapping.retweet.as_deref().and_then(find);
        let followers_col = mapping.followers.as_deref().and_then(find);
        let followees_col = mapping.followees.as_deref().and_then(find);

        let mut tweets = Vec::new();
        let mut rows_seen = 0u64;
        let mut record = csv::ByteRecord::new();
        while rdr.read_byte_record(&mut record)? {
            rows_seen += 1;
            let line = record.position().map(|p| p.line()).unwrap_or(rows_seen + 1);
            let field = |col: usize| decode_field(record.get(col).unwrap_or_default());
            let row_err = |message: String| Error::Row { row: line, message };

            let sentiment = field(sentiment_col);
            let sentiment = sentiment.trim();
            if sentiment.eq_ignore_ascii_case(mapping.not_relevant_marker.trim()) {
                continue;
            }
            let label = sentiment
                .parse::<u8>()
                .ok()
                .and_then(SentimentLabel::new)
                .ok_or_else(|| row_err(format!("unparseable sentiment value {sentiment:?}")))?;

            let text = field(text_col);
            if text.trim().is_empty() {
                return Err(row_err("empty tweet text".into()));
            }

            let id = match id_col {
                Some(c) => field(c),
                None => rows_seen.to_string(),
            };
            let is_retweet = match retweet_col {
                Some(c) => parse_flag(&field(c)).ok_or_else(|| {
                    row_err(format!("unparseable retweet flag {:?}", field(c)))
                })?,
                None => text.trim_start().starts_with("RT "),
            };
            let count = |col: Option<usize>, what: &str| -> Result<Option<u64>> {
                let Some(c) = col else { return Ok(None) };
                let raw = field(c);
                let raw = raw.trim();
                if raw.is_empty() {
                    return Ok(None);
                }
                raw.parse::<u64>()
                    .map(Some)
                    .map_err(|_| row_err(format!("unparseable {what} count {raw:?}")))
            };
            let followers = count(followers_col, "followers")?;
            let followees = count(followees_col, "followees")?;

            tweets.push(LabeledTweet {
                id,
                text,
                label,
                followers,
                followees,
                is_retweet,
            });
        }

        if tweets.is_empty() {
            let why = if rows_seen == 0 {
                "file has no data rows".to_string()
            } else {
                format!("all {rows_seen} rows were filtered as non-relevant")
            };
            return Err(Error::EmptyCorpus(why));
        }
        Ok(Corpus::new(tweets))
    }

    /// Writes the corpus with the [`ColumnMapping::canonical`] header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["id", "sentiment", "text", "is_retweet", "followers", "followees"])?;
        for t in &self.tweets {
            let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
            wtr.write_record([
                t.id.clone(),
                t.label.to_string(),
                t.text.clone(),
                if t.is_retweet { "1".into() } else { "0".into() },
                opt(t.followers),
                opt(t.followees),
            ])?;
        }
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    /// Positive (labels 4, 5) and negative (labels 1, 2) sub-corpora; label 3 is in neither.
    pub fn split_polar(&self) -> (Corpus, Corpus) {
        let pick = |f: fn(SentimentLabel) -> bool| {
            Corpus::new(
                self.tweets
                    .iter()
                    .filter(|t| f(t.label))
                    .cloned()
                    .collect(),
            )
        };
        (pick(SentimentLabel::is_positive), pick(SentimentLabel::is_negative))
    }

    pub fn binarize_labels(&self, scheme: LabelScheme) -> ClassLabels {
        ClassLabels {
            names: scheme.class_names(),
            classes: self.tweets.iter().map(|t| scheme.class_of(t.label)).collect(),
        }
    }
}

/// Class granularity used for classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelScheme {
    #[default]
    FiveClass,
    ThreeClass,
}

impl LabelScheme {
    pub fn class_names(self) -> Vec<String> {
        match self {
            LabelScheme::FiveClass => SentimentLabel::ALL.iter().map(|l| l.to_string()).collect(),
            LabelScheme::ThreeClass => vec!["NEG".into(), "NEU".into(), "POS".into()],
        }
    }

    pub fn class_of(self, label: SentimentLabel) -> usize {
        match self {
            LabelScheme::FiveClass => label.value() as usize - 1,
            LabelScheme::ThreeClass => match label.value() {
                1 | 2 => 0,
                3 => 1,
                _ => 2,
            },
        }
    }
}

impl std::str::FromStr for LabelScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "five" | "5" | "five_class" | "fiveclass" => Ok(LabelScheme::FiveClass),
            "three" | "3" | "three_class" | "threeclass" => Ok(LabelScheme::ThreeClass),
            other => Err(Error::Config(format!("unknown label scheme {other:?}"))),
        }
    }
}

/// Class index per tweet plus the ordered class names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabels {
    pub names: Vec<String>,
    pub classes: Vec<usize>,
}

impl ClassLabels {
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.names.len()];
        for &c in &self.classes {
            counts[c] += 1;
        }
        counts
    }
}

fn parse_flag(raw: &str) -> Option<bool> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "t" | "yes" | "y" => Some(true),
        "0" | "false" | "f" | "no" | "n" | "" => Some(false),
        _ => None,
    }
}

// CrowdFlower exports are not always valid UTF-8; fall back to Latin-1 per field.
fn decode_field(bytes: &[u8]) -> String {
    match std::str::from_utf8(bytes) {
        Ok(s) => s.to_string(),
        Err(_) => bytes.iter().map(|&b| b as char).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(csv: &str) -> Result<Corpus> {
        Corpus::from_reader(csv.as_bytes(), &ColumnMapping::default())
    }

    #[test]
    fn drops_not_relevant_rows() {
        let c = load(
            "_unit_id,sentiment,text\n1,5,great car\n2,not_relevant,buy shoes\n3,1,crashed again\n",
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.tweets()[0].id, "1");
        assert_eq!(c.tweets()[1].label.value(), 1);
    }

    #[test]
    fn out_of_range_sentiment_is_row_error() {
        let err = load("_unit_id,sentiment,text\n1,5,ok\n2,7,bad\n").unwrap_err();
        match err {
            Error::Row { row, .. } => assert_eq!(row, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_column_names_it() {
        let err = load("_unit_id,label,text\n1,5,ok\n").unwrap_err();
        assert!(matches!(err, Error::Schema(ref c) if c == "sentiment"), "{err}");
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(load(""), Err(Error::EmptyCorpus(_))));
        assert!(matches!(load("_unit_id,sentiment,text\n"), Err(Error::EmptyCorpus(_))));
        assert!(matches!(
            load("_unit_id,sentiment,text\n1,not_relevant,x\n"),
            Err(Error::EmptyCorpus(_))
        ));
    }

    #[test]
    fn quoted_text_kept_byte_exact() {
        let c = load("_unit_id,sentiment,text\n9,3,\"  Hello, \"\"world\"\"  \"\n").unwrap();
        assert_eq!(c.tweets()[0].text, "  Hello, \"world\"  ");
    }

    #[test]
    fn optional_columns() {
        let mapping = ColumnMapping {
            followers: Some("fol".into()),
            followees: Some("missing".into()),
            ..ColumnMapping::default()
        };
        let c = Corpus::from_reader(
            "_unit_id,sentiment,text,fol\n1,4,RT @a: nice,12\n2,2,meh,\n".as_bytes(),
            &mapping,
        )
        .unwrap();
        assert_eq!(c.tweets()[0].followers, Some(12));
        assert_eq!(c.tweets()[0].followees, None);
        assert!(c.tweets()[0].is_retweet);
        assert_eq!(c.tweets()[1].followers, None);
        assert!(!c.tweets()[1].is_retweet);
    }

    #[test]
    fn latin1_fallback() {
        let mut bytes = b"_unit_id,sentiment,text\n1,3,caf".to_vec();
        bytes.push(0xe9);
        bytes.push(b'\n');
        let c = Corpus::from_reader(&bytes[..], &ColumnMapping::default()).unwrap();
        assert_eq!(c.tweets()[0].text, "caf\u{e9}");
    }

    #[test]
    fn split_and_schemes() {
        let c = load("_unit_id,sentiment,text\n1,5,a\n2,3,b\n3,2,c\n4,4,d\n").unwrap();
        let (pos, neg) = c.split_polar();
        assert_eq!(pos.tweets().iter().map(|t| t.id.as_str()).collect::<Vec<_>>(), ["1", "4"]);
        assert_eq!(neg.len(), 1);

        let three = c.binarize_labels(LabelScheme::ThreeClass);
        assert_eq!(three.classes, vec![2, 1, 0, 2]);
        let five = c.binarize_labels(LabelScheme::FiveClass);
        assert_eq!(five.names[five.classes[1]], "3");
    }

    #[test]
    fn only_neutral_gives_empty_splits() {
        let c = load("_unit_id,sentiment,text\n1,3,a\n2,3,b\n").unwrap();
        let (pos, neg) = c.split_polar();
        assert!(pos.is_empty() && neg.is_empty());
        let single = load("_unit_id,sentiment,text\n1,5,a\n").unwrap();
        let (pos, neg) = single.split_polar();
        assert_eq!((pos.len(), neg.len()), (1, 0));
    }

    #[test]
    fn stats_include_every_label() {
        let c = load("_unit_id,sentiment,text\n1,3,a\n2,3,b\n3,1,c\n").unwrap();
        let s = c.stats();
        assert_eq!(s.total, 3);
        assert_eq!(s.histogram["5"], 0);
        assert_eq!(s.histogram["3"], 2);
        assert!((s.majority_rate - 2.0 / 3.0).abs() < 1e-12);
    }
}
