//! The three feature sets and labeled feature matrices.
//!
//! * Unigrams: binary presence of salient stems (TF-IDF top terms plus
//!   topic-model words), named `uni:<stem>`.
//! * Linguistic: POS counts, emphatic count and tweet length, `ling:*`.
//! * Meta-data: retweet flag, URL count, hashtag polarity counts, follower
//!   counts and per-hashtag presence, `meta:*`.

mod polarity;
mod tfidf;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, LabelScheme, LabeledTweet};
use crate::error::{Error, Result};
use crate::textproc::{
    content_terms, count_emphatics, extract_hashtags, Pos, TextResources, TokenKind, TokenizedDoc,
};
use crate::topics::{LdaModel, LdaParams};

pub use polarity::PolarityLexicon;
pub use tfidf::{augment_with_topic_words, tfidf_scores, top_tfidf_unigrams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FeatureSet {
    Unigrams,
    Linguistic,
    Metadata,
}

impl FeatureSet {
    fn of_name(name: &str) -> Option<FeatureSet> {
        if name.starts_with("uni:") {
            Some(FeatureSet::Unigrams)
        } else if name.starts_with("ling:") {
            Some(FeatureSet::Linguistic)
        } else if name.starts_with("meta:") {
            Some(FeatureSet::Metadata)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FeatureKind {
    Binary,
    Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub set: FeatureSet,
    pub kind: FeatureKind,
}

impl FeatureSpec {
    fn new(name: impl Into<String>, set: FeatureSet, kind: FeatureKind) -> Self {
        FeatureSpec {
            name: name.into(),
            set,
            kind,
        }
    }
}

pub const LINGUISTIC_NAMES: [&str; 6] = [
    "ling:noun",
    "ling:verb",
    "ling:adjective",
    "ling:adverb",
    "ling:emphatics",
    "ling:tweet_length",
];

pub const METADATA_NAMES: [&str; 7] = [
    "meta:retweet",
    "meta:url_count",
    "meta:hashtag_pos",
    "meta:hashtag_neu",
    "meta:hashtag_neg",
    "meta:followers",
    "meta:followees",
];

/// A non-empty subset of the three feature sets, e.g. `"UL"` or `"ULM"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FeatureCombo {
    pub unigrams: bool,
    pub linguistic: bool,
    pub metadata: bool,
}

impl FeatureCombo {
    pub const U: FeatureCombo = FeatureCombo::new(true, false, false);
    pub const UL: FeatureCombo = FeatureCombo::new(true, true, false);
    pub const LM: FeatureCombo = FeatureCombo::new(false, true, true);
    pub const ULM: FeatureCombo = FeatureCombo::new(true, true, true);

    /// Baseline first, then sets added one by one.
    pub const STANDARD: [FeatureCombo; 4] = [Self::U, Self::UL, Self::LM, Self::ULM];

    pub const fn new(unigrams: bool, linguistic: bool, metadata: bool) -> Self {
        FeatureCombo {
            unigrams,
            linguistic,
            metadata,
        }
    }

    pub fn contains(&self, set: FeatureSet) -> bool {
        match set {
            FeatureSet::Unigrams => self.unigrams,
            FeatureSet::Linguistic => self.linguistic,
            FeatureSet::Metadata => self.metadata,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.unigrams || self.linguistic || self.metadata)
    }

    /// Human-readable row label used in result tables.
    pub fn label(&self) -> String {
        match (self.unigrams, self.linguistic, self.metadata) {
            (true, false, false) => "Unigrams (Baseline)".into(),
            (true, true, false) => "Unigram + Linguistic".into(),
            (false, true, true) => "Linguistic + Meta-Data".into(),
            (true, true, true) => "Unigram + Meta-Data + Linguistic".into(),
            (true, false, true) => "Unigram + Meta-Data".into(),
            (false, true, false) => "Linguistic".into(),
            (false, false, true) => "Meta-Data".into(),
            (false, false, false) => "(none)".into(),
        }
    }
}

impl fmt::Display for FeatureCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unigrams {
            f.write_str("U")?;
        }
        if self.linguistic {
            f.write_str("L")?;
        }
        if self.metadata {
            f.write_str("M")?;
        }
        Ok(())
    }
}

impl FromStr for FeatureCombo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut combo = FeatureCombo::new(false, false, false);
        for c in s.trim().chars() {
            match c.to_ascii_uppercase() {
                'U' => combo.unigrams = true,
                'L' => combo.linguistic = true,
                'M' => combo.metadata = true,
                '+' | ',' => {}
                _ => return Err(Error::Config(format!("unknown feature set {c:?} in combo {s:?}"))),
            }
        }
        if combo.is_empty() {
            return Err(Error::Config(format!("empty feature combo {s:?}")));
        }
        Ok(combo)
    }
}

/// Labeled rows of non-negative feature values.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub specs: Vec<FeatureSpec>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub row_ids: Vec<String>,
}

/// JSON sidecar describing a serialized matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixManifest {
    pub specs: Vec<FeatureSpec>,
    pub classes: Vec<String>,
    pub rows: usize,
}

impl FeatureMatrix {
    pub fn new(
        specs: Vec<FeatureSpec>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        row_ids: Vec<String>,
    ) -> Result<Self> {
        let m = FeatureMatrix {
            specs,
            rows,
            labels,
            class_names,
            row_ids,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rows.len();
        for len in [self.labels.len(), self.row_ids.len()] {
            if len != n {
                return Err(Error::Dimension { expected: n, got: len });
            }
        }
        for row in &self.rows {
            if row.len() != self.specs.len() {
                return Err(Error::Dimension {
                    expected: self.specs.len(),
                    got: row.len(),
                });
            }
        }
        if let Some(&bad) = self.labels.iter().find(|&&l| l >= self.class_names.len()) {
            return Err(Error::Index {
                index: bad,
                len: self.class_names.len(),
            });
        }
        let mut names = HashSet::new();
        for s in &self.specs {
            if !names.insert(&s.name) {
                return Err(Error::Invariant(format!("duplicate feature name {}", s.name)));
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.specs.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.specs.iter().position(|s| s.name == name)
    }

    pub fn select_columns(&self, cols: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            specs: cols.iter().map(|&j| self.specs[j].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| cols.iter().map(|&j| r[j]).collect())
                .collect(),
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            row_ids: self.row_ids.clone(),
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            specs: self.specs.clone(),
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            row_ids: rows.iter().map(|&i| self.row_ids[i].clone()).collect(),
        }
    }

    pub fn manifest(&self) -> MatrixManifest {
        MatrixManifest {
            specs: self.specs.clone(),
            classes: self.class_names.clone(),
            rows: self.n_rows(),
        }
    }

    /// CSV with feature names as header and a trailing `label` column.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = self.specs.iter().map(|s| s.name.as_str()).collect();
        header.push("label");
        wtr.write_record(&header)?;
        for (row, &label) in self.rows.iter().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(self.class_names[label].clone());
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    /// Reads a matrix written by [`FeatureMatrix::write_csv`]. Without a
    /// manifest, kinds default to COUNT and classes are the sorted distinct
    /// labels. Row ids are the 1-based row numbers.
    pub fn read_csv<R: Read>(reader: R, manifest: Option<&MatrixManifest>) -> Result<FeatureMatrix> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let Some((last, names)) = header.split_last() else {
            return Err(Error::Schema("label".into()));
        };
        if last != "label" {
            return Err(Error::Schema("label".into()));
        }
        let specs: Vec<FeatureSpec> = match manifest {
            Some(m) => {
                let listed: Vec<&str> = m.specs.iter().map(|s| s.name.as_str()).collect();
                if listed != names.iter().map(String::as_str).collect::<Vec<_>>() {
                    return Err(Error::Invariant("matrix header does not match its manifest".into()));
                }
                m.specs.clone()
            }
            None => names
                .iter()
                .map(|n| {
                    let set = FeatureSet::of_name(n)
                        .ok_or_else(|| Error::Config(format!("feature {n:?} has no set prefix")))?;
                    Ok(FeatureSpec::new(n.clone(), set, FeatureKind::Count))
                })
                .collect::<Result<_>>()?,
        };

        let mut raw_rows = Vec::new();
        let mut raw_labels = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = (0..names.len())
                .map(|j| {
                    rec[j].trim().parse::<f64>().map_err(|_| Error::Row {
                        row: i as u64 + 2,
                        message: format!("non-numeric value {:?} in {}", &rec[j], names[j]),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            raw_rows.push(row);
            raw_labels.push(rec[names.len()].to_string());
        }
        let class_names: Vec<String> = match manifest {
            Some(m) => m.classes.clone(),
            None => {
                let set: std::collections::BTreeSet<&String> = raw_labels.iter().collect();
                set.into_iter().cloned().collect()
            }
        };
        let labels = raw_labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                class_names.iter().position(|c| c == l).ok_or_else(|| Error::Row {
                    row: i as u64 + 2,
                    message: format!("unknown class {l:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let row_ids = (1..=raw_rows.len()).map(|i| i.to_string()).collect();
        FeatureMatrix::new(specs, raw_rows, labels, class_names, row_ids)
    }
}

/// Unit for `ling:tweet_length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthUnit {
    #[default]
    Tokens,
    Chars,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Number of TF-IDF unigrams.
    pub unigram_count: usize,
    /// Topic words added per topic of each polar topic model.
    pub per_topic: usize,
    /// Minimum number of tweets carrying a hashtag for it to get a `meta:tag:` column.
    pub hashtag_min_freq: usize,
    pub length_unit: LengthUnit,
    pub lda: LdaParams,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            unigram_count: 100,
            per_topic: 10,
            hashtag_min_freq: 10,
            length_unit: LengthUnit::Tokens,
            lda: LdaParams::default(),
        }
    }
}

pub fn unigram_features(doc_terms: &HashSet<&str>, terms: &[String]) -> Vec<f64> {
    terms
        .iter()
        .map(|t| f64::from(u8::from(doc_terms.contains(t.as_str()))))
        .collect()
}

/// `[noun, verb, adjective, adverb, emphatics, tweet_length]`.
pub fn linguistic_features(doc: &TokenizedDoc, res: &TextResources, text: &str, unit: LengthUnit) -> Vec<f64> {
    let mut pos = [0usize; 4];
    for t in doc.tokens.iter().filter(|t| t.kind == TokenKind::Word) {
        match t.pos {
            Pos::Noun => pos[0] += 1,
            Pos::Verb => pos[1] += 1,
            Pos::Adj => pos[2] += 1,
            Pos::Adv => pos[3] += 1,
            Pos::Other => {}
        }
    }
    let length = match unit {
        LengthUnit::Tokens => doc.tokens.len(),
        LengthUnit::Chars => text.chars().count(),
    };
    let emphatics = count_emphatics(doc, &res.emphatics);
    pos.iter()
        .chain([&emphatics, &length])
        .map(|&v| v as f64)
        .collect()
}

/// Meta-data block: the seven fixed columns then one presence column per
/// entry of `tag_vocab`.
pub fn metadata_features(
    tweet: &LabeledTweet,
    doc: &TokenizedDoc,
    lex: &PolarityLexicon,
    tag_vocab: &[String],
) -> Vec<f64> {
    let urls = doc.tokens.iter().filter(|t| t.kind == TokenKind::Url).count();
    let tags = extract_hashtags(doc);
    let mut polar = [0usize; 3];
    for tag in &tags {
        match lex.classify_hashtag(tag) {
            1 => polar[0] += 1,
            0 => polar[1] += 1,
            _ => polar[2] += 1,
        }
    }
    let mut out = vec![
        f64::from(u8::from(tweet.is_retweet)),
        urls as f64,
        polar[0] as f64,
        polar[1] as f64,
        polar[2] as f64,
        tweet.followers.unwrap_or(0) as f64,
        tweet.followees.unwrap_or(0) as f64,
    ];
    let present: HashSet<&str> = tags.iter().map(String::as_str).collect();
    out.extend(tag_vocab.iter().map(|t| f64::from(u8::from(present.contains(t.as_str())))));
    out
}

/// Hashtags appearing in at least `min_freq` tweets, sorted.
pub fn frequent_hashtags(docs: &[TokenizedDoc], min_freq: usize) -> Vec<String> {
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let unique: HashSet<String> = extract_hashtags(doc).into_iter().collect();
        for tag in unique {
            *df.entry(tag).or_default() += 1;
        }
    }
    df.into_iter()
        .filter(|&(_, c)| c >= min_freq.max(1))
        .map(|(t, _)| t)
        .collect()
}

/// Corpus-wide featurization state: analyzed tweets, the chosen unigram
/// terms and the hashtag vocabulary. Feature matrices for any combination
/// of sets are cut from it.
#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    pub tweets: Vec<LabeledTweet>,
    pub docs: Vec<TokenizedDoc>,
    pub terms: Vec<Vec<String>>,
    pub unigram_terms: Vec<String>,
    pub tag_vocab: Vec<String>,
    pub positive_topics: Option<LdaModel>,
    pub negative_topics: Option<LdaModel>,
    length_unit: LengthUnit,
}

impl PreparedCorpus {
    pub fn prepare(
        corpus: &Corpus,
        config: &FeatureConfig,
        res: &TextResources,
    ) -> Result<PreparedCorpus> {
        if corpus.is_empty() {
            return Err(Error::EmptyInput("cannot featurize an empty corpus".into()));
        }
        let tweets = corpus.tweets().to_vec();
        let docs: Vec<TokenizedDoc> = tweets.iter().map(|t| res.analyze(&t.id, &t.text)).collect();
        let terms: Vec<Vec<String>> = docs.iter().map(|d| content_terms(d, &res.stopwords)).collect();

        let mut unigram_terms = top_tfidf_unigrams(&terms, config.unigram_count)?;
        let (positive_topics, negative_topics) = if config.per_topic > 0 {
            let fit = |polar: fn(&LabeledTweet) -> bool| -> Result<Option<LdaModel>> {
                let split: Vec<Vec<String>> = tweets
                    .iter()
                    .zip(&terms)
                    .filter(|(t, _)| polar(t))
                    .map(|(_, d)| d.clone())
                    .collect();
                if split.iter().all(Vec::is_empty) {
                    return Ok(None);
                }
                LdaModel::fit(&split, config.lda).map(Some)
            };
            (fit(|t| t.label.is_positive())?, fit(|t| t.label.is_negative())?)
        } else {
            (None, None)
        };
        let models: Vec<&LdaModel> = positive_topics.iter().chain(negative_topics.iter()).collect();
        unigram_terms = augment_with_topic_words(&unigram_terms, &models, config.per_topic);

        let tag_vocab = frequent_hashtags(&docs, config.hashtag_min_freq);
        Ok(PreparedCorpus {
            tweets,
            docs,
            terms,
            unigram_terms,
            tag_vocab,
            positive_topics,
            negative_topics,
            length_unit: config.length_unit,
        })
    }

    pub fn specs(&self, combo: FeatureCombo) -> Vec<FeatureSpec> {
        let mut specs = Vec::new();
        if combo.unigrams {
            specs.extend(self.unigram_terms.iter().map(|t| {
                FeatureSpec::new(format!("uni:{t}"), FeatureSet::Unigrams, FeatureKind::Binary)
            }));
        }
        if combo.linguistic {
            specs.extend(
                LINGUISTIC_NAMES
                    .iter()
                    .map(|n| FeatureSpec::new(*n, FeatureSet::Linguistic, FeatureKind::Count)),
            );
        }
        if combo.metadata {
            specs.extend(METADATA_NAMES.iter().map(|n| {
                let kind = if *n == "meta:retweet" {
                    FeatureKind::Binary
                } else {
                    FeatureKind::Count
                };
                FeatureSpec::new(*n, FeatureSet::Metadata, kind)
            }));
            specs.extend(self.tag_vocab.iter().map(|t| {
                FeatureSpec::new(format!("meta:tag:{t}"), FeatureSet::Metadata, FeatureKind::Binary)
            }));
        }
        specs
    }

    pub fn assemble(
        &self,
        combo: FeatureCombo,
        scheme: LabelScheme,
        res: &TextResources,
        lex: &PolarityLexicon,
    ) -> Result<FeatureMatrix> {
        if combo.is_empty() {
            return Err(Error::Parameter("no feature set requested".into()));
        }
        let rows = self
            .tweets
            .iter()
            .zip(&self.docs)
            .zip(&self.terms)
            .map(|((tweet, doc), terms)| {
                let mut row = Vec::new();
                if combo.unigrams {
                    let present: HashSet<&str> = terms.iter().map(String::as_str).collect();
                    row.extend(unigram_features(&present, &self.unigram_terms));
                }
                if combo.linguistic {
                    row.extend(linguistic_features(doc, res, &tweet.text, self.length_unit));
                }
                if combo.metadata {
                    row.extend(metadata_features(tweet, doc, lex, &self.tag_vocab));
                }
                row
            })
            .collect();
        FeatureMatrix::new(
            self.specs(combo),
            rows,
            self.tweets.iter().map(|t| scheme.class_of(t.label)).collect(),
            scheme.class_names(),
            self.tweets.iter().map(|t| t.id.clone()).collect(),
        )
    }
}

/// One-shot featurization of `corpus` for the given combination.
pub fn assemble(
    corpus: &Corpus,
    combo: FeatureCombo,
    scheme: LabelScheme,
    config: &FeatureConfig,
    res: &TextResources,
    lex: &PolarityLexicon,
) -> Result<FeatureMatrix> {
    if combo.is_empty() {
        return Err(Error::Parameter("no feature set requested".into()));
    }
    let mut config = config.clone();
    if !combo.unigrams {
        config.per_topic = 0;
    }
    PreparedCorpus::prepare(corpus, &config, res)?.assemble(combo, scheme, res, lex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ColumnMapping, SentimentLabel};
    use crate::textproc::tokenize;

    fn tweet(text: &str, label: u8) -> LabeledTweet {
        LabeledTweet {
            id: text.len().to_string(),
            text: text.into(),
            label: SentimentLabel::new(label).unwrap(),
            followers: None,
            followees: None,
            is_retweet: false,
        }
    }

    #[test]
    fn combo_parsing() {
        assert_eq!("ULM".parse::<FeatureCombo>().unwrap(), FeatureCombo::ULM);
        assert_eq!("lu".parse::<FeatureCombo>().unwrap(), FeatureCombo::UL);
        assert_eq!(FeatureCombo::LM.to_string(), "LM");
        assert!("UX".parse::<FeatureCombo>().is_err());
        assert!("".parse::<FeatureCombo>().is_err());
    }

    #[test]
    fn unigram_presence() {
        let terms = vec!["car".to_string(), "bad".to_string()];
        let doc: HashSet<&str> = ["car", "cool", "car"].into_iter().collect();
        assert_eq!(unigram_features(&doc, &terms), vec![1.0, 0.0]);
        assert_eq!(unigram_features(&HashSet::new(), &terms), vec![0.0, 0.0]);
    }

    #[test]
    fn linguistic_counts() {
        let res = TextResources::bundled();
        let text = "The quick car drives quickly";
        let doc = res.analyze("1", text);
        assert_eq!(
            linguistic_features(&doc, &res, text, LengthUnit::Tokens),
            vec![1.0, 1.0, 1.0, 1.0, 0.0, 5.0]
        );
        assert_eq!(linguistic_features(&doc, &res, text, LengthUnit::Chars)[5], 28.0);
        let empty = res.analyze("2", "");
        assert_eq!(linguistic_features(&empty, &res, "", LengthUnit::Tokens), vec![0.0; 6]);
        let seven = res.analyze("3", "a b c d e f g");
        assert_eq!(linguistic_features(&seven, &res, "", LengthUnit::Tokens)[5], 7.0);
    }

    #[test]
    fn metadata_block() {
        let lex = PolarityLexicon::new(
            [("love", 1i8), ("self", 0), ("driving", 0), ("cars", 0)]
                .into_iter()
                .map(|(w, p)| (w.to_string(), p)),
        );
        let vocab = vec!["lovecars".to_string(), "selfdrivingcars".to_string()];
        let t = tweet("#selfdrivingcars now http://t.co/x", 3);
        let v = metadata_features(&t, &tokenize(&t.text), &lex, &vocab);
        assert_eq!(v, vec![0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);

        let t = tweet("plain words", 3);
        assert_eq!(metadata_features(&t, &tokenize(&t.text), &lex, &[]), vec![0.0; 7]);

        let mut t = tweet("#lovecars and #lovecars", 5);
        t.is_retweet = true;
        t.followers = Some(40);
        let v = metadata_features(&t, &tokenize(&t.text), &lex, &vocab);
        assert_eq!(v, vec![1.0, 0.0, 2.0, 0.0, 0.0, 40.0, 0.0, 1.0, 0.0]);
    }

    fn small_corpus() -> Corpus {
        let mut csv = String::from("_unit_id,sentiment,text\n");
        let rows = [
            (5, "cool car #selfdrivingcars love it"),
            (4, "awesome ride in a google car #selfdrivingcars"),
            (3, "cars drive themselves now #selfdrivingcars"),
            (2, "crash again, scary #fail"),
            (1, "REALLY ridiculous and dangerous!!! #fail"),
            (3, "news about driverless cars http://t.co/abc"),
        ];
        for (i, (l, t)) in rows.iter().enumerate() {
            csv.push_str(&format!("{},{},\"{}\"\n", i + 1, l, t));
        }
        Corpus::from_reader(csv.as_bytes(), &ColumnMapping::default()).unwrap()
    }

    fn small_config() -> FeatureConfig {
        FeatureConfig {
            unigram_count: 5,
            per_topic: 2,
            hashtag_min_freq: 2,
            length_unit: LengthUnit::Tokens,
            lda: LdaParams {
                k: 2,
                alpha: 0.5,
                beta: 0.01,
                iters: 20,
                seed: 3,
            },
        }
    }

    #[test]
    fn assemble_blocks_and_subsets() {
        let res = TextResources::bundled();
        let lex = PolarityLexicon::bundled();
        let prepared = PreparedCorpus::prepare(&small_corpus(), &small_config(), &res).unwrap();
        assert_eq!(prepared.tag_vocab, vec!["fail", "selfdrivingcars"]);
        let u = prepared.unigram_terms.len();
        assert!(u >= 5);

        let l = prepared.assemble(FeatureCombo::new(false, true, false), LabelScheme::FiveClass, &res, &lex).unwrap();
        assert_eq!(l.n_cols(), 6);
        let ulm = prepared.assemble(FeatureCombo::ULM, LabelScheme::FiveClass, &res, &lex).unwrap();
        assert_eq!(ulm.n_cols(), u + 6 + 7 + 2);
        assert_eq!(ulm.n_rows(), 6);
        assert_eq!(ulm.labels, vec![4, 3, 2, 1, 0, 2]);

        let ul = prepared.assemble(FeatureCombo::UL, LabelScheme::FiveClass, &res, &lex).unwrap();
        for (j, spec) in ul.specs.iter().enumerate() {
            let k = ulm.column_index(&spec.name).unwrap();
            assert_eq!(ul.column(j), ulm.column(k), "{}", spec.name);
        }
        for (j, spec) in ulm.specs.iter().enumerate() {
            if spec.kind == FeatureKind::Binary {
                assert!(ulm.column(j).iter().all(|&v| v == 0.0 || v == 1.0));
            }
        }
        assert!(matches!(
            prepared.assemble(FeatureCombo::new(false, false, false), LabelScheme::FiveClass, &res, &lex),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn csv_round_trip_with_manifest() {
        let res = TextResources::bundled();
        let lex = PolarityLexicon::bundled();
        let m = assemble(&small_corpus(), FeatureCombo::LM, LabelScheme::ThreeClass, &small_config(), &res, &lex).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("ling:noun,"));
        assert!(text.lines().next().unwrap().ends_with(",label"));
        let back = FeatureMatrix::read_csv(&buf[..], Some(&m.manifest())).unwrap();
        assert_eq!(back.specs, m.specs);
        assert_eq!(back.rows, m.rows);
        assert_eq!(back.labels, m.labels);
        let inferred = FeatureMatrix::read_csv(&buf[..], None).unwrap();
        assert_eq!(inferred.rows, m.rows);
    }

    #[test]
    fn empty_corpus_rejected() {
        let res = TextResources::bundled();
        let empty = Corpus::new(vec![]);
        assert!(matches!(
            PreparedCorpus::prepare(&empty, &small_config(), &res),
            Err(Error::EmptyInput(_))
        ));
    }
}
