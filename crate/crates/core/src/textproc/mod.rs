//! Tweet tokenization, stemming, POS tagging and emphasis detection.

mod lexicon;
mod porter;
mod tokenize;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use lexicon::{EmoticonList, EmphaticLexicon, PosLexicon, WordList};
pub(crate) use lexicon::{data_lines, read_file, BUNDLED_OVERRIDES, BUNDLED_POLARITY};
pub use porter::stem;
pub use tokenize::Tokenizer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TokenKind {
    Word,
    Hashtag,
    Mention,
    Url,
    Emoticon,
    Punct,
    Number,
}

/// Coarse part of speech.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Other,
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "NOUN" => Ok(Pos::Noun),
            "VERB" => Ok(Pos::Verb),
            "ADJ" => Ok(Pos::Adj),
            "ADV" => Ok(Pos::Adv),
            "OTHER" => Ok(Pos::Other),
            _ => Err(format!("unknown POS tag {s:?}")),
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::Other => "OTHER",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Lowercased surface; hashtags and mentions lose their `#`/`@`.
    pub normalized: String,
    pub kind: TokenKind,
    /// Porter stem for words, otherwise equal to `normalized`.
    pub stem: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedDoc {
    pub tweet_id: String,
    pub tokens: Vec<Token>,
    /// Maximal runs of two or more `!`.
    pub exclamation_runs: usize,
}

fn default_tokenizer() -> &'static Tokenizer {
    static TOKENIZER: OnceLock<Tokenizer> = OnceLock::new();
    TOKENIZER.get_or_init(Tokenizer::default)
}

/// Tokenizes with the bundled emoticon list.
pub fn tokenize(text: &str) -> TokenizedDoc {
    default_tokenizer().tokenize(text)
}

/// Drops stopword WORD tokens; other kinds pass through.
pub fn remove_stopwords(tokens: Vec<Token>, stopwords: &WordList) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| t.kind != TokenKind::Word || !stopwords.contains(&t.normalized))
        .collect()
}

/// Tags WORD tokens from the lexicon, then suffix rules, then NOUN.
pub fn pos_tag(tokens: &mut [Token], lexicon: &PosLexicon) {
    for t in tokens {
        t.pos = if t.kind == TokenKind::Word {
            tag_word(&t.normalized, lexicon)
        } else {
            Pos::Other
        };
    }
}

fn tag_word(word: &str, lexicon: &PosLexicon) -> Pos {
    if let Some(pos) = lexicon.get(word) {
        return pos;
    }
    let len = word.chars().count();
    if word.ends_with("ly") {
        return Pos::Adv;
    }
    if ["ous", "ful", "able", "ive"].iter().any(|s| word.ends_with(s)) {
        return Pos::Adj;
    }
    if len > 4 && (word.ends_with("ize") || word.ends_with("ate")) {
        return Pos::Verb;
    }
    for suffix in ["ing", "ed"] {
        if let Some(base) = word.strip_suffix(suffix) {
            if !base.is_empty() {
                let is_verb = verb_bases(base)
                    .iter()
                    .any(|b| lexicon.get(b) == Some(Pos::Verb));
                return if is_verb { Pos::Verb } else { Pos::Adj };
            }
        }
    }
    Pos::Noun
}

/// Candidate lexicon forms of a word with `-ing`/`-ed` removed.
fn verb_bases(base: &str) -> Vec<String> {
    let mut out = vec![base.to_string(), format!("{base}e")];
    let b: Vec<char> = base.chars().collect();
    if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
        out.push(b[..b.len() - 1].iter().collect());
    }
    if let Some(stem) = base.strip_suffix('i') {
        out.push(format!("{stem}y"));
    }
    out
}

fn has_triple_repeat(s: &str) -> bool {
    let mut prev = None;
    let mut run = 0;
    for c in s.chars() {
        if Some(c) == prev {
            run += 1;
            if run >= 3 {
                return true;
            }
        } else {
            prev = Some(c);
            run = 1;
        }
    }
    false
}

fn is_all_caps(s: &str) -> bool {
    s.chars().count() >= 2 && s.chars().all(|c| c.is_alphabetic() && c.is_uppercase())
}

/// Emphasis score of a single token; at most one per signal-bearing token,
/// except that several `!!` runs inside one token each count.
fn token_emphasis(t: &Token, lex: &EmphaticLexicon) -> usize {
    let word_signal = t.kind == TokenKind::Word
        && (lex.contains(&t.normalized) || is_all_caps(&t.surface));
    let repeat_signal = !matches!(
        t.kind,
        TokenKind::Url | TokenKind::Mention | TokenKind::Number
    ) && has_triple_repeat(&t.normalized);
    let bangs = if t.kind == TokenKind::Url {
        0
    } else {
        tokenize::bang_runs(&t.surface)
    };
    bangs.max(usize::from(word_signal || repeat_signal))
}

/// Counts emphatic signals: intensifier words, all-caps words, letters
/// repeated three or more times, and `!!` runs.
pub fn count_emphatics(doc: &TokenizedDoc, lex: &EmphaticLexicon) -> usize {
    doc.tokens.iter().map(|t| token_emphasis(t, lex)).sum()
}

pub fn extract_hashtags(doc: &TokenizedDoc) -> Vec<String> {
    doc.tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Hashtag)
        .map(|t| t.normalized.clone())
        .collect()
}

pub fn extract_urls(doc: &TokenizedDoc) -> Vec<String> {
    doc.tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Url)
        .map(|t| t.surface.clone())
        .collect()
}

/// Stemmed content terms: non-stopword words plus stemmed hashtag bodies.
/// This is the term stream behind TF-IDF, unigram features and topic models.
pub fn content_terms(doc: &TokenizedDoc, stopwords: &WordList) -> Vec<String> {
    doc.tokens
        .iter()
        .filter_map(|t| match t.kind {
            TokenKind::Word if !stopwords.contains(&t.normalized) => Some(t.stem.clone()),
            TokenKind::Hashtag => Some(stem(&t.normalized)),
            _ => None,
        })
        .collect()
}

/// Word lists used by the text pipeline.
#[derive(Debug, Clone)]
pub struct TextResources {
    pub tokenizer: Tokenizer,
    pub stopwords: WordList,
    pub emphatics: EmphaticLexicon,
    pub pos: PosLexicon,
}

impl TextResources {
    pub fn bundled() -> Self {
        TextResources {
            tokenizer: Tokenizer::default(),
            stopwords: WordList::bundled_stopwords(),
            emphatics: EmphaticLexicon::bundled(),
            pos: PosLexicon::bundled(),
        }
    }

    /// Bundled lists, each replaced by the given file when present.
    pub fn load(
        stopwords: Option<&Path>,
        emphatics: Option<&Path>,
        pos: Option<&Path>,
    ) -> Result<Self> {
        let mut res = TextResources::bundled();
        if let Some(p) = stopwords {
            res.stopwords = WordList::from_file(p)?;
        }
        if let Some(p) = emphatics {
            res.emphatics = EmphaticLexicon::from_file(p)?;
        }
        if let Some(p) = pos {
            res.pos = PosLexicon::from_file(p)?;
        }
        Ok(res)
    }

    /// Tokenizes and POS-tags a tweet.
    pub fn analyze(&self, id: &str, text: &str) -> TokenizedDoc {
        let mut doc = self.tokenizer.tokenize(text);
        doc.tweet_id = id.to_string();
        pos_tag(&mut doc.tokens, &self.pos);
        doc
    }
}
