//! Line-oriented word lists bundled with the crate.
//!
//! Plain lists hold one term per line; tagged lists hold `term<TAB>value`.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};

use super::Pos;

pub(crate) const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords.txt");
pub(crate) const BUNDLED_EMPHATICS: &str = include_str!("../../data/emphatic.txt");
pub(crate) const BUNDLED_EMOTICONS: &str = include_str!("../../data/emoticons.txt");
pub(crate) const BUNDLED_POS: &str = include_str!("../../data/pos_lexicon.tsv");
pub(crate) const BUNDLED_POLARITY: &str = include_str!("../../data/polarity.tsv");
pub(crate) const BUNDLED_OVERRIDES: &str = include_str!("../../data/hashtag_overrides.tsv");

/// Iterates `(line number, trimmed content)` over non-comment, non-blank lines.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// A set of lowercase, whitespace-free terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordList {
    entries: HashSet<String>,
}

impl WordList {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut entries = HashSet::new();
        for (line, raw) in data_lines(text) {
            let term = raw.trim();
            if term.chars().any(char::is_whitespace) {
                return Err(Error::Lexicon {
                    path: source.to_string(),
                    line,
                    message: format!("entry {term:?} contains whitespace"),
                });
            }
            entries.insert(term.to_lowercase());
        }
        Ok(WordList { entries })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        WordList::parse(&read_file(path)?, &path.display().to_string())
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        WordList {
            entries: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn insert(&mut self, word: &str) {
        self.entries.insert(word.to_lowercase());
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn bundled_stopwords() -> Self {
        WordList::parse(BUNDLED_STOPWORDS, "stopwords.txt").expect("bundled stopwords")
    }
}

/// Intensifier words counted as emphatic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmphaticLexicon(pub WordList);

impl EmphaticLexicon {
    pub fn bundled() -> Self {
        EmphaticLexicon(WordList::parse(BUNDLED_EMPHATICS, "emphatic.txt").expect("bundled emphatics"))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        WordList::from_file(path).map(EmphaticLexicon)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }
}

/// Case-sensitive ASCII emoticon inventory.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmoticonList {
    entries: HashSet<String>,
}

impl EmoticonList {
    pub fn parse(text: &str) -> Self {
        EmoticonList {
            entries: data_lines(text).map(|(_, l)| l.trim().to_string()).collect(),
        }
    }

    pub fn bundled() -> Self {
        EmoticonList::parse(BUNDLED_EMOTICONS)
    }

    pub fn contains(&self, s: &str) -> bool {
        self.entries.contains(s)
    }
}

/// Most-frequent coarse tag per word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PosLexicon {
    tags: HashMap<String, Pos>,
}

impl PosLexicon {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut tags = HashMap::new();
        for (line, raw) in data_lines(text) {
            let bad = |message: String| Error::Lexicon {
                path: source.to_string(),
                line,
                message,
            };
            let (word, tag) = raw
                .split_once('\t')
                .ok_or_else(|| bad(format!("expected word<TAB>TAG, got {raw:?}")))?;
            let pos = tag
                .trim()
                .parse::<Pos>()
                .map_err(|_| bad(format!("unknown tag {tag:?}")))?;
            tags.insert(word.trim().to_lowercase(), pos);
        }
        Ok(PosLexicon { tags })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        PosLexicon::parse(&read_file(path)?, &path.display().to_string())
    }

    pub fn bundled() -> Self {
        PosLexicon::parse(BUNDLED_POS, "pos_lexicon.tsv").expect("bundled POS lexicon")
    }

    pub fn get(&self, word: &str) -> Option<Pos> {
        self.tags.get(word).copied()
    }

    pub fn insert(&mut self, word: &str, pos: Pos) {
        self.tags.insert(word.to_lowercase(), pos);
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tags.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks_skipped() {
        let w = WordList::parse("# header\n\nFoo\nbar\r\n", "t").unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.contains("foo"));
        assert!(w.contains("bar"));
    }

    #[test]
    fn whitespace_entry_rejected() {
        assert!(matches!(
            WordList::parse("two words\n", "t"),
            Err(Error::Lexicon { line: 1, .. })
        ));
    }

    #[test]
    fn bundled_lists_load() {
        let stop = WordList::bundled_stopwords();
        assert!(stop.contains("the"));
        assert!(!stop.contains("don't"), "negations must survive stopword removal");
        assert!(!stop.contains("not"));
        assert!(EmphaticLexicon::bundled().contains("really"));
        assert!(EmoticonList::bundled().contains(":)"));
        let pos = PosLexicon::bundled();
        assert!(pos.len() > 4000);
        assert_eq!(pos.get("car"), Some(Pos::Noun));
        assert_eq!(pos.get("quickly"), Some(Pos::Adv));
    }

    #[test]
    fn pos_lexicon_rejects_unknown_tag() {
        assert!(PosLexicon::parse("car\tTHING\n", "t").is_err());
        assert!(PosLexicon::parse("car NOUN\n", "t").is_err());
    }
}
