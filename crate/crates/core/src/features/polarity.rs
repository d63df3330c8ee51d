use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::textproc::{data_lines, read_file, BUNDLED_OVERRIDES, BUNDLED_POLARITY};

/// Word polarities plus manual per-hashtag overrides.
///
/// Neutral (0) entries matter: they let hashtag segmentation walk across
/// words like `my` or `car` that carry no sentiment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolarityLexicon {
    words: HashMap<String, i8>,
    overrides: HashMap<String, i8>,
    max_word_chars: usize,
}

fn parse_polarity(text: &str, source: &str) -> Result<Vec<(String, i8)>> {
    data_lines(text)
        .map(|(line, raw)| {
            let bad = |message: String| Error::Lexicon {
                path: source.to_string(),
                line,
                message,
            };
            let (term, value) = raw
                .split_once('\t')
                .ok_or_else(|| bad(format!("expected term<TAB>polarity, got {raw:?}")))?;
            let polarity = match value.trim() {
                "+1" | "1" => 1,
                "0" => 0,
                "-1" => -1,
                other => return Err(bad(format!("polarity must be +1, 0 or -1, got {other:?}"))),
            };
            let term = term.trim().to_lowercase();
            Ok((term.trim_start_matches('#').to_string(), polarity))
        })
        .collect()
}

impl PolarityLexicon {
    pub fn new(words: impl IntoIterator<Item = (String, i8)>) -> Self {
        let mut lex = PolarityLexicon::default();
        for (w, p) in words {
            lex.insert_word(&w, p);
        }
        lex
    }

    pub fn parse(words: &str, overrides: &str) -> Result<Self> {
        let mut lex = PolarityLexicon::new(parse_polarity(words, "polarity")?);
        for (tag, p) in parse_polarity(overrides, "hashtag overrides")? {
            lex.overrides.insert(tag, p);
        }
        Ok(lex)
    }

    pub fn bundled() -> Self {
        PolarityLexicon::parse(BUNDLED_POLARITY, BUNDLED_OVERRIDES).expect("bundled polarity lexicon")
    }

    /// Bundled lists, each replaced by the given file when present.
    pub fn load(words: Option<&Path>, overrides: Option<&Path>) -> Result<Self> {
        let words = match words {
            Some(p) => read_file(p)?,
            None => BUNDLED_POLARITY.to_string(),
        };
        let overrides = match overrides {
            Some(p) => read_file(p)?,
            None => BUNDLED_OVERRIDES.to_string(),
        };
        PolarityLexicon::parse(&words, &overrides)
    }

    pub fn insert_word(&mut self, word: &str, polarity: i8) {
        let word = word.to_lowercase();
        self.max_word_chars = self.max_word_chars.max(word.chars().count());
        self.words.insert(word, polarity.signum());
    }

    pub fn insert_override(&mut self, tag: &str, polarity: i8) {
        self.overrides
            .insert(tag.trim_start_matches('#').to_lowercase(), polarity.signum());
    }

    pub fn word(&self, word: &str) -> Option<i8> {
        self.words.get(word).copied()
    }

    /// Greedy longest-match split of `tag` into lexicon words; `None` when
    /// some position matches no word.
    pub fn segment(&self, tag: &str) -> Option<Vec<String>> {
        let chars: Vec<char> = tag.chars().collect();
        let mut parts = Vec::new();
        let mut pos = 0;
        while pos < chars.len() {
            let longest = self.max_word_chars.min(chars.len() - pos);
            let hit = (1..=longest).rev().find_map(|len| {
                let cand: String = chars[pos..pos + len].iter().collect();
                self.words.contains_key(&cand).then_some((cand, len))
            })?;
            parts.push(hit.0);
            pos += hit.1;
        }
        Some(parts)
    }

    /// Polarity of a normalized hashtag body: override, else the sign of the
    /// summed polarities of its segmentation, else 0.
    pub fn classify_hashtag(&self, tag: &str) -> i8 {
        if let Some(&p) = self.overrides.get(tag) {
            return p;
        }
        match self.segment(tag) {
            Some(parts) => {
                let sum: i32 = parts.iter().map(|p| i32::from(self.words[p])).sum();
                sum.signum() as i8
            }
            None => 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> PolarityLexicon {
        PolarityLexicon::new(
            [("fail", -1), ("love", 1), ("my", 0), ("car", 0), ("cars", 0), ("hate", -1)]
                .into_iter()
                .map(|(w, p)| (w.to_string(), p)),
        )
    }

    #[test]
    fn direct_hit_and_segmentation() {
        let l = lex();
        assert_eq!(l.classify_hashtag("fail"), -1);
        assert_eq!(l.classify_hashtag("lovemycar"), 1);
        assert_eq!(l.segment("lovemycars").unwrap(), vec!["love", "my", "cars"]);
        assert_eq!(l.classify_hashtag("xqzv"), 0);
        assert_eq!(l.classify_hashtag("lovehate"), 0);
        assert_eq!(l.classify_hashtag("mycar"), 0);
    }

    #[test]
    fn override_wins() {
        let mut l = lex();
        l.insert_override("#LoveMyCar", -1);
        assert_eq!(l.classify_hashtag("lovemycar"), -1);
    }

    #[test]
    fn parse_formats() {
        let l = PolarityLexicon::parse("# c\ngood\t+1\nbad\t-1\nmeh\t0\n", "Fail\t+1\n").unwrap();
        assert_eq!(l.word("good"), Some(1));
        assert_eq!(l.word("bad"), Some(-1));
        assert_eq!(l.classify_hashtag("fail"), 1);
        assert!(PolarityLexicon::parse("good\t2\n", "").is_err());
        assert!(PolarityLexicon::parse("good +1\n", "").is_err());
    }

    #[test]
    fn bundled_has_sentiment_words() {
        let l = PolarityLexicon::bundled();
        assert_eq!(l.word("awesome"), Some(1));
        assert_eq!(l.word("ridiculous"), Some(-1));
        assert_eq!(l.classify_hashtag("fail"), -1);
    }
}
