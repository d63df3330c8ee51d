use super::lexicon::EmoticonList;
use super::porter;
use super::{Pos, Token, TokenKind, TokenizedDoc};

/// Rule-based tweet tokenizer.
///
/// Splits on whitespace, then peels punctuation off both ends of every
/// chunk. Apostrophes and hyphens inside a word stay in the word, so
/// `don't` and `self-driving` come out whole.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    emoticons: EmoticonList,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer {
            emoticons: EmoticonList::bundled(),
        }
    }
}

impl Tokenizer {
    pub fn new(emoticons: EmoticonList) -> Self {
        Tokenizer { emoticons }
    }

    pub fn tokenize(&self, text: &str) -> TokenizedDoc {
        let text = decode_entities(text);
        let mut tokens = Vec::new();
        for chunk in text.split_whitespace() {
            self.chunk(chunk, &mut tokens);
        }
        let exclamation_runs = tokens
            .iter()
            .filter(|t| t.kind != TokenKind::Url)
            .map(|t| bang_runs(&t.surface))
            .sum();
        TokenizedDoc {
            tweet_id: String::new(),
            tokens,
            exclamation_runs,
        }
    }

    fn chunk(&self, chunk: &str, out: &mut Vec<Token>) {
        if chunk.is_empty() {
            return;
        }
        if self.emoticons.contains(chunk) {
            out.push(Token::new(chunk, TokenKind::Emoticon));
            return;
        }

        // leading punctuation, keeping '#' and '@' which introduce tags
        let lead_end = chunk
            .char_indices()
            .find(|&(_, c)| c.is_alphanumeric() || c == '#' || c == '@')
            .map(|(i, _)| i)
            .unwrap_or(chunk.len());
        let (lead, rest) = chunk.split_at(lead_end);
        self.punct(lead, out);
        if rest.is_empty() {
            return;
        }

        if is_url(rest) {
            let end = rest.trim_end_matches(|c: char| ".,;:!?)]}\"'".contains(c)).len();
            let (url, tail) = rest.split_at(end);
            out.push(Token::new(url, TokenKind::Url));
            self.punct(tail, out);
            return;
        }

        if let Some(marker) = rest.chars().next().filter(|&c| c == '#' || c == '@') {
            let body_len: usize = rest[1..]
                .chars()
                .take_while(|&c| c.is_alphanumeric() || c == '_')
                .map(char::len_utf8)
                .sum();
            if body_len == 0 {
                self.punct(&rest[..1], out);
                self.chunk(&rest[1..], out);
            } else {
                let kind = if marker == '#' {
                    TokenKind::Hashtag
                } else {
                    TokenKind::Mention
                };
                out.push(Token::new(&rest[..1 + body_len], kind));
                self.chunk(&rest[1 + body_len..], out);
            }
            return;
        }

        let core_end = rest
            .char_indices()
            .rev()
            .find(|&(_, c)| c.is_alphanumeric())
            .map(|(i, c)| i + c.len_utf8())
            .unwrap_or(0);
        let (core, tail) = rest.split_at(core_end);
        if !core.is_empty() {
            let kind = if is_number(core) {
                TokenKind::Number
            } else {
                TokenKind::Word
            };
            out.push(Token::new(core, kind));
        }
        if self.emoticons.contains(tail) {
            out.push(Token::new(tail, TokenKind::Emoticon));
        } else {
            self.punct(tail, out);
        }
    }

    /// Emits a punctuation span as runs of identical characters.
    fn punct(&self, span: &str, out: &mut Vec<Token>) {
        let mut start = 0;
        let chars: Vec<(usize, char)> = span.char_indices().collect();
        for (k, &(i, c)) in chars.iter().enumerate() {
            let next_differs = chars.get(k + 1).is_none_or(|&(_, n)| n != c);
            if next_differs {
                let end = i + c.len_utf8();
                out.push(Token::new(&span[start..end], TokenKind::Punct));
                start = end;
            }
        }
    }
}

impl Token {
    fn new(surface: &str, kind: TokenKind) -> Token {
        let lower = surface.to_lowercase().replace('\u{2019}', "'");
        let normalized = match kind {
            TokenKind::Hashtag | TokenKind::Mention => lower[1..].to_string(),
            _ => lower,
        };
        let stem = if kind == TokenKind::Word {
            porter::stem(&normalized)
        } else {
            normalized.clone()
        };
        Token {
            surface: surface.to_string(),
            normalized,
            kind,
            stem,
            pos: Pos::Other,
        }
    }
}

fn is_url(s: &str) -> bool {
    let lower = s.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.contains("t.co/")
}

fn is_number(s: &str) -> bool {
    let first = s.chars().next();
    let last = s.chars().last();
    first.is_some_and(|c| c.is_ascii_digit())
        && last.is_some_and(|c| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | ':'))
}

pub(crate) fn bang_runs(s: &str) -> usize {
    let mut runs = 0;
    let mut len = 0;
    for c in s.chars().chain(std::iter::once('\0')) {
        if c == '!' {
            len += 1;
        } else {
            if len >= 2 {
                runs += 1;
            }
            len = 0;
        }
    }
    runs
}

fn decode_entities(text: &str) -> std::borrow::Cow<'_, str> {
    if !text.contains('&') {
        return text.into();
    }
    text.replace("&amp;", "&")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&#39;", "'")
        .into()
}
