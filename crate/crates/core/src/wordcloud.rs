//! Deterministic SVG word clouds: words in weight order, packed left to
//! right in rows, font size linear in weight.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::topics::TopicExport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloudOptions {
    pub width: u32,
    pub height: u32,
    pub min_font: f64,
    pub max_font: f64,
    pub max_words: usize,
}

impl Default for CloudOptions {
    fn default() -> Self {
        CloudOptions {
            width: 800,
            height: 600,
            min_font: 12.0,
            max_font: 48.0,
            max_words: 60,
        }
    }
}

/// Merges every topic's words, keeping each term's highest weight, sorted
/// by weight descending then term.
pub fn cloud_words(export: &TopicExport) -> Vec<(String, f64)> {
    let mut best: std::collections::BTreeMap<&str, f64> = Default::default();
    for topic in &export.topics {
        for w in &topic.words {
            let e = best.entry(&w.term).or_insert(w.weight);
            *e = e.max(w.weight);
        }
    }
    let mut words: Vec<(String, f64)> = best.into_iter().map(|(t, w)| (t.to_string(), w)).collect();
    words.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    words
}

fn escape(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '&' => "&amp;".to_string(),
            '<' => "&lt;".to_string(),
            '>' => "&gt;".to_string(),
            '"' => "&quot;".to_string(),
            '\'' => "&#39;".to_string(),
            c => c.to_string(),
        })
        .collect()
}

/// Renders `words` (already in display order). Words that no longer fit
/// on the canvas are dropped.
pub fn render_svg(words: &[(String, f64)], opts: &CloudOptions) -> String {
    let words = &words[..words.len().min(opts.max_words)];
    let (lo, hi) = words
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), w| (lo.min(w.1), hi.max(w.1)));
    let size = |w: f64| {
        if hi > lo {
            opts.min_font + (w - lo) / (hi - lo) * (opts.max_font - opts.min_font)
        } else {
            opts.max_font
        }
    };
    let margin = 10.0;
    let width = f64::from(opts.width);
    let height = f64::from(opts.height);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = opts.width,
        h = opts.height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let mut x = margin;
    let mut row_top = margin;
    let mut row_height: f64 = 0.0;
    for (i, (term, weight)) in words.iter().enumerate() {
        let font = size(*weight);
        // rough advance width of a sans-serif glyph
        let advance = 0.6 * font * term.chars().count() as f64;
        if x > margin && x + advance > width - margin {
            row_top += row_height * 1.2;
            x = margin;
            row_height = 0.0;
        }
        if row_top + font > height - margin {
            break;
        }
        row_height = row_height.max(font);
        let shade = 30 + (i * 7) % 120;
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="{font:.1}" fill="rgb({shade},{shade},{})">{}</text>"#,
            160 + (i * 13) % 90,
            escape(term),
            y = row_top + font,
        );
        x += advance + font * 0.5;
    }
    svg.push_str("</svg>\n");
    svg
}
