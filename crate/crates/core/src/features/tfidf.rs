use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::topics::LdaModel;

/// Corpus-level salience `Σ_d tf(t,d) · ln(N / df(t))` for every term.
pub fn tfidf_scores<S: AsRef<str>>(docs: &[Vec<S>]) -> Result<HashMap<String, f64>> {
    if docs.is_empty() {
        return Err(Error::EmptyInput("TF-IDF over an empty corpus".into()));
    }
    let mut tf: HashMap<&str, u64> = HashMap::new();
    let mut df: HashMap<&str, u64> = HashMap::new();
    for doc in docs {
        let mut seen = HashSet::new();
        for term in doc {
            let term = term.as_ref();
            *tf.entry(term).or_default() += 1;
            if seen.insert(term) {
                *df.entry(term).or_default() += 1;
            }
        }
    }
    let n = docs.len() as f64;
    // the sum over documents factors into total count × idf
    Ok(tf
        .into_iter()
        .map(|(t, count)| (t.to_string(), count as f64 * (n / df[t] as f64).ln()))
        .collect())
}

/// The `n` most salient terms, ties broken lexicographically.
pub fn top_tfidf_unigrams<S: AsRef<str>>(docs: &[Vec<S>], n: usize) -> Result<Vec<String>> {
    let mut scored: Vec<(String, f64)> = tfidf_scores(docs)?.into_iter().collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(scored.into_iter().take(n).map(|(t, _)| t).collect())
}

/// Appends the top `per_topic` words of every topic of every model, in
/// (model, topic, rank) order, skipping terms already present.
pub fn augment_with_topic_words(unigrams: &[String], models: &[&LdaModel], per_topic: usize) -> Vec<String> {
    let mut out = unigrams.to_vec();
    let mut seen: HashSet<String> = unigrams.iter().cloned().collect();
    if per_topic == 0 {
        return out;
    }
    for model in models {
        for topic in 0..model.num_topics() {
            for (term, _) in model.top_words(topic, per_topic).expect("topic in range") {
                if seen.insert(term.clone()) {
                    out.push(term);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topics::LdaParams;

    fn docs(lines: &[&str]) -> Vec<Vec<String>> {
        lines
            .iter()
            .map(|l| l.split_whitespace().map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn worked_example() {
        let d = docs(&["cool car", "cool ride", "bad car"]);
        let scores = tfidf_scores(&d).unwrap();
        assert!((scores["cool"] - 2.0 * 1.5f64.ln()).abs() < 1e-12);
        assert!((scores["ride"] - 3.0f64.ln()).abs() < 1e-12);
        assert_eq!(top_tfidf_unigrams(&d, 2).unwrap(), vec!["bad", "ride"]);
        assert_eq!(top_tfidf_unigrams(&d, 99).unwrap(), vec!["bad", "ride", "car", "cool"]);
    }

    #[test]
    fn term_in_every_doc_scores_zero() {
        let d = docs(&["car a", "car b", "car c"]);
        assert_eq!(tfidf_scores(&d).unwrap()["car"], 0.0);
        assert_eq!(top_tfidf_unigrams(&d, 4).unwrap().last().unwrap(), "car");
    }

    #[test]
    fn empty_corpus_errors() {
        let d: Vec<Vec<String>> = vec![];
        assert!(matches!(top_tfidf_unigrams(&d, 3), Err(Error::EmptyInput(_))));
    }

    fn one_topic(text: &str) -> LdaModel {
        LdaModel::fit(&docs(&[text]), LdaParams { k: 1, alpha: 1.0, beta: 0.01, iters: 1, seed: 0 }).unwrap()
    }

    #[test]
    fn augmentation_dedups_and_keeps_prefix() {
        let m = one_topic("car car cool");
        let unigrams = vec!["car".to_string()];
        assert_eq!(augment_with_topic_words(&unigrams, &[&m], 2), vec!["car", "cool"]);
        assert_eq!(augment_with_topic_words(&unigrams, &[&m], 0), unigrams);

        let pos = one_topic("x1 x1 x2");
        let neg = one_topic("y1 y1 y2");
        let out = augment_with_topic_words(&unigrams, &[&pos, &neg], 2);
        assert_eq!(out, vec!["car", "x1", "x2", "y1", "y2"]);
    }
}
