//! Latent Dirichlet Allocation fit by collapsed Gibbs sampling.
//!
//! The sampler keeps three count tables: topic-word counts `n_kw`,
//! document-topic counts `n_dk` and topic totals `n_k`. Each sweep visits
//! every token once, removes it from the counts, and redraws its topic from
//!
//! ```text
//! p(z = k) ∝ (n_dk[d][k] + α) · (n_kw[k][w] + β) / (n_k[k] + V·β)
//! ```
//!
//! The fitted model is the final sampler state; `phi` and `theta` are the
//! smoothed point estimates derived from it.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense term ↔ index mapping, indices assigned in first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    index: HashMap<String, usize>,
    terms: Vec<String>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, term: &str) -> usize {
        if let Some(&i) = self.index.get(term) {
            return i;
        }
        let i = self.terms.len();
        self.index.insert(term.to_string(), i);
        self.terms.push(term.to_string());
        i
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, i: usize) -> &str {
        &self.terms[i]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaParams {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iters: usize,
    pub seed: u64,
}

impl Default for LdaParams {
    fn default() -> Self {
        LdaParams::with_topics(10)
    }
}

impl LdaParams {
    /// Conventional defaults for `k` topics: α = 50/k, β = 0.01, 1000 sweeps.
    pub fn with_topics(k: usize) -> Self {
        LdaParams {
            k,
            alpha: 50.0 / k.max(1) as f64,
            beta: 0.01,
            iters: 1000,
            seed: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Parameter("topic count K must be >= 1".into()));
        }
        if self.iters < 1 {
            return Err(Error::Parameter("iteration count must be >= 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Parameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Parameter(format!("beta must be positive, got {}", self.beta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    params: LdaParams,
    vocab: Vocabulary,
    /// Positions of the retained (non-empty) documents in the input.
    doc_index: Vec<usize>,
    /// Word ids per retained document.
    docs: Vec<Vec<usize>>,
    /// Topic assignment per token, parallel to `docs`.
    z: Vec<Vec<usize>>,
    n_kw: Vec<u64>,
    n_dk: Vec<u64>,
    n_k: Vec<u64>,
    sweeps: usize,
}

impl LdaModel {
    /// Fits a model. Empty documents are dropped before sampling.
    pub fn fit<S: AsRef<str>>(docs: &[Vec<S>], params: LdaParams) -> Result<LdaModel> {
        LdaModel::fit_with(docs, params, |_, _| {})
    }

    /// As [`LdaModel::fit`], calling `on_sweep(sweep, model)` after every sweep.
    pub fn fit_with<S: AsRef<str>>(
        docs: &[Vec<S>],
        params: LdaParams,
        mut on_sweep: impl FnMut(usize, &LdaModel),
    ) -> Result<LdaModel> {
        params.validate()?;
        let mut vocab = Vocabulary::new();
        let mut doc_index = Vec::new();
        let mut ids = Vec::new();
        for (i, doc) in docs.iter().enumerate() {
            if doc.is_empty() {
                continue;
            }
            doc_index.push(i);
            ids.push(doc.iter().map(|t| vocab.intern(t.as_ref())).collect::<Vec<_>>());
        }
        if ids.is_empty() {
            return Err(Error::EmptyInput("no non-empty documents to fit".into()));
        }

        let k = params.k;
        let v = vocab.len();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut model = LdaModel {
            params,
            n_kw: vec![0; k * v],
            n_dk: vec![0; ids.len() * k],
            n_k: vec![0; k],
            z: Vec::with_capacity(ids.len()),
            docs: ids,
            doc_index,
            vocab,
            sweeps: 0,
        };
        for d in 0..model.docs.len() {
            let zs: Vec<usize> = model.docs[d].iter().map(|_| rng.gen_range(0..k)).collect();
            for (&w, &t) in model.docs[d].iter().zip(&zs) {
                model.n_kw[t * v + w] += 1;
                model.n_dk[d * k + t] += 1;
                model.n_k[t] += 1;
            }
            model.z.push(zs);
        }

        let mut weights = vec![0.0f64; k];
        for sweep in 1..=params.iters {
            model.sweep(&mut rng, &mut weights);
            model.sweeps = sweep;
            on_sweep(sweep, &model);
        }
        Ok(model)
    }

    fn sweep(&mut self, rng: &mut ChaCha8Rng, weights: &mut [f64]) {
        let k = self.params.k;
        let v = self.vocab.len();
        let (alpha, beta) = (self.params.alpha, self.params.beta);
        let v_beta = v as f64 * beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.z[d][i];
                self.n_kw[old * v + w] -= 1;
                self.n_dk[d * k + old] -= 1;
                self.n_k[old] -= 1;

                let mut total = 0.0;
                for (t, weight) in weights.iter_mut().enumerate() {
                    let p = (self.n_dk[d * k + t] as f64 + alpha)
                        * (self.n_kw[t * v + w] as f64 + beta)
                        / (self.n_k[t] as f64 + v_beta);
                    total += p;
                    *weight = total;
                }
                let u = rng.gen::<f64>() * total;
                let new = weights.iter().position(|&c| u < c).unwrap_or(k - 1);

                self.z[d][i] = new;
                self.n_kw[new * v + w] += 1;
                self.n_dk[d * k + new] += 1;
                self.n_k[new] += 1;
            }
        }
    }

    pub fn params(&self) -> &LdaParams {
        &self.params
    }

    pub fn num_topics(&self) -> usize {
        self.params.k
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    /// Input positions of the documents the model was fit on.
    pub fn doc_index(&self) -> &[usize] {
        &self.doc_index
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.z
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn topic_word_count(&self, k: usize, w: usize) -> u64 {
        self.n_kw[k * self.vocab.len() + w]
    }

    pub fn doc_topic_count(&self, d: usize, k: usize) -> u64 {
        self.n_dk[d * self.params.k + k]
    }

    pub fn topic_total(&self, k: usize) -> u64 {
        self.n_k[k]
    }

    pub fn num_tokens(&self) -> usize {
        self.docs.iter().map(Vec::len).sum()
    }

    /// Checks count conservation against the assignment vector.
    pub fn check_invariants(&self) -> Result<()> {
        let (k, v) = (self.params.k, self.vocab.len());
        let fail = |m: String| Err(Error::Invariant(m));
        let mut n_kw = vec![0u64; k * v];
        let mut n_dk = vec![0u64; self.docs.len() * k];
        for (d, (words, zs)) in self.docs.iter().zip(&self.z).enumerate() {
            for (&w, &t) in words.iter().zip(zs) {
                if t >= k {
                    return fail(format!("assignment {t} outside 0..{k}"));
                }
                n_kw[t * v + w] += 1;
                n_dk[d * k + t] += 1;
            }
        }
        if n_kw != self.n_kw {
            return fail("topic-word counts disagree with assignments".into());
        }
        if n_dk != self.n_dk {
            return fail("doc-topic counts disagree with assignments".into());
        }
        for t in 0..k {
            let row: u64 = self.n_kw[t * v..(t + 1) * v].iter().sum();
            if row != self.n_k[t] {
                return fail(format!("topic {t}: row sum {row} != total {}", self.n_k[t]));
            }
        }
        for (d, words) in self.docs.iter().enumerate() {
            let row: u64 = self.n_dk[d * k..(d + 1) * k].iter().sum();
            if row != words.len() as u64 {
                return fail(format!("doc {d}: topic counts sum to {row}, has {} tokens", words.len()));
            }
        }
        let total: u64 = self.n_k.iter().sum();
        if total != self.num_tokens() as u64 {
            return fail(format!("topic totals {total} != token count {}", self.num_tokens()));
        }
        Ok(())
    }

    /// φ[k][w] = (n_kw + β) / (n_k + V·β).
    pub fn phi(&self) -> Vec<Vec<f64>> {
        (0..self.params.k).map(|t| self.phi_row(t)).collect()
    }

    fn phi_row(&self, t: usize) -> Vec<f64> {
        let v = self.vocab.len();
        let beta = self.params.beta;
        let denom = self.n_k[t] as f64 + v as f64 * beta;
        self.n_kw[t * v..(t + 1) * v]
            .iter()
            .map(|&c| (c as f64 + beta) / denom)
            .collect()
    }

    /// θ[d][k] = (n_dk + α) / (N_d + K·α), one row per retained document.
    pub fn theta(&self) -> Vec<Vec<f64>> {
        let k = self.params.k;
        let alpha = self.params.alpha;
        self.docs
            .iter()
            .enumerate()
            .map(|(d, words)| {
                let denom = words.len() as f64 + k as f64 * alpha;
                self.n_dk[d * k..(d + 1) * k]
                    .iter()
                    .map(|&c| (c as f64 + alpha) / denom)
                    .collect()
            })
            .collect()
    }

    /// The `n` most probable terms of `topic`, ties broken by term.
    pub fn top_words(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
        if topic >= self.params.k {
            return Err(Error::Index {
                index: topic,
                len: self.params.k,
            });
        }
        let v = self.vocab.len();
        let counts = &self.n_kw[topic * v..(topic + 1) * v];
        let mut order: Vec<usize> = (0..v).collect();
        // φ is monotone in the count within one topic, so compare integers
        order.sort_by(|&a, &b| {
            counts[b]
                .cmp(&counts[a])
                .then_with(|| self.vocab.term(a).cmp(self.vocab.term(b)))
        });
        let phi = self.phi_row(topic);
        Ok(order
            .into_iter()
            .take(n)
            .map(|w| (self.vocab.term(w).to_string(), phi[w]))
            .collect())
    }

    pub fn export(&self, words_per_topic: usize) -> TopicExport {
        TopicExport {
            k: self.params.k,
            alpha: self.params.alpha,
            beta: self.params.beta,
            topics: (0..self.params.k)
                .map(|id| TopicWords {
                    id,
                    words: self
                        .top_words(id, words_per_topic)
                        .expect("topic id in range")
                        .into_iter()
                        .map(|(term, weight)| WeightedTerm { term, weight })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Topic export file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicExport {
    #[serde(rename = "K")]
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub topics: Vec<TopicWords>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicWords {
    pub id: usize,
    pub words: Vec<WeightedTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedTerm {
    pub term: String,
    pub weight: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(lines: &[&str]) -> Vec<Vec<String>> {
        lines
            .iter()
            .map(|l| l.split_whitespace().map(str::to_string).collect())
            .collect()
    }

    fn params(k: usize, iters: usize) -> LdaParams {
        LdaParams {
            k,
            alpha: 0.5,
            beta: 0.01,
            iters,
            seed: 7,
        }
    }

    #[test]
    fn parameter_errors() {
        let d = docs(&["a b"]);
        assert!(matches!(LdaModel::fit(&d, params(0, 1)), Err(Error::Parameter(_))));
        assert!(matches!(LdaModel::fit(&d, params(2, 0)), Err(Error::Parameter(_))));
        let mut p = params(2, 1);
        p.alpha = 0.0;
        assert!(matches!(LdaModel::fit(&d, p), Err(Error::Parameter(_))));
        p.alpha = 1.0;
        p.beta = -1.0;
        assert!(matches!(LdaModel::fit(&d, p), Err(Error::Parameter(_))));
        let empty: Vec<Vec<String>> = vec![vec![], vec![]];
        assert!(matches!(LdaModel::fit(&empty, params(2, 1)), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn single_topic_is_smoothed_unigram() {
        let d = docs(&["car car cool", "car ride"]);
        let m = LdaModel::fit(&d, params(1, 5)).unwrap();
        assert!(m.assignments().iter().flatten().all(|&z| z == 0));
        let (n, v, beta) = (5.0, 3.0, 0.01);
        let phi = m.phi();
        let car = m.vocab().get("car").unwrap();
        assert!((phi[0][car] - (3.0 + beta) / (n + v * beta)).abs() < 1e-15);
        for row in m.theta() {
            assert_eq!(row, vec![1.0]);
        }
    }

    #[test]
    fn top_words_worked_example() {
        let beta = 0.01;
        let m = LdaModel::fit(&docs(&["car car cool"]), params(1, 3)).unwrap();
        let top = m.top_words(0, 2).unwrap();
        assert_eq!(top[0].0, "car");
        assert_eq!(top[1].0, "cool");
        assert!((top[0].1 - (2.0 + beta) / (3.0 + 2.0 * beta)).abs() < 1e-15);
        assert!((top[1].1 - (1.0 + beta) / (3.0 + 2.0 * beta)).abs() < 1e-15);
        assert_eq!(m.top_words(0, 10).unwrap().len(), 2);
        assert!(matches!(m.top_words(1, 2), Err(Error::Index { index: 1, len: 1 })));
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let m = LdaModel::fit(&docs(&["zeta alpha mid"]), params(1, 2)).unwrap();
        let terms: Vec<_> = m.top_words(0, 3).unwrap().into_iter().map(|(t, _)| t).collect();
        assert_eq!(terms, vec!["alpha", "mid", "zeta"]);
    }

    #[test]
    fn rows_are_stochastic_and_counts_conserved() {
        let d = docs(&["a b c a", "b c d", "d e f e", "", "a f"]);
        let m = LdaModel::fit_with(&d, params(3, 20), |_, m| m.check_invariants().unwrap()).unwrap();
        assert_eq!(m.doc_index(), &[0, 1, 2, 4]);
        for row in m.phi().iter().chain(m.theta().iter()) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_counts_give_uniform_rows() {
        // one token per term per doc and α = β with K = 1 keeps everything flat
        let m = LdaModel::fit(&docs(&["a b", "a b"]), LdaParams { k: 1, alpha: 0.1, beta: 0.1, iters: 1, seed: 0 }).unwrap();
        assert!((m.phi()[0][0] - m.phi()[0][1]).abs() < 1e-15);
    }

    #[test]
    fn seeded_runs_are_identical() {
        let d = docs(&["a b c a", "b c d", "d e f e", "a f"]);
        let a = LdaModel::fit(&d, params(3, 30)).unwrap();
        let b = LdaModel::fit(&d, params(3, 30)).unwrap();
        assert_eq!(a, b);
        let mut other = params(3, 30);
        other.seed = 8;
        assert_ne!(a.assignments(), LdaModel::fit(&d, other).unwrap().assignments());
    }

    #[test]
    fn export_shape() {
        let m = LdaModel::fit(&docs(&["a b c", "c d"]), params(2, 5)).unwrap();
        let json = serde_json::to_value(m.export(2)).unwrap();
        assert_eq!(json["K"], 2);
        assert_eq!(json["topics"].as_array().unwrap().len(), 2);
        assert_eq!(json["topics"][0]["words"].as_array().unwrap().len(), 2);
        assert!(json["topics"][0]["words"][0]["term"].is_string());
    }
}
