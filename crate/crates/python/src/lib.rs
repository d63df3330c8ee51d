//! Python bindings: tokenization, stemming, topic models, feature
//! selection, the random forest and cross-validation helpers.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tweetlens::corpus::{ColumnMapping, Corpus as CoreCorpus, LabelScheme};
use tweetlens::eval;
use tweetlens::features::{self, FeatureCombo, FeatureConfig, PolarityLexicon, PreparedCorpus};
use tweetlens::forest::{Criterion, ForestModel, ForestParams, MTryRule};
use tweetlens::select;
use tweetlens::textproc::{self, TextResources};
use tweetlens::topics::{LdaModel as CoreLda, LdaParams};

create_exception!(tweetlens, TweetlensError, PyException);

fn py_err(e: tweetlens::Error) -> PyErr {
    TweetlensError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| py_err(e.into()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Tokens of `text` as dicts with surface, normalized, kind, stem and pos.
#[pyfunction]
fn tokenize<'py>(py: Python<'py>, text: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let res = TextResources::bundled();
    res.analyze("", text)
        .tokens
        .iter()
        .map(|t| {
            let d = PyDict::new(py);
            d.set_item("surface", &t.surface)?;
            d.set_item("normalized", &t.normalized)?;
            d.set_item("kind", format!("{:?}", t.kind).to_uppercase())?;
            d.set_item("stem", &t.stem)?;
            d.set_item("pos", t.pos.to_string())?;
            Ok(d)
        })
        .collect()
}

/// Porter stem of a lowercase word.
#[pyfunction]
fn stem(word: &str) -> String {
    textproc::stem(word)
}

/// Stemmed, stopword-free content terms of a tweet.
#[pyfunction]
fn content_terms(text: &str) -> Vec<String> {
    let res = TextResources::bundled();
    textproc::content_terms(&res.analyze("", text), &res.stopwords)
}

/// Emphatic markers in a tweet.
#[pyfunction]
fn count_emphatics(text: &str) -> usize {
    let res = TextResources::bundled();
    textproc::count_emphatics(&res.analyze("", text), &res.emphatics)
}

/// Polarity (+1, 0, -1) of a hashtag body under the bundled lexicon.
#[pyfunction]
fn classify_hashtag(tag: &str) -> i8 {
    PolarityLexicon::bundled().classify_hashtag(&tag.trim_start_matches('#').to_lowercase())
}

#[pyfunction]
fn top_tfidf_unigrams(docs: Vec<Vec<String>>, n: usize) -> PyResult<Vec<String>> {
    features::top_tfidf_unigrams(&docs, n).map_err(py_err)
}

#[pyfunction]
fn information_gain(column: Vec<f64>, labels: Vec<usize>) -> PyResult<f64> {
    select::information_gain(&column, &labels).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (labels, k=10, seed=1))]
fn stratified_folds(labels: Vec<usize>, k: usize, seed: u64) -> PyResult<Vec<Vec<usize>>> {
    Ok(eval::stratified_folds(&labels, k, seed).map_err(py_err)?.folds)
}

/// Accuracy plus per-class, weighted and macro precision/recall/F1.
#[pyfunction]
fn compute_metrics<'py>(py: Python<'py>, confusion: Vec<Vec<u64>>) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &eval::compute_metrics(&confusion).map_err(py_err)?)
}

/// CSV text of `n` synthetic annotated tweets.
#[pyfunction]
#[pyo3(signature = (n, seed=1))]
fn synthetic_csv(n: usize, seed: u64) -> String {
    tweetlens::synth::synthetic_csv(n, seed)
}

/// A loaded, filtered tweet corpus.
#[pyclass(module = "tweetlens", frozen)]
struct Corpus {
    inner: CoreCorpus,
}

#[pymethods]
impl Corpus {
    #[staticmethod]
    #[pyo3(signature = (path, sentiment_column="sentiment", text_column="text", id_column=Some("_unit_id")))]
    fn load_csv(path: &str, sentiment_column: &str, text_column: &str, id_column: Option<&str>) -> PyResult<Self> {
        let mapping = ColumnMapping {
            id: id_column.map(str::to_string),
            sentiment: sentiment_column.into(),
            text: text_column.into(),
            ..ColumnMapping::default()
        };
        let inner = CoreCorpus::load_csv(path, &mapping).map_err(py_err)?;
        Ok(Corpus { inner })
    }

    #[staticmethod]
    fn from_csv_text(text: &str) -> PyResult<Self> {
        let inner = CoreCorpus::from_reader(text.as_bytes(), &ColumnMapping::default()).map_err(py_err)?;
        Ok(Corpus { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn texts(&self) -> Vec<String> {
        self.inner.tweets().iter().map(|t| t.text.clone()).collect()
    }

    fn labels(&self) -> Vec<u8> {
        self.inner.tweets().iter().map(|t| t.label.value()).collect()
    }

    /// `{"total", "histogram", "majority_rate"}`.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.inner.stats())
    }

    /// Positive (4-5) and negative (1-2) sub-corpora.
    fn split_polar(&self) -> (Corpus, Corpus) {
        let (pos, neg) = self.inner.split_polar();
        (Corpus { inner: pos }, Corpus { inner: neg })
    }

    /// Feature matrix for a combination such as "UL": (names, rows, labels, classes).
    #[pyo3(signature = (combo="ULM", scheme="five_class", unigram_count=100, per_topic=10, hashtag_min_freq=10, lda_iters=1000, seed=1))]
    #[allow(clippy::too_many_arguments, clippy::type_complexity)]
    fn features(
        &self,
        combo: &str,
        scheme: &str,
        unigram_count: usize,
        per_topic: usize,
        hashtag_min_freq: usize,
        lda_iters: usize,
        seed: u64,
    ) -> PyResult<(Vec<String>, Vec<Vec<f64>>, Vec<usize>, Vec<String>)> {
        let combo: FeatureCombo = combo.parse().map_err(py_err)?;
        let scheme: LabelScheme = scheme.parse().map_err(py_err)?;
        let config = FeatureConfig {
            unigram_count,
            per_topic,
            hashtag_min_freq,
            lda: LdaParams {
                iters: lda_iters,
                seed,
                ..LdaParams::default()
            },
            ..FeatureConfig::default()
        };
        let res = TextResources::bundled();
        let m = PreparedCorpus::prepare(&self.inner, &config, &res)
            .and_then(|p| p.assemble(combo, scheme, &res, &PolarityLexicon::bundled()))
            .map_err(py_err)?;
        Ok((m.specs.into_iter().map(|s| s.name).collect(), m.rows, m.labels, m.class_names))
    }
}

/// LDA topic model fit by collapsed Gibbs sampling.
#[pyclass(module = "tweetlens", frozen)]
struct LdaModel {
    inner: CoreLda,
}

#[pymethods]
impl LdaModel {
    /// `alpha` defaults to 50 / k.
    #[new]
    #[pyo3(signature = (docs, k=10, alpha=None, beta=0.01, iters=1000, seed=1))]
    fn new(docs: Vec<Vec<String>>, k: usize, alpha: Option<f64>, beta: f64, iters: usize, seed: u64) -> PyResult<Self> {
        let params = LdaParams {
            k,
            alpha: alpha.unwrap_or(50.0 / k.max(1) as f64),
            beta,
            iters,
            seed,
        };
        let inner = CoreLda::fit(&docs, params).map_err(py_err)?;
        Ok(LdaModel { inner })
    }

    #[getter]
    fn num_topics(&self) -> usize {
        self.inner.num_topics()
    }

    fn top_words(&self, topic: usize, n: usize) -> PyResult<Vec<(String, f64)>> {
        self.inner.top_words(topic, n).map_err(py_err)
    }

    fn phi(&self) -> Vec<Vec<f64>> {
        self.inner.phi()
    }

    fn theta(&self) -> Vec<Vec<f64>> {
        self.inner.theta()
    }

    fn assignments(&self) -> Vec<Vec<usize>> {
        self.inner.assignments().to_vec()
    }

    /// Topic export dict with `words_per_topic` words each.
    #[pyo3(signature = (words_per_topic=10))]
    fn export<'py>(&self, py: Python<'py>, words_per_topic: usize) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.inner.export(words_per_topic))
    }
}

/// Random forest classifier.
#[pyclass(module = "tweetlens", frozen)]
struct RandomForest {
    inner: ForestModel,
}

#[pymethods]
impl RandomForest {
    #[new]
    #[pyo3(signature = (rows, labels, n_classes=None, n_trees=100, m_try=None, m_try_rule="log2", criterion="info_gain", min_leaf=1, max_depth=None, seed=1, bootstrap=true))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        n_classes: Option<usize>,
        n_trees: usize,
        m_try: Option<usize>,
        m_try_rule: &str,
        criterion: &str,
        min_leaf: usize,
        max_depth: Option<usize>,
        seed: u64,
        bootstrap: bool,
    ) -> PyResult<Self> {
        let params = ForestParams {
            n_trees,
            m_try,
            m_try_rule: m_try_rule.parse::<MTryRule>().map_err(py_err)?,
            criterion: criterion.parse::<Criterion>().map_err(py_err)?,
            min_leaf,
            max_depth,
            seed,
            bootstrap,
            ..ForestParams::default()
        };
        let n_classes = n_classes.unwrap_or_else(|| labels.iter().max().map_or(1, |m| m + 1));
        let classes = (0..n_classes).map(|c| c.to_string()).collect();
        let inner = ForestModel::train_rows(&rows, &labels, classes, &params).map_err(py_err)?;
        Ok(RandomForest { inner })
    }

    fn predict(&self, row: Vec<f64>) -> PyResult<usize> {
        self.inner.predict(&row).map_err(py_err)
    }

    fn predict_batch(&self, rows: Vec<Vec<f64>>) -> PyResult<Vec<usize>> {
        self.inner.predict_batch(&rows).map_err(py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(RandomForest {
            inner: ForestModel::from_json(text).map_err(py_err)?,
        })
    }

    #[getter]
    fn n_trees(&self) -> usize {
        self.inner.trees.len()
    }
}

#[pymodule]
#[pyo3(name = "tweetlens")]
fn tweetlens_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TweetlensError", m.py().get_type::<TweetlensError>())?;
    m.add_class::<Corpus>()?;
    m.add_class::<LdaModel>()?;
    m.add_class::<RandomForest>()?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(stem, m)?)?;
    m.add_function(wrap_pyfunction!(content_terms, m)?)?;
    m.add_function(wrap_pyfunction!(count_emphatics, m)?)?;
    m.add_function(wrap_pyfunction!(classify_hashtag, m)?)?;
    m.add_function(wrap_pyfunction!(top_tfidf_unigrams, m)?)?;
    m.add_function(wrap_pyfunction!(information_gain, m)?)?;
    m.add_function(wrap_pyfunction!(stratified_folds, m)?)?;
    m.add_function(wrap_pyfunction!(compute_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic_csv, m)?)?;
    Ok(())
}
