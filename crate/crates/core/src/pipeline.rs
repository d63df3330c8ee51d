//! Configuration and end-to-end commands: corpus statistics, topic
//! extraction, feature-set evaluation and attribute ranking.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{ColumnMapping, Corpus, CorpusStats, LabelScheme};
use crate::error::{Error, Result};
use crate::eval::{cross_validate, format_table, Classifier, CvConfig, EvalReport, SelectionScope};
use crate::features::{
    FeatureCombo, FeatureConfig, FeatureMatrix, LengthUnit, MatrixManifest, PolarityLexicon, PreparedCorpus,
};
use crate::forest::{Criterion, ForestModel, ForestParams, MTryRule};
use crate::select::{rank_features, ranking_report, RankingEntry, Selection};
use crate::textproc::{content_terms, TextResources};
use crate::topics::{LdaModel, LdaParams, TopicExport};
use crate::wordcloud::{cloud_words, render_svg, CloudOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    /// Keep columns with gain above `selection_threshold`.
    #[default]
    Threshold,
    /// Keep the `selection_k` best columns.
    TopK,
    None,
}

/// Flat configuration file; every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dataset: PathBuf,
    pub output_dir: PathBuf,

    /// Empty string means the file has no id column.
    pub id_column: String,
    pub sentiment_column: String,
    pub text_column: String,
    pub retweet_column: Option<String>,
    pub followers_column: Option<String>,
    pub followees_column: Option<String>,
    pub not_relevant_marker: String,
    pub label_scheme: LabelScheme,

    pub stopwords_path: Option<PathBuf>,
    pub emphatics_path: Option<PathBuf>,
    pub pos_lexicon_path: Option<PathBuf>,
    pub polarity_path: Option<PathBuf>,
    pub hashtag_overrides_path: Option<PathBuf>,

    pub lda_topics: usize,
    /// Defaults to 50 / `lda_topics`.
    pub lda_alpha: Option<f64>,
    pub lda_beta: f64,
    pub lda_iters: usize,
    pub lda_seed: u64,
    pub topic_words: usize,

    pub unigram_count: usize,
    pub per_topic: usize,
    pub hashtag_min_freq: usize,
    pub length_unit: LengthUnit,

    pub n_trees: usize,
    pub m_try: Option<usize>,
    pub m_try_rule: MTryRule,
    pub criterion: Criterion,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    pub forest_seed: u64,
    pub bootstrap: bool,

    pub cv_folds: usize,
    pub cv_seed: u64,
    pub selection: SelectionMode,
    pub selection_k: usize,
    pub selection_threshold: f64,
    pub selection_scope: SelectionScope,
    pub combos: Vec<String>,
    pub majority_row: bool,
    pub attributes_top: usize,

    pub cloud_width: u32,
    pub cloud_height: u32,
    pub cloud_min_font: f64,
    pub cloud_max_font: f64,
    pub cloud_words: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let mapping = ColumnMapping::default();
        let forest = ForestParams::default();
        let features = FeatureConfig::default();
        let lda = LdaParams::default();
        let cloud = CloudOptions::default();
        PipelineConfig {
            dataset: PathBuf::from("data/Twitter-sentiment-self-drive-DFE.csv"),
            output_dir: PathBuf::from("out"),
            id_column: mapping.id.unwrap_or_default(),
            sentiment_column: mapping.sentiment,
            text_column: mapping.text,
            retweet_column: mapping.retweet,
            followers_column: mapping.followers,
            followees_column: mapping.followees,
            not_relevant_marker: mapping.not_relevant_marker,
            label_scheme: LabelScheme::FiveClass,
            stopwords_path: None,
            emphatics_path: None,
            pos_lexicon_path: None,
            polarity_path: None,
            hashtag_overrides_path: None,
            lda_topics: lda.k,
            lda_alpha: None,
            lda_beta: lda.beta,
            lda_iters: lda.iters,
            lda_seed: lda.seed,
            topic_words: 10,
            unigram_count: features.unigram_count,
            per_topic: features.per_topic,
            hashtag_min_freq: features.hashtag_min_freq,
            length_unit: features.length_unit,
            n_trees: forest.n_trees,
            m_try: forest.m_try,
            m_try_rule: forest.m_try_rule,
            criterion: forest.criterion,
            min_leaf: forest.min_leaf,
            max_depth: forest.max_depth,
            forest_seed: forest.seed,
            bootstrap: forest.bootstrap,
            cv_folds: 10,
            cv_seed: 1,
            selection: SelectionMode::Threshold,
            selection_k: 100,
            selection_threshold: 0.0,
            selection_scope: SelectionScope::PerFold,
            combos: FeatureCombo::STANDARD.iter().map(ToString::to_string).collect(),
            majority_row: true,
            attributes_top: 10,
            cloud_width: cloud.width,
            cloud_height: cloud.height,
            cloud_min_font: cloud.min_font,
            cloud_max_font: cloud.max_font,
            cloud_words: cloud.max_words,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PipelineConfig::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Sets every RNG seed at once.
    pub fn set_seed(&mut self, seed: u64) {
        self.lda_seed = seed;
        self.forest_seed = seed;
        self.cv_seed = seed;
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.lda_topics == 0 || self.lda_iters == 0 {
            return bad("lda_topics and lda_iters must be at least 1");
        }
        let positive = |v: f64| v > 0.0;
        if self.lda_alpha.is_some_and(|a| !positive(a)) || !positive(self.lda_beta) {
            return bad("lda_alpha and lda_beta must be positive");
        }
        if self.unigram_count == 0 {
            return bad("unigram_count must be at least 1");
        }
        if self.n_trees == 0 || self.min_leaf == 0 || self.m_try == Some(0) {
            return bad("n_trees, min_leaf and m_try must be at least 1");
        }
        if self.cv_folds < 2 {
            return bad("cv_folds must be at least 2");
        }
        if self.selection == SelectionMode::TopK && self.selection_k == 0 {
            return bad("selection_k must be at least 1");
        }
        if self.cloud_min_font > self.cloud_max_font {
            return bad("cloud_min_font exceeds cloud_max_font");
        }
        self.parsed_combos()?;
        Ok(())
    }

    pub fn parsed_combos(&self) -> Result<Vec<FeatureCombo>> {
        self.combos.iter().map(|c| c.parse()).collect()
    }

    pub fn mapping(&self) -> ColumnMapping {
        ColumnMapping {
            id: (!self.id_column.is_empty()).then(|| self.id_column.clone()),
            sentiment: self.sentiment_column.clone(),
            text: self.text_column.clone(),
            retweet: self.retweet_column.clone(),
            followers: self.followers_column.clone(),
            followees: self.followees_column.clone(),
            not_relevant_marker: self.not_relevant_marker.clone(),
        }
    }

    pub fn lda_params(&self) -> LdaParams {
        LdaParams {
            k: self.lda_topics,
            alpha: self.lda_alpha.unwrap_or(50.0 / self.lda_topics as f64),
            beta: self.lda_beta,
            iters: self.lda_iters,
            seed: self.lda_seed,
        }
    }

    pub fn feature_config(&self) -> FeatureConfig {
        FeatureConfig {
            unigram_count: self.unigram_count,
            per_topic: self.per_topic,
            hashtag_min_freq: self.hashtag_min_freq,
            length_unit: self.length_unit,
            lda: self.lda_params(),
        }
    }

    pub fn forest_params(&self) -> ForestParams {
        ForestParams {
            n_trees: self.n_trees,
            m_try: self.m_try,
            m_try_rule: self.m_try_rule,
            criterion: self.criterion,
            min_leaf: self.min_leaf,
            max_depth: self.max_depth,
            seed: self.forest_seed,
            bootstrap: self.bootstrap,
            ..ForestParams::default()
        }
    }

    pub fn selection(&self) -> Option<Selection> {
        match self.selection {
            SelectionMode::Threshold => Some(Selection::Threshold(self.selection_threshold)),
            SelectionMode::TopK => Some(Selection::TopK(self.selection_k)),
            SelectionMode::None => None,
        }
    }

    pub fn cv_config(&self, classifier: Classifier) -> CvConfig {
        CvConfig {
            folds: self.cv_folds,
            seed: self.cv_seed,
            selection: self.selection(),
            scope: self.selection_scope,
            classifier,
        }
    }

    pub fn cloud_options(&self) -> CloudOptions {
        CloudOptions {
            width: self.cloud_width,
            height: self.cloud_height,
            min_font: self.cloud_min_font,
            max_font: self.cloud_max_font,
            max_words: self.cloud_words,
        }
    }

    pub fn resources(&self) -> Result<TextResources> {
        TextResources::load(
            self.stopwords_path.as_deref(),
            self.emphatics_path.as_deref(),
            self.pos_lexicon_path.as_deref(),
        )
    }

    pub fn polarity(&self) -> Result<PolarityLexicon> {
        PolarityLexicon::load(self.polarity_path.as_deref(), self.hashtag_overrides_path.as_deref())
    }

    pub fn load_corpus(&self) -> Result<Corpus> {
        Corpus::load_csv(&self.dataset, &self.mapping())
    }

    fn out_path(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.output_dir).map_err(|e| Error::io(&self.output_dir, e))?;
        Ok(self.output_dir.join(name))
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.out_path(name)?;
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }
}

/// Label histogram and majority rate; writes `stats.json`.
pub fn cmd_stats(cfg: &PipelineConfig) -> Result<CorpusStats> {
    let stats = cfg.load_corpus()?.stats();
    cfg.write_json("stats.json", &stats)?;
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicsOutcome {
    pub positive: Option<TopicExport>,
    pub negative: Option<TopicExport>,
}

/// Fits a topic model on one split, or `None` when it has no content words.
pub fn fit_split_topics(corpus: &Corpus, res: &TextResources, params: LdaParams) -> Result<Option<LdaModel>> {
    let docs: Vec<Vec<String>> = corpus
        .tweets()
        .iter()
        .map(|t| content_terms(&res.analyze(&t.id, &t.text), &res.stopwords))
        .collect();
    if docs.iter().all(Vec::is_empty) {
        return Ok(None);
    }
    LdaModel::fit(&docs, params).map(Some)
}

/// Topic models of the positive and negative splits; writes
/// `topics_{positive,negative}.json` and matching SVG word clouds.
pub fn cmd_topics(cfg: &PipelineConfig) -> Result<TopicsOutcome> {
    let corpus = cfg.load_corpus()?;
    let res = cfg.resources()?;
    let (pos, neg) = corpus.split_polar();
    let run = |split: &Corpus, name: &str| -> Result<Option<TopicExport>> {
        let Some(model) = fit_split_topics(split, &res, cfg.lda_params())? else {
            log::warn!("{name} split has no content words; skipped");
            return Ok(None);
        };
        let export = model.export(cfg.topic_words);
        cfg.write_json(&format!("topics_{name}.json"), &export)?;
        cfg.write(
            &format!("wordcloud_{name}.svg"),
            &render_svg(&cloud_words(&export), &cfg.cloud_options()),
        )?;
        Ok(Some(export))
    };
    Ok(TopicsOutcome {
        positive: run(&pos, "positive")?,
        negative: run(&neg, "negative")?,
    })
}

/// Featurization state shared by several combinations.
pub struct Workspace {
    pub corpus: Corpus,
    pub resources: TextResources,
    pub polarity: PolarityLexicon,
    pub prepared: PreparedCorpus,
}

impl Workspace {
    pub fn load(cfg: &PipelineConfig) -> Result<Workspace> {
        Workspace::from_corpus(cfg, cfg.load_corpus()?)
    }

    pub fn from_corpus(cfg: &PipelineConfig, corpus: Corpus) -> Result<Workspace> {
        let resources = cfg.resources()?;
        let polarity = cfg.polarity()?;
        let prepared = PreparedCorpus::prepare(&corpus, &cfg.feature_config(), &resources)?;
        Ok(Workspace {
            corpus,
            resources,
            polarity,
            prepared,
        })
    }

    pub fn matrix(&self, combo: FeatureCombo, scheme: LabelScheme) -> Result<FeatureMatrix> {
        self.prepared.assemble(combo, scheme, &self.resources, &self.polarity)
    }
}

/// Cross-validates each combination (plus the majority baseline when
/// configured); writes `evaluation.json` and `table1.txt` after every row so
/// that partial results survive a failure.
pub fn cmd_evaluate(cfg: &PipelineConfig, combos: &[FeatureCombo]) -> Result<Vec<EvalReport>> {
    let ws = Workspace::load(cfg)?;
    evaluate_workspace(cfg, &ws, combos)
}

pub fn evaluate_workspace(cfg: &PipelineConfig, ws: &Workspace, combos: &[FeatureCombo]) -> Result<Vec<EvalReport>> {
    if combos.is_empty() {
        return Err(Error::Config("no feature combinations to evaluate".into()));
    }
    let mut reports = Vec::new();
    let flush = |reports: &Vec<EvalReport>| -> Result<()> {
        cfg.write_json("evaluation.json", reports)?;
        cfg.write("table1.txt", &format_table(reports))?;
        Ok(())
    };
    for &combo in combos {
        log::info!("evaluating {}", combo.label());
        let matrix = ws.matrix(combo, cfg.label_scheme)?;
        let cv = cfg.cv_config(Classifier::RandomForest(cfg.forest_params()));
        reports.push(cross_validate(&matrix, &combo.label(), &cv)?);
        flush(&reports)?;
    }
    if cfg.majority_row {
        let matrix = ws.matrix(combos[0], cfg.label_scheme)?;
        let cv = CvConfig {
            selection: None,
            ..cfg.cv_config(Classifier::Majority)
        };
        reports.push(cross_validate(&matrix, "Majority class", &cv)?);
        flush(&reports)?;
    }
    Ok(reports)
}

/// Top attributes of one combination by information gain over all rows;
/// writes `attributes_<combo>.json`.
pub fn cmd_attributes(cfg: &PipelineConfig, combo: FeatureCombo) -> Result<Vec<RankingEntry>> {
    let ws = Workspace::load(cfg)?;
    let ranking = rank_features(&ws.matrix(combo, cfg.label_scheme)?)?;
    let top = ranking_report(&ranking, Some(cfg.attributes_top));
    cfg.write_json(&format!("attributes_{combo}.json"), &top)?;
    Ok(top)
}

/// Writes `features_<combo>.csv` and its `.json` manifest.
pub fn cmd_features(cfg: &PipelineConfig, combo: FeatureCombo) -> Result<(PathBuf, PathBuf)> {
    let ws = Workspace::load(cfg)?;
    let matrix = ws.matrix(combo, cfg.label_scheme)?;
    let csv_path = cfg.out_path(&format!("features_{combo}.csv"))?;
    let file = fs::File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    matrix.write_csv(std::io::BufWriter::new(file))?;
    let manifest = cfg.write_json(&format!("features_{combo}.json"), &matrix.manifest())?;
    Ok((csv_path, manifest))
}

/// Reads a matrix CSV, using the sibling `.json` manifest when present.
pub fn read_matrix(path: &Path) -> Result<FeatureMatrix> {
    let manifest_path = path.with_extension("json");
    let manifest: Option<MatrixManifest> = if manifest_path.exists() {
        let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
        Some(serde_json::from_str(&text)?)
    } else {
        None
    };
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    FeatureMatrix::read_csv(std::io::BufReader::new(file), manifest.as_ref())
}

/// Trains a forest on a matrix file; writes `<name>` under the output dir.
pub fn cmd_train(cfg: &PipelineConfig, matrix_path: &Path, model_name: &str) -> Result<PathBuf> {
    let matrix = read_matrix(matrix_path)?;
    let model = ForestModel::train(&matrix, &cfg.forest_params())?;
    let mut json = model.to_json()?;
    json.push('\n');
    cfg.write(model_name, &json)
}

/// Predicts every row of a matrix file; writes `predictions.csv` with the
/// row id, actual and predicted class.
pub fn cmd_predict(cfg: &PipelineConfig, model_path: &Path, matrix_path: &Path) -> Result<PathBuf> {
    let text = fs::read_to_string(model_path).map_err(|e| Error::io(model_path, e))?;
    let model = ForestModel::from_json(&text)?;
    let matrix = read_matrix(matrix_path)?;
    let predicted = model.predict_batch(&matrix.rows)?;
    let mut out = String::from("row,actual,predicted\n");
    for ((id, &actual), &p) in matrix.row_ids.iter().zip(&matrix.labels).zip(&predicted) {
        out.push_str(&format!(
            "{id},{},{}\n",
            matrix.class_names[actual], model.classes[p]
        ));
    }
    cfg.write("predictions.csv", &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = PipelineConfig::default();
        let back = PipelineConfig::from_toml_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(cfg.parsed_combos().unwrap(), FeatureCombo::STANDARD);
        assert_eq!(cfg.lda_params().alpha, 5.0);
    }

    #[test]
    fn unknown_and_invalid_keys_rejected() {
        assert!(matches!(PipelineConfig::from_toml_str("bogus = 1"), Err(Error::Config(_))));
        assert!(matches!(PipelineConfig::from_toml_str("cv_folds = 1"), Err(Error::Config(_))));
        assert!(matches!(
            PipelineConfig::from_toml_str("combos = [\"UQ\"]"),
            Err(Error::Config(_))
        ));
        let cfg = PipelineConfig::from_toml_str("n_trees = 5\nselection_scope = \"global\"\nlabel_scheme = \"three_class\"").unwrap();
        assert_eq!(cfg.forest_params().n_trees, 5);
        assert_eq!(cfg.selection_scope, SelectionScope::Global);
        assert_eq!(cfg.label_scheme, LabelScheme::ThreeClass);
    }

    #[test]
    fn seed_override_reaches_every_stage() {
        let mut cfg = PipelineConfig::default();
        cfg.set_seed(9);
        assert_eq!((cfg.lda_params().seed, cfg.forest_params().seed, cfg.cv_seed), (9, 9, 9));
    }
}
