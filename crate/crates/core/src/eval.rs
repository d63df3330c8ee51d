//! Stratified k-fold cross-validation and classification metrics.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::forest::{argmax_lowest, ForestModel, ForestParams};
use crate::select::{rank_features, selected_columns, Selection};

/// Disjoint test folds covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub folds: Vec<Vec<usize>>,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.folds.len()
    }

    pub fn n_rows(&self) -> usize {
        self.folds.iter().map(Vec::len).sum()
    }

    pub fn test(&self, fold: usize) -> &[usize] {
        &self.folds[fold]
    }

    /// Every row outside `fold`, ascending.
    pub fn train(&self, fold: usize) -> Vec<usize> {
        let mut rows: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(f, _)| f != fold)
            .flat_map(|(_, rows)| rows.iter().copied())
            .collect();
        rows.sort_unstable();
        rows
    }
}

/// Shuffles each class's rows with `seed` and deals them round-robin; the
/// dealing position carries over from one class to the next so that fold
/// sizes stay within one of each other as well.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Parameter(format!("need at least 2 folds, got {k}")));
    }
    if k > labels.len() {
        return Err(Error::Parameter(format!(
            "{k} folds requested for {} rows",
            labels.len()
        )));
    }
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_class = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for mut members in by_class {
        members.shuffle(&mut rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(FoldPlan { folds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Support-weighted averages.
    pub weighted: Averages,
    #[serde(rename = "macro")]
    pub macro_avg: Averages,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Metrics of a confusion matrix with actual classes as rows and predicted
/// classes as columns.
pub fn compute_metrics(confusion: &[Vec<u64>]) -> Result<Metrics> {
    let c = confusion.len();
    if let Some(row) = confusion.iter().find(|r| r.len() != c) {
        return Err(Error::Dimension {
            expected: c,
            got: row.len(),
        });
    }
    let n: u64 = confusion.iter().flatten().sum();
    let trace: u64 = (0..c).map(|i| confusion[i][i]).sum();
    let per_class: Vec<ClassMetrics> = (0..c)
        .map(|i| {
            let tp = confusion[i][i];
            let support: u64 = confusion[i].iter().sum();
            let predicted: u64 = confusion.iter().map(|r| r[i]).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassMetrics {
                precision,
                recall,
                f1,
                support,
            }
        })
        .collect();
    let avg = |weight: &dyn Fn(&ClassMetrics) -> f64, get: fn(&ClassMetrics) -> f64| -> f64 {
        per_class.iter().map(|m| weight(m) * get(m)).sum()
    };
    let by_support = |m: &ClassMetrics| ratio(m.support, n);
    let uniform = |_: &ClassMetrics| if c == 0 { 0.0 } else { 1.0 / c as f64 };
    let averages = |w: &dyn Fn(&ClassMetrics) -> f64| Averages {
        precision: avg(w, |m| m.precision),
        recall: avg(w, |m| m.recall),
        f1: avg(w, |m| m.f1),
    };
    Ok(Metrics {
        accuracy: ratio(trace, n),
        weighted: averages(&by_support),
        macro_avg: averages(&uniform),
        per_class,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Classifier {
    RandomForest(ForestParams),
    /// Always predicts the training partition's most frequent class.
    Majority,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionScope {
    /// Refit on each fold's training rows only.
    #[default]
    PerFold,
    /// Rank once on all rows before cross-validation.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
    pub selection: Option<Selection>,
    pub scope: SelectionScope,
    pub classifier: Classifier,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 10,
            seed: 1,
            selection: Some(Selection::default()),
            scope: SelectionScope::PerFold,
            classifier: Classifier::RandomForest(ForestParams::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub name: String,
    pub classes: Vec<String>,
    pub n_rows: usize,
    pub n_features: usize,
    /// Rows are actual classes, columns predicted, pooled over folds.
    pub confusion: Vec<Vec<u64>>,
    #[serde(flatten)]
    pub metrics: Metrics,
    pub fold_accuracies: Vec<f64>,
    /// Feature columns kept by selection in each fold.
    pub fold_features: Vec<usize>,
    pub config: CvConfig,
}

fn columns_for(matrix: &FeatureMatrix, selection: Option<Selection>) -> Result<Vec<usize>> {
    let all = || (0..matrix.n_cols()).collect::<Vec<_>>();
    let Some(selection) = selection else {
        return Ok(all());
    };
    if matrix.n_cols() == 0 {
        return Ok(vec![]);
    }
    let cols = selected_columns(&rank_features(matrix)?, selection)?;
    if cols.is_empty() {
        log::warn!("feature selection kept no columns; using all {}", matrix.n_cols());
        return Ok(all());
    }
    Ok(cols)
}

fn fit_predict(
    classifier: &Classifier,
    train: &FeatureMatrix,
    test: &FeatureMatrix,
) -> Result<Vec<usize>> {
    match classifier {
        Classifier::RandomForest(params) => ForestModel::train(train, params)?.predict_batch(&test.rows),
        Classifier::Majority => {
            let mut counts = vec![0u64; train.n_classes()];
            for &l in &train.labels {
                counts[l] += 1;
            }
            Ok(vec![argmax_lowest(&counts); test.n_rows()])
        }
    }
}

/// Runs `config.folds`-fold stratified cross-validation and pools the
/// predictions into one confusion matrix.
pub fn cross_validate(matrix: &FeatureMatrix, name: &str, config: &CvConfig) -> Result<EvalReport> {
    cross_validate_with(matrix, name, config, |_, _| {})
}

/// As [`cross_validate`], calling `on_fold(fold, accuracy)` after each fold.
pub fn cross_validate_with(
    matrix: &FeatureMatrix,
    name: &str,
    config: &CvConfig,
    mut on_fold: impl FnMut(usize, f64),
) -> Result<EvalReport> {
    if matrix.n_rows() == 0 {
        return Err(Error::EmptyInput("cross-validation over zero rows".into()));
    }
    let plan = stratified_folds(&matrix.labels, config.folds, config.seed)?;
    let global = match config.scope {
        SelectionScope::Global => Some(columns_for(matrix, config.selection)?),
        SelectionScope::PerFold => None,
    };
    let c = matrix.n_classes();
    let mut confusion = vec![vec![0u64; c]; c];
    let mut fold_accuracies = Vec::with_capacity(plan.k());
    let mut fold_features = Vec::with_capacity(plan.k());
    for fold in 0..plan.k() {
        let train = matrix.select_rows(&plan.train(fold));
        let test = matrix.select_rows(plan.test(fold));
        let cols = match &global {
            Some(cols) => cols.clone(),
            None => columns_for(&train, config.selection)?,
        };
        let predicted = fit_predict(
            &config.classifier,
            &train.select_columns(&cols),
            &test.select_columns(&cols),
        )?;
        let mut correct = 0;
        for (&actual, &p) in test.labels.iter().zip(&predicted) {
            confusion[actual][p] += 1;
            correct += usize::from(actual == p);
        }
        let acc = correct as f64 / test.n_rows() as f64;
        log::info!("{name}: fold {}/{} accuracy {acc:.4}", fold + 1, plan.k());
        on_fold(fold, acc);
        fold_accuracies.push(acc);
        fold_features.push(cols.len());
    }
    Ok(EvalReport {
        name: name.to_string(),
        classes: matrix.class_names.clone(),
        n_rows: matrix.n_rows(),
        n_features: matrix.n_cols(),
        metrics: compute_metrics(&confusion)?,
        confusion,
        fold_accuracies,
        fold_features,
        config: *config,
    })
}

/// Fixed-width results table, one line per report.
pub fn format_table(reports: &[EvalReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.name.chars().count())
        .chain(["Feature set".len()])
        .max()
        .unwrap_or(0);
    let mut out = format!(
        "{:<width$}  {:>9}  {:>6}  {:>9}  {:>11}\n",
        "Feature set", "Precision", "Recall", "F-Measure", "Accuracy(%)"
    );
    for r in reports {
        let w = &r.metrics.weighted;
        out.push_str(&format!(
            "{:<width$}  {:>9.3}  {:>6.3}  {:>9.3}  {:>11.2}\n",
            r.name,
            w.precision,
            w.recall,
            w.f1,
            100.0 * r.metrics.accuracy
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{FeatureKind, FeatureSet, FeatureSpec};

    fn one_column(col: Vec<f64>, labels: Vec<usize>, classes: usize) -> FeatureMatrix {
        let n = labels.len();
        FeatureMatrix::new(
            vec![FeatureSpec {
                name: "uni:x".into(),
                set: FeatureSet::Unigrams,
                kind: FeatureKind::Binary,
            }],
            col.into_iter().map(|v| vec![v]).collect(),
            labels,
            (0..classes).map(|c| c.to_string()).collect(),
            (0..n).map(|i| i.to_string()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn fold_balance() {
        let mut labels = vec![0; 4245];
        labels.extend(vec![1; 110]);
        let plan = stratified_folds(&labels, 10, 7).unwrap();
        let per_fold: Vec<usize> = plan
            .folds
            .iter()
            .map(|f| f.iter().filter(|&&i| labels[i] == 0).count())
            .collect();
        assert_eq!(per_fold.iter().filter(|&&c| c == 425).count(), 5);
        assert_eq!(per_fold.iter().filter(|&&c| c == 424).count(), 5);
        assert_eq!(plan.n_rows(), labels.len());
        assert_eq!(plan, stratified_folds(&labels, 10, 7).unwrap());
    }

    #[test]
    fn singleton_folds_and_errors() {
        let plan = stratified_folds(&[0, 1, 2], 3, 0).unwrap();
        assert!(plan.folds.iter().all(|f| f.len() == 1));
        assert!(matches!(stratified_folds(&[0, 1], 3, 0), Err(Error::Parameter(_))));
        assert!(matches!(stratified_folds(&[0, 1], 1, 0), Err(Error::Parameter(_))));
        assert_eq!(plan.train(0).len(), 2);
    }

    #[test]
    fn worked_metrics() {
        let m = compute_metrics(&[vec![2, 0], vec![1, 1]]).unwrap();
        assert_eq!(m.accuracy, 0.75);
        assert!((m.per_class[0].precision - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.per_class[0].recall, 1.0);
        assert_eq!(m.per_class[1].precision, 1.0);
        assert_eq!(m.per_class[1].recall, 0.5);
        assert!((m.weighted.precision - (0.5 * 2.0 / 3.0 + 0.5)).abs() < 1e-12);
        assert!((m.weighted.recall - 0.75).abs() < 1e-12);

        let d = compute_metrics(&[vec![3, 0, 0], vec![0, 1, 0], vec![0, 0, 5]]).unwrap();
        assert_eq!((d.accuracy, d.weighted.f1, d.macro_avg.precision), (1.0, 1.0, 1.0));
        assert!(matches!(compute_metrics(&[vec![1, 2]]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn empty_columns_and_rows_score_zero() {
        let m = compute_metrics(&[vec![0, 2], vec![0, 0]]).unwrap();
        assert_eq!(m.per_class[0].precision, 0.0);
        assert_eq!(m.per_class[1].recall, 0.0);
        assert_eq!(m.per_class[0].f1, 0.0);
        assert_eq!(m.accuracy, 0.0);
    }

    #[test]
    fn separable_toy_is_perfect() {
        let labels: Vec<usize> = (0..60).map(|i| i % 2).collect();
        let m = one_column(labels.iter().map(|&l| l as f64).collect(), labels, 2);
        let cfg = CvConfig {
            classifier: Classifier::RandomForest(ForestParams {
                n_trees: 5,
                ..ForestParams::default()
            }),
            ..CvConfig::default()
        };
        let r = cross_validate(&m, "toy", &cfg).unwrap();
        assert_eq!(r.metrics.accuracy, 1.0);
        assert_eq!(r.confusion.iter().flatten().sum::<u64>(), 60);
        assert_eq!(r, cross_validate(&m, "toy", &cfg).unwrap());
    }

    #[test]
    fn majority_classifier_and_table() {
        let labels: Vec<usize> = (0..40).map(|i| usize::from(i % 4 == 0)).collect();
        let m = one_column(vec![0.0; 40], labels, 2);
        let cfg = CvConfig {
            classifier: Classifier::Majority,
            ..CvConfig::default()
        };
        let r = cross_validate(&m, "Majority class", &cfg).unwrap();
        assert_eq!(r.metrics.accuracy, 0.75);
        let table = format_table(&[r]);
        assert!(table.lines().nth(1).unwrap().ends_with("75.00"));
        assert!(table.starts_with("Feature set"));
    }
}
