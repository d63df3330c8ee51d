//! Information-gain ranking and selection of feature columns.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, FeatureSpec};

/// Columns with at most this many distinct values are used as categories.
pub const MAX_CATEGORIES: usize = 32;
/// Bin count for equal-frequency discretization of wider columns.
pub const BINS: usize = 10;

/// Shannon entropy (bits) of a class-count vector.
pub fn entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Maps each value of `column` to a category index: distinct values when
/// there are few, otherwise equal-frequency bins with edges at the
/// ⌈iN/10⌉-th order statistics (duplicate edges merged).
pub fn discretize(column: &[f64]) -> Vec<usize> {
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup_by(|a, b| a.total_cmp(b).is_eq());
    if distinct.len() <= MAX_CATEGORIES {
        return column
            .iter()
            .map(|v| distinct.binary_search_by(|d| d.total_cmp(v)).expect("value present"))
            .collect();
    }
    let n = sorted.len();
    let mut edges: Vec<f64> = (1..BINS).map(|i| sorted[(i * n).div_ceil(BINS) - 1]).collect();
    edges.dedup_by(|a, b| a.total_cmp(b).is_eq());
    column
        .iter()
        .map(|v| edges.partition_point(|e| e.total_cmp(v).is_lt()))
        .collect()
}

fn class_counts(labels: &[usize]) -> Vec<usize> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![0; k];
    for &l in labels {
        counts[l] += 1;
    }
    counts
}

/// `H(labels) − Σ_v (N_v/N)·H(labels | column = v)` in bits.
pub fn information_gain(column: &[f64], labels: &[usize]) -> Result<f64> {
    if column.len() != labels.len() {
        return Err(Error::Dimension {
            expected: labels.len(),
            got: column.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::EmptyInput("information gain over zero rows".into()));
    }
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let cats = discretize(column);
    let n_cats = cats.iter().max().map_or(0, |m| m + 1);
    let mut groups = vec![vec![0usize; n_classes]; n_cats];
    for (&cat, &l) in cats.iter().zip(labels) {
        groups[cat][l] += 1;
    }
    let n = labels.len() as f64;
    let conditional: f64 = groups
        .iter()
        .map(|c| c.iter().sum::<usize>() as f64 / n * entropy(c))
        .sum();
    // clamp float noise so that gain stays within [0, H]
    let h = entropy(&class_counts(labels));
    Ok((h - conditional).clamp(0.0, h))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub spec: FeatureSpec,
    pub gain: f64,
    pub rank: usize,
    /// Position of the column in the ranked matrix.
    pub column: usize,
}

/// Scores every column and sorts by gain descending, then name ascending.
pub fn rank_features(matrix: &FeatureMatrix) -> Result<Vec<RankedFeature>> {
    if matrix.n_rows() == 0 {
        return Err(Error::EmptyInput("ranking a matrix with no rows".into()));
    }
    let gains = (0..matrix.n_cols())
        .into_par_iter()
        .map(|j| information_gain(&matrix.column(j), &matrix.labels))
        .collect::<Result<Vec<f64>>>()?;
    let mut ranked: Vec<RankedFeature> = gains
        .into_iter()
        .enumerate()
        .map(|(j, gain)| RankedFeature {
            spec: matrix.specs[j].clone(),
            gain,
            rank: 0,
            column: j,
        })
        .collect();
    ranked.sort_by(|a, b| b.gain.total_cmp(&a.gain).then_with(|| a.spec.name.cmp(&b.spec.name)));
    for (i, r) in ranked.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(ranked)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Keep the `k` highest-ranked columns.
    TopK(usize),
    /// Keep every column whose gain exceeds the threshold.
    Threshold(f64),
}

impl Default for Selection {
    fn default() -> Self {
        Selection::Threshold(0.0)
    }
}

/// Indices of the surviving columns in original order.
pub fn selected_columns(ranking: &[RankedFeature], selection: Selection) -> Result<Vec<usize>> {
    let mut cols: Vec<usize> = match selection {
        Selection::TopK(0) => return Err(Error::Parameter("k must be at least 1".into())),
        Selection::TopK(k) => ranking.iter().take(k).map(|r| r.column).collect(),
        Selection::Threshold(t) => ranking.iter().filter(|r| r.gain > t).map(|r| r.column).collect(),
    };
    cols.sort_unstable();
    Ok(cols)
}

pub fn select_top(matrix: &FeatureMatrix, selection: Selection) -> Result<FeatureMatrix> {
    let cols = selected_columns(&rank_features(matrix)?, selection)?;
    Ok(matrix.select_columns(&cols))
}

/// One entry of the ranking report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingEntry {
    pub name: String,
    pub gain_bits: f64,
    pub rank: usize,
}

pub fn ranking_report(ranking: &[RankedFeature], top: Option<usize>) -> Vec<RankingEntry> {
    ranking
        .iter()
        .take(top.unwrap_or(usize::MAX))
        .map(|r| RankingEntry {
            name: r.spec.name.clone(),
            gain_bits: r.gain,
            rank: r.rank,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{FeatureKind, FeatureSet};

    fn matrix(cols: &[(&str, Vec<f64>)], labels: Vec<usize>) -> FeatureMatrix {
        let n = labels.len();
        let specs = cols
            .iter()
            .map(|(name, _)| FeatureSpec {
                name: name.to_string(),
                set: FeatureSet::Linguistic,
                kind: FeatureKind::Count,
            })
            .collect();
        let rows = (0..n).map(|i| cols.iter().map(|(_, c)| c[i]).collect()).collect();
        FeatureMatrix::new(specs, rows, labels, vec!["A".into(), "B".into()], (0..n).map(|i| i.to_string()).collect())
            .unwrap()
    }

    #[test]
    fn gain_examples() {
        assert_eq!(information_gain(&[1.0, 1.0, 0.0, 0.0], &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(information_gain(&[3.0; 4], &[0, 0, 1, 1]).unwrap(), 0.0);
        let ig = information_gain(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0], &[0, 0, 0, 1, 1, 1]).unwrap();
        assert!((ig - 0.4591).abs() < 1e-4, "{ig}");
        assert!(matches!(
            information_gain(&[1.0], &[0, 1]),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn binning_kicks_in_for_wide_columns() {
        let col: Vec<f64> = (0..100).map(f64::from).collect();
        let cats = discretize(&col);
        assert_eq!(cats[0], 0);
        assert_eq!(cats[9], 0);
        assert_eq!(cats[10], 1);
        assert_eq!(cats[99], 9);
        let small: Vec<f64> = (0..32).map(f64::from).collect();
        assert_eq!(discretize(&small), (0..32).collect::<Vec<_>>());
        // heavy zero mass collapses duplicate edges
        let mut skew = vec![0.0; 80];
        skew.extend((1..=40).map(f64::from));
        let cats = discretize(&skew);
        assert!(cats[..80].iter().all(|&c| c == 0));
        assert!(cats[80..].iter().all(|&c| c > 0));
    }

    #[test]
    fn ranking_and_ties() {
        let m = matrix(
            &[
                ("ling:z_const", vec![0.0; 6]),
                ("ling:b", vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
                ("ling:a", vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
            ],
            vec![0, 0, 0, 1, 1, 1],
        );
        let r = rank_features(&m).unwrap();
        let names: Vec<&str> = r.iter().map(|f| f.spec.name.as_str()).collect();
        assert_eq!(names, ["ling:a", "ling:b", "ling:z_const"]);
        assert_eq!(r.iter().map(|f| f.rank).collect::<Vec<_>>(), [1, 2, 3]);
        assert!((r[0].gain - 0.4591).abs() < 1e-4);
        assert_eq!(r[2].gain, 0.0);
    }

    #[test]
    fn selection_modes() {
        let m = matrix(
            &[("ling:const", vec![5.0; 4]), ("ling:pred", vec![1.0, 1.0, 0.0, 0.0])],
            vec![0, 0, 1, 1],
        );
        let t = select_top(&m, Selection::Threshold(0.0)).unwrap();
        assert_eq!(t.specs.len(), 1);
        assert_eq!(t.specs[0].name, "ling:pred");
        assert_eq!(select_top(&m, Selection::TopK(2)).unwrap(), m);
        let k1 = select_top(&m, Selection::TopK(1)).unwrap();
        assert_eq!(k1.specs[0].name, "ling:pred");
        assert!(matches!(select_top(&m, Selection::TopK(0)), Err(Error::Parameter(_))));
    }

    #[test]
    fn report_json_shape() {
        let m = matrix(&[("ling:pred", vec![1.0, 0.0])], vec![0, 1]);
        let rep = ranking_report(&rank_features(&m).unwrap(), Some(10));
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json, serde_json::json!([{"name": "ling:pred", "gain_bits": 1.0, "rank": 1}]));
    }
}
