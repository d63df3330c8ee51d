//! Random forest of axis-aligned numeric-threshold decision trees.
//!
//! Every tree owns an independent RNG stream derived from `(seed, tree
//! index)`, so a model is a pure function of its inputs regardless of how
//! many threads train it.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

/// Gains within this distance count as equal.
const GAIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    #[default]
    InfoGain,
    Gini,
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "info_gain" | "infogain" | "entropy" => Ok(Criterion::InfoGain),
            "gini" => Ok(Criterion::Gini),
            _ => Err(Error::Config(format!("unknown split criterion {s:?}"))),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::InfoGain => "info_gain",
            Criterion::Gini => "gini",
        })
    }
}

/// How many features to draw per split when `m_try` is not fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MTryRule {
    /// `⌊log₂ m⌋ + 1`
    #[default]
    Log2,
    /// `⌊√m⌋`, at least 1
    Sqrt,
    All,
}

impl MTryRule {
    pub fn resolve(self, m: usize) -> usize {
        match self {
            MTryRule::Log2 => (m.max(1).ilog2() as usize + 1).min(m),
            MTryRule::Sqrt => m.isqrt().max(1),
            MTryRule::All => m,
        }
    }
}

impl FromStr for MTryRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "log2" => Ok(MTryRule::Log2),
            "sqrt" => Ok(MTryRule::Sqrt),
            "all" => Ok(MTryRule::All),
            _ => Err(Error::Config(format!("unknown m_try rule {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Fixed number of features drawn per split; overrides `m_try_rule`.
    pub m_try: Option<usize>,
    pub m_try_rule: MTryRule,
    pub criterion: Criterion,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    pub seed: u64,
    pub bootstrap: bool,
    /// Keep drawing features past `m_try` until one yields a positive gain.
    pub keep_drawing: bool,
    /// Split on the best zero-gain threshold when nothing improves the
    /// criterion, so that XOR-like patterns can still be separated.
    pub zero_gain_splits: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            m_try: None,
            m_try_rule: MTryRule::Log2,
            criterion: Criterion::InfoGain,
            min_leaf: 1,
            max_depth: None,
            seed: 1,
            bootstrap: true,
            keep_drawing: true,
            zero_gain_splits: true,
        }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Parameter("n_trees must be at least 1".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::Parameter("min_leaf must be at least 1".into()));
        }
        if self.m_try == Some(0) {
            return Err(Error::Parameter("m_try must be at least 1".into()));
        }
        Ok(())
    }

    /// Features drawn per split for `m` columns, clamped to `[1, m]`.
    pub fn resolve_m_try(&self, m: usize) -> usize {
        match self.m_try {
            Some(k) if k > m => {
                log::warn!("m_try {k} exceeds the {m} available features; using {m}");
                m
            }
            Some(k) => k,
            None => self.m_try_rule.resolve(m),
        }
        .max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Node {
    /// Rows with `value ≤ threshold` go to `left`.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf { counts: Vec<u64> },
}

/// Index of the largest count, lowest index on ties.
pub fn argmax_lowest(counts: &[u64]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// A tree stored as a node arena rooted at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(counts: Vec<u64>) -> Tree {
        Tree {
            nodes: vec![Node::Leaf { counts }],
        }
    }

    pub fn leaf_for(&self, row: &[f64]) -> &[u64] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[*feature] <= *threshold { *left } else { *right },
                Node::Leaf { counts } => return counts,
            }
        }
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        argmax_lowest(self.leaf_for(row))
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    pub fn depth(&self) -> usize {
        let mut deepest = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((i, d)) = stack.pop() {
            deepest = deepest.max(d);
            if let Node::Split { left, right, .. } = self.nodes[i] {
                stack.push((left, d + 1));
                stack.push((right, d + 1));
            }
        }
        deepest
    }
}

/// Plurality vote over class indices, lowest index on ties.
pub fn plurality(votes: &[usize], n_classes: usize) -> usize {
    let mut tally = vec![0u64; n_classes];
    for &v in votes {
        tally[v] += 1;
    }
    argmax_lowest(&tally)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub params: ForestParams,
    pub m_try: usize,
    pub n_features: usize,
    pub classes: Vec<String>,
    pub trees: Vec<Tree>,
}

struct TrainData<'a> {
    cols: Vec<Vec<f64>>,
    labels: &'a [usize],
    n_classes: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    feature: usize,
    threshold: f64,
}

impl Candidate {
    fn beats(&self, other: &Option<Candidate>) -> bool {
        let Some(o) = other else { return true };
        if self.gain > o.gain + GAIN_TOLERANCE {
            return true;
        }
        if self.gain < o.gain - GAIN_TOLERANCE {
            return false;
        }
        self.feature
            .cmp(&o.feature)
            .then(self.threshold.total_cmp(&o.threshold))
            .is_lt()
    }
}

fn impurity(criterion: Criterion, counts: &[u64], n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    match criterion {
        Criterion::InfoGain => counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum(),
        Criterion::Gini => 1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>(),
    }
}

struct Grower<'a> {
    data: &'a TrainData<'a>,
    params: &'a ForestParams,
    m_try: usize,
    rng: ChaCha8Rng,
    perm: Vec<usize>,
    pairs: Vec<(f64, usize)>,
    left: Vec<u64>,
}

impl Grower<'_> {
    fn counts(&self, idx: &[u32]) -> Vec<u64> {
        let mut c = vec![0u64; self.data.n_classes];
        for &i in idx {
            c[self.data.labels[i as usize]] += 1;
        }
        c
    }

    /// Best threshold on one feature, if any split respects `min_leaf`.
    fn best_for_feature(&mut self, feature: usize, idx: &[u32], parent: &[u64]) -> Option<Candidate> {
        let col = &self.data.cols[feature];
        self.pairs.clear();
        self.pairs.extend(idx.iter().map(|&i| (col[i as usize], self.data.labels[i as usize])));
        let first = self.pairs[0].0;
        if self.pairs.iter().all(|p| p.0 == first) {
            return None;
        }
        self.pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

        let n = self.pairs.len();
        let min_leaf = self.params.min_leaf;
        let criterion = self.params.criterion;
        let h_parent = impurity(criterion, parent, n as u64);
        self.left.iter_mut().for_each(|c| *c = 0);
        let mut right = parent.to_vec();
        let mut best: Option<Candidate> = None;
        for i in 0..n - 1 {
            let (v, label) = self.pairs[i];
            self.left[label] += 1;
            right[label] -= 1;
            let next = self.pairs[i + 1].0;
            let (nl, nr) = (i + 1, n - i - 1);
            if v == next || nl < min_leaf || nr < min_leaf {
                continue;
            }
            let h = (nl as f64 * impurity(criterion, &self.left, nl as u64)
                + nr as f64 * impurity(criterion, &right, nr as u64))
                / n as f64;
            let mut threshold = v + (next - v) / 2.0;
            if threshold >= next {
                threshold = v;
            }
            let cand = Candidate {
                gain: (h_parent - h).max(0.0),
                feature,
                threshold,
            };
            if cand.beats(&best) {
                best = Some(cand);
            }
        }
        best
    }

    fn choose_split(&mut self, idx: &[u32], parent: &[u64]) -> Option<Candidate> {
        let m = self.perm.len();
        for (i, p) in self.perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut best: Option<Candidate> = None;
        for i in 0..m {
            let j = self.rng.gen_range(i..m);
            self.perm.swap(i, j);
            let feature = self.perm[i];
            if let Some(c) = self.best_for_feature(feature, idx, parent) {
                if c.beats(&best) {
                    best = Some(c);
                }
            }
            if i + 1 >= self.m_try {
                let positive = best.is_some_and(|b| b.gain > GAIN_TOLERANCE);
                if positive || !self.params.keep_drawing {
                    break;
                }
            }
        }
        best.filter(|b| b.gain > GAIN_TOLERANCE || self.params.zero_gain_splits)
    }

    fn grow(mut self, sample: Vec<u32>) -> Tree {
        let mut nodes = vec![Node::Leaf { counts: vec![] }];
        let mut stack = vec![(0usize, sample, 0usize)];
        while let Some((id, idx, depth)) = stack.pop() {
            let counts = self.counts(&idx);
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            let too_small = idx.len() < 2 * self.params.min_leaf;
            let too_deep = self.params.max_depth.is_some_and(|d| depth >= d);
            let split = if pure || too_small || too_deep {
                None
            } else {
                self.choose_split(&idx, &counts)
            };
            let Some(c) = split else {
                nodes[id] = Node::Leaf { counts };
                continue;
            };
            let col = &self.data.cols[c.feature];
            let (l, r): (Vec<u32>, Vec<u32>) = idx.iter().partition(|&&i| col[i as usize] <= c.threshold);
            let (left, right) = (nodes.len(), nodes.len() + 1);
            nodes.push(Node::Leaf { counts: vec![] });
            nodes.push(Node::Leaf { counts: vec![] });
            nodes[id] = Node::Split {
                feature: c.feature,
                threshold: c.threshold,
                left,
                right,
            };
            stack.push((right, r, depth + 1));
            stack.push((left, l, depth + 1));
        }
        Tree { nodes }
    }
}

impl ForestModel {
    pub fn train(matrix: &FeatureMatrix, params: &ForestParams) -> Result<ForestModel> {
        ForestModel::train_rows(&matrix.rows, &matrix.labels, matrix.class_names.clone(), params)
    }

    pub fn train_rows(
        rows: &[Vec<f64>],
        labels: &[usize],
        classes: Vec<String>,
        params: &ForestParams,
    ) -> Result<ForestModel> {
        params.validate()?;
        if rows.is_empty() {
            return Err(Error::EmptyInput("cannot train on zero rows".into()));
        }
        if labels.len() != rows.len() {
            return Err(Error::Dimension {
                expected: rows.len(),
                got: labels.len(),
            });
        }
        if classes.is_empty() {
            return Err(Error::Parameter("at least one class is required".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= classes.len()) {
            return Err(Error::Index {
                index: bad,
                len: classes.len(),
            });
        }
        let m = rows[0].len();
        let mut cols = vec![Vec::with_capacity(rows.len()); m];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Dimension { expected: m, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Row {
                        row: r as u64 + 1,
                        message: format!("non-finite value in feature {j}"),
                    });
                }
                cols[j].push(v);
            }
        }
        let data = TrainData {
            cols,
            labels,
            n_classes: classes.len(),
        };
        let m_try = if m == 0 { 0 } else { params.resolve_m_try(m) };
        let n = rows.len();
        let trees = (0..params.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
                rng.set_stream(t as u64);
                let sample: Vec<u32> = if params.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n as u32)).collect()
                } else {
                    (0..n as u32).collect()
                };
                Grower {
                    data: &data,
                    params,
                    m_try,
                    rng,
                    perm: vec![0; m],
                    pairs: Vec::with_capacity(n),
                    left: vec![0; data.n_classes],
                }
                .grow(sample)
            })
            .collect();
        Ok(ForestModel {
            params: *params,
            m_try,
            n_features: m,
            classes,
            trees,
        })
    }

    /// A model from hand-built trees.
    pub fn from_trees(classes: Vec<String>, n_features: usize, trees: Vec<Tree>) -> Result<ForestModel> {
        if trees.is_empty() {
            return Err(Error::Parameter("a forest needs at least one tree".into()));
        }
        Ok(ForestModel {
            params: ForestParams {
                n_trees: trees.len(),
                ..ForestParams::default()
            },
            m_try: n_features,
            n_features,
            classes,
            trees,
        })
    }

    fn check_row(&self, row: &[f64]) -> Result<()> {
        if row.len() != self.n_features {
            return Err(Error::Dimension {
                expected: self.n_features,
                got: row.len(),
            });
        }
        Ok(())
    }

    /// Each tree's leaf-majority class for `row`.
    pub fn votes(&self, row: &[f64]) -> Result<Vec<usize>> {
        self.check_row(row)?;
        Ok(self.trees.iter().map(|t| t.predict(row)).collect())
    }

    pub fn predict(&self, row: &[f64]) -> Result<usize> {
        Ok(plurality(&self.votes(row)?, self.classes.len()))
    }

    pub fn predict_batch(&self, rows: &[Vec<f64>]) -> Result<Vec<usize>> {
        rows.iter().try_for_each(|r| self.check_row(r))?;
        Ok(rows
            .par_iter()
            .map(|r| self.predict(r).expect("row checked"))
            .collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<ForestModel> {
        let model: ForestModel = serde_json::from_str(text)?;
        model.check_structure()?;
        Ok(model)
    }

    fn check_structure(&self) -> Result<()> {
        for (t, tree) in self.trees.iter().enumerate() {
            let bad = |what: String| Error::Invariant(format!("tree {t}: {what}"));
            if tree.nodes.is_empty() {
                return Err(bad("no nodes".into()));
            }
            for node in &tree.nodes {
                match node {
                    Node::Split {
                        feature, left, right, ..
                    } => {
                        if *feature >= self.n_features {
                            return Err(bad(format!("feature {feature} out of range")));
                        }
                        if *left >= tree.nodes.len() || *right >= tree.nodes.len() {
                            return Err(bad("child index out of range".into()));
                        }
                    }
                    Node::Leaf { counts } => {
                        if counts.len() != self.classes.len() {
                            return Err(bad("leaf distribution has the wrong width".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    fn single_tree() -> ForestParams {
        ForestParams {
            n_trees: 1,
            m_try_rule: MTryRule::All,
            bootstrap: false,
            ..ForestParams::default()
        }
    }

    #[test]
    fn m_try_rules() {
        assert_eq!(MTryRule::Log2.resolve(100), 7);
        assert_eq!(MTryRule::Log2.resolve(1), 1);
        assert_eq!(MTryRule::Sqrt.resolve(100), 10);
        assert_eq!(MTryRule::Sqrt.resolve(2), 1);
        let p = ForestParams {
            m_try: Some(50),
            ..ForestParams::default()
        };
        assert_eq!(p.resolve_m_try(3), 3);
    }

    #[test]
    fn xor_is_shattered_by_one_tree() {
        let rows = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let labels = vec![0, 1, 1, 0];
        let m = ForestModel::train_rows(&rows, &labels, classes(2), &single_tree()).unwrap();
        assert_eq!(m.predict_batch(&rows).unwrap(), labels);

        let strict = ForestParams {
            zero_gain_splits: false,
            ..single_tree()
        };
        let m = ForestModel::train_rows(&rows, &labels, classes(2), &strict).unwrap();
        assert_eq!(m.trees[0].nodes.len(), 1);
    }

    #[test]
    fn single_class_gives_single_leaves() {
        let rows = vec![vec![1.0], vec![2.0], vec![3.0]];
        let m = ForestModel::train_rows(&rows, &[1, 1, 1], classes(3), &ForestParams {
            n_trees: 5,
            ..ForestParams::default()
        })
        .unwrap();
        assert!(m.trees.iter().all(|t| t.nodes.len() == 1));
        assert_eq!(m.predict(&[100.0]).unwrap(), 1);
    }

    #[test]
    fn thresholds_are_midpoints_with_tie_breaks() {
        // both features separate perfectly; the lower index wins
        let rows = vec![vec![1.0, 10.0], vec![3.0, 30.0]];
        let m = ForestModel::train_rows(&rows, &[0, 1], classes(2), &single_tree()).unwrap();
        match &m.trees[0].nodes[0] {
            Node::Split { feature, threshold, .. } => {
                assert_eq!(*feature, 0);
                assert_eq!(*threshold, 2.0);
            }
            other => panic!("expected a split, got {other:?}"),
        }
    }

    #[test]
    fn min_leaf_and_depth_limits() {
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![f64::from(i)]).collect();
        let labels = vec![0, 1, 0, 1, 0, 1, 0, 1];
        let p = ForestParams {
            max_depth: Some(1),
            ..single_tree()
        };
        let m = ForestModel::train_rows(&rows, &labels, classes(2), &p).unwrap();
        assert!(m.trees[0].depth() <= 1);
        let p = ForestParams {
            min_leaf: 3,
            ..single_tree()
        };
        let m = ForestModel::train_rows(&rows, &labels, classes(2), &p).unwrap();
        for node in &m.trees[0].nodes {
            if let Node::Leaf { counts } = node {
                assert!(counts.iter().sum::<u64>() >= 3);
            }
        }
    }

    #[test]
    fn votes_and_ties() {
        let leaf = |c: usize| {
            let mut counts = vec![0; 2];
            counts[c] = 1;
            Tree::leaf(counts)
        };
        let m = ForestModel::from_trees(classes(2), 1, vec![leaf(0), leaf(0), leaf(1)]).unwrap();
        assert_eq!(m.predict(&[0.0]).unwrap(), 0);
        let m = ForestModel::from_trees(classes(2), 1, vec![leaf(1), leaf(0)]).unwrap();
        assert_eq!(m.predict(&[0.0]).unwrap(), 0);
        assert_eq!(Tree::leaf(vec![2, 2]).predict(&[0.0]), 0);
        assert!(matches!(m.predict(&[0.0, 1.0]), Err(Error::Dimension { .. })));
        assert_eq!(m.predict_batch(&[]).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn parameter_and_input_errors() {
        let rows = vec![vec![1.0]];
        let bad = ForestParams {
            n_trees: 0,
            ..ForestParams::default()
        };
        assert!(matches!(ForestModel::train_rows(&rows, &[0], classes(1), &bad), Err(Error::Parameter(_))));
        assert!(matches!(
            ForestModel::train_rows(&[], &[], classes(1), &ForestParams::default()),
            Err(Error::EmptyInput(_))
        ));
        assert!(ForestModel::train_rows(&[vec![f64::NAN]], &[0], classes(1), &ForestParams::default()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![f64::from(i % 7), f64::from(i % 3)]).collect();
        let labels: Vec<usize> = (0..30).map(|i| (i % 7 > 3) as usize).collect();
        let m = ForestModel::train_rows(&rows, &labels, classes(2), &ForestParams {
            n_trees: 7,
            ..ForestParams::default()
        })
        .unwrap();
        let back = ForestModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(ForestModel::from_json(r#"{"params":{},"m_try":1,"n_features":1,"classes":["a"],"trees":[{"nodes":[{"type":"leaf","counts":[1,2]}]}]}"#).is_err());
    }
}
