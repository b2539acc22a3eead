//! CART trees over an [`EncodedMatrix`].
//!
//! Splits minimize the weighted sum of squared deviations of the node target.
//! For 0/1 targets that quantity is half the weighted Gini impurity, so the
//! same search serves classification trees (targets are labels, leaves hold
//! the positive fraction) and the regression trees used by boosting.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::encode::EncodedMatrix;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRule {
    /// Numeric: rows with `x <= t` go left.
    LessEq(f64),
    /// Categorical: rows with code `== c` go left.
    Equals(f64),
}

impl SplitRule {
    pub fn goes_left(&self, x: f64) -> bool {
        match *self {
            SplitRule::LessEq(t) => x <= t,
            SplitRule::Equals(c) => x == c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        column: usize,
        rule: SplitRule,
        left: usize,
        right: usize,
    },
}

/// Flat node arena; the root is node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    /// A single leaf.
    pub fn constant(value: f64) -> Self {
        Tree {
            nodes: vec![Node::Leaf { value }],
        }
    }

    pub fn leaf_of(&self, row: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { .. } => return i,
                Node::Split {
                    column,
                    rule,
                    left,
                    right,
                } => i = if rule.goes_left(row[*column]) { *left } else { *right },
            }
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        match self.nodes[self.leaf_of(row)] {
            Node::Leaf { value } => value,
            Node::Split { .. } => unreachable!("leaf_of returns a leaf"),
        }
    }

    pub fn set_leaf_value(&mut self, leaf: usize, value: f64) {
        if let Node::Leaf { value: v } = &mut self.nodes[leaf] {
            *v = value;
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(t: &Tree, i: usize) -> usize {
            match &t.nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(t, *left).max(walk(t, *right)),
            }
        }
        walk(self, 0)
    }

    /// Columns used by any split.
    pub fn split_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split { column, .. } => Some(*column),
                Node::Leaf { .. } => None,
            })
            .collect();
        cols.sort_unstable();
        cols.dedup();
        cols
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// Exhaustive search for the best cut of each candidate column.
    Best,
    /// One uniformly drawn cut per candidate column.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub max_depth: usize,
    /// Candidate columns per node; `None` means all.
    pub max_features: Option<usize>,
    pub thresholds: ThresholdMode,
}

#[derive(Debug, Clone, Copy, Default)]
struct Stats {
    w: f64,
    wy: f64,
    wyy: f64,
}

impl Stats {
    fn add(&mut self, w: f64, y: f64) {
        self.w += w;
        self.wy += w * y;
        self.wyy += w * y * y;
    }

    fn minus(&self, o: &Stats) -> Stats {
        Stats {
            w: self.w - o.w,
            wy: self.wy - o.wy,
            wyy: self.wyy - o.wyy,
        }
    }

    /// Weighted sum of squared deviations from the mean.
    fn sse(&self) -> f64 {
        if self.w <= 0.0 {
            return 0.0;
        }
        (self.wyy - self.wy * self.wy / self.w).max(0.0)
    }

    fn mean(&self) -> f64 {
        if self.w > 0.0 {
            self.wy / self.w
        } else {
            0.0
        }
    }
}

struct Candidate {
    column: usize,
    rule: SplitRule,
    gain: f64,
}

/// Grows one tree. `importance[c]` accumulates the impurity decrease of every
/// split on encoded column `c`.
pub(crate) struct TreeBuilder<'a> {
    pub x: &'a EncodedMatrix,
    pub target: &'a [f64],
    pub weight: &'a [f64],
    pub params: TreeParams,
    pub importance: Vec<f64>,
}

const MIN_GAIN: f64 = 1e-12;

impl<'a> TreeBuilder<'a> {
    pub fn new(x: &'a EncodedMatrix, target: &'a [f64], weight: &'a [f64], params: TreeParams) -> Self {
        TreeBuilder {
            x,
            target,
            weight,
            params,
            importance: vec![0.0; x.n_cols],
        }
    }

    /// Builds on the rows with positive weight.
    pub fn build(&mut self, rng: &mut Rng) -> Tree {
        let rows: Vec<usize> = (0..self.x.n_rows).filter(|&i| self.weight[i] > 0.0).collect();
        let mut tree = Tree { nodes: Vec::new() };
        self.grow(&mut tree, rows, 0, rng);
        tree
    }

    fn stats(&self, rows: &[usize]) -> Stats {
        let mut s = Stats::default();
        for &i in rows {
            s.add(self.weight[i], self.target[i]);
        }
        s
    }

    fn grow(&mut self, tree: &mut Tree, rows: Vec<usize>, depth: usize, rng: &mut Rng) -> usize {
        let id = tree.nodes.len();
        let stats = self.stats(&rows);
        tree.nodes.push(Node::Leaf { value: stats.mean() });
        if depth >= self.params.max_depth || rows.len() < 2 || stats.sse() <= MIN_GAIN {
            return id;
        }
        let Some(best) = self.find_split(&rows, &stats, rng) else {
            return id;
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| best.rule.goes_left(self.x.get(i, best.column)));
        self.importance[best.column] += best.gain;
        drop(rows);
        let left = self.grow(tree, left_rows, depth + 1, rng);
        let right = self.grow(tree, right_rows, depth + 1, rng);
        tree.nodes[id] = Node::Split {
            column: best.column,
            rule: best.rule,
            left,
            right,
        };
        id
    }

    fn candidate_columns(&self, rng: &mut Rng) -> Vec<usize> {
        let n = self.x.n_cols;
        match self.params.max_features {
            Some(m) if m < n => {
                let mut pool: Vec<usize> = (0..n).collect();
                for k in 0..m {
                    let j = rng.random_range(k..n);
                    pool.swap(k, j);
                }
                pool.truncate(m);
                pool.sort_unstable();
                pool
            }
            _ => (0..n).collect(),
        }
    }

    /// Highest-gain split; ties keep the lower column, then the lower cut.
    fn find_split(&self, rows: &[usize], parent: &Stats, rng: &mut Rng) -> Option<Candidate> {
        let mut best: Option<Candidate> = None;
        for column in self.candidate_columns(rng) {
            let found = if self.x.categorical[column] {
                self.categorical_split(rows, column, parent, rng)
            } else {
                self.numeric_split(rows, column, parent, rng)
            };
            if let Some(c) = found {
                if c.gain > MIN_GAIN && best.as_ref().is_none_or(|b| c.gain > b.gain) {
                    best = Some(c);
                }
            }
        }
        best
    }

    fn numeric_split(&self, rows: &[usize], column: usize, parent: &Stats, rng: &mut Rng) -> Option<Candidate> {
        match self.params.thresholds {
            ThresholdMode::Random => {
                let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                    let v = self.x.get(i, column);
                    (lo.min(v), hi.max(v))
                });
                if !(hi > lo) {
                    return None;
                }
                let mut t = lo + (hi - lo) * rng.random::<f64>();
                if t >= hi {
                    t = lo;
                }
                let rule = SplitRule::LessEq(t);
                Some(self.evaluate(rows, column, rule, parent))
            }
            ThresholdMode::Best => {
                let mut vals: Vec<(f64, usize)> = rows.iter().map(|&i| (self.x.get(i, column), i)).collect();
                vals.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut left = Stats::default();
                let mut best: Option<Candidate> = None;
                for k in 0..vals.len() - 1 {
                    let (v, i) = vals[k];
                    left.add(self.weight[i], self.target[i]);
                    let next = vals[k + 1].0;
                    if next <= v {
                        continue;
                    }
                    let right = parent.minus(&left);
                    let gain = parent.sse() - left.sse() - right.sse();
                    if best.as_ref().is_none_or(|b| gain > b.gain) {
                        let mut t = v + (next - v) / 2.0;
                        if t >= next {
                            t = v;
                        }
                        best = Some(Candidate {
                            column,
                            rule: SplitRule::LessEq(t),
                            gain,
                        });
                    }
                }
                best
            }
        }
    }

    fn categorical_split(&self, rows: &[usize], column: usize, parent: &Stats, rng: &mut Rng) -> Option<Candidate> {
        let mut per_code: Vec<Stats> = Vec::new();
        for &i in rows {
            let code = self.x.get(i, column) as usize;
            if per_code.len() <= code {
                per_code.resize(code + 1, Stats::default());
            }
            per_code[code].add(self.weight[i], self.target[i]);
        }
        let present: Vec<usize> = (0..per_code.len()).filter(|&c| per_code[c].w > 0.0).collect();
        if present.len() < 2 {
            return None;
        }
        let score = |code: usize| {
            let left = per_code[code];
            let right = parent.minus(&left);
            Candidate {
                column,
                rule: SplitRule::Equals(code as f64),
                gain: parent.sse() - left.sse() - right.sse(),
            }
        };
        match self.params.thresholds {
            ThresholdMode::Random => Some(score(present[rng.random_range(0..present.len())])),
            ThresholdMode::Best => present.into_iter().map(score).fold(None, |best: Option<Candidate>, c| match best {
                Some(b) if b.gain >= c.gain => Some(b),
                _ => Some(c),
            }),
        }
    }

    fn evaluate(&self, rows: &[usize], column: usize, rule: SplitRule, parent: &Stats) -> Candidate {
        let mut left = Stats::default();
        for &i in rows {
            if rule.goes_left(self.x.get(i, column)) {
                left.add(self.weight[i], self.target[i]);
            }
        }
        let right = parent.minus(&left);
        Candidate {
            column,
            rule,
            gain: parent.sse() - left.sse() - right.sse(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn build(rows: &[Vec<f64>], y: &[f64], params: TreeParams) -> (Tree, Vec<f64>) {
        let x = EncodedMatrix::from_rows(rows).unwrap();
        let w = vec![1.0; y.len()];
        let mut b = TreeBuilder::new(&x, y, &w, params);
        let t = b.build(&mut rng::rng(0));
        (t, b.importance)
    }

    const BEST: TreeParams = TreeParams {
        max_depth: 8,
        max_features: None,
        thresholds: ThresholdMode::Best,
    };

    #[test]
    fn hand_built_stump_prediction() {
        let t = Tree {
            nodes: vec![
                Node::Split {
                    column: 0,
                    rule: SplitRule::LessEq(0.5),
                    left: 1,
                    right: 2,
                },
                Node::Leaf { value: 0.2 },
                Node::Leaf { value: 0.9 },
            ],
        };
        assert_eq!(t.predict_row(&[0.3]), 0.2);
        assert_eq!(t.predict_row(&[0.7]), 0.9);
        assert_eq!(t.predict_row(&[0.5]), 0.2);
    }

    #[test]
    fn learns_single_threshold_at_midpoint() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 0.0]).collect();
        let y: Vec<f64> = (0..10).map(|i| if i >= 6 { 1.0 } else { 0.0 }).collect();
        let (t, imp) = build(&rows, &y, BEST);
        assert_eq!(t.depth(), 1);
        match &t.nodes[0] {
            Node::Split { column, rule, .. } => {
                assert_eq!(*column, 0);
                assert_eq!(*rule, SplitRule::LessEq(5.5));
            }
            Node::Leaf { .. } => panic!("expected a split"),
        }
        assert!(imp[0] > 0.0);
        assert_eq!(imp[1], 0.0);
    }

    #[test]
    fn ties_break_to_lowest_column() {
        // two identical columns
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, i as f64]).collect();
        let y = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let (t, _) = build(&rows, &y, BEST);
        assert_eq!(t.split_columns(), vec![0]);
    }

    #[test]
    fn categorical_equality_split() {
        let rows: Vec<Vec<f64>> = [0.0, 1.0, 2.0, 1.0, 0.0, 2.0].iter().map(|&c| vec![c]).collect();
        let y = [0.0, 1.0, 0.0, 1.0, 0.0, 0.0];
        let mut x = EncodedMatrix::from_rows(&rows).unwrap();
        x.categorical = vec![true];
        let w = vec![1.0; 6];
        let mut b = TreeBuilder::new(&x, &y, &w, BEST);
        let t = b.build(&mut rng::rng(1));
        assert_eq!(
            t.nodes[0],
            Node::Split { column: 0, rule: SplitRule::Equals(1.0), left: 1, right: 2 }
        );
        assert_eq!(t.predict_row(&[1.0]), 1.0);
        assert_eq!(t.predict_row(&[2.0]), 0.0);
    }

    #[test]
    fn pure_node_is_leaf() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        let (t, _) = build(&rows, &[1.0; 5], BEST);
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.predict_row(&[3.0]), 1.0);
    }

    #[test]
    fn depth_limit_respected() {
        let rows: Vec<Vec<f64>> = (0..64).map(|i| vec![i as f64]).collect();
        let y: Vec<f64> = (0..64).map(|i| (i % 2) as f64).collect();
        let (t, _) = build(&rows, &y, TreeParams { max_depth: 3, ..BEST });
        assert!(t.depth() <= 3);
    }

    #[test]
    fn zero_weight_rows_are_ignored() {
        let x = EncodedMatrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let y = [0.0, 1.0, 1.0];
        let w = [0.0, 1.0, 2.0];
        let mut b = TreeBuilder::new(&x, &y, &w, BEST);
        let t = b.build(&mut rng::rng(0));
        assert_eq!(t.nodes.len(), 1);
    }

    #[test]
    fn random_cut_lies_inside_node_range() {
        let rows: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64 / 10.0]).collect();
        let y: Vec<f64> = (0..50).map(|i| if i > 20 { 1.0 } else { 0.0 }).collect();
        let params = TreeParams { max_depth: 1, max_features: None, thresholds: ThresholdMode::Random };
        for seed in 0..20 {
            let x = EncodedMatrix::from_rows(&rows).unwrap();
            let w = vec![1.0; 50];
            let mut b = TreeBuilder::new(&x, &y, &w, params);
            let t = b.build(&mut rng::rng(seed));
            if let Node::Split { rule: SplitRule::LessEq(c), .. } = t.nodes[0] {
                assert!((0.0..4.9).contains(&c));
            }
        }
    }
}
