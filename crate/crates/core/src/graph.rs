//! Graphical multiple test procedures: graph definition, validation, the
//! node-rejection update and the sequentially rejective test.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A graphical test procedure over `m` hypotheses.
///
/// The shape (one label, one level and one transition row per node, square
/// matrix) is enforced on construction. Level and weight constraints are
/// checked by [`HypothesisGraph::validate`], which reports every violation
/// instead of failing on the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "GraphRecord<T>",
    into = "GraphRecord<T>",
    bound = "T: Scalar + Serialize + DeserializeOwned"
)]
pub struct HypothesisGraph<T: Scalar> {
    labels: Vec<String>,
    alpha: T,
    initial_levels: Vec<T>,
    transitions: Vec<Vec<T>>,
}

/// On-disk layout of a graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct GraphRecord<T> {
    labels: Vec<String>,
    alpha: T,
    initial_levels: Vec<T>,
    transitions: Vec<Vec<T>>,
}

impl<T: Scalar> TryFrom<GraphRecord<T>> for HypothesisGraph<T> {
    type Error = Error;

    fn try_from(r: GraphRecord<T>) -> Result<Self> {
        HypothesisGraph::new(r.labels, r.alpha, r.initial_levels, r.transitions)
    }
}

impl<T: Scalar> From<HypothesisGraph<T>> for GraphRecord<T> {
    fn from(g: HypothesisGraph<T>) -> Self {
        GraphRecord {
            labels: g.labels,
            alpha: g.alpha,
            initial_levels: g.initial_levels,
            transitions: g.transitions,
        }
    }
}

impl<T: Scalar> HypothesisGraph<T> {
    pub fn new(
        labels: Vec<String>,
        alpha: T,
        initial_levels: Vec<T>,
        transitions: Vec<Vec<T>>,
    ) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::Shape("graph has no hypotheses".into()));
        }
        if initial_levels.len() != m {
            return Err(Error::Shape(format!(
                "{} labels but {} initial levels",
                m,
                initial_levels.len()
            )));
        }
        if transitions.len() != m {
            return Err(Error::Shape(format!(
                "{} labels but {} transition rows",
                m,
                transitions.len()
            )));
        }
        if let Some((i, row)) = transitions.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::Shape(format!(
                "transition row {} has {} entries, expected {}",
                i,
                row.len(),
                m
            )));
        }
        Ok(Self {
            labels,
            alpha,
            initial_levels,
            transitions,
        })
    }

    /// Builds a graph with generated labels `H1..Hm`.
    pub fn unlabeled(alpha: T, initial_levels: Vec<T>, transitions: Vec<Vec<T>>) -> Result<Self> {
        let labels = (1..=initial_levels.len()).map(|i| format!("H{i}")).collect();
        Self::new(labels, alpha, initial_levels, transitions)
    }

    /// Unweighted Holm procedure: equal levels, each node passes its level
    /// in equal parts to all others.
    pub fn holm(m: usize, alpha: T) -> Result<Self> {
        if m == 0 {
            return Err(Error::Shape("graph has no hypotheses".into()));
        }
        let level = alpha / T::lit(m as f64);
        let w = if m > 1 {
            T::one() / T::lit((m - 1) as f64)
        } else {
            T::zero()
        };
        let transitions = (0..m)
            .map(|i| (0..m).map(|j| if i == j { T::zero() } else { w }).collect())
            .collect();
        Self::unlabeled(alpha, vec![level; m], transitions)
    }

    /// Fallback chain `H1 -> H2 -> ... -> Hm` with the given initial levels.
    /// The fixed-sequence procedure puts all of `alpha` on the first node.
    pub fn fallback(alpha: T, initial_levels: Vec<T>) -> Result<Self> {
        let m = initial_levels.len();
        let transitions = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if j == i + 1 { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        Self::unlabeled(alpha, initial_levels, transitions)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn initial_levels(&self) -> &[T] {
        &self.initial_levels
    }

    pub fn transitions(&self) -> &[Vec<T>] {
        &self.transitions
    }

    pub fn weight(&self, from: usize, to: usize) -> T {
        self.transitions[from][to]
    }

    pub fn row_sum(&self, i: usize) -> T {
        self.transitions[i]
            .iter()
            .fold(T::zero(), |acc, &w| acc + w)
    }

    /// Row sums snapped to exactly one when within the structural tolerance.
    pub(crate) fn snapped_row_sum(&self, i: usize) -> T {
        let r = self.row_sum(i);
        if (r - T::one()).abs() <= T::structural_tolerance() {
            T::one()
        } else {
            r
        }
    }

    pub fn is_complete(&self) -> bool {
        (0..self.size()).all(|i| (self.row_sum(i) - T::one()).abs() <= T::structural_tolerance())
    }

    pub fn validate(&self) -> ValidationReport<T> {
        validate_graph(self)
    }
}

/// A single broken invariant of a [`HypothesisGraph`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation<T> {
    AlphaOutOfRange(T),
    NonFiniteLevel { node: usize },
    NegativeLevel { node: usize, value: T },
    LevelAboveOne { node: usize, value: T },
    LevelSumMismatch { sum: T, alpha: T },
    NonFiniteWeight { from: usize, to: usize },
    NonZeroDiagonal { node: usize, value: T },
    NegativeWeight { from: usize, to: usize, value: T },
    WeightAboveOne { from: usize, to: usize, value: T },
    RowSumAboveOne { node: usize, sum: T },
}

impl<T: Scalar> fmt::Display for Violation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlphaOutOfRange(a) => write!(f, "overall level {a} not in (0, 1)"),
            Violation::NonFiniteLevel { node } => write!(f, "level of node {node} is not finite"),
            Violation::NegativeLevel { node, value } => {
                write!(f, "level of node {node} is negative ({value})")
            }
            Violation::LevelAboveOne { node, value } => {
                write!(f, "level of node {node} exceeds one ({value})")
            }
            Violation::LevelSumMismatch { sum, alpha } => {
                write!(f, "initial levels sum to {sum}, expected alpha = {alpha}")
            }
            Violation::NonFiniteWeight { from, to } => {
                write!(f, "weight {from}->{to} is not finite")
            }
            Violation::NonZeroDiagonal { node, value } => {
                write!(f, "nonzero diagonal weight at node {node} ({value})")
            }
            Violation::NegativeWeight { from, to, value } => {
                write!(f, "weight {from}->{to} is negative ({value})")
            }
            Violation::WeightAboveOne { from, to, value } => {
                write!(f, "weight {from}->{to} exceeds one ({value})")
            }
            Violation::RowSumAboveOne { node, sum } => {
                write!(f, "outgoing weights of node {node} sum to {sum} > 1")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport<T> {
    pub violations: Vec<Violation<T>>,
    /// Every row sums to one.
    pub complete: bool,
    /// Rows whose outgoing weights sum to less than one.
    pub incomplete_rows: Vec<usize>,
}

impl<T> ValidationReport<T> {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<T: Scalar> fmt::Display for ValidationReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(
                f,
                "valid, {}",
                if self.complete { "complete" } else { "incomplete" }
            )?;
            if !self.incomplete_rows.is_empty() {
                write!(f, " (rows summing below one: {:?})", self.incomplete_rows)?;
            }
            Ok(())
        } else {
            writeln!(f, "invalid:")?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

pub fn validate_graph<T: Scalar>(g: &HypothesisGraph<T>) -> ValidationReport<T> {
    let tol = T::structural_tolerance();
    let mut violations = Vec::new();
    let m = g.size();

    if !(g.alpha > T::zero() && g.alpha < T::one()) {
        violations.push(Violation::AlphaOutOfRange(g.alpha));
    }
    let mut sum = T::zero();
    for (node, &a) in g.initial_levels.iter().enumerate() {
        if !a.is_finite() {
            violations.push(Violation::NonFiniteLevel { node });
            continue;
        }
        if a < T::zero() {
            violations.push(Violation::NegativeLevel { node, value: a });
        }
        if a > T::one() {
            violations.push(Violation::LevelAboveOne { node, value: a });
        }
        sum = sum + a;
    }
    if sum.is_finite() && (sum - g.alpha).abs() > tol {
        violations.push(Violation::LevelSumMismatch {
            sum,
            alpha: g.alpha,
        });
    }

    let mut incomplete_rows = Vec::new();
    for from in 0..m {
        let mut row_ok = true;
        for to in 0..m {
            let w = g.transitions[from][to];
            if !w.is_finite() {
                violations.push(Violation::NonFiniteWeight { from, to });
                row_ok = false;
                continue;
            }
            if from == to && w != T::zero() {
                violations.push(Violation::NonZeroDiagonal {
                    node: from,
                    value: w,
                });
            }
            if w < T::zero() {
                violations.push(Violation::NegativeWeight { from, to, value: w });
            }
            if w > T::one() {
                violations.push(Violation::WeightAboveOne { from, to, value: w });
            }
        }
        if !row_ok {
            continue;
        }
        let r = g.row_sum(from);
        if r > T::one() + tol {
            violations.push(Violation::RowSumAboveOne {
                node: from,
                sum: r,
            });
        } else if r < T::one() - tol {
            incomplete_rows.push(from);
        }
    }

    let complete = incomplete_rows.is_empty()
        && !violations
            .iter()
            .any(|v| matches!(v, Violation::RowSumAboveOne { .. } | Violation::NonFiniteWeight { .. }));
    ValidationReport {
        violations,
        complete,
        incomplete_rows,
    }
}

/// Local levels and transition weights of a graph part-way through the
/// sequentially rejective algorithm.
///
/// Besides the weights, each row carries its deficit `1 - sum_l g_jl`. The
/// update denominator `1 - g_ji g_ij` is then formed as
/// `(1 - g_ji) + g_ji (1 - g_ij)` from sums of non-negative terms, which
/// keeps it accurate when both weights are within rounding of one.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphState<T: Scalar> {
    n: usize,
    alpha: T,
    levels: Vec<T>,
    weights: Vec<T>,
    deficits: Vec<T>,
    rejected: Vec<bool>,
}

impl<T: Scalar> GraphState<T> {
    pub fn from_graph(g: &HypothesisGraph<T>) -> Self {
        let n = g.size();
        let mut s = Self::empty(n, g.alpha);
        s.levels.copy_from_slice(&g.initial_levels);
        for i in 0..n {
            for j in 0..n {
                s.weights[i * n + j] = g.transitions[i][j];
            }
            s.deficits[i] = (T::one() - g.snapped_row_sum(i)).max(T::zero());
        }
        s
    }

    /// All-zero state with `n` live nodes and deficit one on every row.
    pub(crate) fn empty(n: usize, alpha: T) -> Self {
        Self {
            n,
            alpha,
            levels: vec![T::zero(); n],
            weights: vec![T::zero(); n * n],
            deficits: vec![T::one(); n],
            rejected: vec![false; n],
        }
    }

    /// Clears the state for reuse with `n` nodes without reallocating when
    /// capacity allows.
    pub(crate) fn reset(&mut self, n: usize, alpha: T) {
        self.n = n;
        self.alpha = alpha;
        self.levels.clear();
        self.levels.resize(n, T::zero());
        self.weights.clear();
        self.weights.resize(n * n, T::zero());
        self.deficits.clear();
        self.deficits.resize(n, T::one());
        self.rejected.clear();
        self.rejected.resize(n, false);
    }

    pub(crate) fn set_level(&mut self, i: usize, level: T) {
        self.levels[i] = level;
    }

    pub(crate) fn set_weight(&mut self, from: usize, to: usize, w: T) {
        self.weights[from * self.n + to] = w;
    }

    pub(crate) fn set_deficit(&mut self, i: usize, d: T) {
        self.deficits[i] = d;
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn level(&self, i: usize) -> T {
        self.levels[i]
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn weight(&self, from: usize, to: usize) -> T {
        self.weights[from * self.n + to]
    }

    pub fn deficit(&self, i: usize) -> T {
        self.deficits[i]
    }

    pub fn is_rejected(&self, i: usize) -> bool {
        self.rejected[i]
    }

    pub fn rejected(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.rejected[i]).collect()
    }

    pub fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| !self.rejected[i])
    }

    /// Sum of the levels held by live nodes.
    pub fn total_level(&self) -> T {
        self.live().fold(T::zero(), |acc, i| acc + self.levels[i])
    }

    /// Returns the state after rejecting node `i`.
    pub fn reject_node(&self, i: usize) -> Result<Self> {
        let mut next = self.clone();
        next.reject_in_place(i)?;
        Ok(next)
    }

    /// Rejects node `i`: its level moves along its outgoing weights and the
    /// remaining weights are updated by
    /// `g_jl <- (g_jl + g_ji g_il) / (1 - g_ji g_ij)`, or zero when
    /// `g_ji g_ij = 1`.
    pub fn reject_in_place(&mut self, i: usize) -> Result<()> {
        let n = self.n;
        if i >= n {
            return Err(Error::NodeOutOfRange { index: i, size: n });
        }
        if self.rejected[i] {
            return Err(Error::AlreadyRejected(i));
        }

        let level_i = self.levels[i];
        for j in 0..n {
            if j != i && !self.rejected[j] {
                self.levels[j] = self.levels[j] + level_i * self.weights[i * n + j];
            }
        }

        let deficit_i = self.deficits[i];
        for j in 0..n {
            if j == i || self.rejected[j] {
                continue;
            }
            let g_ji = self.weights[j * n + i];
            // 1 - g_ji and 1 - g_ij as sums over the remaining entries
            let mut comp_ji = self.deficits[j];
            let mut comp_ij = deficit_i;
            for l in 0..n {
                if l == i || l == j || self.rejected[l] {
                    continue;
                }
                comp_ji = comp_ji + self.weights[j * n + l];
                comp_ij = comp_ij + self.weights[i * n + l];
            }
            let denom = comp_ji + g_ji * comp_ij;
            if denom > T::zero() {
                for l in 0..n {
                    if l == i || l == j || self.rejected[l] {
                        continue;
                    }
                    let g_jl = self.weights[j * n + l];
                    let g_il = self.weights[i * n + l];
                    self.weights[j * n + l] = (g_jl + g_ji * g_il) / denom;
                }
                self.deficits[j] = (self.deficits[j] + g_ji * deficit_i) / denom;
            } else {
                for l in 0..n {
                    if l != j {
                        self.weights[j * n + l] = T::zero();
                    }
                }
                self.deficits[j] = T::one();
            }
        }

        for l in 0..n {
            self.weights[i * n + l] = T::zero();
            self.weights[l * n + i] = T::zero();
        }
        self.levels[i] = T::zero();
        self.rejected[i] = true;
        Ok(())
    }
}

/// Outcome of [`run_graphical_test`].
#[derive(Clone, Debug, PartialEq)]
pub struct RejectionResult<T> {
    /// Rejected node indices in the order they were rejected.
    pub rejected: Vec<usize>,
    /// Final local level per node; zero for rejected nodes.
    pub final_levels: Vec<T>,
}

impl<T> RejectionResult<T> {
    pub fn is_rejected(&self, j: usize) -> bool {
        self.rejected.contains(&j)
    }

    pub fn rejected_sorted(&self) -> Vec<usize> {
        let mut r = self.rejected.clone();
        r.sort_unstable();
        r
    }
}

fn rejectable<T: Scalar>(p: T, level: T) -> bool {
    if level > T::zero() {
        p <= level
    } else {
        p == T::zero()
    }
}

/// Runs the sequentially rejective graphical test. Nodes are scanned in
/// index order and the scan restarts after every rejection.
pub fn run_graphical_test<T: Scalar>(
    g: &HypothesisGraph<T>,
    pvalues: &[T],
) -> Result<RejectionResult<T>> {
    let report = g.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidGraph(v.to_string()));
    }
    if pvalues.len() != g.size() {
        return Err(Error::Dimension {
            expected: g.size(),
            got: pvalues.len(),
        });
    }
    if let Some(&p) = pvalues
        .iter()
        .find(|&&p| !(p >= T::zero() && p <= T::one()))
    {
        return Err(Error::Probability {
            value: p.as_f64(),
            range: "[0, 1]",
        });
    }
    let mut state = GraphState::from_graph(g);
    let mut rejected = Vec::new();
    'scan: loop {
        for j in 0..g.size() {
            if !state.is_rejected(j) && rejectable(pvalues[j], state.level(j)) {
                state.reject_in_place(j)?;
                rejected.push(j);
                continue 'scan;
            }
        }
        break;
    }
    Ok(RejectionResult {
        rejected,
        final_levels: state.levels().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn holm2() -> HypothesisGraph<f64> {
        HypothesisGraph::holm(2, 0.025).unwrap()
    }

    /// Two-dose version of the efficacy/safety graph: E1, E2, S1, S2.
    fn efficacy_safety() -> HypothesisGraph<f64> {
        let a = 0.025 / 3.0;
        let t = vec![
            vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.5, 0.5, 0.0, 0.0, 0.0],
            vec![0.5, 0.0, 0.5, 0.0, 0.0, 0.0],
            vec![0.5, 0.5, 0.0, 0.0, 0.0, 0.0],
        ];
        let labels = ["E1", "E2", "E3", "S1", "S2", "S3"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        HypothesisGraph::new(labels, 0.025, vec![a, a, a, 0.0, 0.0, 0.0], t).unwrap()
    }

    #[test]
    fn holm2_is_valid_and_complete() {
        let r = holm2().validate();
        assert!(r.is_valid());
        assert!(r.complete);
    }

    #[test]
    fn nonzero_diagonal_is_reported() {
        let g = HypothesisGraph::unlabeled(
            0.025,
            vec![0.0125, 0.0125],
            vec![vec![0.5, 0.5], vec![1.0, 0.0]],
        )
        .unwrap();
        let r = g.validate();
        assert!(!r.is_valid());
        assert!(r
            .violations
            .contains(&Violation::NonZeroDiagonal { node: 0, value: 0.5 }));
    }

    #[test]
    fn fallback3_is_valid_but_incomplete() {
        let g = HypothesisGraph::fallback(0.025, vec![0.01, 0.01, 0.005]).unwrap();
        let r = g.validate();
        assert!(r.is_valid());
        assert!(!r.complete);
        assert_eq!(r.incomplete_rows, vec![2]);
    }

    #[test]
    fn level_sum_and_row_sum_violations() {
        let g = HypothesisGraph::unlabeled(
            0.025,
            vec![0.02, 0.02],
            vec![vec![0.0, 1.2], vec![1.0, 0.0]],
        )
        .unwrap();
        let r = g.validate();
        assert_eq!(r.violations.len(), 3, "{r}");
        assert!(!r.complete);
    }

    #[test]
    fn shape_errors() {
        assert!(HypothesisGraph::unlabeled(0.025, vec![0.025], vec![vec![0.0, 0.0]]).is_err());
        assert!(HypothesisGraph::<f64>::unlabeled(0.025, vec![], vec![]).is_err());
    }

    #[test]
    fn holm2_reject_first_node() {
        let s = GraphState::from_graph(&holm2()).reject_node(0).unwrap();
        assert!((s.level(1) - 0.025).abs() < 1e-15);
        assert_eq!(s.level(0), 0.0);
        assert!(s.is_rejected(0));
    }

    #[test]
    fn efficacy_safety_reject_e1_moves_full_level_to_s1() {
        let s = GraphState::from_graph(&efficacy_safety()).reject_node(0).unwrap();
        assert!((s.level(3) - 0.025 / 3.0).abs() < 1e-15);
        // S1 now passes half to E2 and half to E3
        assert!((s.weight(3, 1) - 0.5).abs() < 1e-15);
        assert!((s.weight(3, 2) - 0.5).abs() < 1e-15);
        // S2 had half towards E1, which redirects through E1 -> S1
        assert!((s.weight(4, 3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_node_loop_loses_level_on_second_rejection() {
        let g = holm2();
        let s = GraphState::from_graph(&g).reject_node(0).unwrap();
        assert!((s.total_level() - 0.025).abs() < 1e-15);
        // g_12 g_21 = 1 put row 2 into the zero branch
        assert_eq!(s.weight(1, 0), 0.0);
        assert_eq!(s.deficit(1), 1.0);
        let s = s.reject_node(1).unwrap();
        assert_eq!(s.total_level(), 0.0);
    }

    #[test]
    fn reject_errors() {
        let s = GraphState::from_graph(&holm2());
        assert_eq!(
            s.reject_node(5),
            Err(Error::NodeOutOfRange { index: 5, size: 2 })
        );
        let s = s.reject_node(0).unwrap();
        assert_eq!(s.reject_node(0), Err(Error::AlreadyRejected(0)));
    }

    #[test]
    fn holm2_tests() {
        let r = run_graphical_test(&holm2(), &[0.001, 0.02]).unwrap();
        assert_eq!(r.rejected_sorted(), vec![0, 1]);
        let r = run_graphical_test(&holm2(), &[0.02, 0.02]).unwrap();
        assert!(r.rejected.is_empty());
        assert_eq!(r.final_levels, vec![0.0125, 0.0125]);
    }

    #[test]
    fn efficacy_safety_single_efficacy_rejection() {
        let p = [0.001, 1.0, 1.0, 1.0, 1.0, 1.0];
        let r = run_graphical_test(&efficacy_safety(), &p).unwrap();
        assert_eq!(r.rejected, vec![0]);
        assert!((r.final_levels[3] - 0.025 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_level_nodes_reject_only_zero_pvalues() {
        let p = [1.0, 1.0, 1.0, 0.0, 0.0, 1e-12];
        let r = run_graphical_test(&efficacy_safety(), &p).unwrap();
        assert_eq!(r.rejected_sorted(), vec![3, 4]);
    }

    #[test]
    fn invalid_inputs_to_test() {
        let bad = HypothesisGraph::unlabeled(0.025, vec![0.02, 0.02], vec![vec![0.0, 1.0], vec![1.0, 0.0]])
            .unwrap();
        assert!(matches!(
            run_graphical_test(&bad, &[0.1, 0.1]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(run_graphical_test(&holm2(), &[0.1]).is_err());
        assert!(run_graphical_test(&holm2(), &[0.1, 1.5]).is_err());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let g = holm2();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"initial_levels\""));
        let back: HypothesisGraph<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"labels":["a"],"alpha":0.025,"initial_levels":[0.025,0.0],"transitions":[[0.0]]}"#;
        assert!(serde_json::from_str::<HypothesisGraph<f64>>(bad).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let g = HypothesisGraph::<f32>::holm(3, 0.025).unwrap();
        assert!(g.validate().is_valid());
        let r = run_graphical_test(&g, &[0.001f32, 0.01, 0.02]).unwrap();
        assert_eq!(r.rejected_sorted(), vec![0, 1, 2]);
    }
}
