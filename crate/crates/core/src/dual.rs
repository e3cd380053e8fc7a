//! The dual graph `G^mu` and the local levels `alpha^mu` of the intersection
//! hypothesis `H^mu`.
//!
//! For `mu_j <= 0` (including `-inf`) node `H_j` becomes `H_j^{mu_j}` and
//! loses its outgoing arrows. For `mu_j > 0` a level-0 node `H_j^{mu_j}` is
//! added, fed by an arrow of weight `W_j = 1 - (1 - Q_j(mu_j)) sum_i g_ji`,
//! and the remaining arrows of `H_j` are scaled by `1 - Q_j(mu_j)`. Rejecting
//! every original `H_j` with `mu_j > 0` leaves `alpha_j^mu` on the shifted
//! nodes.

use crate::error::{Error, Result};
use crate::graph::{GraphState, HypothesisGraph};
use crate::scalar::Scalar;
use crate::weights::InformationWeights;

/// A materialized dual graph together with the node bookkeeping linking it
/// back to the base hypotheses.
#[derive(Clone, Debug, PartialEq)]
pub struct DualGraph<T: Scalar> {
    pub graph: HypothesisGraph<T>,
    /// Node holding `H_j^{mu_j}` for each base hypothesis `j`.
    pub shifted_nodes: Vec<usize>,
    /// Node holding the original `H_j`, present only when `mu_j > 0`.
    pub original_nodes: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalLevels<T> {
    pub alpha_mu: Vec<T>,
    pub nu: Vec<T>,
}

impl<T: Scalar> LocalLevels<T> {
    pub fn zeros(m: usize) -> Self {
        Self {
            alpha_mu: vec![T::zero(); m],
            nu: vec![T::zero(); m],
        }
    }
}

/// Base graph data needed repeatedly by the dual construction.
#[derive(Clone, Debug)]
pub(crate) struct PreparedGraph<T: Scalar> {
    pub m: usize,
    pub alpha: T,
    pub levels: Vec<T>,
    pub weights: Vec<Vec<T>>,
    pub row_sums: Vec<T>,
    pub deficits: Vec<T>,
}

impl<T: Scalar> PreparedGraph<T> {
    pub fn new(g: &HypothesisGraph<T>) -> Result<Self> {
        let report = g.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidGraph(v.to_string()));
        }
        let m = g.size();
        let row_sums: Vec<T> = (0..m).map(|i| g.snapped_row_sum(i).min(T::one())).collect();
        let deficits = row_sums.iter().map(|&r| T::one() - r).collect();
        Ok(Self {
            m,
            alpha: g.alpha(),
            levels: g.initial_levels().to_vec(),
            weights: g.transitions().to_vec(),
            row_sums,
            deficits,
        })
    }

    /// Weight of the arrow `H_j -> H_j^{mu}` as a function of `mu`; one for
    /// `mu <= 0`.
    pub fn self_weight(&self, w: &InformationWeights<T>, j: usize, mu: T) -> T {
        if !(mu > T::zero()) {
            return T::one();
        }
        (self.deficits[j] + self.row_sums[j] * w.value(j, mu)).min(T::one())
    }
}

fn check_mu<T: Scalar>(m: usize, mu: &[T]) -> Result<()> {
    if mu.len() != m {
        return Err(Error::Dimension {
            expected: m,
            got: mu.len(),
        });
    }
    if mu.iter().any(|x| x.is_nan() || *x == T::infinity()) {
        return Err(Error::NonFinite("mu must be finite or -inf".into()));
    }
    Ok(())
}

fn shifted_label<T: Scalar>(label: &str, mu: T) -> String {
    if mu == T::neg_infinity() {
        format!("{label}^-inf")
    } else {
        format!("{label}^{mu}")
    }
}

/// Builds `G^mu`. Nodes `0..m` hold `H_j` or, for `mu_j <= 0`, `H_j^{mu_j}`;
/// the added shifted nodes follow in hypothesis order.
pub fn build_dual_graph<T: Scalar>(
    g: &HypothesisGraph<T>,
    mu: &[T],
    w: &InformationWeights<T>,
) -> Result<DualGraph<T>> {
    let base = PreparedGraph::new(g)?;
    let m = base.m;
    check_mu(m, mu)?;
    w.validate(m)?;

    let mut shifted_nodes = vec![0; m];
    let mut original_nodes = vec![None; m];
    let mut labels: Vec<String> = Vec::with_capacity(2 * m);
    for j in 0..m {
        if mu[j] > T::zero() {
            labels.push(g.labels()[j].clone());
            original_nodes[j] = Some(j);
        } else {
            labels.push(shifted_label(&g.labels()[j], mu[j]));
            shifted_nodes[j] = j;
        }
    }
    for j in 0..m {
        if mu[j] > T::zero() {
            shifted_nodes[j] = labels.len();
            labels.push(shifted_label(&g.labels()[j], mu[j]));
        }
    }

    let n = labels.len();
    let mut levels = vec![T::zero(); n];
    levels[..m].copy_from_slice(&base.levels);
    let mut transitions = vec![vec![T::zero(); n]; n];
    for j in 0..m {
        if !(mu[j] > T::zero()) {
            continue;
        }
        let keep = w.complement(j, mu[j]);
        for i in 0..m {
            transitions[j][i] = base.weights[j][i] * keep;
        }
        transitions[j][shifted_nodes[j]] = base.self_weight(w, j, mu[j]);
    }
    let graph = HypothesisGraph::new(labels, base.alpha, levels, transitions)?;
    Ok(DualGraph {
        graph,
        shifted_nodes,
        original_nodes,
    })
}

/// Computes `alpha^mu` and `nu(mu)` by rejecting the original hypotheses of
/// the materialized dual graph.
pub fn local_levels<T: Scalar>(
    g: &HypothesisGraph<T>,
    mu: &[T],
    w: &InformationWeights<T>,
) -> Result<LocalLevels<T>> {
    let dual = build_dual_graph(g, mu, w)?;
    let mut state = GraphState::from_graph(&dual.graph);
    for node in dual.original_nodes.iter().flatten() {
        state.reject_in_place(*node)?;
    }
    let base = PreparedGraph::new(g)?;
    let mut out = LocalLevels::zeros(g.size());
    for j in 0..g.size() {
        let a = state.level(dual.shifted_nodes[j]);
        out.alpha_mu[j] = a;
        out.nu[j] = a / (base.alpha * base.self_weight(w, j, mu[j]));
    }
    Ok(out)
}

/// Allocation-free evaluator of `alpha^mu` for repeated calls on one graph.
///
/// Uses a fixed layout of `2m` nodes (shifted node of `j` at `m + j`) and
/// writes the dual weights straight into a reusable [`GraphState`]. Rows of
/// rescaled originals are complete by construction, so their deficit is
/// exactly zero.
#[derive(Clone, Debug)]
pub(crate) struct DualEvaluator<T: Scalar> {
    pub base: PreparedGraph<T>,
    state: GraphState<T>,
}

impl<T: Scalar> DualEvaluator<T> {
    pub fn new(g: &HypothesisGraph<T>) -> Result<Self> {
        let base = PreparedGraph::new(g)?;
        let state = GraphState::empty(2 * base.m, base.alpha);
        Ok(Self { base, state })
    }

    pub fn evaluate(&mut self, mu: &[T], w: &InformationWeights<T>, out: &mut LocalLevels<T>) {
        let m = self.base.m;
        let s = &mut self.state;
        s.reset(2 * m, self.base.alpha);
        for j in 0..m {
            s.set_level(j, self.base.levels[j]);
            if !(mu[j] > T::zero()) {
                continue;
            }
            let keep = w.complement(j, mu[j]);
            for i in 0..m {
                let gji = self.base.weights[j][i];
                if gji != T::zero() {
                    s.set_weight(j, i, gji * keep);
                }
            }
            s.set_weight(j, m + j, self.base.self_weight(w, j, mu[j]));
            s.set_deficit(j, T::zero());
        }
        for j in 0..m {
            if mu[j] > T::zero() {
                s.reject_in_place(j).expect("original node is live");
            }
        }
        for j in 0..m {
            let node = if mu[j] > T::zero() { m + j } else { j };
            let a = s.level(node);
            out.alpha_mu[j] = a;
            out.nu[j] = a / (self.base.alpha * self.base.self_weight(w, j, mu[j]));
        }
    }
}
