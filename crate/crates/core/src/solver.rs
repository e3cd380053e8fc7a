//! Informative lower confidence bounds by fixed-point iteration on the dual
//! graph levels, plus the adjusted p-value of `H^mu` and a grid-projection
//! oracle.

use crate::dual::{local_levels, DualEvaluator, LocalLevels, PreparedGraph};
use crate::error::{Error, Result};
use crate::graph::HypothesisGraph;
use crate::pvalue::{MarginalModel, ShiftSpec};
use crate::scalar::Scalar;
use crate::weights::InformationWeights;

/// Lower bounds `L_j` of the one-sided intervals `(L_j, inf)`; `-inf` marks
/// a non-informative bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsVector<T> {
    pub lower: Vec<T>,
}

impl<T: Scalar> BoundsVector<T> {
    pub fn new(lower: Vec<T>) -> Self {
        Self { lower }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn is_finite(&self, j: usize) -> bool {
        self.lower[j].is_finite()
    }

    /// Bounds on the original scale of shifted (non-inferiority) hypotheses.
    pub fn to_original(&self, shifts: &ShiftSpec<T>) -> Self {
        Self::new(shifts.to_original(&self.lower))
    }

    pub fn rejected(&self) -> Vec<usize> {
        induced_test(self)
    }
}

/// Hypotheses rejected by the bounds: `{j : L_j >= 0}`.
pub fn induced_test<T: Scalar>(b: &BoundsVector<T>) -> Vec<usize> {
    (0..b.len()).filter(|&j| b.lower[j] >= T::zero()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace<T> {
    /// `mu^(0), mu^(1), ...`; only filled when requested in the options.
    pub iterates: Vec<Vec<T>>,
    pub converged: bool,
    pub iterations: usize,
    pub step_norm: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions<T> {
    /// Stop once the Euclidean step over finite coordinates is below this.
    pub eps: T,
    pub max_iter: usize,
    /// Absolute tolerance of the bisection on the positive branch.
    pub root_tol: T,
    pub record_iterates: bool,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            eps: T::lit(1e-8),
            max_iter: 10_000,
            root_tol: T::lit(1e-10),
            record_iterates: false,
        }
    }
}

impl<T: Scalar> SolverOptions<T> {
    fn check(&self) -> Result<()> {
        if !(self.eps > T::zero() && self.root_tol > T::zero()) {
            return Err(Error::InvalidArgument(
                "eps and root tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Solves `p(x) = c W(x)` for the largest relevant root, where `W(x)` is the
/// self weight of hypothesis `j` (one for `x <= 0`).
///
/// `c = 0` gives `-inf`. If `p(0) > c` the root is negative and available in
/// closed form; otherwise `p - c W` is bisected on `[0, hi]`.
pub(crate) fn solve_level_equation<T: Scalar, M: MarginalModel<T>, F: Fn(T) -> T>(
    model: &M,
    c: T,
    weight: F,
    tol: T,
    index: usize,
) -> Result<T> {
    if !(c > T::zero()) {
        return Ok(T::neg_infinity());
    }
    let p0 = model.pvalue(T::zero());
    if p0 > c {
        return model.inverse_pvalue(c);
    }
    let g = |x: T| model.pvalue(x) - c * weight(x);
    let mut lo = T::zero();
    let mut hi = if c < T::one() {
        model.inverse_pvalue(c)?.max(T::zero())
    } else {
        T::one()
    };
    let mut expansions = 0;
    loop {
        let v = g(hi);
        if v == T::zero() {
            return Ok(hi);
        }
        if v > T::zero() {
            break;
        }
        if expansions == 200 || !hi.is_finite() {
            return Err(Error::Bracket {
                index,
                reason: format!("p - c W stays non-positive up to {hi}"),
            });
        }
        lo = hi;
        hi = hi + hi + T::one();
        expansions += 1;
    }
    while hi - lo > tol {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

fn check_models<T: Scalar, M>(g: &HypothesisGraph<T>, models: &[M]) -> Result<()> {
    if models.len() != g.size() {
        return Err(Error::Dimension {
            expected: g.size(),
            got: models.len(),
        });
    }
    Ok(())
}

/// `mu_j^(0) = min(0, p_j^{-1}(alpha_j))`.
pub fn starting_value<T: Scalar, M: MarginalModel<T>>(
    g: &HypothesisGraph<T>,
    models: &[M],
) -> Result<Vec<T>> {
    check_models(g, models)?;
    g.initial_levels()
        .iter()
        .zip(models)
        .map(|(&a, m)| Ok(m.inverse_pvalue(a)?.min(T::zero())))
        .collect()
}

/// Fixed-point solver bound to one graph and one set of information
/// weights. Keeps its workspace between calls, so repeated solves (one per
/// simulated data set) do not reallocate.
#[derive(Clone, Debug)]
pub struct BoundsSolver<T: Scalar> {
    ev: DualEvaluator<T>,
    weights: InformationWeights<T>,
    opts: SolverOptions<T>,
    initial_levels: Vec<T>,
    levels: LocalLevels<T>,
    mu: Vec<T>,
    next: Vec<T>,
}

impl<T: Scalar> BoundsSolver<T> {
    pub fn new(
        g: &HypothesisGraph<T>,
        weights: InformationWeights<T>,
        opts: SolverOptions<T>,
    ) -> Result<Self> {
        opts.check()?;
        weights.validate(g.size())?;
        let m = g.size();
        Ok(Self {
            ev: DualEvaluator::new(g)?,
            weights,
            opts,
            initial_levels: g.initial_levels().to_vec(),
            levels: LocalLevels::zeros(m),
            mu: vec![T::zero(); m],
            next: vec![T::zero(); m],
        })
    }

    pub fn size(&self) -> usize {
        self.initial_levels.len()
    }

    pub fn options(&self) -> &SolverOptions<T> {
        &self.opts
    }

    fn check<M>(&self, models: &[M]) -> Result<()> {
        if models.len() != self.size() {
            return Err(Error::Dimension {
                expected: self.size(),
                got: models.len(),
            });
        }
        Ok(())
    }

    /// One iteration from `mu` into `next`.
    fn step_into<M: MarginalModel<T>>(
        &mut self,
        models: &[M],
        mu: &[T],
        next: &mut [T],
    ) -> Result<()> {
        if mu.len() != self.size() {
            return Err(Error::Dimension {
                expected: self.size(),
                got: mu.len(),
            });
        }
        if mu.iter().any(|x| x.is_nan() || *x == T::infinity()) {
            return Err(Error::NonFinite("iterate must be finite or -inf".into()));
        }
        self.ev.evaluate(mu, &self.weights, &mut self.levels);
        let base = &self.ev.base;
        let weights = &self.weights;
        for j in 0..mu.len() {
            let c = self.levels.nu[j] * base.alpha;
            next[j] = solve_level_equation(
                &models[j],
                c,
                |x| base.self_weight(weights, j, x),
                self.opts.root_tol,
                j,
            )?;
        }
        Ok(())
    }

    pub fn step<M: MarginalModel<T>>(&mut self, models: &[M], mu: &[T]) -> Result<Vec<T>> {
        self.check(models)?;
        let mut next = vec![T::zero(); mu.len()];
        self.step_into(models, mu, &mut next)?;
        Ok(next)
    }

    /// Bounds from the default start `min(0, p_j^{-1}(alpha_j))`.
    pub fn solve<M: MarginalModel<T>>(
        &mut self,
        models: &[M],
    ) -> Result<(BoundsVector<T>, IterationTrace<T>)> {
        self.check(models)?;
        for j in 0..self.size() {
            self.mu[j] = models[j].inverse_pvalue(self.initial_levels[j])?.min(T::zero());
        }
        self.iterate(models)
    }

    /// Bounds from a caller supplied start, which must satisfy
    /// [`satisfies_start_condition`] for the limit to be the bound vector.
    pub fn solve_from<M: MarginalModel<T>>(
        &mut self,
        models: &[M],
        start: &[T],
    ) -> Result<(BoundsVector<T>, IterationTrace<T>)> {
        self.check(models)?;
        if start.len() != self.size() {
            return Err(Error::Dimension {
                expected: self.size(),
                got: start.len(),
            });
        }
        self.mu.copy_from_slice(start);
        self.iterate(models)
    }

    fn iterate<M: MarginalModel<T>>(
        &mut self,
        models: &[M],
    ) -> Result<(BoundsVector<T>, IterationTrace<T>)> {
        let mut mu = std::mem::take(&mut self.mu);
        let mut next = std::mem::take(&mut self.next);
        let mut trace = IterationTrace {
            iterates: Vec::new(),
            converged: false,
            iterations: 0,
            step_norm: T::infinity(),
        };
        if self.opts.record_iterates {
            trace.iterates.push(mu.clone());
        }
        let mut outcome = Ok(());
        while trace.iterations < self.opts.max_iter {
            if let Err(e) = self.step_into(models, &mu, &mut next) {
                outcome = Err(e);
                break;
            }
            trace.iterations += 1;
            let (norm, revived) = step_norm(&mu, &next);
            std::mem::swap(&mut mu, &mut next);
            if self.opts.record_iterates {
                trace.iterates.push(mu.clone());
            }
            trace.step_norm = norm;
            if !revived && norm < self.opts.eps {
                trace.converged = true;
                break;
            }
        }
        let bounds = BoundsVector::new(mu.clone());
        self.mu = mu;
        self.next = next;
        outcome.map(|_| (bounds, trace))
    }
}

/// One step of the fixed-point iteration: for each `j` solves
/// `p_j(x) / W_j(x) = nu_j(mu_k) alpha`.
pub fn iterate_step<T: Scalar, M: MarginalModel<T>>(
    g: &HypothesisGraph<T>,
    models: &[M],
    w: &InformationWeights<T>,
    mu_k: &[T],
) -> Result<Vec<T>> {
    BoundsSolver::new(g, w.clone(), SolverOptions::default())?.step(models, mu_k)
}

/// Step length over coordinates finite in both iterates, and whether any
/// coordinate left `-inf`.
fn step_norm<T: Scalar>(prev: &[T], next: &[T]) -> (T, bool) {
    let mut sq = T::zero();
    let mut revived = false;
    for (&a, &b) in prev.iter().zip(next) {
        match (a.is_finite(), b.is_finite()) {
            (true, true) => sq = sq + (b - a) * (b - a),
            (false, true) => revived = true,
            _ => {}
        }
    }
    (sq.sqrt(), revived)
}

/// Runs the iteration from the default starting value.
pub fn compute_bounds<T: Scalar, M: MarginalModel<T>>(
    g: &HypothesisGraph<T>,
    models: &[M],
    w: &InformationWeights<T>,
    opts: &SolverOptions<T>,
) -> Result<(BoundsVector<T>, IterationTrace<T>)> {
    BoundsSolver::new(g, w.clone(), *opts)?.solve(models)
}

/// Runs the iteration from a caller supplied start.
pub fn compute_bounds_from<T: Scalar, M: MarginalModel<T>>(
    g: &HypothesisGraph<T>,
    models: &[M],
    w: &InformationWeights<T>,
    start: &[T],
    opts: &SolverOptions<T>,
) -> Result<(BoundsVector<T>, IterationTrace<T>)> {
    BoundsSolver::new(g, w.clone(), *opts)?.solve_from(models, start)
}

/// Whether `mu` is admissible as a start: `p_j(mu_j) <= alpha_j^mu` for all
/// `j`, i.e. `H^mu` is rejected by every coordinate. Equality is judged up
/// to a relative rounding slack.
pub fn satisfies_start_condition<T: Scalar, M: MarginalModel<T>>(
    g: &HypothesisGraph<T>,
    models: &[M],
    w: &InformationWeights<T>,
    mu: &[T],
) -> Result<bool> {
    check_models(g, models)?;
    let l = local_levels(g, mu, w)?;
    let slack = T::one() + T::structural_tolerance();
    Ok((0..mu.len()).all(|j| models[j].pvalue(mu[j]) <= l.alpha_mu[j] * slack))
}

/// Adjusted p-value of the intersection hypothesis `H^mu`:
/// `min_{j : w_j > 0} p_j(mu_j) / w_j` with `w_j = alpha_j^mu / alpha`,
/// capped at one.
pub fn adjusted_p<T: Scalar, M: MarginalModel<T>>(
    g: &HypothesisGraph<T>,
    models: &[M],
    w: &InformationWeights<T>,
    mu: &[T],
) -> Result<T> {
    check_models(g, models)?;
    let l = local_levels(g, mu, w)?;
    let alpha = g.alpha();
    let mut best = T::one();
    for j in 0..mu.len() {
        let wj = l.alpha_mu[j] / alpha;
        if wj > T::zero() {
            best = best.min(models[j].pvalue(mu[j]) / wj);
        }
    }
    Ok(best)
}

/// Evaluation grid of the projection oracle: every coordinate ranges over
/// `[lo, hi]`, resolved to `step` in the final refinement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub lo: T,
    pub hi: T,
    pub step: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridBounds<T> {
    pub bounds: BoundsVector<T>,
    /// The minimum sat on the lower edge of the search box, so the grid did
    /// not bracket the bound.
    pub at_edge: Vec<bool>,
}

/// Projection bounds `L_j = min { mu_j : mu in C }` on a grid, where `C` is
/// the set of `mu` whose intersection hypothesis is not rejected, i.e.
/// `p_j(mu_j) > alpha_j^mu` for every `j`.
///
/// A full coarse grid locates the componentwise smallest region of `C`
/// (the point minimizing the coordinate sum); local boxes then refine it by
/// a factor of five per level down to `step`. Levels come from the
/// materialized dual graph. Limited to `m <= 3`.
pub fn brute_force_bounds<T: Scalar, M: MarginalModel<T>>(
    g: &HypothesisGraph<T>,
    models: &[M],
    w: &InformationWeights<T>,
    grid: &GridSpec<T>,
) -> Result<GridBounds<T>> {
    check_models(g, models)?;
    w.validate(g.size())?;
    PreparedGraph::new(g)?;
    let m = g.size();
    if m > 3 {
        return Err(Error::InvalidArgument(format!(
            "grid oracle limited to 3 hypotheses, got {m}"
        )));
    }
    if !(grid.lo < grid.hi && grid.step > T::zero()) {
        return Err(Error::InvalidArgument("grid needs lo < hi and step > 0".into()));
    }

    let in_region = |mu: &[T]| -> Result<bool> {
        let l = local_levels(g, mu, w)?;
        Ok((0..m).all(|j| {
            let a = l.alpha_mu[j];
            !(a > T::zero() && models[j].pvalue(mu[j]) <= a)
        }))
    };

    // Coarse pass over the full box.
    let mut step = ((grid.hi - grid.lo) / T::lit(40.0)).max(grid.step);
    let n = ((grid.hi - grid.lo) / step).floor().to_usize().unwrap_or(0);
    let axis: Vec<T> = (0..=n).map(|k| grid.lo + step * T::lit(k as f64)).collect();
    let mut center: Option<Vec<T>> = None;
    let mut best = T::infinity();
    let mut idx = vec![0usize; m];
    let mut mu = vec![T::zero(); m];
    loop {
        for k in 0..m {
            mu[k] = axis[idx[k]];
        }
        if in_region(&mu)? {
            let s = mu.iter().fold(T::zero(), |a, &b| a + b);
            if s < best {
                best = s;
                center = Some(mu.clone());
            }
        }
        if !advance(&mut idx, axis.len()) {
            break;
        }
    }
    let mut center = center.ok_or_else(|| {
        Error::InvalidArgument("no grid point outside the rejection region".into())
    })?;

    const HALF: i64 = 10;
    let mut final_points: Vec<Vec<T>> = Vec::new();
    let mut last_level = step <= grid.step;
    let mut fine = if last_level { step } else { (step / T::lit(5.0)).max(grid.step) };
    let mut at_edge = vec![false; m];
    loop {
        let mut recenters = 0;
        loop {
            let mut pts = Vec::new();
            let mut idx = vec![0usize; m];
            let width = (2 * HALF + 1) as usize;
            loop {
                for k in 0..m {
                    mu[k] = center[k] + fine * T::lit(idx[k] as f64 - HALF as f64);
                }
                if mu.iter().all(|&x| x >= grid.lo && x <= grid.hi) && in_region(&mu)? {
                    pts.push(mu.clone());
                }
                if !advance(&mut idx, width) {
                    break;
                }
            }
            let arg = pts
                .iter()
                .min_by(|a, b| {
                    let sa = a.iter().fold(T::zero(), |s, &x| s + x);
                    let sb = b.iter().fold(T::zero(), |s, &x| s + x);
                    sa.partial_cmp(&sb).unwrap()
                })
                .cloned();
            let Some(arg) = arg else {
                return Err(Error::InvalidArgument(
                    "refinement box lost the confidence region".into(),
                ));
            };
            let lower_edge: Vec<bool> = (0..m)
                .map(|k| {
                    let edge = center[k] - fine * T::lit(HALF as f64);
                    arg[k] <= edge + fine / T::lit(2.0)
                })
                .collect();
            let touches = (0..m).any(|k| lower_edge[k] && arg[k] - fine >= grid.lo);
            if touches && recenters < 50 {
                center = arg;
                recenters += 1;
                continue;
            }
            if last_level {
                at_edge = lower_edge;
                final_points = pts;
            } else {
                center = arg;
            }
            break;
        }
        if last_level {
            break;
        }
        step = fine;
        fine = (step / T::lit(5.0)).max(grid.step);
        last_level = fine <= grid.step;
    }

    let lower = (0..m)
        .map(|j| {
            final_points
                .iter()
                .map(|p| p[j])
                .fold(T::infinity(), |a, b| a.min(b))
        })
        .collect();
    Ok(GridBounds {
        bounds: BoundsVector::new(lower),
        at_edge,
    })
}

/// Odometer increment over `[0, width)^len`; false after the last index.
fn advance(idx: &mut [usize], width: usize) -> bool {
    for i in idx.iter_mut() {
        *i += 1;
        if *i < width {
            return true;
        }
        *i = 0;
    }
    false
}
