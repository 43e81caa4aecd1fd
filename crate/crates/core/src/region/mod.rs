//! Capacity-region queries, each reduced to one exact LP over the split
//! variables `λ_i^(j)` (the share of file `i` requests sent to recovering set `j`).
//!
//! The constraint system is always the same: per-node load at most `μ`,
//! optional per-file sum rows fixing `λ_i`, and non-negativity of every share.

mod fm;
mod trace;

pub use fm::{project_fm, FM_MAX_VARIABLES};
pub use trace::{trace_boundary_2d, trace_slice_2d};

use crate::code_model::CodeSpec;
use crate::error::{Error, Result};
use crate::exactlp::{lp_feasible, lp_solve, Constraint, LpProblem, LpStatus, Relation};
use crate::recovery::{enumerate_recovery_sets, RecoverySetIndex};
use crate::scalar::Scalar;

/// A code, its recovering sets and the per-node capacity `μ`.
///
/// LP columns are ordered by recovering-set size, then file, then set index.
/// Under Bland's rule this lets small sets enter the basis first, which cuts
/// pivot counts by an order of magnitude on codes with many large sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemConfig<S> {
    code: CodeSpec,
    recovery: RecoverySetIndex,
    mu: S,
    columns: Vec<(usize, usize)>,
}

impl<S: Scalar> SystemConfig<S> {
    pub fn new(code: CodeSpec, mu: S) -> Result<Self> {
        if !mu.is_positive() {
            return Err(Error::InvalidArgument(format!("μ must be positive, got {mu}")));
        }
        let recovery = enumerate_recovery_sets(&code)?;
        let mut columns: Vec<(usize, usize)> = recovery
            .iter()
            .enumerate()
            .flat_map(|(file, sets)| (0..sets.len()).map(move |j| (file, j)))
            .collect();
        columns.sort_by_key(|&(file, j)| (recovery.sets(file)[j].len(), file, j));
        Ok(Self {
            code,
            recovery,
            mu,
            columns,
        })
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    pub fn recovery(&self) -> &RecoverySetIndex {
        &self.recovery
    }

    pub fn mu(&self) -> &S {
        &self.mu
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    /// Number of split variables, `Σ t_i`.
    pub fn num_vars(&self) -> usize {
        self.recovery.total()
    }

    /// Node-capacity rows `Σ_{i,j: ℓ ∈ R_i^(j)} λ_i^(j) <= μ`.
    fn capacity_rows(&self) -> Vec<Constraint<S>> {
        let mut rows = vec![vec![S::zero(); self.num_vars()]; self.n()];
        for (var, &(file, j)) in self.columns.iter().enumerate() {
            for &node in &self.recovery.sets(file)[j] {
                rows[node][var] = S::one();
            }
        }
        rows.into_iter()
            .map(|coeffs| Constraint {
                coeffs,
                relation: Relation::Le,
                rhs: self.mu.clone(),
            })
            .collect()
    }

    /// Coefficients of `Σ_i w_i Σ_j λ_i^(j)`.
    fn file_weights(&self, weights: &[S]) -> Vec<S> {
        self.columns.iter().map(|&(file, _)| weights[file].clone()).collect()
    }

    fn file_row(&self, file: usize) -> Vec<S> {
        let mut w = vec![S::zero(); self.k()];
        w[file] = S::one();
        self.file_weights(&w)
    }

    /// The base system with `λ_i` pinned for every `Some` entry.
    pub(crate) fn base_problem(&self, pinned: &[Option<S>]) -> LpProblem<S> {
        let mut lp = LpProblem::new(self.num_vars());
        lp.constraints = self.capacity_rows();
        for (file, rate) in pinned.iter().enumerate() {
            if let Some(rate) = rate {
                lp.push_eq(self.file_row(file), rate.clone());
            }
        }
        lp
    }

    /// Per-file rates `λ_i = Σ_j λ_i^(j)` of an LP solution.
    pub(crate) fn rates_of(&self, x: &[S]) -> Vec<S> {
        let mut rates = vec![S::zero(); self.k()];
        for (&(file, _), v) in self.columns.iter().zip(x) {
            rates[file] = rates[file].clone() + v.clone();
        }
        rates
    }

    pub(crate) fn allocation_from_flat(&self, x: &[S]) -> Allocation<S> {
        let mut alloc = Allocation::zero(&self.recovery);
        for (&(file, j), v) in self.columns.iter().zip(x) {
            *alloc.share_mut(file, j) = v.clone();
        }
        alloc
    }
}

/// Request rates `λ_1..λ_K`, all non-negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DemandVector<S>(Vec<S>);

impl<S: Scalar> DemandVector<S> {
    pub fn new(rates: Vec<S>) -> Result<Self> {
        if let Some(r) = rates.iter().find(|r| r.is_negative()) {
            return Err(Error::InvalidArgument(format!("negative request rate {r}")));
        }
        Ok(Self(rates))
    }

    pub fn zeros(k: usize) -> Self {
        Self(vec![S::zero(); k])
    }

    pub fn rates(&self) -> &[S] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> S {
        self.0.iter().fold(S::zero(), |acc, v| acc + v.clone())
    }
}

/// Split of each file's requests across its recovering sets, indexed like
/// the config's [`RecoverySetIndex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation<S> {
    shares: Vec<Vec<S>>,
}

impl<S: Scalar> Allocation<S> {
    pub fn zero(recovery: &RecoverySetIndex) -> Self {
        Self {
            shares: recovery.iter().map(|sets| vec![S::zero(); sets.len()]).collect(),
        }
    }

    pub fn from_shares(shares: Vec<Vec<S>>) -> Self {
        Self { shares }
    }

    pub fn shares(&self) -> &[Vec<S>] {
        &self.shares
    }

    pub fn share(&self, file: usize, set: usize) -> &S {
        &self.shares[file][set]
    }

    pub fn share_mut(&mut self, file: usize, set: usize) -> &mut S {
        &mut self.shares[file][set]
    }

    /// `Σ_j λ_i^(j)` per file.
    pub fn rates(&self) -> Vec<S> {
        self.shares
            .iter()
            .map(|row| row.iter().fold(S::zero(), |acc, v| acc + v.clone()))
            .collect()
    }
}

fn check_len<S>(config: &SystemConfig<S>, got: usize, what: &str) -> Result<()>
where
    S: Scalar,
{
    if got != config.k() {
        return Err(Error::Mismatch(format!(
            "{what} has {got} entries, system stores K = {} files",
            config.k()
        )));
    }
    Ok(())
}

/// Feasibility of `demand`; `Some` carries a witness allocation.
pub fn membership<S: Scalar>(config: &SystemConfig<S>, demand: &DemandVector<S>) -> Result<Option<Allocation<S>>> {
    check_len(config, demand.len(), "demand")?;
    let pinned: Vec<Option<S>> = demand.rates().iter().cloned().map(Some).collect();
    let lp = config.base_problem(&pinned);
    Ok(lp_feasible(lp.num_vars, &lp.constraints)?.map(|x| config.allocation_from_flat(&x)))
}

/// Largest feasible rate of `free_file` given the other `K − 1` rates in file order.
pub fn max_rate<S: Scalar>(config: &SystemConfig<S>, fixed: &[S], free_file: usize) -> Result<S> {
    if free_file >= config.k() {
        return Err(Error::InvalidArgument(format!("file index {free_file} out of range")));
    }
    if fixed.len() + 1 != config.k() {
        return Err(Error::Mismatch(format!(
            "expected {} fixed rates, got {}",
            config.k() - 1,
            fixed.len()
        )));
    }
    if let Some(r) = fixed.iter().find(|r| r.is_negative()) {
        return Err(Error::InvalidArgument(format!("negative request rate {r}")));
    }
    let mut pinned: Vec<Option<S>> = fixed.iter().cloned().map(Some).collect();
    pinned.insert(free_file, None);
    let lp = config
        .base_problem(&pinned)
        .maximize(config.file_row(free_file));
    let res = lp_solve(&lp)?;
    match res.status {
        LpStatus::Optimal => Ok(res.value.expect("optimal value")),
        LpStatus::Infeasible => Err(Error::OutsideRegion),
        LpStatus::Unbounded => unreachable!("node capacities bound every share"),
    }
}

/// Support function `max w.λ` over the region.
pub fn max_weighted_sum<S: Scalar>(config: &SystemConfig<S>, weights: &[S]) -> Result<S> {
    check_len(config, weights.len(), "weight vector")?;
    if weights.iter().any(|w| w.is_negative()) {
        return Err(Error::InvalidArgument("weights must be non-negative".into()));
    }
    if weights.iter().all(|w| w.is_zero()) {
        return Err(Error::InvalidArgument("weights must not all be zero".into()));
    }
    let pinned = vec![None; config.k()];
    let lp = config.base_problem(&pinned).maximize(config.file_weights(weights));
    let res = lp_solve(&lp)?;
    Ok(res.value.expect("the all-zero split is feasible and the region is bounded"))
}
