//! Exact two-phase simplex over an ordered field.
//!
//! Every problem is `maximize c.x` subject to rows `a.x <= b` or `a.x = b`
//! with all variables non-negative. Pricing follows Bland's rule (smallest
//! eligible column enters, ties in the ratio test leave by smallest basic
//! variable), so pivot sequences are deterministic and cycling is impossible.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hard cap on total pivots; reaching it means a solver bug, not a hard instance.
pub const DEFAULT_PIVOT_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem<S> {
    pub num_vars: usize,
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
}

impl<S: Scalar> LpProblem<S> {
    /// A problem with a zero objective and no constraints.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![S::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn maximize(mut self, objective: Vec<S>) -> Self {
        self.objective = objective;
        self
    }

    pub fn push(&mut self, coeffs: Vec<S>, relation: Relation, rhs: S) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn push_le(&mut self, coeffs: Vec<S>, rhs: S) {
        self.push(coeffs, Relation::Le, rhs);
    }

    pub fn push_eq(&mut self, coeffs: Vec<S>, rhs: S) {
        self.push(coeffs, Relation::Eq, rhs);
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::Mismatch(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        if let Some((i, c)) = self
            .constraints
            .iter()
            .enumerate()
            .find(|(_, c)| c.coeffs.len() != self.num_vars)
        {
            return Err(Error::Mismatch(format!(
                "constraint {i} has {} coefficients for {} variables",
                c.coeffs.len(),
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Whether `x` satisfies every constraint and non-negativity exactly.
    pub fn is_feasible_point(&self, x: &[S]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn objective_value(&self, x: &[S]) -> S {
        dot(&self.objective, x)
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult<S> {
    pub status: LpStatus,
    pub value: Option<S>,
    pub solution: Option<Vec<S>>,
    /// `(row, column)` of every pivot, phase one then phase two.
    pub pivots: Vec<(usize, usize)>,
}

pub fn lp_solve<S: Scalar>(problem: &LpProblem<S>) -> Result<LpResult<S>> {
    lp_solve_with_limit(problem, DEFAULT_PIVOT_LIMIT)
}

pub fn lp_solve_with_limit<S: Scalar>(problem: &LpProblem<S>, pivot_limit: usize) -> Result<LpResult<S>> {
    problem.validate()?;
    let mut solver = Revised::new(problem, pivot_limit);
    if !solver.phase_one()? {
        return Ok(LpResult {
            status: LpStatus::Infeasible,
            value: None,
            solution: None,
            pivots: solver.pivots,
        });
    }
    if !solver.phase_two(&problem.objective)? {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            value: None,
            solution: None,
            pivots: solver.pivots,
        });
    }
    let solution = solver.primal(problem.num_vars);
    let value = problem.objective_value(&solution);
    Ok(LpResult {
        status: LpStatus::Optimal,
        value: Some(value),
        solution: Some(solution),
        pivots: solver.pivots,
    })
}

/// Phase one only: a feasible point if one exists.
pub fn lp_feasible<S: Scalar>(num_vars: usize, constraints: &[Constraint<S>]) -> Result<Option<Vec<S>>> {
    let problem = LpProblem {
        num_vars,
        objective: vec![S::zero(); num_vars],
        constraints: constraints.to_vec(),
    };
    problem.validate()?;
    let mut solver = Revised::new(&problem, DEFAULT_PIVOT_LIMIT);
    if solver.phase_one()? {
        Ok(Some(solver.primal(num_vars)))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Original,
    Slack,
    Artificial,
}

/// Revised simplex with an explicit dense basis inverse. Columns stay sparse,
/// which matters because region LPs have hundreds of columns but only a
/// handful of nonzeros in each.
struct Revised<S> {
    columns: Vec<Vec<(usize, S)>>,
    kinds: Vec<ColumnKind>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<S>>,
    xb: Vec<S>,
    pivots: Vec<(usize, usize)>,
    pivot_limit: usize,
}

impl<S: Scalar> Revised<S> {
    /// Rows with a negative right-hand side are negated first. Each row then
    /// gets a slack (for `<=`) and, unless that slack can start basic, an
    /// artificial, so the starting basis is the identity.
    fn new(problem: &LpProblem<S>, pivot_limit: usize) -> Self {
        let m = problem.constraints.len();
        let mut columns: Vec<Vec<(usize, S)>> = vec![Vec::new(); problem.num_vars];
        let mut kinds = vec![ColumnKind::Original; problem.num_vars];
        let mut xb = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for (i, c) in problem.constraints.iter().enumerate() {
            let flip = c.rhs.is_negative();
            for (j, a) in c.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    columns[j].push((i, if flip { -a.clone() } else { a.clone() }));
                }
            }
            xb.push(if flip { -c.rhs.clone() } else { c.rhs.clone() });
            if c.relation == Relation::Le {
                let sign = if flip { -S::one() } else { S::one() };
                columns.push(vec![(i, sign)]);
                kinds.push(ColumnKind::Slack);
                if !flip {
                    basis.push(columns.len() - 1);
                    continue;
                }
            }
            columns.push(vec![(i, S::one())]);
            kinds.push(ColumnKind::Artificial);
            basis.push(columns.len() - 1);
        }
        let mut in_basis = vec![false; columns.len()];
        for &b in &basis {
            in_basis[b] = true;
        }
        let binv = (0..m)
            .map(|i| (0..m).map(|k| if i == k { S::one() } else { S::zero() }).collect())
            .collect();
        Self {
            columns,
            kinds,
            basis,
            in_basis,
            binv,
            xb,
            pivots: Vec::new(),
            pivot_limit,
        }
    }

    /// `B^-1 A_j`.
    fn ftran(&self, j: usize) -> Vec<S> {
        self.binv
            .iter()
            .map(|row| {
                self.columns[j]
                    .iter()
                    .filter(|(r, _)| !row[*r].is_zero())
                    .fold(S::zero(), |acc, (r, a)| acc + row[*r].clone() * a.clone())
            })
            .collect()
    }

    /// Simplex multipliers `c_B B^-1`.
    fn prices(&self, cost: &[S]) -> Vec<S> {
        let mut y = vec![S::zero(); self.basis.len()];
        for (row, &b) in self.binv.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (yk, v) in y.iter_mut().zip(row) {
                if !v.is_zero() {
                    *yk = yk.clone() + cb.clone() * v.clone();
                }
            }
        }
        y
    }

    fn pivot(&mut self, r: usize, col: usize, u: &[S]) -> Result<()> {
        if self.pivots.len() >= self.pivot_limit {
            return Err(Error::IterationLimit(self.pivot_limit));
        }
        self.pivots.push((r, col));
        let p = u[r].clone();
        for v in self.binv[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        self.xb[r] = self.xb[r].clone() / p;
        let pivot_row = self.binv[r].clone();
        let pivot_x = self.xb[r].clone();
        for (i, factor) in u.iter().enumerate() {
            if i == r || factor.is_zero() {
                continue;
            }
            for (v, a) in self.binv[i].iter_mut().zip(&pivot_row) {
                if !a.is_zero() {
                    *v = v.clone() - factor.clone() * a.clone();
                }
            }
            self.xb[i] = self.xb[i].clone() - factor.clone() * pivot_x.clone();
        }
        self.in_basis[self.basis[r]] = false;
        self.in_basis[col] = true;
        self.basis[r] = col;
        Ok(())
    }

    /// Runs Bland-rule iterations; returns false when the objective is unbounded.
    fn iterate(&mut self, cost: &[S], allowed: impl Fn(ColumnKind) -> bool) -> Result<bool> {
        loop {
            let y = self.prices(cost);
            let entering = (0..self.columns.len()).find(|&j| {
                !self.in_basis[j]
                    && allowed(self.kinds[j])
                    && self.columns[j]
                        .iter()
                        .fold(cost[j].clone(), |acc, (r, a)| acc - y[*r].clone() * a.clone())
                        .is_positive()
            });
            let Some(col) = entering else {
                return Ok(true);
            };
            let u = self.ftran(col);
            let mut leaving: Option<(usize, S)> = None;
            for (r, a) in u.iter().enumerate() {
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.xb[r].clone() / a.clone();
                let better = match &leaving {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return Ok(false);
            };
            self.pivot(r, col, &u)?;
        }
    }

    /// Minimizes the sum of artificials; true iff the constraints are feasible.
    fn phase_one(&mut self) -> Result<bool> {
        let cost: Vec<S> = self
            .kinds
            .iter()
            .map(|k| match k {
                ColumnKind::Artificial => -S::one(),
                _ => S::zero(),
            })
            .collect();
        if cost.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        self.iterate(&cost, |_| true)?;
        let infeasibility = self
            .basis
            .iter()
            .zip(&self.xb)
            .filter(|(&b, _)| self.kinds[b] == ColumnKind::Artificial)
            .fold(S::zero(), |acc, (_, v)| acc + v.clone());
        if infeasibility.is_positive() {
            return Ok(false);
        }
        self.evict_artificials()?;
        Ok(true)
    }

    /// Pivots zero-valued artificials out of the basis. An artificial that
    /// cannot leave sits on a linearly redundant row; its row of `B^-1 A` is
    /// zero on every other column, so it stays at zero for good.
    fn evict_artificials(&mut self) -> Result<()> {
        for r in 0..self.basis.len() {
            if self.kinds[self.basis[r]] != ColumnKind::Artificial {
                continue;
            }
            let rho = self.binv[r].clone();
            let replacement = (0..self.columns.len()).find(|&j| {
                !self.in_basis[j]
                    && self.kinds[j] != ColumnKind::Artificial
                    && !self.columns[j]
                        .iter()
                        .fold(S::zero(), |acc, (i, a)| acc + rho[*i].clone() * a.clone())
                        .is_zero()
            });
            if let Some(col) = replacement {
                let u = self.ftran(col);
                self.pivot(r, col, &u)?;
            }
        }
        Ok(())
    }

    fn phase_two(&mut self, objective: &[S]) -> Result<bool> {
        let mut cost = vec![S::zero(); self.columns.len()];
        cost[..objective.len()].clone_from_slice(objective);
        self.iterate(&cost, |k| k != ColumnKind::Artificial)
    }

    fn primal(&self, num_vars: usize) -> Vec<S> {
        let mut x = vec![S::zero(); num_vars];
        for (&b, v) in self.basis.iter().zip(&self.xb) {
            if b < num_vars {
                x[b] = v.clone();
            }
        }
        x
    }
}
