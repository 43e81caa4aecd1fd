//! Fourier–Motzkin projection of a two-file system onto `(λ_1, λ_2)`.
//!
//! This path never calls the simplex solver, so it serves as an independent
//! oracle for [`super::trace_boundary_2d`]. One share per file is substituted
//! away through `λ_i = Σ_j λ_i^(j)`, the remaining shares are eliminated, and
//! the surviving half-planes are turned into a vertex chain.

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseBoundary;
use crate::region::SystemConfig;
use crate::scalar::Scalar;

/// Largest `Σ t_i` accepted by [`project_fm`].
pub const FM_MAX_VARIABLES: usize = 40;

#[derive(Debug, Clone)]
struct Row<S> {
    coeffs: Vec<S>,
    rhs: S,
    history: Vec<usize>,
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|v| it.by_ref().any(|w| w == v))
}

fn merge(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl<S: Scalar> Row<S> {
    /// Scales so the first nonzero coefficient has magnitude one.
    fn normalize(&mut self) {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c = c.clone() / lead.clone();
            }
            self.rhs = self.rhs.clone() / lead;
        }
    }
}

/// Exact boundary of a `K = 2` system via Fourier–Motzkin elimination.
pub fn project_fm<S: Scalar>(config: &SystemConfig<S>) -> Result<PiecewiseBoundary<S>> {
    if config.k() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            got: config.k(),
        });
    }
    if config.num_vars() > FM_MAX_VARIABLES {
        return Err(Error::TooLarge(format!(
            "Fourier–Motzkin projection is capped at {FM_MAX_VARIABLES} shares, got {}",
            config.num_vars()
        )));
    }
    let rows = eliminate(initial_rows(config))?;
    chain_from_rows(&rows)
}

/// Inequalities `a·(λ_1, λ_2, y) <= b`, where `y` holds every share except
/// the first of each file.
fn initial_rows<S: Scalar>(config: &SystemConfig<S>) -> Vec<Row<S>> {
    let rec = config.recovery();
    let free: usize = (0..2).map(|f| rec.count(f).saturating_sub(1)).sum();
    let width = 2 + free;
    let mut rows = Vec::new();
    let mut capacity = vec![vec![S::zero(); width]; config.n()];
    let mut col = 2;
    for file in 0..2 {
        let sets = rec.sets(file);
        let Some((first, rest)) = sets.split_first() else {
            continue;
        };
        // λ_i^(1) = λ_i − Σ_{j>1} λ_i^(j) >= 0
        let mut first_nonneg = vec![S::zero(); width];
        first_nonneg[file] = -S::one();
        for &node in first {
            capacity[node][file] = capacity[node][file].clone() + S::one();
        }
        for set in rest {
            first_nonneg[col] = S::one();
            let mut nonneg = vec![S::zero(); width];
            nonneg[col] = -S::one();
            rows.push((nonneg, S::zero()));
            for &node in first {
                capacity[node][col] = capacity[node][col].clone() - S::one();
            }
            for &node in set {
                capacity[node][col] = capacity[node][col].clone() + S::one();
            }
            col += 1;
        }
        rows.push((first_nonneg, S::zero()));
    }
    for coeffs in capacity {
        rows.push((coeffs, config.mu().clone()));
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, (coeffs, rhs))| Row {
            coeffs,
            rhs,
            history: vec![i],
        })
        .collect()
}

fn eliminate<S: Scalar>(mut rows: Vec<Row<S>>) -> Result<Vec<Row<S>>> {
    let width = rows.first().map_or(2, |r| r.coeffs.len());
    let mut remaining: Vec<usize> = (2..width).collect();
    let mut eliminated = 0;
    while !remaining.is_empty() {
        let (pick, var) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| {
                let pos = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
                let neg = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
                (pos * neg, v)
            })
            .map(|(i, &v)| (i, v))
            .expect("nonempty");
        remaining.remove(pick);
        eliminated += 1;

        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows {
            if row.coeffs[var].is_positive() {
                pos.push(row);
            } else if row.coeffs[var].is_negative() {
                neg.push(row);
            } else {
                next.push(row);
            }
        }
        for p in &pos {
            for n in &neg {
                let history = merge(&p.history, &n.history);
                if history.len() > eliminated + 1 {
                    continue;
                }
                let (cp, cn) = (p.coeffs[var].clone(), -n.coeffs[var].clone());
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(a, b)| a.clone() * cn.clone() + b.clone() * cp.clone())
                    .collect();
                let rhs = p.rhs.clone() * cn.clone() + n.rhs.clone() * cp.clone();
                next.push(Row { coeffs, rhs, history });
            }
        }
        rows = prune(next)?;
    }
    Ok(rows)
}

/// Drops trivial rows, duplicates and rows whose history contains another's.
fn prune<S: Scalar>(rows: Vec<Row<S>>) -> Result<Vec<Row<S>>> {
    let mut kept: Vec<Row<S>> = Vec::with_capacity(rows.len());
    for mut row in rows {
        if row.coeffs.iter().all(|c| c.is_zero()) {
            if row.rhs.is_negative() {
                return Err(Error::InvalidArgument("constraint system is infeasible".into()));
            }
            continue;
        }
        row.normalize();
        kept.push(row);
    }
    kept.sort_by(|a, b| {
        (&a.coeffs, &a.rhs, a.history.len()).cmp(&(&b.coeffs, &b.rhs, b.history.len()))
    });
    kept.dedup_by(|later, earlier| later.coeffs == earlier.coeffs);
    kept.sort_by_key(|r| r.history.len());
    let mut out: Vec<Row<S>> = Vec::with_capacity(kept.len());
    for row in kept {
        if !out.iter().any(|o| is_subset(&o.history, &row.history)) {
            out.push(row);
        }
    }
    Ok(out)
}

/// Concave chain of `{λ >= 0 : α λ_1 + β λ_2 <= γ for every row}`. The set is
/// down-closed, so `λ_1*` is read off at `λ_2 = 0` and `L` is the lower
/// envelope of the rows with `β > 0`.
fn chain_from_rows<S: Scalar>(rows: &[Row<S>]) -> Result<PiecewiseBoundary<S>> {
    let xmax = rows
        .iter()
        .filter(|r| r.coeffs[0].is_positive())
        .map(|r| r.rhs.clone() / r.coeffs[0].clone())
        .min()
        .ok_or_else(|| Error::InvalidBoundary("projection is unbounded in λ_1".into()))?;
    let upper: Vec<&Row<S>> = rows.iter().filter(|r| r.coeffs[1].is_positive()).collect();
    if upper.is_empty() {
        return Err(Error::InvalidBoundary("projection is unbounded in λ_2".into()));
    }
    let eval = |x: &S| {
        upper
            .iter()
            .map(|r| (r.rhs.clone() - r.coeffs[0].clone() * x.clone()) / r.coeffs[1].clone())
            .min()
            .expect("nonempty")
    };

    let mut xs = vec![S::zero(), xmax.clone()];
    for (i, r) in upper.iter().enumerate() {
        for s in &upper[i + 1..] {
            // (γr − αr x)/βr = (γs − αs x)/βs
            let denom = r.coeffs[0].clone() * s.coeffs[1].clone() - s.coeffs[0].clone() * r.coeffs[1].clone();
            if denom.is_zero() {
                continue;
            }
            let x = (r.rhs.clone() * s.coeffs[1].clone() - s.rhs.clone() * r.coeffs[1].clone()) / denom;
            if x.is_positive() && x < xmax {
                xs.push(x);
            }
        }
    }
    xs.sort();
    xs.dedup();
    let mut vertices: Vec<(S, S)> = xs.into_iter().map(|x| {
        let y = eval(&x);
        (x, y)
    }).collect();
    if vertices.len() == 2 && vertices[0] == vertices[1] {
        vertices.pop();
    }
    if vertices.last().is_some_and(|v| v.1.is_positive()) {
        vertices.push((xmax, S::zero()));
    }
    Ok(PiecewiseBoundary::new(vertices)?.normalized())
}
