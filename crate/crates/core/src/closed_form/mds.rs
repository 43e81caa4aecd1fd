//! The outer bound `Σ_i min(λ_i, μ) + K (λ_i − μ)^+ <= Nμ` for systematic MDS
//! codes, which is the exact region whenever `N − K >= K`.

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseBoundary;
use crate::region::DemandVector;
use crate::scalar::{min_ref, Scalar};

use super::chain_from;

/// `Σ_i min(λ_i, μ) + K (λ_i − μ)^+`: node capacity consumed when every
/// request beyond `μ` needs `K` coded nodes.
pub fn mds_outer_load<S: Scalar>(demand: &DemandVector<S>, k: usize, mu: &S) -> S {
    let k = S::from_count(k);
    demand.rates().iter().fold(S::zero(), |acc, l| {
        acc + min_ref(l, mu) + k.clone() * (l.clone() - mu.clone()).pos_part()
    })
}

pub fn mds_outer_bound<S: Scalar>(demand: &DemandVector<S>, n: usize, k: usize, mu: &S) -> bool {
    mds_outer_load(demand, k, mu) <= S::from_count(n) * mu.clone()
}

/// The outer-bound set of an `(N, K)` code, certified exact by the
/// `N − K >= K` precondition of [`mds_halfrate_boundary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterBoundRegion<S> {
    n: usize,
    k: usize,
    mu: S,
}

impl<S: Scalar> OuterBoundRegion<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mu(&self) -> &S {
        &self.mu
    }

    pub fn contains(&self, demand: &DemandVector<S>) -> bool {
        mds_outer_bound(demand, self.n, self.k, &self.mu)
    }

    /// Boundary chain; `None` unless `K = 2`.
    pub fn chain(&self) -> Option<PiecewiseBoundary<S>> {
        (self.k == 2).then(|| mds_outer_chain_2d(self.n, &self.mu))
    }

    pub fn support(&self, weights: &[S]) -> S {
        mds_outer_support(self.n, self.k, &self.mu, weights)
    }
}

/// The exact region of a rate-at-most-1/2 systematic MDS code.
pub fn mds_halfrate_boundary<S: Scalar>(n: usize, k: usize, mu: &S) -> Result<OuterBoundRegion<S>> {
    if k == 0 || n < 2 * k {
        return Err(Error::BoundNotTight { n, k });
    }
    Ok(OuterBoundRegion {
        n,
        k,
        mu: mu.clone(),
    })
}

/// Outer-bound chain for `K = 2`: slopes `−1/2`, `−1` and `−2`.
pub fn mds_outer_chain_2d<S: Scalar>(n: usize, mu: &S) -> PiecewiseBoundary<S> {
    let half = |m: usize| S::from_count(m) * mu.clone() / S::from_int(2);
    chain_from(vec![
        (S::zero(), half(n + 1)),
        (mu.clone(), half(n)),
        (half(n), mu.clone()),
        (half(n + 1), S::zero()),
    ])
    .expect("outer-bound chain is concave for n >= 2")
}

/// `max w.λ` over the outer-bound set, as a fractional knapsack: capacity
/// `Nμ`, and per file up to `μ` units at cost 1 followed by any amount at cost
/// `K`, each unit worth `w_i`.
pub fn mds_outer_support<S: Scalar>(n: usize, k: usize, mu: &S, weights: &[S]) -> S {
    let cost_k = S::from_count(k);
    let mut items: Vec<(S, S, Option<S>)> = Vec::new();
    for w in weights.iter().filter(|w| w.is_positive()) {
        items.push((w.clone(), S::one(), Some(mu.clone())));
        items.push((w.clone() / cost_k.clone(), cost_k.clone(), None));
    }
    // highest value per unit of capacity first
    items.sort_by(|a, b| b.0.cmp(&a.0));
    let mut capacity = S::from_count(n) * mu.clone();
    let mut value = S::zero();
    for (ratio, cost, amount) in items {
        if !capacity.is_positive() {
            break;
        }
        let used = match amount {
            Some(units) => min_ref(&(units * cost), &capacity),
            None => capacity.clone(),
        };
        value = value + ratio * used.clone();
        capacity = capacity - used;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::chain;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn demand(v: &[(i64, i64)]) -> DemandVector<Rational> {
        DemandVector::new(v.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn bound_examples() {
        let mu = q(1, 1);
        assert!(mds_outer_bound(&demand(&[(1, 1), (2, 1)]), 4, 2, &mu));
        assert_eq!(mds_outer_load(&demand(&[(1, 1), (2, 1)]), 2, &mu), q(4, 1));
        assert!(mds_outer_bound(&DemandVector::zeros(3), 6, 3, &mu));
        assert!(!mds_outer_bound(&demand(&[(251, 100), (0, 1)]), 4, 2, &mu));
        assert_eq!(mds_outer_load(&demand(&[(3, 2), (6, 5), (3, 10)]), 3, &mu), q(22, 5));
    }

    #[test]
    fn halfrate_region() {
        let mu = q(1, 1);
        let region = mds_halfrate_boundary(4, 2, &mu).unwrap();
        assert_eq!(
            region.chain().unwrap(),
            chain(&[((0, 1), (5, 2)), ((1, 1), (2, 1)), ((2, 1), (1, 1)), ((5, 2), (0, 1))]).unwrap()
        );
        let six = mds_halfrate_boundary(6, 3, &mu).unwrap();
        assert!(six.contains(&demand(&[(3, 2), (6, 5), (3, 10)])));
        assert!(six.chain().is_none());
        assert_eq!(mds_halfrate_boundary(3, 2, &mu), Err(Error::BoundNotTight { n: 3, k: 2 }));
    }

    #[test]
    fn chain_for_small_n_collapses() {
        let mu = q(1, 1);
        assert_eq!(
            mds_outer_chain_2d(2, &mu),
            chain(&[((0, 1), (3, 2)), ((1, 1), (1, 1)), ((3, 2), (0, 1))]).unwrap()
        );
    }

    #[test]
    fn support_matches_chain() {
        let mu = q(1, 1);
        assert_eq!(mds_outer_support(4, 2, &mu, &[q(1, 1), q(0, 1)]), q(5, 2));
        assert_eq!(mds_outer_support(4, 2, &mu, &[q(1, 1), q(1, 1)]), q(3, 1));
        assert_eq!(mds_outer_support(4, 2, &mu, &[q(2, 1), q(1, 1)]), q(5, 1));
        assert_eq!(mds_outer_support(6, 3, &mu, &[q(1, 1), q(1, 1), q(1, 1)]), q(4, 1));
    }
}
