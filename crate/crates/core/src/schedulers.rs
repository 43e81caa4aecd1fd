//! Waterfilling request splitting for systematic MDS systems and the
//! allocation validator.
//!
//! The infinitesimal "send each request to the `K` least-loaded nodes" rule
//! is replayed exactly: between events the loads move linearly, so each phase
//! is a closed-form volume and the loop ends after `O(N)` phases.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::region::{Allocation, DemandVector, SystemConfig};
use crate::scalar::{binomial, min_ref, Scalar};

/// Exact per-node loads `γ_ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLoads<S> {
    loads: Vec<S>,
}

impl<S: Scalar> NodeLoads<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            loads: vec![S::zero(); n],
        }
    }

    pub fn loads(&self) -> &[S] {
        &self.loads
    }

    pub fn get(&self, node: usize) -> &S {
        &self.loads[node]
    }

    pub fn len(&self) -> usize {
        self.loads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loads.is_empty()
    }

    pub fn max(&self) -> S {
        self.loads.iter().max().cloned().unwrap_or_else(S::zero)
    }

    pub fn within(&self, mu: &S) -> bool {
        self.loads.iter().all(|l| l <= mu)
    }
}

/// Node loads induced by `alloc`, and whether `alloc` serves `demand` exactly
/// within capacity with non-negative shares.
pub fn validate_allocation<S: Scalar>(
    config: &SystemConfig<S>,
    alloc: &Allocation<S>,
    demand: &DemandVector<S>,
) -> Result<(NodeLoads<S>, bool)> {
    let rec = config.recovery();
    if alloc.shares().len() != config.k() || demand.len() != config.k() {
        return Err(Error::Mismatch(format!(
            "allocation covers {} files and demand {}, system stores {}",
            alloc.shares().len(),
            demand.len(),
            config.k()
        )));
    }
    for (file, row) in alloc.shares().iter().enumerate() {
        if row.len() != rec.count(file) {
            return Err(Error::Mismatch(format!(
                "file {} has {} recovering sets, allocation lists {}",
                file + 1,
                rec.count(file),
                row.len()
            )));
        }
    }
    let mut loads = NodeLoads::<S>::zeros(config.n());
    for (file, row) in alloc.shares().iter().enumerate() {
        for (set, share) in rec.sets(file).iter().zip(row) {
            for &node in set {
                loads.loads[node] = loads.loads[node].clone() + share.clone();
            }
        }
    }
    let nonneg = alloc.shares().iter().flatten().all(|v| !v.is_negative());
    let sums = alloc.rates().iter().zip(demand.rates()).all(|(a, b)| a == b);
    let ok = nonneg && sums && loads.within(config.mu());
    Ok((loads, ok))
}

/// Result of [`waterfill`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WaterfillOutcome<S> {
    Served {
        allocation: Allocation<S>,
        loads: NodeLoads<S>,
    },
    /// Every node usable for coded traffic saturated with `unserved` left over.
    Infeasible { unserved: S, loads: NodeLoads<S> },
}

impl<S> WaterfillOutcome<S> {
    pub fn is_served(&self) -> bool {
        matches!(self, Self::Served { .. })
    }
}

/// Systematic node of every file, if the recovering sets have the systematic
/// MDS shape: one singleton plus every `K`-subset of the other `N − 1` nodes.
pub fn systematic_nodes<S: Scalar>(config: &SystemConfig<S>) -> Option<Vec<usize>> {
    let (n, k) = (config.n(), config.k());
    let expected = binomial::<S>(n - 1, k);
    (0..k)
        .map(|file| {
            let sets = config.recovery().sets(file);
            let singles: Vec<usize> = sets.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
            let [node] = singles[..] else {
                return None;
            };
            let coded_ok = S::from_count(sets.len() - 1) == expected
                && sets
                    .iter()
                    .filter(|s| s.len() != 1)
                    .all(|s| s.len() == k && !s.contains(&node));
            coded_ok.then_some(node)
        })
        .collect()
}

fn require_systematic<S: Scalar>(config: &SystemConfig<S>) -> Result<Vec<usize>> {
    systematic_nodes(config).ok_or_else(|| {
        Error::InvalidCode("waterfilling needs a systematic MDS code".into())
    })
}

fn check_demand<S: Scalar>(config: &SystemConfig<S>, demand: &DemandVector<S>) -> Result<()> {
    if demand.len() != config.k() {
        return Err(Error::Mismatch(format!(
            "demand has {} entries, system stores K = {} files",
            demand.len(),
            config.k()
        )));
    }
    Ok(())
}

/// `μN/K − Σ_i min(λ_i, μ)/K`, the coded traffic the system can still absorb.
pub fn waterfill_max_coded<S: Scalar>(config: &SystemConfig<S>, demand: &DemandVector<S>) -> Result<S> {
    check_demand(config, demand)?;
    let mu = config.mu();
    let systematic = demand
        .rates()
        .iter()
        .fold(S::zero(), |acc, l| acc + min_ref(l, mu));
    Ok((mu.clone() * S::from_count(config.n()) - systematic) / S::from_count(config.k()))
}

/// Exact waterfilling allocation of `demand`.
///
/// Systematic nodes first take `min(λ_i, μ)`. The residuals, in descending
/// order with ties broken by file index, are then poured over the `K`
/// least-loaded unsaturated nodes; nodes tied at the water level share the
/// flow evenly through a uniform split over the tied `K`-subsets.
pub fn waterfill<S: Scalar>(config: &SystemConfig<S>, demand: &DemandVector<S>) -> Result<WaterfillOutcome<S>> {
    check_demand(config, demand)?;
    let systematic = require_systematic(config)?;
    let (n, k) = (config.n(), config.k());
    let mu = config.mu().clone();
    let rec = config.recovery();

    let mut alloc = Allocation::zero(rec);
    let mut loads = vec![S::zero(); n];
    let mut residual: Vec<(usize, S)> = Vec::new();
    for (file, rate) in demand.rates().iter().enumerate() {
        let direct = min_ref(rate, &mu);
        let single = rec
            .position(file, &[systematic[file]])
            .expect("systematic singleton is a recovering set");
        *alloc.share_mut(file, single) = direct.clone();
        loads[systematic[file]] = direct.clone();
        let rest = rate.clone() - direct;
        if rest.is_positive() {
            residual.push((file, rest));
        }
    }
    residual.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut queue = residual.into_iter();
    let mut current = queue.next();

    while let Some((file, left)) = current.take() {
        let open: Vec<usize> = (0..n)
            .filter(|&v| loads[v] < mu)
            .sorted_by(|&a, &b| loads[a].cmp(&loads[b]).then(a.cmp(&b)))
            .collect();
        if open.len() < k {
            let unserved = std::iter::once(left).chain(queue.map(|(_, r)| r)).fold(S::zero(), |a, r| a + r);
            return Ok(WaterfillOutcome::Infeasible {
                unserved,
                loads: NodeLoads { loads },
            });
        }
        let level = loads[open[k - 1]].clone();
        let low: Vec<usize> = open.iter().copied().filter(|&v| loads[v] < level).collect();
        let tied: Vec<usize> = open.iter().copied().filter(|&v| loads[v] == level).collect();
        let need = k - low.len();
        let rate = S::from_count(need) / S::from_count(tied.len());

        let mut volume = left.clone();
        let to_cap = (mu.clone() - level.clone()) / rate.clone();
        volume = min_ref(&volume, &to_cap);
        if let Some(next) = open.iter().map(|&v| &loads[v]).find(|l| **l > level) {
            volume = min_ref(&volume, &((next.clone() - level.clone()) / rate.clone()));
        }
        if let Some(&top) = low.last() {
            if rate < S::one() {
                let gap = level.clone() - loads[top].clone();
                volume = min_ref(&volume, &(gap / (S::one() - rate.clone())));
            }
        }

        let groups = binomial::<S>(tied.len(), need);
        let each = volume.clone() / groups;
        for extra in tied.iter().copied().combinations(need) {
            let mut set: Vec<usize> = low.iter().copied().chain(extra).collect();
            set.sort_unstable();
            let pos = rec.position(file, &set).ok_or_else(|| {
                Error::Mismatch(format!("set {set:?} is not a recovering set of file {}", file + 1))
            })?;
            *alloc.share_mut(file, pos) = alloc.share(file, pos).clone() + each.clone();
        }
        for &v in &low {
            loads[v] = loads[v].clone() + volume.clone();
        }
        for &v in &tied {
            loads[v] = loads[v].clone() + volume.clone() * rate.clone();
        }
        let rest = left - volume;
        current = if rest.is_positive() {
            Some((file, rest))
        } else {
            queue.next()
        };
    }
    Ok(WaterfillOutcome::Served {
        allocation: alloc,
        loads: NodeLoads { loads },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::{make_mds_systematic, make_simplex};
    use crate::region::membership;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn cfg(n: usize, k: usize) -> SystemConfig<Rational> {
        SystemConfig::new(make_mds_systematic(n, k).unwrap(), q(1, 1)).unwrap()
    }

    fn demand(v: &[(i64, i64)]) -> DemandVector<Rational> {
        DemandVector::new(v.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn zero_allocation_is_valid() {
        let c = cfg(4, 2);
        let (loads, ok) = validate_allocation(&c, &Allocation::zero(c.recovery()), &DemandVector::zeros(2)).unwrap();
        assert!(ok);
        assert!(loads.loads().iter().all(|l| l == &q(0, 1)));
    }

    #[test]
    fn half_rate_split_fills_every_node() {
        let c = cfg(4, 2);
        // file b sets: [0,2] [0,3] [1] [2,3]
        let shares = vec![vec![q(0, 1); 4], vec![q(1, 2), q(1, 2), q(1, 1), q(1, 2)]];
        let mut alloc = Allocation::from_shares(shares);
        let d = demand(&[(0, 1), (5, 2)]);
        let (loads, ok) = validate_allocation(&c, &alloc, &d).unwrap();
        assert!(ok);
        assert!(loads.loads().iter().all(|l| l == &q(1, 1)));

        *alloc.share_mut(1, 0) = q(51, 100);
        let (loads, ok) = validate_allocation(&c, &alloc, &d).unwrap();
        assert!(!ok);
        assert!(loads.max() > q(1, 1));
    }

    #[test]
    fn validator_rejects_shape_mismatch() {
        let c = cfg(4, 2);
        let alloc = Allocation::from_shares(vec![vec![q(0, 1); 3], vec![q(0, 1); 4]]);
        assert!(matches!(
            validate_allocation(&c, &alloc, &DemandVector::zeros(2)),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn six_three_example() {
        let c = cfg(6, 3);
        let d = demand(&[(3, 2), (6, 5), (3, 10)]);
        let WaterfillOutcome::Served { allocation, loads } = waterfill(&c, &d).unwrap() else {
            panic!("demand is inside the region");
        };
        let (check, ok) = validate_allocation(&c, &allocation, &d).unwrap();
        assert!(ok);
        assert_eq!(check, loads);
        assert_eq!(waterfill_max_coded(&c, &d).unwrap(), q(37, 30));
    }

    #[test]
    fn light_demand_is_purely_systematic() {
        let c = cfg(6, 3);
        let d = demand(&[(1, 2), (1, 1), (0, 1)]);
        let WaterfillOutcome::Served { allocation, .. } = waterfill(&c, &d).unwrap() else {
            panic!("light demand must be served");
        };
        for file in 0..3 {
            for (set, share) in c.recovery().sets(file).iter().zip(&allocation.shares()[file]) {
                if set.len() > 1 {
                    assert_eq!(share, &q(0, 1));
                }
            }
        }
    }

    #[test]
    fn boundary_point_is_served_with_full_loads() {
        let c = cfg(4, 2);
        let WaterfillOutcome::Served { loads, .. } = waterfill(&c, &demand(&[(3, 2), (3, 2)])).unwrap() else {
            panic!("(3/2, 3/2) lies on the boundary");
        };
        assert!(loads.loads().iter().all(|l| l == &q(1, 1)));
    }

    #[test]
    fn overload_reports_unserved_residual() {
        let c = cfg(4, 2);
        match waterfill(&c, &demand(&[(2, 1), (3, 2)])).unwrap() {
            WaterfillOutcome::Infeasible { unserved, .. } => assert_eq!(unserved, q(1, 2)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn max_coded_edge_cases() {
        let c = cfg(6, 3);
        assert_eq!(waterfill_max_coded(&c, &demand(&[(2, 1), (1, 1), (5, 1)])).unwrap(), q(1, 1));
        assert_eq!(waterfill_max_coded(&c, &DemandVector::zeros(3)).unwrap(), q(2, 1));
    }

    #[test]
    fn agrees_with_membership_on_a_grid() {
        for (n, k) in [(4, 2), (6, 3), (6, 2)] {
            let c = cfg(n, k);
            let steps: Vec<Rational> = (0..=8).map(|i| q(i, 4)).collect();
            for rates in (0..k).map(|_| steps.iter().cloned()).multi_cartesian_product() {
                let d = DemandVector::new(rates).unwrap();
                let inside = membership(&c, &d).unwrap().is_some();
                assert_eq!(waterfill(&c, &d).unwrap().is_served(), inside, "({n},{k}) {d:?}");
            }
        }
    }

    #[test]
    fn requires_systematic_mds() {
        let c = SystemConfig::new(make_simplex(3).unwrap(), q(1, 1)).unwrap();
        assert!(systematic_nodes(&c).is_none());
        assert!(matches!(waterfill(&c, &DemandVector::zeros(3)), Err(Error::InvalidCode(_))));
        assert_eq!(systematic_nodes(&cfg(5, 2)), Some(vec![0, 1]));
    }
}
