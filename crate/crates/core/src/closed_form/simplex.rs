//! Binary simplex codes: the region `Σ λ_i <= 2^(K−1) μ`, its explicit
//! allocation, and the repair graph whose odd-weight vertices cover every edge.

use crate::code_model::{CodeFamily, CodeSpec};
use crate::error::{Error, Result};
use crate::region::{Allocation, DemandVector, SystemConfig};
use crate::scalar::Scalar;

fn capacity<S: Scalar>(k: usize, mu: &S) -> S {
    S::from_count(1usize << (k - 1)) * mu.clone()
}

pub fn simplex_membership<S: Scalar>(demand: &DemandVector<S>, k: usize, mu: &S) -> Result<bool> {
    if demand.len() != k {
        return Err(Error::Mismatch(format!("demand has {} entries for k = {k}", demand.len())));
    }
    Ok(demand.total() <= capacity(k, mu))
}

/// `2^(K−1) μ max_i w_i`.
pub fn simplex_support<S: Scalar>(k: usize, mu: &S, weights: &[S]) -> S {
    let top = weights.iter().max().cloned().unwrap_or_else(S::zero);
    capacity(k, mu) * top
}

/// Column of `node` read as a `K`-bit integer, row 0 most significant.
fn column_bits(code: &CodeSpec, node: usize) -> usize {
    code.column(node).iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Sends `λ_i / 2^(K−1)` to the systematic node of file `i` and to each of its
/// `2^(K−1) − 1` disjoint repair pairs. Every node lies in exactly one of
/// those sets per file, so its load is `Σ λ_i / 2^(K−1)`.
pub fn simplex_allocation<S: Scalar>(config: &SystemConfig<S>, demand: &DemandVector<S>) -> Result<Allocation<S>> {
    let code = config.code();
    if *code.family() != CodeFamily::Simplex {
        return Err(Error::InvalidCode("simplex allocation needs a simplex code".into()));
    }
    let k = code.k();
    if !simplex_membership(demand, k, config.mu())? {
        return Err(Error::OutsideRegion);
    }
    let node_of: Vec<usize> = {
        let mut v = vec![usize::MAX; 1 << k];
        for node in 0..code.n() {
            v[column_bits(code, node)] = node;
        }
        v
    };
    let share_count = S::from_count(1usize << (k - 1));
    let mut alloc = Allocation::zero(config.recovery());
    for (file, rate) in demand.rates().iter().enumerate() {
        let unit = 1usize << (k - 1 - file);
        let share = rate.clone() / share_count.clone();
        for bits in 1..(1usize << k) {
            let partner = bits ^ unit;
            if partner != 0 && partner < bits {
                continue;
            }
            let mut set = vec![node_of[bits]];
            if partner != 0 {
                set.push(node_of[partner]);
            }
            set.sort_unstable();
            let pos = config.recovery().position(file, &set).ok_or_else(|| {
                Error::Mismatch(format!("{set:?} is not a recovering set of file {}", file + 1))
            })?;
            *alloc.share_mut(file, pos) = share.clone();
        }
    }
    Ok(alloc)
}

/// Repair graph of the `K`-bit simplex code. Vertices are the nonzero bit
/// vectors, each systematic vertex carries a loop, and `u`, `v` are joined
/// when `u XOR v` is a unit vector (a repair pair).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexGraph {
    k: usize,
    edges: Vec<(usize, usize)>,
    cover: Vec<usize>,
}

impl SimplexGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        (1 << self.k) - 1
    }

    /// Loops count once.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Odd-weight vertices, in increasing order.
    pub fn cover(&self) -> &[usize] {
        &self.cover
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn cover_hits_every_edge(&self) -> bool {
        self.edges
            .iter()
            .all(|(a, b)| self.cover.binary_search(a).is_ok() || self.cover.binary_search(b).is_ok())
    }

    /// No edge joins two distinct cover vertices.
    pub fn cover_is_independent(&self) -> bool {
        self.edges
            .iter()
            .all(|(a, b)| a == b || self.cover.binary_search(a).is_err() || self.cover.binary_search(b).is_err())
    }
}

pub fn simplex_graph_stats(k: usize) -> Result<SimplexGraph> {
    if !(2..=20).contains(&k) {
        return Err(Error::InvalidArgument(format!("simplex graph needs 2 <= k <= 20, got {k}")));
    }
    let mut edges = Vec::new();
    for v in 1usize..(1 << k) {
        for i in 0..k {
            let u = v ^ (1 << i);
            if u == 0 {
                edges.push((v, v));
            } else if v < u {
                edges.push((v, u));
            }
        }
    }
    let cover = (1usize..(1 << k)).filter(|v| v.count_ones() % 2 == 1).collect();
    Ok(SimplexGraph { k, edges, cover })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::{make_mds_systematic, make_simplex};
    use crate::schedulers::validate_allocation;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn demand(v: &[(i64, i64)]) -> DemandVector<Rational> {
        DemandVector::new(v.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let mu = q(1, 1);
        assert!(simplex_membership(&demand(&[(4, 1), (0, 1), (0, 1)]), 3, &mu).unwrap());
        assert!(!simplex_membership(&demand(&[(41, 10), (0, 1), (0, 1)]), 3, &mu).unwrap());
        assert!(simplex_membership(&DemandVector::zeros(3), 3, &mu).unwrap());
        assert!(simplex_membership(&demand(&[(1, 1), (1, 1)]), 2, &mu).unwrap());
        assert!(simplex_membership(&demand(&[(1, 1)]), 2, &mu).is_err());
    }

    #[test]
    fn allocation_examples() {
        let c2 = SystemConfig::new(make_simplex(2).unwrap(), q(1, 1)).unwrap();
        let d = demand(&[(1, 1), (1, 1)]);
        let alloc = simplex_allocation(&c2, &d).unwrap();
        let (loads, ok) = validate_allocation(&c2, &alloc, &d).unwrap();
        assert!(ok);
        assert!(loads.loads().iter().all(|l| l == &q(1, 1)));

        let c3 = SystemConfig::new(make_simplex(3).unwrap(), q(1, 1)).unwrap();
        let d = demand(&[(4, 1), (0, 1), (0, 1)]);
        let alloc = simplex_allocation(&c3, &d).unwrap();
        assert!(validate_allocation(&c3, &alloc, &d).unwrap().1);
        let used: Vec<&Rational> = alloc.shares()[0].iter().filter(|v| **v != q(0, 1)).collect();
        assert_eq!(used, vec![&q(1, 1); 4]);

        let zero = simplex_allocation(&c3, &DemandVector::zeros(3)).unwrap();
        assert_eq!(zero, Allocation::zero(c3.recovery()));
        assert_eq!(
            simplex_allocation(&c3, &demand(&[(5, 1), (0, 1), (0, 1)])),
            Err(Error::OutsideRegion)
        );
        let mds = SystemConfig::new(make_mds_systematic(4, 2).unwrap(), q(1, 1)).unwrap();
        assert!(simplex_allocation(&mds, &DemandVector::zeros(2)).is_err());
    }

    #[test]
    fn graph_examples() {
        let g3 = simplex_graph_stats(3).unwrap();
        assert_eq!((g3.vertex_count(), g3.edge_count()), (7, 12));
        assert_eq!(g3.cover(), &[0b001, 0b010, 0b100, 0b111]);
        let g2 = simplex_graph_stats(2).unwrap();
        assert_eq!((g2.vertex_count(), g2.edge_count()), (3, 4));
        assert_eq!(g2.cover(), &[0b01, 0b10]);
        let g4 = simplex_graph_stats(4).unwrap();
        assert_eq!(g4.cover().len(), 8);
        assert!(g4.cover().iter().all(|&v| g4.degree(v) == 4));
        assert!(g4.cover_is_independent() && g4.cover_hits_every_edge());
        assert!(simplex_graph_stats(1).is_err());
    }

    #[test]
    fn support_is_scaled_max() {
        assert_eq!(simplex_support(3, &q(1, 1), &[q(1, 1), q(1, 1), q(1, 1)]), q(4, 1));
        assert_eq!(simplex_support(4, &q(1, 2), &[q(0, 1), q(3, 1), q(1, 1), q(0, 1)]), q(12, 1));
    }
}
