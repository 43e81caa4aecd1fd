//! Closed-form regions: the MDS outer bound, simplex codes, replication boxes
//! and the boundary calculus of two-file hybrid systems.

mod hybrid;
mod mds;
mod simplex;

pub use hybrid::{hybrid_add_node, hybrid_all_coded, hybrid_compose, hybrid_theorem_boundary, HybridFile};
pub use mds::{
    mds_halfrate_boundary, mds_outer_bound, mds_outer_chain_2d, mds_outer_load, mds_outer_support, OuterBoundRegion,
};
pub use simplex::{simplex_allocation, simplex_graph_stats, simplex_membership, simplex_support, SimplexGraph};

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseBoundary;
use crate::region::DemandVector;
use crate::scalar::Scalar;

/// Chain of the box `[0, Aμ] x [0, Bμ]` of a two-file replication system.
pub fn replication_box_chain<S: Scalar>(copies_a: usize, copies_b: usize, mu: &S) -> PiecewiseBoundary<S> {
    let a = S::from_count(copies_a) * mu.clone();
    let b = S::from_count(copies_b) * mu.clone();
    chain_from(vec![(S::zero(), b.clone()), (a, b)]).expect("a box is a valid chain")
}

/// `λ_i <= copies_i μ` for every file.
pub fn replication_membership<S: Scalar>(demand: &DemandVector<S>, copies: &[usize], mu: &S) -> Result<bool> {
    if demand.len() != copies.len() {
        return Err(Error::Mismatch(format!(
            "demand has {} entries for {} files",
            demand.len(),
            copies.len()
        )));
    }
    Ok(demand
        .rates()
        .iter()
        .zip(copies)
        .all(|(l, &c)| *l <= S::from_count(c) * mu.clone()))
}

/// `max w.λ` over the replication box.
pub fn replication_support<S: Scalar>(copies: &[usize], mu: &S, weights: &[S]) -> S {
    copies
        .iter()
        .zip(weights)
        .fold(S::zero(), |acc, (&c, w)| acc + S::from_count(c) * w.clone() * mu.clone())
}

/// Builds a chain from raw points: drops repeated points, closes with a
/// vertical drop to `λb = 0` when needed and removes collinear vertices.
pub(crate) fn chain_from<S: Scalar>(points: Vec<(S, S)>) -> Result<PiecewiseBoundary<S>> {
    let mut vertices: Vec<(S, S)> = Vec::with_capacity(points.len() + 1);
    for p in points {
        if vertices.last() != Some(&p) {
            vertices.push(p);
        }
    }
    if let Some((x, y)) = vertices.last().cloned() {
        if y.is_positive() {
            vertices.push((x, S::zero()));
        }
    }
    Ok(PiecewiseBoundary::new(vertices)?.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::chain;
    use crate::Rational;

    #[test]
    fn replication_box() {
        let mu = Rational::from_int(1);
        assert_eq!(
            replication_box_chain(2, 2, &mu),
            chain(&[((0, 1), (2, 1)), ((2, 1), (2, 1)), ((2, 1), (0, 1))]).unwrap()
        );
        assert_eq!(
            replication_box_chain(0, 3, &mu),
            chain(&[((0, 1), (3, 1)), ((0, 1), (0, 1))]).unwrap()
        );
        assert_eq!(replication_box_chain::<Rational>(0, 0, &mu), PiecewiseBoundary::point());
        let d = DemandVector::new(vec![Rational::from_int(2), Rational::ratio(5, 2)]).unwrap();
        assert!(!replication_membership(&d, &[2, 2], &mu).unwrap());
        assert!(replication_membership(&d, &[2, 3], &mu).unwrap());
        assert_eq!(
            replication_support(&[2, 3], &mu, &[Rational::from_int(1), Rational::ratio(1, 3)]),
            Rational::from_int(3)
        );
    }
}
