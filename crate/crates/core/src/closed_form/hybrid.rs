//! Boundary calculus of two-file hybrid systems with `A` copies of file a,
//! `B` copies of file b and `C` coded nodes.

use crate::code_model::HybridSpec;
use crate::error::Result;
use crate::piecewise::PiecewiseBoundary;
use crate::scalar::{min_ref, Scalar};

use super::chain_from;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HybridFile {
    A,
    B,
}

/// Region of `C` coded nodes alone: `λa + λb <= Cμ/2`, or the origin when
/// `C <= 1` (a single coded node cannot serve either file).
pub fn hybrid_all_coded<S: Scalar>(c: usize, mu: &S) -> PiecewiseBoundary<S> {
    if c <= 1 {
        return PiecewiseBoundary::point();
    }
    linear_law(c, mu)
}

fn linear_law<S: Scalar>(c: usize, mu: &S) -> PiecewiseBoundary<S> {
    let side = S::from_count(c) * mu.clone() / S::from_int(2);
    chain_from(vec![(S::zero(), side.clone()), (side, S::zero())]).expect("a line is a valid chain")
}

fn half<S: Scalar>(twice: usize, mu: &S) -> S {
    S::from_count(twice) * mu.clone() / S::from_int(2)
}

/// Adds one systematic node to a hybrid region.
///
/// Adding an a-node while `A < C` prepends a slope `−1/2` segment from
/// `((A+C+1)/2 + B)μ` and shifts the rest right by `μ`; with `A >= C` the
/// prefix is flat at `λb*`. Adding a b-node lifts the chain by `μ`, and while
/// `B < C` it also appends a slope `−2` tail reaching `μ/2` further right.
pub fn hybrid_add_node<S: Scalar>(
    boundary: &PiecewiseBoundary<S>,
    state: HybridSpec,
    which: HybridFile,
    mu: &S,
) -> Result<(PiecewiseBoundary<S>, HybridSpec)> {
    let (a, b, c) = (state.a_nodes, state.b_nodes, state.coded_nodes);
    let upper = boundary.upper();
    let mut points: Vec<(S, S)> = Vec::with_capacity(upper.len() + 2);
    let next = match which {
        HybridFile::A => {
            if a < c {
                points.push((S::zero(), half(a + c + 1 + 2 * b, mu)));
                points.push((mu.clone(), half(a + c + 2 * b, mu)));
            } else {
                let top = boundary.lambda_b_star().clone();
                points.push((S::zero(), top.clone()));
                points.push((mu.clone(), top));
            }
            points.extend(upper.iter().map(|(x, y)| (x.clone() + mu.clone(), y.clone())));
            HybridSpec::new(a + 1, b, c)
        }
        HybridFile::B => {
            points.extend(upper.iter().map(|(x, y)| (x.clone(), y.clone() + mu.clone())));
            if b < c {
                let offset = S::from_count(2 * a + b + c + 1) * mu.clone();
                let f = |x: &S| offset.clone() - S::from_int(2) * x.clone();
                let s = boundary.lambda_a_star().clone();
                let end = s.clone() + mu.clone() / S::from_int(2);
                points.push((s.clone(), f(&s)));
                points.push((end.clone(), f(&end)));
            }
            HybridSpec::new(a, b + 1, c)
        }
    };
    Ok((chain_from(points)?, next))
}

/// Folds `A` a-nodes and then `B` b-nodes into the linear law of `C` coded
/// nodes. The seed keeps the law `λa + λb <= Cμ/2` even for `C = 1`, where
/// the true region of the lone coded node is the origin.
pub fn hybrid_compose<S: Scalar>(spec: HybridSpec, mu: &S) -> Result<PiecewiseBoundary<S>> {
    let mut state = HybridSpec::new(0, 0, spec.coded_nodes);
    let mut chain = if spec.coded_nodes == 0 {
        PiecewiseBoundary::point()
    } else {
        linear_law(spec.coded_nodes, mu)
    };
    let steps = std::iter::repeat_n(HybridFile::A, spec.a_nodes)
        .chain(std::iter::repeat_n(HybridFile::B, spec.b_nodes));
    for which in steps {
        (chain, state) = hybrid_add_node(&chain, state, which, mu)?;
    }
    Ok(chain)
}

/// Direct evaluation of the closed-form boundary: `λa* = min{A + C, A + B/2 + C/2}μ`
/// and `L` flat at `(B + C)μ` up to `(A − C)μ` when `A > C`, then slope `−1/2`
/// up to `Aμ`, slope `−1` up to `(A + C/2)μ` and slope `−2` beyond.
pub fn hybrid_theorem_boundary<S: Scalar>(spec: HybridSpec, mu: &S) -> PiecewiseBoundary<S> {
    let (a, b, c) = (spec.a_nodes, spec.b_nodes, spec.coded_nodes);
    let m = |twice: usize| half(twice, mu);
    let star = min_ref(&m(2 * (a + c)), &m(2 * a + b + c));
    let eval = |x: &S| -> S {
        let two = S::from_int(2);
        if a > c && *x <= m(2 * (a - c)) {
            m(2 * (b + c))
        } else if *x <= m(2 * a) {
            m(a + 2 * b + c) - x.clone() / two
        } else if *x <= m(2 * a + c) {
            m(2 * a + 2 * b + c) - x.clone()
        } else {
            m(4 * a + 2 * b + 2 * c) - two * x.clone()
        }
    };
    let mut xs = vec![S::zero(), m(2 * a), m(2 * a + c), star.clone()];
    if a > c {
        xs.push(m(2 * (a - c)));
    }
    xs.retain(|x| *x <= star);
    xs.sort();
    xs.dedup();
    let points = xs
        .into_iter()
        .map(|x| {
            let y = eval(&x);
            (x, y)
        })
        .collect();
    chain_from(points).expect("closed-form chain is monotone and concave")
}
