//! Exact piecewise-linear boundary chains of two-file capacity regions.
//!
//! A chain runs from `(0, L(0))` to `(λa*, 0)`. Consecutive vertices are
//! distinct, `λa` never decreases and `λb` never increases, so a flat top and
//! a vertical drop at `λa*` are both representable. The region below the
//! chain is convex.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseBoundary<S> {
    vertices: Vec<(S, S)>,
}

fn cross<S: Scalar>(o: &(S, S), a: &(S, S), b: &(S, S)) -> S {
    (a.0.clone() - o.0.clone()) * (b.1.clone() - o.1.clone())
        - (a.1.clone() - o.1.clone()) * (b.0.clone() - o.0.clone())
}

impl<S: Scalar> PiecewiseBoundary<S> {
    /// Validates monotonicity, end points and concavity.
    pub fn new(vertices: Vec<(S, S)>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidBoundary("empty vertex chain".into()))?;
        if !first.0.is_zero() {
            return Err(Error::InvalidBoundary(format!(
                "chain must start at λa = 0, starts at {}",
                first.0
            )));
        }
        let last = vertices.last().expect("nonempty");
        if !last.1.is_zero() {
            return Err(Error::InvalidBoundary(format!(
                "chain must end at λb = 0, ends at {}",
                last.1
            )));
        }
        if vertices.iter().any(|(x, y)| x.is_negative() || y.is_negative()) {
            return Err(Error::InvalidBoundary("negative coordinate".into()));
        }
        for w in vertices.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a == b || b.0 < a.0 || b.1 > a.1 {
                return Err(Error::InvalidBoundary(format!(
                    "vertices ({}, {}) -> ({}, {}) are not monotone",
                    a.0, a.1, b.0, b.1
                )));
            }
        }
        for w in vertices.windows(3) {
            if cross(&w[0], &w[1], &w[2]).is_positive() {
                return Err(Error::InvalidBoundary(format!(
                    "chain turns outward at ({}, {})",
                    w[1].0, w[1].1
                )));
            }
        }
        Ok(Self { vertices })
    }

    /// The degenerate region `{(0, 0)}`.
    pub fn point() -> Self {
        Self {
            vertices: vec![(S::zero(), S::zero())],
        }
    }

    pub fn vertices(&self) -> &[(S, S)] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<(S, S)> {
        self.vertices
    }

    /// Largest supported `λa`.
    pub fn lambda_a_star(&self) -> &S {
        &self.vertices.last().expect("nonempty").0
    }

    /// `L(0)`, the largest supported `λb`.
    pub fn lambda_b_star(&self) -> &S {
        &self.vertices[0].1
    }

    /// Chain with collinear interior vertices removed.
    pub fn normalized(&self) -> Self {
        let mut out: Vec<(S, S)> = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            while out.len() >= 2 && cross(&out[out.len() - 2], &out[out.len() - 1], v).is_zero() {
                out.pop();
            }
            out.push(v.clone());
        }
        Self { vertices: out }
    }

    /// `L(x)`: the largest `λb` on the chain at `λa = x`, or `None` outside `[0, λa*]`.
    pub fn eval(&self, x: &S) -> Option<S> {
        if x.is_negative() || x > self.lambda_a_star() {
            return None;
        }
        if self.vertices.len() == 1 {
            return Some(self.vertices[0].1.clone());
        }
        self.vertices
            .windows(2)
            .filter(|w| w[0].0 <= *x && *x <= w[1].0)
            .map(|w| {
                let (a, b) = (&w[0], &w[1]);
                if a.0 == b.0 {
                    a.1.clone()
                } else {
                    a.1.clone() + (b.1.clone() - a.1.clone()) * (x.clone() - a.0.clone()) / (b.0.clone() - a.0.clone())
                }
            })
            .max()
    }

    /// Vertices of the graph of `L`, i.e. without a trailing vertical drop.
    pub fn upper(&self) -> &[(S, S)] {
        let mut end = self.vertices.len();
        while end >= 2 && self.vertices[end - 1].0 == self.vertices[end - 2].0 {
            end -= 1;
        }
        &self.vertices[..end]
    }

    /// One `λa,λb` line per vertex, rationals as `p/q`.
    pub fn to_csv(&self) -> String {
        self.vertices
            .iter()
            .map(|(x, y)| format!("{x},{y}\n"))
            .collect()
    }

    /// Multiplies both coordinates by `factor`.
    pub fn scaled(&self, factor: &S) -> Self {
        Self {
            vertices: self
                .vertices
                .iter()
                .map(|(x, y)| (x.clone() * factor.clone(), y.clone() * factor.clone()))
                .collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for PiecewiseBoundary<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({x}, {y})")).collect();
        f.write_str(&parts.join(" "))
    }
}

impl<S: Scalar> Serialize for PiecewiseBoundary<S> {
    fn serialize<Z: serde::Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let pairs: Vec<[String; 2]> = self
            .vertices
            .iter()
            .map(|(x, y)| [x.to_string(), y.to_string()])
            .collect();
        pairs.serialize(serializer)
    }
}

/// `(numerator, denominator)`.
pub type Fraction = (i64, i64);

/// Convenience for tests and fixtures: integer-ratio vertex list.
pub fn chain<S: Scalar>(points: &[(Fraction, Fraction)]) -> Result<PiecewiseBoundary<S>> {
    PiecewiseBoundary::new(
        points
            .iter()
            .map(|&((xn, xd), (yn, yd))| (S::ratio(xn, xd), S::ratio(yn, yd)))
            .collect(),
    )
}
