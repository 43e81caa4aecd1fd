//! Exact 2-D boundary tracing by support-function refinement.
//!
//! Starting from the two axis intercepts, every chord between adjacent
//! vertices is pushed outward along its normal. A second LP on the optimal
//! face picks the face's upper-left end, so every inserted point is a true
//! vertex of the projected polygon and the refinement terminates.

use crate::error::{Error, Result};
use crate::exactlp::{lp_solve, LpStatus};
use crate::piecewise::PiecewiseBoundary;
use crate::region::SystemConfig;
use crate::scalar::Scalar;

/// Boundary `L(λ_1)` of a two-file system.
pub fn trace_boundary_2d<S: Scalar>(config: &SystemConfig<S>) -> Result<PiecewiseBoundary<S>> {
    if config.k() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            got: config.k(),
        });
    }
    trace_slice_2d(config, 0, 1, &[])
}

/// Boundary of the axis-aligned slice spanned by `x_file` and `y_file`, with
/// the remaining `K − 2` rates fixed (in file order).
pub fn trace_slice_2d<S: Scalar>(
    config: &SystemConfig<S>,
    x_file: usize,
    y_file: usize,
    fixed: &[S],
) -> Result<PiecewiseBoundary<S>> {
    let k = config.k();
    if x_file >= k || y_file >= k || x_file == y_file {
        return Err(Error::InvalidArgument(format!(
            "slice axes ({x_file}, {y_file}) are invalid for K = {k}"
        )));
    }
    if fixed.len() + 2 != k {
        return Err(Error::Mismatch(format!(
            "expected {} fixed rates, got {}",
            k - 2,
            fixed.len()
        )));
    }
    let mut rest = fixed.iter();
    let pinned: Vec<Option<S>> = (0..k)
        .map(|f| {
            if f == x_file || f == y_file {
                None
            } else {
                rest.next().cloned()
            }
        })
        .collect();
    let tracer = Tracer {
        config,
        pinned,
        x_file,
        y_file,
    };

    let top = tracer.axis_max(false)?;
    let right = tracer.axis_max(true)?;
    let start = (S::zero(), top);
    let end = (right, S::zero());
    if start == end {
        return Ok(PiecewiseBoundary::point());
    }
    let mut vertices = vec![start.clone()];
    tracer.refine(&start, &end, &mut vertices)?;
    vertices.push(end);
    PiecewiseBoundary::new(vertices).map(|b| b.normalized())
}

struct Tracer<'a, S> {
    config: &'a SystemConfig<S>,
    pinned: Vec<Option<S>>,
    x_file: usize,
    y_file: usize,
}

impl<S: Scalar> Tracer<'_, S> {
    fn weights(&self, wx: &S, wy: &S) -> Vec<S> {
        let mut w = vec![S::zero(); self.config.k()];
        w[self.x_file] = wx.clone();
        w[self.y_file] = wy.clone();
        self.config.file_weights(&w)
    }

    /// Largest rate on one axis with the other slice rate pinned to zero.
    fn axis_max(&self, along_x: bool) -> Result<S> {
        let (free, zero) = if along_x {
            (self.x_file, self.y_file)
        } else {
            (self.y_file, self.x_file)
        };
        let mut pinned = self.pinned.clone();
        pinned[zero] = Some(S::zero());
        let mut obj = vec![S::zero(); self.config.k()];
        obj[free] = S::one();
        let lp = self.config.base_problem(&pinned).maximize(self.config.file_weights(&obj));
        let res = lp_solve(&lp)?;
        match res.status {
            LpStatus::Optimal => Ok(res.value.expect("optimal value")),
            _ => Err(Error::OutsideRegion),
        }
    }

    /// Upper-left vertex of the face maximizing `wx λx + wy λy`, with its value.
    fn support_vertex(&self, wx: &S, wy: &S) -> Result<(S, (S, S))> {
        let objective = self.weights(wx, wy);
        let lp = self.config.base_problem(&self.pinned).maximize(objective.clone());
        let value = lp_solve(&lp)?.value.expect("slice is nonempty and bounded");

        let mut face = self.config.base_problem(&self.pinned);
        face.push_eq(objective, value.clone());
        let face = face.maximize(self.weights(&-wy.clone(), wx));
        let x = lp_solve(&face)?.solution.expect("optimal face is nonempty");
        let rates = self.config.rates_of(&x);
        Ok((value, (rates[self.x_file].clone(), rates[self.y_file].clone())))
    }

    fn refine(&self, p: &(S, S), q: &(S, S), out: &mut Vec<(S, S)>) -> Result<()> {
        let wx = p.1.clone() - q.1.clone();
        let wy = q.0.clone() - p.0.clone();
        let chord = wx.clone() * p.0.clone() + wy.clone() * p.1.clone();
        let (value, r) = self.support_vertex(&wx, &wy)?;
        if value > chord {
            self.refine(p, &r, out)?;
            out.push(r.clone());
            self.refine(&r, q, out)?;
        }
        Ok(())
    }
}
