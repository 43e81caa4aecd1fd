//! Exact scalar abstraction shared by every solver in the crate.
//!
//! All region computations are carried out over an ordered field with exact
//! arithmetic. Floating-point types do not implement [`Ord`] and are therefore
//! excluded by construction; the crate-root alias [`crate::Rational`] picks the
//! arbitrary-precision instantiation, while `Ratio<i64>` is available for small
//! instances where overflow cannot occur.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// An exact, totally ordered field element.
pub trait Scalar:
    Clone
    + Ord
    + Debug
    + Display
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer is representable in every exact scalar")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable in every exact scalar")
    }

    /// `num / den`; panics on a zero denominator.
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_int(num) / Self::from_int(den)
    }

    /// `max(self, 0)`.
    fn pos_part(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            Self::zero()
        }
    }

    /// Parses `"p/q"` or `"n"`.
    fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let (num, den) = trimmed.split_once('/').unwrap_or((trimmed, "1"));
        Self::from_str_radix(&format!("{}/{}", num.trim(), den.trim()), 10)
            .map_err(|_| Error::Parse(format!("not a rational number: {trimmed:?}")))
    }

    /// Lossy conversion used only for rendering.
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Clone
        + Ord
        + Debug
        + Display
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Minimum of two scalars by reference.
pub(crate) fn min_ref<S: Scalar>(a: &S, b: &S) -> S {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `n choose r` as a scalar.
pub(crate) fn binomial<S: Scalar>(n: usize, r: usize) -> S {
    if r > n {
        return S::zero();
    }
    let r = r.min(n - r);
    let mut acc = S::one();
    for i in 0..r {
        acc = acc * S::from_count(n - i) / S::from_count(i + 1);
    }
    acc
}
