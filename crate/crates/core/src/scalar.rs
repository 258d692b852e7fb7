//! Scalar abstraction shared by every module.
//!
//! Coefficients, gaps and norms are all carried as a generic [`Real`]. The
//! symbolic layer only needs [`num_traits::Float`]; the dense backend also
//! needs [`nalgebra::RealField`] for eigendecompositions. Both `f32` and `f64`
//! implement the trait. Because the two supertraits share method names
//! (`sqrt`, `abs`, ...), generic code calls them through `Float::` explicitly.

use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar type usable for Pauli coefficients and dense linear algebra.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + nalgebra::RealField
    + Copy
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal; always succeeds for the supported types.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64` for reporting.
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// `base` for double precision; for narrower types the tolerance is
    /// widened so that it never sits below a few thousand ulps.
    fn tolerance(base: f64) -> Self {
        let floor = 4096.0 * <Self as Float>::epsilon().as_f64();
        Self::lit(base.max(floor))
    }
}

impl Real for f64 {}
impl Real for f32 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_widens_for_single_precision() {
        assert_eq!(<f64 as Real>::tolerance(1e-12), 1e-12);
        assert!(<f32 as Real>::tolerance(1e-12) > 1e-4);
    }
}
