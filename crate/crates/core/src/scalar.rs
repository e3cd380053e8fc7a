//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type the graph algebra and solver are written against.
///
/// Implemented for `f32` and `f64`. Special functions (normal CDF and
/// quantile) are evaluated in `f64` and converted back.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Absolute tolerance for structural checks such as level and row sums.
    fn structural_tolerance() -> Self {
        let floor = Self::lit(1e-12);
        let scaled = Self::epsilon() * Self::lit(64.0);
        if scaled > floor {
            scaled
        } else {
            floor
        }
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
