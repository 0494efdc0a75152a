//! Exact rewriting and numerical analysis of the analytic paraproducts
//! `T_g f = int_0^z f g'`, `S_g f = int_0^z f' g` and `M_g f = g f` on the
//! unit disc.

pub mod geometry;
pub mod norms;
pub mod opnorm;
pub mod scalar;
pub mod series;
pub mod symbols;
pub mod wordalg;

pub use num_complex::Complex64;
pub use series::{ExactSeries, GaussianRational};
pub use wordalg::{OperatorExpr, Word};

/// Disc quadrature in double precision.
pub type Grid = geometry::DiscGrid<f64>;
/// Symbol in double precision.
pub type Symbol = symbols::SymbolSpec<f64>;
/// Truncated power series with double precision coefficients.
pub type FloatSeries = series::PowerSeries<Complex64>;
/// Single precision variants.
pub type Grid32 = geometry::DiscGrid<f32>;
pub type Symbol32 = symbols::SymbolSpec<f32>;
