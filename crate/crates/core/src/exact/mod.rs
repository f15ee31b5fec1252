//! Exact combinatorics of grid diagrams in arbitrary-precision arithmetic.

pub mod counts;
pub mod moments;
pub mod series;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use counts::{
    cbar_knots, cbar_links, cbar_partition, cbar_series, cbar_table_recurrence, cbar_table_series,
    component_series, count_knots, count_links, factorial, subfactorial, total_series, CountTable,
};
pub use moments::{
    bound_margin, expected_components, factorial_moment2_components, inverse_e_bracket,
    knot_size_distribution, to_decimal, variance_components, BoundMargin, HarmonicTable,
    KnotSizeDistribution,
};
pub use series::SeriesQ;
