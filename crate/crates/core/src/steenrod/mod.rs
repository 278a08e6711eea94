//! Steenrod-algebra side of the story: Milnor basis arithmetic at p = 2,
//! minimal free resolutions, the cobar oracle, exterior-algebra Ext closed
//! forms, and the BP polynomial charts with their comparison map.

pub mod bp;
pub mod cobar;
pub mod exterior;
pub mod milnor;
pub mod resolution;

pub use bp::{bp_coefficients, bp_comparison_map, bp_source_chart, bp_target_chart, BpComparison};
pub use cobar::{cobar_ext_oracle, CobarError};
pub use exterior::{ext_exterior, ExteriorError, GradedFpSpace, PolyExtChart, PolyGen};
pub use milnor::{milnor_basis, milnor_degree, milnor_product, F2Sum, MilnorMono};
pub use resolution::{minimal_resolution, SteenrodResolution};
