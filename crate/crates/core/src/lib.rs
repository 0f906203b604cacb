//! Curvature-constrained path planning on hexagonal grids.
//!
//! The crate has two stages that are usable separately:
//!
//! * a grid search ([`astar::plan`]) that finds a sequence of hex cells from
//!   start to target such that every trailing window of cells matches a
//!   catalog of admissible motion primitives, under a cost that weighs cell
//!   count against the precomputed curviness of each primitive, and
//! * a corridor smoother ([`smoother::smooth`]) that threads a G1 line/arc
//!   path of bounded curvature through the ribbon of hexagons selected by
//!   the search.
//!
//! The crate is `no_std`-compatible (requires `alloc`); enable the `libm`
//! feature when building without `std`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("hexarc-core requires either the `std` or the `libm` feature");

mod math;

pub mod astar;
pub mod catalog;
pub mod cost;
pub mod geometry;
pub mod hexgrid;
pub mod oracle;
pub mod smoother;

pub use astar::{plan, PlanConfig, PlanError, PlanResult};
pub use catalog::{Catalog, Primitive, TurnSignature, TurnSymbol};
pub use cost::{CostBreakdown, CostTable, TableVariant, Weights};
pub use hexgrid::{Direction, GridSpec, HexCell, MapGrid};
pub use smoother::{ArcPath, Corridor, SmoothingConfig};
