//! Search cost: weighted cell count plus per-primitive curvature cost, and
//! the euclidean cost-to-go.
//!
//! Three built-in curvature cost tables ship with the crate. `ribbon` holds
//! the published per-primitive costs of the corridor smoother; the adapted
//! variant equalizes primitives that differ only in traversal direction and
//! zeroes the alternating zig-zag, which admits a straight chord; the manual
//! `curvature_penalty` variant drives the sharpest primitives to the maximum.

use crate::hexgrid::{center_distance, GridSpec, HexCell};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Weights of Eq-style cost-to-come: w_n on cell count, w_kappa on curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Weights {
    pub w_n: f64,
    pub w_kappa: f64,
}

impl Weights {
    pub fn new(w_n: f64, w_kappa: f64) -> Result<Self, TableError> {
        if !(w_n >= 0.0) || !(w_kappa >= 0.0) {
            return Err(TableError::NegativeWeight);
        }
        Ok(Self { w_n, w_kappa })
    }
}

impl Default for Weights {
    /// The evaluation setting: w_n = 1.0, w_kappa = 5.0.
    fn default() -> Self {
        Self {
            w_n: 1.0,
            w_kappa: 5.0,
        }
    }
}

/// Built-in cost table variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TableVariant {
    Ribbon,
    AdaptedRibbon,
    CurvaturePenalty,
}

impl TableVariant {
    pub const ALL: [TableVariant; 3] = [
        TableVariant::Ribbon,
        TableVariant::AdaptedRibbon,
        TableVariant::CurvaturePenalty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableVariant::Ribbon => "ribbon",
            TableVariant::AdaptedRibbon => "adapted_ribbon",
            TableVariant::CurvaturePenalty => "curvature_penalty",
        }
    }

    pub fn parse(name: &str) -> Result<Self, TableError> {
        match name {
            "ribbon" => Ok(TableVariant::Ribbon),
            "adapted_ribbon" => Ok(TableVariant::AdaptedRibbon),
            "curvature_penalty" => Ok(TableVariant::CurvaturePenalty),
            other => Err(TableError::UnknownVariant(other.into())),
        }
    }
}

const RIBBON: [f64; 9] = [0.0, 0.087, 0.119, 0.195, 0.429, 0.109, 0.429, 0.507, 0.915];
const ADAPTED_RIBBON: [f64; 9] = [0.0, 0.087, 0.119, 0.119, 0.429, 0.0, 0.429, 0.087, 0.915];
const CURVATURE_PENALTY: [f64; 9] = [0.0, 0.1, 0.2, 0.2, 1.0, 0.0, 1.0, 0.1, 1.0];

/// Errors for table construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    UnknownVariant(String),
    NegativeWeight,
    Parse(String),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::UnknownVariant(name) => write!(f, "unknown cost table variant `{name}`"),
            TableError::NegativeWeight => write!(f, "weights must be non-negative"),
            TableError::Parse(reason) => write!(f, "invalid cost table: {reason}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TableError {}

/// Per-primitive curvature costs in [0, 1], indexed by primitive id.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostTable {
    pub variant: String,
    costs: Vec<f64>,
}

impl CostTable {
    pub fn new(variant: impl Into<String>, costs: Vec<f64>) -> Result<Self, TableError> {
        if costs.is_empty() {
            return Err(TableError::Parse("no cost entries".into()));
        }
        for (i, v) in costs.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 || *v > 1.0 {
                return Err(TableError::Parse(format!(
                    "cost for id {} must lie in [0, 1], got {v}",
                    i + 1
                )));
            }
        }
        Ok(Self {
            variant: variant.into(),
            costs,
        })
    }

    /// The exact built-in column for a variant.
    pub fn builtin(variant: TableVariant) -> Self {
        let costs = match variant {
            TableVariant::Ribbon => RIBBON,
            TableVariant::AdaptedRibbon => ADAPTED_RIBBON,
            TableVariant::CurvaturePenalty => CURVATURE_PENALTY,
        };
        Self {
            variant: variant.name().into(),
            costs: costs.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    /// Curvature cost of a primitive id (ids start at 1).
    pub fn c_kappa(&self, id: u8) -> Option<f64> {
        self.costs.get(usize::from(id).checked_sub(1)?).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.costs
    }

    /// Direction-equalized copy: primitives 2/8 and 3/4 each share the lower
    /// cost of the pair, and the zig-zag (id 6) is set to the straight-line
    /// cost. Identity on tables without those ids; idempotent.
    pub fn adapted(&self) -> Self {
        let mut costs = self.costs.clone();
        let mut pair_min = |a: usize, b: usize| {
            if a < costs.len() && b < costs.len() {
                let m = costs[a].min(costs[b]);
                costs[a] = m;
                costs[b] = m;
            }
        };
        pair_min(1, 7); // ids 2 and 8
        pair_min(2, 3); // ids 3 and 4
        if costs.len() > 5 {
            costs[5] = costs[0]; // id 6 matches id 1
        }
        Self {
            variant: format!("{}_adapted", self.variant),
            costs,
        }
    }

    /// Parses the line-based table format: `variant <name>` then one
    /// `<id> <value>` entry per line; `#` starts a comment.
    pub fn parse_document(source: &str) -> Result<Self, TableError> {
        let mut variant: Option<String> = None;
        let mut entries: Vec<(usize, f64)> = Vec::new();
        for (lineno, raw) in source.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap();
            if head == "variant" {
                let name = parts.next().ok_or_else(|| {
                    TableError::Parse(format!("line {}: missing variant name", lineno + 1))
                })?;
                variant = Some(name.into());
                continue;
            }
            let id: usize = head.parse().map_err(|_| {
                TableError::Parse(format!("line {}: bad id `{head}`", lineno + 1))
            })?;
            let value: f64 = parts
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| TableError::Parse(format!("line {}: bad value", lineno + 1)))?;
            if id == 0 {
                return Err(TableError::Parse(format!("line {}: ids start at 1", lineno + 1)));
            }
            entries.push((id, value));
        }
        let variant =
            variant.ok_or_else(|| TableError::Parse("missing `variant` line".into()))?;
        entries.sort_by_key(|(id, _)| *id);
        let mut costs = Vec::with_capacity(entries.len());
        for (i, (id, value)) in entries.iter().enumerate() {
            if *id != i + 1 {
                return Err(TableError::Parse(format!(
                    "ids must cover 1..={} without gaps",
                    entries.len()
                )));
            }
            costs.push(*value);
        }
        Self::new(variant, costs)
    }

    /// Renders the document format parsed by [`CostTable::parse_document`].
    pub fn to_document(&self) -> String {
        let mut out = format!("variant {}\n", self.variant);
        for (i, v) in self.costs.iter().enumerate() {
            out.push_str(&format!("{} {v}\n", i + 1));
        }
        out
    }
}

/// How the curvature term accumulates along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum KappaAccumulation {
    /// Sum the cost of every trailing window entered along the path.
    #[default]
    Accumulated,
    /// Charge only the window leading to the newest cell.
    Literal,
}

/// Cost-to-come for a path of `n_c_star` cells whose trailing window matched
/// `window_primitive` (absent while the path is shorter than a full window).
///
/// `accumulated_kappa` is the running sum of previous window costs; it is
/// only read in accumulated mode.
pub fn cost_to_come(
    n_c_star: u32,
    window_primitive: Option<u8>,
    table: &CostTable,
    w: &Weights,
    mode: KappaAccumulation,
    accumulated_kappa: f64,
) -> f64 {
    let current = window_primitive
        .and_then(|id| table.c_kappa(id))
        .unwrap_or(0.0);
    let kappa_term = match mode {
        KappaAccumulation::Literal => current,
        KappaAccumulation::Accumulated => accumulated_kappa + current,
    };
    w.w_n * f64::from(n_c_star) + w.w_kappa * kappa_term
}

/// Cost-to-go: euclidean center distance in units of the neighbor spacing,
/// making it commensurate with the cell-count term.
pub fn cost_to_go(cell: HexCell, target: HexCell, spec: &GridSpec) -> f64 {
    center_distance(cell, target, spec) / spec.spacing()
}

/// Full cost record: c = c_c + c_g.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostBreakdown {
    pub n_cells: u32,
    pub c_kappa_term: f64,
    pub c_c: f64,
    pub c_g: f64,
    pub c: f64,
}

impl CostBreakdown {
    pub fn new(n_cells: u32, c_kappa_term: f64, c_c: f64, c_g: f64) -> Self {
        Self {
            n_cells,
            c_kappa_term,
            c_c,
            c_g,
            c: c_c + c_g,
        }
    }
}
