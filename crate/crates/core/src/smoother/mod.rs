//! Corridor smoothing: G1 line/arc paths of bounded curvature threaded
//! through a ribbon of hexagons.
//!
//! The smoothing heuristic fixes the start pose and leaves the goal free on
//! the corridor's exit edge: a taut polyline is pulled through the corridor,
//! corners receive arc fillets at the largest radius that fits the legs and
//! the corridor, and waypoints then relax laterally to reduce first the
//! maximum and then the median of the path curvature.

mod corridor;
mod relax;

pub use corridor::{build_corridor, build_corridor_with, Corridor, CorridorError, Edge};

use crate::catalog::Catalog;
use crate::cost::{CostTable, TableError};
use crate::geometry::{Point, Pose};
use crate::hexgrid::{direction_between, step, Direction, GridSpec, HexCell};
use crate::math::FloatExt;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Segment flavor; lines have zero curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SegmentKind {
    Line,
    Arc,
}

/// One G1 path piece: a line or a circular arc.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArcSegment {
    pub kind: SegmentKind,
    pub start: Point,
    /// Start heading in radians, y up.
    pub heading: f64,
    /// Signed curvature; positive turns left. Zero for lines.
    pub curvature: f64,
    pub length: f64,
}

impl ArcSegment {
    pub fn line(start: Point, heading: f64, length: f64) -> Self {
        Self {
            kind: SegmentKind::Line,
            start,
            heading,
            curvature: 0.0,
            length,
        }
    }

    pub fn arc(start: Point, heading: f64, curvature: f64, length: f64) -> Self {
        Self {
            kind: SegmentKind::Arc,
            start,
            heading,
            curvature,
            length,
        }
    }

    /// Pose after driving `s` along the segment.
    pub fn pose_at(&self, s: f64) -> Pose {
        if self.kind == SegmentKind::Line || self.curvature == 0.0 {
            let u = crate::geometry::unit(self.heading);
            Pose::new(self.start + u.scale(s), self.heading)
        } else {
            let k = self.curvature;
            let theta = self.heading + k * s;
            let dx = (theta.sin_() - self.heading.sin_()) / k;
            let dy = -(theta.cos_() - self.heading.cos_()) / k;
            Pose::new(self.start + Point::new(dx, dy), theta)
        }
    }

    pub fn end_pose(&self) -> Pose {
        self.pose_at(self.length)
    }
}

/// An ordered list of G1-continuous segments.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArcPath {
    pub segments: Vec<ArcSegment>,
}

/// One sample along an [`ArcPath`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathSample {
    pub s: f64,
    pub position: Point,
    pub heading: f64,
    pub curvature: f64,
}

impl ArcPath {
    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn start_pose(&self) -> Option<Pose> {
        self.segments
            .first()
            .map(|s| Pose::new(s.start, s.heading))
    }

    pub fn end_pose(&self) -> Option<Pose> {
        self.segments.last().map(|s| s.end_pose())
    }

    /// Largest absolute curvature over the segments.
    pub fn max_abs_curvature(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.curvature.abs_())
            .fold(0.0, f64::max)
    }
}

/// Samples a path at arc-length positions 0, step, 2*step, ..., end. The end
/// point is always included. Each sample carries the curvature of the
/// segment containing it.
pub fn sample_path(path: &ArcPath, step: f64) -> Vec<PathSample> {
    assert!(step > 0.0, "sample step must be positive");
    let total = path.length();
    let mut samples = Vec::new();
    let mut positions: Vec<f64> = Vec::new();
    let mut s = 0.0;
    while s < total - 1e-9 * step {
        positions.push(s);
        s += step;
    }
    positions.push(total);

    let mut seg_idx = 0;
    let mut seg_start = 0.0;
    for s in positions {
        while seg_idx + 1 < path.segments.len()
            && s >= seg_start + path.segments[seg_idx].length
        {
            seg_start += path.segments[seg_idx].length;
            seg_idx += 1;
        }
        let seg = match path.segments.get(seg_idx) {
            Some(seg) => seg,
            None => break,
        };
        let local = (s - seg_start).clamp(0.0, seg.length);
        let pose = seg.pose_at(local);
        samples.push(PathSample {
            s,
            position: pose.position,
            heading: pose.heading,
            curvature: seg.curvature,
        });
    }
    samples
}

/// Normalized median curvature: the linear-interpolated median of |kappa|
/// over uniform arc-length samples, divided by `kappa_max`.
pub fn median_curvature_cost(path: &ArcPath, kappa_max: f64, step: f64) -> f64 {
    let samples = sample_path(path, step);
    if samples.is_empty() {
        return 0.0;
    }
    let mut values: Vec<f64> = samples.iter().map(|s| s.curvature.abs_()).collect();
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let median = if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    };
    median / kappa_max
}

/// Smoothing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SmoothingConfig {
    /// Curvature bound, 1 / r_min.
    pub kappa_max: f64,
    /// Arc-length sampling step for containment checks and the median.
    pub sample_step: f64,
    /// Total relaxation sweep budget.
    pub max_iterations: usize,
    /// Relative improvement threshold on the curvature objective.
    pub convergence_tol: f64,
}

impl SmoothingConfig {
    pub fn for_spec(spec: &GridSpec) -> Self {
        Self {
            kappa_max: spec.kappa_max(),
            sample_step: spec.cell_inner_radius / 10.0,
            max_iterations: 400,
            convergence_tol: 1e-7,
        }
    }
}

/// Smoothing failure.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothError {
    Corridor(CorridorError),
    StartOutsideCorridor,
    /// No curvature-feasible path was found; carries max |kappa| / kappa_max
    /// of the best attempt.
    Infeasible { kappa_ratio: f64, detail: String },
    EmptyPath,
}

impl fmt::Display for SmoothError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothError::Corridor(e) => write!(f, "{e}"),
            SmoothError::StartOutsideCorridor => {
                write!(f, "start pose lies outside the first corridor cell")
            }
            SmoothError::Infeasible {
                kappa_ratio,
                detail,
            } => write!(
                f,
                "no curvature-feasible path found ({detail}; max |kappa|/kappa_max = {kappa_ratio})"
            ),
            SmoothError::EmptyPath => write!(f, "empty path"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SmoothError {}

impl From<CorridorError> for SmoothError {
    fn from(e: CorridorError) -> Self {
        SmoothError::Corridor(e)
    }
}

/// Smooths a corridor: the result starts exactly at `start_pose`, ends on
/// the corridor's exit edge with free heading, stays inside the corridor,
/// and respects |kappa| <= kappa_max.
pub fn smooth(
    corridor: &Corridor,
    start_pose: Pose,
    config: &SmoothingConfig,
) -> Result<ArcPath, SmoothError> {
    let spec = corridor.spec();
    let rc = spec.cell_inner_radius;
    let first = corridor.cells()[0];
    if crate::geometry::hexagon_inside_margin(start_pose.position, first, spec) < -1e-6 * rc {
        return Err(SmoothError::StartOutsideCorridor);
    }

    if corridor.cells().len() == 1 {
        return smooth_single_cell(corridor, start_pose, config);
    }

    let path = relax::run(corridor, start_pose, config)?;
    finish_checks(corridor, &path, start_pose, config)?;
    Ok(path)
}

fn smooth_single_cell(
    corridor: &Corridor,
    start_pose: Pose,
    config: &SmoothingConfig,
) -> Result<ArcPath, SmoothError> {
    let exit = corridor.exit_edge();
    let u = start_pose.direction();
    let e = exit.b - exit.a;
    let denom = u.cross(e);
    if denom.abs_() < 1e-12 {
        return Err(SmoothError::Infeasible {
            kappa_ratio: 0.0,
            detail: "start heading is parallel to the exit edge".into(),
        });
    }
    let r = exit.a - start_pose.position;
    let t = r.cross(e) / denom;
    let s = r.cross(u) / denom;
    if t < 0.0 || !(-1e-9..=1.0 + 1e-9).contains(&s) {
        return Err(SmoothError::Infeasible {
            kappa_ratio: 0.0,
            detail: "start heading does not reach the exit edge".into(),
        });
    }
    let mut path = ArcPath::default();
    path.segments
        .push(ArcSegment::line(start_pose.position, start_pose.heading, t));
    finish_checks(corridor, &path, start_pose, config)?;
    Ok(path)
}

/// Final postcondition gate shared by all smoothing entry points.
fn finish_checks(
    corridor: &Corridor,
    path: &ArcPath,
    start_pose: Pose,
    config: &SmoothingConfig,
) -> Result<(), SmoothError> {
    let rc = corridor.spec().cell_inner_radius;
    let max_kappa = path.max_abs_curvature();
    if max_kappa > config.kappa_max * (1.0 + 1e-12) {
        return Err(SmoothError::Infeasible {
            kappa_ratio: max_kappa / config.kappa_max,
            detail: "curvature bound exceeded".into(),
        });
    }
    for sample in sample_path(path, config.sample_step / 2.0) {
        if corridor.inside_margin(sample.position) < -1e-6 * rc {
            return Err(SmoothError::Infeasible {
                kappa_ratio: max_kappa / config.kappa_max,
                detail: format!(
                    "path leaves the corridor at s = {} (margin {})",
                    sample.s,
                    corridor.inside_margin(sample.position)
                ),
            });
        }
    }
    if let Some(start) = path.start_pose() {
        debug_assert!(start.position.distance(start_pose.position) < 1e-9 * rc);
    }
    Ok(())
}

/// A smoothed grid path, possibly assembled from several corridor chunks
/// when the grid path revisits cells.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SmoothedGridPath {
    pub path: ArcPath,
    /// Path indices where the cell sequence was split before smoothing.
    pub splits: Vec<usize>,
}

/// Smooths a full grid path. Revisiting paths are split at the first
/// revisited cell and smoothed piecewise with pose continuity at the splits.
///
/// `start_heading` defaults to the first move direction.
pub fn smooth_grid_path(
    cells: &[HexCell],
    spec: &GridSpec,
    start_heading: Option<f64>,
    config: &SmoothingConfig,
) -> Result<SmoothedGridPath, SmoothError> {
    if cells.is_empty() {
        return Err(SmoothError::EmptyPath);
    }
    let heading = start_heading.unwrap_or_else(|| {
        if cells.len() >= 2 {
            direction_between(cells[0], cells[1])
                .expect("path cells are adjacent")
                .heading()
        } else {
            0.0
        }
    });

    // Chunk boundaries: each chunk is revisit-free; the next chunk starts at
    // the last cell of the previous one.
    let mut chunks: Vec<(usize, usize)> = Vec::new(); // inclusive index ranges
    let mut chunk_start = 0;
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert(cells[0]);
    for i in 1..cells.len() {
        if !seen.insert(cells[i]) {
            chunks.push((chunk_start, i - 1));
            chunk_start = i - 1;
            seen.clear();
            seen.insert(cells[i - 1]);
            seen.insert(cells[i]);
        }
    }
    chunks.push((chunk_start, cells.len() - 1));

    let mut splits = Vec::new();
    let mut segments = Vec::new();
    let mut pose = Pose::new(Point::from_cell(cells[0], spec), heading);
    for (idx, &(lo, hi)) in chunks.iter().enumerate() {
        let chunk = &cells[lo..=hi];
        let entry_dir = if lo == 0 {
            None
        } else {
            splits.push(lo);
            // Chunks overlap on one cell; enter through the edge crossed by
            // the previous chunk's exit.
            Some(
                direction_between(cells[lo], cells[lo - 1])
                    .expect("path cells are adjacent"),
            )
        };
        let exit_dir = if hi + 1 < cells.len() {
            Some(direction_between(cells[hi], cells[hi + 1]).expect("path cells are adjacent"))
        } else {
            None
        };
        let corridor = build_corridor_with(chunk, spec, entry_dir, exit_dir)?;
        let part = smooth(&corridor, pose, config)?;
        if let Some(end) = part.end_pose() {
            pose = end;
        }
        let _ = idx;
        segments.extend(part.segments);
    }
    Ok(SmoothedGridPath {
        path: ArcPath { segments },
        splits,
    })
}

/// Lays out each primitive's canonical signature from direction 0, smooths
/// it with the start pose at the first cell center, and records the
/// normalized median curvature, producing a cost table.
pub fn precompute_primitive_costs(
    catalog: &Catalog,
    spec: &GridSpec,
) -> Result<CostTable, SmoothError> {
    let config = SmoothingConfig::for_spec(spec);
    let mut costs = Vec::with_capacity(catalog.primitives().len());
    for p in catalog.primitives() {
        let cells = primitive_cells(p.canonical.turns());
        let corridor = build_corridor(&cells, spec)?;
        let start = Pose::new(Point::from_cell(cells[0], spec), 0.0);
        let path = smooth(&corridor, start, &config)?;
        let cost = median_curvature_cost(&path, config.kappa_max, config.sample_step);
        costs.push(cost.min(1.0));
    }
    CostTable::new("precomputed_ribbon", costs).map_err(|e: TableError| SmoothError::Infeasible {
        kappa_ratio: f64::NAN,
        detail: format!("{e}"),
    })
}

/// The cell layout of a turn signature starting at the origin moving in
/// direction 0.
pub fn primitive_cells(turns: &[crate::catalog::TurnSymbol]) -> Vec<HexCell> {
    let mut cells = Vec::with_capacity(turns.len() + 2);
    let mut cell = HexCell::new(0, 0);
    cells.push(cell);
    let mut dir = Direction::new(0);
    cell = step(cell, dir);
    cells.push(cell);
    for t in turns {
        dir = Direction::new(i32::from(dir.index()) + t.delta());
        cell = step(cell, dir);
        cells.push(cell);
    }
    cells
}

#[cfg(test)]
mod tests;
