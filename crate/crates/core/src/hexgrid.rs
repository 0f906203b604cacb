//! Axial hexagonal coordinates, occupancy maps, and cell-to-plane geometry.
//!
//! Axial coordinates use two axes (q, r); the implicit third cube axis is
//! s = -q - r. The first axis points left to right, the second from top left
//! to bottom right. Cells are pointy-top: direction 0 points due east and
//! neighbor directions advance counterclockwise in 60 degree steps.

use crate::math::FloatExt;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// A cell address in axial coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HexCell {
    pub q: i32,
    pub r: i32,
}

impl HexCell {
    pub const fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    /// The implicit cube axis: s = -q - r.
    pub const fn s(&self) -> i32 {
        -self.q - self.r
    }
}

impl fmt::Display for HexCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.q, self.r)
    }
}

/// One of the six neighbor directions, counterclockwise from east.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Direction(u8);

/// Axial offsets per direction index, fixed by convention.
const OFFSETS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

impl Direction {
    /// All six directions in index order.
    pub const ALL: [Direction; 6] = [
        Direction(0),
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
    ];

    /// Wraps any integer into a direction index mod 6.
    pub fn new(index: i32) -> Self {
        Direction(index.rem_euclid(6) as u8)
    }

    pub const fn index(self) -> u8 {
        self.0
    }

    pub const fn offset(self) -> (i32, i32) {
        OFFSETS[self.0 as usize]
    }

    /// The reverse direction: (d + 3) mod 6.
    pub const fn opposite(self) -> Self {
        Direction((self.0 + 3) % 6)
    }

    /// Heading angle in radians (y up): direction 0 is 0, counterclockwise.
    pub fn heading(self) -> f64 {
        core::f64::consts::FRAC_PI_3 * f64::from(self.0)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Error for [`direction_between`] on non-adjacent cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotAdjacent {
    pub from: HexCell,
    pub to: HexCell,
}

impl fmt::Display for NotAdjacent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cells {} and {} are not adjacent", self.from, self.to)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NotAdjacent {}

/// Grid metrics: inner cell radius (apothem) and minimum turning radius.
///
/// Neighbor cell centers are spaced 2 * cell_inner_radius apart.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub cell_inner_radius: f64,
    pub min_turn_radius: f64,
}

impl GridSpec {
    pub fn new(cell_inner_radius: f64, min_turn_radius: f64) -> Result<Self, MapError> {
        if !(cell_inner_radius > 0.0) {
            return Err(MapError::NonPositiveRadius("cell_inner_radius"));
        }
        if !(min_turn_radius > 0.0) {
            return Err(MapError::NonPositiveRadius("min_turn_radius"));
        }
        Ok(Self {
            cell_inner_radius,
            min_turn_radius,
        })
    }

    /// The regime ratio r_min / r_c.
    pub fn ratio(&self) -> f64 {
        self.min_turn_radius / self.cell_inner_radius
    }

    /// Distance between adjacent cell centers.
    pub fn spacing(&self) -> f64 {
        2.0 * self.cell_inner_radius
    }

    /// Maximum path curvature: 1 / r_min.
    pub fn kappa_max(&self) -> f64 {
        1.0 / self.min_turn_radius
    }
}

/// Inclusive axial bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bounds {
    pub q_min: i32,
    pub q_max: i32,
    pub r_min: i32,
    pub r_max: i32,
}

impl Bounds {
    pub fn contains(&self, cell: HexCell) -> bool {
        cell.q >= self.q_min && cell.q <= self.q_max && cell.r >= self.r_min && cell.r <= self.r_max
    }

    /// Number of cells in the bounded parallelogram.
    pub fn cell_count(&self) -> usize {
        let w = (self.q_max - self.q_min + 1).max(0) as usize;
        let h = (self.r_max - self.r_min + 1).max(0) as usize;
        w * h
    }

    /// Iterates all in-bounds cells in (q, r) lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = HexCell> + '_ {
        let b = *self;
        (b.q_min..=b.q_max)
            .flat_map(move |q| (b.r_min..=b.r_max).map(move |r| HexCell::new(q, r)))
    }
}

/// Validation errors for map construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    NonPositiveRadius(&'static str),
    EmptyBounds,
    StartOutOfBounds(HexCell),
    TargetOutOfBounds(HexCell),
    StartOccupied(HexCell),
    TargetOccupied(HexCell),
    OccupiedOutOfBounds(HexCell),
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::NonPositiveRadius(field) => write!(f, "{field} must be positive"),
            MapError::EmptyBounds => write!(f, "bounds contain no cells"),
            MapError::StartOutOfBounds(c) => write!(f, "start cell {c} is out of bounds"),
            MapError::TargetOutOfBounds(c) => write!(f, "target cell {c} is out of bounds"),
            MapError::StartOccupied(c) => write!(f, "start cell {c} is occupied"),
            MapError::TargetOccupied(c) => write!(f, "target cell {c} is occupied"),
            MapError::OccupiedOutOfBounds(c) => {
                write!(f, "occupied cell {c} is out of bounds")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MapError {}

/// An occupancy map with start and target cells.
///
/// Everything outside the bounds counts as occupied, so the planner needs no
/// separate border handling.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGrid {
    spec: GridSpec,
    bounds: Bounds,
    occupied: BTreeSet<HexCell>,
    start: HexCell,
    target: HexCell,
}

impl MapGrid {
    pub fn new(
        spec: GridSpec,
        bounds: Bounds,
        occupied: impl IntoIterator<Item = HexCell>,
        start: HexCell,
        target: HexCell,
    ) -> Result<Self, MapError> {
        if bounds.q_min > bounds.q_max || bounds.r_min > bounds.r_max {
            return Err(MapError::EmptyBounds);
        }
        let occupied: BTreeSet<HexCell> = occupied.into_iter().collect();
        if !bounds.contains(start) {
            return Err(MapError::StartOutOfBounds(start));
        }
        if !bounds.contains(target) {
            return Err(MapError::TargetOutOfBounds(target));
        }
        if occupied.contains(&start) {
            return Err(MapError::StartOccupied(start));
        }
        if occupied.contains(&target) {
            return Err(MapError::TargetOccupied(target));
        }
        if let Some(&c) = occupied.iter().find(|c| !bounds.contains(**c)) {
            return Err(MapError::OccupiedOutOfBounds(c));
        }
        Ok(Self {
            spec,
            bounds,
            occupied,
            start,
            target,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn occupied(&self) -> &BTreeSet<HexCell> {
        &self.occupied
    }

    pub fn start(&self) -> HexCell {
        self.start
    }

    pub fn target(&self) -> HexCell {
        self.target
    }

    /// True iff the cell is in bounds and unoccupied.
    pub fn is_free(&self, cell: HexCell) -> bool {
        self.bounds.contains(cell) && !self.occupied.contains(&cell)
    }

    /// Number of free neighbors of a cell.
    pub fn free_neighbor_count(&self, cell: HexCell) -> usize {
        neighbors(cell).iter().filter(|&&n| self.is_free(n)).count()
    }
}

/// The six neighbors of a cell in direction order. Does not filter by
/// occupancy or bounds.
pub fn neighbors(cell: HexCell) -> [HexCell; 6] {
    let mut out = [cell; 6];
    for (i, (dq, dr)) in OFFSETS.iter().enumerate() {
        out[i] = HexCell::new(cell.q + dq, cell.r + dr);
    }
    out
}

/// The neighbor of `cell` in direction `d`.
pub fn step(cell: HexCell, d: Direction) -> HexCell {
    let (dq, dr) = d.offset();
    HexCell::new(cell.q + dq, cell.r + dr)
}

/// The direction from `a` to an adjacent cell `b`.
pub fn direction_between(a: HexCell, b: HexCell) -> Result<Direction, NotAdjacent> {
    let delta = (b.q - a.q, b.r - a.r);
    for (i, off) in OFFSETS.iter().enumerate() {
        if *off == delta {
            return Ok(Direction(i as u8));
        }
    }
    Err(NotAdjacent { from: a, to: b })
}

/// Minimum number of neighbor steps between two cells on an unobstructed
/// grid: (|dq| + |dr| + |dq + dr|) / 2.
pub fn hex_distance(a: HexCell, b: HexCell) -> u32 {
    let dq = b.q - a.q;
    let dr = b.r - a.r;
    ((dq.abs() + dr.abs() + (dq + dr).abs()) / 2) as u32
}

/// Cell center in cartesian length units (y up; the r axis descends to the
/// lower right).
pub fn to_cartesian(cell: HexCell, spec: &GridSpec) -> (f64, f64) {
    let s = spec.spacing();
    let x = s * (f64::from(cell.q) + f64::from(cell.r) / 2.0);
    let y = -s * (SQRT3 / 2.0) * f64::from(cell.r);
    (x, y)
}

pub(crate) const SQRT3: f64 = 1.732_050_807_568_877_2;

/// The cell whose hexagon contains the cartesian point (cube rounding).
pub fn nearest_cell(x: f64, y: f64, spec: &GridSpec) -> HexCell {
    let s = spec.spacing();
    let rf = -2.0 * y / (SQRT3 * s);
    let qf = x / s - rf / 2.0;
    let sf = -qf - rf;
    let mut q = qf.round_();
    let mut r = rf.round_();
    let sr = sf.round_();
    let dq = (q - qf).abs_();
    let dr = (r - rf).abs_();
    let ds = (sr - sf).abs_();
    if dq > dr && dq > ds {
        q = -r - sr;
    } else if dr > ds {
        r = -q - sr;
    }
    HexCell::new(q as i32, r as i32)
}

/// Euclidean distance between two cell centers.
pub fn center_distance(a: HexCell, b: HexCell, spec: &GridSpec) -> f64 {
    let (ax, ay) = to_cartesian(a, spec);
    let (bx, by) = to_cartesian(b, spec);
    (bx - ax).hypot_(by - ay)
}

/// Free in-bounds cells within hex distance `radius` of `center`, useful for
/// building disk-shaped map regions.
pub fn disk(center: HexCell, radius: u32) -> Vec<HexCell> {
    let rad = radius as i32;
    let mut cells = Vec::new();
    for dq in -rad..=rad {
        for dr in (-rad).max(-dq - rad)..=rad.min(-dq + rad) {
            cells.push(HexCell::new(center.q + dq, center.r + dr));
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::VecDeque;
    use alloc::vec;

    fn spec(rc: f64) -> GridSpec {
        GridSpec::new(rc, 3.329 * rc).unwrap()
    }

    /// Breadth-first search step count on the unobstructed offset graph;
    /// independent oracle for `hex_distance`.
    fn bfs_distance(a: HexCell, b: HexCell) -> u32 {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back((a, 0));
        seen.insert(a);
        while let Some((cell, d)) = queue.pop_front() {
            if cell == b {
                return d;
            }
            for n in neighbors(cell) {
                if seen.insert(n) {
                    queue.push_back((n, d + 1));
                }
            }
        }
        unreachable!("grid is connected");
    }

    #[test]
    fn neighbor_offsets_match_table() {
        assert_eq!(
            neighbors(HexCell::new(0, 0)),
            [
                HexCell::new(1, 0),
                HexCell::new(1, -1),
                HexCell::new(0, -1),
                HexCell::new(-1, 0),
                HexCell::new(-1, 1),
                HexCell::new(0, 1),
            ]
        );
        assert_eq!(
            neighbors(HexCell::new(7, 5)),
            [
                HexCell::new(8, 5),
                HexCell::new(8, 4),
                HexCell::new(7, 4),
                HexCell::new(6, 5),
                HexCell::new(6, 6),
                HexCell::new(7, 6),
            ]
        );
    }

    #[test]
    fn neighbor_symmetry() {
        let c = HexCell::new(-3, 2);
        for d in Direction::ALL {
            let n = neighbors(c)[d.index() as usize];
            assert_eq!(neighbors(n)[d.opposite().index() as usize], c);
        }
    }

    #[test]
    fn direction_between_matches_offsets() {
        assert_eq!(
            direction_between(HexCell::new(0, 0), HexCell::new(1, 0)).unwrap(),
            Direction(0)
        );
        assert_eq!(
            direction_between(HexCell::new(1, 0), HexCell::new(0, 0)).unwrap(),
            Direction(3)
        );
        assert!(direction_between(HexCell::new(0, 0), HexCell::new(2, 0)).is_err());
        assert!(direction_between(HexCell::new(0, 0), HexCell::new(0, 0)).is_err());
    }

    #[test]
    fn direction_between_inverts_neighbors() {
        let c = HexCell::new(4, -7);
        for d in Direction::ALL {
            assert_eq!(direction_between(c, step(c, d)).unwrap(), d);
        }
    }

    #[test]
    fn hex_distance_examples() {
        assert_eq!(hex_distance(HexCell::new(0, 0), HexCell::new(0, 0)), 0);
        // Frozen from the BFS oracle.
        assert_eq!(bfs_distance(HexCell::new(0, 0), HexCell::new(3, -1)), 3);
        assert_eq!(hex_distance(HexCell::new(0, 0), HexCell::new(3, -1)), 3);
        assert_eq!(bfs_distance(HexCell::new(2, -1), HexCell::new(-1, 1)), 3);
        assert_eq!(hex_distance(HexCell::new(2, -1), HexCell::new(-1, 1)), 3);
    }

    #[test]
    fn hex_distance_equals_bfs_on_patch() {
        let origin = HexCell::new(0, 0);
        for q in -4..=4 {
            for r in -4..=4 {
                let cell = HexCell::new(q, r);
                assert_eq!(hex_distance(origin, cell), bfs_distance(origin, cell));
            }
        }
    }

    #[test]
    fn cartesian_examples() {
        let sp = spec(1.0);
        assert_eq!(to_cartesian(HexCell::new(0, 0), &sp), (0.0, 0.0));
        let (x, y) = to_cartesian(HexCell::new(1, 0), &sp);
        assert!((x - 2.0).abs() < 1e-15 && y.abs() < 1e-15);
        let (x, y) = to_cartesian(HexCell::new(0, 1), &sp);
        assert!((x - 1.0).abs() < 1e-15);
        assert!((y + SQRT3).abs() < 1e-15);
    }

    #[test]
    fn adjacent_centers_are_one_spacing_apart() {
        let sp = spec(0.7);
        let c = HexCell::new(2, -3);
        for d in Direction::ALL {
            let dist = center_distance(c, step(c, d), &sp);
            assert!(
                (dist - sp.spacing()).abs() <= 1e-12 * sp.spacing(),
                "direction {d}: {dist}"
            );
        }
    }

    #[test]
    fn hex_distance_dominates_normalized_euclidean() {
        let sp = spec(1.0);
        for q in -4..=4 {
            for r in -4..=4 {
                let cell = HexCell::new(q, r);
                let lower =
                    center_distance(HexCell::new(0, 0), cell, &sp) / sp.spacing();
                assert!(
                    f64::from(hex_distance(HexCell::new(0, 0), cell)) >= lower - 1e-12,
                    "{cell}"
                );
            }
        }
    }

    #[test]
    fn nearest_cell_inverts_to_cartesian() {
        let sp = spec(0.9);
        for q in -5..=5 {
            for r in -5..=5 {
                let cell = HexCell::new(q, r);
                let (x, y) = to_cartesian(cell, &sp);
                assert_eq!(nearest_cell(x, y, &sp), cell);
                // Perturb within the inner radius; must stay in the same cell.
                assert_eq!(nearest_cell(x + 0.4 * sp.cell_inner_radius, y, &sp), cell);
                assert_eq!(nearest_cell(x, y - 0.4 * sp.cell_inner_radius, &sp), cell);
            }
        }
    }

    #[test]
    fn map_validation() {
        let bounds = Bounds {
            q_min: 0,
            q_max: 4,
            r_min: 0,
            r_max: 4,
        };
        let sp = spec(1.0);
        let start = HexCell::new(0, 0);
        let target = HexCell::new(4, 4);
        let map = MapGrid::new(sp, bounds, [HexCell::new(2, 2)], start, target).unwrap();
        assert!(!map.is_free(HexCell::new(2, 2)));
        assert!(!map.is_free(HexCell::new(5, 0)));
        assert!(map.is_free(HexCell::new(1, 1)));

        assert_eq!(
            MapGrid::new(sp, bounds, [start], start, target),
            Err(MapError::StartOccupied(start))
        );
        assert_eq!(
            MapGrid::new(sp, bounds, [], HexCell::new(-1, 0), target),
            Err(MapError::StartOutOfBounds(HexCell::new(-1, 0)))
        );
        assert_eq!(
            MapGrid::new(sp, bounds, [HexCell::new(9, 9)], start, target),
            Err(MapError::OccupiedOutOfBounds(HexCell::new(9, 9)))
        );
        assert!(GridSpec::new(0.0, 1.0).is_err());
        assert!(GridSpec::new(1.0, -2.0).is_err());
    }

    #[test]
    fn disk_sizes() {
        assert_eq!(disk(HexCell::new(0, 0), 0).len(), 1);
        assert_eq!(disk(HexCell::new(0, 0), 1).len(), 7);
        assert_eq!(disk(HexCell::new(3, -2), 2).len(), 19);
        for c in disk(HexCell::new(3, -2), 2) {
            assert!(hex_distance(HexCell::new(3, -2), c) <= 2);
        }
    }
}
