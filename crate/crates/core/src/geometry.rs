//! Plane geometry helpers: points, poses, and hexagon outlines.

use crate::hexgrid::{to_cartesian, GridSpec, HexCell, SQRT3};
use crate::math::FloatExt;

/// A point in length units, y up.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_cell(cell: HexCell, spec: &GridSpec) -> Self {
        let (x, y) = to_cartesian(cell, spec);
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (other.x - self.x).hypot_(other.y - self.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot_(self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z component of the cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    /// Left-hand perpendicular (rotation by +90 degrees).
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > 0.0 {
            Some(self.scale(1.0 / n))
        } else {
            None
        }
    }
}

impl core::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl core::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// A position with a heading (radians, y up, 0 = east).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pose {
    pub position: Point,
    pub heading: f64,
}

impl Pose {
    pub const fn new(position: Point, heading: f64) -> Self {
        Self { position, heading }
    }

    pub fn direction(&self) -> Point {
        Point::new(self.heading.cos_(), self.heading.sin_())
    }
}

/// Unit vector for a heading angle.
pub fn unit(heading: f64) -> Point {
    Point::new(heading.cos_(), heading.sin_())
}

/// The six corner points of a cell's hexagon (pointy top: vertices at
/// 30 + 60k degrees), counterclockwise.
pub fn hexagon_corners(cell: HexCell, spec: &GridSpec) -> [Point; 6] {
    let center = Point::from_cell(cell, spec);
    let circumradius = spec.cell_inner_radius * 2.0 / SQRT3;
    let mut corners = [Point::default(); 6];
    for (k, c) in corners.iter_mut().enumerate() {
        let angle = core::f64::consts::FRAC_PI_6 + core::f64::consts::FRAC_PI_3 * k as f64;
        *c = center + unit(angle).scale(circumradius);
    }
    corners
}

/// Distance from `p` to the inside of the cell's hexagon: positive inside
/// (distance to the nearest edge), negative outside (distance to the nearest
/// edge plane).
pub fn hexagon_inside_margin(p: Point, cell: HexCell, spec: &GridSpec) -> f64 {
    let center = Point::from_cell(cell, spec);
    let d = p - center;
    // Edge normals point at 60k degrees; cos/sin of those angles are exact
    // multiples of 1/2 and sqrt(3)/2.
    let half = 0.5;
    let h = SQRT3 / 2.0;
    let mut worst = d.x; // normal (1, 0)
    for n in [
        Point::new(half, h),
        Point::new(-half, h),
        Point::new(-1.0, 0.0),
        Point::new(-half, -h),
        Point::new(half, -h),
    ] {
        let proj = d.dot(n);
        if proj > worst {
            worst = proj;
        }
    }
    spec.cell_inner_radius - worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexgrid::HexCell;

    fn spec() -> GridSpec {
        GridSpec::new(1.0, 3.329).unwrap()
    }

    #[test]
    fn hexagon_margins() {
        let sp = spec();
        let cell = HexCell::new(2, -1);
        let center = Point::from_cell(cell, &sp);
        assert!((hexagon_inside_margin(center, cell, &sp) - 1.0).abs() < 1e-12);
        // Edge midpoint toward neighbor 0 sits exactly on the boundary.
        let edge_mid = center + Point::new(1.0, 0.0);
        assert!(hexagon_inside_margin(edge_mid, cell, &sp).abs() < 1e-12);
        // A corner is on the boundary too.
        let corner = hexagon_corners(cell, &sp)[0];
        assert!(hexagon_inside_margin(corner, cell, &sp).abs() < 1e-12);
        // Outside.
        let outside = center + Point::new(1.5, 0.0);
        assert!(hexagon_inside_margin(outside, cell, &sp) < -0.4);
    }

    #[test]
    fn corners_are_at_circumradius() {
        let sp = spec();
        let cell = HexCell::new(0, 0);
        let center = Point::from_cell(cell, &sp);
        for c in hexagon_corners(cell, &sp) {
            assert!((c.distance(center) - 2.0 / SQRT3).abs() < 1e-12);
        }
    }

    #[test]
    fn point_ops() {
        let a = Point::new(3.0, 4.0);
        assert_eq!(a.norm(), 5.0);
        assert_eq!(a.perp(), Point::new(-4.0, 3.0));
        assert_eq!(a.dot(Point::new(1.0, 2.0)), 11.0);
        assert_eq!(a.cross(Point::new(1.0, 2.0)), 2.0);
    }
}
