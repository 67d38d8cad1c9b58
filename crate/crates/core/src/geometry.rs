//! Planar points and the few primitives shared by the other modules.

use core::ops::{Add, Mul, Sub};

use crate::math::{hypot, sq};

/// A point (or displacement) on the ground plane, in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `theta` from the positive x axis, scaled by `len`.
    pub fn polar(len: f64, theta: f64) -> Self {
        Point::new(len * libm::cos(theta), len * libm::sin(theta))
    }

    pub fn norm(self) -> f64 {
        hypot(self.x, self.y)
    }

    pub fn norm2(self) -> f64 {
        sq(self.x) + sq(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dist2(self, other: Point) -> f64 {
        (self - other).norm2()
    }

    pub(crate) fn as_coord(self) -> robust::Coord<f64> {
        robust::Coord {
            x: self.x,
            y: self.y,
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Exact orientation test: positive when `a, b, c` turn counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(a.as_coord(), b.as_coord(), c.as_coord())
}

/// Exact in-circle test: positive when `d` lies strictly inside the circle
/// through the counter-clockwise triple `a, b, c`.
pub fn in_circle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    robust::incircle(a.as_coord(), b.as_coord(), c.as_coord(), d.as_coord())
}

/// Circumcenter of a non-degenerate triangle.
pub fn circumcenter(a: Point, b: Point, c: Point) -> Point {
    let b = b - a;
    let c = c - a;
    let d = 2.0 * (b.x * c.y - b.y * c.x);
    let b2 = b.norm2();
    let c2 = c.norm2();
    Point::new(
        a.x + (c.y * b2 - b.y * c2) / d,
        a.y + (b.x * c2 - c.x * b2) / d,
    )
}

/// Area of the intersection of two disks with radii `r1`, `r2` whose centers
/// are `d` apart.
pub fn lens_area(r1: f64, r2: f64, d: f64) -> f64 {
    use crate::math::{atan2, sqrt, PI};
    if r1 <= 0.0 || r2 <= 0.0 {
        return 0.0;
    }
    if d >= r1 + r2 {
        return 0.0;
    }
    let small = r1.min(r2);
    if d <= (r1 - r2).abs() {
        return PI * small * small;
    }
    // half-angle form of the central angles, with the two circular segments
    // summed; the cosine-rule form loses every digit when one disk is tiny
    // q[i]: the other two sides minus side i, in Kahan's order for sides
    // sorted as a >= b >= c
    let sides = [r1, r2, d];
    let mut order = [0, 1, 2];
    order.sort_by(|&i, &j| sides[j].total_cmp(&sides[i]));
    let [a, b, c] = order.map(|i| sides[i]);
    let mut q = [0.0; 3];
    q[order[0]] = c - (a - b);
    q[order[1]] = c + (a - b);
    q[order[2]] = a + (b - c);
    let (p, [q1, q2, q3]) = (a + (b + c), q);
    let phi1 = 4.0 * atan2(sqrt(q3 * q1), sqrt(p * q2));
    let phi2 = 4.0 * atan2(sqrt(q3 * q2), sqrt(p * q1));
    0.5 * (r1 * r1 * chord_excess(phi1) + r2 * r2 * chord_excess(phi2))
}

/// `phi - sin(phi)`, accurate for small `phi`.
fn chord_excess(phi: f64) -> f64 {
    if phi < 0.1 {
        let x2 = phi * phi;
        phi * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        phi - crate::math::sin(phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circumcenter_of_right_triangle_is_hypotenuse_midpoint() {
        let c = circumcenter(Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 2.0));
        assert!((c.x - 1.0).abs() < 1e-12 && (c.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lens_limits() {
        let pi = core::f64::consts::PI;
        assert_eq!(lens_area(1.0, 1.0, 2.5), 0.0);
        assert!((lens_area(1.0, 3.0, 0.5) - pi).abs() < 1e-12);
        // two unit disks one radius apart
        let expect = 2.0 * pi / 3.0 - 3f64.sqrt() / 2.0;
        assert!((lens_area(1.0, 1.0, 1.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn lens_of_a_tiny_disk_against_a_large_one() {
        // 50-digit reference values
        let cases = [
            (2e-3, 500.0, 500.0, 6.283179973846253403e-6),
            (2e-3, 500.0, 500.001, 2.4567359332030099222e-6),
            (1.0, 1000.0, 999.5, 2.5271912167066798742),
            (1e-4, 3000.0, 3000.00005, 6.1418484033577663532e-9),
            (1.0, 1.0, 1.0, 1.2283696986087568455),
        ];
        for (r1, r2, d, want) in cases {
            for (a, b) in [(r1, r2), (r2, r1)] {
                let got = lens_area(a, b, d);
                assert!((got / want - 1.0).abs() < 1e-9, "{a} {b} {d}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn predicates_signs() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        let c = Point::new(0.0, 1.0);
        assert!(orient(a, b, c) > 0.0);
        assert!(in_circle(a, b, c, Point::new(0.5, 0.5)) > 0.0);
        assert_eq!(in_circle(a, b, c, Point::new(1.0, 1.0)), 0.0);
    }
}
