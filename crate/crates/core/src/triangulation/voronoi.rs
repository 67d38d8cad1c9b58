use alloc::vec;
use alloc::vec::Vec;

use super::TriMesh;
use crate::geometry::Point;
use crate::point_process::Region;

/// Voronoi cell of one generator, as a counter-clockwise convex polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiCell {
    pub generator: u32,
    pub polygon: Vec<Point>,
}

impl VoronoiCell {
    /// True when `p` lies inside or on the polygon.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.polygon.len();
        if n < 3 {
            return false;
        }
        (0..n).all(|i| {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            cross >= -1e-9 * (1.0 + a.dist(b) * (a.dist(p) + 1.0))
        })
    }

    pub fn area(&self) -> f64 {
        let n = self.polygon.len();
        let mut s = 0.0;
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            s += a.x * b.y - a.y * b.x;
        }
        0.5 * s
    }
}

/// The Voronoi tessellation dual to `mesh`, one cell per mesh vertex.
///
/// Each cell is the bounding box of `clip` cut by the perpendicular bisectors
/// towards the generator's Delaunay neighbours, so unbounded hull cells come
/// back clipped.
pub fn dual_voronoi(mesh: &TriMesh, points: &[Point], clip: &Region) -> Vec<VoronoiCell> {
    let (lo, hi) = match *clip {
        Region::Disk { center, radius } => (
            Point::new(center.x - radius, center.y - radius),
            Point::new(center.x + radius, center.y + radius),
        ),
        Region::Rectangle { min, max } => (min, max),
    };
    let bbox = vec![lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)];
    mesh.vertices
        .iter()
        .map(|&g| {
            let site = points[g as usize];
            let mut poly = bbox.clone();
            for w in mesh.neighbors_of(g) {
                let other = points[w as usize];
                poly = clip_half_plane(&poly, site, other);
                if poly.is_empty() {
                    break;
                }
            }
            VoronoiCell {
                generator: g,
                polygon: poly,
            }
        })
        .collect()
}

/// Keeps the part of `poly` that is at least as close to `site` as to `other`.
fn clip_half_plane(poly: &[Point], site: Point, other: Point) -> Vec<Point> {
    let n = Point::new(other.x - site.x, other.y - site.y);
    let mid = Point::new(0.5 * (site.x + other.x), 0.5 * (site.y + other.y));
    let side = |p: Point| n.x * (p.x - mid.x) + n.y * (p.y - mid.y);
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (sa, sb) = (side(a), side(b));
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    out
}
