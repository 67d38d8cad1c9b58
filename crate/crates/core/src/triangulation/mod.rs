//! Delaunay triangulation of UAV ground projections, its Voronoi dual, and
//! the CoMP serving-set rules built on top of it.

mod comp;
mod quadedge;
mod voronoi;

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{orient, Point};
use crate::{Error, Result};

pub use comp::{
    comp_set_for_ue, min_search_radius, nearest_uav, subdivision_search, subdivision_search_in,
    triangle_score, CompSet, SearchRegion, MIN_SEARCH_UAVS,
};
pub use voronoi::{dual_voronoi, VoronoiCell};

/// Sentinel for "no neighbour" in [`TriMesh::neighbors`].
pub const NO_NEIGHBOR: u32 = u32::MAX;

/// A Delaunay triangulation over a set of points.
///
/// Triangles are counter-clockwise triples of indices into the point slice the
/// mesh was built from. `neighbors[t][i]` is the triangle across the edge
/// opposite vertex `i` of triangle `t`, or [`NO_NEIGHBOR`] on the hull.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    /// Indices of the distinct input points that are mesh vertices.
    pub vertices: Vec<u32>,
    pub triangles: Vec<[u32; 3]>,
    pub neighbors: Vec<[u32; 3]>,
    // CSR incidence: triangles touching input point i are
    // incident[incident_start[i]..incident_start[i + 1]]
    incident_start: Vec<u32>,
    incident: Vec<u32>,
}

/// Builds the Delaunay triangulation of `points` by divide and conquer.
///
/// Exact duplicates are merged (the lowest index is kept). Points on a common
/// circle get a deterministic triangulation; every produced circumcircle is
/// empty in the closed sense only of points strictly inside it.
pub fn triangulate(points: &[Point]) -> Result<TriMesh> {
    if points.len() < 3 {
        return Err(Error::DegenerateInput("at least three points are required"));
    }
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::InvalidArgument("point coordinates must be finite"));
    }
    let mut order: Vec<u32> = (0..points.len() as u32).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a as usize], points[b as usize]);
        pa.x.total_cmp(&pb.x)
            .then(pa.y.total_cmp(&pb.y))
            .then(a.cmp(&b))
    });
    order.dedup_by(|b, a| points[*a as usize] == points[*b as usize]);
    if order.len() < 3 {
        return Err(Error::DegenerateInput("fewer than three distinct points"));
    }
    let sorted: Vec<Point> = order.iter().map(|&i| points[i as usize]).collect();
    let first = sorted[0];
    let second = sorted[1];
    if sorted[2..].iter().all(|&p| orient(first, second, p) == 0.0) {
        return Err(Error::DegenerateInput("all points are collinear"));
    }

    let mut qe = quadedge::QuadEdges::new(&sorted);
    qe.build(0, sorted.len() as u32);
    let (faces, face_of) = qe.triangles();

    let mut triangles = Vec::with_capacity(faces.len());
    let mut neighbors = Vec::with_capacity(faces.len());
    for (tri, edges) in &faces {
        triangles.push(tri.map(|v| order[v as usize]));
        let across = |e| face_of[quadedge::sym(e)];
        // edge k runs from vertex k to vertex k+1, so it is opposite vertex k+2
        neighbors.push([across(edges[1]), across(edges[2]), across(edges[0])]);
    }

    let mut counts = vec![0u32; points.len() + 1];
    for t in &triangles {
        for &v in t {
            counts[v as usize + 1] += 1;
        }
    }
    for i in 1..counts.len() {
        counts[i] += counts[i - 1];
    }
    let mut fill = counts.clone();
    let mut incident = vec![0u32; triangles.len() * 3];
    for (ti, t) in triangles.iter().enumerate() {
        for &v in t {
            incident[fill[v as usize] as usize] = ti as u32;
            fill[v as usize] += 1;
        }
    }

    Ok(TriMesh {
        vertices: order,
        triangles,
        neighbors,
        incident_start: counts,
        incident,
    })
}

impl TriMesh {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Triangles that have input point `v` as a corner.
    pub fn triangles_around(&self, v: u32) -> &[u32] {
        let v = v as usize;
        if v + 1 >= self.incident_start.len() {
            return &[];
        }
        let (a, b) = (self.incident_start[v], self.incident_start[v + 1]);
        &self.incident[a as usize..b as usize]
    }

    /// Distinct vertices sharing an edge with `v`, in ascending order.
    pub fn neighbors_of(&self, v: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .triangles_around(v)
            .iter()
            .flat_map(|&t| self.triangles[t as usize])
            .filter(|&w| w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The (one or two) triangles that contain the edge `a`-`b`.
    pub fn triangles_on_edge(&self, a: u32, b: u32) -> Vec<u32> {
        self.triangles_around(a)
            .iter()
            .copied()
            .filter(|&t| self.triangles[t as usize].contains(&b))
            .collect()
    }

    /// Triangle containing `p` (boundary included), by a linear scan.
    pub fn locate(&self, points: &[Point], p: Point) -> Option<u32> {
        self.triangles.iter().position(|t| {
            let [a, b, c] = t.map(|v| points[v as usize]);
            orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
        }).map(|i| i as u32)
    }
}
