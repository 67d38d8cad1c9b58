use alloc::vec::Vec;

use crate::geometry::{circumcenter, in_circle, Point};
use crate::math::{pow, sqrt, PI};
use crate::point_process::UavField;
use crate::{Error, Result};

use super::{triangulate, TriMesh};

/// Average number of UAVs the minimal search disk must hold.
pub const MIN_SEARCH_UAVS: f64 = 18.0;

/// Number of times the search radius is doubled before giving up.
const MAX_DOUBLINGS: u32 = 3;

/// Three UAVs jointly serving one ground user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompSet {
    /// Member indices into the field, ascending.
    pub uav_ids: [u32; 3],
    /// Ground distances from the user to each member, m.
    pub r: [f64; 3],
    /// Slant distances `sqrt(r^2 + h^2)`, m.
    pub d: [f64; 3],
    /// Smallest ground distance, m.
    pub r_star: f64,
    /// Set when the nearest pair lies on the hull and only one triangle was
    /// available to pick the third member from.
    pub hull_fallback: bool,
}

impl CompSet {
    pub fn new(field: &UavField, ue: Point, ids: [u32; 3]) -> Self {
        let mut ids = ids;
        ids.sort_unstable();
        let r = ids.map(|i| field.positions[i as usize].dist(ue));
        let d = ids.map(|i| field.slant_distance(i as usize, ue));
        CompSet {
            uav_ids: ids,
            r,
            d,
            r_star: r[0].min(r[1]).min(r[2]),
            hull_fallback: false,
        }
    }

    pub fn contains(&self, id: u32) -> bool {
        self.uav_ids.contains(&id)
    }
}

/// Circular search window around a user's ground projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRegion {
    pub center: Point,
    pub radius: f64,
    pub min_uav_count: u32,
}

impl SearchRegion {
    /// Smallest disk expected to hold [`MIN_SEARCH_UAVS`] UAVs.
    pub fn minimal(center: Point, intensity: f64) -> Result<Self> {
        Ok(SearchRegion {
            center,
            radius: min_search_radius(intensity)?,
            min_uav_count: MIN_SEARCH_UAVS as u32,
        })
    }
}

/// Radius of the disk that holds 18 UAVs on average: `sqrt(18 / (pi * lambda))`.
pub fn min_search_radius(intensity: f64) -> Result<f64> {
    if !(intensity > 0.0) || !intensity.is_finite() {
        return Err(Error::InvalidArgument("intensity must be positive"));
    }
    Ok(sqrt(MIN_SEARCH_UAVS / (intensity * PI)))
}

/// Index of the UAV nearest to `ue` on the ground; ties go to the lowest index.
pub fn nearest_uav(field: &UavField, ue: Point) -> Result<u32> {
    let mut best: Option<(f64, u32)> = None;
    for (i, p) in field.positions.iter().enumerate() {
        let d = p.dist2(ue);
        if best.map_or(true, |(bd, _)| d < bd) {
            best = Some((d, i as u32));
        }
    }
    best.map(|(_, i)| i).ok_or(Error::InvalidArgument("empty field"))
}

/// Serving set from the nearest-edge rule: the two nearest UAVs form an edge;
/// of the two triangles on that edge, keep the one whose opposite corner is
/// nearer to the user.
pub fn comp_set_for_ue(mesh: &TriMesh, field: &UavField, ue: Point) -> Result<CompSet> {
    let pts = &field.positions;
    if mesh.locate(pts, ue).is_none() {
        return Err(Error::InvalidArgument("user lies outside the triangulated hull"));
    }
    let mut first: Option<(f64, u32)> = None;
    let mut second: Option<(f64, u32)> = None;
    for &v in &mesh.vertices {
        let d = pts[v as usize].dist2(ue);
        if first.map_or(true, |(fd, _)| d < fd) {
            second = first;
            first = Some((d, v));
        } else if second.map_or(true, |(sd, _)| d < sd) {
            second = Some((d, v));
        }
    }
    let (a, b) = match (first, second) {
        (Some((_, a)), Some((_, b))) => (a, b),
        _ => return Err(Error::DegenerateInput("mesh has fewer than two vertices")),
    };
    let on_edge = mesh.triangles_on_edge(a, b);
    let third = |t: u32| -> u32 {
        *mesh.triangles[t as usize]
            .iter()
            .find(|&&v| v != a && v != b)
            .expect("triangle has three distinct corners")
    };
    let (c, hull_fallback) = match on_edge.as_slice() {
        [t] => (third(*t), true),
        [t1, t2] => {
            let (c1, c2) = (third(*t1), third(*t2));
            let (d1, d2) = (pts[c1 as usize].dist2(ue), pts[c2 as usize].dist2(ue));
            let pick = if d1 < d2 || (d1 == d2 && c1 < c2) { c1 } else { c2 };
            (pick, false)
        }
        _ => {
            // the nearest pair is not a mesh edge (only with cocircular ties):
            // fall back to the triangle holding the user
            let t = mesh.locate(pts, ue).expect("checked above");
            let mut set = CompSet::new(field, ue, mesh.triangles[t as usize]);
            set.hull_fallback = true;
            return Ok(set);
        }
    };
    let mut set = CompSet::new(field, ue, [a, b, c]);
    set.hull_fallback = hull_fallback;
    Ok(set)
}

/// Average-power score of a triangle: sum of `d^(-alpha/2)` over its corners,
/// with `d` the slant distance to the user.
pub fn triangle_score(field: &UavField, tri: [u32; 3], ue: Point, alpha: f64) -> f64 {
    tri.iter()
        .map(|&v| pow(field.slant_distance(v as usize, ue), -0.5 * alpha))
        .sum()
}

/// Runs [`subdivision_search_in`] on the Delaunay triangulation of `field`
/// with the minimal search radius.
///
/// Only UAVs within twice that radius are triangulated. Every candidate
/// triangle whose circumcircle leaves that window is checked against the
/// UAVs outside it; if any check fails, or the window holds no candidate,
/// the whole field is triangulated instead.
pub fn subdivision_search(field: &UavField, ue: Point, alpha: f64) -> Result<CompSet> {
    let radius = min_search_radius(field.intensity)?;
    let window = 2.0 * radius;
    let (inside, outside): (Vec<u32>, Vec<u32>) =
        (0..field.len() as u32).partition(|&i| field.positions[i as usize].dist2(ue) <= window * window);
    if inside.len() >= 3 && !outside.is_empty() {
        if let Some(set) = windowed_search(field, ue, alpha, radius, window, &inside, &outside) {
            return Ok(set);
        }
    }
    let mesh = triangulate(&field.positions)?;
    subdivision_search_in(&mesh, field, ue, alpha, radius)
}

fn windowed_search(
    field: &UavField,
    ue: Point,
    alpha: f64,
    radius: f64,
    window: f64,
    inside: &[u32],
    outside: &[u32],
) -> Option<CompSet> {
    let pts: Vec<Point> = inside.iter().map(|&i| field.positions[i as usize]).collect();
    let mesh = triangulate(&pts).ok()?;
    let r2 = radius * radius;
    let mut best: Option<(f64, [u32; 3])> = None;
    for tri in &mesh.triangles {
        if tri.iter().any(|&v| pts[v as usize].dist2(ue) > r2) {
            continue;
        }
        let [a, b, c] = tri.map(|v| pts[v as usize]);
        let center = circumcenter(a, b, c);
        if center.dist(ue) + center.dist(a) > window
            && outside.iter().any(|&j| in_circle(a, b, c, field.positions[j as usize]) > 0.0)
        {
            return None;
        }
        let mut key = tri.map(|v| inside[v as usize]);
        key.sort_unstable();
        let score = triangle_score(field, key, ue, alpha);
        let better = match best {
            None => true,
            Some((s, k)) => score > s || (score == s && key < k),
        };
        if better {
            best = Some((score, key));
        }
    }
    best.map(|(_, ids)| CompSet::new(field, ue, ids))
}

/// Among the Delaunay triangles whose three corners all lie within `radius`
/// of the user, returns the one with the largest [`triangle_score`]. Ties go
/// to the lexicographically smallest sorted corner triple. If the disk holds
/// no complete triangle the radius is doubled, a bounded number of times.
pub fn subdivision_search_in(
    mesh: &TriMesh,
    field: &UavField,
    ue: Point,
    alpha: f64,
    radius: f64,
) -> Result<CompSet> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument("path-loss exponent must be positive"));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("search radius must be positive"));
    }
    let pts = &field.positions;
    let mut radius = radius;
    for _ in 0..=MAX_DOUBLINGS {
        let r2 = radius * radius;
        let mut best: Option<(f64, [u32; 3])> = None;
        for tri in &mesh.triangles {
            if tri.iter().any(|&v| pts[v as usize].dist2(ue) > r2) {
                continue;
            }
            let mut key = *tri;
            key.sort_unstable();
            let score = triangle_score(field, key, ue, alpha);
            let better = match best {
                None => true,
                Some((s, k)) => score > s || (score == s && key < k),
            };
            if better {
                best = Some((score, key));
            }
        }
        if let Some((_, ids)) = best {
            return Ok(CompSet::new(field, ue, ids));
        }
        radius *= 2.0;
    }
    Err(Error::NotFound { radius: radius / 2.0 })
}
