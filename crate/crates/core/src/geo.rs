//! Local tangent-plane projection and the 2D polygon primitives shared by
//! validation, rasterization, rendering and merging.
//!
//! All geometry works in meters in a frame anchored at the map's root node:
//! `x` grows east and `y` grows north.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// WGS84 semi-major axis in meters.
pub const EARTH_RADIUS_M: f64 = 6_378_137.0;

/// Local coordinates farther than this from the root are rejected.
pub const CAMPUS_SCALE_LIMIT_M: f64 = 50_000.0;

const EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("degenerate polygon: {distinct} distinct vertices (need at least 3)")]
    DegeneratePolygon { distinct: usize },
}

/// A point in the root-anchored local frame, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LocalPoint {
    pub x: f64,
    pub y: f64,
}

impl LocalPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: LocalPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Distance under the 8-connected grid metric: `max + (√2 − 1)·min`.
    pub fn octile_distance(self, other: LocalPoint) -> f64 {
        let dx = (self.x - other.x).abs();
        let dy = (self.y - other.y).abs();
        dx.max(dy) + (std::f64::consts::SQRT_2 - 1.0) * dx.min(dy)
    }

    pub fn is_campus_scale(self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.x.abs() < CAMPUS_SCALE_LIMIT_M
            && self.y.abs() < CAMPUS_SCALE_LIMIT_M
    }

    fn sub(self, o: LocalPoint) -> LocalPoint {
        LocalPoint::new(self.x - o.x, self.y - o.y)
    }
}

/// Geodetic origin of the local frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub lat0: f64,
    pub lon0: f64,
}

/// Equirectangular projection around the anchor.
pub fn to_local(lat: f64, lon: f64, anchor: Anchor) -> LocalPoint {
    let k = std::f64::consts::PI / 180.0 * EARTH_RADIUS_M;
    LocalPoint { x: (lon - anchor.lon0) * k * anchor.lat0.to_radians().cos(), y: (lat - anchor.lat0) * k }
}

/// Inverse of [`to_local`]; returns `(lat, lon)`.
pub fn from_local(p: LocalPoint, anchor: Anchor) -> (f64, f64) {
    let k = std::f64::consts::PI / 180.0 * EARTH_RADIUS_M;
    let lat = anchor.lat0 + p.y / k;
    let lon = anchor.lon0 + p.x / (k * anchor.lat0.to_radians().cos());
    (lat, lon)
}

fn cross(o: LocalPoint, a: LocalPoint, b: LocalPoint) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Signed shoelace area; positive for counter-clockwise input.
pub fn signed_area(pts: &[LocalPoint]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        s += a.x * b.y - b.x * a.y;
    }
    s / 2.0
}

pub fn point_segment_distance(p: LocalPoint, a: LocalPoint, b: LocalPoint) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0);
    p.distance(LocalPoint::new(a.x + t * ab.x, a.y + t * ab.y))
}

fn on_segment(p: LocalPoint, a: LocalPoint, b: LocalPoint) -> bool {
    point_segment_distance(p, a, b) <= EPS
}

/// Closed-ring containment over an explicit edge list. Points on an edge are
/// inside. Edges that do not span `p.y` never affect the result, which lets
/// rasterization pre-filter edges per row and stay identical to this test.
pub fn contains_point_edges<'a>(edges: impl Iterator<Item = &'a (LocalPoint, LocalPoint)>, p: LocalPoint) -> bool {
    let mut inside = false;
    for &(a, b) in edges {
        if on_segment(p, a, b) {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Proper or touching intersection of two closed segments.
pub fn segments_intersect(p1: LocalPoint, p2: LocalPoint, q1: LocalPoint, q2: LocalPoint) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > EPS && d2 < -EPS) || (d1 < -EPS && d2 > EPS)) && ((d3 > EPS && d4 < -EPS) || (d3 < -EPS && d4 > EPS)) {
        return true;
    }
    on_segment(p1, q1, q2) || on_segment(p2, q1, q2) || on_segment(q1, p1, p2) || on_segment(q2, p1, p2)
}

/// Interior crossing only: the segments cross at a single point that is not an
/// endpoint of either.
pub fn segments_cross_properly(p1: LocalPoint, p2: LocalPoint, q1: LocalPoint, q2: LocalPoint) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    ((d1 > EPS && d2 < -EPS) || (d1 < -EPS && d2 > EPS)) && ((d3 > EPS && d4 < -EPS) || (d3 < -EPS && d4 > EPS))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min: LocalPoint,
    pub max: LocalPoint,
}

impl BBox {
    pub fn of(pts: &[LocalPoint]) -> BBox {
        let mut min = LocalPoint::new(f64::INFINITY, f64::INFINITY);
        let mut max = LocalPoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BBox { min, max }
    }

    pub fn intersects(&self, o: &BBox, slack: f64) -> bool {
        self.min.x <= o.max.x + slack
            && o.min.x <= self.max.x + slack
            && self.min.y <= o.max.y + slack
            && o.min.y <= self.max.y + slack
    }

    pub fn contains(&self, p: LocalPoint) -> bool {
        p.x >= self.min.x - EPS && p.x <= self.max.x + EPS && p.y >= self.min.y - EPS && p.y <= self.max.y + EPS
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox {
            min: LocalPoint::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: LocalPoint::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }
}

/// A simple polygon stored counter-clockwise without the closing vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon2D {
    vertices: Vec<LocalPoint>,
    bbox: BBox,
}

impl Polygon2D {
    /// Builds a polygon from a ring. A repeated closing vertex and
    /// consecutive duplicates are dropped; orientation is normalized to
    /// counter-clockwise.
    pub fn new(ring: &[LocalPoint]) -> Result<Self, GeoError> {
        let mut vertices: Vec<LocalPoint> = Vec::with_capacity(ring.len());
        for &p in ring {
            if vertices.last().is_none_or(|q: &LocalPoint| q.distance(p) > EPS) {
                vertices.push(p);
            }
        }
        while vertices.len() > 1 && vertices[0].distance(*vertices.last().unwrap()) <= EPS {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeoError::DegeneratePolygon { distinct: vertices.len() });
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let bbox = BBox::of(&vertices);
        Ok(Self { vertices, bbox })
    }

    pub fn vertices(&self) -> &[LocalPoint] {
        &self.vertices
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn edges(&self) -> impl Iterator<Item = (LocalPoint, LocalPoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn edge_list(&self) -> Vec<(LocalPoint, LocalPoint)> {
        self.edges().collect()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Area centroid.
    pub fn centroid(&self) -> LocalPoint {
        let a = self.area();
        let o = self.vertices[0];
        let (mut cx, mut cy) = (0.0, 0.0);
        for (p, q) in self.edges() {
            let (px, py, qx, qy) = (p.x - o.x, p.y - o.y, q.x - o.x, q.y - o.y);
            let c = px * qy - qx * py;
            cx += (px + qx) * c;
            cy += (py + qy) * c;
        }
        LocalPoint::new(o.x + cx / (6.0 * a), o.y + cy / (6.0 * a))
    }

    pub fn contains_point(&self, p: LocalPoint) -> bool {
        if !self.bbox.contains(p) {
            return false;
        }
        contains_point_edges(self.edge_list().iter(), p)
    }

    pub fn boundary_distance(&self, p: LocalPoint) -> f64 {
        self.edges().map(|(a, b)| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
    }

    /// True if any two non-adjacent edges touch or any two adjacent edges
    /// fold back onto each other.
    pub fn is_self_intersecting(&self) -> bool {
        let e = self.edge_list();
        let n = e.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // Shared vertex is expected; overlapping collinear edges are not.
                    let (shared, a_far, b_far) =
                        if j == i + 1 { (e[i].1, e[i].0, e[j].1) } else { (e[i].0, e[i].1, e[j].0) };
                    let c = cross(shared, a_far, b_far);
                    let dot = (a_far.x - shared.x) * (b_far.x - shared.x) + (a_far.y - shared.y) * (b_far.y - shared.y);
                    if c.abs() <= EPS && dot > 0.0 {
                        return true;
                    }
                    continue;
                }
                if segments_intersect(e[i].0, e[i].1, e[j].0, e[j].1) {
                    return true;
                }
            }
        }
        false
    }

    /// Fan of triangles covering the polygon (ear clipping). Collinear
    /// vertices are dropped as zero-area ears.
    pub fn triangulate(&self) -> Vec<[LocalPoint; 3]> {
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        let v = &self.vertices;
        let mut out = Vec::with_capacity(v.len().saturating_sub(2));
        let mut guard = 0usize;
        while idx.len() > 3 && guard < 10 * v.len() * v.len() + 10 {
            guard += 1;
            let n = idx.len();
            let mut clipped = false;
            for k in 0..n {
                let (ia, ib, ic) = (idx[(k + n - 1) % n], idx[k], idx[(k + 1) % n]);
                let (a, b, c) = (v[ia], v[ib], v[ic]);
                let turn = cross(a, b, c);
                if turn.abs() <= EPS {
                    idx.remove(k);
                    clipped = true;
                    break;
                }
                if turn < 0.0 {
                    continue;
                }
                let blocked = idx.iter().any(|&j| {
                    if j == ia || j == ib || j == ic {
                        return false;
                    }
                    let p = v[j];
                    if p.distance(a) <= EPS || p.distance(b) <= EPS || p.distance(c) <= EPS {
                        return false;
                    }
                    cross(a, b, p) >= -EPS && cross(b, c, p) >= -EPS && cross(c, a, p) >= -EPS
                });
                if !blocked {
                    out.push([a, b, c]);
                    idx.remove(k);
                    clipped = true;
                    break;
                }
            }
            if !clipped {
                // Numerical dead end: clip the most convex vertex.
                let n = idx.len();
                let k = (0..n)
                    .max_by(|&x, &y| {
                        let t = |k: usize| cross(v[idx[(k + n - 1) % n]], v[idx[k]], v[idx[(k + 1) % n]]);
                        t(x).total_cmp(&t(y))
                    })
                    .unwrap();
                out.push([v[idx[(k + n - 1) % n]], v[idx[k]], v[idx[(k + 1) % n]]]);
                idx.remove(k);
            }
        }
        if idx.len() == 3 {
            let tri = [v[idx[0]], v[idx[1]], v[idx[2]]];
            if cross(tri[0], tri[1], tri[2]).abs() > EPS {
                out.push(tri);
            }
        }
        out
    }
}

/// Sutherland-Hodgman clip of `subject` against a counter-clockwise convex
/// `clip` polygon.
fn clip_convex(subject: &[LocalPoint], clip: &[LocalPoint]) -> Vec<LocalPoint> {
    let mut output = subject.to_vec();
    for i in 0..clip.len() {
        if output.is_empty() {
            break;
        }
        let (a, b) = (clip[i], clip[(i + 1) % clip.len()]);
        let input = std::mem::take(&mut output);
        for j in 0..input.len() {
            let cur = input[j];
            let prev = input[(j + input.len() - 1) % input.len()];
            let cur_in = cross(a, b, cur) >= 0.0;
            let prev_in = cross(a, b, prev) >= 0.0;
            if cur_in {
                if !prev_in {
                    output.push(line_intersection(prev, cur, a, b));
                }
                output.push(cur);
            } else if prev_in {
                output.push(line_intersection(prev, cur, a, b));
            }
        }
    }
    output
}

fn line_intersection(p: LocalPoint, q: LocalPoint, a: LocalPoint, b: LocalPoint) -> LocalPoint {
    let d1 = cross(a, b, p);
    let d2 = cross(a, b, q);
    let t = d1 / (d1 - d2);
    LocalPoint::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
}

/// Area of the interior intersection of two simple polygons, computed by
/// triangulating both and summing convex pairwise clips.
pub fn polygons_overlap_area(a: &Polygon2D, b: &Polygon2D) -> f64 {
    if !a.bbox.intersects(&b.bbox, 0.0) {
        return 0.0;
    }
    let ta = a.triangulate();
    let tb = b.triangulate();
    let boxes_b: Vec<BBox> = tb.iter().map(|t| BBox::of(t)).collect();
    let mut total = 0.0;
    for t in &ta {
        let bt = BBox::of(t);
        for (s, bs) in tb.iter().zip(&boxes_b) {
            if !bt.intersects(bs, 0.0) {
                continue;
            }
            let clipped = clip_convex(t, s);
            total += signed_area(&clipped).max(0.0);
        }
    }
    total
}

/// Containment with outward slack: every inner vertex lies in `outer`
/// dilated by `slack`, and no vertex of `outer` reaches into `inner` deeper
/// than `slack` (which is how a notch of the outer boundary can cut through
/// the inner polygon without any inner vertex leaving).
pub fn polygon_contains_polygon(outer: &Polygon2D, inner: &Polygon2D, slack: f64) -> bool {
    let vertex_ok = inner.vertices.iter().all(|&p| outer.contains_point(p) || outer.boundary_distance(p) <= slack);
    if !vertex_ok {
        return false;
    }
    !outer.vertices.iter().any(|&p| inner.contains_point(p) && inner.boundary_distance(p) > slack)
}

pub fn polygon_area(poly: &Polygon2D) -> f64 {
    poly.area()
}

pub fn polyline_length(pts: &[LocalPoint]) -> f64 {
    pts.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// Point at half of the total arc length.
pub fn polyline_midpoint(pts: &[LocalPoint]) -> LocalPoint {
    match pts.len() {
        0 => return LocalPoint::default(),
        1 => return pts[0],
        _ => {}
    }
    let half = polyline_length(pts) / 2.0;
    let mut walked = 0.0;
    for w in pts.windows(2) {
        let d = w[0].distance(w[1]);
        if walked + d >= half && d > 0.0 {
            let t = (half - walked) / d;
            return LocalPoint::new(w[0].x + t * (w[1].x - w[0].x), w[0].y + t * (w[1].y - w[0].y));
        }
        walked += d;
    }
    *pts.last().unwrap()
}
