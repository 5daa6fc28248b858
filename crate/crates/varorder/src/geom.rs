//! Geometry utilities shared by the moment engine, the assumption checkers
//! and the hull reconstruction: 2-D convex hulls, deterministic ear
//! clipping, half-plane intersection and projection onto convex hulls.

use crate::error::{Error, Result};

pub type Point2 = [f64; 2];

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull by Andrew's monotone chain; returns CCW vertices without
/// repetition. Collinear points on the hull boundary are dropped.
pub fn convex_hull_2d(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * n);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 1e-14 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len
            && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 1e-14
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Twice the signed area of a polygon (positive for CCW).
pub fn signed_area_2(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        s += poly[i][0] * poly[j][1] - poly[j][0] * poly[i][1];
    }
    s
}

fn point_in_triangle(p: Point2, a: Point2, b: Point2, c: Point2) -> bool {
    let d1 = cross(a, b, p);
    let d2 = cross(b, c, p);
    let d3 = cross(c, a, p);
    let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(has_neg && has_pos)
}

/// Deterministic ear clipping of a simple polygon. Among the valid ears of
/// each round the one with the lexicographically smallest tip is clipped,
/// so the triangulation is reproducible. Returns index triples into the
/// input vertex list, each triangle CCW.
pub fn ear_clip(poly: &[Point2]) -> Result<Vec<[usize; 3]>> {
    let n = poly.len();
    if n < 3 {
        return Err(Error::Geometry(format!("ear_clip: {n} vertices < 3")));
    }
    // Work on a CCW copy of the index ring.
    let ccw = signed_area_2(poly) > 0.0;
    let mut ring: Vec<usize> = if ccw {
        (0..n).collect()
    } else {
        (0..n).rev().collect()
    };
    let mut tris = Vec::with_capacity(n - 2);
    let mut guard = 0usize;
    while ring.len() > 3 {
        guard += 1;
        if guard > n * n + 16 {
            return Err(Error::Geometry(
                "ear_clip: no ear found (polygon not simple?)".into(),
            ));
        }
        let m = ring.len();
        // Collect valid ears, pick the lexicographically smallest tip.
        let mut best: Option<(usize, Point2)> = None;
        for k in 0..m {
            let ia = ring[(k + m - 1) % m];
            let ib = ring[k];
            let ic = ring[(k + 1) % m];
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            if cross(a, b, c) <= 1e-14 {
                continue; // reflex or degenerate tip
            }
            let mut blocked = false;
            for &other in &ring {
                if other == ia || other == ib || other == ic {
                    continue;
                }
                if point_in_triangle(poly[other], a, b, c) {
                    blocked = true;
                    break;
                }
            }
            if !blocked {
                match best {
                    Some((_, tip)) if tip <= b => {}
                    _ => best = Some((k, b)),
                }
            }
        }
        let (k, _) = best.ok_or_else(|| {
            Error::Geometry("ear_clip: no ear found (polygon not simple?)".into())
        })?;
        let m = ring.len();
        let tri = [ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]];
        tris.push(tri);
        ring.remove(k);
    }
    tris.push([ring[0], ring[1], ring[2]]);
    Ok(tris)
}

/// A closed half-plane { x : n.x <= b }.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlane {
    pub normal: Point2,
    pub offset: f64,
}

/// Intersect half-planes into a bounded convex polygon (CCW vertices).
/// Half-planes are sorted by normal angle, then a large bounding box is
/// clipped by each in turn; near-duplicate vertices within `merge_tol` are
/// merged afterwards.
pub fn half_plane_intersection(planes: &[HalfPlane], merge_tol: f64) -> Result<Vec<Point2>> {
    if planes.len() < 3 {
        return Err(Error::Geometry(format!(
            "half_plane_intersection: {} half-planes are not enough to bound a region",
            planes.len()
        )));
    }
    let mut sorted = planes.to_vec();
    sorted.sort_by(|a, b| {
        let aa = a.normal[1].atan2(a.normal[0]);
        let ab = b.normal[1].atan2(b.normal[0]);
        aa.partial_cmp(&ab)
            .unwrap()
            .then(a.offset.partial_cmp(&b.offset).unwrap())
    });
    let scale = sorted
        .iter()
        .map(|h| {
            let n = (h.normal[0].powi(2) + h.normal[1].powi(2)).sqrt();
            (h.offset.abs() / n.max(1e-300)).max(1.0)
        })
        .fold(1.0f64, f64::max);
    let big = 64.0 * scale;
    let mut poly: Vec<Point2> = vec![[-big, -big], [big, -big], [big, big], [-big, big]];
    for h in &sorted {
        poly = clip_polygon(&poly, h);
        if poly.len() < 3 {
            return Err(Error::Geometry(
                "half_plane_intersection: empty interior".into(),
            ));
        }
    }
    // Any surviving box corner means the normals do not span all directions.
    if poly
        .iter()
        .any(|p| p[0].abs() >= big * (1.0 - 1e-9) || p[1].abs() >= big * (1.0 - 1e-9))
    {
        return Err(Error::Geometry(
            "half_plane_intersection: intersection is unbounded (directions do not span)".into(),
        ));
    }
    Ok(merge_polygon_vertices(&poly, merge_tol))
}

fn clip_polygon(poly: &[Point2], h: &HalfPlane) -> Vec<Point2> {
    let inside = |p: Point2| h.normal[0] * p[0] + h.normal[1] * p[1] <= h.offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for i in 0..n {
        let cur = poly[i];
        let nxt = poly[(i + 1) % n];
        let cin = inside(cur);
        let nin = inside(nxt);
        if cin {
            out.push(cur);
        }
        if cin != nin {
            let fc = h.normal[0] * cur[0] + h.normal[1] * cur[1] - h.offset;
            let fn_ = h.normal[0] * nxt[0] + h.normal[1] * nxt[1] - h.offset;
            let t = fc / (fc - fn_);
            out.push([cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])]);
        }
    }
    out
}

/// Merge consecutive near-duplicate vertices and drop collinear ones.
pub fn merge_polygon_vertices(poly: &[Point2], tol: f64) -> Vec<Point2> {
    let mut merged: Vec<Point2> = Vec::new();
    for &p in poly {
        if let Some(&last) = merged.last() {
            if (p[0] - last[0]).hypot(p[1] - last[1]) <= tol {
                continue;
            }
        }
        merged.push(p);
    }
    while merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if (first[0] - last[0]).hypot(first[1] - last[1]) <= tol {
            merged.pop();
        } else {
            break;
        }
    }
    // Drop vertices that are collinear with their neighbours.
    let mut out: Vec<Point2> = Vec::new();
    let m = merged.len();
    for i in 0..m {
        let prev = merged[(i + m - 1) % m];
        let cur = merged[i];
        let next = merged[(i + 1) % m];
        let d1 = (cur[0] - prev[0]).hypot(cur[1] - prev[1]);
        let d2 = (next[0] - cur[0]).hypot(next[1] - cur[1]);
        if cross(prev, cur, next).abs() > tol * (d1 + d2).max(1e-300) {
            out.push(cur);
        }
    }
    if out.len() >= 3 {
        out
    } else {
        merged
    }
}

/// Projection of `target` onto the convex hull of `points` (any dimension)
/// by away-step Frank-Wolfe. Returns the projection and the distance.
pub fn project_onto_hull(points: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, f64) {
    let n = points.len();
    let d = target.len();
    assert!(n > 0);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // Start at the vertex nearest the target.
    let mut lambda = vec![0.0f64; n];
    let start = (0..n)
        .min_by(|&i, &j| {
            let di: f64 = points[i]
                .iter()
                .zip(target)
                .map(|(x, y)| (x - y).powi(2))
                .sum();
            let dj: f64 = points[j]
                .iter()
                .zip(target)
                .map(|(x, y)| (x - y).powi(2))
                .sum();
            di.partial_cmp(&dj).unwrap()
        })
        .unwrap();
    lambda[start] = 1.0;
    let mut x: Vec<f64> = points[start].clone();
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0f64, |m, &v| m.max(v.abs()));
    for _ in 0..5000 {
        let g: Vec<f64> = (0..d).map(|k| x[k] - target[k]).collect();
        // Frank-Wolfe vertex (most aligned descent) and away vertex.
        let mut s_idx = 0;
        let mut s_val = f64::INFINITY;
        let mut a_idx = None;
        let mut a_val = f64::NEG_INFINITY;
        for i in 0..n {
            let v = dot(&g, &points[i]);
            if v < s_val {
                s_val = v;
                s_idx = i;
            }
            if lambda[i] > 0.0 && v > a_val {
                a_val = v;
                a_idx = Some(i);
            }
        }
        let gap = dot(&g, &x) - s_val;
        if gap <= 1e-15 * scale * scale {
            break;
        }
        let a_idx = a_idx.unwrap();
        let away_gap = a_val - dot(&g, &x);
        if gap >= away_gap {
            // FW step towards s.
            let dir: Vec<f64> = (0..d).map(|k| points[s_idx][k] - x[k]).collect();
            let denom = dot(&dir, &dir);
            if denom <= 0.0 {
                break;
            }
            let gamma = (-dot(&g, &dir) / denom).clamp(0.0, 1.0);
            for l in lambda.iter_mut() {
                *l *= 1.0 - gamma;
            }
            lambda[s_idx] += gamma;
            for k in 0..d {
                x[k] += gamma * dir[k];
            }
        } else {
            // Away step from a.
            let dir: Vec<f64> = (0..d).map(|k| x[k] - points[a_idx][k]).collect();
            let denom = dot(&dir, &dir);
            if denom <= 0.0 {
                break;
            }
            let gmax = lambda[a_idx] / (1.0 - lambda[a_idx]).max(1e-300);
            let gamma = (-dot(&g, &dir) / denom).clamp(0.0, gmax);
            for (i, l) in lambda.iter_mut().enumerate() {
                if i == a_idx {
                    *l *= 1.0 + gamma;
                    *l -= gamma;
                } else {
                    *l *= 1.0 + gamma;
                }
            }
            for k in 0..d {
                x[k] += gamma * dir[k];
            }
        }
    }
    let dist = x
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    (x, dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_plus_interior() {
        let pts = vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
            [0.2, 0.8],
        ];
        let hull = convex_hull_2d(&pts);
        assert_eq!(hull.len(), 4);
        assert!(signed_area_2(&hull) > 0.0);
    }

    #[test]
    fn ear_clip_convex_and_nonconvex() {
        let square = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let tris = ear_clip(&square).unwrap();
        assert_eq!(tris.len(), 2);
        let total: f64 = tris
            .iter()
            .map(|t| cross(square[t[0]], square[t[1]], square[t[2]]).abs() / 2.0)
            .sum();
        assert!((total - 1.0).abs() < 1e-12);

        // L-shape
        let ell = vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0],
            [1.0, 1.0],
            [1.0, 2.0],
            [0.0, 2.0],
        ];
        let tris = ear_clip(&ell).unwrap();
        assert_eq!(tris.len(), 4);
        let total: f64 = tris
            .iter()
            .map(|t| cross(ell[t[0]], ell[t[1]], ell[t[2]]).abs() / 2.0)
            .sum();
        assert!((total - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ear_clip_is_deterministic() {
        let poly = vec![[0.0, 0.0], [3.0, 0.0], [2.0, 1.0], [3.0, 3.0], [0.0, 2.0]];
        let a = ear_clip(&poly).unwrap();
        let b = ear_clip(&poly).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn half_planes_unit_square() {
        let planes = vec![
            HalfPlane { normal: [1.0, 0.0], offset: 1.0 },
            HalfPlane { normal: [-1.0, 0.0], offset: 0.0 },
            HalfPlane { normal: [0.0, 1.0], offset: 1.0 },
            HalfPlane { normal: [0.0, -1.0], offset: 0.0 },
        ];
        let poly = half_plane_intersection(&planes, 1e-9).unwrap();
        assert_eq!(poly.len(), 4);
        assert!((signed_area_2(&poly).abs() / 2.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn half_planes_detect_unbounded_and_empty() {
        let one_sided = vec![
            HalfPlane { normal: [1.0, 0.0], offset: 1.0 },
            HalfPlane { normal: [1.0, 0.1], offset: 1.0 },
            HalfPlane { normal: [1.0, -0.1], offset: 1.0 },
        ];
        assert!(half_plane_intersection(&one_sided, 1e-9).is_err());

        let empty = vec![
            HalfPlane { normal: [1.0, 0.0], offset: -1.0 },
            HalfPlane { normal: [-1.0, 0.0], offset: -1.0 },
            HalfPlane { normal: [0.0, 1.0], offset: 1.0 },
            HalfPlane { normal: [0.0, -1.0], offset: 1.0 },
        ];
        assert!(half_plane_intersection(&empty, 1e-9).is_err());
    }

    #[test]
    fn projection_onto_triangle() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        // Exterior point projects onto the hypotenuse.
        let (proj, dist) = project_onto_hull(&tri, &[1.0, 1.0]);
        assert!((proj[0] - 0.5).abs() < 1e-7 && (proj[1] - 0.5).abs() < 1e-7);
        assert!((dist - (0.5f64).hypot(0.5)).abs() < 1e-7);
        // Interior point projects onto itself.
        let (_, dist) = project_onto_hull(&tri, &[0.2, 0.2]);
        assert!(dist < 1e-7);
    }
}
