//! Exponential moments of balls, simplices and boxes at real and complex
//! frequencies, the hyperspherical direction map, order-field configuration
//! types, and the orthogonality-identity evaluator.

mod eval;
mod sampling;

pub use eval::{
    ball_moment, ball_moment_from_s, ball_moment_probe, box_moment, difference_moment,
    exp_divided_difference, inclusion_moment_at, moment_trace, simplex_moment, MomentTrace,
};
pub use sampling::{generic_direction, separating_direction};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Orthonormal basis of R^d stored row-wise (rows are e1..ed).
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    rows: DMatrix<f64>,
}

impl Basis {
    /// Validates row orthonormality to 1e-12.
    pub fn new(rows: DMatrix<f64>) -> Result<Self> {
        let d = rows.nrows();
        if rows.ncols() != d || d < 2 {
            return Err(Error::Domain(format!(
                "basis must be square with d >= 2, got {}x{}",
                d,
                rows.ncols()
            )));
        }
        for i in 0..d {
            for j in 0..d {
                let dot = rows.row(i).dot(&rows.row(j));
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "basis rows {i},{j} not orthonormal: dot = {dot}"
                    )));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn standard(d: usize) -> Self {
        Self {
            rows: DMatrix::identity(d, d),
        }
    }

    /// Completes `e1` to an orthonormal basis with e1 as the first row,
    /// picking the remaining rows deterministically by Gram-Schmidt over
    /// the standard basis.
    pub fn from_e1(e1: &[f64]) -> Result<Self> {
        let d = e1.len();
        let n: f64 = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
        if d < 2 || (n - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!(
                "from_e1: expected a unit vector of dim >= 2, |e1| = {n}"
            )));
        }
        let mut rows: Vec<DVector<f64>> = vec![DVector::from_column_slice(e1) / n];
        while rows.len() < d {
            // Orthogonalize every standard vector, keep the largest residual.
            let mut best: Option<DVector<f64>> = None;
            let mut best_norm = -1.0;
            for k in 0..d {
                let mut v = DVector::zeros(d);
                v[k] = 1.0;
                for r in &rows {
                    let c = r.dot(&v);
                    v -= r * c;
                }
                let nv = v.norm();
                if nv > best_norm {
                    best_norm = nv;
                    best = Some(v);
                }
            }
            let v = best.unwrap();
            rows.push(&v / best_norm);
        }
        let mat = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        Basis::new(mat)
    }

    pub fn dim(&self) -> usize {
        self.rows.nrows()
    }

    pub fn row(&self, i: usize) -> DVector<f64> {
        self.rows.row(i).transpose()
    }

    /// First row, the distinguished axis e1 (= omega0 by convention).
    pub fn e1(&self) -> DVector<f64> {
        self.row(0)
    }
}

/// A point of the complexified sphere: orthonormal frame, complex polar
/// angle theta and real angles phi_1..phi_{d-2}.
#[derive(Debug, Clone)]
pub struct SphereDirection {
    pub basis: Basis,
    pub theta: Complex64,
    pub phis: Vec<f64>,
}

impl SphereDirection {
    pub fn new(basis: Basis, theta: Complex64, phis: Vec<f64>) -> Result<Self> {
        if phis.len() + 2 != basis.dim() {
            return Err(Error::Domain(format!(
                "SphereDirection: got {} phi angles for d = {}",
                phis.len(),
                basis.dim()
            )));
        }
        Ok(Self { basis, theta, phis })
    }

    pub fn real(basis: Basis, theta: f64, phis: Vec<f64>) -> Result<Self> {
        Self::new(basis, Complex64::new(theta, 0.0), phis)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Same frame and phi angles, different theta.
    pub fn with_theta(&self, theta: Complex64) -> Self {
        Self {
            basis: self.basis.clone(),
            theta,
            phis: self.phis.clone(),
        }
    }

    /// Coefficients of omega(theta, phi) in the frame rows.
    pub fn coefficients(&self) -> Vec<Complex64> {
        direction_coefficients(self.theta, &self.phis, self.dim())
    }
}

/// Coefficients of the hyperspherical map: (cos theta) on e1, then
/// sin theta times products of sin/cos of the real angles.
pub fn direction_coefficients(theta: Complex64, phis: &[f64], d: usize) -> Vec<Complex64> {
    debug_assert_eq!(phis.len() + 2, d);
    let mut c = vec![Complex64::new(0.0, 0.0); d];
    c[0] = theta.cos();
    let st = theta.sin();
    // prod over sin(phi_1..phi_{i-2}) accumulates as i advances
    let mut prod = 1.0f64;
    for i in 2..d {
        c[i - 1] = st * prod * phis[i - 2].cos();
        prod *= phis[i - 2].sin();
    }
    c[d - 1] = st * prod;
    c
}

/// Ambient-coordinate direction vector omega(theta, phi).
pub fn direction_vector(dir: &SphereDirection) -> Vec<Complex64> {
    let d = dir.dim();
    let coeffs = dir.coefficients();
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    for (i, c) in coeffs.iter().enumerate() {
        let row = dir.basis.row(i);
        for k in 0..d {
            out[k] += c * row[k];
        }
    }
    out
}

/// Computational domain containing the inclusions.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// 2-D disk.
    Disk { center: [f64; 2], radius: f64 },
    /// 2-D polygon, vertices in order.
    Polygon { vertices: Vec<[f64; 2]> },
    /// Ball in R^d for d >= 3 moment work.
    Ball { center: Vec<f64>, radius: f64 },
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Disk { .. } | Domain::Polygon { .. } => 2,
            Domain::Ball { center, .. } => center.len(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::Disk { center, radius } => {
                (x[0] - center[0]).hypot(x[1] - center[1]) < *radius
            }
            Domain::Polygon { vertices } => point_in_polygon(x, vertices),
            Domain::Ball { center, radius } => {
                let r2: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum();
                r2.sqrt() < *radius
            }
        }
    }

    /// Distance from an interior point to the boundary (negative outside).
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Disk { center, radius } => {
                radius - (x[0] - center[0]).hypot(x[1] - center[1])
            }
            Domain::Ball { center, radius } => {
                let r: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                radius - r
            }
            Domain::Polygon { vertices } => {
                let inside = point_in_polygon(x, vertices);
                let mut dmin = f64::INFINITY;
                let n = vertices.len();
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    dmin = dmin.min(dist_point_segment(x, &a, &b));
                }
                if inside {
                    dmin
                } else {
                    -dmin
                }
            }
        }
    }
}

fn point_in_polygon(x: &[f64], vertices: &[[f64; 2]]) -> bool {
    let n = vertices.len();
    let mut inside = false;
    let (px, py) = (x[0], x[1]);
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = (vertices[i][0], vertices[i][1]);
        let (xj, yj) = (vertices[j][0], vertices[j][1]);
        if ((yi > py) != (yj > py)) && px < (xj - xi) * (py - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn dist_point_segment(p: &[f64], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let denom = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if denom > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - (a[0] + t * ab[0])).hypot(p[1] - (a[1] + t * ab[1]))
}

/// One shaped inclusion carrying an order-amplitude.
#[derive(Debug, Clone, PartialEq)]
pub enum Inclusion {
    Ball {
        center: DVector<f64>,
        radius: f64,
        amplitude: f64,
    },
    Simplex {
        base: DVector<f64>,
        matrix: DMatrix<f64>,
        amplitude: f64,
    },
    Box {
        center: DVector<f64>,
        widths: DVector<f64>,
        amplitude: f64,
    },
}

fn check_amplitude(a: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&a) || a.abs() >= 1.0 {
        return Err(Error::Domain(format!("amplitude {a} outside (-1, 1)")));
    }
    Ok(())
}

impl Inclusion {
    pub fn ball(center: Vec<f64>, radius: f64, amplitude: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::Domain(format!("ball radius {radius} <= 0")));
        }
        check_amplitude(amplitude)?;
        Ok(Inclusion::Ball {
            center: DVector::from_vec(center),
            radius,
            amplitude,
        })
    }

    pub fn simplex(base: Vec<f64>, matrix: DMatrix<f64>, amplitude: f64) -> Result<Self> {
        let d = base.len();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Domain("simplex matrix shape mismatch".into()));
        }
        let det = matrix.clone().determinant();
        if det <= 0.0 {
            return Err(Error::Domain(format!("simplex det(V) = {det} <= 0")));
        }
        check_amplitude(amplitude)?;
        Ok(Inclusion::Simplex {
            base: DVector::from_vec(base),
            matrix,
            amplitude,
        })
    }

    pub fn cuboid(center: Vec<f64>, widths: Vec<f64>, amplitude: f64) -> Result<Self> {
        if widths.iter().any(|&w| w <= 0.0) {
            return Err(Error::Domain("box widths must be positive".into()));
        }
        if widths.len() != center.len() {
            return Err(Error::Domain("box center/widths length mismatch".into()));
        }
        check_amplitude(amplitude)?;
        Ok(Inclusion::Box {
            center: DVector::from_vec(center),
            widths: DVector::from_vec(widths),
            amplitude,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Inclusion::Ball { center, .. } => center.len(),
            Inclusion::Simplex { base, .. } => base.len(),
            Inclusion::Box { center, .. } => center.len(),
        }
    }

    pub fn amplitude(&self) -> f64 {
        match self {
            Inclusion::Ball { amplitude, .. }
            | Inclusion::Simplex { amplitude, .. }
            | Inclusion::Box { amplitude, .. } => *amplitude,
        }
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        let mut c = self.clone();
        match &mut c {
            Inclusion::Ball { amplitude: a, .. }
            | Inclusion::Simplex { amplitude: a, .. }
            | Inclusion::Box { amplitude: a, .. } => *a = amplitude,
        }
        c
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Inclusion::Ball { center, radius, .. } => {
                let r2: f64 = x
                    .iter()
                    .zip(center.iter())
                    .map(|(a, b)| (a - b).powi(2))
                    .sum();
                r2.sqrt() < *radius
            }
            Inclusion::Simplex { base, matrix, .. } => {
                let d = base.len();
                let rhs = DVector::from_fn(d, |i, _| x[i] - base[i]);
                match matrix.clone().lu().solve(&rhs) {
                    Some(t) => t.iter().all(|&ti| ti > 0.0) && t.sum() < 1.0,
                    None => false,
                }
            }
            Inclusion::Box { center, widths, .. } => x
                .iter()
                .zip(center.iter())
                .zip(widths.iter())
                .all(|((xi, ci), wi)| (xi - ci).abs() < wi / 2.0),
        }
    }

    /// Vertices for polytope shapes; empty for balls.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        match self {
            Inclusion::Ball { .. } => vec![],
            Inclusion::Simplex { base, matrix, .. } => {
                let d = base.len();
                let mut vs = vec![base.iter().cloned().collect::<Vec<f64>>()];
                for j in 0..d {
                    let col = matrix.column(j);
                    vs.push((0..d).map(|i| base[i] + col[i]).collect());
                }
                vs
            }
            Inclusion::Box { center, widths, .. } => {
                let d = center.len();
                let mut vs = Vec::with_capacity(1 << d);
                for mask in 0..(1usize << d) {
                    vs.push(
                        (0..d)
                            .map(|i| {
                                let s = if mask >> i & 1 == 1 { 0.5 } else { -0.5 };
                                center[i] + s * widths[i]
                            })
                            .collect(),
                    );
                }
                vs
            }
        }
    }

    /// Maximum distance from the shape to a reference point, used for
    /// containment margins.
    pub fn circumradius_about(&self, x: &[f64]) -> f64 {
        match self {
            Inclusion::Ball { center, radius, .. } => {
                let dc: f64 = x
                    .iter()
                    .zip(center.iter())
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                dc + radius
            }
            _ => self
                .vertices()
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(x)
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max),
        }
    }
}

/// Background order field.
#[derive(Debug, Clone, PartialEq)]
pub enum Background {
    Constant(f64),
    /// Bilinearly interpolated sample grid (2-D), clamped at its edges.
    Grid {
        origin: [f64; 2],
        h: f64,
        nx: usize,
        ny: usize,
        values: Vec<f64>,
    },
}

impl Background {
    pub fn constant(v: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&v) || v <= 0.0 {
            return Err(Error::Domain(format!("background {v} outside (0, 1)")));
        }
        Ok(Background::Constant(v))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Background::Constant(v) => *v,
            Background::Grid {
                origin,
                h,
                nx,
                ny,
                values,
            } => {
                let fx = ((x[0] - origin[0]) / h).clamp(0.0, (*nx - 1) as f64 - 1e-12);
                let fy = ((x[1] - origin[1]) / h).clamp(0.0, (*ny - 1) as f64 - 1e-12);
                let (i, j) = (fx.floor() as usize, fy.floor() as usize);
                let (tx, ty) = (fx - i as f64, fy - j as f64);
                let v = |i: usize, j: usize| values[j * nx + i];
                v(i, j) * (1.0 - tx) * (1.0 - ty)
                    + v(i + 1, j) * tx * (1.0 - ty)
                    + v(i, j + 1) * (1.0 - tx) * ty
                    + v(i + 1, j + 1) * tx * ty
            }
        }
    }
}

/// Piecewise-constant variable order: background plus shaped inclusions.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderField {
    pub domain: Domain,
    pub background: Background,
    pub inclusions: Vec<Inclusion>,
}

impl OrderField {
    pub fn new(domain: Domain, background: Background, inclusions: Vec<Inclusion>) -> Result<Self> {
        let d = domain.dim();
        for (k, inc) in inclusions.iter().enumerate() {
            if inc.dim() != d {
                return Err(Error::Domain(format!(
                    "inclusion {k} has dim {} but domain has dim {d}",
                    inc.dim()
                )));
            }
            if !Self::closure_inside(&domain, inc) {
                return Err(Error::Domain(format!(
                    "inclusion {k} closure is not inside the domain"
                )));
            }
        }
        if let Background::Grid { values, .. } = &background {
            if values.iter().any(|&v| v <= 0.0 || v >= 1.0) {
                return Err(Error::Domain("grid background values outside (0,1)".into()));
            }
        }
        Ok(Self {
            domain,
            background,
            inclusions,
        })
    }

    fn closure_inside(domain: &Domain, inc: &Inclusion) -> bool {
        match (domain, inc) {
            (Domain::Disk { center, radius }, Inclusion::Ball { center: c, radius: r, .. }) => {
                (c[0] - center[0]).hypot(c[1] - center[1]) + r < *radius
            }
            (Domain::Ball { center, radius }, Inclusion::Ball { center: c, radius: r, .. }) => {
                let dc: f64 = c
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                dc + r < *radius
            }
            (Domain::Polygon { .. }, Inclusion::Ball { center: c, .. }) => {
                let cv: Vec<f64> = c.iter().cloned().collect();
                let Inclusion::Ball { radius: r, .. } = inc else {
                    unreachable!()
                };
                domain.boundary_distance(&cv) > *r
            }
            (_, shape) => shape.vertices().iter().all(|v| {
                domain.contains(v) && domain.boundary_distance(v) > 0.0
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Pointwise order value.
    pub fn alpha_at(&self, x: &[f64]) -> f64 {
        let mut a = self.background.eval(x);
        for inc in &self.inclusions {
            if inc.contains(x) {
                a += inc.amplitude();
            }
        }
        a
    }

    pub fn same_background(&self, other: &Self) -> bool {
        self.background == other.background && self.domain == other.domain
    }
}

// ---------------------------------------------------------------------------
// Structured-text (JSON) serialization with fixed 17-digit float formatting.
// ---------------------------------------------------------------------------

use crate::util::fmt17;

fn json_vec(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|&x| fmt17(x)).collect();
    format!("[{}]", items.join(","))
}

/// Serialize an order field to its canonical JSON document. Floats carry 17
/// significant digits so identical fields serialize byte-identically.
pub fn order_field_to_json(f: &OrderField) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    s.push_str(&format!("  \"d\": {},\n", f.dim()));
    s.push_str("  \"domain\": ");
    match &f.domain {
        Domain::Disk { center, radius } => s.push_str(&format!(
            "{{\"kind\":\"disk\",\"center\":{},\"radius\":{}}}",
            json_vec(center),
            fmt17(*radius)
        )),
        Domain::Polygon { vertices } => {
            let vs: Vec<String> = vertices.iter().map(|v| json_vec(v)).collect();
            s.push_str(&format!(
                "{{\"kind\":\"polygon\",\"vertices\":[{}]}}",
                vs.join(",")
            ))
        }
        Domain::Ball { center, radius } => s.push_str(&format!(
            "{{\"kind\":\"ball\",\"center\":{},\"radius\":{}}}",
            json_vec(center),
            fmt17(*radius)
        )),
    }
    s.push_str(",\n  \"background\": ");
    match &f.background {
        Background::Constant(v) => s.push_str(&format!(
            "{{\"kind\":\"constant\",\"value\":{}}}",
            fmt17(*v)
        )),
        Background::Grid {
            origin,
            h,
            nx,
            ny,
            values,
        } => s.push_str(&format!(
            "{{\"kind\":\"grid\",\"origin\":{},\"h\":{},\"nx\":{},\"ny\":{},\"values\":{}}}",
            json_vec(origin),
            fmt17(*h),
            nx,
            ny,
            json_vec(values)
        )),
    }
    s.push_str(",\n  \"inclusions\": [\n");
    let items: Vec<String> = f
        .inclusions
        .iter()
        .map(|inc| match inc {
            Inclusion::Ball {
                center,
                radius,
                amplitude,
            } => format!(
                "    {{\"kind\":\"ball\",\"center\":{},\"radius\":{},\"amplitude\":{}}}",
                json_vec(center.as_slice()),
                fmt17(*radius),
                fmt17(*amplitude)
            ),
            Inclusion::Simplex {
                base,
                matrix,
                amplitude,
            } => {
                let rows: Vec<String> = (0..matrix.nrows())
                    .map(|i| {
                        let row: Vec<f64> = (0..matrix.ncols()).map(|j| matrix[(i, j)]).collect();
                        json_vec(&row)
                    })
                    .collect();
                format!(
                    "    {{\"kind\":\"simplex\",\"base\":{},\"matrix\":[{}],\"amplitude\":{}}}",
                    json_vec(base.as_slice()),
                    rows.join(","),
                    fmt17(*amplitude)
                )
            }
            Inclusion::Box {
                center,
                widths,
                amplitude,
            } => format!(
                "    {{\"kind\":\"box\",\"center\":{},\"widths\":{},\"amplitude\":{}}}",
                json_vec(center.as_slice()),
                json_vec(widths.as_slice()),
                fmt17(*amplitude)
            ),
        })
        .collect();
    s.push_str(&items.join(",\n"));
    s.push_str("\n  ]\n}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit_disk() -> Domain {
        Domain::Disk {
            center: [0.0, 0.0],
            radius: 1.0,
        }
    }

    #[test]
    fn direction_vector_trivials() {
        // d = 2, theta = 0 -> e1.
        let b = Basis::standard(2);
        let dir = SphereDirection::real(b, 0.0, vec![]).unwrap();
        let v = direction_vector(&dir);
        assert_relative_eq!(v[0].re, 1.0, epsilon = 1e-15);
        assert!(v[1].norm() < 1e-15);

        // d = 3, theta = pi/2, phi = pi/2 -> e3.
        let b = Basis::standard(3);
        let dir = SphereDirection::real(b, PI / 2.0, vec![PI / 2.0]).unwrap();
        let v = direction_vector(&dir);
        assert!(v[0].norm() < 1e-15);
        assert!(v[1].norm() < 1e-15);
        assert_relative_eq!(v[2].re, 1.0, epsilon = 1e-15);

        // d = 2, theta = -i -> (cosh 1) e1 - (i sinh 1) e2.
        let b = Basis::standard(2);
        let dir = SphereDirection::new(b, Complex64::new(0.0, -1.0), vec![]).unwrap();
        let v = direction_vector(&dir);
        assert_relative_eq!(v[0].re, 1.0f64.cosh(), epsilon = 1e-14);
        assert!(v[0].im.abs() < 1e-15);
        assert!(v[1].re.abs() < 1e-15);
        assert_relative_eq!(v[1].im, -(1.0f64.sinh()), epsilon = 1e-14);
    }

    #[test]
    fn real_directions_have_unit_norm() {
        let mut rng = crate::util::rng_from_seed(11);
        use rand::Rng;
        for d in [2usize, 3, 4] {
            let e1 = crate::util::random_unit_vector(&mut rng, d);
            let b = Basis::from_e1(&e1).unwrap();
            let theta = rng.gen::<f64>() * 2.0 * PI - PI;
            let phis: Vec<f64> = (0..d - 2).map(|_| rng.gen::<f64>() * PI).collect();
            let dir = SphereDirection::real(b, theta, phis).unwrap();
            let v = direction_vector(&dir);
            let norm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            assert!((norm2 - 1.0).abs() < 1e-12, "d={d}: |omega|^2 = {norm2}");
        }
    }

    #[test]
    fn complex_theta_keeps_sum_of_squares_one() {
        // cos^2 + sin^2 = 1 holds as a complex identity.
        let b = Basis::standard(3);
        let dir =
            SphereDirection::new(b, Complex64::new(0.4, -2.0), vec![1.1]).unwrap();
        let v = direction_vector(&dir);
        let s: Complex64 = v.iter().map(|c| c * c).sum();
        assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn basis_from_e1_roundtrip() {
        let b = Basis::from_e1(&[0.6, 0.8]).unwrap();
        let e1 = b.e1();
        assert_relative_eq!(e1[0], 0.6, epsilon = 1e-14);
        assert_relative_eq!(e1[1], 0.8, epsilon = 1e-14);
    }

    #[test]
    fn inclusion_invariants_enforced() {
        assert!(Inclusion::ball(vec![0.0, 0.0], -0.1, 0.2).is_err());
        assert!(Inclusion::ball(vec![0.0, 0.0], 0.1, 1.2).is_err());
        let flipped = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(Inclusion::simplex(vec![0.0, 0.0], flipped, 0.2).is_err());
        assert!(Inclusion::cuboid(vec![0.0, 0.0], vec![0.1, -0.1], 0.2).is_err());
    }

    #[test]
    fn order_field_containment() {
        let ball = Inclusion::ball(vec![0.5, 0.0], 0.3, 0.2).unwrap();
        let ok = OrderField::new(unit_disk(), Background::Constant(0.5), vec![ball]);
        assert!(ok.is_ok());
        let out = Inclusion::ball(vec![0.8, 0.0], 0.3, 0.2).unwrap();
        assert!(OrderField::new(unit_disk(), Background::Constant(0.5), vec![out]).is_err());
    }

    #[test]
    fn alpha_at_sums_overlapping_amplitudes() {
        let b1 = Inclusion::ball(vec![0.0, 0.0], 0.4, 0.1).unwrap();
        let b2 = Inclusion::ball(vec![0.1, 0.0], 0.4, 0.15).unwrap();
        let f = OrderField::new(unit_disk(), Background::Constant(0.5), vec![b1, b2]).unwrap();
        assert_relative_eq!(f.alpha_at(&[0.05, 0.0]), 0.75, epsilon = 1e-15);
        assert_relative_eq!(f.alpha_at(&[0.45, 0.0]), 0.65, epsilon = 1e-15);
        assert_relative_eq!(f.alpha_at(&[-0.9, 0.0]), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn serialization_is_deterministic_and_17_digit() {
        let b1 = Inclusion::ball(vec![1.0 / 3.0, 0.0], 0.25, 0.2).unwrap();
        let f = OrderField::new(unit_disk(), Background::Constant(0.5), vec![b1]).unwrap();
        let a = order_field_to_json(&f);
        let b = order_field_to_json(&f);
        assert_eq!(a, b);
        assert!(a.contains("3.3333333333333331e-1"));
    }
}
