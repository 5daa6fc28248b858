//! Closed-form exponential moments and the orthogonality-identity
//! evaluator W.

use super::{direction_vector, Inclusion, OrderField, SphereDirection};
use crate::error::{Error, Result};
use crate::specfun::{bessel_j_auto, gamma, principal_power};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative confluence threshold of the simplex formula; below it the
/// divided-difference path takes over.
const SIMPLEX_CONFLUENCE_REL: f64 = 1e-3;
/// Squared-frequency magnitude below which the ball moment switches to the
/// volume series (the Bessel quotient is 0/0 there).
const BALL_SMALL_S: f64 = 1e-12;

fn dot_complex(a: &[f64], y: &[Complex64]) -> Complex64 {
    a.iter().zip(y).map(|(ai, yi)| yi * *ai).sum()
}

/// Ball moment as a function of the squared frequency s = y.y (complex).
///
/// For |s| above the series threshold this is
/// (2 pi r)^{d/2} w^{-d/2} e^{-d pi i/4} J_{d/2}(i r w) with w = sqrt(s);
/// the result is even in w so the branch choice only needs to keep the
/// Bessel argument off the cut.
pub fn ball_moment_from_s(d: usize, r: f64, s: Complex64) -> Result<Complex64> {
    if d < 2 {
        return Err(Error::Domain(format!("ball_moment: d = {d} < 2")));
    }
    if r <= 0.0 {
        return Err(Error::Domain(format!("ball_moment: radius {r} <= 0")));
    }
    let df = d as f64;
    if s.norm() <= BALL_SMALL_S {
        // Volume series: pi^{d/2} r^d sum_m (s r^2/4)^m / (m! Gamma(m+1+d/2)).
        let mut term = ONE / gamma(1.0 + df / 2.0)?;
        let mut sum = term;
        let ratio = s * (r * r / 4.0);
        for m in 0..30 {
            let mf = m as f64;
            term *= ratio / ((mf + 1.0) * (mf + 1.0 + df / 2.0));
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        return Ok(sum * PI.powf(df / 2.0) * r.powf(df));
    }
    // Principal square root; flip the sign if i r w would land on the cut.
    let mut w = s.sqrt();
    let arg_z = Complex64::new(0.0, r) * w;
    if arg_z.im == 0.0 && arg_z.re < 0.0 {
        w = -w;
    }
    let j = bessel_j_auto(df / 2.0, Complex64::new(0.0, r) * w)?;
    let pref = principal_power(w, -df / 2.0)?;
    let phase = Complex64::new(0.0, -df * PI / 4.0).exp();
    Ok((2.0 * PI * r).powf(df / 2.0) * pref * phase * j)
}

/// Moment of a ball of radius `r` centered at the origin at a complex
/// frequency vector `y`; depends on y only through s = sum y_j^2.
pub fn ball_moment(r: f64, y: &[Complex64]) -> Result<Complex64> {
    let s: Complex64 = y.iter().map(|c| c * c).sum();
    ball_moment_from_s(y.len(), r, s)
}

/// Ball moment for the complex-probe form: frequency omega(theta, phi) + e1
/// with squared length 2 + 2 cos theta, defined on the strip |Re theta| < pi/2
/// when theta is complex.
pub fn ball_moment_probe(r: f64, dir: &SphereDirection) -> Result<Complex64> {
    let theta = dir.theta;
    if theta.im != 0.0 && theta.re.abs() >= PI / 2.0 {
        return Err(Error::Branch(format!(
            "ball_moment_probe: Re(theta) = {} outside the strip (-pi/2, pi/2)",
            theta.re
        )));
    }
    let s = ONE * 2.0 + theta.cos() * 2.0;
    ball_moment_from_s(dir.dim(), r, s)
}

/// Divided difference of the exponential over a node multiset, continuous
/// through confluences. Computed as the top-right entry of the exponential
/// of the bidiagonal node matrix (Opitz), with mean shift and scaling and
/// squaring.
pub fn exp_divided_difference(nodes: &[Complex64]) -> Complex64 {
    let n = nodes.len();
    assert!(n >= 1);
    if n == 1 {
        return nodes[0].exp();
    }
    let mean: Complex64 = nodes.iter().sum::<Complex64>() / n as f64;
    let mut z = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        z[(i, i)] = nodes[i] - mean;
        if i + 1 < n {
            z[(i, i + 1)] = ONE;
        }
    }
    // Scale so the Taylor series converges quickly.
    let norm = (0..n)
        .map(|i| (0..n).map(|j| z[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = z / Complex64::new(2f64.powi(s as i32), 0.0);
    let mut f = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=80 {
        term = (&term * &a) / Complex64::new(k as f64, 0.0);
        f += &term;
        let tn = term.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if tn <= 1e-20 {
            break;
        }
    }
    for _ in 0..s {
        f = &f * &f;
    }
    mean.exp() * f[(0, n - 1)]
}

/// Moment of the simplex x0 + V T at complex frequency y.
///
/// Uses the rational-exponential closed form when the components of
/// Y = V^T y are pairwise well separated and away from zero, and the
/// equivalent divided difference of exp over {0, Y_1, ..., Y_d} otherwise.
pub fn simplex_moment(base: &DVector<f64>, matrix: &DMatrix<f64>, y: &[Complex64]) -> Result<Complex64> {
    let d = base.len();
    if matrix.nrows() != d || matrix.ncols() != d || y.len() != d {
        return Err(Error::Domain("simplex_moment: shape mismatch".into()));
    }
    let det = matrix.clone().determinant();
    if det <= 0.0 {
        return Err(Error::Domain(format!("simplex_moment: det(V) = {det} <= 0")));
    }
    // Y = V^T y
    let yv: Vec<Complex64> = (0..d)
        .map(|j| (0..d).map(|i| y[i] * matrix[(i, j)]).sum())
        .collect();
    let base_slice: Vec<f64> = base.iter().cloned().collect();
    let shift = dot_complex(&base_slice, y).exp();
    let max_y = yv.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tau = SIMPLEX_CONFLUENCE_REL * (1.0 + max_y);
    let mut separated = yv.iter().all(|c| c.norm() >= tau);
    if separated {
        'outer: for i in 0..d {
            for j in (i + 1)..d {
                if (yv[i] - yv[j]).norm() < tau {
                    separated = false;
                    break 'outer;
                }
            }
        }
    }
    let unit = if separated {
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..d {
            let mut denom = yv[i];
            for j in 0..d {
                if j != i {
                    denom *= yv[i] - yv[j];
                }
            }
            sum += yv[i].exp() / denom;
        }
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        let prod_inv: Complex64 = yv.iter().map(|c| ONE / c).product();
        sum + prod_inv * sign
    } else {
        let mut nodes = Vec::with_capacity(d + 1);
        nodes.push(Complex64::new(0.0, 0.0));
        nodes.extend_from_slice(&yv);
        exp_divided_difference(&nodes)
    };
    Ok(shift * det.abs() * unit)
}

/// Moment of an axis-aligned box of the given widths centered at `center`.
pub fn box_moment(center: &DVector<f64>, widths: &DVector<f64>, y: &[Complex64]) -> Result<Complex64> {
    let d = center.len();
    if widths.len() != d || y.len() != d {
        return Err(Error::Domain("box_moment: shape mismatch".into()));
    }
    if widths.iter().any(|&w| w <= 0.0) {
        return Err(Error::Domain("box_moment: widths must be positive".into()));
    }
    let center_slice: Vec<f64> = center.iter().cloned().collect();
    let mut out = dot_complex(&center_slice, y).exp();
    for j in 0..d {
        out *= sinh_factor(y[j], widths[j]);
    }
    Ok(out)
}

// 2 sinh(t delta/2) / t, with the even series below the cancellation range.
fn sinh_factor(t: Complex64, delta: f64) -> Complex64 {
    let u = t * (delta / 2.0);
    if u.norm() < 1e-4 {
        // delta (1 + u^2/6 + u^4/120)
        let u2 = u * u;
        (ONE + u2 / 6.0 + u2 * u2 / 120.0) * delta
    } else {
        u.sinh() * 2.0 / t
    }
}

/// Moment of one inclusion (amplitude excluded) at frequency vector `y`,
/// translation factor included. `s_ball` is the squared frequency used for
/// ball shapes; the caller supplies it so the probe form 2 + 2 cos theta
/// stays exact along half-lines.
pub fn inclusion_moment_at(inc: &Inclusion, y: &[Complex64], s_ball: Complex64) -> Result<Complex64> {
    match inc {
        Inclusion::Ball { center, radius, .. } => {
            let c: Vec<f64> = center.iter().cloned().collect();
            Ok(dot_complex(&c, y).exp() * ball_moment_from_s(center.len(), *radius, s_ball)?)
        }
        Inclusion::Simplex { base, matrix, .. } => simplex_moment(base, matrix, y),
        Inclusion::Box { center, widths, .. } => box_moment(center, widths, y),
    }
}

/// The orthogonality-identity integrand evaluated analytically:
/// W(dir) = int (alpha1 - alpha2) e^{x.(omega(dir)+omega0)} dx for
/// piecewise-constant differences over a shared background.
pub fn difference_moment(
    cfg1: &OrderField,
    cfg2: &OrderField,
    dir: &SphereDirection,
    omega0: &[f64],
) -> Result<Complex64> {
    if !cfg1.same_background(cfg2) {
        return Err(Error::Unsupported(
            "difference_moment: configurations must share background and domain".into(),
        ));
    }
    let d = cfg1.dim();
    if dir.dim() != d || omega0.len() != d {
        return Err(Error::Domain("difference_moment: dimension mismatch".into()));
    }
    let e1 = dir.basis.e1();
    let mismatch: f64 = e1
        .iter()
        .zip(omega0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if mismatch > 1e-10 {
        return Err(Error::Domain(
            "difference_moment: probe basis must have e1 = omega0".into(),
        ));
    }
    let omega = direction_vector(dir);
    let y: Vec<Complex64> = omega
        .iter()
        .zip(omega0)
        .map(|(w, o)| w + o)
        .collect();
    let s_ball = ONE * 2.0 + dir.theta.cos() * 2.0;
    let mut w = Complex64::new(0.0, 0.0);
    for inc in &cfg1.inclusions {
        let has_ball = matches!(inc, Inclusion::Ball { .. });
        if has_ball && dir.theta.im != 0.0 && dir.theta.re.abs() >= PI / 2.0 {
            return Err(Error::Branch(
                "difference_moment: complex theta outside the ball strip".into(),
            ));
        }
        w += inclusion_moment_at(inc, &y, s_ball)? * inc.amplitude();
    }
    for inc in &cfg2.inclusions {
        let has_ball = matches!(inc, Inclusion::Ball { .. });
        if has_ball && dir.theta.im != 0.0 && dir.theta.re.abs() >= PI / 2.0 {
            return Err(Error::Branch(
                "difference_moment: complex theta outside the ball strip".into(),
            ));
        }
        w -= inclusion_moment_at(inc, &y, s_ball)? * inc.amplitude();
    }
    Ok(w)
}

/// Sampled values of W along a panel of directions.
#[derive(Debug, Clone)]
pub struct MomentTrace {
    pub directions: Vec<SphereDirection>,
    pub omega0: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Evaluate W on a direction grid (parallel when enabled), ordered by
/// input index.
pub fn moment_trace(
    cfg1: &OrderField,
    cfg2: &OrderField,
    dirs: &[SphereDirection],
    omega0: &[f64],
) -> Result<MomentTrace> {
    let values: Result<Vec<Complex64>> =
        crate::par::map_indexed(dirs, |d| difference_moment(cfg1, cfg2, d, omega0))
            .into_iter()
            .collect();
    Ok(MomentTrace {
        directions: dirs.to_vec(),
        omega0: omega0.to_vec(),
        values: values?,
    })
}
