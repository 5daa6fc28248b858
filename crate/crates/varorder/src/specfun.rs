//! Special functions with complex arguments: Gamma, Bessel J with a
//! convergent series and a two-term large-argument form, and principal
//! powers on the cut plane. All branch choices are principal unless noted.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default relative truncation tolerance for the Bessel series.
pub const BESSEL_SERIES_TOL: f64 = 1e-16;
/// Hard cap on series terms before reporting a precision error.
pub const BESSEL_SERIES_MAX_TERMS: usize = 500;
/// Modulus beyond which the series is considered unreliable and moment
/// evaluation routes to the asymptotic form.
pub const BESSEL_SERIES_MAX_MODULUS: f64 = 60.0;
/// Smallest modulus accepted by the asymptotic form.
pub const BESSEL_ASYMPTOTIC_MIN_MODULUS: f64 = 10.0;

// Stirling series coefficients B_{2n} / (2n (2n-1)).
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

/// log Gamma for x >= 12 (Stirling with Bernoulli corrections).
fn ln_gamma_stirling(x: f64) -> f64 {
    debug_assert!(x >= 12.0);
    let mut series = 0.0;
    let inv2 = 1.0 / (x * x);
    let mut pow = 1.0 / x;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// Euler Gamma function for real arguments in (-1, 0) or (0, inf).
///
/// Relative error is below 1e-13 on (0, 50]; values are lifted into the
/// Stirling range by upward recursion.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma: non-finite argument {x}")));
    }
    if x == 0.0 || x <= -1.0 {
        return Err(Error::Domain(format!(
            "gamma: argument {x} outside (-1, 0) u (0, inf)"
        )));
    }
    if x < 0.0 {
        // (-1, 0): one recursion step up.
        return Ok(gamma(x + 1.0)? / x);
    }
    if x >= 12.0 {
        return Ok(ln_gamma_stirling(x).exp());
    }
    // Lift into [12, 13) and divide the accumulated factors back out.
    let m = (12.0 - x).ceil() as usize;
    let mut prod = 1.0;
    for j in 0..m {
        prod *= x + j as f64;
    }
    Ok(ln_gamma_stirling(x + m as f64).exp() / prod)
}

/// Principal-branch argument restricted off the cut (-inf, 0].
fn arg_off_cut(z: Complex64, what: &str) -> Result<f64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::Branch(format!(
            "{what}: argument {z} lies on the branch cut (-inf, 0]"
        )));
    }
    Ok(z.im.atan2(z.re))
}

/// Principal power z^a = exp(a log z) on the cut plane.
pub fn principal_power(z: Complex64, a: f64) -> Result<Complex64> {
    let arg = arg_off_cut(z, "principal_power")?;
    let log = Complex64::new(z.norm().ln(), arg);
    Ok((log * a).exp())
}

/// Argument taken in (-pi/2, 3pi/2], the branch used by the asymptotic
/// relation (cut along the negative imaginary axis).
fn arg_rotated(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI / 2.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Bessel function of the first kind by its defining power series,
/// truncated when a term falls below `tol` times the partial sum.
pub fn bessel_j_with_tol(nu: f64, z: Complex64, tol: f64) -> Result<Complex64> {
    if nu < 0.0 {
        return Err(Error::Domain(format!("bessel_j: order {nu} < 0")));
    }
    let is_integer_order = nu.fract() == 0.0;
    // Leading factor (z/2)^nu.
    let half = z * 0.5;
    let lead = if is_integer_order {
        half.powi(nu as i32)
    } else {
        // Non-integer order needs a branch choice; principal per the
        // convention z^(1/2) = exp(log(z)/2).
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::Branch(
                "bessel_j: z = 0 is on the branch cut for non-integer order".into(),
            ));
        }
        principal_power(half, nu).map_err(|_| {
            Error::Branch(format!(
                "bessel_j: z = {z} on the cut (-inf, 0] for non-integer order {nu}"
            ))
        })?
    };
    let mut term = lead / gamma(nu + 1.0).expect("nu + 1 > 0");
    let mut sum = term;
    let ratio_base = -half * half;
    for n in 0..BESSEL_SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= ratio_base / ((nf + 1.0) * (nu + nf + 1.0));
        sum += term;
        if term.norm() <= tol * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::Precision(format!(
        "bessel_j: series for nu={nu}, |z|={} did not converge within {} terms",
        z.norm(),
        BESSEL_SERIES_MAX_TERMS
    )))
}

/// Series evaluation with the default tolerance.
pub fn bessel_j(nu: f64, z: Complex64) -> Result<Complex64> {
    bessel_j_with_tol(nu, z, BESSEL_SERIES_TOL)
}

/// Two-term large-argument evaluation of J_nu(w).
///
/// With z = e^{i pi/2} w the relation reads
/// e^{nu pi i/2} J_nu(e^{-pi i/2} z) =
///   (2 pi z)^{-1/2} e^z + (2 pi z)^{-1/2} e^{-z + (nu+1/2) pi i},
/// each factor carrying a 1 + O(1/|z|) correction, valid for
/// arg(z) in (-pi/2, 3pi/2). The square root uses that rotated branch.
pub fn bessel_j_asymptotic(nu: f64, w: Complex64) -> Result<Complex64> {
    if w.norm() < BESSEL_ASYMPTOTIC_MIN_MODULUS * (1.0 - 1e-12) {
        return Err(Error::Precision(format!(
            "bessel_j_asymptotic: |z| = {} below validity threshold {}",
            w.norm(),
            BESSEL_ASYMPTOTIC_MIN_MODULUS
        )));
    }
    let z = Complex64::new(0.0, 1.0) * w;
    let arg = arg_rotated(z);
    const DELTA: f64 = 1e-6;
    if !(-PI / 2.0 + DELTA..=3.0 * PI / 2.0 - DELTA).contains(&arg) {
        return Err(Error::Branch(format!(
            "bessel_j_asymptotic: rotated argument {arg} outside (-pi/2, 3pi/2)"
        )));
    }
    // (2 pi z)^(-1/2) on the rotated branch; |2 pi z| shares the argument of z.
    let prefac = Complex64::new(0.0, -0.5 * arg).exp() / (2.0 * PI * z.norm()).sqrt();
    let first = z.exp();
    let second = (-z + Complex64::new(0.0, (nu + 0.5) * PI)).exp();
    let rotation = Complex64::new(0.0, -nu * PI / 2.0).exp();
    Ok(rotation * prefac * (first + second))
}

/// Series for moderate moduli, asymptotic beyond the reliable series range.
pub fn bessel_j_auto(nu: f64, z: Complex64) -> Result<Complex64> {
    if z.norm() <= BESSEL_SERIES_MAX_MODULUS {
        bessel_j(nu, z)
    } else {
        bessel_j_asymptotic(nu, z)
    }
}
