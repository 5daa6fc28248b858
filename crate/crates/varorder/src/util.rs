//! Small shared helpers: deterministic float formatting and seeded RNG.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Format a float with 17 significant digits. All emitted files use this so
/// identical runs produce byte-identical output.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        // normalize -0.0
        return format!("{:.16e}", 0.0f64);
    }
    format!("{:.16e}", x)
}

/// Format a complex value as `re,im` with [`fmt17`] components.
pub fn fmt17_complex(z: Complex64) -> String {
    format!("{},{}", fmt17(z.re), fmt17(z.im))
}

/// Deterministic RNG used everywhere randomness is needed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal sample via Box-Muller, driven by any `Rng`.
pub fn standard_normal<R: rand::Rng>(rng: &mut R) -> f64 {
    loop {
        let u1: f64 = rng.gen::<f64>();
        let u2: f64 = rng.gen::<f64>();
        if u1 > f64::MIN_POSITIVE {
            return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        }
    }
}

/// Uniformly distributed unit vector in `d` dimensions.
pub fn random_unit_vector<R: rand::Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| standard_normal(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_is_17_significant_digits() {
        let s = fmt17(std::f64::consts::PI);
        assert!(s.starts_with("3.1415926535897931"));
        assert_eq!(fmt17(-0.0), fmt17(0.0));
    }

    #[test]
    fn unit_vectors_are_unit() {
        let mut rng = rng_from_seed(7);
        for d in [2usize, 3, 5] {
            let v = random_unit_vector(&mut rng, d);
            let n: f64 = v.iter().map(|x| x * x).sum::<f64>();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
