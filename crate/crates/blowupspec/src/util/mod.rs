//! Shared numerical kernels: adaptive Runge-Kutta integration, composite
//! quadrature, and cubic-spline interpolation.

pub mod ode;
pub mod quad;
pub mod spline;

use num_complex::Complex64;

/// View an even-length real slice as interleaved (re, im) complex values.
pub fn as_complex(y: &[f64]) -> Vec<Complex64> {
    debug_assert!(y.len() % 2 == 0);
    y.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

/// Flatten complex values into an interleaved real state vector.
pub fn from_complex(z: &[Complex64]) -> Vec<f64> {
    let mut y = Vec::with_capacity(2 * z.len());
    for v in z {
        y.push(v.re);
        y.push(v.im);
    }
    y
}

/// Format a float with 17 significant digits, the round-trip-exact width used
/// by every on-disk artifact so that repeated runs are byte-identical.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}
