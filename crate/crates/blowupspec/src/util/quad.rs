//! Composite quadrature on uniform grids.

use num_complex::Complex64;

/// Composite Simpson rule on a uniform grid with spacing `h`.
///
/// Odd interval counts are closed with a Simpson 3/8 block at the end, keeping
/// fourth-order accuracy for any sample count >= 4.
pub fn simpson_uniform(h: f64, y: &[f64]) -> f64 {
    let n = y.len();
    assert!(n >= 2, "need at least two samples");
    if n == 2 {
        return 0.5 * h * (y[0] + y[1]);
    }
    if n == 3 {
        return h / 3.0 * (y[0] + 4.0 * y[1] + y[2]);
    }
    let intervals = n - 1;
    let (simpson_end, tail) = if intervals % 2 == 0 { (n, 0.0) } else {
        // Last three intervals by the 3/8 rule.
        let m = n - 4;
        let tail = 3.0 * h / 8.0 * (y[m] + 3.0 * y[m + 1] + 3.0 * y[m + 2] + y[m + 3]);
        (m + 1, tail)
    };
    let mut s = y[0] + y[simpson_end - 1];
    for (i, v) in y.iter().enumerate().take(simpson_end - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    h / 3.0 * s + tail
}

/// Complex-valued composite Simpson on a uniform grid.
pub fn simpson_uniform_c(h: f64, y: &[Complex64]) -> Complex64 {
    let re: Vec<f64> = y.iter().map(|z| z.re).collect();
    let im: Vec<f64> = y.iter().map(|z| z.im).collect();
    Complex64::new(simpson_uniform(h, &re), simpson_uniform(h, &im))
}

// Per-cell weights of the degree-5 interpolant through a 6-node window:
// CUM6[s][j] = int_s^{s+1} L_j(t) dt on nodes t = 0..5. Interior cells all use
// the symmetric s = 2 row.
const CUM6: [[f64; 6]; 5] = [
    [95.0 / 288.0, 1427.0 / 1440.0, -133.0 / 240.0, 241.0 / 720.0, -173.0 / 1440.0, 3.0 / 160.0],
    [
        -3.0 / 160.0,
        637.0 / 1440.0,
        511.0 / 720.0,
        -43.0 / 240.0,
        77.0 / 1440.0,
        -11.0 / 1440.0,
    ],
    [11.0 / 1440.0, -31.0 / 480.0, 401.0 / 720.0, 401.0 / 720.0, -31.0 / 480.0, 11.0 / 1440.0],
    [
        -11.0 / 1440.0,
        77.0 / 1440.0,
        -43.0 / 240.0,
        511.0 / 720.0,
        637.0 / 1440.0,
        -3.0 / 160.0,
    ],
    [3.0 / 160.0, -173.0 / 1440.0, 241.0 / 720.0, -133.0 / 240.0, 1427.0 / 1440.0, 95.0 / 288.0],
];

/// Cumulative integral on a uniform grid; `out[k] = int_{x0}^{x_k}`.
///
/// Each cell integrates the quintic through a sliding 6-node window, so every
/// interior cell carries the *same* truncation coefficient: the error varies
/// smoothly from node to node instead of alternating with node parity. (A
/// Simpson-based cumulative leaves an O(h^5 f'''') sawtooth that becomes an
/// O(h^3) artifact under second differencing of downstream quantities.)
///
/// Used for the nested quadratures in the scalar-operator inversions where a
/// running antiderivative is needed at every node.
pub fn cumulative_uniform(h: f64, y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut out = vec![0.0; n];
    if n < 6 {
        for k in 1..n {
            out[k] = out[k - 1] + 0.5 * h * (y[k - 1] + y[k]);
        }
        return out;
    }
    for k in 1..n {
        let base = (k as isize - 3).clamp(0, n as isize - 6) as usize;
        let s = k - 1 - base;
        let mut cell = 0.0;
        for (j, &w) in CUM6[s].iter().enumerate() {
            cell += w * y[base + j];
        }
        out[k] = out[k - 1] + h * cell;
    }
    out
}
