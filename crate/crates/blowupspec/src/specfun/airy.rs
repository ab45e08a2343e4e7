//! Complex-argument Airy functions Ai, Bi and derivatives.
//!
//! Evaluation strategy (crossover mismatch budget 1e-11):
//! - |z| <= 4: Maclaurin series of the two ODE solutions at 0.
//! - |z| >= 10, |arg z| <= 5pi/6: optimally truncated asymptotic series.
//! - 4 < |z| < 10, |arg z| <= 5pi/6: Taylor continuation of w'' = zw along the
//!   ray, seeded on whichever side makes Ai the locally growing solution so
//!   roundoff is never amplified: inward from |z| = 10.5 where Ai is recessive
//!   (|arg z| below the anti-Stokes direction pi/3), outward from |z| = 3.9
//!   where it is dominant.
//! - |arg z| > 5pi/6: connection formula, rotating into |arg| <= pi/2.

use super::gamma::gamma;
use num_complex::Complex64;
use std::f64::consts::PI;

const TWO_PI_3: f64 = 2.0 * PI / 3.0;

fn ai0() -> f64 {
    3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0)
}

fn dai0() -> f64 {
    -(3f64.powf(-1.0 / 3.0)) / gamma(1.0 / 3.0)
}

/// (w, w') at z for the solution of w'' = z w with w(0) = c0, w'(0) = c1.
fn maclaurin_solution(z: Complex64, c0: f64, c1: f64) -> (Complex64, Complex64) {
    // Coefficient recurrence c_{n+3} = c_n / ((n+3)(n+2)); track c_n z^n and
    // n c_n z^{n-1} for the three active lanes n ≡ 0,1,2 (mod 3).
    let z3 = z * z * z;
    let mut w = Complex64::new(c0, 0.0) + Complex64::new(c1, 0.0) * z;
    let mut dw = Complex64::new(c1, 0.0);
    let mut t0 = Complex64::new(c0, 0.0); // lane n ≡ 0 term value c_n z^n
    let mut t1 = Complex64::new(c1, 0.0) * z;
    let mut n0 = 0.0f64;
    let mut n1 = 1.0f64;
    for _ in 0..80 {
        // Advance each lane by 3.
        t0 *= z3 / ((n0 + 3.0) * (n0 + 2.0));
        n0 += 3.0;
        t1 *= z3 / ((n1 + 3.0) * (n1 + 2.0));
        n1 += 3.0;
        w += t0 + t1;
        if z.norm() > 0.0 {
            dw += (n0 * t0 + n1 * t1) / z;
        }
        if t0.norm() + t1.norm() < 1e-20 * w.norm().max(1.0) {
            break;
        }
    }
    (w, dw)
}

fn ai_maclaurin(z: Complex64) -> (Complex64, Complex64) {
    let (w1, dw1) = maclaurin_solution(z, 1.0, 0.0);
    let (w2, dw2) = maclaurin_solution(z, 0.0, 1.0);
    let a = ai0();
    let b = dai0();
    (a * w1 + b * w2, a * dw1 + b * dw2)
}

/// Asymptotic series sums S_ai = sum (-1)^k u_k zeta^{-k} and the primed
/// analogue; truncated at the smallest term.
fn asymptotic_sums(zeta: Complex64) -> (Complex64, Complex64) {
    let mut u = 1.0f64;
    let mut s = Complex64::new(1.0, 0.0);
    let mut sp = Complex64::new(1.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..40 {
        let kf = k as f64;
        u *= (3.0 * kf + 0.5) * (3.0 * kf + 1.5) * (3.0 * kf + 2.5)
            / (54.0 * (kf + 1.0) * (kf + 0.5));
        pow /= -zeta;
        let term = u * pow;
        let v = -u * (6.0 * (kf + 1.0) + 1.0) / (6.0 * (kf + 1.0) - 1.0);
        let mag = term.norm();
        if mag > last {
            break; // divergence point reached; stop at the least term
        }
        last = mag;
        s += term;
        sp += v * pow;
        if mag < 1e-18 {
            break;
        }
    }
    (s, sp)
}

fn ai_asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let sz = z.sqrt();
    let zeta = 2.0 / 3.0 * z * sz;
    let (s, sp) = asymptotic_sums(zeta);
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    let ai = pref / sz.sqrt() * s;
    let dai = -pref * sz.sqrt() * sp;
    (ai, dai)
}

/// Taylor continuation of (w, w') for w'' = z w from z0 to z0 + h.
fn taylor_step(z0: Complex64, w: Complex64, dw: Complex64, h: Complex64) -> (Complex64, Complex64) {
    const N: usize = 36;
    let mut c = [Complex64::new(0.0, 0.0); N];
    c[0] = w;
    c[1] = dw;
    for m in 0..N - 2 {
        let prev = if m == 0 { Complex64::new(0.0, 0.0) } else { c[m - 1] };
        c[m + 2] = (z0 * c[m] + prev) / ((m + 2) as f64 * (m + 1) as f64);
    }
    let mut wv = Complex64::new(0.0, 0.0);
    let mut dwv = Complex64::new(0.0, 0.0);
    for m in (0..N).rev() {
        wv = wv * h + c[m];
        if m >= 1 {
            // Horner for sum m c_m h^{m-1}; ends exactly at power h^0.
            dwv = dwv * h + c[m] * m as f64;
        }
    }
    (wv, dwv)
}

fn ai_continued(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    let dir = z / r;
    let inward = z.arg().abs() <= PI / 3.0 + 0.1;
    let (r0, mut state) = if inward {
        let zs = dir * 10.5;
        (10.5, ai_asymptotic(zs))
    } else {
        let zs = dir * 3.9;
        (3.9, ai_maclaurin(zs))
    };
    let nsteps = ((r - r0).abs() / 0.8).ceil().max(1.0) as usize;
    let h = dir * ((r - r0) / nsteps as f64);
    let mut zc = dir * r0;
    for _ in 0..nsteps {
        state = taylor_step(zc, state.0, state.1, h);
        zc += h;
    }
    (state.0, state.1)
}

/// Ai(z) and Ai'(z); entire functions, any argument.
pub fn airy_ai(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    if r <= 4.0 {
        return ai_maclaurin(z);
    }
    if z.arg().abs() <= 5.0 * PI / 6.0 {
        if r >= 10.0 {
            ai_asymptotic(z)
        } else {
            ai_continued(z)
        }
    } else {
        // Rotate into |arg| <= pi/2 via the connection formula.
        let rot = Complex64::from_polar(1.0, TWO_PI_3);
        let zm = z / rot;
        let zp = z * rot;
        let (am, dam) = airy_ai(zm);
        let (ap, dap) = airy_ai(zp);
        let cm = Complex64::from_polar(1.0, -TWO_PI_3);
        let cp = rot;
        let ai = -(cm * am + cp * ap);
        let dai = -(cm * cm * dam + cp * cp * dap);
        (ai, dai)
    }
}

/// Bi(z) and Bi'(z) from the rotated-Ai representation.
pub fn airy_bi(z: Complex64) -> (Complex64, Complex64) {
    let rot = Complex64::from_polar(1.0, TWO_PI_3);
    let em = Complex64::from_polar(1.0, -PI / 6.0);
    let ep = Complex64::from_polar(1.0, PI / 6.0);
    let (am, dam) = airy_ai(z / rot);
    let (ap, dap) = airy_ai(z * rot);
    let bi = em * am + ep * ap;
    let dbi = em / rot * dam + ep * rot * dap;
    (bi, dbi)
}

/// Scaled e^{+zeta} Ai and e^{+zeta} Ai' with zeta = (2/3) z^{3/2} principal;
/// usable far beyond the unscaled overflow guard.
pub fn airy_ai_scaled(z: Complex64) -> (Complex64, Complex64) {
    let sz = z.sqrt();
    let zeta = 2.0 / 3.0 * z * sz;
    if zeta.re.abs() < 600.0 && z.norm() < 1e3 {
        let (ai, dai) = airy_ai(z);
        let e = zeta.exp();
        return (ai * e, dai * e);
    }
    let (s, sp) = asymptotic_sums(zeta);
    let pref = 1.0 / (2.0 * PI.sqrt());
    (pref / sz.sqrt() * s, -pref * sz.sqrt() * sp)
}
