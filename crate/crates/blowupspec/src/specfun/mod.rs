//! Complex-argument special functions with an identity-based test contract:
//! Airy Ai/Bi, modified Bessel I/K, and the Gamma function.

pub mod airy;
pub mod bessel;
pub mod gamma;

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecFunError {
    #[error("argument |z| = {modulus} beyond overflow guard {guard}")]
    RangeError { modulus: f64, guard: f64 },
    #[error("argument outside sector: |arg z| = {arg} > {max_arg}")]
    SectorError { arg: f64, max_arg: f64 },
    #[error("order nu = {nu} below -1/2")]
    OrderError { nu: f64 },
    #[error("argument must be nonzero")]
    ZeroArgument,
}

/// Ai, Bi and derivatives at one point.
#[derive(Debug, Clone, Copy)]
pub struct AiryEval {
    pub z: Complex64,
    pub ai: Complex64,
    pub ai_prime: Complex64,
    pub bi: Complex64,
    pub bi_prime: Complex64,
}

/// I_nu, K_nu and derivatives at one point.
#[derive(Debug, Clone, Copy)]
pub struct BesselEval {
    pub nu: f64,
    pub z: Complex64,
    pub i_val: Complex64,
    pub k_val: Complex64,
    pub i_prime: Complex64,
    pub k_prime: Complex64,
}

/// Evaluate Ai, Ai', Bi, Bi' with an overflow guard at |z| = 1e3.
pub fn airy_eval(z: Complex64) -> Result<AiryEval, SpecFunError> {
    if z.norm() > 1e3 {
        return Err(SpecFunError::RangeError { modulus: z.norm(), guard: 1e3 });
    }
    let (ai, ai_prime) = airy::airy_ai(z);
    let (bi, bi_prime) = airy::airy_bi(z);
    let out = AiryEval { z, ai, ai_prime, bi, bi_prime };
    if [ai, ai_prime, bi, bi_prime].iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(SpecFunError::RangeError { modulus: z.norm(), guard: 1e3 });
    }
    Ok(out)
}

/// Evaluate I_nu, K_nu and derivatives in the sector |arg z| <= pi/4.
pub fn bessel_ik(nu: f64, z: Complex64) -> Result<BesselEval, SpecFunError> {
    if nu < -0.5 {
        return Err(SpecFunError::OrderError { nu });
    }
    if z.norm() == 0.0 {
        return Err(SpecFunError::ZeroArgument);
    }
    let max_arg = PI / 4.0 + 1e-12;
    if z.arg().abs() > max_arg {
        return Err(SpecFunError::SectorError { arg: z.arg().abs(), max_arg: PI / 4.0 });
    }
    Ok(BesselEval {
        nu,
        z,
        i_val: bessel::bessel_i(nu, z),
        k_val: bessel::bessel_k(nu, z),
        i_prime: bessel::bessel_i_prime(nu, z),
        k_prime: bessel::bessel_k_prime(nu, z),
    })
}

/// The half-line conjugated Bessel solution (sqrt(E) z)^{1/2} I_nu(sqrt(E) z)
/// of u'' = (E + (nu^2 - 1/4)/z^2) u, used to align interior frames.
pub fn itilde(nu: f64, e: Complex64, r: f64) -> Complex64 {
    let w = e.sqrt() * r;
    w.sqrt() * bessel::bessel_i(nu, w)
}

/// Deterministic 64-bit mix for reproducible pseudo-random test points.
pub fn splitmix64(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z = z ^ (z >> 31);
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// Max residuals of the identity corpus; the `specfun-selftest` subcommand
/// prints these, and the acceptance suite bounds them.
#[derive(Debug, Clone, Copy, Default)]
pub struct SelfTestReport {
    pub airy_connection: f64,
    pub airy_wronskian: f64,
    pub bi_construction: f64,
    pub bessel_wronskian: f64,
    pub bessel_recurrence: f64,
    pub turan_excess: f64,
    pub product_bound_constant: f64,
}

/// Run the identity corpus at `n` deterministic sample points per family.
pub fn selftest(n: usize) -> SelfTestReport {
    let mut rep = SelfTestReport::default();
    let mut state = 0x5EEDu64;
    let rot = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    for _ in 0..n {
        let rr = 0.05 + 7.95 * splitmix64(&mut state);
        let th = (2.0 * splitmix64(&mut state) - 1.0) * 5.0 * PI / 6.0;
        let z = Complex64::from_polar(rr, th);
        let a0 = airy_eval(z).unwrap();
        let am = airy_eval(z / rot).unwrap();
        let ap = airy_eval(z * rot).unwrap();
        let em = Complex64::from_polar(1.0, -2.0 * PI / 3.0);
        let ep = rot;
        let scale = a0.ai.norm().max(am.ai.norm()).max(ap.ai.norm()).max(1e-30);
        rep.airy_connection = rep
            .airy_connection
            .max((a0.ai + em * am.ai + ep * ap.ai).norm() / scale);
        // W(Ai, Ai(. e^{-+2pi/3})) = e^{+-i pi/6}/(2 pi).
        let wm = a0.ai * (am.ai_prime / rot) - a0.ai_prime * am.ai;
        let wp = a0.ai * (ap.ai_prime * rot) - a0.ai_prime * ap.ai;
        let tm = Complex64::from_polar(1.0 / (2.0 * PI), PI / 6.0);
        let tp = Complex64::from_polar(1.0 / (2.0 * PI), -PI / 6.0);
        // Normalize by the product scale: the cancellation in the determinant
        // is the conditioning limit, not the function accuracy.
        let sm = (a0.ai * (am.ai_prime / rot)).norm().max(tm.norm());
        let sp = (a0.ai * (ap.ai_prime * rot)).norm().max(tp.norm());
        rep.airy_wronskian = rep
            .airy_wronskian
            .max((wm - tm).norm() / sm)
            .max((wp - tp).norm() / sp);
        let bi_ref = Complex64::from_polar(1.0, -PI / 6.0) * am.ai
            + Complex64::from_polar(1.0, PI / 6.0) * ap.ai;
        rep.bi_construction =
            rep.bi_construction.max((a0.bi - bi_ref).norm() / a0.bi.norm().max(1e-30));
    }
    for _ in 0..n {
        let nu = -0.5 + 10.5 * splitmix64(&mut state);
        let rr = 0.2 + 20.0 * splitmix64(&mut state);
        let th = (2.0 * splitmix64(&mut state) - 1.0) * PI / 4.0;
        let z = Complex64::from_polar(rr, th);
        let be = bessel_ik(nu, z).unwrap();
        let w = be.i_val * be.k_prime - be.i_prime * be.k_val;
        rep.bessel_wronskian = rep.bessel_wronskian.max((w * z + 1.0).norm());
        let rec = be.i_prime - (bessel::bessel_i(nu - 1.0, z) - nu / z * be.i_val);
        rep.bessel_recurrence =
            rep.bessel_recurrence.max(rec.norm() / be.i_val.norm().max(1e-30));
    }
    // Turan-type bound in the narrow sector |arg z| <= pi/16, nu >= 3.
    for _ in 0..n {
        let nu = 3.0 + 27.0 * splitmix64(&mut state);
        let rr = 0.5 + 25.0 * splitmix64(&mut state);
        let th = (2.0 * splitmix64(&mut state) - 1.0) * PI / 16.0;
        let z = Complex64::from_polar(rr, th);
        let iv = bessel::bessel_i(nu, z);
        let ip = bessel::bessel_i_prime(nu, z);
        let phi = Complex64::new(1.0, 0.0) + nu * nu / (z * z) - (ip / iv) * (ip / iv);
        let excess = (phi.norm() - 1.0 / (nu + 1.0)).max(0.0);
        rep.turan_excess = rep.turan_excess.max(excess);
    }
    // Fitted constant for |I K| <= C |z^2 + nu^2|^{-1/2}.
    for _ in 0..n {
        let nu = 3.0 + 47.0 * splitmix64(&mut state);
        let rr = 0.5 + 40.0 * splitmix64(&mut state);
        let th = (2.0 * splitmix64(&mut state) - 1.0) * PI / 4.0;
        let z = Complex64::from_polar(rr, th);
        let prod = (bessel::bessel_i(nu, z) * bessel::bessel_k(nu, z)).norm();
        let bound = (z * z + nu * nu).norm().sqrt();
        rep.product_bound_constant = rep.product_bound_constant.max(prod * bound);
    }
    rep
}
