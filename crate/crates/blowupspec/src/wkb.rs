//! Turning-point bases for the quadratic-potential comparison equation
//!
//!   psi'' + (b^2 r^2/4 - E - (nu^2 - 1/4) r^{-2}) psi = h psi,
//!
//! built from complex-argument Airy functions through the Langer variable
//! `zeta` defined by `zeta zeta_s^2 = s^2 - 1 - alpha s^{-2}`, `zeta(s0) = 0`,
//! with `s = b r / (2 sqrt(E))`. The four bases `psi_1..psi_4` differ by the
//! rotation of the Airy argument; `psi_1` is recessive beyond the turning
//! point, `psi_2` recessive inside, and `psi_4` is the interior basis that
//! normalizes to `e^{-sqrt(E) r}` under `kappa_minus`.
//!
//! Branches are never taken from principal values across the turning point:
//! `zeta` and `zeta_s` are continued numerically along the straight path from
//! `s0` to the query point, selecting at each step the root nearest to the
//! tracked value. Everything downstream (`eta`, the Airy arguments, the
//! correction `h`) is an explicit function of the tracked `(zeta, zeta_s)`.

use crate::specfun::airy::{airy_ai, airy_bi};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WkbError {
    #[error("invalid parameters: {0}")]
    InvalidInput(String),
    #[error("energy outside validity strip: {0}")]
    Domain(String),
    #[error("index parameter alpha has |arg| = {arg:.3} outside the tracking cone")]
    AlphaOutsideCone { arg: f64 },
    #[error("branch tracking did not converge (phase jump above pi/2 at maximum refinement)")]
    BranchTracking,
    #[error("turning point bracket search failed")]
    TurningBracket,
}

/// Cone half-angle beyond which the high-class index parameter is rejected.
pub const ALPHA_CONE: f64 = PI / 4.0;
/// Reported (not fatal) cone margin for the index parameter.
pub const ALPHA_CONE_STRICT: f64 = PI / 16.0;
/// Default width of the validity strip Im E <= b * IM_STRIP for the low-class basis.
pub const IM_STRIP: f64 = 10.0;

/// Parameters (b, E) of the comparison equation, plus the spherical index for
/// the high-class variant.
#[derive(Debug, Clone, Copy)]
pub struct SpectralEnergy {
    pub b: f64,
    pub e: Complex64,
    pub nu: Option<f64>,
}

impl SpectralEnergy {
    pub fn new(b: f64, e: Complex64, nu: Option<f64>) -> Result<Self, WkbError> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(WkbError::InvalidInput(format!("b = {b} must be positive")));
        }
        if (e - 1.0).norm() > 1.6 {
            return Err(WkbError::Domain(format!("|E - 1| = {} > 8/5", (e - 1.0).norm())));
        }
        if let Some(n) = nu {
            if !(n >= 1.0) {
                return Err(WkbError::InvalidInput(format!("nu = {n} must be >= 1")));
            }
        } else if e.im > b * IM_STRIP {
            return Err(WkbError::Domain(format!(
                "Im E = {} above the strip {} for the low-class basis",
                e.im,
                b * IM_STRIP
            )));
        }
        Ok(Self { b, e, nu })
    }

    /// alpha = b^2 (4 nu^2 - 1) / (16 E^2); zero for the low-class basis.
    pub fn alpha(&self) -> Complex64 {
        match self.nu {
            None => Complex64::new(0.0, 0.0),
            Some(n) => self.b * self.b * (4.0 * n * n - 1.0) / (16.0 * self.e * self.e),
        }
    }

    /// s(r) = b r / (2 sqrt(E)).
    pub fn s_of(&self, r: f64) -> Complex64 {
        self.b * r / (2.0 * self.e.sqrt())
    }

    /// mu^{4/3} = (2E/b)^{2/3} e^{i pi/3} with principal fractional power of 2E/b.
    pub fn mu_pow_43(&self) -> Complex64 {
        (2.0 * self.e / self.b).powf(2.0 / 3.0) * Complex64::from_polar(1.0, PI / 3.0)
    }

    /// Normalizers kappa_pm = 2^{7/6} sqrt(pi) E^{1/6} b^{-1/6} e^{+- pi E / 2b}.
    pub fn kappas(&self) -> (Complex64, Complex64) {
        let pref = 2f64.powf(7.0 / 6.0) * PI.sqrt() * self.e.powf(1.0 / 6.0)
            / self.b.powf(1.0 / 6.0);
        let ex = (PI * self.e / (2.0 * self.b)).exp();
        (pref * ex, pref / ex)
    }
}

/// Turning-point data shared by all evaluations at one (b, E, nu).
#[derive(Debug, Clone, Copy)]
pub struct TurningData {
    pub r_star: f64,
    pub s0: Complex64,
    pub t_plus: Complex64,
    pub t_minus: Complex64,
    pub alpha: Complex64,
}

/// One-point evaluation of the four bases and their companions.
#[derive(Debug, Clone, Copy)]
pub struct WkbEval {
    pub r: f64,
    pub psi: [Complex64; 4],
    pub dpsi: [Complex64; 4],
    pub eta: Complex64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub h: Complex64,
    pub kappa_plus: Complex64,
    pub kappa_minus: Complex64,
    pub s: Complex64,
    pub zeta: Complex64,
    pub zeta_s: Complex64,
}

/// Expansion of zeta at its zero s0: coefficients c1..c4 of
/// zeta = c1 u + c2 u^2 + c3 u^3 + c4 u^4, u = s - s0, matched to
/// P(s) = s^2 - 1 - alpha s^{-2} through zeta zeta_s^2 = P.
#[derive(Debug, Clone, Copy)]
struct TurningSeries {
    s0: Complex64,
    t_plus: Complex64,
    t_minus: Complex64,
    alpha: Complex64,
    c: [Complex64; 4],
}

fn p_of(s: Complex64, alpha: Complex64) -> Complex64 {
    s * s - 1.0 - alpha / (s * s)
}

fn turning_series(alpha: Complex64) -> Result<TurningSeries, WkbError> {
    let (s0, t_plus, t_minus) = if alpha.norm() == 0.0 {
        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        if alpha.arg().abs() > ALPHA_CONE {
            return Err(WkbError::AlphaOutsideCone { arg: alpha.arg() });
        }
        let disc = (1.0 + 4.0 * alpha).sqrt();
        let t_plus = (1.0 + disc) / 2.0;
        (t_plus.sqrt(), t_plus, (1.0 - disc) / 2.0)
    };
    let p1 = 2.0 * s0 + 2.0 * alpha / s0.powi(3);
    let p2 = 1.0 - 3.0 * alpha / s0.powi(4);
    let p3 = 4.0 * alpha / s0.powi(5);
    let p4 = -5.0 * alpha / s0.powi(6);
    let c1 = p1.powf(1.0 / 3.0);
    let c2 = p2 / (5.0 * c1 * c1);
    let c3 = (p3 - 8.0 * c1 * c2 * c2) / (7.0 * c1 * c1);
    let c4 = (p4 - 22.0 * c1 * c2 * c3 - 4.0 * c2.powi(3)) / (9.0 * c1 * c1);
    Ok(TurningSeries { s0, t_plus, t_minus, alpha, c: [c1, c2, c3, c4] })
}

fn taylor_zeta(ts: &TurningSeries, u: Complex64) -> Complex64 {
    (((ts.c[3] * u + ts.c[2]) * u + ts.c[1]) * u + ts.c[0]) * u
}

fn taylor_zeta_s(ts: &TurningSeries, u: Complex64) -> Complex64 {
    ((4.0 * ts.c[3] * u + 3.0 * ts.c[2]) * u + 2.0 * ts.c[1]) * u + ts.c[0]
}

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
const GL_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Continue (zeta, zeta_s) from the turning point to s along the straight
/// segment, integrating V = (2/3) zeta^{3/2} = int sqrt(P) and unwrapping the
/// 2/3-power branch panel by panel. The path parameter is quadratic in t so
/// the square-root endpoint singularity of the integrand becomes smooth.
fn track_once(
    s: Complex64,
    ts: &TurningSeries,
    panels: usize,
) -> Option<(Complex64, Complex64)> {
    let u = s - ts.s0;
    let c1_32 = ts.c[0].powf(1.5);
    let su = u.sqrt();
    let mut q_pred = c1_32 * su * (0.5 / panels as f64); // direction seed near t = 0
    let mut v = Complex64::new(0.0, 0.0);
    let mut v_prev: Option<Complex64> = None;
    let mut arg_v = 0.0f64;
    let mut offset: Option<f64> = None;
    let mut zmag = 0.0f64;
    let mut sigma: Option<f64> = None;
    for p in 0..panels {
        for i in 0..8 {
            let t = (p as f64 + 0.5 * (GL_X[i] + 1.0)) / panels as f64;
            let w = ts.s0 + u * t * t;
            let mut q = p_of(w, ts.alpha).sqrt();
            if (q - q_pred).norm() > (q + q_pred).norm() {
                q = -q;
            }
            // Refuse steps where the root rotates beyond pi/2: the nearest-root
            // rule is no longer reliable there.
            if (q * q_pred.conj()).arg().abs() > PI / 2.0 {
                return None;
            }
            v += 0.5 * GL_W[i] / panels as f64 * q * 2.0 * u * t;
            q_pred = q;
        }
        if v.norm() == 0.0 {
            continue;
        }
        zmag = (1.5 * v.norm()).powf(2.0 / 3.0);
        match v_prev {
            None => {
                arg_v = v.arg();
                // The 2/3-power candidates differ by 4 pi / 3; fix the branch
                // offset once against the local expansion, which is exact here
                // because the seed branch of q is the principal one.
                let te = (p + 1) as f64 / panels as f64;
                let target = taylor_zeta(ts, u * te * te).arg();
                let k = ((target - 2.0 / 3.0 * arg_v) / (4.0 * PI / 3.0)).round();
                offset = Some(4.0 * PI / 3.0 * k);
            }
            Some(vp) => {
                // Unwrap arg V continuously; a jump near pi is ambiguous.
                let dj = (v / vp).arg();
                if dj.abs() > 2.5 {
                    return None;
                }
                arg_v += dj;
            }
        }
        v_prev = Some(v);
        if sigma.is_none() {
            // Orient the global square-root branch so zeta_s continues c1.
            let te = (p + 1) as f64 / panels as f64;
            let zs_ref = taylor_zeta_s(ts, u * te * te);
            let theta = 2.0 / 3.0 * arg_v + offset.unwrap_or(0.0);
            let zhalf = Complex64::from_polar(zmag.sqrt(), theta / 2.0);
            let zs_est = q_pred / zhalf;
            sigma = Some(if (zs_est - zs_ref).norm() <= (zs_est + zs_ref).norm() {
                1.0
            } else {
                -1.0
            });
        }
    }
    let theta = 2.0 / 3.0 * arg_v + offset.unwrap_or(0.0);
    let zeta = Complex64::from_polar(zmag, theta);
    let mut q_end = p_of(s, ts.alpha).sqrt();
    if (q_end - q_pred).norm() > (q_end + q_pred).norm() {
        q_end = -q_end;
    }
    let zhalf = Complex64::from_polar(zmag.sqrt(), theta / 2.0);
    Some((zeta, sigma.unwrap_or(1.0) * q_end / zhalf))
}

fn zeta_track(s: Complex64, ts: &TurningSeries) -> Result<(Complex64, Complex64), WkbError> {
    let scale = ts.s0.norm().max(1.0);
    let u = s - ts.s0;
    if u.norm() <= 0.02 * scale {
        return Ok((taylor_zeta(ts, u), taylor_zeta_s(ts, u)));
    }
    let mut prev: Option<(Complex64, Complex64)> = None;
    let mut panels = 8usize;
    while panels <= 4096 {
        if let Some((z, zs)) = track_once(s, ts, panels) {
            if let Some((pz, pzs)) = prev {
                if (z - pz).norm() <= 1e-12 * (z.norm() + 1e-30)
                    && (zs - pzs).norm() <= 1e-11 * (zs.norm() + 1e-30)
                {
                    return Ok((z, zs));
                }
            }
            prev = Some((z, zs));
        } else {
            prev = None;
        }
        panels *= 2;
    }
    Err(WkbError::BranchTracking)
}

/// The Langer map: zeta and its s-derivative at s, for the low-class
/// (alpha absent) or high-class equation, branch-tracked from the turning
/// point where zeta'(s0) = (2 (t_+ - t_-)/s0)^{1/3} (which is 2^{1/3} at
/// alpha = 0).
pub fn zeta_map(
    s: Complex64,
    alpha: Option<Complex64>,
) -> Result<(Complex64, Complex64), WkbError> {
    if s.norm() > 0.0 && s.arg().abs() > PI / 4.0 + 1e-9 {
        return Err(WkbError::InvalidInput(format!(
            "s = {s} outside the query cone |arg s| <= pi/4"
        )));
    }
    let ts = turning_series(alpha.unwrap_or(Complex64::new(0.0, 0.0)))?;
    zeta_track(s, &ts)
}

fn zeta_ss_at(
    ts: &TurningSeries,
    s: Complex64,
    zeta: Complex64,
    zeta_s: Complex64,
) -> Complex64 {
    let u = s - ts.s0;
    if u.norm() <= 0.02 * ts.s0.norm().max(1.0) {
        2.0 * ts.c[1] + 6.0 * ts.c[2] * u + 12.0 * ts.c[3] * u * u
    } else {
        let p1 = 2.0 * s + 2.0 * ts.alpha / s.powi(3);
        (p1 - zeta_s.powi(3)) / (2.0 * zeta * zeta_s)
    }
}

/// Correction h(r): away from the turning point by the closed form in (s,
/// zeta), near it by the series of (1/2) zeta_sss/zeta_s - (3/4)(zeta_ss/zeta_s)^2.
fn h_at(
    se: &SpectralEnergy,
    ts: &TurningSeries,
    s: Complex64,
    zeta: Complex64,
) -> Complex64 {
    let pref = -se.b * se.b / (4.0 * se.e);
    let u = s - ts.s0;
    if u.norm() <= 0.05 * ts.s0.norm().max(1.0) {
        let zs = taylor_zeta_s(ts, u);
        let zss = 2.0 * ts.c[1] + 6.0 * ts.c[2] * u + 12.0 * ts.c[3] * u * u;
        let zsss = 6.0 * ts.c[2] + 24.0 * ts.c[3] * u;
        let rat = zss / zs;
        pref * (0.5 * zsss / zs - 0.75 * rat * rat)
    } else {
        let p = p_of(s, ts.alpha);
        let s2 = s * s;
        let a = ts.alpha;
        let num = 3.0 * s2 + 2.0 + 18.0 * a / s2 - 6.0 * a / (s2 * s2)
            - a * a / (s2 * s2 * s2);
        pref * (5.0 * p / (16.0 * zeta.powi(3)) - num / (4.0 * p * p))
    }
}

/// Turning-point data: t_pm, s0 and the radius r_star where the rotated
/// Airy argument crosses the real axis (bisection on its imaginary part).
pub fn turning_data(se: &SpectralEnergy) -> Result<TurningData, WkbError> {
    let ts = turning_series(se.alpha())?;
    let m43 = se.mu_pow_43();
    let rot = Complex64::from_polar(1.0, -2.0 * PI / 3.0);
    let cond = |r: f64| -> Result<f64, WkbError> {
        let (z, _) = zeta_track(se.s_of(r), &ts)?;
        if se.e.im >= 0.0 {
            Ok((m43 * z * rot).im)
        } else {
            Ok((-m43 * z).im)
        }
    };
    let rc = 2.0 * (se.e.sqrt() * ts.s0).re / se.b;
    let mut w = se.e.im.abs() / (se.b * ts.s0.norm()) + 1e-3 * rc + 1e-9;
    let (mut lo, mut hi) = loop {
        let lo = (rc - w).max(1e-3 * rc);
        let hi = rc + w;
        let flo = cond(lo)?;
        let fhi = cond(hi)?;
        if flo == 0.0 && fhi == 0.0 {
            // Real-E degenerate bracket: the zero is at rc itself.
            break (rc, rc);
        }
        if flo.signum() != fhi.signum() {
            break (lo, hi);
        }
        w *= 1.7;
        if w > 10.0 * rc {
            return Err(WkbError::TurningBracket);
        }
    };
    for _ in 0..200 {
        if hi - lo <= 1e-13 * rc {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = cond(mid)?;
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == cond(lo)?.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TurningData {
        r_star: 0.5 * (lo + hi),
        s0: ts.s0,
        t_plus: ts.t_plus,
        t_minus: ts.t_minus,
        alpha: ts.alpha,
    })
}

/// True when alpha sits inside the strict reporting cone |arg| <= pi/16.
pub fn alpha_in_strict_cone(alpha: Complex64) -> bool {
    alpha.norm() == 0.0 || alpha.arg().abs() <= ALPHA_CONE_STRICT
}

fn eta_from_zeta(se: &SpectralEnergy, zeta: Complex64) -> Complex64 {
    let xi = se.mu_pow_43() * zeta * Complex64::from_polar(1.0, -2.0 * PI / 3.0);
    2.0 / 3.0 * Complex64::from_polar(xi.norm().powf(1.5), 1.5 * xi.arg())
}

fn omega_weight(se: &SpectralEnergy, r: f64, re_eta: f64) -> (f64, f64) {
    let b = se.b;
    let mut g = b * b * r * r - 4.0 * se.e;
    if let Some(n) = se.nu {
        g -= (4.0 * n * n - 1.0) * se.e / (r * r);
    }
    let g = g / b.powf(2.0 / 3.0);
    let env = (1.0 + g.norm_sqr()).powf(-0.25);
    (env * re_eta.exp(), env * (-re_eta).exp())
}

/// eta, omega_pm together with the shared turning data.
pub fn turning_eta(
    se: &SpectralEnergy,
    r: f64,
) -> Result<(TurningData, Complex64, f64, f64), WkbError> {
    if !(r > 0.0) {
        return Err(WkbError::InvalidInput("r must be positive".into()));
    }
    let td = turning_data(se)?;
    let ts = turning_series(se.alpha())?;
    let (zeta, _) = zeta_track(se.s_of(r), &ts)?;
    let eta = eta_from_zeta(se, zeta);
    let (op, om) = omega_weight(se, r, eta.re);
    Ok((td, eta, op, om))
}

/// Evaluate the four bases, derivatives and companions at one radius.
pub fn wkb_basis(se: &SpectralEnergy, r: f64) -> Result<WkbEval, WkbError> {
    if !(r > 0.0) {
        return Err(WkbError::InvalidInput("r must be positive".into()));
    }
    let ts = turning_series(se.alpha())?;
    let s = se.s_of(r);
    let (zeta, zeta_s) = zeta_track(s, &ts)?;
    let zeta_ss = zeta_ss_at(&ts, s, zeta, zeta_s);
    let m43 = se.mu_pow_43();
    let rot_m = Complex64::from_polar(1.0, -2.0 * PI / 3.0);
    let rot_p = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let zs_half = zeta_s.sqrt();
    let zsi = 1.0 / zs_half;
    let dsdr = se.b / (2.0 * se.e.sqrt());
    let args = [rot_m * m43 * zeta, rot_p * m43 * zeta, m43 * zeta];
    let rots = [rot_m, rot_p, Complex64::new(1.0, 0.0)];
    let mut psi = [Complex64::new(0.0, 0.0); 4];
    let mut dpsi = [Complex64::new(0.0, 0.0); 4];
    for j in 0..3 {
        let (ai, dai) = airy_ai(args[j]);
        psi[j] = zsi * ai;
        dpsi[j] = dsdr
            * (-0.5 * zsi / zeta_s * zeta_ss * ai + zs_half * rots[j] * m43 * dai);
    }
    let (bi, dbi) = airy_bi(args[1]);
    psi[3] = 0.5 * zsi * bi;
    dpsi[3] =
        dsdr * 0.5 * (-0.5 * zsi / zeta_s * zeta_ss * bi + zs_half * rot_p * m43 * dbi);
    let eta = eta_from_zeta(se, zeta);
    let (omega_plus, omega_minus) = omega_weight(se, r, eta.re);
    let h = h_at(se, &ts, s, zeta);
    let (kappa_plus, kappa_minus) = se.kappas();
    Ok(WkbEval {
        r,
        psi,
        dpsi,
        eta,
        omega_plus,
        omega_minus,
        h,
        kappa_plus,
        kappa_minus,
        s,
        zeta,
        zeta_s,
    })
}

/// Interior phase volume S_b(r) = int_{min(r, 2/b)}^{2/b} sqrt(1 - b^2 t^2/4) dt.
pub fn s_b(b: f64, r: f64) -> f64 {
    if r >= 2.0 / b {
        return 0.0;
    }
    let x = (b * r / 2.0).clamp(-1.0, 1.0);
    PI / (2.0 * b) - 0.5 * r * (1.0 - x * x).sqrt() - x.asin() / b
}
