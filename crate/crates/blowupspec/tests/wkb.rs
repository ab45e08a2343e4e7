//! Turning-point basis checks: the Langer map, the four Airy-type solutions,
//! their exact connection/Wronskian identities, and the corrected equation.

use blowupspec::wkb::*;
use num_complex::Complex64;
use std::f64::consts::PI;

const ROT: Complex64 = Complex64::new(-0.5, 0.866_025_403_784_438_6); // e^{2 pi i/3}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn zeta_at_one_and_origin() {
    let (z, zs) = zeta_map(c(1.0, 0.0), None).unwrap();
    assert!(z.norm() <= 1e-12);
    assert!((zs - 2f64.powf(1.0 / 3.0)).norm() <= 1e-12);

    // Two-term expansion near s = 0: zeta(s) = z0 + z0 * (-8/(3 pi)) s + O(s^2)
    // with z0 = -(3 pi / 8)^{2/3}.
    let z0 = -(3.0 * PI / 8.0).powf(2.0 / 3.0);
    for sv in [1e-8, 1e-5, 1e-3] {
        let (z, _) = zeta_map(c(sv, 0.0), None).unwrap();
        let expect = z0 * (1.0 - 8.0 / (3.0 * PI) * sv);
        assert!((z - expect).norm() <= 1e-10 + 3.0 * sv * sv);
    }
}

#[test]
fn zeta_solves_mapping_ode() {
    // zeta * zeta_s^2 = s^2 - 1 (low) resp. s^2 - 1 - alpha/s^2 (high), and
    // zeta_s matches a central difference of zeta.
    for sv in [0.3, 0.7, 1.3, 2.5, 6.0] {
        let s = c(sv, 0.02);
        let (z, zs) = zeta_map(s, None).unwrap();
        let p = s * s - 1.0;
        assert!((z * zs * zs - p).norm() <= 1e-12 * p.norm().max(1.0));
        let d = 1e-6;
        let (zp, _) = zeta_map(s + d, None).unwrap();
        let (zm, _) = zeta_map(s - d, None).unwrap();
        assert!(((zp - zm) / (2.0 * d) - zs).norm() <= 1e-7 * zs.norm());
    }
    let al = c(3.5, 0.2);
    for sv in [0.4, 1.0, 1.6, 2.4, 5.0] {
        let s = c(sv, 0.01);
        let (z, zs) = zeta_map(s, Some(al)).unwrap();
        let p = s * s - 1.0 - al / (s * s);
        assert!((z * zs * zs - p).norm() <= 1e-12 * p.norm().max(1.0));
    }
}

fn sweep_cases() -> Vec<(f64, Complex64, Option<f64>)> {
    let mut v = vec![
        (0.3, c(1.0, 0.0), None),
        (0.25, c(1.05, 0.05), None),
        (0.35, c(0.95, -0.04), None),
        // Extreme scan energies: E_pm at lambda near -+3bi.
        (0.35, c(1.0, -1.05), None),
        (0.4, c(0.95, 1.2), None),
    ];
    for b in [0.25, 0.35] {
        for nu in [1.0, 3.0, 10.0] {
            v.push((b, c(1.0, 0.02), Some(nu)));
        }
        v.push((b, c(1.02, -0.03), Some(30.0)));
    }
    v
}

fn r_grid(b: f64, td: &TurningData, n: usize) -> Vec<f64> {
    let rmin = 0.3f64.max(0.1 * td.s0.norm() / b);
    let rmax = 6.0 / b * td.s0.norm();
    (0..n).map(|i| rmin + (rmax - rmin) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn connection_and_wronskian_identities() {
    // psi1 + e^{-2 pi i/3} psi2 + e^{2 pi i/3} psi3 = 0,
    // 2 psi4 = e^{i pi/6} psi1 + e^{-i pi/6} psi3,
    // W(psi4, psi2) = b^{1/3} E^{1/6} / (2^{4/3} pi), W(psi1, psi3) = -i * same.
    let e6 = Complex64::from_polar(1.0, PI / 6.0);
    for (b, e, nu) in sweep_cases() {
        let se = SpectralEnergy::new(b, e, nu).unwrap();
        let td = turning_data(&se).unwrap();
        let wex = b.powf(1.0 / 3.0) * e.powf(1.0 / 6.0) / (2f64.powf(4.0 / 3.0) * PI);
        for r in r_grid(b, &td, 40) {
            let ev = wkb_basis(&se, r).unwrap();
            let m = ev.psi.iter().map(|p| p.norm()).fold(0.0, f64::max);
            assert!((ev.psi[0] + ev.psi[1] / ROT + ev.psi[2] * ROT).norm() <= 1e-9 * m);
            assert!((2.0 * ev.psi[3] - e6 * ev.psi[0] - ev.psi[2] / e6).norm() <= 1e-9 * m);

            let w42 = ev.psi[3] * ev.dpsi[1] - ev.psi[1] * ev.dpsi[3];
            assert!((w42 - wex).norm() <= 1e-8 * wex.norm());
            // W(psi1, psi3) loses all digits deep inside the well, where both
            // members ride the same growing mode; check it only where the
            // products carry the answer within ~11 digits.
            let w13 = ev.psi[0] * ev.dpsi[2] - ev.psi[2] * ev.dpsi[0];
            let cond = ev.psi[0].norm() * ev.dpsi[2].norm() + ev.psi[2].norm() * ev.dpsi[0].norm();
            if cond <= 1e5 * wex.norm() {
                assert!((w13 + Complex64::i() * wex).norm() <= 1e-8 * wex.norm());
            }
        }
    }
}

#[test]
fn corrected_equation_residual() {
    // (d^2/dr^2 - E + b^2 r^2/4 - (nu^2 - 1/4)/r^2) psi_j = h psi_j to 1e-5
    // relative, by fourth-order differencing away from the matching interval
    // around the turning point and away from Airy zeros.
    for (b, e, nu) in sweep_cases() {
        let se = SpectralEnergy::new(b, e, nu).unwrap();
        let td = turning_data(&se).unwrap();
        let icw = 4.0 * b.powf(2.0 / 3.0)
            * if nu.is_some() { td.s0.norm().powf(-1.0 / 3.0) } else { 1.0 };
        let lbar = nu.map(|x| x * x - 0.25).unwrap_or(0.0);
        for r in r_grid(b, &td, 24) {
            if (b * r - 2.0 * e.re.sqrt() * td.s0.norm()).abs() < icw {
                continue;
            }
            let ev = wkb_basis(&se, r).unwrap();
            let m = ev.psi.iter().map(|p| p.norm()).fold(0.0, f64::max);
            let k2 = (b * b * r * r / 4.0 - 1.0).abs() + lbar / (r * r) + 1.0;
            let del = 0.015f64.min(0.09 / k2.sqrt()).min(0.3 * r);
            let pot = c(b * b * r * r / 4.0 - lbar / (r * r), 0.0) - e;
            for j in 0..4 {
                if ev.psi[j].norm() < 1e-2 * m {
                    continue; // too close to an Airy zero for a relative test
                }
                let f = |x: f64| wkb_basis(&se, x).unwrap().psi[j];
                let dd = (-f(r - 2.0 * del) + 16.0 * f(r - del) - 30.0 * ev.psi[j]
                    + 16.0 * f(r + del)
                    - f(r + 2.0 * del))
                    / (12.0 * del * del);
                let resid = dd + pot * ev.psi[j] - ev.h * ev.psi[j];
                let scale = dd.norm() + (pot.norm() + ev.h.norm() + 1.0) * ev.psi[j].norm();
                assert!(
                    resid.norm() <= 1e-5 * scale,
                    "b={b} e={e} nu={nu:?} r={r}: residual {:.2e}",
                    resid.norm() / scale
                );
            }
        }
    }
}

#[test]
fn correction_term_bounds() {
    // |h| <= C min(b^2, r^{-2}) without index term, |h| <= C r^{-2} with it.
    for (b, e, nu) in sweep_cases() {
        let se = SpectralEnergy::new(b, e, nu).unwrap();
        let td = turning_data(&se).unwrap();
        for r in r_grid(b, &td, 40) {
            let ev = wkb_basis(&se, r).unwrap();
            let bound = if nu.is_some() {
                1.0 / (r * r)
            } else {
                (b * b).min(1.0 / (r * r))
            };
            assert!(ev.h.norm() <= 1.0 * bound, "b={b} nu={nu:?} r={r}: |h|={}", ev.h.norm());
        }
    }
}

#[test]
fn real_energy_reduction() {
    // At E = 1 the turning point is exactly 2/b, Re eta equals minus the
    // classical action integral, and psi2, psi4, h are real inside.
    let b = 0.3;
    let se = SpectralEnergy::new(b, c(1.0, 0.0), None).unwrap();
    let td = turning_data(&se).unwrap();
    assert!((td.r_star - 2.0 / b).abs() <= 1e-10);
    for r in [0.5, 2.0, 1.0 / b, 1.9 / b] {
        let (_, eta, _, _) = turning_eta(&se, r).unwrap();
        assert!((eta.re + s_b(b, r)).abs() <= 1e-8);
        let ev = wkb_basis(&se, r).unwrap();
        assert!(ev.psi[1].im.abs() <= 1e-10 * ev.psi[1].norm());
        assert!(ev.psi[3].im.abs() <= 1e-10 * ev.psi[3].norm());
        assert!(ev.h.im.abs() <= 1e-10 * (ev.h.norm() + b * b));
    }
    // Re eta vanishes at the turning point from either side.
    for r in [td.r_star * (1.0 - 1e-9), td.r_star * (1.0 + 1e-9)] {
        let (_, eta, _, _) = turning_eta(&se, r).unwrap();
        assert!(eta.re.abs() <= 1e-8);
    }
}

#[test]
fn exponential_normalization_inside() {
    // kappa^- psi4 matches e^{-r} up to O(sqrt b) well inside the well.
    let b = 0.3;
    let se = SpectralEnergy::new(b, c(1.0, 0.0), None).unwrap();
    let r = 1.0 / b.sqrt();
    let ev = wkb_basis(&se, r).unwrap();
    let tol = 3.0 * b.sqrt();
    let ratio = ev.kappa_minus * ev.psi[3] * Complex64::from_polar(1.0, -PI / 6.0) / (-r).exp();
    assert!((ratio - 1.0).norm() <= tol);
    // The modulus alone is much closer.
    assert!(((ev.kappa_minus * ev.psi[3]).norm() / (-r).exp() - 1.0).abs() <= tol / 3.0);
    // kappa^{+-} = 2^{7/6} sqrt(pi) E^{1/6} b^{-1/6} e^{+- pi E / 2b}.
    let pref = 2f64.powf(7.0 / 6.0) * PI.sqrt() * b.powf(-1.0 / 6.0);
    assert!((ev.kappa_plus.norm() - pref * (PI / (2.0 * b)).exp()).abs() <= 1e-9 * ev.kappa_plus.norm());
    assert!((ev.kappa_minus.norm() - pref * (-PI / (2.0 * b)).exp()).abs() <= 1e-9 * ev.kappa_minus.norm());
}

#[test]
fn oscillatory_amplitude_law() {
    // |psi3| = e^{Re eta} / (2 sqrt(pi) |mu^{1/3} (s^2-1)^{1/4}|) (1 + O(1/eta))
    // beyond the turning point.
    let b = 0.3;
    let se = SpectralEnergy::new(b, c(1.0, 0.0), None).unwrap();
    let r = 3.0 / b;
    let ev = wkb_basis(&se, r).unwrap();
    let mu13 = (2.0 / b).sqrt().powf(1.0 / 3.0);
    let s = se.s_of(r);
    let amp = ev.eta.re.exp() / (2.0 * PI.sqrt() * mu13 * (s * s - 1.0).norm().powf(0.25));
    assert!((ev.psi[2].norm() / amp - 1.0).abs() <= 10.0 / ev.eta.norm());
}

#[test]
fn eta_scales_inversely_with_b() {
    // eta_{b,E}(r) = b^{-1} eta_{1,E}(b r).
    let e = c(1.04, 0.03);
    let se1 = SpectralEnergy::new(1.0, e, None).unwrap();
    for b in [0.25, 0.3, 0.4] {
        let se = SpectralEnergy::new(b, e, None).unwrap();
        for r in [0.7, 3.0, 8.0, 20.0] {
            let (_, eta, _, _) = turning_eta(&se, r).unwrap();
            let (_, eta1, _, _) = turning_eta(&se1, b * r).unwrap();
            assert!((eta - eta1 / b).norm() <= 1e-9 * eta.norm().max(1.0));
        }
    }
}

#[test]
fn weight_comparison_between_shifted_energies() {
    // For the energy pair E_+ = 1 + (lambda + i b s_c), conj(E_-), the inner
    // weights differ by the explicit exponential factor up to e^{+- c r},
    // c = 1/64, within a factor of two.
    let b = 0.3;
    let (lam, s_c) = (c(0.005, 0.015), 0.02);
    let ep = 1.0 + lam + Complex64::i() * b * s_c;
    let em_bar = (1.0 - (lam + Complex64::i() * b * s_c)).conj();
    let sep = SpectralEnergy::new(b, ep, None).unwrap();
    let sem = SpectralEnergy::new(b, em_bar, None).unwrap();
    let shift = (-PI * (ep - em_bar).re / (2.0 * b)).exp();
    let cc = 1.0 / 64.0;
    for i in 0..30 {
        let r = 0.5 + 19.5 * i as f64 / 29.0;
        let (_, _, _, om_m) = turning_eta(&sem, r).unwrap();
        let (_, _, _, om_p) = turning_eta(&sep, r).unwrap();
        let q = om_m / om_p * shift;
        assert!(q >= 0.5 * (-cc * r).exp() && q <= 2.0 * (cc * r).exp(), "r={r}: q={q}");
    }
}

#[test]
fn turning_point_location() {
    // Perturbation bound and monotonicity of r* in Re E.
    let b = 0.3;
    let se = SpectralEnergy::new(b, c(1.0, 0.03), None).unwrap();
    let td = turning_data(&se).unwrap();
    assert!((td.r_star - 2.0 * 1.0f64.sqrt() / b).abs() <= 0.03 / b);

    let mut prev = 0.0;
    for re in [0.8, 0.9, 1.0, 1.1, 1.2] {
        let se = SpectralEnergy::new(b, c(re, 0.01), None).unwrap();
        let rs = turning_data(&se).unwrap().r_star;
        assert!(rs > prev);
        prev = rs;
    }

    // High class: r* near 2 Re(sqrt(E) s0) / b, and the algebra of the
    // turning parameters: s0^2 = t_+, t_+ + t_- = 1, t_+ t_- = -alpha.
    let se = SpectralEnergy::new(0.35, c(1.02, -0.03), Some(30.0)).unwrap();
    let td = turning_data(&se).unwrap();
    let target = 2.0 * (se.e.sqrt() * td.s0).re / se.b;
    assert!((td.r_star - target).abs() <= 0.03 / (se.b * td.s0.norm()));
    assert!((td.s0 * td.s0 - td.t_plus).norm() <= 1e-12 * td.t_plus.norm());
    assert!((td.t_plus + td.t_minus - 1.0).norm() <= 1e-12);
    assert!((td.t_plus * td.t_minus + td.alpha).norm() <= 1e-12 * td.alpha.norm().max(1.0));
}

#[test]
fn rejects_out_of_domain_parameters() {
    assert!(SpectralEnergy::new(0.0, c(1.0, 0.0), None).is_err());
    assert!(SpectralEnergy::new(-0.3, c(1.0, 0.0), None).is_err());
    assert!(SpectralEnergy::new(0.3, c(2.7, 0.0), None).is_err());
    assert!(SpectralEnergy::new(0.3, c(1.0, 0.0), Some(0.5)).is_err());
    // Low class only holds in a strip Im E <= b * const.
    assert!(SpectralEnergy::new(0.01, c(1.0, 0.2), None).is_err());
    assert!(SpectralEnergy::new(0.3, c(1.0, 0.2), None).is_ok());
    // s outside the tracking cone.
    assert!(zeta_map(c(0.3, 0.5), None).is_err());
    assert!(zeta_map(c(-1.0, 0.0), None).is_err());
    // r must be positive.
    let se = SpectralEnergy::new(0.3, c(1.0, 0.0), None).unwrap();
    assert!(wkb_basis(&se, 0.0).is_err());
    assert!(turning_eta(&se, -1.0).is_err());
}

#[test]
fn strict_cone_reporting() {
    assert!(alpha_in_strict_cone(c(1.0, 0.1)));
    assert!(!alpha_in_strict_cone(c(1.0, 0.5)));
    assert!(!alpha_in_strict_cone(c(-1.0, 0.0)));
}
