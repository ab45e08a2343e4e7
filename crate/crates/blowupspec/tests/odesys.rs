//! Spectral-system checks: the symmetry-generated eigenmodes against the
//! assembled system, interior/exterior frame construction, determinant
//! r-independence, seed independence, and the flat-limit continuity.

use blowupspec::odesys::*;
use blowupspec::profile::{solve_profile, ProfileOptions, SelfSimilarProfile};
use blowupspec::specfun::itilde;
use blowupspec::groundstate::solve_ground_state;
use num_complex::Complex64;

fn profile(d: u32, b: f64) -> SelfSimilarProfile {
    solve_profile(d, b, &ProfileOptions::default()).unwrap()
}

fn flat(d: u32) -> SelfSimilarProfile {
    let p = 1.0 + 4.0 / d as f64;
    SelfSimilarProfile::from_ground_state(&solve_ground_state(d, p, 1e-10).unwrap())
}

fn rel_diff(a: &SolutionFrame, b: &SolutionFrame) -> f64 {
    let num: f64 = a
        .vec4()
        .iter()
        .zip(&b.vec4())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    num / b.norm()
}

/// Direction angle between two frames modulo complex scale.
fn direction_angle(a: &SolutionFrame, b: &SolutionFrame) -> f64 {
    let ip: Complex64 = a.vec4().iter().zip(&b.vec4()).map(|(x, y)| x.conj() * y).sum();
    (ip.norm() / (a.norm() * b.norm())).min(1.0).acos()
}

#[test]
fn flat_kernel_mode() {
    // At b = 0 the gauge mode r^{(d-1)/2}(Q, -Q) is in the kernel.
    let prof = flat(1);
    let sys = assemble_system(&prof, nu_of(0, 1), Complex64::new(0.0, 0.0)).unwrap();
    let k2 = prof.node_index(2.0).unwrap();
    let k6 = prof.node_index(6.0).unwrap();
    let f2 = symmetry_mode_frame(&prof, SymmetryMode::Phase, k2);
    let f6 = symmetry_mode_frame(&prof, SymmetryMode::Phase, k6);
    let got = propagate(&sys, &f2, &[6.0], 1e-12).unwrap();
    assert!(rel_diff(&got[0], &f6) <= 1e-7, "kernel residual {:e}", rel_diff(&got[0], &f6));
    assert!((f2.phi[0] + f2.phi[1]).norm() <= 1e-14);
}

#[test]
fn symmetry_modes_solve_the_system() {
    // The phase mode (lambda = 0), the scaling pair member (lambda = -2bi),
    // and the translation mode (lambda = -bi) each solve the assembled system.
    let prof = profile(1, 0.35);
    for mode in [SymmetryMode::Phase, SymmetryMode::ScaleMinus, SymmetryMode::Translation] {
        let nu = nu_of(mode.l(), 1);
        let sys = assemble_system(&prof, nu, mode.lambda(prof.b)).unwrap();
        let k2 = prof.node_index(2.0).unwrap();
        let k8 = prof.node_index(8.0).unwrap();
        let f2 = symmetry_mode_frame(&prof, mode, k2);
        let f8 = symmetry_mode_frame(&prof, mode, k8);
        let got = propagate(&sys, &f2, &[8.0], 1e-12).unwrap();
        let err = rel_diff(&got[0], &f8);
        assert!(err <= 1e-6, "{mode:?} residual {err:e}");
    }
}

#[test]
fn gauge_mode_in_spans() {
    // At the matching radius the kernel mode lies in the admissible exterior
    // span; at a moderate radius it lies in the regular interior span.
    let prof = profile(1, 0.3);
    let sys = assemble_system(&prof, nu_of(0, 1), Complex64::new(0.0, 0.0)).unwrap();
    let x_star = x_star_rule(prof.b, nu_of(0, 1));
    let rx = (x_star * 100.0).round() / 100.0;
    let kx = prof.node_index(rx).unwrap();
    let fx = symmetry_mode_frame(&prof, SymmetryMode::Phase, kx);
    let r_inf = (6.0 / prof.b).max(x_star + 10.0);
    let (ext, diag) = exterior_basis(&sys, r_inf, &[rx], 1e-12).unwrap();
    let (_, _, res_e) = span_projection(&fx, &ext[0]);
    assert!(res_e <= 1e-5, "exterior span residual {res_e:e}");
    assert!(diag.min_sin_angle >= 1e-3);
    let k4 = prof.node_index(4.0).unwrap();
    let f4 = symmetry_mode_frame(&prof, SymmetryMode::Phase, k4);
    let int = interior_basis(&sys, &[4.0], 1e-12).unwrap();
    let (_, _, res_i) = span_projection(&f4, &int[0]);
    assert!(res_i <= 1e-4, "interior span residual {res_i:e}");
}

#[test]
fn flat_exterior_decay() {
    // At b = 0 the first admissible solution is e^{-sqrt(1+lambda) r} up to the
    // potential tail.
    let prof = flat(1);
    let lambda = Complex64::new(0.1, 0.0);
    let sys = assemble_system(&prof, nu_of(0, 1), lambda).unwrap();
    let (ext, _) = exterior_basis(&sys, 20.0, &[15.0], 1e-12).unwrap();
    let want = (-(1.1f64).sqrt() * 15.0).exp();
    let got = ext[0][0].phi[0];
    assert!((got / want - 1.0).norm() <= 1e-2, "ratio {}", got / want);
    assert!(ext[0][0].phi[1].norm() <= 1e-2 * got.norm());
}

#[test]
fn interior_high_class_aligns_with_bessel() {
    // With the potentials negligible the high-class interior solution is the
    // modified-Bessel one sqrt(r) I_nu(r); alignment within 0.2 rad at r = 5.
    let prof = flat(2);
    let nu = nu_of(10, 2);
    let sys = assemble_system(&prof, nu, Complex64::new(0.0, 0.0)).unwrap();
    let int = interior_basis(&sys, &[5.0], 1e-12).unwrap();
    let r: f64 = 5.0;
    let e = Complex64::new(1.0, 0.0);
    let h = 1e-5;
    let zero = Complex64::new(0.0, 0.0);
    let reference = SolutionFrame {
        r,
        phi: [itilde(nu, e, r), zero],
        dphi: [(itilde(nu, e, r + h) - itilde(nu, e, r - h)) / (2.0 * h), zero],
    };
    let angle = direction_angle(&int[0][0], &reference);
    assert!(angle <= 0.2, "angle {angle}");
}

#[test]
fn determinant_is_radius_independent() {
    // The system matrix is trace-free: the 4x4 determinant of the four frames
    // is an r-invariant (this is the radius-independence behind the Jost
    // function).
    let prof = profile(1, 0.35);
    let lambda = Complex64::new(0.1, 0.05);
    let sys = assemble_system(&prof, nu_of(0, 1), lambda).unwrap();
    let x_star = x_star_rule(prof.b, nu_of(0, 1));
    let (lo, hi) = (x_star / 2.0, x_star);
    let int = interior_basis(&sys, &[lo, hi], 1e-12).unwrap();
    let r_inf = (6.0 / prof.b).max(x_star + 10.0);
    let (ext, _) = exterior_basis(&sys, r_inf, &[hi, lo], 1e-12).unwrap();
    let det_hi = det4(&[int[1][0], int[1][1], ext[0][0], ext[0][1]]);
    let det_lo = det4(&[int[0][0], int[0][1], ext[1][0], ext[1][1]]);
    let drift = (det_hi - det_lo).norm() / det_hi.norm();
    assert!(drift <= 1e-7, "determinant drift {drift:e}");
}

#[test]
fn exterior_seed_independence() {
    // Inward integration attracts onto the admissible subspace: pushing the
    // seed radius out by 5/b leaves the frame directions at x* unchanged up to
    // the residual of the seed's comparison equation accumulated over the
    // extra path (measured ~5e-6 rad; inadmissible contamination itself decays
    // inward and contributes nothing at this scale).
    let prof = profile(1, 0.35);
    let lambda = Complex64::new(0.08, -0.1);
    let sys = assemble_system(&prof, nu_of(0, 1), lambda).unwrap();
    let x_star = x_star_rule(prof.b, nu_of(0, 1));
    let r_inf = (6.0 / prof.b).max(x_star + 10.0);
    let (near, _) = exterior_basis(&sys, r_inf, &[x_star], 1e-12).unwrap();
    let (far, _) = exterior_basis(&sys, r_inf + 5.0 / prof.b, &[x_star], 1e-12).unwrap();
    for j in 0..2 {
        let ang = direction_angle(&near[0][j], &far[0][j]);
        assert!(ang <= 1e-5, "column {j} direction moved {ang:e} rad");
    }
}

#[test]
fn flat_limit_continuity() {
    // Normalized exterior frame directions at a fixed radius approach the
    // b = 0 directions at the b^{1/6} rate.
    let lambda = Complex64::new(0.1, 0.0);
    let observe = 10.0;
    let fix = |f: &SolutionFrame| -> [Complex64; 4] {
        let mut v = f.vec4();
        let n = f.norm();
        let ph = Complex64::from_polar(1.0, -v[0].arg());
        v.iter_mut().for_each(|z| *z = *z * ph / n);
        v
    };
    let prof0 = flat(1);
    let sys0 = assemble_system(&prof0, nu_of(0, 1), lambda).unwrap();
    let (ext0, _) = exterior_basis(&sys0, 20.0, &[observe], 1e-12).unwrap();
    let base = fix(&ext0[0][0]);
    let mut diffs = Vec::new();
    for &b in &[0.35, 0.3, 0.25] {
        let prof = profile(1, b);
        let sys = assemble_system(&prof, nu_of(0, 1), lambda).unwrap();
        let r_inf = (6.0 / b).max(x_star_rule(b, nu_of(0, 1)) + 10.0);
        let (ext, _) = exterior_basis(&sys, r_inf, &[observe], 1e-12).unwrap();
        let v = fix(&ext[0][0]);
        let d: f64 =
            v.iter().zip(&base).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        diffs.push((b, d));
    }
    for w in diffs.windows(2) {
        assert!(w[1].1 <= w[0].1 * 1.05, "not shrinking toward b = 0: {diffs:?}");
    }
    let ratios: Vec<f64> = diffs.iter().map(|&(b, d)| d / b.powf(1.0 / 6.0)).collect();
    let (rmin, rmax) = (
        ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        ratios.iter().cloned().fold(0.0f64, f64::max),
    );
    assert!(rmax / rmin <= 3.0, "b^(1/6) law violated: {ratios:?}");
}

#[test]
fn high_class_span_mismatch() {
    // For nu >= 8 the interior span (Bessel-type growth) and exterior span
    // (WKB decay) stay separated across the lambda window.
    let prof = profile(1, 0.35);
    let nu = nu_of(11, 1);
    assert!(nu >= NU_BIG);
    let x_star = x_star_rule(prof.b, nu);
    let r_inf = (6.0 / prof.b).max(x_star + 10.0);
    for lambda in [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.3, 0.1),
        Complex64::new(-0.3, -0.2),
    ] {
        let sys = assemble_system(&prof, nu, lambda).unwrap();
        let int = interior_basis(&sys, &[x_star], 1e-11).unwrap();
        let (ext, diag) = exterior_basis(&sys, r_inf, &[x_star], 1e-11).unwrap();
        assert!(diag.high_class);
        let angle = span_angle(&int[0], &ext[0]);
        assert!(angle >= 0.3, "lambda {lambda}: angle {angle}");
    }
}

#[test]
fn rejects_bad_input() {
    let prof = profile(1, 0.35);
    // nu below the even class.
    assert!(assemble_system(&prof, -1.0, Complex64::new(0.0, 0.0)).is_err());
    // lambda outside the window.
    assert!(assemble_system(&prof, 0.5, Complex64::new(0.6, 0.0)).is_err());
    assert!(assemble_system(&prof, 0.5, Complex64::new(0.0, 3.0 * prof.b)).is_err());
    let sys = assemble_system(&prof, 0.5, Complex64::new(0.0, 0.0)).unwrap();
    assert!(interior_basis(&sys, &[4.0, 2.0], 1e-12).is_err());
    assert!(exterior_basis(&sys, 17.0, &[2.0, 4.0], 1e-12).is_err());
    assert!(exterior_basis(&sys, 3.0, &[4.0], 1e-12).is_err());
}
