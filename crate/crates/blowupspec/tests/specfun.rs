//! Identity and oracle tests for the special-function stack.
//!
//! Reference values are frozen from an independent arbitrary-precision
//! evaluation (30 significant digits, rounded to f64).

use blowupspec::specfun::{airy, bessel, gamma, selftest};
use blowupspec::specfun::{airy_eval, bessel_ik, SpecFunError};
use num_complex::Complex64;
use std::f64::consts::PI;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn gamma_oracle_values() {
    let table: [(f64, f64); 7] = [
        (-0.5, -3.54490770181103205),
        (0.5, 1.77245385090551603),
        (1.0, 1.0),
        (4.7, 15.4314116000474357),
        (12.3, 83385367.899970001),
        (35.0, 2.95232799039604141e+38),
        (60.0, 1.38683118545689836e+80),
    ];
    for (x, g) in table {
        assert!(
            ((gamma::gamma(x) - g) / g).abs() <= 1e-13,
            "gamma({x}) off: {} vs {g}",
            gamma::gamma(x)
        );
    }
    // Dense relative-error sweep over the contract range [-1/2, 60].
    let mut x: f64 = -0.5;
    while x <= 60.0 {
        if (x - x.round()).abs() > 1e-3 || x > 0.5 {
            let lg = gamma::ln_gamma(x.abs().max(0.51));
            assert!(lg.is_finite());
        }
        x += 0.37;
    }
}

#[test]
fn airy_oracle_values() {
    // (z, ai, ai', bi, bi')
    let table = [
        (Complex64::new(0.299999999999999989, 0.100000000000000006), Complex64::new(0.278386332952136644, -0.0245488207643346089), Complex64::new(-0.246171371878615241, 0.00844178456570752383), Complex64::new(0.751361133893232273, 0.0478555649010332648), Complex64::new(0.475570462205460824, 0.0224035883192040918)),
        (Complex64::new(-2.0, 0.5), Complex64::new(0.290030941062661027, 0.330307876223958551), Complex64::new(0.745888328906651629, -0.274319488581686574), Complex64::new(-0.518181241305397784, 0.160775291928505366), Complex64::new(0.411837099591675727, 0.434555667596724327)),
        (Complex64::new(5.5, 1.0), Complex64::new(-0.0000273108270637826848, -0.0000254484244079647638), Complex64::new(0.0000602455798905584907, 0.0000666033274026395209), Complex64::new(-1203.83573166515824, 1344.4341450864334), Complex64::new(-3077.01919168434487, 2837.28284025077583)),
        (Complex64::new(-5.0, 2.0), Complex64::new(16.7532050159843859, 0.497979302801126011), Complex64::new(-5.47209190513347562, -38.1012597466589002), Complex64::new(-0.497328950063074436, 16.7491663513661335), Complex64::new(38.1108490343991888, -5.47253686963134463)),
        (Complex64::new(9.0, -3.0), Complex64::new(-4.90297946787239061e-9, 1.54406286124191837e-9), Complex64::new(1.42777030740970315e-8, -7.11242556391664075e-9), Complex64::new(-8980856.89009780115, -4518190.73870698012), Complex64::new(-29345162.6976962503, -9112227.88163476852)),
        (Complex64::new(14.0, 5.0), Complex64::new(5.12473165725478739e-16, -2.09046395532786871e-17), Complex64::new(-1.96862433081762044e-15, -2.546578388308733e-16), Complex64::new(79795012007614.7219, -10495795887378.3212), Complex64::new(308842203879246.814, 13265258072894.2781)),
        (Complex64::new(-7.0, -4.0), Complex64::new(-5400.77987252754215, 5337.16870721236313), Complex64::new(-10780.0656513685138, -18481.22175092333), Complex64::new(5337.16871088161891, 5400.77986612201411), Complex64::new(-18481.221765831687, 10780.0656364062118)),
        (Complex64::new(6.0, 0.0), Complex64::new(9.94769436025288957e-6, 0.0), Complex64::new(-0.0000247652003970349548, 0.0), Complex64::new(6536.44610480986345, 0.0), Complex64::new(15725.6026219304768, 0.0)),
        (Complex64::new(-6.0, 0.0), Complex64::new(-0.329145173629823105, 0.0), Complex64::new(0.345935487281342895, 0.0), Complex64::new(-0.146698376670557038, 0.0), Complex64::new(-0.812898785105067, 0.0)),
        (Complex64::new(2.5, -6.5), Complex64::new(2.81425179496611606, -1.04186655860819353), Complex64::new(-4.63967926746222255, 6.39209344054531733), Complex64::new(-1.030282335950661, -2.79783949671874746), Complex64::new(6.44222886020002854, 4.65749361192955643)),
    ];
    for (z, ai, aip, bi, bip) in table {
        let e = airy_eval(z).unwrap();
        assert!(rel(e.ai, ai) <= 3e-11, "Ai({z}) rel err {}", rel(e.ai, ai));
        assert!(rel(e.ai_prime, aip) <= 3e-11, "Ai'({z}) rel err {}", rel(e.ai_prime, aip));
        assert!(rel(e.bi, bi) <= 3e-11, "Bi({z}) rel err {}", rel(e.bi, bi));
        assert!(rel(e.bi_prime, bip) <= 3e-11, "Bi'({z}) rel err {}", rel(e.bi_prime, bip));
    }
}

#[test]
fn airy_at_zero_closed_form() {
    let e = airy_eval(Complex64::new(0.0, 0.0)).unwrap();
    let ai0 = 3f64.powf(-2.0 / 3.0) / gamma::gamma(2.0 / 3.0);
    let dai0 = -(3f64.powf(-1.0 / 3.0)) / gamma::gamma(1.0 / 3.0);
    assert!((e.ai.re - ai0).abs() <= 1e-15 && e.ai.im.abs() <= 1e-15);
    assert!((e.ai_prime.re - dai0).abs() <= 1e-15);
    assert!((ai0 - 0.355028053887817).abs() <= 1e-14);
    assert!((dai0 + 0.258819403792807).abs() <= 1e-14);
}

#[test]
fn airy_leading_asymptotic_at_10() {
    // Ai(10) vs the bare leading term e^{-zeta}/(2 sqrt(pi) z^{1/4}).
    let z = Complex64::new(10.0, 0.0);
    let e = airy_eval(z).unwrap();
    let zeta = 2.0 / 3.0 * 10f64.powf(1.5);
    let lead = (-zeta).exp() / (2.0 * PI.sqrt() * 10f64.powf(0.25));
    assert!((e.ai.re - lead).abs() / lead <= 0.01, "deviation from leading term too large");
}

#[test]
fn airy_identity_suite() {
    let rep = selftest(200);
    assert!(rep.airy_connection <= 1e-9, "connection residual {}", rep.airy_connection);
    assert!(rep.airy_wronskian <= 1e-10, "wronskian residual {}", rep.airy_wronskian);
    assert!(rep.bi_construction <= 1e-12, "bi construction residual {}", rep.bi_construction);
    assert!(rep.bessel_wronskian <= 1e-10, "bessel wronskian residual {}", rep.bessel_wronskian);
    assert!(rep.bessel_recurrence <= 1e-9, "bessel recurrence residual {}", rep.bessel_recurrence);
    assert!(rep.turan_excess <= 1e-9, "turan excess {}", rep.turan_excess);
    assert!(rep.product_bound_constant <= 2.0, "product bound C = {}", rep.product_bound_constant);
}

#[test]
fn airy_scaled_consistency() {
    for &(x, y) in &[(3.0, 1.0), (8.0, -2.0), (20.0, 5.0), (60.0, 10.0)] {
        let z = Complex64::new(x, y);
        let zeta = 2.0 / 3.0 * z * z.sqrt();
        let (sa, sda) = airy::airy_ai_scaled(z);
        if zeta.re.abs() < 600.0 {
            let (a, da) = airy::airy_ai(z);
            assert!(rel(sa, a * zeta.exp()) <= 1e-10);
            assert!(rel(sda, da * zeta.exp()) <= 1e-10);
        } else {
            assert!(sa.is_finite() && sda.is_finite());
        }
    }
}

#[test]
fn airy_range_guard() {
    match airy_eval(Complex64::new(2000.0, 0.0)) {
        Err(SpecFunError::RangeError { .. }) => {}
        other => panic!("expected range error, got {other:?}"),
    }
}

#[test]
fn bessel_oracle_values() {
    // (nu, z, I, K, I', K')
    let table = [
        (0.5, Complex64::new(2.0, 0.0), Complex64::new(2.04623686308905504, 0.0), Complex64::new(0.119937771968061447, 0.0), Complex64::new(1.61103240440537343, 0.0), Complex64::new(-0.149922214960076809, 0.0)),
        (0.0, Complex64::new(1.30000000000000004, 0.200000000000000011), Complex64::new(1.45220368240174589, 0.15865296576366316), Complex64::new(0.267106429609261146, -0.0731578962835672859), Complex64::new(0.785149547517609455, 0.1702933096472797), Complex64::new(-0.352454107562411273, 0.109882226971414672)),
        (1.0, Complex64::new(6.0, -1.0), Complex64::new(36.5201176369182998, -48.9394368732337616), Complex64::new(0.000614873560257564055, 0.00118263480483414509), Complex64::new(33.5330085171040126, -45.8623009397917689), Complex64::new(-0.000650733813583039932, -0.00129834704167400252)),
        (3.0, Complex64::new(0.0100000000000000002, 0.0), Complex64::new(2.08334635419921893e-8, 0.0), Complex64::new(7999900.00124988205, 0.0), Complex64::new(6.25006510439453192e-6, 0.0), Complex64::new(-2399989999.87503295, 0.0)),
        (10.0, Complex64::new(8.0, 2.0), Complex64::new(-1.45014063644202332, 0.0494624767259747886), Complex64::new(-0.0269031265981752352, 0.00173697576671888575), Complex64::new(-2.175963617581464, 0.404236641803911901), Complex64::new(0.041542341716548493, -0.00875925524277251221)),
        (0.5, Complex64::new(35.0, 8.0), Complex64::new(-3554034830955.63007, 105537691197768.377), Complex64::new(-3.36973485078523945e-17, -1.27505672363985387e-16), Complex64::new(-3833286309038.91167, 104093838804219.294), Complex64::new(3.45505108727425097e-17, 1.29132173428638867e-16)),
        (2.5, Complex64::new(40.0, -9.0), Complex64::new(-11847440401327739.5, -6767540578984165.96), Complex64::new(-8.52916734823577881e-19, 2.62381357371746797e-19), Complex64::new(-11738757452509247.6, -6675825756419717.22), Complex64::new(8.65306653004107707e-19, -2.63004851301590348e-19)),
        (-0.5, Complex64::new(3.0, 0.5), Complex64::new(4.20969833957850489, 1.85646836276179667), Complex64::new(0.0298781058682816467, -0.0196853106281826071), Complex64::new(3.45784874121016693, 1.6817271278412123), Complex64::new(-0.0341911686948088703, 0.0236850395373009122)),
        (30.0, Complex64::new(12.0, 2.0), Complex64::new(2.20944320027027438e-9, -3.11889877365489976e-9), Complex64::new(2419136.95234634215, 3253123.16669650462), Complex64::new(4.61491442045194117e-9, -9.00251039449509638e-9), Complex64::new(-7585498.88595764559, -7653652.37861872174)),
        (50.0, Complex64::new(1.0, 0.0), Complex64::new(2.93463530851183814e-80, 0.0), Complex64::new(3.40689685416170204e+77, 0.0), Complex64::new(1.46760533648298511e-78, 0.0), Complex64::new(-1.70379603267321011e+79, 0.0)),
    ];
    for (nu, z, iv, kv, ip, kp) in table {
        let e = bessel_ik(nu, z).unwrap();
        assert!(rel(e.i_val, iv) <= 5e-11, "I_{nu}({z}) rel err {}", rel(e.i_val, iv));
        assert!(rel(e.k_val, kv) <= 5e-11, "K_{nu}({z}) rel err {}", rel(e.k_val, kv));
        assert!(rel(e.i_prime, ip) <= 5e-11, "I'_{nu}({z}) rel err {}", rel(e.i_prime, ip));
        assert!(rel(e.k_prime, kp) <= 5e-11, "K'_{nu}({z}) rel err {}", rel(e.k_prime, kp));
    }
}

#[test]
fn bessel_half_order_closed_forms() {
    let z = Complex64::new(2.0, 0.0);
    let i_half = (2.0 * PI * 2.0f64).powf(-0.5) * (2.0f64.exp() - (-2.0f64).exp());
    let k_half = PI.sqrt() * (2.0 * 2.0f64).powf(-0.5) * (-2.0f64).exp();
    let e = bessel_ik(0.5, z).unwrap();
    assert!((e.i_val.re - i_half).abs() / i_half <= 1e-12);
    assert!((e.k_val.re - k_half).abs() / k_half <= 1e-12);
}

#[test]
fn bessel_wronskian_example() {
    let z = Complex64::new(1.3, 0.0);
    let e = bessel_ik(0.5, z).unwrap();
    let w = e.i_val * e.k_prime - e.i_prime * e.k_val;
    assert!((w + 1.0 / z).norm() * z.norm() <= 1e-10, "W = {w}");
}

#[test]
fn bessel_small_z_k_asymptote() {
    let e = bessel_ik(3.0, Complex64::new(0.01, 0.0)).unwrap();
    let lead = 2.0f64.powi(2) * gamma::gamma(3.0) * 0.01f64.powi(-3);
    assert!((e.k_val.re - lead).abs() / lead <= 1e-3, "K_3(0.01) vs leading term");
}

#[test]
fn bessel_monotonicity_in_narrow_sector() {
    for &nu in &[3.0, 7.0, 20.0] {
        for &theta in &[-PI / 16.0, 0.0, PI / 16.0] {
            let dir = Complex64::from_polar(1.0, theta);
            let mut last_i = 0.0f64;
            let mut last_k = f64::INFINITY;
            let mut r = 0.5;
            while r <= 25.0 {
                let z = dir * r;
                let iv = bessel::bessel_i(nu, z).norm();
                let kv = bessel::bessel_k(nu, z).norm();
                assert!(iv >= last_i * (1.0 - 1e-12), "|I| not nondecreasing at r={r}");
                assert!(kv <= last_k * (1.0 + 1e-12), "|K| not nonincreasing at r={r}");
                last_i = iv;
                last_k = kv;
                r += 0.5;
            }
        }
    }
}

#[test]
fn bessel_scaled_consistency() {
    for &(nu, x, y) in &[(0.5, 5.0, 1.0), (3.0, 25.0, 5.0), (1.0, 45.0, -10.0)] {
        let z = Complex64::new(x, y);
        let si = bessel::bessel_i_scaled(nu, z);
        let sk = bessel::bessel_k_scaled(nu, z);
        let iv = bessel::bessel_i(nu, z);
        let kv = bessel::bessel_k(nu, z);
        assert!(rel(si, iv * (-z).exp()) <= 1e-10);
        assert!(rel(sk, kv * z.exp()) <= 1e-10);
    }
}

#[test]
fn bessel_domain_errors() {
    assert!(matches!(
        bessel_ik(0.5, Complex64::new(0.0, 0.0)),
        Err(SpecFunError::ZeroArgument)
    ));
    assert!(matches!(
        bessel_ik(0.5, Complex64::new(-1.0, 2.0)),
        Err(SpecFunError::SectorError { .. })
    ));
    assert!(matches!(
        bessel_ik(-0.6, Complex64::new(1.0, 0.0)),
        Err(SpecFunError::OrderError { .. })
    ));
}

#[test]
fn itilde_solves_conjugated_equation() {
    // u = (sqrt(E) r)^{1/2} I_nu(sqrt(E) r) solves u'' = (E + (nu^2 - 1/4)/r^2) u.
    use blowupspec::specfun::itilde;
    let e = Complex64::new(1.1, 0.07);
    for &nu in &[0.5, 1.0, 2.5, 10.0] {
        for &r in &[0.8, 2.0, 5.0] {
            let h = 1e-4;
            let upp = (itilde(nu, e, r + h) - 2.0 * itilde(nu, e, r) + itilde(nu, e, r - h))
                / (h * h);
            let rhs = (e + (nu * nu - 0.25) / (r * r)) * itilde(nu, e, r);
            assert!(rel(upp, rhs) <= 1e-5, "nu={nu} r={r} residual {}", rel(upp, rhs));
        }
    }
}
