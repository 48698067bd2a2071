mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use sechprolate::sech_operator::{
    adjoint_legendre, apply_forward, nystrom_eigensystem, real_line_grid, rho_rayleigh, sech,
    OperatorParams, SampledFunction,
};
use sechprolate::special_functions::{gauss_legendre, LegendreSeries};
use sechprolate::svd_assembly::{sech_spectrum, Route, SpectrumOptions};

#[test]
fn spectrum_matches_high_precision_values() {
    for (c, oracle) in [(0.1, common::RHO_C_0_1), (0.25, common::RHO_C_0_25)] {
        let spec = sech_spectrum(c, 13, &SpectrumOptions::default()).unwrap();
        let rho0 = spec[0].rho;
        for p in spec.iter().filter(|p| p.trusted) {
            let rel = (p.rho / oracle[p.m] - 1.0).abs();
            let tol = match p.route {
                Route::Nystrom => (1e2 * f64::EPSILON * rho0 / p.rho).max(1e-12),
                Route::Galerkin => 1e-6,
            };
            assert!(rel < tol, "c={c} m={} {:?} rel={rel:e}", p.m, p.route);
        }
        assert!(spec.iter().filter(|p| p.trusted).count() >= 11);
    }
}

#[test]
fn untrusted_tail_is_flagged_not_dropped() {
    let spec = sech_spectrum(0.1, 13, &SpectrumOptions::default()).unwrap();
    assert_eq!(spec.len(), 14);
    assert!(!spec[13].trusted);
}

#[test]
fn rayleigh_of_constant_matches_quadrature_oracle() {
    // ĝ(x) = √2 sin(x)/x for g = 1/√2.
    let g = LegendreSeries::new(vec![1.0]);
    let v = rho_rayleigh(1.0, &g).unwrap();
    let f = |x: f64| {
        let s = if x == 0.0 { 1.0 } else { x.sin() / x };
        sech(x) * 2.0 * s * s
    };
    let oracle = 2.0 * common::integrate_split(f, 0.0, 45.0, 1e-13);
    assert!((v / oracle - 1.0).abs() < 1e-10, "{v} {oracle}");
}

#[test]
fn leading_eigenvalue_converged_in_grid_size() {
    let a = nystrom_eigensystem(1.0, 200, 0).unwrap().rho[0];
    let b = nystrom_eigensystem(1.0, 400, 0).unwrap().rho[0];
    assert!((a / b - 1.0).abs() < 1e-10);
}

#[test]
fn adjointness_on_random_pairs() {
    let params = OperatorParams::new(1.3, 0.8).unwrap();
    let b = params.b;
    let fs: [fn(f64) -> f64; 5] = [
        |x| sech(1.3 * x),
        |x| x * sech(1.3 * x),
        |x| (0.7 * x).cos() * sech(1.3 * x) * sech(1.3 * x),
        |x| (-x * x).exp(),
        |x| x * x * (-0.5 * x * x).exp(),
    ];
    let hs = [
        vec![0.3, -0.2, 0.5],
        vec![0.0, 1.0],
        vec![0.1, 0.4, 0.0, -0.7, 0.2],
        vec![1.0, 0.0, 0.0, 0.3],
        vec![-0.2, 0.1, 0.6, 0.0, 0.0, 0.4],
    ];
    let line = real_line_grid(45.0 / b, 0.25, 16).unwrap();
    let gl = gauss_legendre(64, (-1.0, 1.0)).unwrap();
    for (f, h) in fs.iter().zip(&hs) {
        let h = LegendreSeries::new(h.clone());
        let fs = SampledFunction::from_fn(line.clone(), |x| Complex64::new(f(x), 0.0));
        // ⟨F f, h⟩ over (−1, 1); F f is entire in y, so 64 Gauss nodes suffice.
        let ff = apply_forward(params, &fs, &gl.nodes).unwrap();
        let lhs: Complex64 = ff
            .iter()
            .zip(gl.nodes.iter().zip(&gl.weights))
            .map(|(v, (&y, &w))| v * h.eval(y) * w)
            .sum();
        let (lhs_re, lhs_im) = (lhs.re, lhs.im);
        // ⟨f, F* h⟩ in L²(cosh(b·)): F* h is conjugated.
        let rhs = |part: fn(Complex64) -> f64| {
            common::integrate_split(
                |x| part(f(x) * (b * x).cosh() * adjoint_legendre(params, &h, x).conj()),
                -40.0,
                40.0,
                1e-12,
            )
        };
        let (rhs_re, rhs_im) = (rhs(|z| z.re), rhs(|z| z.im));
        let scale = lhs_re.hypot(lhs_im).max(1e-3);
        assert!((lhs_re - rhs_re).abs() < 1e-8 * scale, "{lhs_re} {rhs_re}");
        assert!((lhs_im - rhs_im).abs() < 1e-8 * scale, "{lhs_im} {rhs_im}");
    }
}

#[test]
fn factorization_against_quadrature_oracle() {
    // c F F* h versus Q_{c/b} h at a few points, each side by adaptive quadrature.
    let params = OperatorParams::new(2.0, 0.5).unwrap();
    let (b, c) = (params.b, params.c);
    let ratio = c / b;
    let h = |t: f64| (1.3 * t).sin() + 0.4 * (2.0 * t).cos() - 0.1;
    let q = gauss_legendre(60, (-1.0, 1.0)).unwrap();
    let series =
        LegendreSeries::project(&q, &q.nodes.iter().map(|&t| h(t)).collect::<Vec<_>>(), 40);
    for y in [-0.9, -0.3, 0.0, 0.45, 0.8] {
        let lhs = c * common::integrate_split(
            |x| (Complex64::from_polar(1.0, c * y * x) * adjoint_legendre(params, &series, x)).re,
            -30.0,
            30.0,
            1e-13,
        );
        let rhs = common::integrate(
            |t| PI * ratio * sech(PI * ratio * (y - t) / 2.0) * h(t),
            -1.0,
            1.0,
            1e-13,
        );
        assert!(
            (lhs - rhs).abs() < 1e-8 * rhs.abs().max(1.0),
            "y={y} {lhs} {rhs}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eigenvalues_nondecreasing_in_c(c1 in 0.25f64..4.0, step in 0.05f64..2.0) {
        let c2 = c1 + step;
        let a = sech_spectrum(c1, 10, &SpectrumOptions::default()).unwrap();
        let b = sech_spectrum(c2, 10, &SpectrumOptions::default()).unwrap();
        for m in 0..=10 {
            prop_assert!(a[m].rho <= b[m].rho * (1.0 + 1e-10), "m={} {} {}", m, a[m].rho, b[m].rho);
        }
    }

    #[test]
    fn trace_identity(c in 0.05f64..6.0) {
        let nys = nystrom_eigensystem(c, 200, 0).unwrap();
        prop_assert!((nys.trace() / (2.0 * PI * c) - 1.0).abs() < 1e-10);
    }
}
