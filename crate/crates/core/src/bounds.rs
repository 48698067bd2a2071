//! Closed-form constants and bounds on the eigenvalues `ρ_m^c` of `Q_c`, on
//! the eigenvalues `χ_m` of the commuting ODE and on `‖g_m^c‖_∞`.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::commuting_ode::{
    default_basis_size, galerkin_eigensystem, galerkin_ode, normalizing_integral,
};
use crate::error::{Error, Result};
use crate::sech_operator::rho_rayleigh;
use crate::special_functions::elliptic_k_from_complement;
use crate::svd_assembly::{sech_spectrum, SpectrumOptions};

/// Crossing point of the two branches of `β`, as printed.
pub const C0: f64 = 0.12059;

fn beta_small(c: f64) -> f64 {
    (7.0 * E * E * PI / (2.0 * c)).ln()
}

fn beta_large(c: f64) -> f64 {
    PI / (4.0 * c)
}

/// Root of `log(7e²π/(2c)) = π/(4c)` by bisection.
pub fn c0_root() -> f64 {
    let f = |c: f64| beta_small(c) - beta_large(c);
    let (mut lo, mut hi) = (0.01, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Decay exponent in `ρ_m^c ≥ θ(c) e^{−2β(c)m}`.
pub fn beta(c: f64) -> f64 {
    if c <= C0 {
        beta_small(c)
    } else {
        beta_large(c)
    }
}

pub fn theta(c: f64) -> f64 {
    if c <= C0 {
        2.0 * (2.0 * c).sin().powi(2) / (E * E * c)
    } else {
        PI * (-PI / (2.0 * c)).exp()
    }
}

pub fn theta_tilde(c: f64) -> f64 {
    if c <= C0 {
        2.0 * (2.0 * C0).sin().powi(2) * c / (E * C0).powi(2)
    } else {
        theta(c)
    }
}

/// `2 sin(2c)²/(e²c) · exp(−2 log(7e²π/(2c)) m)`, valid for `c ≤ π/4`.
pub fn lower_bound_small_c(c: f64, m: usize) -> Result<f64> {
    if !(c > 0.0 && c <= PI / 4.0) {
        return Err(Error::Domain(format!(
            "small-c lower bound needs 0 < c <= π/4, got {c}"
        )));
    }
    Ok(2.0 * (2.0 * c).sin().powi(2) / (E * E * c) * (-2.0 * beta_small(c) * m as f64).exp())
}

/// `π exp(−π(m+1)/(2c))`.
pub fn lower_bound_all_c(c: f64, m: usize) -> f64 {
    PI * (-PI * (m as f64 + 1.0) / (2.0 * c)).exp()
}

/// `θ̃(c) e^{−2β(c)m}`.
pub fn lower_bound_combined(c: f64, m: usize) -> f64 {
    theta_tilde(c) * (-2.0 * beta(c) * m as f64).exp()
}

/// `2√π c^{2m+1} / (√(m+3/4)(1−c²))`, for `0 < c < 1`.
pub fn upper_bound(c: f64, m: usize) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!(
            "upper bound needs 0 < c < 1, got {c}"
        )));
    }
    let mf = m as f64;
    Ok(2.0 * PI.sqrt() * c.powf(2.0 * mf + 1.0) / ((mf + 0.75).sqrt() * (1.0 - c * c)))
}

/// `π K(sech πc) / K(tanh πc)`.
pub fn widom_slope(c: f64) -> f64 {
    let x = PI * c;
    let sech = 1.0 / x.cosh();
    let k_sech = elliptic_k_from_complement(x.tanh()).unwrap_or(f64::INFINITY);
    let k_tanh = if sech > 0.0 {
        elliptic_k_from_complement(sech).unwrap_or(f64::INFINITY)
    } else {
        // K(k) ≈ ln(4/k') for k' → 0, with ln cosh x ≈ x − ln 2.
        4f64.ln() + x - 2f64.ln()
    };
    PI * k_sech / k_tanh
}

/// `(√2 e^{2c}/sinh 4c, π√2 e^{2c}/sinh 4c)`.
pub fn u_bounds(c: f64) -> (f64, f64) {
    let lo = 2f64.sqrt() * (2.0 * c).exp() / (4.0 * c).sinh();
    (lo, PI * lo)
}

/// `R(c)` with the exact `U(c)`.
pub fn r_of_c(c: f64) -> Result<f64> {
    let u = normalizing_integral(c)?;
    let a = u * c / PI;
    let inner =
        ((4.0 * c).cosh() * (1.0 + c / 3.0 / (2.0 * c).tanh()) - 1.0) + 2.0 * c * (4.0 * c).sinh();
    Ok(2.0 / (PI * PI) + a * a * inner)
}

pub fn h_of_c(c: f64) -> f64 {
    let inner = 2.0 / (PI * PI) + 8.0 / 3.0 * (1.0 + 2.0 * c) * (c * c + 9.0 * c / 8.0 + 0.5);
    PI * (1.0 + 4.0 * c * c / 3.0).sqrt()
        * (1.0 + 2.0 * 2f64.sqrt() * (2.0 + 1.0 / 3f64.sqrt()) * inner)
}

/// `H(c) √(m + 1/2)`.
pub fn supnorm_bound(c: f64, m: usize) -> f64 {
    h_of_c(c) * (m as f64 + 0.5).sqrt()
}

/// `((π/U)²(m(m+1)+½−R) − c², (π/U)²(m(m+1)+½) − c²)` for the ODE with
/// parameter `c`.
pub fn chi_sandwich(c: f64, m: usize) -> Result<(f64, f64)> {
    let u = normalizing_integral(c)?;
    let r = r_of_c(c)?;
    let s = (PI / u).powi(2);
    let mm = (m * (m + 1)) as f64 + 0.5;
    Ok((s * (mm - r) - c * c, s * mm - c * c))
}

/// Least-squares slope of `−log ρ_m` against `m` over `ms`.
pub fn fitted_decay_slope(ms: &[usize], rho: &[f64]) -> f64 {
    let n = ms.len() as f64;
    let xs: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
    let ys: Vec<f64> = ms.iter().map(|&m| -rho[m].ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `ρ_m^c`, `m ≤ m_max`, as Rayleigh quotients of the eigenfunctions of the
/// commuting ODE.
pub fn ode_route_rho(c: f64, m_max: usize) -> Result<Vec<f64>> {
    let ode = galerkin_eigensystem(c, default_basis_size(m_max), m_max)?;
    (0..=m_max)
        .map(|m| rho_rayleigh(c, &ode.eigenfunction_series(m)?))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsRow {
    pub m: usize,
    pub lower_small_c: Option<f64>,
    pub lower_all_c: f64,
    pub lower_combined: f64,
    pub rho_computed: f64,
    pub rho_trusted: bool,
    pub upper: Option<f64>,
    pub chi_lo: f64,
    pub chi_hi: f64,
    pub chi_computed: f64,
    pub supnorm_bound: f64,
    pub supnorm_observed: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub c: f64,
    pub rows: Vec<BoundsRow>,
    pub widom_slope: f64,
    /// Fit over `m = 6..=12` when available.
    pub slope_fit: Option<f64>,
    /// `2β(c)`.
    pub lower_exponent: f64,
    /// `2 log(1/c)` for `c < 1`.
    pub upper_exponent: Option<f64>,
}

/// Evaluates every bound at `c` for `m ≤ m_max` next to the computed
/// spectra. `χ_m` comes from the ODE with parameter `c`; `ρ_m` and `g_m`
/// from `Q_c`.
pub fn bounds_report(c: f64, m_max: usize) -> Result<BoundsReport> {
    let spec = sech_spectrum(c, m_max, &SpectrumOptions::default())?;
    let ode = galerkin_ode(c, 2 * (m_max + 1) + 40, m_max)?;
    let sup_grid: Vec<f64> = (0..2000).map(|i| -1.0 + 2.0 * i as f64 / 1999.0).collect();
    let mut rows = Vec::with_capacity(m_max + 1);
    for (m, pair) in spec.iter().enumerate() {
        let (chi_lo, chi_hi) = chi_sandwich(c, m)?;
        let supnorm_observed = sup_grid
            .iter()
            .map(|&x| pair.g.eval(x).abs())
            .fold(0.0, f64::max);
        rows.push(BoundsRow {
            m,
            lower_small_c: lower_bound_small_c(c, m).ok(),
            lower_all_c: lower_bound_all_c(c, m),
            lower_combined: lower_bound_combined(c, m),
            rho_computed: pair.rho,
            rho_trusted: pair.trusted,
            upper: upper_bound(c, m).ok(),
            chi_lo,
            chi_hi,
            chi_computed: ode.chi[m],
            supnorm_bound: supnorm_bound(c, m),
            supnorm_observed,
        });
    }
    let slope_fit = (m_max >= 12).then(|| {
        let rho: Vec<f64> = rows.iter().map(|r| r.rho_computed).collect();
        fitted_decay_slope(&(6..=12).collect::<Vec<_>>(), &rho)
    });
    Ok(BoundsReport {
        c,
        rows,
        widom_slope: widom_slope(c),
        slope_fit,
        lower_exponent: 2.0 * beta(c),
        upper_exponent: (c < 1.0).then(|| 2.0 * (1.0 / c).ln()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn paper_constants() {
        assert!((beta(1.0) - PI / 4.0).abs() < 1e-15);
        assert!((theta(1.0) - PI * (-PI / 2.0).exp()).abs() < 1e-15);
        assert!((beta(C0 - 1e-9) - beta(C0 + 1e-9)).abs() < 1e-3);
        assert!((c0_root() - C0).abs() < 5e-5, "{}", c0_root());
    }

    #[test]
    fn lower_bound_formulas() {
        assert!((lower_bound_all_c(PI / 2.0, 0) - PI / E).abs() < 1e-15);
        let c = 0.3;
        let v = lower_bound_small_c(c, 0).unwrap();
        assert!((v - 2.0 * (2.0 * c).sin().powi(2) / (E * E * c)).abs() < 1e-15);
        assert!(matches!(lower_bound_small_c(1.0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn upper_bound_formula_and_domain() {
        let v = upper_bound(0.5, 0).unwrap();
        let expect = 2.0 * PI.sqrt() * 0.5 / (0.75f64.sqrt() * 0.75);
        assert!((v - expect).abs() < 1e-15);
        assert!(matches!(upper_bound(1.0, 0), Err(Error::Domain(_))));
        for m in 0..20 {
            assert!(upper_bound(0.6, m + 1).unwrap() < upper_bound(0.6, m).unwrap());
        }
    }

    #[test]
    fn widom_slope_shape() {
        assert!(widom_slope(8.0) < widom_slope(4.0));
        assert!(widom_slope(4.0) < widom_slope(2.0));
        for i in 1..100 {
            assert!(widom_slope(0.05 * i as f64) > 0.0);
        }
        assert!(widom_slope(300.0) > 0.0);
    }

    #[test]
    fn ode_route_matches_nystrom() {
        let rho = ode_route_rho(1.0, 6).unwrap();
        let nys = crate::sech_operator::nystrom_eigensystem(1.0, 200, 6).unwrap();
        for (m, r) in rho.iter().enumerate() {
            assert!((r / nys.rho[m] - 1.0).abs() < 1e-8, "m={m}");
        }
    }

    #[test]
    fn u_inside_its_bounds() {
        for &c in &[0.1, 1.0, 5.0] {
            let u = normalizing_integral(c).unwrap();
            let (lo, hi) = u_bounds(c);
            assert!(lo < u && u < hi, "c={c}");
        }
    }

    #[test]
    fn sandwich_width_is_scaled_r() {
        let c = 0.7;
        let (lo, hi) = chi_sandwich(c, 5).unwrap();
        let u = normalizing_integral(c).unwrap();
        let w = (PI / u).powi(2) * r_of_c(c).unwrap();
        assert!(((hi - lo) - w).abs() < 1e-12 * w);
    }

    proptest! {
        #[test]
        fn combined_bound_decreasing_in_m(c in 0.01f64..10.0, m in 0usize..40) {
            prop_assert!(lower_bound_combined(c, m + 1) < lower_bound_combined(c, m));
        }

        #[test]
        fn theta_tilde_below_theta(c in 0.001f64..0.12) {
            prop_assert!(theta_tilde(c) <= theta(c) * (1.0 + 1e-12));
        }
    }
}
