//! The Sturm–Liouville operator `−(p ψ')' + q ψ` with
//! `p(x) = cosh(4κ) − cosh(4κx)` and `q(x) = 3κ² cosh(4κx)`, its Liouville
//! transform to a Legendre-type problem with bounded potential, and a
//! Legendre–Galerkin eigensolver for that problem.
//!
//! The operator commutes with the convolution by `sech(κ(x − y))` on
//! `(-1, 1)`, so its eigenfunctions are those of `Q_c` for `κ = πc/2`
//! (see [`ode_parameter_for`]).

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::linalg::symmetric_eigen;
use crate::sech_operator::trim_series;
use crate::special_functions::{
    elliptic_k_from_complement, gauss_legendre, legendre_normalized_all, LegendreSeries,
    QuadratureGrid,
};

/// The ODE parameter whose eigenfunctions are those of `Q_c`.
pub fn ode_parameter_for(c: f64) -> f64 {
    0.5 * PI * c
}

/// `(p(x), q(x))`, with `p` in the cancellation-free form
/// `2 sinh(2κ(1+x)) sinh(2κ(1−x))`.
pub fn case1_coefficients(kappa: f64, x: f64) -> (f64, f64) {
    let p = 2.0 * (2.0 * kappa * (1.0 + x)).sinh() * (2.0 * kappa * (1.0 - x)).sinh();
    let q = 3.0 * kappa * kappa * (4.0 * kappa * x).cosh();
    (p, q)
}

/// `U = ∫_{-1}^{1} p^{-1/2} = K(tanh 2κ) / (κ √(1 + cosh 4κ))`.
pub fn normalizing_integral(kappa: f64) -> Result<f64> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(invalid(format!(
            "ODE parameter must be positive, got {kappa}"
        )));
    }
    if kappa > 50.0 {
        return Err(Error::Domain(format!("ODE parameter {kappa} too large")));
    }
    let kprime = 1.0 / (2.0 * kappa).cosh();
    let k = elliptic_k_from_complement(kprime)?;
    Ok(k / (kappa * (1.0 + (4.0 * kappa).cosh()).sqrt()))
}

/// `sinh(a)/a`, equal to 1 at 0.
fn sinhc(a: f64) -> f64 {
    if a.abs() < 1e-4 {
        1.0 + a * a / 6.0
    } else {
        a.sinh() / a
    }
}

/// A point of `[-1, 1]` described three ways: `x`, `τ = √(1 − |x|)`, and
/// `s = ∫_x^1 p^{-1/2}`.
#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    tau: f64,
    s: f64,
}

/// The change of variable `y = Y(x) = sin X(x)`, `X(x) = (π/U) ∫_0^x p^{-1/2}`,
/// and the amplitude `F(y) = (p(Y^{-1}(y)) / (1 − y²))^{1/4}`.
#[derive(Debug, Clone)]
pub struct LiouvilleTransform {
    pub kappa: f64,
    pub u: f64,
    unit: QuadratureGrid,
    panels: usize,
}

impl LiouvilleTransform {
    pub fn new(kappa: f64) -> Result<Self> {
        let u = normalizing_integral(kappa)?;
        Ok(Self {
            kappa,
            u,
            unit: gauss_legendre(48, (0.0, 1.0))?,
            panels: 1 + (kappa.sqrt() / 2.0).ceil() as usize,
        })
    }

    /// `p` at `x = 1 − τ²`.
    fn p_tau(&self, tau: f64) -> f64 {
        let t2 = tau * tau;
        2.0 * (2.0 * self.kappa * (2.0 - t2)).sinh() * (2.0 * self.kappa * t2).sinh()
    }

    /// Integrand of `S(τ) = ∫_0^τ …` where `S(√(1−x)) = s(x)` for `x ≥ 0`.
    fn s_integrand(&self, t: f64) -> f64 {
        let k = self.kappa;
        let a = 2.0 * k * t * t;
        let ratio = 2.0 * k * sinhc(a);
        2.0 / (2.0 * (2.0 * k * (2.0 - t * t)).sinh() * ratio).sqrt()
    }

    fn s_of_tau(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let h = tau / self.panels as f64;
        let mut total = 0.0;
        for j in 0..self.panels {
            let a = j as f64 * h;
            for (&t, &w) in self.unit.nodes.iter().zip(&self.unit.weights) {
                total += w * h * self.s_integrand(a + h * t);
            }
        }
        total
    }

    fn point(&self, x: f64) -> Point {
        let ax = x.abs().min(1.0);
        let tau = (1.0 - ax).sqrt();
        let s_pos = self.s_of_tau(tau);
        let s = if x >= 0.0 { s_pos } else { self.u - s_pos };
        Point { x, tau, s }
    }

    /// `s(x) = ∫_x^1 p^{-1/2}`.
    pub fn s(&self, x: f64) -> f64 {
        self.point(x).s
    }

    /// `X(x) = π/2 − π s(x) / U`.
    pub fn big_x(&self, x: f64) -> f64 {
        0.5 * PI - PI * self.s(x) / self.u
    }

    pub fn y_of_x(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let pt = self.point(x.abs());
        (PI * pt.s / self.u).cos().copysign(x)
    }

    /// Solves `S(τ) = target` on `[0, 1]` by safeguarded Newton.
    fn tau_for_s(&self, target: f64) -> f64 {
        if target <= 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut tau = (target / self.s_integrand(0.0)).min(1.0);
        for _ in 0..100 {
            let f = self.s_of_tau(tau) - target;
            if f > 0.0 {
                hi = tau;
            } else {
                lo = tau;
            }
            let mut next = tau - f / self.s_integrand(tau);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - tau).abs() <= 1e-16 * tau.max(1e-300) || hi - lo <= 1e-17;
            tau = next;
            if done {
                break;
            }
        }
        tau
    }

    fn point_of_y(&self, y: f64) -> Point {
        let ay = y.abs().min(1.0);
        // θ = acos|y| with the small-angle branch kept accurate.
        let theta = if ay > 0.5 {
            2.0 * ((1.0 - ay) / 2.0).sqrt().asin()
        } else {
            ay.acos()
        };
        let s_pos = self.u * theta / PI;
        let tau = self.tau_for_s(s_pos);
        let x_pos = 1.0 - tau * tau;
        if y >= 0.0 {
            Point {
                x: x_pos,
                tau,
                s: s_pos,
            }
        } else {
            Point {
                x: -x_pos,
                tau,
                s: self.u - s_pos,
            }
        }
    }

    /// `Y^{-1}(y)`.
    pub fn x_of_y(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        self.point_of_y(y).x
    }

    /// `(AU/(2π))^{1/2}` with `A = 4κ sinh 4κ`: the value of `F` at `y = ±1`.
    fn f_endpoint(&self) -> f64 {
        let a = 4.0 * self.kappa * (4.0 * self.kappa).sinh();
        (a * self.u / (2.0 * PI)).sqrt()
    }

    fn f_at(&self, pt: Point) -> f64 {
        if pt.tau == 0.0 {
            return self.f_endpoint();
        }
        // 1 − y² = sin²(π s_+ / U) with s_+ the distance-to-nearest-end integral.
        let s_near = if pt.x >= 0.0 { pt.s } else { self.u - pt.s };
        let sin = (PI * s_near / self.u).sin();
        (self.p_tau(pt.tau) / (sin * sin)).powf(0.25)
    }

    /// `F(y) = (p(Y^{-1}(y)) / (1 − y²))^{1/4}`.
    pub fn amplitude(&self, y: f64) -> f64 {
        self.f_at(self.point_of_y(y))
    }

    /// `q^c(±1)`, the continuous extension at the endpoints.
    pub fn q_endpoint(&self) -> f64 {
        let a = self.u * self.kappa / PI;
        (1.0 + a * a * (4.0 * self.kappa).cosh()) / 3.0
    }

    fn q_at(&self, pt: Point) -> f64 {
        if pt.tau * pt.tau < 1e-8 {
            return self.q_endpoint();
        }
        let k = self.kappa;
        let s_near = if pt.x >= 0.0 { pt.s } else { self.u - pt.s };
        let cot = 1.0 / (PI * s_near / self.u).tan();
        let a = self.u * k / PI;
        let sh = (4.0 * k * pt.x).sinh();
        0.5 + 0.25 * cot * cot - a * a * ((4.0 * k * pt.x).cosh() + sh * sh / self.p_tau(pt.tau))
    }

    /// The bounded potential `q^c(y) = ½ + ¼tan²X − (Uκ/π)²(cosh 4κx + sinh²4κx / p)`
    /// at `x = Y^{-1}(y)`.
    pub fn q_potential(&self, y: f64) -> Result<f64> {
        if !(y.abs() <= 1.0) {
            return Err(invalid(format!("q^c argument {y} outside [-1, 1]")));
        }
        if y == 0.0 {
            let a = self.u * self.kappa / PI;
            return Ok(0.5 - a * a);
        }
        Ok(self.q_at(self.point_of_y(y)))
    }
}

/// Eigenvalues `χ_m` (increasing) of the ODE with parameter `κ`, and the
/// eigenfunctions `Γ̃_m` of the transformed problem as Legendre series in `y`.
#[derive(Debug, Clone)]
pub struct OdeSpectrum {
    pub kappa: f64,
    pub n_b: usize,
    pub u: f64,
    /// Eigenvalues of the Galerkin matrix (transformed problem).
    pub mu: Vec<f64>,
    /// `χ_m = (π/U)² μ_m`.
    pub chi: Vec<f64>,
    /// Distance from `χ_m` to its nearest neighbour.
    pub gaps: Vec<f64>,
    pub gamma: Vec<LegendreSeries>,
    pub transform: LiouvilleTransform,
}

impl OdeSpectrum {
    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    /// `g_m(x) = Γ̃_m(Y(x)) √(π/U) / F(Y(x))` at each `x`.
    pub fn eigenfunction_values(&self, m: usize, xs: &[f64]) -> Result<Vec<f64>> {
        let gamma = self
            .gamma
            .get(m)
            .ok_or_else(|| invalid(format!("index {m} beyond computed spectrum")))?;
        let t = &self.transform;
        let scale = (PI / self.u).sqrt();
        Ok(xs
            .iter()
            .map(|&x| {
                let pt = t.point(x);
                let y = if x == 0.0 {
                    0.0
                } else {
                    (PI * pt.s / t.u).cos()
                };
                let f = t.f_at(pt);
                gamma.eval(y) * scale / f
            })
            .collect())
    }

    /// `g_m` as a unit-norm Legendre series in `x`, sign fixed so `g_m(1) > 0`.
    pub fn eigenfunction_series(&self, m: usize) -> Result<LegendreSeries> {
        let n_x = self.n_b + 64;
        let grid = gauss_legendre(n_x, (-1.0, 1.0))?;
        let vals = self.eigenfunction_values(m, &grid.nodes)?;
        let mut s = trim_series(LegendreSeries::project(&grid, &vals, n_x - 1), 1e-20);
        let norm = s.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt();
        let sign = if s.eval(1.0) < 0.0 { -1.0 } else { 1.0 };
        for a in s.coeffs.iter_mut() {
            *a *= sign / norm;
        }
        Ok(s)
    }
}

fn galerkin_matrix(t: &LiouvilleTransform, n_b: usize) -> Result<DMatrix<f64>> {
    let quad = gauss_legendre(n_b + 32, (-1.0, 1.0))?;
    let half = quad.len().div_ceil(2);
    let mut m = DMatrix::<f64>::zeros(n_b, n_b);
    // q is even: evaluate on the nonnegative half.
    let mut q_vals = vec![0.0; quad.len()];
    for i in quad.len() / 2..quad.len() {
        let q = t.q_potential(quad.nodes[i])?;
        q_vals[i] = q;
        q_vals[quad.len() - 1 - i] = q;
    }
    debug_assert!(half > 0);
    for (i, (&y, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
        let basis = legendre_normalized_all(n_b - 1, y);
        let wq = w * q_vals[i];
        for j in 0..n_b {
            for k in j..n_b {
                if (j + k) % 2 == 0 {
                    m[(j, k)] += wq * basis[j] * basis[k];
                }
            }
        }
    }
    for j in 0..n_b {
        m[(j, j)] += (j * (j + 1)) as f64;
        for k in j + 1..n_b {
            m[(k, j)] = m[(j, k)];
        }
    }
    Ok(m)
}

/// Legendre–Galerkin eigensolver for the ODE with parameter `κ`, in the
/// transformed variable `y`: `M = diag(k(k+1)) + (⟨q^c P̄_j, P̄_k⟩)`.
pub fn galerkin_ode(kappa: f64, n_b: usize, m_max: usize) -> Result<OdeSpectrum> {
    if n_b < 2 * (m_max + 1) + 10 {
        return Err(Error::Resolution(format!(
            "basis of {n_b} Legendre polynomials too small for m_max = {m_max}"
        )));
    }
    let transform = LiouvilleTransform::new(kappa)?;
    let eig = symmetric_eigen(galerkin_matrix(&transform, n_b)?)?;
    let coarse = symmetric_eigen(galerkin_matrix(&transform, n_b - 5)?)?;
    let (fine, rough) = (eig.values[m_max], coarse.values[m_max]);
    if (fine - rough).abs() > 0.01 * fine.abs().max(1.0) {
        return Err(Error::Resolution(format!(
            "Galerkin eigenvalue {m_max} not converged in a basis of {n_b} ({fine} vs {rough})"
        )));
    }
    let scale = (PI / transform.u).powi(2);
    let mu: Vec<f64> = eig.values[..=m_max].to_vec();
    let chi: Vec<f64> = mu.iter().map(|v| v * scale).collect();
    let gaps = (0..=m_max)
        .map(|m| {
            let below = if m > 0 {
                eig.values[m] - eig.values[m - 1]
            } else {
                f64::INFINITY
            };
            let above = eig.values[m + 1] - eig.values[m];
            below.min(above) * scale
        })
        .collect();
    let gamma = eig.vectors[..=m_max]
        .iter()
        .map(|v| LegendreSeries::new(v.clone()))
        .collect();
    Ok(OdeSpectrum {
        kappa,
        n_b,
        u: transform.u,
        mu,
        chi,
        gaps,
        gamma,
        transform,
    })
}

/// Default Legendre basis size for [`galerkin_eigensystem`].
pub fn default_basis_size(m_max: usize) -> usize {
    2 * (m_max + 1) + 40
}

/// Eigenfunctions of `Q_c` through the commuting ODE (parameter `πc/2`).
pub fn galerkin_eigensystem(c: f64, n_b: usize, m_max: usize) -> Result<OdeSpectrum> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    galerkin_ode(ode_parameter_for(c), n_b, m_max)
}

/// `‖−(p g')' + q g − χ g‖_{L²(−0.9, 0.9)} / ‖g‖_{L²(−1,1)}`.
pub fn commutation_residual(kappa: f64, g: &LegendreSeries, chi: f64) -> Result<f64> {
    let norm = g.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(invalid("residual of the zero function"));
    }
    let grid = gauss_legendre(200, (-0.9, 0.9))?;
    let r = grid.integrate(|x| {
        let (v, d1, d2) = g.eval_with_derivatives(x);
        let (p, q) = case1_coefficients(kappa, x);
        let dp = -4.0 * kappa * (4.0 * kappa * x).sinh();
        let res = -p * d2 - dp * d1 + q * v - chi * v;
        res * res
    });
    Ok(r.sqrt() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sech_operator::nystrom_eigensystem;

    fn u_oracle(kappa: f64) -> f64 {
        // ∫_{-1}^{1} p^{-1/2} with ξ = cos θ.
        let g = QuadratureGrid::composite(&[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, PI], 40).unwrap();
        g.integrate(|th| {
            let (a, b) = (
                2.0 * (th / 2.0).cos().powi(2),
                2.0 * (th / 2.0).sin().powi(2),
            );
            let p = 2.0 * (2.0 * kappa * a).sinh() * (2.0 * kappa * b).sinh();
            th.sin() / p.sqrt()
        })
    }

    #[test]
    fn coefficients_at_special_points() {
        for &k in &[0.3, 1.0, 2.5] {
            let (p1, _) = case1_coefficients(k, 1.0);
            let (pm1, _) = case1_coefficients(k, -1.0);
            assert_eq!(p1, 0.0);
            assert_eq!(pm1, 0.0);
            let (p0, q0) = case1_coefficients(k, 0.0);
            let expect = (4.0 * k).cosh() - 1.0;
            assert!((p0 - expect).abs() < 1e-13 * expect);
            assert!((q0 - 3.0 * k * k).abs() < 1e-15);
        }
    }

    #[test]
    fn cancellation_free_p_matches_naive_form() {
        for i in 0..=99 {
            let x = -0.99 + 1.98 * i as f64 / 99.0;
            let (p, _) = case1_coefficients(1.0, x);
            let naive = 4f64.cosh() - (4.0 * x).cosh();
            assert!((p - naive).abs() < 1e-12 * naive, "x={x}");
        }
    }

    #[test]
    fn closed_form_u_matches_quadrature() {
        for &k in &[0.1, 0.5, 1.0, 2.0] {
            let u = normalizing_integral(k).unwrap();
            let o = u_oracle(k);
            assert!((u - o).abs() < 1e-10 * o, "k={k}: {u} vs {o}");
        }
    }

    #[test]
    fn transform_endpoints_and_symmetry() {
        let t = LiouvilleTransform::new(1.0).unwrap();
        assert_eq!(t.y_of_x(0.0), 0.0);
        assert!((t.y_of_x(1.0) - 1.0).abs() < 1e-15);
        assert!((t.y_of_x(-1.0) + 1.0).abs() < 1e-15);
        assert!((t.big_x(1.0) - 0.5 * PI).abs() < 1e-13);
        assert!((t.s(0.0) - 0.5 * t.u).abs() < 1e-13 * t.u);
    }

    #[test]
    fn y_monotone_and_invertible() {
        for &k in &[0.2, 1.0, PI] {
            let t = LiouvilleTransform::new(k).unwrap();
            let mut prev = -1.0 - 1e-12;
            for i in 0..=200 {
                let x = -1.0 + 2.0 * i as f64 / 200.0;
                let y = t.y_of_x(x);
                assert!(y > prev, "k={k} x={x}");
                prev = y;
            }
            for i in 0..200 {
                let y = -0.995 + 1.99 * i as f64 / 199.0;
                let back = t.y_of_x(t.x_of_y(y));
                assert!((back - y).abs() < 1e-12, "k={k} y={y} back={back}");
            }
        }
    }

    #[test]
    fn amplitude_positive_and_continuous_at_ends() {
        let t = LiouvilleTransform::new(1.0).unwrap();
        let end = t.amplitude(1.0);
        let near = t.amplitude(1.0 - 1e-10);
        assert!((end - near).abs() < 1e-4 * end);
        for i in 0..=100 {
            let y = -1.0 + 0.02 * i as f64;
            assert!(t.amplitude(y) > 0.0);
        }
    }

    #[test]
    fn potential_value_at_centre_and_evenness() {
        let t = LiouvilleTransform::new(1.0).unwrap();
        let a = t.u / PI;
        assert!((t.q_potential(0.0).unwrap() - (0.5 - a * a)).abs() < 1e-15);
        for i in 1..=100 {
            let y = 0.0099 * i as f64;
            let (qp, qm) = (t.q_potential(y).unwrap(), t.q_potential(-y).unwrap());
            assert!((qp - qm).abs() < 1e-12 * qp.abs().max(1.0));
        }
        assert!(t.q_potential(1.5).is_err());
    }

    #[test]
    fn potential_approaches_endpoint_limit() {
        for &k in &[0.5, 1.0, 2.0] {
            let t = LiouvilleTransform::new(k).unwrap();
            let lim = t.q_endpoint();
            let x = 1.0 - 1e-6;
            let q = t.q_at(t.point(x));
            assert!(
                (q - lim).abs() < 1e-4 * lim.abs().max(1.0),
                "k={k}: {q} vs {lim}"
            );
        }
    }

    #[test]
    fn chi_increasing_and_parity_alternates() {
        let ode = galerkin_eigensystem(1.0, default_basis_size(12), 12).unwrap();
        assert!(ode.chi.windows(2).all(|w| w[0] < w[1]));
        for m in 0..=12 {
            let g = ode.eigenfunction_series(m).unwrap();
            let (even, odd): (Vec<_>, Vec<_>) =
                g.coeffs.iter().enumerate().partition(|(k, _)| k % 2 == 0);
            let e: f64 = even.iter().map(|(_, a)| *a * *a).sum();
            let o: f64 = odd.iter().map(|(_, a)| *a * *a).sum();
            if m % 2 == 0 {
                assert!(o < 1e-20, "m={m}");
            } else {
                assert!(e < 1e-20, "m={m}");
            }
        }
    }

    #[test]
    fn gamma_coefficients_orthonormal() {
        let ode = galerkin_ode(1.0, 40, 10).unwrap();
        for i in 0..=10 {
            for j in 0..=10 {
                let ip: f64 = ode.gamma[i]
                    .coeffs
                    .iter()
                    .zip(&ode.gamma[j].coeffs)
                    .map(|(a, b)| a * b)
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenfunctions_orthonormal_in_x() {
        let ode = galerkin_eigensystem(0.8, 50, 8).unwrap();
        let gs: Vec<_> = (0..=8)
            .map(|m| ode.eigenfunction_series(m).unwrap())
            .collect();
        let grid = gauss_legendre(120, (-1.0, 1.0)).unwrap();
        // Before renormalisation the transform already preserves the norm.
        let raw = ode.eigenfunction_values(3, &grid.nodes).unwrap();
        let raw_norm: f64 = grid.integrate_values(&raw.iter().map(|v| v * v).collect::<Vec<_>>());
        assert!((raw_norm - 1.0).abs() < 1e-6, "{raw_norm}");
        for i in 0..=8 {
            for j in 0..=8 {
                let ip = grid.integrate(|x| gs[i].eval(x) * gs[j].eval(x));
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-6, "i={i} j={j} ip={ip}");
            }
        }
    }

    #[test]
    fn matches_nystrom_eigenfunctions() {
        let c = 1.0;
        let ode = galerkin_eigensystem(c, default_basis_size(8), 8).unwrap();
        let nys = nystrom_eigensystem(c, 200, 8).unwrap();
        for m in 0..=8 {
            let g = ode.eigenfunction_series(m).unwrap();
            let vals: Vec<f64> = nys.grid.nodes.iter().map(|&x| g.eval(x)).collect();
            let diff: f64 = nys
                .grid
                .weights
                .iter()
                .zip(vals.iter().zip(&nys.eigenfunctions[m]))
                .map(|(w, (a, b))| w * (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-6, "m={m}: {diff}");
        }
    }

    #[test]
    fn commutation_residual_small_for_eigenfunctions() {
        let kappa = ode_parameter_for(1.0);
        let ode = galerkin_ode(kappa, default_basis_size(8), 8).unwrap();
        for m in 0..=8 {
            let g = ode.eigenfunction_series(m).unwrap();
            let r = commutation_residual(kappa, &g, ode.chi[m]).unwrap();
            assert!(r < 1e-6, "m={m}: {r}");
            let neg = LegendreSeries::new(g.coeffs.iter().map(|a| -a).collect());
            let rn = commutation_residual(kappa, &neg, ode.chi[m]).unwrap();
            assert!((r - rn).abs() <= 1e-15 * r.max(1e-300) + 1e-18);
        }
        let p0 = LegendreSeries::new(vec![0.5f64.sqrt()]);
        assert!(commutation_residual(kappa, &p0, ode.chi[0]).unwrap() > 0.1);
    }

    #[test]
    fn small_basis_rejected() {
        assert!(matches!(
            galerkin_ode(1.0, 20, 10),
            Err(Error::Resolution(_))
        ));
    }
}
