//! The finite convolution operator `Q_c` with kernel `πc·sech(πc(x−y)/2)` on
//! `(-1, 1)`, its Nyström discretisation, and the truncated Fourier
//! transform `F_{b,c}: L²(cosh(b·)) → L²(-1,1)` with its adjoint.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::symmetric_eigen;
use crate::special_functions::{
    gauss_legendre, spherical_bessel_j_all, LegendreSeries, QuadratureGrid,
};
use nalgebra::DMatrix;

/// The pair `(b, c)` parameterising `F_{b,c}`; `Q_{c/b}` is the associated
/// convolution operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    pub b: f64,
    pub c: f64,
}

impl OperatorParams {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(invalid(format!("b must be positive, got {b}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid(format!("c must be positive, got {c}")));
        }
        Ok(Self { b, c })
    }

    /// `c / b`, the parameter of `Q`.
    pub fn ratio(&self) -> f64 {
        self.c / self.b
    }
}

/// Complex values on the nodes of a quadrature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: QuadratureGrid,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: QuadratureGrid, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: QuadratureGrid, values: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: QuadratureGrid, f: F) -> Self {
        let values = grid.nodes.iter().map(|&x| f(x)).collect();
        Self { grid, values }
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// `∫ |f|² w(x) dx` by the grid's rule.
    pub fn weighted_norm_sq<W: Fn(f64) -> f64>(&self, weight: W) -> f64 {
        self.grid
            .nodes
            .iter()
            .zip(&self.grid.weights)
            .zip(&self.values)
            .map(|((&x, &w), v)| w * weight(x) * v.norm_sqr())
            .sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.weighted_norm_sq(|_| 1.0).sqrt()
    }

    /// `∫ f conj(g) w(x) dx`; both functions must share nodes.
    pub fn weighted_inner<W: Fn(f64) -> f64>(
        &self,
        other: &SampledFunction,
        weight: W,
    ) -> Result<Complex64> {
        if !self.grid.same_nodes(&other.grid) {
            return Err(invalid("inner product of functions on different grids"));
        }
        Ok(self
            .grid
            .nodes
            .iter()
            .zip(&self.grid.weights)
            .zip(self.values.iter().zip(&other.values))
            .map(|((&x, &w), (a, b))| a * b.conj() * (w * weight(x)))
            .sum())
    }
}

/// `πc·sech(πc(x−y)/2)`.
pub fn kernel(c: f64, x: f64, y: f64) -> f64 {
    let t = 0.5 * std::f64::consts::PI * c * (x - y);
    std::f64::consts::PI * c / t.cosh()
}

pub fn sech(x: f64) -> f64 {
    let a = x.abs();
    if a > 700.0 {
        0.0
    } else {
        1.0 / a.cosh()
    }
}

/// Even or odd symmetry of an eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(m: usize) -> Self {
        if m.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Eigenvalues (all of them) and the leading eigenfunctions of the Nyström
/// matrix of `Q_c`.
#[derive(Debug, Clone)]
pub struct NystromSpectrum {
    pub c: f64,
    pub n: usize,
    pub grid: QuadratureGrid,
    /// Decreasing.
    pub rho: Vec<f64>,
    pub parity: Vec<Parity>,
    /// Node values of `g_0..=g_{m_max}`, unit `L²(-1,1)` norm.
    pub eigenfunctions: Vec<Vec<f64>>,
    /// Number of leading eigenvalues above `1e3·ε·ρ_0`.
    pub trusted: usize,
    /// Indices `m` with `ρ_m − ρ_{m+1} < 1e-10·ρ_0`.
    pub small_gaps: Vec<usize>,
}

impl NystromSpectrum {
    pub fn eigenfunction(&self, m: usize) -> Option<SampledFunction> {
        let v = self.eigenfunctions.get(m)?;
        SampledFunction::from_real(self.grid.clone(), v).ok()
    }

    /// Legendre coefficients of the interpolant of `g_m` through the nodes,
    /// with negligible trailing terms removed.
    pub fn eigenfunction_series(&self, m: usize) -> Option<LegendreSeries> {
        let v = self.eigenfunctions.get(m)?;
        let s = LegendreSeries::project(&self.grid, v, self.n - 1);
        Some(trim_series(s, 1e-20))
    }

    pub fn is_trusted(&self, m: usize) -> bool {
        m < self.trusted
    }

    pub fn trace(&self) -> f64 {
        self.rho.iter().sum()
    }
}

pub(crate) fn trim_series(mut s: LegendreSeries, tol: f64) -> LegendreSeries {
    let scale = s.coeffs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    while s.coeffs.len() > 1 && s.coeffs.last().is_some_and(|a| a.abs() <= tol * scale) {
        s.coeffs.pop();
    }
    s
}

/// Symmetrised Nyström discretisation of `Q_c` on an n-point Gauss grid.
///
/// The matrix `√w_i K(x_i, x_j) √w_j` is block-diagonalised by parity
/// (kernel `K(x,y) ± K(x,−y)` on the nonnegative nodes), which keeps every
/// eigenfunction exactly even or odd.
pub fn nystrom_eigensystem(c: f64, n: usize, m_max: usize) -> Result<NystromSpectrum> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    if n < 4 * (m_max + 1) {
        return Err(invalid(format!(
            "Nyström grid of {n} nodes is too small for m_max = {m_max} (need >= {})",
            4 * (m_max + 1)
        )));
    }
    let grid = gauss_legendre(n, (-1.0, 1.0))?;
    let half = n / 2;
    // Nonnegative nodes: indices half.. (the middle one is 0 when n is odd).
    let pos: Vec<usize> = (half..n).collect();
    let has_zero = n % 2 == 1;

    let mut entries: Vec<(f64, Parity, Vec<f64>)> = Vec::with_capacity(n);
    for parity in [Parity::Even, Parity::Odd] {
        let idx: Vec<usize> = if parity == Parity::Odd && has_zero {
            pos[1..].to_vec()
        } else {
            pos.clone()
        };
        let k = idx.len();
        if k == 0 {
            continue;
        }
        let wt: Vec<f64> = idx
            .iter()
            .map(|&i| {
                if grid.nodes[i] == 0.0 {
                    grid.weights[i]
                } else {
                    2.0 * grid.weights[i]
                }
            })
            .collect();
        let sign = if parity == Parity::Even { 1.0 } else { -1.0 };
        let a = DMatrix::from_fn(k, k, |r, s| {
            let (x, y) = (grid.nodes[idx[r]], grid.nodes[idx[s]]);
            let ke = 0.5 * (kernel(c, x, y) + sign * kernel(c, x, -y));
            wt[r].sqrt() * ke * wt[s].sqrt()
        });
        let eig = symmetric_eigen(a)?;
        for (lam, u) in eig.values.into_iter().zip(eig.vectors) {
            let mut full = vec![0.0; n];
            for (r, &i) in idx.iter().enumerate() {
                let v = u[r] / wt[r].sqrt();
                full[i] = v;
                full[n - 1 - i] = sign * v;
            }
            if has_zero && parity == Parity::Odd {
                full[half] = 0.0;
            }
            entries.push((lam, parity, full));
        }
    }
    entries.sort_by(|a, b| b.0.total_cmp(&a.0));

    let rho: Vec<f64> = entries.iter().map(|e| e.0).collect();
    let parity: Vec<Parity> = entries.iter().map(|e| e.1).collect();
    let rho0 = rho[0];
    let floor = 1e3 * f64::EPSILON * rho0;
    let trusted = rho.iter().take_while(|&&r| r >= floor).count();
    let small_gaps: Vec<usize> = (0..=m_max.min(n.saturating_sub(2)))
        .filter(|&m| rho[m] - rho[m + 1] < 1e-10 * rho0)
        .collect();
    for &m in &small_gaps {
        if m < trusted {
            log::warn!("near-degenerate Nyström eigenvalues at m = {m} (c = {c})");
        }
    }
    let eigenfunctions = entries
        .into_iter()
        .take(m_max + 1)
        .map(|(_, _, mut v)| {
            let norm: f64 = grid
                .weights
                .iter()
                .zip(&v)
                .map(|(w, g)| w * g * g)
                .sum::<f64>()
                .sqrt();
            let sign = if v[n - 1] < 0.0 { -1.0 } else { 1.0 };
            for g in v.iter_mut() {
                *g *= sign / norm;
            }
            v
        })
        .collect();
    Ok(NystromSpectrum {
        c,
        n,
        grid,
        rho,
        parity,
        eigenfunctions,
        trusted,
        small_gaps,
    })
}

/// `∫_{-1}^{1} e^{izt} g(t) dt = Σ a_k √(k+½)·2 i^k j_k(z)` for a Legendre
/// series `g`.
pub fn fourier_legendre(g: &LegendreSeries, z: f64) -> Complex64 {
    if g.coeffs.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let j = spherical_bessel_j_all(g.degree(), z);
    let (mut re, mut im) = (0.0, 0.0);
    for (k, (&a, &jk)) in g.coeffs.iter().zip(&j).enumerate() {
        let t = 2.0 * a * (k as f64 + 0.5).sqrt() * jk;
        match k % 4 {
            0 => re += t,
            1 => im += t,
            2 => re -= t,
            _ => im -= t,
        }
    }
    Complex64::new(re, im)
}

/// `⟨Q_c g, g⟩ = ∫_ℝ sech(x/c)|ĝ(x)|² dx` with `ĝ(x) = ∫_{-1}^{1} e^{ixt}g(t)dt`.
///
/// The integrand is nonnegative, so the value keeps relative accuracy for
/// very small eigenvalues. `g` must have unit norm.
pub fn rho_rayleigh(c: f64, g: &LegendreSeries) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    let norm_sq: f64 = g.coeffs.iter().map(|a| a * a).sum();
    if (norm_sq.sqrt() - 1.0).abs() > 1e-8 {
        return Err(invalid(format!(
            "rho_rayleigh needs a unit-norm function, got norm {}",
            norm_sq.sqrt()
        )));
    }
    // sech tail below 1e-40.
    let x_max = 92.0 * c;
    let width = c.min(1.0);
    let panels = (x_max / width).ceil() as usize;
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| x_max * i as f64 / panels as f64)
        .collect();
    let grid = QuadratureGrid::composite(&breaks, 24)?;
    // |ĝ| is even for real g.
    let v = 2.0 * grid.integrate(|x| sech(x / c) * fourier_legendre(g, x).norm_sqr());
    Ok(v)
}

/// [`rho_rayleigh`] for node values on a Gauss–Legendre grid over (-1, 1).
pub fn rho_rayleigh_sampled(c: f64, g: &SampledFunction) -> Result<f64> {
    if (g.grid.lo, g.grid.hi) != (-1.0, 1.0) {
        return Err(invalid("rho_rayleigh needs samples on (-1, 1)"));
    }
    if g.values.iter().any(|v| v.im != 0.0) {
        return Err(invalid("rho_rayleigh needs a real function"));
    }
    let series = LegendreSeries::project(&g.grid, &g.real_parts(), g.grid.len() - 1);
    rho_rayleigh(c, &trim_series(series, 1e-20))
}

/// Composite Gauss rule on `(-t, t)` with equal panels of width at most
/// `max_width` and `per_panel` nodes each.
pub fn real_line_grid(t: f64, max_width: f64, per_panel: usize) -> Result<QuadratureGrid> {
    if !(t > 0.0 && max_width > 0.0) {
        return Err(invalid("real-line grid needs positive extent and width"));
    }
    let panels = ((2.0 * t / max_width).ceil() as usize).max(1);
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| -t + 2.0 * t * i as f64 / panels as f64)
        .collect();
    QuadratureGrid::composite(&breaks, per_panel)
}

/// `(F_{b,c} f)(y) = ∫ e^{icyt} f(t) dt` at each `y`, by the rule of `f`'s
/// grid.
pub fn apply_forward(
    params: OperatorParams,
    f: &SampledFunction,
    y_grid: &[f64],
) -> Result<Vec<Complex64>> {
    let t_max = f.grid.lo.abs().max(f.grid.hi.abs());
    if params.c * t_max / std::f64::consts::PI > f.grid.len() as f64 / 4.0 {
        return Err(Error::Resolution(format!(
            "{} nodes cannot resolve e^(icyt) over |t| <= {t_max} at c = {}",
            f.grid.len(),
            params.c
        )));
    }
    Ok(y_grid
        .iter()
        .map(|&y| {
            f.grid
                .nodes
                .iter()
                .zip(&f.grid.weights)
                .zip(&f.values)
                .map(|((&t, &w), v)| Complex64::from_polar(w, params.c * y * t) * v)
                .sum()
        })
        .collect())
}

/// `(F*_{b,c} h)(x) = sech(bx) ∫_{-1}^{1} e^{-icxt} h(t) dt` at each `x`, by
/// the rule of `h`'s grid.
pub fn apply_adjoint(
    params: OperatorParams,
    h: &SampledFunction,
    x_grid: &[f64],
) -> Result<Vec<Complex64>> {
    if h.grid.lo < -1.0 || h.grid.hi > 1.0 {
        return Err(invalid("adjoint input must live on (-1, 1)"));
    }
    Ok(x_grid
        .iter()
        .map(|&x| {
            let s: Complex64 = h
                .grid
                .nodes
                .iter()
                .zip(&h.grid.weights)
                .zip(&h.values)
                .map(|((&t, &w), v)| Complex64::from_polar(w, -params.c * x * t) * v)
                .sum();
            s * sech(params.b * x)
        })
        .collect())
}

/// Closed form of [`apply_adjoint`] for a Legendre series:
/// `sech(bx) Σ a_k √(k+½)·2(−i)^k j_k(cx)`.
pub fn adjoint_legendre(params: OperatorParams, h: &LegendreSeries, x: f64) -> Complex64 {
    fourier_legendre(h, -params.c * x) * sech(params.b * x)
}

/// `‖c F_{b,c} F*_{b,c} h − Q_{c/b} h‖ / ‖h‖` by quadrature. `h` must sit on
/// a grid over (-1, 1).
pub fn verify_factorization(params: OperatorParams, h: &SampledFunction) -> Result<f64> {
    if h.grid.lo < -1.0 || h.grid.hi > 1.0 {
        return Err(invalid("factorization probe must live on (-1, 1)"));
    }
    let h_norm = h.l2_norm();
    if h_norm == 0.0 {
        return Ok(0.0);
    }
    let (b, c) = (params.b, params.c);
    let t = 40.0 / b;
    let width = 1.0f64.min(1.0 / b).min(1.5 / c);
    let line = real_line_grid(t, width, 16)?;
    let adj = apply_adjoint(params, h, &line.nodes)?;
    let adj = SampledFunction::new(line, adj)?;
    let lhs = apply_forward(params, &adj, &h.grid.nodes)?;
    let q = params.ratio();
    let mut res = 0.0;
    for (i, &y) in h.grid.nodes.iter().enumerate() {
        let qh: Complex64 = h
            .grid
            .nodes
            .iter()
            .zip(&h.grid.weights)
            .zip(&h.values)
            .map(|((&s, &w), v)| v * (w * kernel(q, y, s)))
            .sum();
        res += h.grid.weights[i] * (lhs[i] * c - qh).norm_sqr();
    }
    Ok(res.sqrt() / h_norm)
}
