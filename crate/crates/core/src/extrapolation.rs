//! Spectral cut-off extrapolation of a function observed with bounded noise
//! on `[x₀ − c, x₀ + c]`: coefficients on `g_m`, the truncated expansion of
//! its Fourier transform on `φ_m`, an FFT back to the real line, the penalty
//! `Σ(N)` and the data-driven level `N̂`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bounds::beta;
use crate::error::{invalid, Error, Result};
use crate::pswf::PswfSystem;
use crate::sech_operator::{adjoint_legendre, OperatorParams};
use crate::special_functions::{gauss_legendre, LegendreSeries, QuadratureGrid};
use crate::svd_assembly::Svd;

/// The two benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinCase {
    /// `f = 0.5/cosh(2·)`, not bandlimited.
    A,
    /// `f = sinc(2·)/6` with `sinc(x) = sin(πx)/(πx)`, band `[−2π, 2π]`.
    B,
}

impl BuiltinCase {
    pub fn truth(self, x: f64) -> f64 {
        match self {
            BuiltinCase::A => 0.5 / (2.0 * x).cosh(),
            BuiltinCase::B => {
                let t = 2.0 * PI * x;
                if t.abs() < 1e-8 {
                    (1.0 - t * t / 6.0) / 6.0
                } else {
                    t.sin() / t / 6.0
                }
            }
        }
    }

    pub fn b(self) -> f64 {
        match self {
            BuiltinCase::A => 1.0,
            BuiltinCase::B => 1.0 / 6.5,
        }
    }

    pub fn c(self) -> f64 {
        0.5
    }

    pub fn x0(self) -> f64 {
        0.0
    }

    pub fn default_delta(self) -> f64 {
        match self {
            BuiltinCase::A => 0.05,
            BuiltinCase::B => 0.01,
        }
    }

    pub fn params(self) -> OperatorParams {
        OperatorParams::new(self.b(), self.c()).expect("positive constants")
    }
}

/// Noise shape `ξ(t) = cos(50t)` in the window variable.
pub fn benchmark_noise(t: f64) -> f64 {
    (50.0 * t).cos()
}

pub const DEFAULT_WINDOW_NODES: usize = 2048;

/// Samples `f_δ(c t + x₀)` at the nodes `t` of a quadrature rule on (−1, 1).
#[derive(Debug, Clone)]
pub struct ObservationWindow {
    pub x0: f64,
    pub c: f64,
    pub delta: f64,
    pub grid: QuadratureGrid,
    pub samples: Vec<f64>,
    pub truth: Option<BuiltinCase>,
}

impl ObservationWindow {
    pub fn new(
        x0: f64,
        c: f64,
        delta: f64,
        grid: QuadratureGrid,
        samples: Vec<f64>,
    ) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(invalid(format!("delta must be positive, got {delta}")));
        }
        if !(c > 0.0 && c.is_finite() && x0.is_finite()) {
            return Err(invalid(
                "window needs a finite center and positive half-width",
            ));
        }
        if grid.lo < -1.0 || grid.hi > 1.0 {
            return Err(invalid("window grid must live on (-1, 1)"));
        }
        if grid.len() != samples.len() {
            return Err(invalid(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("sample {i} is not finite")));
        }
        Ok(Self {
            x0,
            c,
            delta,
            grid,
            samples,
            truth: None,
        })
    }

    /// `f(c t + x₀) + δ ξ(t)` on an `n`-point Gauss grid.
    pub fn from_fn<F, G>(x0: f64, c: f64, delta: f64, n: usize, f: F, xi: G) -> Result<Self>
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
    {
        let grid = gauss_legendre(n, (-1.0, 1.0))?;
        let samples = grid
            .nodes
            .iter()
            .map(|&t| f(c * t + x0) + delta * xi(t))
            .collect();
        Self::new(x0, c, delta, grid, samples)
    }

    /// Samples at real-line points `x` inside `[x₀ − c, x₀ + c]`. Gauss
    /// weights are used when the points are the Gauss nodes of their count,
    /// trapezoidal weights over `[−1, 1]` otherwise.
    pub fn from_points(x0: f64, c: f64, delta: f64, xs: &[f64], values: &[f64]) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 2 {
            return Err(invalid(
                "need at least two (x, f_delta) pairs of equal length",
            ));
        }
        let mut pairs: Vec<(f64, f64)> = xs
            .iter()
            .zip(values)
            .map(|(&x, &v)| ((x - x0) / c, v))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let tol = 1e-12;
        if pairs.iter().any(|p| !(p.0.abs() <= 1.0 + tol)) {
            return Err(invalid("observation points must lie in [x0 - c, x0 + c]"));
        }
        if pairs.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(invalid("observation points must be distinct"));
        }
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0.clamp(-1.0, 1.0)).collect();
        let samples: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let gauss = gauss_legendre(nodes.len(), (-1.0, 1.0))?;
        let grid = if gauss
            .nodes
            .iter()
            .zip(&nodes)
            .all(|(a, b)| (a - b).abs() < 1e-10)
        {
            gauss
        } else {
            let n = nodes.len();
            let mut weights = vec![0.0; n];
            for i in 0..n - 1 {
                let h = 0.5 * (nodes[i + 1] - nodes[i]);
                weights[i] += h;
                weights[i + 1] += h;
            }
            weights[0] += nodes[0] + 1.0;
            weights[n - 1] += 1.0 - nodes[n - 1];
            QuadratureGrid {
                nodes,
                weights,
                lo: -1.0,
                hi: 1.0,
            }
        };
        Self::new(x0, c, delta, grid, samples)
    }

    pub fn with_truth(mut self, case: BuiltinCase) -> Self {
        self.truth = Some(case);
        self
    }

    /// Multiplies samples and `δ` by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(invalid("scale must be positive"));
        }
        let mut out = self.clone();
        out.delta *= lambda;
        out.samples.iter_mut().for_each(|v| *v *= lambda);
        out.truth = None;
        Ok(out)
    }

    /// `‖f_δ(c·+x₀)‖²_{L²(−1,1)}`.
    pub fn norm_sq(&self) -> f64 {
        self.grid
            .integrate_values(&self.samples.iter().map(|v| v * v).collect::<Vec<_>>())
    }
}

/// Benchmark window with `n` Gauss nodes; `delta` defaults to the case's
/// noise level.
pub fn builtin_case(
    case: BuiltinCase,
    delta: Option<f64>,
    n: usize,
) -> Result<(ObservationWindow, OperatorParams)> {
    let delta = delta.unwrap_or_else(|| case.default_delta());
    let obs = ObservationWindow::from_fn(
        case.x0(),
        case.c(),
        delta,
        n,
        |x| case.truth(x),
        benchmark_noise,
    )?;
    Ok((obs.with_truth(case), case.params()))
}

fn check_window(obs: &ObservationWindow, c: f64) -> Result<()> {
    if (obs.c - c).abs() > 1e-12 * c {
        return Err(invalid(format!(
            "window half-width {} does not match the operator's c = {c}",
            obs.c
        )));
    }
    Ok(())
}

/// `d_m = ⟨f_δ(c·+x₀), g_m⟩_{L²(−1,1)}` for `m = 0..=n`.
pub fn coefficients(obs: &ObservationWindow, svd: &Svd, n: usize) -> Result<Vec<f64>> {
    check_window(obs, svd.params.c)?;
    if n >= svd.len() {
        return Err(invalid(format!(
            "SVD holds {} triplets, {} requested",
            svd.len(),
            n + 1
        )));
    }
    Ok(svd.triplets[..=n]
        .iter()
        .map(|t| project(obs, &t.g_series))
        .collect())
}

fn project(obs: &ObservationWindow, g: &LegendreSeries) -> f64 {
    obs.grid
        .nodes
        .iter()
        .zip(&obs.grid.weights)
        .zip(&obs.samples)
        .map(|((&t, &w), &v)| w * v * g.eval(t))
        .sum()
}

fn check_trusted(trusted: usize, n: usize) -> Result<()> {
    if n >= trusted {
        return Err(Error::UntrustedIndex {
            index: n,
            trusted: trusted.saturating_sub(1),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationOptions {
    /// Points of the uniform grid on `(−T, T)` fed to the FFT.
    pub fft_len: usize,
    /// `T = tail / b`.
    pub tail: f64,
    /// Errors are measured on `[x₀ − h, x₀ + h]`.
    pub report_half_width: f64,
}

impl Default for ExtrapolationOptions {
    fn default() -> Self {
        Self {
            fft_len: 1 << 12,
            tail: 22.0,
            report_half_width: 6.0,
        }
    }
}

/// Estimate `f_δ^N` on the uniform grid `z_k = x₀ − πk/T`, increasing in `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub z: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest imaginary part discarded.
    pub max_imag: f64,
}

impl Reconstruction {
    /// `(Σ Δz (f̂ − f)²)^{1/2}` over `[center − h, center + h]`.
    pub fn l2_error<F: Fn(f64) -> f64>(&self, truth: F, center: f64, h: f64) -> f64 {
        let dz = self.z[1] - self.z[0];
        self.z
            .iter()
            .zip(&self.values)
            .filter(|(z, _)| (**z - center).abs() <= h)
            .map(|(&z, &v)| dz * (v - truth(z)).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// `F_δ^N = Σ_{m≤N} (d_m/σ_m) φ_m` and the reconstruction `f_δ^N`.
#[derive(Debug, Clone)]
pub struct CutoffEstimate {
    pub n: usize,
    pub d: Vec<f64>,
    pub sigma: Vec<f64>,
    pub reconstruction: Reconstruction,
}

impl CutoffEstimate {
    /// `‖F_δ^{hi} − F_δ^{lo}‖²` from the coefficients, `lo ≤ hi ≤ N`.
    pub fn increment_norm_sq(&self, lo: usize, hi: usize) -> f64 {
        increment_norm_sq(&self.d, &self.sigma, lo, hi)
    }
}

fn increment_norm_sq(d: &[f64], sigma: &[f64], lo: usize, hi: usize) -> f64 {
    (lo + 1..=hi).map(|m| (d[m] / sigma[m]).powi(2)).sum()
}

/// `Σ_{m≤N} (d_m/σ_m²) g_m`, whose adjoint image is `F_δ^N`.
fn combined_series(svd: &Svd, d: &[f64]) -> LegendreSeries {
    let len = svd.triplets[..d.len()]
        .iter()
        .map(|t| t.g_series.coeffs.len())
        .max()
        .unwrap_or(0);
    let mut coeffs = vec![0.0; len];
    for (t, &dm) in svd.triplets.iter().zip(d) {
        let s = dm / (t.sigma * t.sigma);
        for (a, g) in coeffs.iter_mut().zip(&t.g_series.coeffs) {
            *a += s * g;
        }
    }
    LegendreSeries::new(coeffs)
}

/// `F_δ^N(ξ)`.
pub fn fourier_side(svd: &Svd, d: &[f64], xi: f64) -> Complex64 {
    adjoint_legendre(svd.params, &combined_series(svd, d), xi)
}

/// `f(z) = ∫ e^{−i(x₀−z)ξ} F(ξ) dξ` from `F` on `ξ_j = −T + jΔ`, `Δ = 2T/L`,
/// by the trapezoidal rule and one FFT. `f_edge = F(T)`.
fn inverse_transform(samples: &[Complex64], f_edge: Complex64, t: f64, x0: f64) -> Reconstruction {
    let len = samples.len();
    let dx = 2.0 * t / len as f64;
    let mut buf = samples.to_vec();
    buf[0] *= 0.5;
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let half = (len / 2) as i64;
    // u_k = πk/T for k = half−1 down to −half gives increasing z.
    let mut z = Vec::with_capacity(len);
    let mut values = Vec::with_capacity(len);
    let mut max_imag: f64 = 0.0;
    for k in (-half..half).rev() {
        let u = PI * k as f64 / t;
        let idx = k.rem_euclid(len as i64) as usize;
        let mut v = Complex64::from_polar(dx, u * t) * buf[idx];
        v += Complex64::from_polar(0.5 * dx, -u * t) * f_edge;
        z.push(x0 - u);
        values.push(v.re);
        max_imag = max_imag.max(v.im.abs());
    }
    Reconstruction {
        z,
        values,
        max_imag,
    }
}

fn check_fft(opts: &ExtrapolationOptions) -> Result<()> {
    if opts.fft_len < 16 || !opts.fft_len.is_multiple_of(2) || !(opts.tail > 0.0) {
        return Err(invalid(
            "FFT length must be even and at least 16, tail positive",
        ));
    }
    Ok(())
}

/// Cut-off estimate at level `n` in the sech system.
pub fn cutoff_estimate(
    obs: &ObservationWindow,
    svd: &Svd,
    n: usize,
    opts: &ExtrapolationOptions,
) -> Result<CutoffEstimate> {
    check_fft(opts)?;
    check_trusted(svd.trusted_len(), n)?;
    let d = coefficients(obs, svd, n)?;
    Ok(estimate_from_coefficients(obs, svd, d, opts))
}

fn estimate_from_coefficients(
    obs: &ObservationWindow,
    svd: &Svd,
    d: Vec<f64>,
    opts: &ExtrapolationOptions,
) -> CutoffEstimate {
    let n = d.len() - 1;
    let series = combined_series(svd, &d);
    let t = opts.tail / svd.params.b;
    let dx = 2.0 * t / opts.fft_len as f64;
    let samples: Vec<Complex64> = (0..opts.fft_len)
        .map(|j| adjoint_legendre(svd.params, &series, -t + j as f64 * dx))
        .collect();
    let edge = adjoint_legendre(svd.params, &series, t);
    let reconstruction = inverse_transform(&samples, edge, t, obs.x0);
    CutoffEstimate {
        n,
        sigma: svd.triplets[..=n].iter().map(|t| t.sigma).collect(),
        d,
        reconstruction,
    }
}

/// `Σ(N) = 2πcδ² e^{2β(c/b)N} / (1 − e^{−2β(c/b)})`.
pub fn sigma_penalty(params: OperatorParams, delta: f64, n: usize) -> f64 {
    let two_beta = 2.0 * beta(params.ratio());
    2.0 * PI * params.c * delta * delta * (two_beta * n as f64).exp() / (1.0 - (-two_beta).exp())
}

/// `N_max = ⌊log(1/δ)⌋`, and 0 when `δ ≥ 1`.
pub fn n_max(delta: f64) -> usize {
    if delta >= 1.0 {
        log::warn!("noise level {delta} >= 1, using N_max = 0");
        return 0;
    }
    (1.0 / delta).ln().floor() as usize
}

/// Sign of `Σ(N')` inside the positive part of `B(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltySign {
    /// `(‖F^{N'∨N} − F^N‖² + Σ(N'))₊`.
    #[default]
    Plus,
    /// `(‖F^{N'∨N} − F^N‖² − Σ(N'))₊`.
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveChoice {
    pub n_hat: usize,
    pub n_max: usize,
    pub sign: PenaltySign,
    pub bias: Vec<f64>,
    pub penalty: Vec<f64>,
}

/// `N̂ = argmin_{N ≤ N_max} B(N) + Σ(N)`, smallest index on ties, from the
/// coefficients `d_m` and singular values `σ_m`, `m ≤ N_max`.
pub fn adaptive_from_coefficients(
    params: OperatorParams,
    delta: f64,
    d: &[f64],
    sigma: &[f64],
    sign: PenaltySign,
) -> Result<AdaptiveChoice> {
    let nm = n_max(delta);
    if d.len() <= nm || sigma.len() <= nm {
        return Err(invalid(format!(
            "N_max = {nm} needs {} coefficients",
            nm + 1
        )));
    }
    let penalty: Vec<f64> = (0..=nm).map(|n| sigma_penalty(params, delta, n)).collect();
    let s = match sign {
        PenaltySign::Plus => 1.0,
        PenaltySign::Minus => -1.0,
    };
    let bias: Vec<f64> = (0..=nm)
        .map(|n| {
            (n..=nm)
                .map(|np| (increment_norm_sq(d, sigma, n, np) + s * penalty[np]).max(0.0))
                .fold(0.0, f64::max)
        })
        .collect();
    let mut n_hat = 0;
    for n in 1..=nm {
        if bias[n] + penalty[n] < bias[n_hat] + penalty[n_hat] {
            n_hat = n;
        }
    }
    Ok(AdaptiveChoice {
        n_hat,
        n_max: nm,
        sign,
        bias,
        penalty,
    })
}

/// [`adaptive_from_coefficients`] on the sech system.
pub fn adaptive_n(obs: &ObservationWindow, svd: &Svd, sign: PenaltySign) -> Result<AdaptiveChoice> {
    let nm = n_max(obs.delta);
    check_trusted(svd.trusted_len(), nm)?;
    let d = coefficients(obs, svd, nm)?;
    let sigma: Vec<f64> = svd.triplets[..=nm].iter().map(|t| t.sigma).collect();
    adaptive_from_coefficients(svd.params, obs.delta, &d, &sigma, sign)
}

/// Cut-off estimate at level `n` in the prolate system of
/// `L²(−1/b, 1/b) → L²(−1, 1)`. The output grid is the one of
/// [`cutoff_estimate`] for the same `b` and options.
pub fn pswf_cutoff_estimate(
    obs: &ObservationWindow,
    system: &PswfSystem,
    n: usize,
    opts: &ExtrapolationOptions,
) -> Result<CutoffEstimate> {
    check_fft(opts)?;
    check_window(obs, system.c)?;
    check_trusted(system.basis.trusted, n)?;
    let d: Vec<f64> = system.basis.coeffs[..=n]
        .iter()
        .map(|g| project(obs, g))
        .collect();
    let sigma = system.sigma[..=n].to_vec();
    let half = 1.0 / system.b;
    let nodes = 64 + (4.0 * system.c * half).ceil() as usize;
    let quad = gauss_legendre(nodes, (-half, half))?;
    let f_hat: Vec<Complex64> = quad
        .nodes
        .iter()
        .map(|&xi| {
            (0..=n)
                .map(|m| system.phi_at(m, xi) * (d[m] / sigma[m]))
                .sum()
        })
        .collect();
    let t = opts.tail / system.b;
    let len = opts.fft_len as i64;
    let mut z = Vec::with_capacity(opts.fft_len);
    let mut values = Vec::with_capacity(opts.fft_len);
    let mut max_imag: f64 = 0.0;
    for k in (-len / 2..len / 2).rev() {
        let u = PI * k as f64 / t;
        let v: Complex64 = quad
            .nodes
            .iter()
            .zip(&quad.weights)
            .zip(&f_hat)
            .map(|((&xi, &w), f)| Complex64::from_polar(w, -u * xi) * f)
            .sum();
        z.push(obs.x0 - u);
        values.push(v.re);
        max_imag = max_imag.max(v.im.abs());
    }
    Ok(CutoffEstimate {
        n,
        d,
        sigma,
        reconstruction: Reconstruction {
            z,
            values,
            max_imag,
        },
    })
}

/// [`adaptive_from_coefficients`] on the prolate system, with the same
/// penalty `Σ(N)`.
pub fn pswf_adaptive_n(
    obs: &ObservationWindow,
    system: &PswfSystem,
    sign: PenaltySign,
) -> Result<AdaptiveChoice> {
    check_window(obs, system.c)?;
    let nm = n_max(obs.delta);
    check_trusted(system.basis.trusted, nm)?;
    if nm >= system.basis.len() {
        return Err(invalid(format!(
            "prolate basis holds {} functions",
            system.basis.len()
        )));
    }
    let d: Vec<f64> = system.basis.coeffs[..=nm]
        .iter()
        .map(|g| project(obs, g))
        .collect();
    let params = OperatorParams::new(system.b, system.c)?;
    adaptive_from_coefficients(params, obs.delta, &d, &system.sigma[..=nm], sign)
}

/// How the truncation level is picked for each noise level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NRule {
    Adaptive(PenaltySign),
    Fixed(usize),
    /// `⌊ln(1/δ)/(2β(c/b))⌋`.
    LogRate,
    /// `⌊ln(1/δ)/(κ + β(c/b))⌋`.
    ExpRate(f64),
}

impl NRule {
    /// Level for noise `delta`, `None` for the adaptive rule.
    pub fn level(self, params: OperatorParams, delta: f64) -> Option<usize> {
        let l = (1.0 / delta).ln();
        let b = beta(params.ratio());
        match self {
            NRule::Adaptive(_) => None,
            NRule::Fixed(n) => Some(n),
            NRule::LogRate => Some((l / (2.0 * b)).floor().max(0.0) as usize),
            NRule::ExpRate(kappa) => Some((l / (kappa + b)).floor().max(0.0) as usize),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub delta: f64,
    pub n: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSweep {
    pub case: BuiltinCase,
    pub rule: NRule,
    pub rows: Vec<RateRow>,
    /// Least-squares slope of `log error` against `log δ`.
    pub slope: f64,
}

/// Largest level any rule needs over `deltas`.
pub fn levels_needed(params: OperatorParams, deltas: &[f64], rule: NRule) -> usize {
    deltas
        .iter()
        .map(|&d| rule.level(params, d).unwrap_or_else(|| n_max(d)))
        .max()
        .unwrap_or(0)
}

/// Runs the estimator on a benchmark case for each noise level.
pub fn rate_sweep(
    case: BuiltinCase,
    deltas: &[f64],
    rule: NRule,
    svd: &Svd,
    window_nodes: usize,
    opts: &ExtrapolationOptions,
) -> Result<RateSweep> {
    if deltas.is_empty() {
        return Err(invalid("empty noise list"));
    }
    if deltas.iter().any(|&d| !(d > 0.0 && d <= 0.5)) {
        return Err(invalid("noise levels must lie in (0, 0.5]"));
    }
    if deltas.windows(2).any(|w| w[1] > w[0]) {
        return Err(invalid("noise levels must be nonincreasing"));
    }
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let (obs, _) = builtin_case(case, Some(delta), window_nodes)?;
        let n = match rule.level(svd.params, delta) {
            Some(n) => n,
            None => {
                let NRule::Adaptive(sign) = rule else {
                    unreachable!()
                };
                adaptive_n(&obs, svd, sign)?.n_hat
            }
        };
        let est = cutoff_estimate(&obs, svd, n, opts)?;
        let error = est
            .reconstruction
            .l2_error(|x| case.truth(x), obs.x0, opts.report_half_width);
        rows.push(RateRow { delta, n, error });
    }
    let slope = log_log_slope(&rows);
    Ok(RateSweep {
        case,
        rule,
        rows,
        slope,
    })
}

fn log_log_slope(rows: &[RateRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta.ln(), r.error.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return f64::NAN;
    }
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx
}
