//! Singular triplets `(σ_m, φ_m, g_m)` of `F_{b,c}` assembled from the
//! Nyström and commuting-ODE spectra of `Q_{c/b}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::commuting_ode::{default_basis_size, galerkin_eigensystem};
use crate::error::{invalid, Error, Result};
use crate::sech_operator::{
    adjoint_legendre, nystrom_eigensystem, rho_rayleigh, OperatorParams, Parity, SampledFunction,
};
use crate::special_functions::{gauss_legendre, LegendreSeries, QuadratureGrid};

/// Where an eigenpair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Nystrom,
    Galerkin,
}

/// One eigenpair of `Q_c`.
#[derive(Debug, Clone)]
pub struct SpectralPair {
    pub m: usize,
    pub rho: f64,
    /// Unit-norm Legendre series, `g(1) > 0`.
    pub g: LegendreSeries,
    pub route: Route,
    pub trusted: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectrumOptions {
    /// Nyström grid size for the fallback; default `max(200, 20(m_max+1))`.
    pub n_nystrom: Option<usize>,
    /// Galerkin basis size; default [`default_basis_size`].
    pub n_basis: Option<usize>,
}

/// Smallest `ρ_m/ρ_0` reported as trusted on the ODE route. Rayleigh
/// quotients carry an error of order `ε²ρ_0`.
pub const RAYLEIGH_FLOOR: f64 = 1e-24;

/// Eigenpairs `0..=m_max` of `Q_c`: eigenfunctions of the commuting ODE with
/// Rayleigh quotients for `ρ_m`. When the Galerkin basis cannot resolve the
/// ODE, the Nyström spectrum is used instead, trusted above `1e3·ε·ρ_0`.
pub fn sech_spectrum(c: f64, m_max: usize, opts: &SpectrumOptions) -> Result<Vec<SpectralPair>> {
    let n_b = opts.n_basis.unwrap_or_else(|| default_basis_size(m_max));
    match galerkin_eigensystem(c, n_b, m_max) {
        Ok(ode) => {
            let mut out: Vec<SpectralPair> = Vec::with_capacity(m_max + 1);
            for m in 0..=m_max {
                let g = ode.eigenfunction_series(m)?;
                let rho = rho_rayleigh(c, &g)?;
                let rho0 = out.first().map_or(rho, |p| p.rho);
                out.push(SpectralPair {
                    m,
                    rho,
                    g,
                    route: Route::Galerkin,
                    trusted: rho >= RAYLEIGH_FLOOR * rho0,
                });
            }
            Ok(out)
        }
        Err(Error::Resolution(msg)) => {
            log::warn!("commuting ODE unresolved ({msg}); using the Nyström spectrum");
            let n = opts.n_nystrom.unwrap_or_else(|| 200.max(20 * (m_max + 1)));
            let nys = nystrom_eigensystem(c, n, m_max)?;
            Ok((0..=m_max)
                .map(|m| SpectralPair {
                    m,
                    rho: nys.rho[m],
                    g: nys
                        .eigenfunction_series(m)
                        .expect("eigenfunction within m_max"),
                    route: Route::Nystrom,
                    trusted: nys.is_trusted(m),
                })
                .collect())
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvdOptions {
    pub spectrum: SpectrumOptions,
    /// Smallest truncation of the φ grid, `T = tail / b`. It is raised to
    /// [`phi_tail`] of `m_max` when that is larger.
    pub tail: f64,
    /// Gauss nodes per panel of the φ grid.
    pub per_panel: usize,
    /// Nodes of the Gauss grid on which `g` is sampled.
    pub g_nodes: usize,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            spectrum: SpectrumOptions::default(),
            tail: 22.0,
            per_panel: 16,
            g_nodes: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SvdTriplet {
    pub m: usize,
    pub sigma: f64,
    pub rho: f64,
    pub g: SampledFunction,
    pub g_series: LegendreSeries,
    pub phi: SampledFunction,
    pub trusted: bool,
    pub route: Route,
    pub parity: Parity,
}

/// The leading part of the SVD of `F_{b,c}`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub params: OperatorParams,
    pub triplets: Vec<SvdTriplet>,
    pub phi_grid: QuadratureGrid,
}

/// Tail in `u = bx` past which the weighted mass of `φ_m`, `m ≤ m_max`, is
/// negligible. For small `c/b` that mass behaves like `u^{2m} e^{−u}`.
pub fn phi_tail(m_max: usize) -> f64 {
    40.0 + 3.0 * m_max as f64
}

/// Symmetric grid in `u = bx` on `(−tail, tail)`: panels growing
/// geometrically from the origin, capped at a width resolving `e^{i(c/b)u}`.
/// Returned in the `x` variable.
pub fn phi_grid(params: OperatorParams, tail: f64, per_panel: usize) -> Result<QuadratureGrid> {
    let ratio = params.ratio();
    let cap = 1.0f64.min(2.0 / ratio);
    let mut breaks = vec![0.0];
    let mut w = 0.25 * cap;
    while *breaks.last().expect("nonempty") < tail {
        let next = (breaks.last().expect("nonempty") + w).min(tail);
        breaks.push(next);
        w = (w * 1.25).min(cap);
    }
    let mut full: Vec<f64> = breaks.iter().rev().map(|u| -u).collect();
    full.extend_from_slice(&breaks[1..]);
    let mut grid = QuadratureGrid::composite(&full, per_panel)?;
    let b = params.b;
    for x in grid.nodes.iter_mut() {
        *x /= b;
    }
    for w in grid.weights.iter_mut() {
        *w /= b;
    }
    grid.lo /= b;
    grid.hi /= b;
    Ok(grid)
}

impl Svd {
    pub fn len(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triplets.is_empty()
    }

    /// Number of leading trusted triplets.
    pub fn trusted_len(&self) -> usize {
        self.triplets.iter().take_while(|t| t.trusted).count()
    }

    /// `φ_m(x)` from the closed form of the adjoint.
    pub fn phi_at(&self, m: usize, x: f64) -> Complex64 {
        let t = &self.triplets[m];
        adjoint_legendre(self.params, &t.g_series, x) / t.sigma
    }

    /// `‖φ_m‖²` in `L²(cosh(b·))` by the grid rule.
    pub fn phi_norm_sq(&self, m: usize) -> f64 {
        let b = self.params.b;
        self.triplets[m].phi.weighted_norm_sq(|x| (b * x).cosh())
    }

    /// `⟨φ_i, φ_j⟩` in `L²(cosh(b·))`.
    pub fn phi_inner(&self, i: usize, j: usize) -> Complex64 {
        let b = self.params.b;
        self.triplets[i]
            .phi
            .weighted_inner(&self.triplets[j].phi, |x| (b * x).cosh())
            .expect("shared grid")
    }
}

/// Singular triplets `m = 0..=m_max` of `F_{b,c}`: `σ_m = √(ρ_m^{c/b}/c)`,
/// `φ_m = F*_{b,c} g_m^{c/b} / σ_m`.
pub fn compute_svd(params: OperatorParams, m_max: usize, opts: &SvdOptions) -> Result<Svd> {
    let spectrum = sech_spectrum(params.ratio(), m_max, &opts.spectrum)?;
    let grid = phi_grid(params, opts.tail.max(phi_tail(m_max)), opts.per_panel)?;
    let g_grid = gauss_legendre(opts.g_nodes, (-1.0, 1.0))?;
    let triplets = spectrum
        .into_iter()
        .map(|pair| {
            if !pair.trusted {
                log::warn!("singular value {} is below the trusted range", pair.m);
            }
            let sigma = (pair.rho / params.c).sqrt();
            let phi = SampledFunction::from_fn(grid.clone(), |x| {
                adjoint_legendre(params, &pair.g, x) / sigma
            });
            let g =
                SampledFunction::from_fn(g_grid.clone(), |x| Complex64::new(pair.g.eval(x), 0.0));
            SvdTriplet {
                m: pair.m,
                sigma,
                rho: pair.rho,
                g,
                g_series: pair.g,
                phi,
                trusted: pair.trusted,
                route: pair.route,
                parity: Parity::of_index(pair.m),
            }
        })
        .collect();
    Ok(Svd {
        params,
        triplets,
        phi_grid: grid,
    })
}

/// Maps a triplet of `F_{1,c/b}` to one of `F_{b,c}` through
/// `φ^{b,c}(x) = φ^{1,c/b}(bx) √b`.
pub fn rescale_phi(b: f64, c: f64, source: &SvdTriplet) -> Result<SvdTriplet> {
    if !(b > 0.0 && c > 0.0) {
        return Err(invalid("rescaling needs positive b and c"));
    }
    let grid = &source.phi.grid;
    let new_grid = QuadratureGrid {
        nodes: grid.nodes.iter().map(|x| x / b).collect(),
        weights: grid.weights.iter().map(|w| w / b).collect(),
        lo: grid.lo / b,
        hi: grid.hi / b,
    };
    let sb = b.sqrt();
    let values = source.phi.values.iter().map(|v| v * sb).collect();
    Ok(SvdTriplet {
        sigma: source.sigma / sb,
        phi: SampledFunction::new(new_grid, values)?,
        ..source.clone()
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GDoc {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhiDoc {
    pub nodes: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EntryDoc {
    pub m: usize,
    pub sigma: f64,
    pub rho: f64,
    pub trusted: bool,
    pub g: GDoc,
    pub phi: PhiDoc,
}

/// Serialised form of an [`Svd`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SvdDocument {
    pub b: f64,
    pub c: f64,
    pub entries: Vec<EntryDoc>,
}

impl From<&Svd> for SvdDocument {
    fn from(svd: &Svd) -> Self {
        Self {
            b: svd.params.b,
            c: svd.params.c,
            entries: svd
                .triplets
                .iter()
                .map(|t| EntryDoc {
                    m: t.m,
                    sigma: t.sigma,
                    rho: t.rho,
                    trusted: t.trusted,
                    g: GDoc {
                        nodes: t.g.grid.nodes.clone(),
                        values: t.g.real_parts(),
                    },
                    phi: PhiDoc {
                        nodes: t.phi.grid.nodes.clone(),
                        re: t.phi.values.iter().map(|v| v.re).collect(),
                        im: t.phi.values.iter().map(|v| v.im).collect(),
                    },
                })
                .collect(),
        }
    }
}
