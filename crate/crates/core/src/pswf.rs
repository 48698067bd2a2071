//! Prolate spheroidal wave functions `ψ_m` on `(-1, 1)` from their Legendre
//! coefficients, the singular values `μ_m` of
//! `F_c^W: f ↦ ∫_{-1}^{1} e^{icxt} f(t) dt`, and adjoint images.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen;
use crate::sech_operator::fourier_legendre;
use crate::special_functions::{gauss_legendre, LegendreSeries};

#[derive(Debug, Clone)]
pub struct PswfBasis {
    pub c: f64,
    /// Normalised Legendre coefficients of `ψ_m`, `ψ_m(1) > 0`.
    pub coeffs: Vec<LegendreSeries>,
    /// Eigenvalues of the commuting differential operator, increasing.
    pub chi: Vec<f64>,
    /// Decreasing.
    pub mu: Vec<f64>,
    /// Number of leading `μ_m` above `1e-12·μ_0`.
    pub trusted: usize,
}

/// Entries of the prolate operator `−((1−x²)ψ')' + c²x²ψ` in the normalised
/// Legendre basis: diagonal at `k` and coupling `(k, k+2)`.
fn prolate_entries(c: f64, k: usize) -> (f64, f64) {
    let kf = k as f64;
    let c2 = c * c;
    let diag = kf * (kf + 1.0)
        + c2 * (2.0 * kf * (kf + 1.0) - 1.0) / ((2.0 * kf + 3.0) * (2.0 * kf - 1.0));
    let off = c2 * (kf + 2.0) * (kf + 1.0)
        / ((2.0 * kf + 3.0) * ((2.0 * kf + 1.0) * (2.0 * kf + 5.0)).sqrt());
    (diag, off)
}

/// `ψ_0..=ψ_{m_max}` from a Legendre basis of size `n_b`, split into the two
/// parity blocks.
pub fn pswf_basis(c: f64, m_max: usize, n_b: usize) -> Result<PswfBasis> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "c must be positive, got {c}"
        )));
    }
    if n_b < 2 * m_max + 16 {
        return Err(Error::Resolution(format!(
            "prolate basis of {n_b} too small for m_max = {m_max}"
        )));
    }
    let mut all: Vec<(f64, LegendreSeries)> = Vec::with_capacity(n_b);
    for parity in 0..2usize {
        let ks: Vec<usize> = (parity..n_b).step_by(2).collect();
        let diag: Vec<f64> = ks.iter().map(|&k| prolate_entries(c, k).0).collect();
        let off: Vec<f64> = ks[..ks.len() - 1]
            .iter()
            .map(|&k| prolate_entries(c, k).1)
            .collect();
        let eig = tridiagonal_eigen(&diag, &off)?;
        for (chi, v) in eig.values.into_iter().zip(eig.vectors) {
            let mut coeffs = vec![0.0; n_b];
            for (&k, a) in ks.iter().zip(&v) {
                coeffs[k] = *a;
            }
            let mut s = LegendreSeries::new(coeffs);
            if s.eval(1.0) < 0.0 {
                s.coeffs.iter_mut().for_each(|a| *a = -*a);
            }
            all.push((chi, s));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.truncate(m_max + 1);
    let quad = gauss_legendre(64 + (2.0 * c).ceil() as usize, (-1.0, 1.0))?;
    let mu: Vec<f64> = all
        .iter()
        .map(|(_, s)| {
            quad.integrate(|x| fourier_legendre(s, -c * x).norm_sqr())
                .sqrt()
        })
        .collect();
    let trusted = mu.iter().take_while(|&&m| m > 1e-12 * mu[0]).count();
    Ok(PswfBasis {
        c,
        chi: all.iter().map(|e| e.0).collect(),
        coeffs: all.into_iter().map(|e| e.1).collect(),
        mu,
        trusted,
    })
}

/// Default Legendre basis size for [`pswf_basis`].
pub fn default_basis_size(c: f64, m_max: usize) -> usize {
    2 * m_max + 32 + 2 * c.ceil() as usize
}

impl PswfBasis {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, m: usize, x: f64) -> f64 {
        self.coeffs[m].eval(x)
    }
}

/// `((F_c^W)* ψ_m)(x) = ∫_{-1}^{1} e^{-icxt} ψ_m(t) dt` at each `x`.
pub fn pswf_adjoint_image(basis: &PswfBasis, m: usize, xs: &[f64]) -> Result<Vec<Complex64>> {
    let s = basis
        .coeffs
        .get(m)
        .ok_or_else(|| Error::InvalidArgument(format!("index {m} beyond the basis")))?;
    Ok(xs
        .iter()
        .map(|&x| fourier_legendre(s, -basis.c * x))
        .collect())
}

/// Singular system of `Φ ↦ ∫_{-1/b}^{1/b} e^{icyx} Φ(x) dx` from `L²(−1/b, 1/b)`
/// to `L²(−1, 1)`, built from the prolate basis with parameter `c/b`:
/// `σ_m = √((c/b) μ_m² / c)`, `Φ_m(x) = ((F_{c/b}^W)* ψ_m)(bx) / σ_m`.
#[derive(Debug, Clone)]
pub struct PswfSystem {
    pub b: f64,
    pub c: f64,
    pub basis: PswfBasis,
    pub sigma: Vec<f64>,
}

impl PswfSystem {
    pub fn new(b: f64, c: f64, m_max: usize) -> Result<Self> {
        if !(b > 0.0 && c > 0.0) {
            return Err(Error::InvalidArgument("b and c must be positive".into()));
        }
        let cp = c / b;
        let basis = pswf_basis(cp, m_max, default_basis_size(cp, m_max))?;
        let sigma = basis
            .mu
            .iter()
            .map(|mu| (cp * mu * mu / c).sqrt())
            .collect();
        Ok(Self { b, c, basis, sigma })
    }

    /// `Φ_m(x)`, zero outside `[−1/b, 1/b]`.
    pub fn phi_at(&self, m: usize, x: f64) -> Complex64 {
        if x.abs() > 1.0 / self.b {
            return Complex64::new(0.0, 0.0);
        }
        fourier_legendre(&self.basis.coeffs[m], -self.basis.c * self.b * x) / self.sigma[m]
    }
}
