//! Quadrature, Legendre polynomials, the complete elliptic integral K and
//! spherical Bessel functions.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};

/// Nodes and positive weights of a quadrature rule on `(lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Applies the rule to `f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weighted sum of precomputed node values.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Concatenation of `per_panel`-point Gauss rules on consecutive panels.
    /// `breaks` must be strictly increasing.
    pub fn composite(breaks: &[f64], per_panel: usize) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(invalid("composite rule needs at least one panel"));
        }
        let unit = gauss_legendre(per_panel, (-1.0, 1.0))?;
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * per_panel);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if !(b > a) {
                return Err(invalid("panel breakpoints must be strictly increasing"));
            }
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (t, w) in unit.nodes.iter().zip(&unit.weights) {
                nodes.push(mid + half * t);
                weights.push(half * w);
            }
        }
        Ok(Self {
            nodes,
            weights,
            lo: breaks[0],
            hi: breaks[breaks.len() - 1],
        })
    }

    /// True when both grids carry the same nodes (bitwise).
    pub fn same_nodes(&self, other: &QuadratureGrid) -> bool {
        self.nodes.len() == other.nodes.len()
            && self
                .nodes
                .iter()
                .zip(&other.nodes)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// `P_n(x)` and `P_n'(x)` for the classical Legendre polynomial (`P_n(1) = 1`).
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The n-point Gauss–Legendre rule mapped affinely onto `(lo, hi)`.
///
/// Nodes are found by Newton iteration on `P_n` from Chebyshev-like starting
/// values and returned in increasing order.
pub fn gauss_legendre(n: usize, interval: (f64, f64)) -> Result<QuadratureGrid> {
    let (lo, hi) = interval;
    if n == 0 {
        return Err(invalid("Gauss-Legendre rule needs n >= 1"));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid(format!("invalid interval ({lo}, {hi})")));
    }
    let mut ref_nodes = vec![0.0; n];
    let mut ref_weights = vec![0.0; n];
    let nf = n as f64;
    // Positive half; the rest follows by symmetry.
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1e-3) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        if n % 2 == 1 && i == n / 2 {
            x = 0.0;
            dp = legendre_with_derivative(n, 0.0).1;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ref_nodes[n - 1 - i] = x;
        ref_weights[n - 1 - i] = w;
        ref_nodes[i] = -x;
        ref_weights[i] = w;
    }
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok(QuadratureGrid {
        nodes: ref_nodes.iter().map(|t| mid + half * t).collect(),
        weights: ref_weights.iter().map(|w| half * w).collect(),
        lo,
        hi,
    })
}

/// Value of the orthonormal Legendre polynomial `sqrt(m + 1/2) P_m(x)`.
pub fn legendre_normalized(m: usize, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(invalid(format!("Legendre argument {x} outside [-1, 1]")));
    }
    Ok(legendre_normalized_all(m, x)[m])
}

/// `[P̄_0(x), …, P̄_kmax(x)]`, orthonormal on `(-1, 1)`. No range check.
pub fn legendre_normalized_all(kmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut p0 = 1.0;
    out.push(p0 * 0.5f64.sqrt());
    if kmax == 0 {
        return out;
    }
    let mut p1 = x;
    out.push(p1 * 1.5f64.sqrt());
    for k in 2..=kmax {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
        out.push(p1 * (kf + 0.5).sqrt());
    }
    out
}

/// A finite expansion `Σ a_k P̄_k(x)` in orthonormal Legendre polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries {
    pub coeffs: Vec<f64>,
}

impl LegendreSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// Projects node values onto `P̄_0..P̄_kmax` using the grid's rule.
    /// The grid must live on `(-1, 1)`.
    pub fn project(grid: &QuadratureGrid, values: &[f64], kmax: usize) -> Self {
        let mut coeffs = vec![0.0; kmax + 1];
        for ((&x, &w), &v) in grid.nodes.iter().zip(&grid.weights).zip(values) {
            let basis = legendre_normalized_all(kmax, x);
            for (c, p) in coeffs.iter_mut().zip(&basis) {
                *c += w * v * p;
            }
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        legendre_normalized_all(self.degree(), x)
            .iter()
            .zip(&self.coeffs)
            .map(|(p, a)| p * a)
            .sum()
    }

    /// Value, first and second derivative. The second derivative uses the
    /// Legendre equation and is only valid for `|x| < 1`.
    pub fn eval_with_derivatives(&self, x: f64) -> (f64, f64, f64) {
        let kmax = self.degree();
        let mut value = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        // Classical P_k and P_k'.
        let (mut p0, mut p1) = (1.0, x);
        let (mut dp0, mut dp1) = (0.0, 1.0);
        let one_minus = 1.0 - x * x;
        for (k, &a) in self.coeffs.iter().enumerate() {
            let (p, dp) = match k {
                0 => (p0, dp0),
                1 => (p1, dp1),
                _ => {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    let dp2 = dp0 + (2.0 * kf - 1.0) * p1;
                    p0 = p1;
                    p1 = p2;
                    dp0 = dp1;
                    dp1 = dp2;
                    (p2, dp2)
                }
            };
            let kf = k as f64;
            let norm = (kf + 0.5).sqrt();
            let ddp = (2.0 * x * dp - kf * (kf + 1.0) * p) / one_minus;
            value += a * norm * p;
            d1 += a * norm * dp;
            d2 += a * norm * ddp;
            if k == kmax {
                break;
            }
        }
        (value, d1, d2)
    }
}

/// `K(k)` from the complementary modulus `k' = sqrt(1 - k^2)`, by the
/// arithmetic–geometric mean. Passing `k'` directly keeps full accuracy when
/// `k` is within rounding of 1.
pub fn elliptic_k_from_complement(kprime: f64) -> Result<f64> {
    if !(kprime > 0.0 && kprime <= 1.0) {
        return Err(Error::Domain(format!(
            "complementary modulus {kprime} outside (0, 1]"
        )));
    }
    let mut a = 1.0f64;
    let mut g = kprime;
    for _ in 0..64 {
        if (a - g).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + g);
        g = (a * g).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}

/// Complete elliptic integral of the first kind,
/// `K(k) = ∫_0^{π/2} (1 - k² sin² t)^{-1/2} dt`, for modulus `0 <= k < 1`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if k.is_nan() || k < 0.0 {
        return Err(invalid(format!("elliptic modulus {k} must be >= 0")));
    }
    if k >= 1.0 {
        return Err(Error::Domain(format!("K(k) diverges for k = {k} >= 1")));
    }
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    elliptic_k_from_complement(((1.0 - k) * (1.0 + k)).sqrt())
}

/// Spherical Bessel function `j_k(z)` by downward recurrence, normalised
/// against the closed forms of `j_0` or `j_1`.
pub fn spherical_bessel_ratio(k: usize, z: f64) -> f64 {
    spherical_bessel_j_all(k, z)[k]
}

/// `[j_0(z), …, j_kmax(z)]` by Miller's downward recurrence.
///
/// The recurrence starts at order `kmax + ⌈20 + |z|⌉`. Negative arguments use
/// `j_k(-z) = (-1)^k j_k(z)`.
pub fn spherical_bessel_j_all(kmax: usize, z: f64) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let az = z.abs();
    let start = kmax + (20.0 + az).ceil() as usize;
    let mut next = 0.0f64; // j_{k+1}
    let mut cur = 1e-280f64; // j_k, arbitrary scale
    for k in (1..=start).rev() {
        if k <= kmax {
            out[k] = cur;
        }
        let prev = (2.0 * k as f64 + 1.0) / az * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e200 {
            let s = 1e-200;
            cur *= s;
            next *= s;
            for v in out.iter_mut().skip(k.min(kmax + 1)) {
                *v *= s;
            }
        }
    }
    out[0] = cur;
    let (s, c) = az.sin_cos();
    let j0 = s / az;
    let j1 = (s / az - c) / az;
    let scale = if j0.abs() >= j1.abs() || kmax == 0 {
        j0 / out[0]
    } else {
        j1 / out[1]
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
    // Closed forms are exact for the two lowest orders.
    out[0] = j0;
    if kmax >= 1 {
        out[1] = if az < 1e-3 {
            // Series avoids cancellation in (sin z / z - cos z) / z.
            let z2 = az * az;
            az / 3.0 * (1.0 - z2 / 10.0 * (1.0 - z2 / 28.0))
        } else {
            j1
        };
    }
    if z < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// Upward recurrence from the closed forms of `j_0` and `j_1`. Only stable
/// for `|z|` comparable to or above the order.
pub fn spherical_bessel_j_upward(kmax: usize, z: f64) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let (s, c) = z.sin_cos();
    out[0] = s / z;
    if kmax >= 1 {
        out[1] = (s / z - c) / z;
    }
    for k in 1..kmax {
        out[k + 1] = (2.0 * k as f64 + 1.0) / z * out[k] - out[k - 1];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_and_two_point_rules() {
        let g1 = gauss_legendre(1, (-1.0, 1.0)).unwrap();
        assert_eq!(g1.nodes, vec![0.0]);
        assert!((g1.weights[0] - 2.0).abs() < 1e-15);

        let g2 = gauss_legendre(2, (-1.0, 1.0)).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((g2.nodes[0] + r).abs() < 1e-15);
        assert!((g2.nodes[1] - r).abs() < 1e-15);
        assert!((g2.weights[0] - 1.0).abs() < 1e-15);
        assert!((g2.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn four_point_rule_integrates_x6() {
        let g = gauss_legendre(4, (-1.0, 1.0)).unwrap();
        let v = g.integrate(|x| x.powi(6));
        assert!((v - 2.0 / 7.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn invalid_rules_rejected() {
        assert!(matches!(
            gauss_legendre(0, (-1.0, 1.0)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            gauss_legendre(5, (1.0, 1.0)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            gauss_legendre(5, (2.0, -1.0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn grid_invariants_hold_for_large_rules() {
        for &n in &[3usize, 64, 257, 2048] {
            let g = gauss_legendre(n, (-3.0, 5.0)).unwrap();
            assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(g.nodes.iter().all(|&x| x > -3.0 && x < 5.0));
            assert!(g.weights.iter().all(|&w| w > 0.0));
            let total: f64 = g.weights.iter().sum();
            assert!((total - 8.0).abs() < 8.0 * 1e-12, "n={n} total={total}");
        }
    }

    #[test]
    fn exact_up_to_degree_2n_minus_1() {
        for n in 1..=30usize {
            let g = gauss_legendre(n, (-1.0, 1.0)).unwrap();
            for d in 0..2 * n {
                let v = g.integrate(|x| x.powi(d as i32));
                let exact = if d % 2 == 1 {
                    0.0
                } else {
                    2.0 / (d as f64 + 1.0)
                };
                assert!((v - exact).abs() < 1e-12, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn normalized_legendre_values() {
        for &x in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert!((legendre_normalized(0, x).unwrap() - 0.5f64.sqrt()).abs() < 1e-16);
        }
        assert!((legendre_normalized(1, 1.0).unwrap() - 1.5f64.sqrt()).abs() < 1e-15);
        assert!(legendre_normalized(3, 1.0000001).is_err());
    }

    #[test]
    fn legendre_matches_closed_forms() {
        for i in 0..20 {
            let x = -1.0 + 2.0 * i as f64 / 19.0;
            let closed = [
                1.0,
                x,
                0.5 * (3.0 * x * x - 1.0),
                0.5 * (5.0 * x * x * x - 3.0 * x),
            ];
            for (m, p) in closed.iter().enumerate() {
                let expect = p * (m as f64 + 0.5).sqrt();
                let got = legendre_normalized(m, x).unwrap();
                assert!((got - expect).abs() < 1e-13, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn legendre_orthonormal_under_gauss_rule() {
        let g = gauss_legendre(64, (-1.0, 1.0)).unwrap();
        let table: Vec<Vec<f64>> = g
            .nodes
            .iter()
            .map(|&x| legendre_normalized_all(20, x))
            .collect();
        for j in 0..=20 {
            for k in 0..=20 {
                let ip: f64 = table
                    .iter()
                    .zip(&g.weights)
                    .map(|(row, w)| w * row[j] * row[k])
                    .sum();
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-13, "j={j} k={k} ip={ip}");
            }
        }
    }

    #[test]
    fn series_derivatives_match_finite_differences() {
        let s = LegendreSeries::new(vec![0.3, -0.2, 0.5, 0.1, -0.05, 0.02]);
        for &x in &[-0.8, -0.1, 0.4, 0.85] {
            let (v, d1, d2) = s.eval_with_derivatives(x);
            assert!((v - s.eval(x)).abs() < 1e-14);
            let h = 1e-5;
            let fd1 = (s.eval(x + h) - s.eval(x - h)) / (2.0 * h);
            let fd2 = (s.eval(x + h) - 2.0 * v + s.eval(x - h)) / (h * h);
            assert!((d1 - fd1).abs() < 1e-8, "{d1} {fd1}");
            assert!((d2 - fd2).abs() < 1e-4, "{d2} {fd2}");
        }
    }

    #[test]
    fn projection_recovers_coefficients() {
        let g = gauss_legendre(40, (-1.0, 1.0)).unwrap();
        let s = LegendreSeries::new(vec![0.1, 0.0, -0.7, 0.25, 0.0, 0.3]);
        let vals: Vec<f64> = g.nodes.iter().map(|&x| s.eval(x)).collect();
        let back = LegendreSeries::project(&g, &vals, 8);
        for (k, c) in back.coeffs.iter().enumerate() {
            let expect = s.coeffs.get(k).copied().unwrap_or(0.0);
            assert!((c - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn elliptic_k_basics() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert!(matches!(elliptic_k(1.0), Err(Error::Domain(_))));
        assert!(matches!(elliptic_k(1.5), Err(Error::Domain(_))));
        let grid: Vec<f64> = (0..50).map(|i| 0.02 * i as f64).chain([0.99]).collect();
        let vals: Vec<f64> = grid.iter().map(|&k| elliptic_k(k).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
        // K(1/sqrt 2) = Γ(1/4)² / (4 sqrt(π))
        let gamma_quarter = 3.625_609_908_221_908_f64;
        let expect = gamma_quarter * gamma_quarter / (4.0 * PI.sqrt());
        let got = elliptic_k(0.5f64.sqrt()).unwrap();
        assert!((got - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn complement_form_agrees_near_one() {
        let c = 4.0f64;
        let k = (PI * c).tanh();
        let kp = 1.0 / (PI * c).cosh();
        let a = elliptic_k_from_complement(kp).unwrap();
        // ln(4/k') asymptotics with first correction.
        let approx = (4.0 / kp).ln() + kp * kp / 4.0 * ((4.0 / kp).ln() - 1.0);
        assert!((a - approx).abs() < 1e-12, "{a} {approx}");
        assert!(k < 1.0);
    }

    #[test]
    fn spherical_bessel_basics() {
        assert!(spherical_bessel_ratio(0, PI).abs() < 1e-14);
        let z = 1e-4;
        let j1 = spherical_bessel_ratio(1, z);
        assert!(((j1 - z / 3.0) / (z / 3.0)).abs() < 1e-6);
        assert_eq!(spherical_bessel_j_all(3, 0.0), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn downward_matches_upward_where_stable() {
        for k in 0..=12usize {
            for &z in &[2.0 * k as f64 + 0.5, 30.0, 57.3] {
                if z < 2.0 * k as f64 {
                    continue;
                }
                let down = spherical_bessel_j_all(k, z)[k];
                let up = spherical_bessel_j_upward(k, z)[k];
                assert!(
                    (down - up).abs() <= 1e-9 * up.abs().max(1e-300),
                    "k={k} z={z}"
                );
            }
        }
    }

    #[test]
    fn bessel_parity_for_negative_argument() {
        let pos = spherical_bessel_j_all(6, 2.3);
        let neg = spherical_bessel_j_all(6, -2.3);
        for k in 0..=6 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((neg[k] - sign * pos[k]).abs() < 1e-16);
        }
    }

    #[test]
    fn bessel_small_argument_series() {
        // j_k(z) ≈ z^k / (2k+1)!! for small z
        let z = 1e-3;
        let all = spherical_bessel_j_all(8, z);
        let mut dfact = 1.0;
        for (k, &v) in all.iter().enumerate() {
            dfact *= 2.0 * k as f64 + 1.0;
            let approx = z.powi(k as i32) / dfact;
            assert!(((v - approx) / approx).abs() < 1e-6, "k={k}");
        }
    }
}
