//! Conformal maps, Sinc points, Poly-Sinc points, and Sinc quadrature:
//! the trapezoid rule in the mapped variable,
//! ∫ f ≈ h Σ f(x_k)/φ'(x_k) with x_k = φ⁻¹(kh).
//!
//! Map inverses return the distances to the interval endpoints alongside x
//! itself; near the endpoints those distances underflow the plain
//! subtraction x - a long before they underflow f64, and singular weights
//! need them.

use crate::error::{Error, Result};
use crate::families::{FamilySpec, NodeSet};
use serde::{Deserialize, Serialize};

/// One-to-one map φ from the interval onto the real line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum ConformalMap {
    /// φ(x) = x on ℝ.
    Identity,
    /// φ(x) = log((x-a)/(b-x)) on (a, b).
    LogFinite { a: f64, b: f64 },
    /// φ(x) = log(x-a) on (a, ∞).
    LogSemi { a: f64 },
    /// φ(x) = log(sinh(x-a)) on (a, ∞); linear far field for exponentially
    /// decaying integrands.
    SinhLogSemi { a: f64 },
}

/// A quadrature point with numerically stable endpoint distances.
/// `dist_lo` is x minus the lower endpoint (infinite for ℝ), `dist_hi`
/// the upper endpoint minus x (infinite unless the interval is finite).
#[derive(Clone, Copy, Debug)]
pub struct QuadPoint {
    pub x: f64,
    pub dist_lo: f64,
    pub dist_hi: f64,
}

impl ConformalMap {
    pub fn forward(&self, x: f64) -> f64 {
        match *self {
            ConformalMap::Identity => x,
            ConformalMap::LogFinite { a, b } => ((x - a) / (b - x)).ln(),
            ConformalMap::LogSemi { a } => (x - a).ln(),
            ConformalMap::SinhLogSemi { a } => log_sinh(x - a),
        }
    }

    /// `forward` evaluated from the stable endpoint distances of a
    /// `QuadPoint`; near the endpoints the distances carry precision that
    /// the point x itself has already lost to rounding.
    pub fn forward_point(&self, p: &QuadPoint) -> f64 {
        match *self {
            ConformalMap::Identity => p.x,
            ConformalMap::LogFinite { .. } => (p.dist_lo / p.dist_hi).ln(),
            ConformalMap::LogSemi { .. } => p.dist_lo.ln(),
            ConformalMap::SinhLogSemi { .. } => log_sinh(p.dist_lo),
        }
    }

    pub fn inverse(&self, t: f64) -> QuadPoint {
        match *self {
            ConformalMap::Identity => QuadPoint {
                x: t,
                dist_lo: f64::INFINITY,
                dist_hi: f64::INFINITY,
            },
            ConformalMap::LogFinite { a, b } => {
                let len = b - a;
                // both distances formed without cancellation
                let (dist_lo, dist_hi) = if t <= 0.0 {
                    let e = t.exp();
                    (len * e / (1.0 + e), len / (1.0 + e))
                } else {
                    let e = (-t).exp();
                    (len / (1.0 + e), len * e / (1.0 + e))
                };
                let x = if t <= 0.0 { a + dist_lo } else { b - dist_hi };
                QuadPoint {
                    x,
                    dist_lo,
                    dist_hi,
                }
            }
            ConformalMap::LogSemi { a } => {
                let d = t.exp();
                QuadPoint {
                    x: a + d,
                    dist_lo: d,
                    dist_hi: f64::INFINITY,
                }
            }
            ConformalMap::SinhLogSemi { a } => {
                let d = t.exp().asinh();
                QuadPoint {
                    x: a + d,
                    dist_lo: d,
                    dist_hi: f64::INFINITY,
                }
            }
        }
    }

    /// 1/φ' evaluated from the stable distances.
    pub fn inv_derivative(&self, p: &QuadPoint) -> f64 {
        match *self {
            ConformalMap::Identity => 1.0,
            ConformalMap::LogFinite { a, b } => p.dist_lo * p.dist_hi / (b - a),
            ConformalMap::LogSemi { .. } => p.dist_lo,
            ConformalMap::SinhLogSemi { .. } => p.dist_lo.tanh(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConformalMap::Identity => "identity",
            ConformalMap::LogFinite { .. } => "log-finite",
            ConformalMap::LogSemi { .. } => "log-semi",
            ConformalMap::SinhLogSemi { .. } => "sinh-log-semi",
        }
    }
}

/// One-sided count N, step h (default π/√N), and the map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub n: usize,
    pub h: f64,
    pub map: ConformalMap,
}

impl QuadratureConfig {
    pub fn with_default_step(n: usize, map: ConformalMap) -> Self {
        QuadratureConfig {
            n,
            h: default_step(n),
            map,
        }
    }

    pub fn total_points(&self) -> usize {
        2 * self.n + 1
    }
}

/// h = π/√N of the Sinc quadrature error balance.
pub fn default_step(n: usize) -> f64 {
    std::f64::consts::PI / (n.max(1) as f64).sqrt()
}

/// ln(sinh d) without overflow for large d.
fn log_sinh(d: f64) -> f64 {
    if d > 30.0 {
        d - std::f64::consts::LN_2 + (-(-2.0 * d).exp()).ln_1p()
    } else {
        d.sinh().ln()
    }
}

/// The 2N+1 strictly increasing Sinc points φ⁻¹(kh), k = -N..N.
pub fn sinc_nodes(cfg: &QuadratureConfig) -> Vec<f64> {
    sinc_points(cfg).map(|p| p.x).collect()
}

pub fn sinc_points(cfg: &QuadratureConfig) -> impl Iterator<Item = QuadPoint> + '_ {
    let n = cfg.n as i64;
    (-n..=n).map(move |k| cfg.map.inverse(k as f64 * cfg.h))
}

/// h Σ f(x_k)/φ'(x_k), summed ascending in k for reproducibility.
pub fn sinc_quad(f: impl Fn(f64) -> f64, cfg: &QuadratureConfig) -> Result<f64> {
    sinc_quad_points(|p: &QuadPoint| f(p.x), cfg)
}

/// Same rule, but the integrand sees the stable endpoint distances. Terms
/// whose 1/φ' underflowed to zero are skipped without evaluating f.
pub fn sinc_quad_points(
    f: impl Fn(&QuadPoint) -> f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let mut acc = 0.0;
    let n = cfg.n as i64;
    for k in -n..=n {
        let p = cfg.map.inverse(k as f64 * cfg.h);
        let w = cfg.map.inv_derivative(&p);
        if w == 0.0 {
            continue;
        }
        let v = f(&p);
        if !v.is_finite() {
            return Err(Error::OutOfDomain(format!(
                "integrand non-finite at sinc node x = {} (k = {k})",
                p.x
            )));
        }
        acc += v * w;
    }
    Ok(cfg.h * acc)
}

/// Error-versus-N record for an integrand with a known exact value, plus the
/// least-squares fit of log(err/√N) against √N (Theorem-4 decay model,
/// slope ≈ -√(απ)).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadErrorCurve {
    pub points: Vec<(usize, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn quad_error_curve(
    f: impl Fn(f64) -> f64,
    exact: f64,
    map: ConformalMap,
    n_list: &[usize],
) -> Result<QuadErrorCurve> {
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let cfg = QuadratureConfig::with_default_step(n, map);
        let got = sinc_quad(&f, &cfg)?;
        points.push((n, (got - exact).abs()));
    }
    // fit log(err/sqrt(N)) = intercept + slope * sqrt(N), skipping exact zeros
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, e)| e > 0.0)
        .map(|&(n, e)| ((n as f64).sqrt(), (e / (n as f64).sqrt()).ln()))
        .collect();
    let (slope, intercept, r_squared) = least_squares_line(&xy);
    Ok(QuadErrorCurve {
        points,
        slope,
        intercept,
        r_squared,
    })
}

/// Returns (slope, intercept, r²) of the least-squares line; degenerate
/// inputs give zeros.
pub fn least_squares_line(xy: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = xy.len() as f64;
    if xy.len() < 2 {
        return (0.0, xy.first().map_or(0.0, |p| p.1), 0.0);
    }
    let sx: f64 = xy.iter().map(|p| p.0).sum();
    let sy: f64 = xy.iter().map(|p| p.1).sum();
    let sxx: f64 = xy.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = xy.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return (0.0, sy / n, 0.0);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = xy.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = xy
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (slope, intercept, r_squared)
}

/// Poly-Sinc points x_k = (b e^{kh} + a)/(1 + e^{kh}), k = -M..N, with
/// h = π/√N (π/√M when N = 0; h = π for the single midpoint).
pub fn polysinc_nodes(a: f64, b: f64, m_neg: usize, n_pos: usize) -> Result<NodeSet> {
    if a >= b {
        return Err(Error::InvalidParameter(format!(
            "polysinc needs a < b (got a={a}, b={b})"
        )));
    }
    let h = if n_pos > 0 {
        default_step(n_pos)
    } else if m_neg > 0 {
        default_step(m_neg)
    } else {
        std::f64::consts::PI
    };
    let map = ConformalMap::LogFinite { a, b };
    let nodes: Vec<f64> = (-(m_neg as i64)..=n_pos as i64)
        .map(|k| map.inverse(k as f64 * h).x)
        .collect();
    for w in nodes.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidParameter(format!(
                "polysinc nodes collapsed near {}; M+N too large for the step",
                w[0]
            )));
        }
    }
    Ok(NodeSet {
        nodes,
        gauss_weights: None,
        family: FamilySpec::PolySinc,
    })
}
