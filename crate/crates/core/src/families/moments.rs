//! Moments M_k = ∫ ξ(x) x^k dx: closed forms for the classical weights,
//! Sinc-quadrature fallback for custom weights.

use super::{FamilySpec, Interval, WeightSpec};
use crate::error::{Error, Result};
use crate::sinc::{sinc_quad, ConformalMap, QuadratureConfig};

/// k-th moment of the weight over the interval. Classical weights use exact
/// Beta/Gamma identities; custom weights fall back to Sinc quadrature with
/// `quad` (or a 512-point default).
pub fn moment(
    w: &WeightSpec,
    interval: &Interval,
    k: usize,
    quad: Option<&QuadratureConfig>,
) -> Result<f64> {
    match w {
        WeightSpec::Unit => match *interval {
            Interval::Finite { a, b } => Ok(monomial_integral(a, b, k)),
            _ => Err(Error::Divergent(format!(
                "unit-weight moment M_{k} diverges on {interval}"
            ))),
        },
        WeightSpec::Family(spec) => family_moment(*spec, interval, k),
        WeightSpec::Custom(f) => {
            let cfg = match quad {
                Some(c) => c.clone(),
                None => QuadratureConfig::with_default_step(512, default_map(interval)?),
            };
            let f = f.clone();
            sinc_quad(move |x: f64| f(x) * x.powi(k as i32), &cfg)
        }
    }
}

fn default_map(interval: &Interval) -> Result<ConformalMap> {
    Ok(match *interval {
        Interval::Finite { a, b } => ConformalMap::LogFinite { a, b },
        Interval::SemiInfinite { a } => ConformalMap::SinhLogSemi { a },
        Interval::RealLine => ConformalMap::Identity,
    })
}

fn monomial_integral(a: f64, b: f64, k: usize) -> f64 {
    let kk = k as f64 + 1.0;
    (b.powf(kk) - a.powf(kk)) / kk
}

fn family_moment(spec: FamilySpec, interval: &Interval, k: usize) -> Result<f64> {
    let natural = spec.interval();
    if *interval != natural {
        return Err(Error::Unsupported(format!(
            "{spec} weight moments are defined on its natural interval {natural}"
        )));
    }
    match spec {
        FamilySpec::Laguerre => {
            // Gamma(k+1) = k!
            let mut m = 1.0_f64;
            for j in 1..=k {
                m *= j as f64;
            }
            if m.is_finite() {
                Ok(m)
            } else {
                Err(Error::Unsupported(format!("moment M_{k} exceeds the f64 range")))
            }
        }
        FamilySpec::Hermite => {
            if k % 2 == 1 {
                return Ok(0.0);
            }
            // sqrt(pi) * (k-1)!! / 2^(k/2)
            let mut m = std::f64::consts::PI.sqrt();
            let mut j = 1;
            while 2 * j <= k {
                m *= (2 * j - 1) as f64 / 2.0;
                j += 1;
            }
            Ok(m)
        }
        FamilySpec::PolySinc => Err(Error::Unsupported(
            "polysinc has no associated weight; use the unit weight".into(),
        )),
        _ => {
            let (alpha, beta) = spec.jacobi_exponents().unwrap();
            Ok(jacobi_moment(alpha, beta, k))
        }
    }
}

/// Moments of (1-x)^alpha (1+x)^beta on (-1, 1) by the stable three-term
/// recurrence (alpha+beta+2+j) I_{j+1} = (beta-alpha) I_j + j I_{j-1},
/// seeded with I_0 = 2^(alpha+beta+1) B(alpha+1, beta+1).
fn jacobi_moment(alpha: f64, beta: f64, k: usize) -> f64 {
    let i0 = 2f64.powf(alpha + beta + 1.0) * super::beta_function(alpha + 1.0, beta + 1.0);
    if k == 0 {
        return i0;
    }
    let mut prev = i0;
    let mut cur = (beta - alpha) / (alpha + beta + 2.0) * i0;
    for j in 1..k {
        let next = ((beta - alpha) * cur + j as f64 * prev) / (alpha + beta + 2.0 + j as f64);
        prev = cur;
        cur = next;
    }
    cur
}
