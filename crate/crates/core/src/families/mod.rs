//! Orthogonal-polynomial families: weights, three-term recurrences,
//! evaluation, roots via Golub–Welsch, Gauss weights, and moments.

mod eval;
mod moments;

pub use eval::{eval_with_derivative, monic_eval, Normalization, PolyEval};
pub use moments::moment;

use crate::error::{Error, Result};
use crate::linalg::symtrid_eigvals;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// An orthogonal-polynomial family (or the Poly-Sinc node family) with its
/// parameters; the interval is determined by the kind.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpec {
    Legendre,
    ChebyshevT,
    ChebyshevU,
    Jacobi { alpha: f64, beta: f64 },
    Gegenbauer { eta: f64 },
    Laguerre,
    Hermite,
    PolySinc,
}

impl FamilySpec {
    /// Parse the CLI name (lowercase, kebab-case). Parameters default to 0
    /// and are filled in by the caller for Jacobi/Gegenbauer.
    pub fn from_name(name: &str, alpha: Option<f64>, beta: Option<f64>, eta: Option<f64>) -> Result<Self> {
        let spec = match name {
            "legendre" => FamilySpec::Legendre,
            "chebyshev-t" => FamilySpec::ChebyshevT,
            "chebyshev-u" => FamilySpec::ChebyshevU,
            "jacobi" => FamilySpec::Jacobi {
                alpha: alpha.ok_or_else(|| Error::InvalidParameter("jacobi requires --alpha".into()))?,
                beta: beta.ok_or_else(|| Error::InvalidParameter("jacobi requires --beta".into()))?,
            },
            "gegenbauer" => FamilySpec::Gegenbauer {
                eta: eta.ok_or_else(|| Error::InvalidParameter("gegenbauer requires --eta".into()))?,
            },
            "laguerre" => FamilySpec::Laguerre,
            "hermite" => FamilySpec::Hermite,
            "polysinc" => FamilySpec::PolySinc,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family '{other}' (expected legendre, chebyshev-t, chebyshev-u, \
                     jacobi, gegenbauer, laguerre, hermite, polysinc)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Legendre => "legendre",
            FamilySpec::ChebyshevT => "chebyshev-t",
            FamilySpec::ChebyshevU => "chebyshev-u",
            FamilySpec::Jacobi { .. } => "jacobi",
            FamilySpec::Gegenbauer { .. } => "gegenbauer",
            FamilySpec::Laguerre => "laguerre",
            FamilySpec::Hermite => "hermite",
            FamilySpec::PolySinc => "polysinc",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilySpec::Jacobi { alpha, beta } => {
                if alpha <= -1.0 || beta <= -1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "jacobi requires alpha > -1 and beta > -1 (got alpha={alpha}, beta={beta})"
                    )));
                }
            }
            FamilySpec::Gegenbauer { eta } => {
                if eta <= -0.5 {
                    return Err(Error::InvalidParameter(format!(
                        "gegenbauer requires eta > -1/2 (got eta={eta})"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn interval(&self) -> Interval {
        match self {
            FamilySpec::Laguerre => Interval::SemiInfinite { a: 0.0 },
            FamilySpec::Hermite => Interval::RealLine,
            _ => Interval::Finite { a: -1.0, b: 1.0 },
        }
    }

    /// Jacobi exponents (alpha, beta) when the weight is of Jacobi type.
    pub(crate) fn jacobi_exponents(&self) -> Option<(f64, f64)> {
        match *self {
            FamilySpec::Legendre => Some((0.0, 0.0)),
            FamilySpec::ChebyshevT => Some((-0.5, -0.5)),
            FamilySpec::ChebyshevU => Some((0.5, 0.5)),
            FamilySpec::Jacobi { alpha, beta } => Some((alpha, beta)),
            FamilySpec::Gegenbauer { eta } => Some((eta - 0.5, eta - 0.5)),
            _ => None,
        }
    }

    /// True when w(-x) = w(x) on a symmetric interval (Theorem-5 mirroring).
    pub fn weight_symmetric(&self) -> bool {
        match *self {
            FamilySpec::Legendre
            | FamilySpec::ChebyshevT
            | FamilySpec::ChebyshevU
            | FamilySpec::Gegenbauer { .. }
            | FamilySpec::Hermite
            | FamilySpec::PolySinc => true,
            FamilySpec::Jacobi { alpha, beta } => alpha == beta,
            FamilySpec::Laguerre => false,
        }
    }

    pub fn params_string(&self) -> String {
        match *self {
            FamilySpec::Jacobi { alpha, beta } => format!("alpha={alpha},beta={beta}"),
            FamilySpec::Gegenbauer { eta } => format!("eta={eta}"),
            _ => String::new(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Jacobi { alpha, beta } => write!(f, "jacobi({alpha},{beta})"),
            FamilySpec::Gegenbauer { eta } => write!(f, "gegenbauer({eta})"),
            _ => f.write_str(self.name()),
        }
    }
}

/// Integration interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Interval {
    Finite { a: f64, b: f64 },
    SemiInfinite { a: f64 },
    RealLine,
}

impl Interval {
    pub fn is_finite(&self) -> bool {
        matches!(self, Interval::Finite { .. })
    }

    pub fn lower(&self) -> Option<f64> {
        match *self {
            Interval::Finite { a, .. } => Some(a),
            Interval::SemiInfinite { a } => Some(a),
            Interval::RealLine => None,
        }
    }

    pub fn upper(&self) -> Option<f64> {
        match *self {
            Interval::Finite { b, .. } => Some(b),
            _ => None,
        }
    }

    pub fn contains_open(&self, x: f64) -> bool {
        match *self {
            Interval::Finite { a, b } => x > a && x < b,
            Interval::SemiInfinite { a } => x > a,
            Interval::RealLine => x.is_finite(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Interval::Finite { a, b } => write!(f, "({a}, {b})"),
            Interval::SemiInfinite { a } => write!(f, "({a}, inf)"),
            Interval::RealLine => f.write_str("(-inf, inf)"),
        }
    }
}

/// The ξ (or w) weight inserted into integrals.
#[derive(Clone)]
pub enum WeightSpec {
    /// The weight associated with an orthogonal family.
    Family(FamilySpec),
    /// ξ(x) = 1.
    Unit,
    /// Caller-supplied evaluator.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Family(s) => write!(f, "Family({s})"),
            WeightSpec::Unit => f.write_str("Unit"),
            WeightSpec::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Evaluate the weight at `x`. Singular points and points outside the
/// weight's natural interval are out-of-domain errors.
pub fn weight_value(w: &WeightSpec, x: f64) -> Result<f64> {
    match w {
        WeightSpec::Unit => Ok(1.0),
        WeightSpec::Custom(f) => {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::OutOfDomain(format!("custom weight non-finite at x={x}")))
            }
        }
        WeightSpec::Family(spec) => match *spec {
            FamilySpec::Laguerre => {
                if x < 0.0 {
                    Err(Error::OutOfDomain(format!("laguerre weight needs x >= 0 (got {x})")))
                } else {
                    Ok((-x).exp())
                }
            }
            FamilySpec::Hermite => Ok((-x * x).exp()),
            FamilySpec::PolySinc => Err(Error::Unsupported(
                "polysinc has no associated weight; use the unit weight".into(),
            )),
            _ => {
                let (alpha, beta) = spec.jacobi_exponents().unwrap();
                let (one_minus, one_plus) = (1.0 - x, 1.0 + x);
                if one_minus < 0.0 || one_plus < 0.0 {
                    return Err(Error::OutOfDomain(format!(
                        "{spec} weight is defined on [-1, 1] (got {x})"
                    )));
                }
                let v = one_minus.powf(alpha) * one_plus.powf(beta);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::OutOfDomain(format!("{spec} weight singular at x={x}")))
                }
            }
        },
    }
}

/// Monic recurrence coefficients in symmetric (Jacobi-matrix) form.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceTable {
    /// Jacobi-matrix diagonal a_0..a_{n-1}.
    pub diag: Vec<f64>,
    /// Jacobi-matrix off-diagonal sqrt(b_1)..sqrt(b_{n-1}), strictly positive.
    pub offdiag: Vec<f64>,
    /// Zeroth moment of the weight.
    pub mu0: f64,
}

/// Monic recurrence coefficients for degree n: the symmetric tridiagonal
/// Jacobi matrix whose eigenvalues are the degree-n roots.
pub fn recurrence_coeffs(family: FamilySpec, n: usize) -> Result<RecurrenceTable> {
    family.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be >= 1".into()));
    }
    match family {
        FamilySpec::Laguerre => {
            let diag = (0..n).map(|k| (2 * k + 1) as f64).collect();
            let offdiag = (1..n).map(|k| k as f64).collect();
            Ok(RecurrenceTable {
                diag,
                offdiag,
                mu0: 1.0,
            })
        }
        FamilySpec::Hermite => {
            let diag = vec![0.0; n];
            let offdiag = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
            Ok(RecurrenceTable {
                diag,
                offdiag,
                mu0: std::f64::consts::PI.sqrt(),
            })
        }
        FamilySpec::PolySinc => Err(Error::Unsupported(
            "polysinc is not an orthogonal family; it has no three-term recurrence".into(),
        )),
        _ => {
            let (alpha, beta) = family.jacobi_exponents().unwrap();
            Ok(jacobi_recurrence(alpha, beta, n))
        }
    }
}

fn jacobi_recurrence(alpha: f64, beta: f64, n: usize) -> RecurrenceTable {
    let apb = alpha + beta;
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        if k == 0 {
            diag.push((beta - alpha) / (apb + 2.0));
        } else {
            let t = 2.0 * k as f64 + apb;
            diag.push((beta * beta - alpha * alpha) / (t * (t + 2.0)));
        }
    }
    for k in 1..n {
        let kf = k as f64;
        let b = if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + apb) * (2.0 + apb) * (3.0 + apb))
        } else {
            let t = 2.0 * kf + apb;
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + apb)
                / (t * t * (t + 1.0) * (t - 1.0))
        };
        offdiag.push(b.sqrt());
    }
    let mu0 = 2f64.powf(apb + 1.0) * beta_function(alpha + 1.0, beta + 1.0);
    RecurrenceTable { diag, offdiag, mu0 }
}

pub(crate) fn beta_function(a: f64, b: f64) -> f64 {
    (libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)).exp()
}

/// Strictly increasing interpolation nodes with optional Gauss weights.
#[derive(Clone, Debug)]
pub struct NodeSet {
    pub nodes: Vec<f64>,
    pub gauss_weights: Option<Vec<f64>>,
    pub family: FamilySpec,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn interval(&self) -> Interval {
        self.family.interval()
    }
}

/// All n roots of the degree-n family polynomial, ascending: eigenvalues of
/// the Jacobi matrix polished by one Newton step on the monic recurrence.
/// Poly-Sinc roots are the Sinc points of Eq.-(34) type on (-1, 1).
pub fn roots(family: FamilySpec, n: usize) -> Result<NodeSet> {
    if family == FamilySpec::PolySinc {
        let m_neg = n / 2;
        let n_pos = n - 1 - m_neg;
        return crate::sinc::polysinc_nodes(-1.0, 1.0, m_neg, n_pos);
    }
    golub_welsch(family, n, false)
}

/// Roots plus Golub–Welsch weights W_k = mu0 * (first eigenvector entry)^2.
pub fn gauss_weights(family: FamilySpec, n: usize) -> Result<NodeSet> {
    if family == FamilySpec::PolySinc {
        return Err(Error::Unsupported(
            "polysinc nodes carry no Gauss weights".into(),
        ));
    }
    golub_welsch(family, n, true)
}

fn golub_welsch(family: FamilySpec, n: usize, with_weights: bool) -> Result<NodeSet> {
    let table = recurrence_coeffs(family, n)?;
    let (mut nodes, first_row) = symtrid_eigvals(&table.diag, &table.offdiag, with_weights)?;
    // one Newton polish on the monic recurrence restores eigensolver losses
    for x in nodes.iter_mut() {
        let pe = monic_eval(&table, n, *x);
        let step = pe.value / pe.derivative;
        if step.is_finite() {
            *x -= step;
        }
    }
    for w in nodes.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::NonConvergence {
                iterations: 0,
                context: format!("roots of {family} degree {n} are not strictly increasing"),
            });
        }
    }
    let interval = family.interval();
    if let Some(x) = nodes.iter().find(|&&x| !interval.contains_open(x)) {
        return Err(Error::NonConvergence {
            iterations: 0,
            context: format!("root {x} escaped the open interval {interval}"),
        });
    }
    let gauss_weights = first_row.map(|z| z.iter().map(|&c| table.mu0 * c * c).collect());
    Ok(NodeSet {
        nodes,
        gauss_weights,
        family,
    })
}

/// Combined Legendre envelope min{1, 2/sqrt(pi (2n+1) sqrt(1-x^2))}; the
/// constant-1 branch covers |x| >= 1 where the sharp bound is singular.
pub fn legendre_envelope(n: usize, x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return 1.0;
    }
    let s = (1.0 - x * x).sqrt();
    let sharp = 2.0 / (std::f64::consts::PI * (2.0 * n as f64 + 1.0) * s).sqrt();
    sharp.min(1.0)
}

/// Absolute root tolerance on finite intervals, relative on unbounded ones.
pub fn root_tolerance(family: FamilySpec, node: f64) -> f64 {
    match family.interval() {
        Interval::Finite { .. } => 1e-12,
        _ => 1e-12 * node.abs().max(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recurrence_examples() {
        let t = recurrence_coeffs(FamilySpec::Legendre, 2).unwrap();
        assert_eq!(t.diag, vec![0.0, 0.0]);
        assert_relative_eq!(t.offdiag[0], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(t.mu0, 2.0, epsilon = 1e-14);

        let t = recurrence_coeffs(FamilySpec::ChebyshevT, 3).unwrap();
        assert_eq!(t.diag, vec![0.0, 0.0, 0.0]);
        assert_relative_eq!(t.offdiag[0], 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(t.offdiag[1], 0.5, epsilon = 1e-15);
        assert_relative_eq!(t.mu0, std::f64::consts::PI, epsilon = 1e-14);

        let t = recurrence_coeffs(FamilySpec::Laguerre, 2).unwrap();
        assert_eq!(t.diag, vec![1.0, 3.0]);
        assert_eq!(t.offdiag, vec![1.0]);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(FamilySpec::Jacobi {
            alpha: -1.0,
            beta: 0.0
        }
        .validate()
        .is_err());
        assert!(FamilySpec::Gegenbauer { eta: -0.5 }.validate().is_err());
        assert!(recurrence_coeffs(FamilySpec::Legendre, 0).is_err());
    }

    #[test]
    fn roots_examples() {
        let r = roots(FamilySpec::Legendre, 2).unwrap();
        let v = 1.0 / 3f64.sqrt();
        assert_relative_eq!(r.nodes[0], -v, epsilon = 1e-14);
        assert_relative_eq!(r.nodes[1], v, epsilon = 1e-14);

        let r = roots(FamilySpec::ChebyshevT, 3).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert_relative_eq!(r.nodes[0], -s, epsilon = 1e-14);
        assert!(r.nodes[1].abs() < 1e-15);
        assert_relative_eq!(r.nodes[2], s, epsilon = 1e-14);

        let r = roots(FamilySpec::Laguerre, 2).unwrap();
        assert_relative_eq!(r.nodes[0], 2.0 - 2f64.sqrt(), epsilon = 1e-13);
        assert_relative_eq!(r.nodes[1], 2.0 + 2f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn gauss_weights_examples() {
        let r = gauss_weights(FamilySpec::Legendre, 2).unwrap();
        let w = r.gauss_weights.unwrap();
        assert_relative_eq!(w[0], 1.0, epsilon = 1e-13);
        assert_relative_eq!(w[1], 1.0, epsilon = 1e-13);

        let r = gauss_weights(FamilySpec::ChebyshevT, 7).unwrap();
        for w in r.gauss_weights.unwrap() {
            assert_relative_eq!(w, std::f64::consts::PI / 7.0, epsilon = 1e-12);
        }

        let r = gauss_weights(FamilySpec::Laguerre, 1).unwrap();
        assert_relative_eq!(r.nodes[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(r.gauss_weights.unwrap()[0], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn weights_positive_and_sum_to_mu0() {
        for family in [
            FamilySpec::Legendre,
            FamilySpec::ChebyshevU,
            FamilySpec::Jacobi { alpha: 2.0, beta: 1.0 },
            FamilySpec::Gegenbauer { eta: 2.0 },
            FamilySpec::Laguerre,
            FamilySpec::Hermite,
        ] {
            let n = 14;
            let table = recurrence_coeffs(family, n).unwrap();
            let r = gauss_weights(family, n).unwrap();
            let w = r.gauss_weights.unwrap();
            assert!(w.iter().all(|&x| x > 0.0), "{family}: weight <= 0");
            let sum: f64 = w.iter().sum();
            assert_relative_eq!(sum, table.mu0, max_relative = 1e-12);
        }
    }

    #[test]
    fn weight_value_examples() {
        assert_relative_eq!(
            weight_value(&WeightSpec::Family(FamilySpec::ChebyshevT), 0.0).unwrap(),
            1.0
        );
        assert_relative_eq!(weight_value(&WeightSpec::Unit, 0.37).unwrap(), 1.0);
        assert_relative_eq!(
            weight_value(&WeightSpec::Family(FamilySpec::Hermite), 1.0).unwrap(),
            (-1f64).exp()
        );
        assert!(weight_value(&WeightSpec::Family(FamilySpec::ChebyshevT), 1.0).is_err());
        assert!(weight_value(&WeightSpec::Family(FamilySpec::Laguerre), -0.1).is_err());
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(legendre_envelope(17, 1.0), 1.0);
        assert_eq!(legendre_envelope(17, -1.0), 1.0);
        assert_relative_eq!(
            legendre_envelope(10, 0.0),
            0.2462325212298290,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            legendre_envelope(2, 0.0),
            0.5046265044040320,
            epsilon = 1e-15
        );
        // |P_2(0)| = 0.5 sits below the n=2 envelope
        let p2 = eval_with_derivative(FamilySpec::Legendre, 2, 0.0).unwrap();
        assert!(p2.value_f64().abs() <= legendre_envelope(2, 0.0));
    }

    #[test]
    fn interlacing_holds() {
        for family in [
            FamilySpec::Legendre,
            FamilySpec::ChebyshevT,
            FamilySpec::Jacobi { alpha: 1.0, beta: 0.0 },
            FamilySpec::Gegenbauer { eta: 10.0 },
            FamilySpec::Laguerre,
            FamilySpec::Hermite,
        ] {
            for n in [1usize, 2, 5, 20, 99] {
                let lo = roots(family, n).unwrap().nodes;
                let hi = roots(family, n + 1).unwrap().nodes;
                for k in 0..n {
                    assert!(
                        hi[k] < lo[k] && lo[k] < hi[k + 1],
                        "{family} interlacing fails at n={n}, k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn root_residuals_small() {
        for family in [
            FamilySpec::Legendre,
            FamilySpec::ChebyshevU,
            FamilySpec::Jacobi { alpha: 2.0, beta: 2.0 },
        ] {
            for n in [10usize, 60, 100] {
                let table = recurrence_coeffs(family, n).unwrap();
                for &x in &roots(family, n).unwrap().nodes {
                    let pe = monic_eval(&table, n, x);
                    let resid = pe.value.abs() / pe.derivative.abs().max(1.0);
                    assert!(resid <= 1e-12, "{family} n={n}: residual {resid} at {x}");
                }
            }
        }
    }
}
