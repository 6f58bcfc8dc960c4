//! Lagrange basis rows b_k(x) = p_n(x)/((x-x_k) p'_n(x_k)), the sampling
//! operator V(f), weighted interpolation ξ(x) Σ b_k(x) f(x_k)/ξ(x_k), and
//! error/convergence measurements.
//!
//! Orthogonal families use the ratio form with one shared p_n(x) evaluation
//! per point (O(n) per basis row); Poly-Sinc nodes use the scaled product
//! form, since no orthogonal p_n exists and the second barycentric form is
//! unstable outside the node hull.

use crate::error::{Error, Result};
use crate::families::{
    monic_eval, recurrence_coeffs, weight_value, FamilySpec, Interval, NodeSet, RecurrenceTable,
    WeightSpec,
};
use crate::scaled::{Scaled, ScaledProduct};
use crate::sinc::{least_squares_line, sinc_quad_points, ConformalMap, QuadratureConfig};
use serde::{Deserialize, Serialize};

/// Node samples aligned with a `NodeSet`.
pub type SampleVector = Vec<f64>;

/// Evaluate f at every node.
pub fn sample_function(f: impl Fn(f64) -> f64, nodes: &NodeSet) -> SampleVector {
    nodes.nodes.iter().map(|&x| f(x)).collect()
}

enum BasisForm {
    /// p_n(x)/((x-x_k) p'_n(x_k)), monic recurrence, shared p_n evaluation.
    OrthogonalRatio { table: RecurrenceTable },
    /// prod_{l != k} (x-x_l)/(x_k-x_l) with power-of-two scale tracking.
    Product,
}

/// A fixed node set with the precomputed denominators of its cardinal
/// basis; immutable after construction.
pub struct BasisSet {
    nodes: NodeSet,
    denom: Vec<Scaled>,
    form: BasisForm,
}

impl BasisSet {
    pub fn new(nodes: NodeSet) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty node set".into()));
        }
        match nodes.family {
            FamilySpec::PolySinc => {
                let mut denom = Vec::with_capacity(n);
                for k in 0..n {
                    let mut prod = ScaledProduct::one();
                    for l in 0..n {
                        if l != k {
                            prod.mul(nodes.nodes[k] - nodes.nodes[l]);
                        }
                    }
                    let d = prod.result();
                    if d.is_zero() {
                        return Err(Error::InvalidParameter(format!(
                            "coincident nodes at index {k}"
                        )));
                    }
                    denom.push(d);
                }
                Ok(BasisSet {
                    nodes,
                    denom,
                    form: BasisForm::Product,
                })
            }
            family => {
                let table = recurrence_coeffs(family, n)?;
                let mut denom = Vec::with_capacity(n);
                for &x in &nodes.nodes {
                    let pe = monic_eval(&table, n, x);
                    let d = Scaled {
                        mantissa: pe.derivative,
                        exp: pe.scale_exp,
                    };
                    if d.is_zero() {
                        return Err(Error::InvalidParameter(format!(
                            "p'_n vanishes at node {x}; nodes are not simple roots"
                        )));
                    }
                    denom.push(d);
                }
                Ok(BasisSet {
                    nodes,
                    denom,
                    form: BasisForm::OrthogonalRatio { table },
                })
            }
        }
    }

    pub fn for_family(family: FamilySpec, n: usize) -> Result<Self> {
        BasisSet::new(crate::families::roots(family, n)?)
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn coincidence_index(&self, x: f64) -> Option<usize> {
        self.nodes
            .nodes
            .iter()
            .position(|&xk| (x - xk).abs() < 1e-13 * xk.abs().max(1.0))
    }

    /// The row B(x) = (b_1(x), ..., b_n(x)); the exact unit row at nodes.
    pub fn basis_at(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.basis_at_into(x, &mut out);
        out
    }

    pub fn basis_at_into(&self, x: f64, out: &mut [f64]) {
        assert_eq!(out.len(), self.len());
        if let Some(j) = self.coincidence_index(x) {
            out.fill(0.0);
            out[j] = 1.0;
            return;
        }
        match &self.form {
            BasisForm::OrthogonalRatio { table } => {
                let pe = monic_eval(table, self.len(), x);
                for (k, (o, d)) in out.iter_mut().zip(&self.denom).enumerate() {
                    let num = pe.value / (x - self.nodes.nodes[k]);
                    *o = libm::ldexp(num / d.mantissa, pe.scale_exp - d.exp);
                }
            }
            BasisForm::Product => {
                let mut prod = ScaledProduct::one();
                for &xl in &self.nodes.nodes {
                    prod.mul(x - xl);
                }
                let s = prod.result();
                for (k, (o, d)) in out.iter_mut().zip(&self.denom).enumerate() {
                    let num = s.mantissa / (x - self.nodes.nodes[k]);
                    *o = libm::ldexp(num / d.mantissa, s.exp - d.exp);
                }
            }
        }
    }

    /// B(x) · V(f).
    pub fn interpolate(&self, samples: &[f64], x: f64) -> f64 {
        assert_eq!(samples.len(), self.len(), "sample vector length mismatch");
        if let Some(j) = self.coincidence_index(x) {
            return samples[j];
        }
        let row = self.basis_at(x);
        row.iter().zip(samples).map(|(b, f)| b * f).sum()
    }
}

/// ξ(x) Σ_k b_k(x) f(x_k)/ξ(x_k); exact at the nodes since ξ cancels there.
pub fn weighted_interpolate(
    basis: &BasisSet,
    f: impl Fn(f64) -> f64,
    xi: &WeightSpec,
    x: f64,
) -> Result<f64> {
    let w = WeightedInterpolant::new(basis, f, xi)?;
    w.eval(x)
}

/// Precomputed f(x_k)/ξ(x_k) samples for repeated evaluations.
pub struct WeightedInterpolant<'a> {
    basis: &'a BasisSet,
    scaled_samples: Vec<f64>,
    xi: WeightSpec,
}

impl<'a> WeightedInterpolant<'a> {
    pub fn new(basis: &'a BasisSet, f: impl Fn(f64) -> f64, xi: &WeightSpec) -> Result<Self> {
        let mut scaled_samples = Vec::with_capacity(basis.len());
        for &xk in &basis.nodes().nodes {
            let w = weight_value(xi, xk)?;
            if w == 0.0 || !w.is_finite() {
                return Err(Error::OutOfDomain(format!(
                    "degenerate weight at node {xk}: xi = {w}"
                )));
            }
            scaled_samples.push(f(xk) / w);
        }
        Ok(WeightedInterpolant {
            basis,
            scaled_samples,
            xi: xi.clone(),
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let xv = weight_value(&self.xi, x)?;
        Ok(xv * self.basis.interpolate(&self.scaled_samples, x))
    }
}

/// Norm used by `error_norm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    Sup,
    L2,
}

/// Error between f and its approximation. Sup: uniform interior grid,
/// endpoint-clipped by half a step (unbounded intervals use a finite
/// window where the classical weights have all their mass). L2: Sinc
/// quadrature of the squared difference; `weight` (ξ, when given) squares
/// into the integrand, which keeps unbounded-interval norms finite —
/// reported upstream as "weighted L2".
pub fn error_norm(
    f: &dyn Fn(f64) -> f64,
    approx: &dyn Fn(f64) -> f64,
    interval: &Interval,
    norm: Norm,
    grid_size: usize,
    weight: Option<&dyn Fn(f64) -> f64>,
) -> Result<f64> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter("grid size must be >= 2".into()));
    }
    let window = match *interval {
        Interval::Finite { a, b } => (a, b),
        Interval::SemiInfinite { a } => (a, a + 40.0),
        Interval::RealLine => (-20.0, 20.0),
    };
    match norm {
        Norm::Sup => {
            let (a, b) = window;
            let step = (b - a) / grid_size as f64;
            let mut worst = 0.0_f64;
            for i in 0..grid_size {
                let x = a + step * (i as f64 + 0.5);
                let mut e = (f(x) - approx(x)).abs();
                if let Some(w) = weight {
                    e *= w(x).abs();
                }
                worst = worst.max(e);
            }
            Ok(worst)
        }
        Norm::L2 => {
            let map = match *interval {
                Interval::Finite { a, b } => ConformalMap::LogFinite { a, b },
                Interval::SemiInfinite { a } => ConformalMap::SinhLogSemi { a },
                Interval::RealLine => ConformalMap::Identity,
            };
            let cfg = QuadratureConfig::with_default_step((grid_size / 2).max(256), map);
            let sq = sinc_quad_points(
                |p| {
                    let d = f(p.x) - approx(p.x);
                    let w = weight.map_or(1.0, |w| w(p.x));
                    let v = d * w;
                    v * v
                },
                &cfg,
            )?;
            Ok(sq.max(0.0).sqrt())
        }
    }
}

/// Least-squares fit of log error against n; `r_estimate = exp(-slope)` is
/// the fitted decay base of the A r^{-n} model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitResult {
    pub r_estimate: f64,
    pub log_errors: Vec<(usize, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Points dropped from the fit because the error underflowed 1e-15.
    pub truncated: usize,
}

/// One measured row of a convergence experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub sup_error: f64,
    pub l2_error: f64,
}

/// Error-versus-degree table for weighted interpolation of f with weight ξ
/// at the family's roots, with the fitted decay of the L2 errors.
pub fn convergence_table(
    family: FamilySpec,
    f: &(dyn Fn(f64) -> f64 + Sync),
    xi: &WeightSpec,
    n_list: &[usize],
) -> Result<(Vec<ConvergenceRow>, FitResult)> {
    if n_list.len() < 3 {
        return Err(Error::InvalidParameter(
            "convergence fit needs at least 3 degrees".into(),
        ));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n list must be ascending".into()));
    }
    let interval = family.interval();
    let weighted_l2 = !interval.is_finite();
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let basis = BasisSet::for_family(family, n)?;
        let interp = WeightedInterpolant::new(&basis, f, xi)?;
        let approx = |x: f64| interp.eval(x).unwrap_or(f64::NAN);
        let weight_fn = |x: f64| weight_value(xi, x).unwrap_or(0.0);
        let weight: Option<&dyn Fn(f64) -> f64> = if weighted_l2 { Some(&weight_fn) } else { None };
        let sup = error_norm(&f, &approx, &interval, Norm::Sup, 1001, weight)?;
        let l2 = error_norm(&f, &approx, &interval, Norm::L2, 1001, weight)?;
        rows.push(ConvergenceRow {
            n,
            sup_error: sup,
            l2_error: l2,
        });
    }
    let fit = fit_rows(&rows)?;
    Ok((rows, fit))
}

pub fn fit_rows(rows: &[ConvergenceRow]) -> Result<FitResult> {
    let usable: Vec<(usize, f64)> = rows
        .iter()
        .filter(|r| r.l2_error > 1e-15)
        .map(|r| (r.n, r.l2_error.ln()))
        .collect();
    let truncated = rows.len() - usable.len();
    if usable.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "only {} usable points after underflow truncation; need 3",
            usable.len()
        )));
    }
    let xy: Vec<(f64, f64)> = usable.iter().map(|&(n, le)| (n as f64, le)).collect();
    let (slope, intercept, _) = least_squares_line(&xy);
    Ok(FitResult {
        r_estimate: (-slope).exp(),
        log_errors: usable,
        slope,
        intercept,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_row_at_nodes() {
        let basis = BasisSet::for_family(FamilySpec::Legendre, 7).unwrap();
        for (j, &xj) in basis.nodes().nodes.clone().iter().enumerate() {
            let row = basis.basis_at(xj);
            for (k, &v) in row.iter().enumerate() {
                assert_eq!(v, if k == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn legendre_two_point_midpoint() {
        let basis = BasisSet::for_family(FamilySpec::Legendre, 2).unwrap();
        let row = basis.basis_at(0.0);
        assert_relative_eq!(row[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(row[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn partition_of_unity() {
        for (family, n) in [
            (FamilySpec::Legendre, 24),
            (FamilySpec::Legendre, 60),
            (FamilySpec::ChebyshevT, 24),
            (FamilySpec::Jacobi { alpha: 2.0, beta: 2.0 }, 24),
            (FamilySpec::PolySinc, 9),
        ] {
            let basis = BasisSet::for_family(family, n).unwrap();
            for i in 0..1000 {
                let x = -0.999 + 1.998 * (i as f64) / 999.0;
                let s: f64 = basis.basis_at(x).iter().sum();
                assert!(
                    (s - 1.0).abs() <= 1e-10,
                    "{family} n={n} partition of unity at {x}: {s}"
                );
            }
        }
        // large Poly-Sinc node sets have an exponentially growing Lebesgue
        // function; the sum is still correct to eps * sum|b_k|
        let basis = BasisSet::for_family(FamilySpec::PolySinc, 41).unwrap();
        for i in 0..200 {
            let x = -0.999 + 1.998 * (i as f64) / 199.0;
            let row = basis.basis_at(x);
            let s: f64 = row.iter().sum();
            let lebesgue: f64 = row.iter().map(|b| b.abs()).sum();
            assert!(
                (s - 1.0).abs() <= 1e-13 * lebesgue.max(1.0),
                "polysinc m=41 at {x}: sum {s}, lebesgue {lebesgue}"
            );
        }
    }

    #[test]
    fn polynomial_reproduction() {
        let basis = BasisSet::for_family(FamilySpec::Legendre, 9).unwrap();
        let f = |x: f64| 3.0 * x.powi(8) - x.powi(5) + 0.25 * x - 7.0;
        let samples = sample_function(f, basis.nodes());
        for i in 0..100 {
            let x = -0.99 + 1.98 * (i as f64) / 99.0;
            assert_relative_eq!(
                basis.interpolate(&samples, x),
                f(x),
                max_relative = 1e-12,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn zero_samples_interpolate_to_zero() {
        let basis = BasisSet::for_family(FamilySpec::ChebyshevU, 5).unwrap();
        assert_eq!(basis.interpolate(&vec![0.0; 5], 0.3), 0.0);
    }

    #[test]
    fn monomial_degree_exactness() {
        for family in [FamilySpec::Legendre, FamilySpec::ChebyshevT] {
            let n = 12;
            let basis = BasisSet::for_family(family, n).unwrap();
            for j in 0..n {
                let f = |x: f64| x.powi(j as i32);
                let samples = sample_function(f, basis.nodes());
                for i in 0..40 {
                    let x = -0.97 + 1.94 * (i as f64) / 39.0;
                    let got = basis.interpolate(&samples, x);
                    assert!(
                        (got - f(x)).abs() <= 1e-10 * f(x).abs().max(1.0),
                        "{family} x^{j} at {x}: {got}"
                    );
                }
            }
        }
    }

    #[test]
    fn weighted_interpolation_reproduces_at_nodes() {
        let basis = BasisSet::for_family(FamilySpec::Laguerre, 12).unwrap();
        let xi = WeightSpec::Family(FamilySpec::Laguerre);
        let f = |x: f64| (1.0 + x).sqrt() * (-0.5 * x).exp();
        let nodes = basis.nodes().nodes.clone();
        for &xk in &nodes {
            let got = weighted_interpolate(&basis, f, &xi, xk).unwrap();
            assert_relative_eq!(got, f(xk), max_relative = 1e-12);
        }
    }

    #[test]
    fn unit_weight_matches_plain_interpolation() {
        let basis = BasisSet::for_family(FamilySpec::Legendre, 8).unwrap();
        let f = |x: f64| (2.0 * x).sin();
        let samples = sample_function(f, basis.nodes());
        for &x in &[-0.73, -0.2, 0.11, 0.64] {
            let a = weighted_interpolate(&basis, f, &WeightSpec::Unit, x).unwrap();
            let b = basis.interpolate(&samples, x);
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn interpolating_the_weight_returns_it() {
        // f = xi means the scaled samples are all 1
        let basis = BasisSet::for_family(FamilySpec::Hermite, 10).unwrap();
        let xi = WeightSpec::Family(FamilySpec::Hermite);
        let f = |x: f64| (-x * x).exp();
        for &x in &[-1.3, 0.0, 0.4, 2.2] {
            let got = weighted_interpolate(&basis, f, &xi, x).unwrap();
            assert_relative_eq!(got, f(x), max_relative = 1e-11);
        }
    }

    #[test]
    fn error_norm_basics() {
        let iv = Interval::Finite { a: -1.0, b: 1.0 };
        let f = |x: f64| x * x;
        let same = error_norm(&f, &f, &iv, Norm::Sup, 100, None).unwrap();
        assert_eq!(same, 0.0);
        let shifted = |x: f64| x * x + 0.25;
        let sup = error_norm(&f, &shifted, &iv, Norm::Sup, 100, None).unwrap();
        assert_relative_eq!(sup, 0.25, epsilon = 1e-14);
        // constant offset in L2 over length-2 interval: |c| sqrt(2)
        let l2 = error_norm(&f, &shifted, &iv, Norm::L2, 1000, None).unwrap();
        assert_relative_eq!(l2, 0.25 * 2f64.sqrt(), max_relative = 1e-9);
        assert!(error_norm(&f, &f, &iv, Norm::Sup, 1, None).is_err());
    }

    #[test]
    fn convergence_fit_negative_slope_for_analytic_target() {
        let f = |x: f64| (3.0 * x).cos();
        let (rows, fit) = convergence_table(
            FamilySpec::Legendre,
            &f,
            &WeightSpec::Unit,
            &[4, 6, 8, 10, 12],
        )
        .unwrap();
        assert!(fit.slope < 0.0, "slope {}", fit.slope);
        assert!(fit.r_estimate > 1.0);
        assert!(rows[4].l2_error < rows[0].l2_error);
    }

    #[test]
    fn fit_requires_three_points() {
        let f = |x: f64| x;
        assert!(
            convergence_table(FamilySpec::Legendre, &f, &WeightSpec::Unit, &[4, 6]).is_err()
        );
    }
}
