//! Forward three-term recurrences for polynomial values and derivatives,
//! with running power-of-two rescaling so high degrees on unbounded
//! intervals never overflow. The Lagrange ratio cancels the scale.

use super::{FamilySpec, RecurrenceTable};
use crate::error::{Error, Result};

/// Which normalization a `PolyEval` carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// The textbook normalization of the family (P_n, T_n, L_n, H_n, ...).
    Classical,
    /// Monic polynomials from the recurrence table.
    Monic,
}

/// Value and derivative scaled by a shared power of two:
/// p(x) = value * 2^scale_exp, p'(x) = derivative * 2^scale_exp.
#[derive(Clone, Copy, Debug)]
pub struct PolyEval {
    pub value: f64,
    pub derivative: f64,
    pub scale_exp: i32,
    pub normalization: Normalization,
}

impl PolyEval {
    pub fn value_f64(&self) -> f64 {
        libm::ldexp(self.value, self.scale_exp)
    }

    pub fn derivative_f64(&self) -> f64 {
        libm::ldexp(self.derivative, self.scale_exp)
    }
}

const RESCALE_LIMIT: f64 = 1.3407807929942597e154; // 2^512
const RESCALE_FACTOR: f64 = 7.458340731200207e-155; // 2^-512
const RESCALE_EXP: i32 = 512;

struct RecurrenceState {
    p_prev: f64,
    p: f64,
    dp_prev: f64,
    dp: f64,
    exp: i32,
}

impl RecurrenceState {
    fn new(p0: f64, p1: f64, dp0: f64, dp1: f64) -> Self {
        RecurrenceState {
            p_prev: p0,
            p: p1,
            dp_prev: dp0,
            dp: dp1,
            exp: 0,
        }
    }

    fn advance(&mut self, p_next: f64, dp_next: f64) {
        self.p_prev = self.p;
        self.dp_prev = self.dp;
        self.p = p_next;
        self.dp = dp_next;
        if self.p.abs() > RESCALE_LIMIT || self.dp.abs() > RESCALE_LIMIT {
            self.p *= RESCALE_FACTOR;
            self.dp *= RESCALE_FACTOR;
            self.p_prev *= RESCALE_FACTOR;
            self.dp_prev *= RESCALE_FACTOR;
            self.exp += RESCALE_EXP;
        }
    }

    fn finish(self, normalization: Normalization) -> PolyEval {
        PolyEval {
            value: self.p,
            derivative: self.dp,
            scale_exp: self.exp,
            normalization,
        }
    }
}

/// p_n(x) and p'_n(x) in the classical normalization of the family.
pub fn eval_with_derivative(family: FamilySpec, n: usize, x: f64) -> Result<PolyEval> {
    family.validate()?;
    let norm = Normalization::Classical;
    let one = PolyEval {
        value: 1.0,
        derivative: 0.0,
        scale_exp: 0,
        normalization: norm,
    };
    match family {
        FamilySpec::Legendre => {
            if n == 0 {
                return Ok(one);
            }
            let mut s = RecurrenceState::new(1.0, x, 0.0, 1.0);
            for k in 1..n {
                let kf = k as f64;
                let p = ((2.0 * kf + 1.0) * x * s.p - kf * s.p_prev) / (kf + 1.0);
                let dp =
                    ((2.0 * kf + 1.0) * (s.p + x * s.dp) - kf * s.dp_prev) / (kf + 1.0);
                s.advance(p, dp);
            }
            Ok(s.finish(norm))
        }
        FamilySpec::ChebyshevT | FamilySpec::ChebyshevU => {
            if n == 0 {
                return Ok(one);
            }
            let (p1, dp1) = if family == FamilySpec::ChebyshevT {
                (x, 1.0)
            } else {
                (2.0 * x, 2.0)
            };
            let mut s = RecurrenceState::new(1.0, p1, 0.0, dp1);
            for _ in 1..n {
                let p = 2.0 * x * s.p - s.p_prev;
                let dp = 2.0 * s.p + 2.0 * x * s.dp - s.dp_prev;
                s.advance(p, dp);
            }
            Ok(s.finish(norm))
        }
        FamilySpec::Jacobi { alpha, beta } => {
            if n == 0 {
                return Ok(one);
            }
            let apb = alpha + beta;
            let p1 = 0.5 * (apb + 2.0) * x + 0.5 * (alpha - beta);
            let mut s = RecurrenceState::new(1.0, p1, 0.0, 0.5 * (apb + 2.0));
            for k in 1..n {
                let kf = k as f64;
                let t = 2.0 * kf + apb;
                let c0 = 2.0 * (kf + 1.0) * (kf + apb + 1.0) * t;
                let c1 = (t + 1.0) * (t + 2.0) * t;
                let c2 = (t + 1.0) * (alpha * alpha - beta * beta);
                let c3 = 2.0 * (kf + alpha) * (kf + beta) * (t + 2.0);
                let p = ((c1 * x + c2) * s.p - c3 * s.p_prev) / c0;
                let dp = (c1 * s.p + (c1 * x + c2) * s.dp - c3 * s.dp_prev) / c0;
                s.advance(p, dp);
            }
            Ok(s.finish(norm))
        }
        FamilySpec::Gegenbauer { eta } => {
            if eta == 0.0 {
                return Err(Error::InvalidParameter(
                    "classical Gegenbauer normalization degenerates at eta=0; \
                     use chebyshev-t (same weight) or the monic evaluation"
                        .into(),
                ));
            }
            if n == 0 {
                return Ok(one);
            }
            let mut s = RecurrenceState::new(1.0, 2.0 * eta * x, 0.0, 2.0 * eta);
            for k in 1..n {
                let kf = k as f64;
                let p = (2.0 * (kf + eta) * x * s.p - (kf + 2.0 * eta - 1.0) * s.p_prev)
                    / (kf + 1.0);
                let dp = (2.0 * (kf + eta) * (s.p + x * s.dp)
                    - (kf + 2.0 * eta - 1.0) * s.dp_prev)
                    / (kf + 1.0);
                s.advance(p, dp);
            }
            Ok(s.finish(norm))
        }
        FamilySpec::Laguerre => {
            if n == 0 {
                return Ok(one);
            }
            let mut s = RecurrenceState::new(1.0, 1.0 - x, 0.0, -1.0);
            for k in 1..n {
                let kf = k as f64;
                let p = ((2.0 * kf + 1.0 - x) * s.p - kf * s.p_prev) / (kf + 1.0);
                let dp = ((2.0 * kf + 1.0 - x) * s.dp - s.p - kf * s.dp_prev) / (kf + 1.0);
                s.advance(p, dp);
            }
            Ok(s.finish(norm))
        }
        FamilySpec::Hermite => {
            if n == 0 {
                return Ok(one);
            }
            let mut s = RecurrenceState::new(1.0, 2.0 * x, 0.0, 2.0);
            for k in 1..n {
                let kf = k as f64;
                let p = 2.0 * x * s.p - 2.0 * kf * s.p_prev;
                let dp = 2.0 * s.p + 2.0 * x * s.dp - 2.0 * kf * s.dp_prev;
                s.advance(p, dp);
            }
            Ok(s.finish(norm))
        }
        FamilySpec::PolySinc => Err(Error::Unsupported(
            "polysinc basis is product-form; there is no orthogonal p_n to evaluate".into(),
        )),
    }
}

/// Monic p_n(x) and p'_n(x) from the recurrence table; any-family fallback
/// whose Lagrange ratios agree with the classical ones.
pub fn monic_eval(table: &RecurrenceTable, n: usize, x: f64) -> PolyEval {
    let norm = Normalization::Monic;
    assert!(n <= table.diag.len(), "table too short for degree {n}");
    if n == 0 {
        return PolyEval {
            value: 1.0,
            derivative: 0.0,
            scale_exp: 0,
            normalization: norm,
        };
    }
    let mut s = RecurrenceState::new(1.0, x - table.diag[0], 0.0, 1.0);
    for k in 1..n {
        let a = table.diag[k];
        let b = table.offdiag[k - 1] * table.offdiag[k - 1];
        let p = (x - a) * s.p - b * s.p_prev;
        let dp = s.p + (x - a) * s.dp - b * s.dp_prev;
        s.advance(p, dp);
    }
    s.finish(norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::recurrence_coeffs;
    use approx::assert_relative_eq;

    #[test]
    fn classical_examples() {
        let e = eval_with_derivative(FamilySpec::Legendre, 2, 0.0).unwrap();
        assert_relative_eq!(e.value_f64(), -0.5, epsilon = 1e-15);
        assert!(e.derivative_f64().abs() < 1e-15);

        let e = eval_with_derivative(FamilySpec::ChebyshevT, 3, 1.0).unwrap();
        assert_relative_eq!(e.value_f64(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(e.derivative_f64(), 9.0, epsilon = 1e-13);

        let e = eval_with_derivative(FamilySpec::Hermite, 2, 0.0).unwrap();
        assert_relative_eq!(e.value_f64(), -2.0, epsilon = 1e-15);
        assert!(e.derivative_f64().abs() < 1e-15);
    }

    #[test]
    fn jacobi_reduces_to_legendre() {
        let j = FamilySpec::Jacobi {
            alpha: 0.0,
            beta: 0.0,
        };
        for &x in &[-0.9, -0.3, 0.2, 0.77] {
            let a = eval_with_derivative(j, 7, x).unwrap();
            let b = eval_with_derivative(FamilySpec::Legendre, 7, x).unwrap();
            assert_relative_eq!(a.value_f64(), b.value_f64(), max_relative = 1e-12);
            assert_relative_eq!(a.derivative_f64(), b.derivative_f64(), max_relative = 1e-12);
        }
    }

    #[test]
    fn hermite_scaling_survives_large_degree() {
        // classical H_120 overflows f64 near its largest root without rescaling
        let e = eval_with_derivative(FamilySpec::Hermite, 120, 15.0).unwrap();
        assert!(e.value.is_finite() && e.derivative.is_finite());
        assert!(e.scale_exp > 0, "expected rescaling to trigger");
        // ratio against a nearby evaluation stays sane
        let e2 = eval_with_derivative(FamilySpec::Hermite, 120, 15.1).unwrap();
        let ratio = libm::ldexp(e2.value / e.value, e2.scale_exp - e.scale_exp);
        assert!(ratio.is_finite() && ratio != 0.0);
    }

    #[test]
    fn monic_matches_classical_up_to_constant() {
        // ratio p(x1)/p(x2) is normalization-free
        let fam = FamilySpec::Legendre;
        let table = recurrence_coeffs(fam, 9).unwrap();
        let (x1, x2) = (0.3, -0.62);
        let c1 = eval_with_derivative(fam, 9, x1).unwrap();
        let c2 = eval_with_derivative(fam, 9, x2).unwrap();
        let m1 = monic_eval(&table, 9, x1);
        let m2 = monic_eval(&table, 9, x2);
        assert_relative_eq!(
            c1.value_f64() / c2.value_f64(),
            libm::ldexp(m1.value / m2.value, m1.scale_exp - m2.scale_exp),
            max_relative = 1e-11
        );
    }

    #[test]
    fn monic_works_at_gegenbauer_zero_eta() {
        // eta = 0 weight is the ChebyshevT weight; monic roots must agree
        let table = recurrence_coeffs(FamilySpec::Gegenbauer { eta: 0.0 }, 3).unwrap();
        let t = recurrence_coeffs(FamilySpec::ChebyshevT, 3).unwrap();
        assert_eq!(table.diag, t.diag);
        for (a, b) in table.offdiag.iter().zip(&t.offdiag) {
            assert_relative_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn degree_zero_and_errors() {
        let e = eval_with_derivative(FamilySpec::Laguerre, 0, 5.0).unwrap();
        assert_eq!(e.value_f64(), 1.0);
        assert!(eval_with_derivative(FamilySpec::PolySinc, 3, 0.0).is_err());
        assert!(eval_with_derivative(FamilySpec::Gegenbauer { eta: 0.0 }, 3, 0.0).is_err());
    }
}
