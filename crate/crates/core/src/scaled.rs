//! Power-of-two scaled floats for overflow-safe polynomial recurrences.
//!
//! Classical Hermite/Laguerre values and monic polynomials of high degree
//! overflow f64 long before the quantities we actually need (Lagrange
//! ratios) do. A `Scaled` value carries `mantissa * 2^exp` with the mantissa
//! renormalized into [2^-256, 2^256); ratios of two `Scaled` values combine
//! exponents exactly, so the scale cancels where the math says it must.

/// `value = mantissa * 2^exp`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub exp: i32,
}

const RENORM_LIMIT: f64 = 1.157920892373162e77; // 2^256
const RENORM_INV: f64 = 8.636168555094445e-78; // 2^-256
const RENORM_EXP: i32 = 256;

impl Scaled {
    pub fn new(value: f64) -> Self {
        let mut s = Scaled {
            mantissa: value,
            exp: 0,
        };
        s.renormalize();
        s
    }

    pub fn zero() -> Self {
        Scaled {
            mantissa: 0.0,
            exp: 0,
        }
    }

    /// Collapse to a plain f64 (may over/underflow if the exponent is extreme).
    pub fn value(&self) -> f64 {
        libm::ldexp(self.mantissa, self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn renormalize(&mut self) {
        if self.mantissa == 0.0 {
            self.exp = 0;
            return;
        }
        while self.mantissa.abs() >= RENORM_LIMIT {
            self.mantissa *= RENORM_INV;
            self.exp += RENORM_EXP;
        }
        while self.mantissa.abs() < RENORM_INV && self.mantissa != 0.0 {
            self.mantissa *= RENORM_LIMIT;
            self.exp -= RENORM_EXP;
        }
    }

    pub fn mul_f64(&self, factor: f64) -> Self {
        let mut s = Scaled {
            mantissa: self.mantissa * factor,
            exp: self.exp,
        };
        s.renormalize();
        s
    }

    /// `self / other` collapsed to f64; exponents subtract exactly.
    pub fn ratio(&self, other: &Scaled) -> f64 {
        libm::ldexp(self.mantissa / other.mantissa, self.exp - other.exp)
    }

    /// log2 of the absolute value, for magnitude triage.
    pub fn log2_abs(&self) -> f64 {
        if self.mantissa == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().log2() + self.exp as f64
        }
    }
}

/// Running product of many f64 factors with exponent tracking.
#[derive(Clone, Copy, Debug)]
pub struct ScaledProduct {
    acc: Scaled,
}

impl ScaledProduct {
    pub fn one() -> Self {
        ScaledProduct {
            acc: Scaled {
                mantissa: 1.0,
                exp: 0,
            },
        }
    }

    pub fn mul(&mut self, factor: f64) {
        self.acc.mantissa *= factor;
        self.acc.renormalize();
    }

    pub fn result(&self) -> Scaled {
        self.acc
    }
}
