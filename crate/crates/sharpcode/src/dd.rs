//! Minimal double-double arithmetic (value + error compensation).
//!
//! The polynomial coefficient recurrences and moment dot products suffer
//! catastrophic cancellation near degree 14 in low dimensions; carrying two
//! f64 words through those inner loops keeps the final f64 results at the
//! 1e-12 level the verification invariants demand. Only the handful of
//! operations those loops need are implemented.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: f64::mul_add(a, b, -p),
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    /// Exact product of two f64 values.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        two_prod(a, b)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        quick_two_sum(s.hi, lo)
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        quick_two_sum(p.hi, lo)
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let p = two_prod(self.hi, other);
        quick_two_sum(p.hi, p.lo + self.lo * other)
    }

    #[inline]
    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let r = self.sub(Dd::from(q1).mul_f64(d));
        let q2 = r.to_f64() / d;
        quick_two_sum(q1, q2)
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.to_f64() / other.hi;
        quick_two_sum(q1, q2)
    }

    /// Quotient of two doubles to double-double precision.
    pub fn ratio(a: f64, b: f64) -> Dd {
        let q1 = a / b;
        let r = Dd::from(a).sub(two_prod(q1, b));
        let q2 = r.to_f64() / b;
        quick_two_sum(q1, q2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_survives() {
        // (1e16 + 1) - 1e16 in plain f64 loses the 1; dd keeps it.
        let x = Dd::from(1e16).add(Dd::ONE);
        assert_eq!(x.sub(Dd::from(1e16)).to_f64(), 1.0);
    }

    #[test]
    fn ratio_is_better_than_plain_division() {
        let r = Dd::ratio(1.0, 3.0);
        // hi is the rounded quotient, lo captures the residual.
        assert_eq!(r.hi, 1.0 / 3.0);
        assert!(r.lo.abs() > 0.0 && r.lo.abs() < 1e-16);
    }
}
