//! Overflow-safe complex arithmetic.
//!
//! The field-case basis functions carry factors e^{±z²/4} whose magnitudes
//! leave the f64 range long before the physics runs out (|z| ≈ 38 on the
//! real axis). Everything downstream is a ratio, so only log-differences
//! matter; values are held as a complex mantissa times e^s with the scale
//! s tracked separately.

use num_complex::Complex64;

/// A complex value m·e^s with |m| kept in a moderate band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledC {
    pub m: Complex64,
    pub s: f64,
}

impl ScaledC {
    pub const ZERO: ScaledC = ScaledC {
        m: Complex64::new(0.0, 0.0),
        s: 0.0,
    };

    pub fn new(m: Complex64, s: f64) -> Self {
        ScaledC { m, s }.renorm()
    }

    pub fn from_c64(m: Complex64) -> Self {
        ScaledC { m, s: 0.0 }.renorm()
    }

    pub fn is_zero(&self) -> bool {
        self.m == Complex64::new(0.0, 0.0)
    }

    /// Bring |m| back toward 1 when it drifts far out.
    pub fn renorm(mut self) -> Self {
        let n = self.m.norm();
        if n == 0.0 {
            self.s = 0.0;
            return self;
        }
        if !(1e-80..=1e80).contains(&n) {
            let ln = n.ln();
            self.m /= n;
            self.s += ln;
        }
        self
    }

    /// ln |value|; −∞ for zero.
    pub fn ln_norm(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.s + self.m.norm().ln()
        }
    }

    pub fn arg(&self) -> f64 {
        self.m.arg()
    }

    pub fn mul(&self, o: &ScaledC) -> ScaledC {
        ScaledC {
            m: self.m * o.m,
            s: self.s + o.s,
        }
        .renorm()
    }

    pub fn mul_c64(&self, w: Complex64) -> ScaledC {
        ScaledC {
            m: self.m * w,
            s: self.s,
        }
        .renorm()
    }

    pub fn div(&self, o: &ScaledC) -> ScaledC {
        ScaledC {
            m: self.m / o.m,
            s: self.s - o.s,
        }
        .renorm()
    }

    pub fn neg(&self) -> ScaledC {
        ScaledC {
            m: -self.m,
            s: self.s,
        }
    }

    pub fn conj(&self) -> ScaledC {
        ScaledC {
            m: self.m.conj(),
            s: self.s,
        }
    }

    pub fn add(&self, o: &ScaledC) -> ScaledC {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (big, small) = if self.s >= o.s { (self, o) } else { (o, self) };
        let shift = small.s - big.s;
        if shift < -745.0 {
            // e^shift underflows; the small term is invisible.
            return *big;
        }
        ScaledC {
            m: big.m + small.m * shift.exp(),
            s: big.s,
        }
        .renorm()
    }

    pub fn sub(&self, o: &ScaledC) -> ScaledC {
        self.add(&o.neg())
    }

    /// Collapse to a plain complex number; overflows to ±inf if the scale
    /// is too large, underflows to 0 if too small.
    pub fn to_c64(&self) -> Complex64 {
        self.m * self.s.exp()
    }

    /// Value divided by e^offset, as a plain complex number.
    pub fn to_c64_offset(&self, offset: f64) -> Complex64 {
        self.m * (self.s - offset).exp()
    }
}

/// Scaled polar form: w = exp(log_modulus)·exp(i·phase). Exact zero is
/// encoded by log_modulus = −∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcfValue {
    pub log_modulus: f64,
    /// In (−π, π].
    pub phase: f64,
}

fn wrap_phase(p: f64) -> f64 {
    if p > -std::f64::consts::PI && p <= std::f64::consts::PI {
        return p;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut w = p.rem_euclid(two_pi);
    if w > std::f64::consts::PI {
        w -= two_pi;
    }
    w
}

impl PcfValue {
    pub const ZERO: PcfValue = PcfValue {
        log_modulus: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_modulus: f64, phase: f64) -> Self {
        PcfValue {
            log_modulus,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_c64(w: Complex64) -> Self {
        let n = w.norm();
        if n == 0.0 {
            return PcfValue::ZERO;
        }
        PcfValue {
            log_modulus: n.ln(),
            phase: w.arg(),
        }
    }

    /// From the complex logarithm ln w = lr + i·li.
    pub fn from_ln(lr: f64, li: f64) -> Self {
        PcfValue::new(lr, li)
    }

    pub fn from_scaled(v: &ScaledC) -> Self {
        if v.is_zero() {
            return PcfValue::ZERO;
        }
        PcfValue {
            log_modulus: v.ln_norm(),
            phase: v.arg(),
        }
    }

    pub fn to_scaled(&self) -> ScaledC {
        if self.is_zero() {
            return ScaledC::ZERO;
        }
        ScaledC {
            m: Complex64::from_polar(1.0, self.phase),
            s: self.log_modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_modulus == f64::NEG_INFINITY
    }

    /// Collapse to a plain complex number (may overflow/underflow).
    pub fn to_c64(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_modulus.exp(), self.phase)
    }

    pub fn mul(&self, o: &PcfValue) -> PcfValue {
        if self.is_zero() || o.is_zero() {
            return PcfValue::ZERO;
        }
        PcfValue::new(self.log_modulus + o.log_modulus, self.phase + o.phase)
    }

    pub fn div(&self, o: &PcfValue) -> PcfValue {
        PcfValue::new(self.log_modulus - o.log_modulus, self.phase - o.phase)
    }

    pub fn neg(&self) -> PcfValue {
        if self.is_zero() {
            return *self;
        }
        PcfValue::new(self.log_modulus, self.phase + std::f64::consts::PI)
    }

    pub fn add(&self, o: &PcfValue) -> PcfValue {
        PcfValue::from_scaled(&self.to_scaled().add(&o.to_scaled()))
    }

    pub fn sub(&self, o: &PcfValue) -> PcfValue {
        self.add(&o.neg())
    }

    pub fn mul_c64(&self, w: Complex64) -> PcfValue {
        self.mul(&PcfValue::from_c64(w))
    }

    /// Ratio self/other collapsed to a plain complex number.
    pub fn ratio_c64(&self, o: &PcfValue) -> Complex64 {
        self.div(o).to_c64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_across_huge_scales() {
        let a = ScaledC::new(Complex64::new(1.0, 0.0), 1000.0);
        let b = ScaledC::new(Complex64::new(1.0, 0.0), 990.0);
        let sum = a.add(&b);
        // e^1000 + e^990 = e^1000 (1 + e^-10)
        assert!((sum.ln_norm() - (1000.0 + (1.0 + (-10.0_f64).exp()).ln())).abs() < 1e-12);
        // A term 800 e-folds down is invisible but must not corrupt.
        let c = ScaledC::new(Complex64::new(1.0, 0.0), 200.0);
        let sum2 = a.add(&c);
        assert!((sum2.ln_norm() - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn cancellation_reduces_scale() {
        let a = ScaledC::new(Complex64::new(1.0, 0.0), 500.0);
        let b = ScaledC::new(Complex64::new(-1.0 + 1e-8, 0.0), 500.0);
        let sum = a.add(&b);
        assert!((sum.ln_norm() - (500.0 + (1e-8_f64).ln())).abs() < 1e-6);
    }

    #[test]
    fn pcf_value_round_trip() {
        let w = Complex64::new(-3.0, 4.0);
        let v = PcfValue::from_c64(w);
        assert!((v.to_c64() - w).norm() < 1e-14);
        assert!((v.log_modulus - 5.0_f64.ln()).abs() < 1e-14);
        let z = PcfValue::ZERO;
        assert!(v.mul(&z).is_zero());
        assert_eq!(v.add(&z), v);
    }

    #[test]
    fn phase_wraps_into_principal_range() {
        let v = PcfValue::new(0.0, 3.0 * std::f64::consts::PI + 0.1);
        assert!(v.phase > -std::f64::consts::PI && v.phase <= std::f64::consts::PI);
        assert!((v.phase - (std::f64::consts::PI + 0.1 - 2.0 * std::f64::consts::PI)).abs() < 1e-12);
    }
}
