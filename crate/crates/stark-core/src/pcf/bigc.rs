//! Minimal fixed-precision big floats for one job: summing the descending
//! asymptotic series when its internal hump exceeds what f64 cancellation
//! allows (large |Im a|). Only ring operations and small-integer division
//! are needed, so this stays deliberately tiny: sign/magnitude mantissa
//! over `BigUint` with a binary exponent, truncating rounding.

use num_bigint::BigUint;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct BigF {
    neg: bool,
    mant: BigUint,
    /// value = ±mant · 2^exp
    exp: i64,
}

impl BigF {
    pub fn zero() -> Self {
        BigF {
            neg: false,
            mant: BigUint::from(0u32),
            exp: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.bits() == 0
    }

    /// Exact embedding of an f64.
    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Self::zero();
        }
        assert!(x.is_finite());
        let neg = x < 0.0;
        let (mant, exp) = integer_decode(x.abs());
        BigF {
            neg,
            mant: BigUint::from(mant),
            exp,
        }
    }

    /// Mantissa head as f64 plus the binary exponent of the units place,
    /// i.e. value ≈ head · 2^exp2.
    pub fn to_f64_exp2(&self) -> (f64, i64) {
        if self.is_zero() {
            return (0.0, 0);
        }
        let bits = self.mant.bits() as i64;
        // Keep the top 64 bits.
        let shift = (bits - 64).max(0);
        let head_big = &self.mant >> (shift as u64);
        let digits = head_big.to_u64_digits();
        let head = digits.last().copied().unwrap_or(0) as f64
            * if digits.len() > 1 {
                // Should not happen after the shift, but stay safe.
                2f64.powi(64 * (digits.len() as i32 - 1))
            } else {
                1.0
            };
        let v = if self.neg { -head } else { head };
        (v, self.exp + shift)
    }

    /// ln |value|; −∞ for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.to_f64_exp2();
        m.abs().ln() + e as f64 * std::f64::consts::LN_2
    }

    fn trunc(mut self, prec: u64) -> Self {
        let bits = self.mant.bits();
        if bits > prec {
            let drop = bits - prec;
            self.mant >>= drop;
            self.exp += drop as i64;
        }
        if self.is_zero() {
            self.neg = false;
            self.exp = 0;
        }
        self
    }

    pub fn add(&self, o: &BigF, prec: u64) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        // Align to the smaller exponent, but drop a term that is entirely
        // below the other's precision window.
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let shift = (hi.exp - lo.exp) as u64;
        if shift > prec + 64 + hi.mant.bits() {
            return hi.clone().trunc(prec);
        }
        let hi_mant = &hi.mant << shift;
        let (neg, mant) = if hi.neg == lo.neg {
            (hi.neg, &hi_mant + &lo.mant)
        } else if hi_mant >= lo.mant {
            (hi.neg, &hi_mant - &lo.mant)
        } else {
            (lo.neg, &lo.mant - &hi_mant)
        };
        BigF {
            neg,
            mant,
            exp: lo.exp,
        }
        .trunc(prec)
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        if !r.is_zero() {
            r.neg = !r.neg;
        }
        r
    }

    pub fn sub(&self, o: &BigF, prec: u64) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &BigF, prec: u64) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        BigF {
            neg: self.neg != o.neg,
            mant: &self.mant * &o.mant,
            exp: self.exp + o.exp,
        }
        .trunc(prec)
    }

    pub fn div_u64(&self, d: u64, prec: u64) -> Self {
        assert!(d > 0);
        if self.is_zero() {
            return Self::zero();
        }
        // Pre-shift so the quotient keeps prec significant bits.
        let extra = prec + 64;
        let num = &self.mant << extra;
        BigF {
            neg: self.neg,
            mant: num / BigUint::from(d),
            exp: self.exp - extra as i64,
        }
        .trunc(prec)
    }

    /// Full division, used once per series to form 1/(2z²).
    pub fn div(&self, o: &BigF, prec: u64) -> Self {
        assert!(!o.is_zero());
        if self.is_zero() {
            return Self::zero();
        }
        let extra = prec + o.mant.bits() + 64;
        let num = &self.mant << extra;
        BigF {
            neg: self.neg != o.neg,
            mant: num / &o.mant,
            exp: self.exp - extra as i64 - o.exp,
        }
        .trunc(prec)
    }
}

fn integer_decode(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    (mantissa, exponent - 1075)
}

#[derive(Debug, Clone)]
pub struct BigC {
    pub re: BigF,
    pub im: BigF,
}

impl BigC {
    pub fn zero() -> Self {
        BigC {
            re: BigF::zero(),
            im: BigF::zero(),
        }
    }

    pub fn from_c64(z: Complex64) -> Self {
        BigC {
            re: BigF::from_f64(z.re),
            im: BigF::from_f64(z.im),
        }
    }

    pub fn add(&self, o: &BigC, prec: u64) -> Self {
        BigC {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn mul(&self, o: &BigC, prec: u64) -> Self {
        BigC {
            re: self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec),
            im: self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec),
        }
    }

    pub fn div_u64(&self, d: u64, prec: u64) -> Self {
        BigC {
            re: self.re.div_u64(d, prec),
            im: self.im.div_u64(d, prec),
        }
    }

    /// Reciprocal via the conjugate.
    pub fn recip(&self, prec: u64) -> Self {
        let n = self
            .re
            .mul(&self.re, prec)
            .add(&self.im.mul(&self.im, prec), prec);
        BigC {
            re: self.re.div(&n, prec),
            im: self.im.neg().div(&n, prec),
        }
    }

    /// ln of the max component magnitude — cheap size probe for hump and
    /// truncation tracking.
    pub fn ln_size(&self) -> f64 {
        self.re.ln_abs().max(self.im.ln_abs())
    }

    /// Collapse to mantissa·e^s form.
    pub fn to_scaled(&self) -> crate::pcf::scaled::ScaledC {
        let (mr, er) = self.re.to_f64_exp2();
        let (mi, ei) = self.im.to_f64_exp2();
        if mr == 0.0 && mi == 0.0 {
            return crate::pcf::scaled::ScaledC::ZERO;
        }
        let e_common = er.max(ei);
        let re = mr * 2f64.powi((er - e_common).max(-1074) as i32);
        let im = mi * 2f64.powi((ei - e_common).max(-1074) as i32);
        crate::pcf::scaled::ScaledC::new(
            Complex64::new(re, im),
            e_common as f64 * std::f64::consts::LN_2,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_f64() {
        // Compare in log form: reconstructing m·2^e directly can squeeze
        // the factor 2^e through the subnormal range.
        for &x in &[1.0, -3.5, 1e-300, 6.02e23, -0.1] {
            let b = BigF::from_f64(x);
            let (m, e) = b.to_f64_exp2();
            assert_eq!(m < 0.0, x < 0.0);
            let ln_back = m.abs().ln() + e as f64 * std::f64::consts::LN_2;
            assert!(
                (ln_back - x.abs().ln()).abs() < 1e-13,
                "{x}: ln {} vs {}",
                ln_back,
                x.abs().ln()
            );
            assert!((b.ln_abs() - x.abs().ln()).abs() < 1e-13);
        }
    }

    #[test]
    fn catastrophic_cancellation_survives() {
        // (1 + 2^-200) - 1 at 300 bits of precision.
        let prec = 300;
        let one = BigF::from_f64(1.0);
        let tiny = BigF {
            neg: false,
            mant: BigUint::from(1u32),
            exp: -200,
        };
        let sum = one.add(&tiny, prec);
        let diff = sum.sub(&one, prec);
        let (m, e) = diff.to_f64_exp2();
        assert!((m * 2f64.powi(e as i32) - 2f64.powi(-200)).abs() < 1e-75);
    }

    #[test]
    fn complex_ops_match_f64() {
        let prec = 200;
        let a = Complex64::new(1.25, -0.5);
        let b = Complex64::new(-2.0, 3.0);
        let ab = BigC::from_c64(a).mul(&BigC::from_c64(b), prec).to_scaled();
        assert!((ab.to_c64() - a * b).norm() < 1e-14);
        let r = BigC::from_c64(b).recip(prec).to_scaled();
        assert!((r.to_c64() - 1.0 / b).norm() < 1e-14);
        let s = BigC::from_c64(a)
            .add(&BigC::from_c64(b), prec)
            .div_u64(4, prec)
            .to_scaled();
        assert!((s.to_c64() - (a + b) / 4.0).norm() < 1e-14);
    }
}
