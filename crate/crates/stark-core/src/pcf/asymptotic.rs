//! Descending expansions of U(a,z) for large |z|.
//!
//! Around infinity the Weber equation has the two formal solutions
//!
//!   P(z) = e^{−z²/4} z^{−a−1/2} Σ_s (−1)^s (1/2+a)_{2s} / (s! (2z²)^s),
//!   Q(z) = e^{+z²/4} z^{ a−1/2} Σ_s        (1/2−a)_{2s} / (s! (2z²)^s).
//!
//! U is P alone while z stays in the Stokes region attached to the positive
//! real axis; past |arg z| = π/4 the Q term enters with the connection
//! coefficient ±i√(2π) e^{∓iπa} / Γ(1/2+a). Both tails are summed to their
//! smallest term; when |Im a| is large the partial sums hump far above the
//! result and the summation transparently reruns in big floats.

use super::bigc::BigC;
use super::gamma::ln_gamma;
use super::scaled::{PcfValue, ScaledC};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A summed tail Σ t_s together with its z-derivative Σ t_s·(−2s)/z.
#[derive(Debug, Clone, Copy)]
pub struct Tail {
    pub sum: ScaledC,
    pub dsum: ScaledC,
    /// |smallest kept term| / |sum| — the truncation error estimate.
    pub minterm_rel: f64,
    pub terms: usize,
}

const MAX_TAIL_TERMS: usize = 30_000;
const F64_CANCEL_BUDGET: f64 = 24.0; // nats

/// Sum the descending tail for the order `a` (recessive form) or `−a`
/// (dominant form has the Pochhammer argument negated).
pub fn descending_tail(a: Complex64, z: Complex64, dominant: bool) -> Tail {
    let (tail, cancel) = tail_f64(a, z, dominant);
    if cancel <= F64_CANCEL_BUDGET {
        return tail;
    }
    tail_big(a, z, dominant, cancel)
}

fn num_pair(a: Complex64, dominant: bool, s: usize) -> (Complex64, Complex64) {
    // Recessive carries (−1)^s (1/2+a)_{2s}; fold the sign into the first
    // factor. Dominant uses (1/2−a)_{2s} with no sign.
    let b = if dominant { -a } else { a };
    let s2 = 2.0 * s as f64;
    let n1 = b + (0.5 + s2);
    let n2 = b + (1.5 + s2);
    if dominant {
        (n1, n2)
    } else {
        (-n1, n2)
    }
}

fn tail_f64(a: Complex64, z: Complex64, dominant: bool) -> (Tail, f64) {
    let inv2z2 = 1.0 / (2.0 * z * z);
    let inv_z = 1.0 / z;
    let mut t = ScaledC::from_c64(Complex64::new(1.0, 0.0));
    let mut sum = t;
    let mut dsum = ScaledC::ZERO;
    let mut peak: f64 = 0.0;
    let mut prev_ln = 0.0_f64;
    let mut shrinking = false;
    let mut min_rel = 1.0_f64;
    let mut s = 0usize;
    loop {
        if s >= MAX_TAIL_TERMS {
            break;
        }
        let (n1, n2) = num_pair(a, dominant, s);
        let factor = n1 * n2 * inv2z2 / ((s + 1) as f64);
        let t_next = t.mul_c64(factor);
        let ln_next = t_next.ln_norm();
        if shrinking && ln_next >= prev_ln {
            // Past the asymptotic minimum: truncate.
            min_rel = (prev_ln - sum.ln_norm()).exp();
            break;
        }
        if ln_next < prev_ln {
            shrinking = true;
        }
        t = t_next;
        s += 1;
        sum = sum.add(&t);
        dsum = dsum.add(&t.mul_c64(inv_z * (-2.0 * s as f64)));
        peak = peak.max(ln_next).max(sum.ln_norm());
        prev_ln = ln_next;
        if ln_next - sum.ln_norm() < (1e-18_f64).ln() {
            min_rel = (ln_next - sum.ln_norm()).exp();
            break;
        }
    }
    let dsum_ln = if dsum.is_zero() {
        sum.ln_norm()
    } else {
        dsum.ln_norm()
    };
    let cancel = peak - sum.ln_norm().min(dsum_ln);
    (
        Tail {
            sum,
            dsum,
            minterm_rel: min_rel,
            terms: s,
        },
        cancel,
    )
}

fn tail_big(a: Complex64, z: Complex64, dominant: bool, cancel_nats: f64) -> Tail {
    let prec = (cancel_nats * 1.5 + 200.0).min(60_000.0) as u64;
    let inv2z2 = BigC::from_c64(2.0 * z * z).recip(prec);
    let inv_z = BigC::from_c64(z).recip(prec);
    let mut t = BigC::from_c64(Complex64::new(1.0, 0.0));
    let mut sum = t.clone();
    let mut dsum = BigC::zero();
    let mut prev_ln = 0.0_f64;
    let mut shrinking = false;
    let mut min_rel = 1.0_f64;
    let mut s = 0usize;
    loop {
        if s >= MAX_TAIL_TERMS {
            break;
        }
        let (n1, n2) = num_pair(a, dominant, s);
        let t_next = t
            .mul(&BigC::from_c64(n1), prec)
            .mul(&BigC::from_c64(n2), prec)
            .mul(&inv2z2, prec)
            .div_u64((s + 1) as u64, prec);
        let ln_next = t_next.ln_size();
        if shrinking && ln_next >= prev_ln {
            min_rel = (prev_ln - sum.ln_size()).exp();
            break;
        }
        if ln_next < prev_ln {
            shrinking = true;
        }
        t = t_next;
        s += 1;
        sum = sum.add(&t, prec);
        let dterm = t
            .mul(&inv_z, prec)
            .mul(&BigC::from_c64(Complex64::new(-2.0 * s as f64, 0.0)), prec);
        dsum = dsum.add(&dterm, prec);
        prev_ln = ln_next;
        if ln_next - sum.ln_size() < (1e-18_f64).ln() {
            min_rel = (ln_next - sum.ln_size()).exp();
            break;
        }
    }
    Tail {
        sum: sum.to_scaled(),
        dsum: dsum.to_scaled(),
        minterm_rel: min_rel,
        terms: s,
    }
}

/// ln of the recessive-form prefactor P and the bracket needed for U′.
fn p_prefactor(a: Complex64, z: Complex64) -> (ScaledC, Complex64) {
    let ln_z = z.ln();
    let ln_p = -z * z / 4.0 + (-a - 0.5) * ln_z;
    let p = PcfValue::from_ln(ln_p.re, ln_p.im).to_scaled();
    // d ln P / dz
    let dlog = -z / 2.0 + (-a - 0.5) / z;
    (p, dlog)
}

fn q_prefactor(a: Complex64, z: Complex64) -> (ScaledC, Complex64) {
    let ln_z = z.ln();
    let ln_q = z * z / 4.0 + (a - 0.5) * ln_z;
    let q = PcfValue::from_ln(ln_q.re, ln_q.im).to_scaled();
    let dlog = z / 2.0 + (a - 0.5) / z;
    (q, dlog)
}

/// ln of the connection coefficient C for the given half plane (upper:
/// arg z > 0). C = ±i √(2π) e^{∓iπa} / Γ(1/2+a).
pub fn cross_coefficient_ln(a: Complex64, upper: bool) -> Complex64 {
    let base = Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) - ln_gamma(0.5 + a);
    let ipa = Complex64::new(0.0, PI);
    if upper {
        base + Complex64::new(0.0, PI / 2.0) - ipa * a
    } else {
        base - Complex64::new(0.0, PI / 2.0) + ipa * a
    }
}

/// ln upper bound of |C·Q / P|: how visible the dominant-type component
/// could possibly be against the recessive one, whichever half plane.
pub fn cross_visibility_ln(a: Complex64, z: Complex64) -> f64 {
    let lg = ln_gamma(0.5 + a).re;
    let ln_c = 0.5 * (2.0 * PI).ln() - lg + PI * a.im.abs();
    let ln_qp = (z * z / 2.0).re + (2.0 * a * z.ln()).re;
    ln_c + ln_qp
}

#[derive(Debug, Clone, Copy)]
pub struct AsymEval {
    pub val: ScaledC,
    pub dval: ScaledC,
    /// Combined truncation estimate relative to the value.
    pub rel_err: f64,
    #[allow(dead_code)] // test diagnostics
    pub cross_included: bool,
    pub terms: usize,
}

/// Recessive-form-only evaluation (the correct representation throughout
/// the Stokes region attached to the positive real axis).
pub fn one_term_eval(a: Complex64, z: Complex64) -> AsymEval {
    let s1 = descending_tail(a, z, false);
    let (p, dlog) = p_prefactor(a, z);
    let val = p.mul(&s1.sum);
    let dval = p.mul(&s1.sum.mul_c64(dlog).add(&s1.dsum));
    AsymEval {
        val,
        dval,
        rel_err: s1.minterm_rel,
        cross_included: false,
        terms: s1.terms,
    }
}

/// Sector-correct expansion: recessive term everywhere, plus the dominant
/// term with the connection coefficient when π/4 < |arg z|. At least
/// `MIN_TERMS` corrections are kept in each retained tail.
pub fn sector_eval(a: Complex64, z: Complex64) -> AsymEval {
    let base = one_term_eval(a, z);
    let theta = z.arg();
    if theta.abs() <= PI / 4.0 {
        return base;
    }
    let upper = theta > 0.0;
    let ln_c = cross_coefficient_ln(a, upper);
    let c = PcfValue::from_ln(ln_c.re, ln_c.im).to_scaled();
    let s2 = descending_tail(a, z, true);
    let (q, dlog_q) = q_prefactor(a, z);
    let cq = c.mul(&q);
    let cross_val = cq.mul(&s2.sum);
    let cross_dval = cq.mul(&s2.sum.mul_c64(dlog_q).add(&s2.dsum));
    let val = base.val.add(&cross_val);
    let dval = base.dval.add(&cross_dval);
    // Weight each tail's truncation by its component share.
    let v_ln = val.ln_norm();
    let rel = base.rel_err * (base.val.ln_norm() - v_ln).exp()
        + s2.minterm_rel * (cross_val.ln_norm() - v_ln).exp();
    AsymEval {
        val,
        dval,
        rel_err: rel,
        cross_included: true,
        terms: base.terms.max(s2.terms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_gaussian_on_axis() {
        // U(-1/2, z) = e^{-z²/4}; the tail degenerates to 1.
        let a = Complex64::new(-0.5, 0.0);
        let z = Complex64::new(20.0, 0.0);
        let ev = one_term_eval(a, z);
        assert!((ev.val.ln_norm() + 100.0).abs() < 1e-10);
        assert!(ev.val.to_c64_offset(-100.0).im.abs() < 1e-12);
        // Derivative: -z/2 e^{-z²/4} → ln|U'| = ln(10) - 100.
        assert!((ev.dval.ln_norm() - (10.0_f64.ln() - 100.0)).abs() < 1e-10);
    }

    #[test]
    fn dominant_term_activates_on_imaginary_axis() {
        // At z = 20i the recessive form carries e^{+100}; for a = -1/2 the
        // cross coefficient 1/Γ(0) kills the extra term exactly.
        let a = Complex64::new(-0.5, 0.0);
        let z = Complex64::new(0.0, 20.0);
        let ev = sector_eval(a, z);
        assert!(ev.cross_included);
        assert!((ev.val.ln_norm() - 100.0).abs() < 1e-10);
        // Against the exact value e^{-z²/4} = e^{+100}.
        let exact = PcfValue::from_ln(100.0, 0.0).to_scaled();
        assert!((ev.val.div(&exact).to_c64() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn erfc_cross_term_on_negative_axis() {
        // U(1/2, z) = e^{z²/4} √(π/2) erfc(z/√2); as z → −∞ it tends to
        // √(2π) e^{z²/4}, i.e. the dominant term alone with C = √(2π).
        let a = Complex64::new(0.5, 0.0);
        let z = Complex64::new(-14.0, 1e-12); // just above the cut
        let ev = sector_eval(a, z);
        let expect_ln = 0.5 * (2.0 * PI).ln() + (z * z / 4.0).re;
        assert!(
            (ev.val.ln_norm() - expect_ln).abs() < 1e-8,
            "{} vs {}",
            ev.val.ln_norm(),
            expect_ln
        );
    }

    #[test]
    fn big_float_rerun_matches_f64_where_both_work() {
        // Moderate Im a: f64 path fine; force the big path and compare.
        let a = Complex64::new(-0.5, 6.0);
        let z = Complex64::new(17.0, -4.0);
        let (t64, cancel) = tail_f64(a, z, false);
        assert!(cancel <= F64_CANCEL_BUDGET, "cancel {cancel}");
        let tbig = tail_big(a, z, false, 40.0);
        assert!(
            (t64.sum.div(&tbig.sum).to_c64() - 1.0).norm() < 1e-12,
            "sum mismatch"
        );
        assert!((t64.dsum.div(&tbig.dsum).to_c64() - 1.0).norm() < 1e-11);
    }

    #[test]
    fn visibility_bound_sign() {
        // On the positive real axis the dominant component is huge.
        let a = Complex64::new(-0.5, 2.0);
        assert!(cross_visibility_ln(a, Complex64::new(10.0, 0.0)) > 0.0);
        // On the imaginary axis it is invisible.
        assert!(cross_visibility_ln(a, Complex64::new(0.0, 10.0)) < -20.0);
    }
}
