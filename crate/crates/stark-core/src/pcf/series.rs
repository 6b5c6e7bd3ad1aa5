//! Maclaurin evaluation of U(a,z) about z = 0.
//!
//! The Weber recursion c_{n+2} = (a c_n + c_{n−2}/4)/((n+1)(n+2)) builds the
//! even and odd basis solutions; U is the combination weighted by the
//! Gamma-function values U(a,0), U′(a,0). The combination cancels like
//! e^{Re z²/2}, so the sum carries an a-posteriori cancellation measure and
//! callers reject the result when it exceeds the f64 budget.

use super::gamma::ln_gamma;
use super::scaled::{PcfValue, ScaledC};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

/// U(a,0) and U′(a,0) from
/// U(a,0) = √π / (2^{a/2+1/4} Γ(3/4+a/2)),
/// U′(a,0) = −√π / (2^{a/2−1/4} Γ(1/4+a/2)).
pub fn initial_data(a: Complex64) -> (ScaledC, ScaledC) {
    let half_ln_pi = Complex64::new(0.5 * PI.ln(), 0.0);
    let ln_u = half_ln_pi - (a / 2.0 + 0.25) * LN_2 - ln_gamma(0.75 + a / 2.0);
    let ln_du = half_ln_pi - (a / 2.0 - 0.25) * LN_2 - ln_gamma(0.25 + a / 2.0);
    let u = PcfValue::from_ln(ln_u.re, ln_u.im).to_scaled();
    let du = PcfValue::from_ln(ln_du.re, ln_du.im).to_scaled().neg();
    (u, du)
}

#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub val: ScaledC,
    pub dval: ScaledC,
    /// ln(largest intermediate magnitude / |result|); the f64 result is
    /// trustworthy to ~1e−11 only when this is ≲ 11.
    pub cancel_val: f64,
    pub cancel_dval: f64,
    pub converged: bool,
}

/// Cheap a-priori overestimate (nats) of the cancellation; used to skip
/// the attempt when it obviously cannot succeed in f64.
pub fn cancel_bound(a: Complex64, z: Complex64) -> f64 {
    let r = z.norm();
    0.25 * r * r + a.sqrt().norm() * r
}

const MAX_TERMS: usize = 6000;

/// Sum the series in plain f64 (safe: callers gate on [`cancel_bound`]
/// staying well inside the f64 exponent range).
pub fn maclaurin_u(a: Complex64, z: Complex64) -> SeriesEval {
    let (u0, du0) = initial_data(a);
    if z.norm() == 0.0 {
        return SeriesEval {
            val: u0,
            dval: du0,
            cancel_val: 0.0,
            cancel_dval: 0.0,
            converged: true,
        };
    }

    let z2a = a * z * z;
    let z4q = z * z * z * z * 0.25;
    let inv_z = 1.0 / z;

    // Even series: terms T_n = c_n z^n starting at n = 0.
    let mut e_prev = Complex64::new(0.0, 0.0); // n-2
    let mut e_cur = Complex64::new(1.0, 0.0); // n
    let mut e_sum = e_cur;
    let mut e_dsum = Complex64::new(0.0, 0.0);
    // Odd series starting at n = 1.
    let mut o_prev = Complex64::new(0.0, 0.0);
    let mut o_cur = z;
    let mut o_sum = o_cur;
    let mut o_dsum = Complex64::new(1.0, 0.0);

    let mut peak: f64 = 1.0 + z.norm();
    let mut quiet = 0;
    let mut converged = false;
    let mut n: usize = 0;
    while n < MAX_TERMS {
        // Advance even (n -> n+2) and odd (n+1 -> n+3).
        let e_next = (z2a * e_cur + z4q * e_prev) / (((n + 1) * (n + 2)) as f64);
        let o_next = (z2a * o_cur + z4q * o_prev) / (((n + 2) * (n + 3)) as f64);
        e_prev = e_cur;
        e_cur = e_next;
        o_prev = o_cur;
        o_cur = o_next;
        n += 2;
        e_sum += e_cur;
        o_sum += o_cur;
        e_dsum += (n as f64) * e_cur * inv_z;
        o_dsum += ((n + 1) as f64) * o_cur * inv_z;

        let t = e_cur.norm().max(o_cur.norm());
        peak = peak.max(t).max(e_sum.norm()).max(o_sum.norm());
        if t <= 1e-19 * peak && n >= 8 {
            quiet += 1;
            if quiet >= 4 {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }

    let ue = u0.mul_c64(e_sum);
    let uo = du0.mul_c64(o_sum);
    let val = ue.add(&uo);
    let de = u0.mul_c64(e_dsum);
    let do_ = du0.mul_c64(o_dsum);
    let dval = de.add(&do_);

    // Largest magnitude that entered each combination, against the result.
    let peak_ln = peak.ln();
    let comb_peak = (u0.ln_norm() + peak_ln).max(du0.ln_norm() + peak_ln);
    let cancel_val = comb_peak - val.ln_norm();
    let cancel_dval = comb_peak - dval.ln_norm();

    SeriesEval {
        val,
        dval,
        cancel_val,
        cancel_dval,
        converged,
    }
}
