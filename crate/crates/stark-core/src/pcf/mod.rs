//! The parabolic cylinder function U(a,z) for complex order and argument.
//!
//! U(a,·) is the Weber-equation solution recessive as Re z → +∞. The
//! evaluator picks a route per point:
//!
//! 1. Maclaurin series about 0 while its measured cancellation stays
//!    inside the f64 budget;
//! 2. the descending expansion at the point itself when its smallest term
//!    is below tolerance and the dominant-type component is provably
//!    absent or negligible there;
//! 3. otherwise far-field seeding on (or near) the target ray and scaled
//!    Runge–Kutta transport inward.
//!
//! Arguments behind |arg z| = π/2 are first folded into the right half
//! plane with the exact connection
//!
//!   U(a,W) = ∓i e^{∓iπa} U(a,−W) + √(2π)/Γ(1/2+a) e^{∓iπa/2 ± iπ/4} U(−a,∓iW)
//!
//! (upper signs for arg W > π/2, lower for arg W < −π/2), and orders with
//! Im a < 0 are reflected through U(ā,z̄) = conj U(a,z).
//!
//! All values are scaled (log-modulus + phase): the physics multiplies
//! them by e^{±z²/4}-sized factors that overflow doubles near |z| ≈ 38.

pub mod gamma;
pub mod oracle;
pub mod scaled;

mod asymptotic;
mod bigc;
mod series;
mod transport;

pub use scaled::{PcfValue, ScaledC};

pub(crate) use transport::march_weber;

/// Recessive-form expansion value, derivative and truncation estimate at
/// z — exposed for seeding marches along the physics line.
pub(crate) fn one_term_asymptotic(a: Complex64, z: Complex64) -> (ScaledC, ScaledC, f64) {
    let ev = asymptotic::one_term_eval(a, z);
    (ev.val, ev.dval, ev.rel_err)
}

use crate::model::ModelParams;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Diagnostics attached to an evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PcfFlags {
    /// Set when the two regimes disagree beyond 1e−6 in the overlap band.
    pub accuracy_loss: bool,
    /// Set when arg z sits within 0.02 rad of ±3π/4 (asymptotic sector
    /// boundary).
    pub sector_boundary: bool,
}

/// U(a,z) with its z-derivative, in scaled polar form.
#[derive(Debug, Clone, Copy)]
pub struct PcfEval {
    pub value: PcfValue,
    pub derivative: PcfValue,
    pub flags: PcfFlags,
}

/// The four field-case basis values at one argument point:
/// U₁ = U(a,y), U₂ = U(−a,−iy) and their Ω₂ partners Ũ₁, Ũ₂.
#[derive(Debug, Clone, Copy)]
pub struct PcfQuad {
    pub u1: PcfValue,
    pub u2: PcfValue,
    pub u1_tilde: PcfValue,
    pub u2_tilde: PcfValue,
}

const SERIES_ATTEMPT_BOUND: f64 = 640.0; // nats of f64 exponent headroom
const SERIES_ACCEPT_VAL: f64 = 11.5; // nats, measured
const SERIES_ACCEPT_DVAL: f64 = 13.0;
const ASYM_TOL: f64 = 1e-11;
const TRANSPORT_RTOL: f64 = 1e-12;

/// Connection data folding a left-half-plane argument into the right one:
/// U(a,W) = coeff_same·U(a, −W) + coeff_cross·U(−a, w_cross), plus the
/// chain-rule factors for the derivative.
pub(crate) struct ConnectionSplit {
    pub coeff_same: ScaledC,
    pub coeff_cross: ScaledC,
    pub z_same: Complex64,
    pub z_cross: Complex64,
    /// dU/dW = d_same·coeff_same·U′(a,−W) + d_cross·coeff_cross·U′(−a,w_cross)
    pub d_same: Complex64,
    pub d_cross: Complex64,
}

pub(crate) fn connection_split(a: Complex64, w: Complex64) -> ConnectionSplit {
    let upper = w.arg() > 0.0;
    let (ln_same, ln_cross, z_cross, d_cross) = if upper {
        // U(a,W) = −i e^{−iπa} U(a,−W) + B₂ U(−a,−iW)
        let ln_same = Complex64::new(PI * a.im, -FRAC_PI_2 - PI * a.re);
        let ln_b2 = Complex64::new(0.5 * (2.0 * PI).ln(), FRAC_PI_4)
            - gamma::ln_gamma(0.5 + a)
            - Complex64::new(0.0, FRAC_PI_2) * a;
        (
            ln_same,
            ln_b2,
            -Complex64::i() * w,
            Complex64::new(0.0, -1.0),
        )
    } else {
        // U(a,W) = i e^{iπa} U(a,−W) + B₁ U(−a, iW)
        let ln_same = Complex64::new(-PI * a.im, FRAC_PI_2 + PI * a.re);
        let ln_b1 = Complex64::new(0.5 * (2.0 * PI).ln(), -FRAC_PI_4)
            - gamma::ln_gamma(0.5 + a)
            + Complex64::new(0.0, FRAC_PI_2) * a;
        (ln_same, ln_b1, Complex64::i() * w, Complex64::new(0.0, 1.0))
    };
    ConnectionSplit {
        coeff_same: PcfValue::from_ln(ln_same.re, ln_same.im).to_scaled(),
        coeff_cross: PcfValue::from_ln(ln_cross.re, ln_cross.im).to_scaled(),
        z_same: -w,
        z_cross,
        d_same: Complex64::new(-1.0, 0.0),
        d_cross,
    }
}

/// Full-plane engine: (U, U′) as scaled complex values.
pub(crate) fn eval_u_scaled(a: Complex64, z: Complex64) -> Result<(ScaledC, ScaledC)> {
    if !a.re.is_finite() || !a.im.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParams("non-finite pcf input".into()));
    }
    if z.norm() == 0.0 {
        return Ok(series::initial_data(a));
    }
    if a.im < 0.0 {
        let (v, d) = eval_u_scaled(a.conj(), z.conj())?;
        return Ok((v.conj(), d.conj()));
    }
    let theta = z.arg();
    if theta.abs() > FRAC_PI_2 + 1e-12 {
        let split = connection_split(a, z);
        let (v1, d1) = eval_u_scaled(a, split.z_same)?;
        let (v2, d2) = eval_u_scaled(-a, split.z_cross)?;
        let t1 = split.coeff_same.mul(&v1);
        let t2 = split.coeff_cross.mul(&v2);
        let val = t1.add(&t2);
        // The two terms cancel like e^{π|Im a|/2} near the order's turning
        // rays; beyond the f64 budget the result would be pure noise.
        let cancel = t1.ln_norm().max(t2.ln_norm()) - val.ln_norm();
        if cancel > 30.0 {
            return Err(Error::AccuracyLoss(format!(
                "connection cancellation of {cancel:.1} nats at a={a}, z={z}"
            )));
        }
        let dval = split
            .coeff_same
            .mul(&d1)
            .mul_c64(split.d_same)
            .add(&split.coeff_cross.mul(&d2).mul_c64(split.d_cross));
        return Ok((val, dval));
    }

    // Right half plane proper. The series is attempted whenever its
    // partial sums stay inside the f64 exponent range: on dominant-side
    // rays it has little cancellation and reaches far out, and a failed
    // attempt is cheap.
    let (u0, du0) = series::initial_data(a);
    let growth = series::cancel_bound(a, z) + u0.ln_norm().max(du0.ln_norm()).max(0.0);
    if z.norm() <= 48.0 && growth <= SERIES_ATTEMPT_BOUND {
        let ev = series::maclaurin_u(a, z);
        if ev.converged && ev.cancel_val <= SERIES_ACCEPT_VAL && ev.cancel_dval <= SERIES_ACCEPT_DVAL
        {
            return Ok((ev.val, ev.dval));
        }
    }
    // Direct descending expansion: sound when truncation passes and the
    // dominant-type admixture is either provably zero (inside the wedge)
    // or provably invisible.
    let in_wedge = theta.abs() <= FRAC_PI_4 - 0.01;
    if in_wedge || asymptotic::cross_visibility_ln(a, z) <= -30.0 {
        let ev = asymptotic::one_term_eval(a, z);
        if ev.rel_err <= ASYM_TOL {
            return Ok((ev.val, ev.dval));
        }
    }
    transport::eval_by_transport(a, z, TRANSPORT_RTOL)
}

/// Regime switch radius used by the overlap-band diagnostics.
pub fn z_switch(a: Complex64) -> f64 {
    6.0 * a.norm().sqrt().max(1.0)
}

/// (U, U′) in scaled form — the engine output without the polar
/// conversion, for callers that keep computing with the values.
pub fn pcf_u_scaled(a: Complex64, z: Complex64) -> Result<(ScaledC, ScaledC)> {
    eval_u_scaled(a, z)
}

/// U(a,z) to ≲1e−10 relative in the series regime and ≲1e−8 in the
/// asymptotic regime, with overlap-band cross-validation.
pub fn pcf_u(a: Complex64, z: Complex64) -> Result<PcfEval> {
    let (val, dval) = eval_u_scaled(a, z)?;
    let mut flags = PcfFlags::default();
    let zs = z_switch(a);
    if z.norm() > 0.0 && ((z.norm() - zs) / zs).abs() <= 0.02 {
        // Both regimes are available here; disagreement flags the result.
        let asym = asymptotic::sector_eval(a, z);
        if asym.rel_err < 1e-7 {
            let rel = val.sub(&asym.val).ln_norm() - val.ln_norm();
            if rel > (1e-6_f64).ln() {
                flags.accuracy_loss = true;
            }
        }
    }
    Ok(PcfEval {
        value: PcfValue::from_scaled(&val),
        derivative: PcfValue::from_scaled(&dval),
        flags,
    })
}

/// The sector-correct descending expansion alone (no series fallback):
/// recessive term for |arg z| < 3π/4 plus the dominant term carrying the
/// √(2π)/Γ(1/2+a) connection coefficient past |arg z| = π/4. Requires
/// |z| ≥ z_switch(a).
pub fn pcf_asymptotic(a: Complex64, z: Complex64) -> Result<PcfEval> {
    if z.norm() < 0.999 * z_switch(a) {
        return Err(Error::InvalidParams(format!(
            "pcf_asymptotic needs |z| >= z_switch = {}, got {}",
            z_switch(a),
            z.norm()
        )));
    }
    let ev = asymptotic::sector_eval(a, z);
    let mut flags = PcfFlags::default();
    if (z.arg().abs() - 3.0 * FRAC_PI_4).abs() < 0.02 {
        flags.sector_boundary = true;
    }
    if ev.rel_err > 1e-8 {
        flags.accuracy_loss = true;
    }
    Ok(PcfEval {
        value: PcfValue::from_scaled(&ev.val),
        derivative: PcfValue::from_scaled(&ev.dval),
        flags,
    })
}

/// Residual of the two first-order recurrences
///   ½zU(a,z) + U′(a,z) = −(a+½)U(a+1,z),
///   ½zU(a,z) − U′(a,z) = U(a−1,z),
/// each normalized by its largest participating magnitude. U(a±1,·) are
/// evaluated independently, so this is a genuine cross-check.
pub fn pcf_recurrence_check(a: Complex64, z: Complex64) -> Result<f64> {
    let (u, du) = eval_u_scaled(a, z)?;
    let (up, _) = eval_u_scaled(a + 1.0, z)?;
    let (um, _) = eval_u_scaled(a - 1.0, z)?;
    let half_z_u = u.mul_c64(z * 0.5);

    let t1 = up.mul_c64(a + 0.5);
    let r1 = half_z_u.add(&du).add(&t1);
    let s1 = half_z_u
        .ln_norm()
        .max(du.ln_norm())
        .max(t1.ln_norm())
        .max(-745.0);

    let r2 = half_z_u.sub(&du).sub(&um);
    let s2 = half_z_u
        .ln_norm()
        .max(du.ln_norm())
        .max(um.ln_norm())
        .max(-745.0);

    let res1 = if r1.is_zero() {
        0.0
    } else {
        (r1.ln_norm() - s1).exp()
    };
    let res2 = if r2.is_zero() {
        0.0
    } else {
        (r2.ln_norm() - s2).exp()
    };
    Ok(res1 + res2)
}

/// Weber order for the physics path: a = i·m²c³/(2F) − 1/2.
pub fn weber_order(params: &ModelParams) -> Complex64 {
    let m = params.m;
    let c = params.c;
    Complex64::new(-0.5, m * m * c * c * c / (2.0 * params.f))
}

/// Scaled coordinate y(x) = e^{−iπ/4} √(2c/F) (E + Fx)/c.
pub fn weber_argument(params: &ModelParams, e: Complex64, x: f64) -> Complex64 {
    let c = params.c;
    let f = params.f;
    Complex64::from_polar(1.0, -FRAC_PI_4) * (2.0 * c / f).sqrt() * ((e + f * x) / c)
}

/// All four basis values at y(x), with the Ω₂ prefactors applied:
/// Ũ = −(1/mc)√(2F/c) e^{iπ/4} [y/2 + d/dy] U.
pub fn pcf_quad(params: &ModelParams, e: Complex64, x: f64) -> Result<PcfQuad> {
    if params.f <= 0.0 {
        return Err(Error::InvalidParams("pcf_quad needs F > 0".into()));
    }
    let a = weber_order(params);
    let y = weber_argument(params, e, x);
    let k_tilde = -Complex64::from_polar(1.0, FRAC_PI_4) / (params.m * params.c)
        * (2.0 * params.f / params.c).sqrt();

    let (u1, du1_dy) = eval_u_scaled(a, y)?;
    let w = -Complex64::i() * y;
    let (u2, du2_dw) = eval_u_scaled(-a, w)?;
    let du2_dy = du2_dw.mul_c64(-Complex64::i());

    let u1_tilde = u1.mul_c64(y * 0.5).add(&du1_dy).mul_c64(k_tilde);
    let u2_tilde = u2.mul_c64(y * 0.5).add(&du2_dy).mul_c64(k_tilde);

    Ok(PcfQuad {
        u1: PcfValue::from_scaled(&u1),
        u2: PcfValue::from_scaled(&u2),
        u1_tilde: PcfValue::from_scaled(&u1_tilde),
        u2_tilde: PcfValue::from_scaled(&u2_tilde),
    })
}
