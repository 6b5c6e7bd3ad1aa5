//! Scaled Dormand–Prince transport of Weber solutions along paths in the
//! complex plane.
//!
//! Every leg marches in the direction in which the tracked solution gains
//! (or holds) dominance, so admixture of the unwanted solution decays.
//! U(a,·) is recessive on rays |arg z| < π/4 and dominant on
//! π/4 < |arg z| < 3π/4, which fixes the geometry:
//!
//! * targets with |arg z| ≤ π/4 (+ a small radius-dependent band): seed
//!   the one-term expansion far out at the angle ±(π/4 − 0.35), where its
//!   Stokes multiplier provably vanishes, swing an arc to the target
//!   angle (the dominance ratio is monotone along it for the seed radius
//!   ≥ 2.4√|a|), then march radially inward;
//! * targets past the band: seed from the Maclaurin series at a smaller
//!   radius on the target ray and march radially outward.
//!
//! State magnitudes traverse hundreds of e-folds; the integrator keeps a
//! separate log scale and renormalizes after every accepted step.

use super::asymptotic::one_term_eval;
use super::scaled::ScaledC;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// (w, w′) with a common factor e^s split off.
#[derive(Debug, Clone, Copy)]
pub struct WeberState {
    pub w: Complex64,
    pub dw: Complex64,
    pub s: f64,
}

impl WeberState {
    pub fn value(&self) -> ScaledC {
        ScaledC::new(self.w, self.s)
    }
    pub fn deriv(&self) -> ScaledC {
        ScaledC::new(self.dw, self.s)
    }
}

/// Dormand–Prince 5(4) along z(t), t from 0 to 1.
fn dopri5<P>(a: Complex64, path: P, mut st: WeberState, rtol: f64) -> Result<WeberState>
where
    P: Fn(f64) -> (Complex64, Complex64), // (z, dz/dt)
{
    let f = |t: f64, w: Complex64, dw: Complex64| -> (Complex64, Complex64) {
        let (z, dz) = path(t);
        let q = z * z * 0.25 + a;
        (dz * dw, dz * q * w)
    };

    // Local wavenumber in z-units and in path-parameter units.
    let k_z = |t: f64| -> f64 {
        let (z, _) = path(t);
        (z * z * 0.25 + a).norm().sqrt() + 1e-30
    };
    let k_t = |t: f64| -> f64 {
        let (_, dz) = path(t);
        k_z(t) * dz.norm() + 1e-30
    };

    let mut t = 0.0_f64;
    let mut h = (0.05 / k_t(0.0)).min(0.1).max(1e-10);
    let mut steps: u64 = 0;
    const MAX_STEPS: u64 = 40_000_000;

    while t < 1.0 {
        if steps > MAX_STEPS {
            return Err(Error::AccuracyLoss("transport step limit exceeded".into()));
        }
        steps += 1;
        if t + h > 1.0 {
            h = 1.0 - t;
        }

        let (w0, v0) = (st.w, st.dw);
        let (k1w, k1v) = f(t, w0, v0);
        let (k2w, k2v) = f(t + 0.2 * h, w0 + h * 0.2 * k1w, v0 + h * 0.2 * k1v);
        let (k3w, k3v) = f(
            t + 0.3 * h,
            w0 + h * (3.0 / 40.0 * k1w + 9.0 / 40.0 * k2w),
            v0 + h * (3.0 / 40.0 * k1v + 9.0 / 40.0 * k2v),
        );
        let (k4w, k4v) = f(
            t + 0.8 * h,
            w0 + h * (44.0 / 45.0 * k1w - 56.0 / 15.0 * k2w + 32.0 / 9.0 * k3w),
            v0 + h * (44.0 / 45.0 * k1v - 56.0 / 15.0 * k2v + 32.0 / 9.0 * k3v),
        );
        let (k5w, k5v) = f(
            t + 8.0 / 9.0 * h,
            w0 + h
                * (19372.0 / 6561.0 * k1w - 25360.0 / 2187.0 * k2w + 64448.0 / 6561.0 * k3w
                    - 212.0 / 729.0 * k4w),
            v0 + h
                * (19372.0 / 6561.0 * k1v - 25360.0 / 2187.0 * k2v + 64448.0 / 6561.0 * k3v
                    - 212.0 / 729.0 * k4v),
        );
        let (k6w, k6v) = f(
            t + h,
            w0 + h
                * (9017.0 / 3168.0 * k1w - 355.0 / 33.0 * k2w + 46732.0 / 5247.0 * k3w
                    + 49.0 / 176.0 * k4w
                    - 5103.0 / 18656.0 * k5w),
            v0 + h
                * (9017.0 / 3168.0 * k1v - 355.0 / 33.0 * k2v + 46732.0 / 5247.0 * k3v
                    + 49.0 / 176.0 * k4v
                    - 5103.0 / 18656.0 * k5v),
        );
        let w5 = w0
            + h * (35.0 / 384.0 * k1w + 500.0 / 1113.0 * k3w + 125.0 / 192.0 * k4w
                - 2187.0 / 6784.0 * k5w
                + 11.0 / 84.0 * k6w);
        let v5 = v0
            + h * (35.0 / 384.0 * k1v + 500.0 / 1113.0 * k3v + 125.0 / 192.0 * k4v
                - 2187.0 / 6784.0 * k5v
                + 11.0 / 84.0 * k6v);
        let (k7w, k7v) = f(t + h, w5, v5);
        let w4 = w0
            + h * (5179.0 / 57600.0 * k1w + 7571.0 / 16695.0 * k3w + 393.0 / 640.0 * k4w
                - 92097.0 / 339200.0 * k5w
                + 187.0 / 2100.0 * k6w
                + 1.0 / 40.0 * k7w);
        let v4 = v0
            + h * (5179.0 / 57600.0 * k1v + 7571.0 / 16695.0 * k3v + 393.0 / 640.0 * k4v
                - 92097.0 / 339200.0 * k5v
                + 187.0 / 2100.0 * k6v
                + 1.0 / 40.0 * k7v);

        let k_char = k_z(t);
        let scale = (w0.norm() + v0.norm() / k_char)
            .max(w5.norm() + v5.norm() / k_char)
            .max(1e-30);
        let err = ((w5 - w4).norm() + (v5 - v4).norm() / k_char) / (scale * rtol);

        if err <= 1.0 {
            t += h;
            st.w = w5;
            st.dw = v5;
            let nu = st.w.norm() + st.dw.norm() / k_char;
            if !(1e-30..=1e30).contains(&nu) {
                if nu == 0.0 || !nu.is_finite() {
                    return Err(Error::AccuracyLoss("transport state degenerated".into()));
                }
                st.w /= nu;
                st.dw /= nu;
                st.s += nu.ln();
            }
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h < 1e-14 {
            return Err(Error::AccuracyLoss("transport step underflow".into()));
        }
    }
    Ok(st)
}

/// March a Weber solution (w, dw/dz) along the straight segment from
/// z0 to z1. The physics marches are short (the action across them is a
/// few nats), so this is stable regardless of |Im a|.
pub(crate) fn march_weber(
    a: Complex64,
    z0: Complex64,
    z1: Complex64,
    state: (ScaledC, ScaledC),
    rtol: f64,
) -> Result<(ScaledC, ScaledC)> {
    let (v, d) = state;
    let s0 = v.ln_norm().max(d.ln_norm());
    let st = WeberState {
        w: v.to_c64_offset(s0),
        dw: d.to_c64_offset(s0),
        s: s0,
    };
    let seg = move |t: f64| (z0 + t * (z1 - z0), z1 - z0);
    let out = dopri5(a, seg, st, rtol)?;
    Ok((out.value(), out.deriv()))
}

/// Seed angle: safely inside the wedge |arg z| < π/4 where U is provably
/// the complete recessive expansion.
const SEED_ANGLE: f64 = std::f64::consts::FRAC_PI_4 - 0.35;
const SEED_TOL: f64 = 1e-11;

fn run_radial(
    a: Complex64,
    theta: f64,
    r_from: f64,
    r_to: f64,
    st: WeberState,
    rtol: f64,
) -> Result<WeberState> {
    if (r_from - r_to).abs() <= 1e-13 {
        return Ok(st);
    }
    let dir = Complex64::from_polar(1.0, theta);
    let radial = move |t: f64| {
        let r = r_from + t * (r_to - r_from);
        (dir * r, dir * (r_to - r_from))
    };
    dopri5(a, radial, st, rtol)
}

/// Evaluate (U, U′) at z with |arg z| ≤ π/2. `rtol` is the per-step
/// integrator tolerance.
pub fn eval_by_transport(a: Complex64, z: Complex64, rtol: f64) -> Result<(ScaledC, ScaledC)> {
    let theta = z.arg();
    debug_assert!(theta.abs() <= FRAC_PI_2 + 1e-9);
    let r_far = 2.4 * a.norm().max(1.0).sqrt() + 4.0;
    // Radial legs just past |θ| = π/4 amplify contamination by at most
    // e^{|cos 2θ|·R²/2}; keep that below e^6.
    let band = (6.0 / (r_far * r_far)).min(0.02);
    if theta.abs() <= std::f64::consts::FRAC_PI_4 + band {
        inward_from_far(a, z, r_far, rtol)
    } else {
        outward_from_series(a, z, rtol)
    }
}

/// Recessive side: one-term seed in the clean wedge, arc to the target
/// angle, radial inward.
fn inward_from_far(a: Complex64, z: Complex64, r_far: f64, rtol: f64) -> Result<(ScaledC, ScaledC)> {
    let theta = z.arg();
    let r_t = z.norm();
    let theta_seed = theta.clamp(-SEED_ANGLE, SEED_ANGLE);
    let needs_arc = (theta - theta_seed).abs() > 1e-13;

    let mut r_s = r_far.max(r_t + 2.0).max(12.0);
    let mut seed = None;
    for _ in 0..9 {
        let z_s = Complex64::from_polar(r_s, theta_seed);
        let ev = one_term_eval(a, z_s);
        if ev.rel_err <= SEED_TOL {
            seed = Some((r_s, ev));
            break;
        }
        r_s *= 1.3;
    }
    let (r_s, ev) = seed.ok_or_else(|| {
        Error::AccuracyLoss(format!("no valid asymptotic seed for a={a}, z={z}"))
    })?;

    // Common scale: carry the seed's size in s.
    let s0 = ev.val.ln_norm();
    let mut st = WeberState {
        w: ev.val.to_c64_offset(s0),
        dw: ev.dval.to_c64_offset(s0),
        s: s0,
    };

    if needs_arc {
        let (th0, th1) = (theta_seed, theta);
        let arc = move |t: f64| {
            let th = th0 + t * (th1 - th0);
            let zz = Complex64::from_polar(r_s, th);
            (zz, Complex64::new(0.0, th1 - th0) * zz)
        };
        st = dopri5(a, arc, st, rtol)?;
    }
    st = run_radial(a, theta, r_s, r_t, st, rtol)?;
    Ok((st.value(), st.deriv()))
}

/// Dominant side: U grows outward along the ray, so seed it from the
/// Maclaurin series at a smaller radius and march out.
fn outward_from_series(a: Complex64, z: Complex64, rtol: f64) -> Result<(ScaledC, ScaledC)> {
    let theta = z.arg();
    let r_t = z.norm();
    let dir = Complex64::from_polar(1.0, theta);
    let mut r_in = r_t.min(34.0);
    let mut seed = None;
    for _ in 0..14 {
        let ev = super::series::maclaurin_u(a, dir * r_in);
        if ev.converged && ev.cancel_val <= 12.0 && ev.cancel_dval <= 14.0 {
            seed = Some((r_in, ev));
            break;
        }
        r_in *= 0.7;
        if r_in < 0.5 {
            break;
        }
    }
    let (r_in, ev) = seed.ok_or_else(|| {
        Error::AccuracyLoss(format!(
            "no convergent series seed on the dominant ray for a={a}, z={z}"
        ))
    })?;
    let s0 = ev.val.ln_norm().max(ev.dval.ln_norm());
    let st = WeberState {
        w: ev.val.to_c64_offset(s0),
        dw: ev.dval.to_c64_offset(s0),
        s: s0,
    };
    let st = run_radial(a, theta, r_in, r_t, st, rtol)?;
    Ok((st.value(), st.deriv()))
}
