//! Reference Weber integrator used by the test suite.
//!
//! Marches w″ = (z²/4 + a)w along the target ray with an embedded
//! Fehlberg 4(5) pair at tolerance 1e−10, seeded either at the origin
//! from the Gamma-function initial data (when outward marching cannot be
//! contaminated by the dominant solution) or far out on the ray from a
//! plain, independently coded one-term tail. Production code never calls
//! this module; it exists so the series/asymptotic/transport paths are
//! checked against a route that shares none of their summation logic.

use super::connection_split;
use super::scaled::ScaledC;
use super::series::initial_data;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// (U, U′) at z by reference integration.
pub fn reference_u(a: Complex64, z: Complex64) -> Result<(ScaledC, ScaledC)> {
    if z.norm() == 0.0 {
        return Ok(initial_data(a));
    }
    if a.im < 0.0 {
        let (v, d) = reference_u(a.conj(), z.conj())?;
        return Ok((v.conj(), d.conj()));
    }
    let theta = z.arg();
    if theta.abs() > FRAC_PI_2 + 1e-12 {
        let split = connection_split(a, z);
        let (v1, d1) = reference_u(a, split.z_same)?;
        let (v2, d2) = reference_u(-a, split.z_cross)?;
        let val = split.coeff_same.mul(&v1).add(&split.coeff_cross.mul(&v2));
        let dval = split
            .coeff_same
            .mul(&d1)
            .mul_c64(split.d_same)
            .add(&split.coeff_cross.mul(&d2).mul_c64(split.d_cross));
        return Ok((val, dval));
    }

    let r = z.norm();
    let dir = Complex64::from_polar(1.0, theta);

    // Outward from the origin: always sound on dominant-side rays
    // (|θ| > π/4, U grows outward) and on recessive-side rays while the
    // total dominance swing along the path stays small.
    let outward_ok = if theta.abs() > std::f64::consts::FRAC_PI_4 {
        true
    } else {
        let cos2t = (2.0 * theta).cos();
        let inner_swing =
            a.norm().sqrt() * r * (std::f64::consts::FRAC_PI_4 + theta.abs()).cos().abs();
        (r * r / 2.0) * cos2t.max(0.0) + inner_swing <= 10.0
    };
    if outward_ok {
        let (u0, du0) = initial_data(a);
        let s0 = u0.ln_norm().max(du0.ln_norm());
        let state = (u0.to_c64_offset(s0), du0.to_c64_offset(s0), s0);
        return rkf45_ray(a, dir, 0.0, r, state);
    }

    // Recessive side: inward from a far seed on the same ray (|θ| < π/4
    // keeps the one-term tail complete there).
    let mut r_seed = (2.8 * a.norm().max(1.0).sqrt() + 8.0).max(r + 4.0);
    let mut seed = None;
    for _ in 0..7 {
        if let Some(s) = far_seed(a, dir * r_seed) {
            seed = Some((r_seed, s));
            break;
        }
        r_seed *= 1.3;
    }
    let (r0, state) =
        seed.ok_or_else(|| Error::AccuracyLoss(format!("oracle seed failed for a={a} z={z}")))?;
    rkf45_ray(a, dir, r0, r, state)
}

/// Plainly coded recessive tail: U ≈ e^{−z²/4} z^{−a−1/2} Σ tₛ, accepted
/// only when the smallest term is below 1e−9 without big intermediate
/// swings. Returns (w, w′, ln-scale).
fn far_seed(a: Complex64, z: Complex64) -> Option<(Complex64, Complex64, f64)> {
    let inv2z2 = 1.0 / (2.0 * z * z);
    let mut t = Complex64::new(1.0, 0.0);
    let mut sum = t;
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut prev = 1.0_f64;
    let mut shrinking = false;
    let mut ok = false;
    for s in 0..600 {
        let s2 = 2.0 * s as f64;
        let next = t * -((a + (0.5 + s2)) * (a + (1.5 + s2))) * inv2z2 / ((s + 1) as f64);
        let n = next.norm();
        if !n.is_finite() || n > 1e8 {
            return None; // hump too large for a plain f64 oracle seed
        }
        if shrinking && n >= prev {
            ok = prev / sum.norm() < 1e-9;
            break;
        }
        if n < prev {
            shrinking = true;
        }
        t = next;
        sum += t;
        dsum += t * (-2.0 * (s + 1) as f64) / z;
        prev = n;
        if n / sum.norm() < 1e-16 {
            ok = true;
            break;
        }
    }
    if !ok {
        return None;
    }
    let ln_pref = -z * z / 4.0 + (-a - 0.5) * z.ln();
    let dlog = -z / 2.0 + (-a - 0.5) / z;
    let w = sum;
    let dw = dlog * sum + dsum;
    let scale = w.norm().max(dw.norm());
    Some((
        w / scale * Complex64::from_polar(1.0, ln_pref.im),
        dw / scale * Complex64::from_polar(1.0, ln_pref.im),
        ln_pref.re + scale.ln(),
    ))
}

/// Fehlberg 4(5) along the ray dir·r, r from r0 to r1, tolerance 1e−10.
fn rkf45_ray(
    a: Complex64,
    dir: Complex64,
    r0: f64,
    r1: f64,
    state: (Complex64, Complex64, f64),
) -> Result<(ScaledC, ScaledC)> {
    let (mut w, mut v, mut s) = state;
    // Track (w, dw/dz) in r: d(w)/dr = dir·(dw/dz), d(dw/dz)/dr = dir·q·w.
    let rhs = move |r: f64, wv: (Complex64, Complex64)| -> (Complex64, Complex64) {
        let z = dir * r;
        let q = z * z * 0.25 + a;
        (dir * wv.1, dir * q * wv.0)
    };

    let rtol = 1e-10;
    let span = r1 - r0;
    if span.abs() < 1e-300 {
        return Ok((ScaledC::new(w, s), ScaledC::new(v, s)));
    }
    let mut r = r0;
    let kmag = |r: f64| -> f64 {
        let z = dir * r;
        (z * z * 0.25 + a).norm().sqrt() + 1e-30
    };
    let mut h = span.signum() * (0.02 / kmag(r0)).min(0.05);
    let done = |r: f64| -> bool {
        if span > 0.0 {
            r >= r1 - 1e-14
        } else {
            r <= r1 + 1e-14
        }
    };
    let mut steps: u64 = 0;
    while !done(r) {
        steps += 1;
        if steps > 60_000_000 {
            return Err(Error::AccuracyLoss("oracle step limit".into()));
        }
        if (span > 0.0 && r + h > r1) || (span < 0.0 && r + h < r1) {
            h = r1 - r;
        }
        let y0 = (w, v);
        let k1 = rhs(r, y0);
        let st = |c: &[(f64, (Complex64, Complex64))]| -> (Complex64, Complex64) {
            let mut acc = y0;
            for &(coef, k) in c {
                acc.0 += h * coef * k.0;
                acc.1 += h * coef * k.1;
            }
            acc
        };
        let k2 = rhs(r + 0.25 * h, st(&[(0.25, k1)]));
        let k3 = rhs(
            r + 3.0 / 8.0 * h,
            st(&[(3.0 / 32.0, k1), (9.0 / 32.0, k2)]),
        );
        let k4 = rhs(
            r + 12.0 / 13.0 * h,
            st(&[
                (1932.0 / 2197.0, k1),
                (-7200.0 / 2197.0, k2),
                (7296.0 / 2197.0, k3),
            ]),
        );
        let k5 = rhs(
            r + h,
            st(&[
                (439.0 / 216.0, k1),
                (-8.0, k2),
                (3680.0 / 513.0, k3),
                (-845.0 / 4104.0, k4),
            ]),
        );
        let k6 = rhs(
            r + 0.5 * h,
            st(&[
                (-8.0 / 27.0, k1),
                (2.0, k2),
                (-3544.0 / 2565.0, k3),
                (1859.0 / 4104.0, k4),
                (-11.0 / 40.0, k5),
            ]),
        );
        let y4 = st(&[
            (25.0 / 216.0, k1),
            (1408.0 / 2565.0, k3),
            (2197.0 / 4104.0, k4),
            (-0.2, k5),
        ]);
        let y5 = st(&[
            (16.0 / 135.0, k1),
            (6656.0 / 12825.0, k3),
            (28561.0 / 56430.0, k4),
            (-9.0 / 50.0, k5),
            (2.0 / 55.0, k6),
        ]);
        let kc = kmag(r);
        let scale = (y0.0.norm() + y0.1.norm() / kc)
            .max(y5.0.norm() + y5.1.norm() / kc)
            .max(1e-30);
        let err = ((y5.0 - y4.0).norm() + (y5.1 - y4.1).norm() / kc) / (scale * rtol);
        if err <= 1.0 {
            r += h;
            w = y5.0;
            v = y5.1;
            let nu = w.norm() + v.norm() / kc;
            if !(1e-30..=1e30).contains(&nu) {
                if nu == 0.0 || !nu.is_finite() {
                    return Err(Error::AccuracyLoss("oracle state degenerated".into()));
                }
                w /= nu;
                v /= nu;
                s += nu.ln();
            }
        }
        let fac = if err > 0.0 {
            (0.85 * err.powf(-0.25)).clamp(0.15, 4.0)
        } else {
            4.0
        };
        h *= fac;
        if h.abs() < 1e-14 {
            return Err(Error::AccuracyLoss("oracle step underflow".into()));
        }
    }
    Ok((ScaledC::new(w, s), ScaledC::new(v, s)))
}
