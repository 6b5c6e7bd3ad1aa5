//! Double well in a constant field: basis solutions built from parabolic
//! cylinder functions, the Weyl-Titchmarsh pair m±, the trace spectral
//! density and the pole denominator.
//!
//! The central basis u, v is fixed by u(0) = (1,0), v(0) = (0,1); the
//! outer regions attach through the point-well jump matrices at ±R, and
//! the recessive solutions at ±∞ select
//!
//!   m⁺ = [G_u⁻U₁⁻ − iG_u⁺U₁⁺] / [iG_v⁺U₁⁺ − G_v⁻U₁⁻]   at y(R),
//!   m⁻ = [H_u⁺U₂⁻ − iH_u⁻U₂⁺] / [iH_v⁻U₂⁺ − H_v⁺U₂⁻]   at y(−R),
//!
//! with ρ(E) = (1/π)·Im[(m⁺m⁻ + 1)/(m⁺ − m⁻)].
//!
//! Numerically the basis values at ±R come from short Runge–Kutta marches
//! of the Ω₁ scalar along the y segment: the action across |Δy| = √(2F)·R
//! is a few nats at any field strength, whereas reconstructing u, v from
//! the global (U₁, U₂) coefficient formulas cancels like e^{π·Im a/2} and
//! dies in double precision once Im a ≳ 25. The m± ratios are formed as
//! cross products of the jumped basis with the recessive spinors
//! φ ∝ (U₁⁺, −iU₁⁻) at y(R) and χ ∝ (U₂⁺, −iU₂⁻) at y(−R); χ itself is
//! marched in from a seed left of the classical turning point, where its
//! defining expansion is clean. These ratios are algebraically identical
//! to the displayed formulas and stay conditioned at all field strengths.
//!
//! Every product is formed in scaled arithmetic; only final ratios
//! collapse to plain doubles.

use crate::model::{jump_matrix_left, jump_matrix_right, JumpMatrix, ModelParams};
use crate::pcf::{
    eval_u_scaled, march_weber, pcf_quad, weber_argument, weber_order, PcfQuad, ScaledC,
};
use crate::zerofield::SpectralSample;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

const MARCH_RTOL: f64 = 1e-12;

/// A spinor value (ψ₁, ψ₂) in scaled form.
pub type Spinor = (ScaledC, ScaledC);

/// Ω₂ prefactor k = −(1/mc)√(2F/c) e^{iπ/4}: Ω₂ = k·[y/2·Ω₁ + Ω₁′].
fn omega2_factor(params: &ModelParams) -> Complex64 {
    -Complex64::from_polar(1.0, FRAC_PI_4) / (params.m * params.c)
        * (2.0 * params.f / params.c).sqrt()
}

fn spinor_from_omega(
    params: &ModelParams,
    y: Complex64,
    w: &ScaledC,
    dw: &ScaledC,
) -> Spinor {
    let k = omega2_factor(params);
    let omega2 = w.mul_c64(y * 0.5).add(dw).mul_c64(k);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let psi1 = w.add(&omega2).mul_c64(inv_sqrt2.into());
    let psi2 = w
        .sub(&omega2)
        .mul_c64(Complex64::new(0.0, -inv_sqrt2));
    (psi1, psi2)
}

/// (Ω₁, Ω₁′) seed of a spinor with the given value at x₀ (where y = y₀).
fn omega_seed(params: &ModelParams, y0: Complex64, psi: (Complex64, Complex64)) -> (ScaledC, ScaledC) {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let omega1 = (psi.0 + Complex64::i() * psi.1) * inv_sqrt2;
    let omega2 = (psi.0 - Complex64::i() * psi.1) * inv_sqrt2;
    let k = omega2_factor(params);
    let domega1 = omega2 / k - y0 * 0.5 * omega1;
    (ScaledC::from_c64(omega1), ScaledC::from_c64(domega1))
}

/// u and v (as Ω₁ scalar states) marched from x = 0 to x, then restored
/// to spinor form.
pub fn basis_at(e: Complex64, x: f64, params: &ModelParams) -> Result<(Spinor, Spinor)> {
    if params.f <= 0.0 {
        return Err(Error::InvalidParams("field basis needs F > 0".into()));
    }
    let a = weber_order(params);
    let y0 = weber_argument(params, e, 0.0);
    let y1 = weber_argument(params, e, x);
    let u_seed = omega_seed(params, y0, (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
    let v_seed = omega_seed(params, y0, (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)));
    let (uw, udw) = march_weber(a, y0, y1, u_seed, MARCH_RTOL)?;
    let (vw, vdw) = march_weber(a, y0, y1, v_seed, MARCH_RTOL)?;
    Ok((
        spinor_from_omega(params, y1, &uw, &udw),
        spinor_from_omega(params, y1, &vw, &vdw),
    ))
}

/// The recessive-at-+∞ spinor φ ∝ (U₁ + Ũ₁, −i(U₁ − Ũ₁)) at x. Seeded
/// from the one-term expansion far out on the physics line, where the
/// argument hugs the −π/4 ray (the tilt from Im E decays like 1/x), and
/// marched back in; the admixture picked up is e^{2|Im E|·Δx}, far below
/// tolerance wherever resonances are narrow enough to track.
fn phi_at(e: Complex64, x: f64, params: &ModelParams) -> Result<Spinor> {
    let a = weber_order(params);
    let y_t = weber_argument(params, e, x);
    let mut r_seed = (2.4 * a.norm().max(1.0).sqrt() + 6.0).max(y_t.norm() + 2.0);
    for _ in 0..9 {
        // Locate x_far where |y| reaches the seed radius on the line.
        let target = r_seed * (params.f * params.c / 2.0).sqrt();
        let x_far = (target - e.re) / params.f;
        let y_far = weber_argument(params, e, x_far);
        let ev = one_term_eval_checked(a, y_far);
        if let Some((val, dval)) = ev {
            let (w, dw) = march_weber(a, y_far, y_t, (val, dval), MARCH_RTOL)?;
            return Ok(spinor_from_omega_pair(params, y_t, &w, &dw));
        }
        r_seed *= 1.3;
    }
    // Fall back to the generic evaluator (small |Im a| territory).
    let (u1, du1) = eval_u_scaled(a, y_t)?;
    Ok(spinor_from_omega_pair(params, y_t, &u1, &du1))
}

fn one_term_eval_checked(a: Complex64, z: Complex64) -> Option<(ScaledC, ScaledC)> {
    let ev = crate::pcf::one_term_asymptotic(a, z);
    if ev.2 <= 1e-11 {
        Some((ev.0, ev.1))
    } else {
        None
    }
}

/// Build (ψ₁, ψ₂) = ((Ω₁+Ω₂), −i(Ω₁−Ω₂)) without the 1/√2 (overall
/// normalization cancels in every ratio).
fn spinor_from_omega_pair(
    params: &ModelParams,
    y: Complex64,
    w: &ScaledC,
    dw: &ScaledC,
) -> Spinor {
    let k = omega2_factor(params);
    let omega2 = w.mul_c64(y * 0.5).add(dw).mul_c64(k);
    (
        w.add(&omega2),
        w.sub(&omega2).mul_c64(Complex64::new(0.0, -1.0)),
    )
}

/// The recessive-at-−∞ spinor χ ∝ (U₂ + Ũ₂, −i(U₂ − Ũ₂)) at x = −R.
/// Seeded where U₂'s defining ray is clean (left of the classical turning
/// point E + Fx = −mc²·margin) and marched right to −R. Through the
/// barrier χ is the growing solution, so the march is stable; the
/// component it cannot retain is e^{−2·action} below the result, which is
/// also its physical size.
fn chi_at_minus_r(e: Complex64, params: &ModelParams) -> Result<Spinor> {
    let a = weber_order(params);
    let y_r = weber_argument(params, e, -params.r);
    let mut r_seed = (2.4 * a.norm().max(1.0).sqrt() + 6.0).max(y_r.norm() + 2.0);
    for _ in 0..9 {
        // x location on the line where |y| reaches the seed radius, left
        // of the well and of the classical turning point.
        let target = r_seed * (params.f * params.c / 2.0).sqrt();
        let x_seed = ((-target - e.re) / params.f).min(-params.r);
        let y_seed = weber_argument(params, e, x_seed);
        let w_seed = -Complex64::i() * y_seed;
        if let Some((u2, du2_dw)) = one_term_eval_checked(-a, w_seed) {
            let du2_dy = du2_dw.mul_c64(-Complex64::i());
            let (w, dw) = march_weber(a, y_seed, y_r, (u2, du2_dy), MARCH_RTOL)?;
            return Ok(spinor_from_omega_pair(params, y_r, &w, &dw));
        }
        r_seed *= 1.3;
    }
    Err(Error::AccuracyLoss(format!(
        "no valid seed for the left recessive solution at e={e}"
    )))
}

/// Central-region integration constants from the ratio formulas at y₀:
/// u carries (c₁, c₂), v carries (c₁′, c₂′). Exact, but the represented
/// combination cancels exponentially in Im a; production paths use the
/// marched basis instead and this form is cross-checked against it at
/// moderate fields.
#[derive(Debug, Clone, Copy)]
pub struct FieldBasis {
    pub c1: ScaledC,
    pub c2: ScaledC,
    pub c1p: ScaledC,
    pub c2p: ScaledC,
}

struct QuadS {
    u1: ScaledC,
    u2: ScaledC,
    t1: ScaledC,
    t2: ScaledC,
    u1p: ScaledC,
    u1m: ScaledC,
    u2p: ScaledC,
    u2m: ScaledC,
}

impl QuadS {
    fn from_quad(q: &PcfQuad) -> Self {
        let u1 = q.u1.to_scaled();
        let u2 = q.u2.to_scaled();
        let t1 = q.u1_tilde.to_scaled();
        let t2 = q.u2_tilde.to_scaled();
        QuadS {
            u1,
            u2,
            t1,
            t2,
            u1p: u1.add(&t1),
            u1m: u1.sub(&t1),
            u2p: u2.add(&t2),
            u2m: u2.sub(&t2),
        }
    }
}

fn quad_at(params: &ModelParams, e: Complex64, x: f64) -> Result<QuadS> {
    Ok(QuadS::from_quad(&pcf_quad(params, e, x)?))
}

/// Solve the initial conditions at x = 0 for the c-coefficients.
pub fn central_basis(e: Complex64, params: &ModelParams) -> Result<FieldBasis> {
    let q0 = quad_at(params, e, 0.0)?;
    let den = q0.t2.mul(&q0.u1).sub(&q0.u2.mul(&q0.t1));
    let scale = q0
        .t2
        .mul(&q0.u1)
        .ln_norm()
        .max(q0.u2.mul(&q0.t1).ln_norm());
    if den.ln_norm() - scale < (1e-13_f64).ln() {
        return Err(Error::AccuracyLoss(
            "central basis denominator vanishes".into(),
        ));
    }
    let half = Complex64::new(0.5, 0.0);
    let ihalf = Complex64::new(0.0, 0.5);
    Ok(FieldBasis {
        c1: q0.u2.sub(&q0.t2).mul_c64(-half).div(&den),
        c2: q0.u1.sub(&q0.t1).mul_c64(half).div(&den),
        c1p: q0.u2.add(&q0.t2).mul_c64(ihalf).div(&den),
        c2p: q0.u1.add(&q0.t1).mul_c64(-ihalf).div(&den),
    })
}

/// Spinor values of u and v at x from the c-coefficients (coefficient
/// route; see [`central_basis`]).
pub fn basis_from_coefficients(
    e: Complex64,
    x: f64,
    params: &ModelParams,
    basis: &FieldBasis,
) -> Result<(Spinor, Spinor)> {
    let q = quad_at(params, e, x)?;
    let mi = Complex64::new(0.0, -1.0);
    let u1 = basis.c1.mul(&q.u1p).add(&basis.c2.mul(&q.u2p));
    let u2 = basis.c1.mul(&q.u1m).add(&basis.c2.mul(&q.u2m)).mul_c64(mi);
    let v1 = basis.c1p.mul(&q.u1p).add(&basis.c2p.mul(&q.u2p));
    let v2 = basis
        .c1p
        .mul(&q.u1m)
        .add(&basis.c2p.mul(&q.u2m))
        .mul_c64(mi);
    Ok(((u1, u2), (v1, v2)))
}

/// Jump-matrix images of the central basis at the wells: G's at +R (right
/// jump), H's at −R (left jump). The first component of each image is the
/// '−' constant at +R and the '+' constant at −R, matching the boundary
/// conditions ψ(±R∓) ↦ ψ(±R±).
#[derive(Debug, Clone, Copy)]
pub struct BoundaryConstants {
    pub gu_m: ScaledC,
    pub gu_p: ScaledC,
    pub gv_m: ScaledC,
    pub gv_p: ScaledC,
    pub hu_p: ScaledC,
    pub hu_m: ScaledC,
    pub hv_p: ScaledC,
    pub hv_m: ScaledC,
}

fn apply_jump(lam: &JumpMatrix, psi: &Spinor) -> Spinor {
    (
        psi.0
            .mul_c64(lam.delta.into())
            .add(&psi.1.mul_c64(lam.gamma.into())),
        psi.0
            .mul_c64(lam.beta.into())
            .add(&psi.1.mul_c64(lam.alpha.into())),
    )
}

pub fn boundary_constants(e: Complex64, params: &ModelParams) -> Result<BoundaryConstants> {
    let (u_r, v_r) = basis_at(e, params.r, params)?;
    let (u_l, v_l) = basis_at(e, -params.r, params)?;
    let right = jump_matrix_right(params);
    let left = jump_matrix_left(params);
    let (gu_m, gu_p) = apply_jump(&right, &u_r);
    let (gv_m, gv_p) = apply_jump(&right, &v_r);
    let (hu_p, hu_m) = apply_jump(&left, &u_l);
    let (hv_p, hv_m) = apply_jump(&left, &v_l);
    Ok(BoundaryConstants {
        gu_m,
        gu_p,
        gv_m,
        gv_p,
        hu_p,
        hu_m,
        hv_p,
        hv_m,
    })
}

/// The Weyl-Titchmarsh pair at one energy.
#[derive(Debug, Clone, Copy)]
pub struct MPair {
    pub m_plus: Complex64,
    pub m_minus: Complex64,
}

fn cross(p: &Spinor, q: &Spinor) -> ScaledC {
    p.0.mul(&q.1).sub(&p.1.mul(&q.0))
}

struct MParts {
    num_p: ScaledC, // numerator of m⁺ (G_u⁻U₁⁻ − iG_u⁺U₁⁺ up to i·norm)
    den_p: ScaledC,
    num_m: ScaledC,
    den_m: ScaledC,
}

fn m_parts(e: Complex64, params: &ModelParams) -> Result<MParts> {
    let bc = boundary_constants(e, params)?;
    let phi = phi_at(e, params.r, params)?;
    let chi = chi_at_minus_r(e, params)?;
    // ψ⁺ ∝ φ outside +R: (G_u + m⁺ G_v) × φ = 0; likewise χ at −R.
    let gu = (bc.gu_m, bc.gu_p);
    let gv = (bc.gv_m, bc.gv_p);
    let hu = (bc.hu_p, bc.hu_m);
    let hv = (bc.hv_p, bc.hv_m);
    Ok(MParts {
        num_p: cross(&gu, &phi),
        den_p: cross(&gv, &phi),
        num_m: cross(&hu, &chi),
        den_m: cross(&hv, &chi),
    })
}

/// m⁺ and m⁻ at complex energy E.
pub fn m_functions(e: Complex64, params: &ModelParams) -> Result<MPair> {
    if params.f <= 0.0 {
        return Err(Error::InvalidParams("m_functions needs F > 0".into()));
    }
    let parts = m_parts(e, params)?;
    if parts.den_p.ln_norm() - parts.num_p.ln_norm() < (1e-14_f64).ln()
        || parts.den_m.ln_norm() - parts.num_m.ln_norm() < (1e-14_f64).ln()
    {
        return Err(Error::PoleAtEnergy { e });
    }
    Ok(MPair {
        m_plus: parts.num_p.neg().div(&parts.den_p).to_c64(),
        m_minus: parts.num_m.neg().div(&parts.den_m).to_c64(),
    })
}

/// Trace spectral density ρ(E) = (1/π)·Im[(m⁺m⁻ + 1)/(m⁺ − m⁻)] at the
/// real-axis boundary value. The m± construction already singles out the
/// recessive solutions, which is the analytic content of the ε → 0⁺
/// prescription.
pub fn stark_density(e: f64, params: &ModelParams) -> Result<SpectralSample> {
    stark_density_at(Complex64::new(e, 0.0), params).map(|rho| SpectralSample {
        e,
        rho,
        is_gap: e.abs() < params.mass_gap_edge(),
        edge_singular: false,
    })
}

/// Density evaluated at a complex energy (diagnostic: E + iε must agree
/// with the boundary value).
pub fn stark_density_at(e: Complex64, params: &ModelParams) -> Result<f64> {
    let m = m_functions(e, params)?;
    let diff = m.m_plus - m.m_minus;
    let scale = m.m_plus.norm().max(m.m_minus.norm()).max(1e-300);
    if diff.norm() <= 1e-14 * scale {
        return Err(Error::PoleAtEnergy { e });
    }
    Ok(((m.m_plus * m.m_minus + 1.0) / diff).im / std::f64::consts::PI)
}

/// The denominator whose complex zeros are the resonance poles:
/// D = [iG_u⁺U₁⁺ − G_u⁻U₁⁻][iH_v⁻U₂⁺ − H_v⁺U₂⁻]
///   − [iH_u⁻U₂⁺ − H_u⁺U₂⁻][iG_v⁺U₁⁺ − G_v⁻U₁⁻],
/// normalized by the larger bracket-product magnitude so root finders see
/// an O(1)-conditioned function.
pub fn pole_denominator(e: Complex64, params: &ModelParams) -> Result<Complex64> {
    let (d, scale) = pole_denominator_parts(e, params)?;
    Ok(d.to_c64_offset(scale))
}

/// Unnormalized D as a scaled value plus the normalization exponent.
/// Dividing by e^{scale(E)} keeps root finding conditioned but the
/// prefactor is real-valued in E, hence not holomorphic; derivative work
/// should freeze the offset via [`pole_denominator_offset`].
pub fn pole_denominator_parts(
    e: Complex64,
    params: &ModelParams,
) -> Result<(ScaledC, f64)> {
    if params.f <= 0.0 {
        return Err(Error::InvalidParams("pole_denominator needs F > 0".into()));
    }
    let parts = m_parts(e, params)?;
    // The paper's brackets equal (−i)·the cross products, so
    // D = −(num⁺·den⁻ − num⁻·den⁺).
    let p12 = parts.num_p.mul(&parts.den_m);
    let p34 = parts.num_m.mul(&parts.den_p);
    let scale = p12.ln_norm().max(p34.ln_norm());
    if !scale.is_finite() {
        return Err(Error::AccuracyLoss("pole denominator degenerate".into()));
    }
    Ok((p12.sub(&p34).neg(), scale))
}

/// D(E)·e^{−offset} with a caller-chosen (frozen) offset.
pub fn pole_denominator_offset(
    e: Complex64,
    params: &ModelParams,
    offset: f64,
) -> Result<Complex64> {
    let (d, _) = pole_denominator_parts(e, params)?;
    Ok(d.to_c64_offset(offset))
}

/// Weber argument at the well positions — handy for diagnostics.
pub fn y_at(params: &ModelParams, e: Complex64, x: f64) -> Complex64 {
    weber_argument(params, e, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerofield;

    fn params(g: f64, r: f64, f: f64) -> ModelParams {
        ModelParams::natural(g, r, f).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn marched_basis_keeps_initial_data() {
        let p = params(1.0, 1.0, 0.2);
        let e = c(0.3, 0.0);
        let (u0, v0) = basis_at(e, 0.0, &p).unwrap();
        assert!((u0.0.to_c64() - 1.0).norm() < 1e-12);
        assert!(u0.1.ln_norm() < (1e-12_f64).ln());
        assert!(v0.0.ln_norm() < (1e-12_f64).ln());
        assert!((v0.1.to_c64() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn coefficient_route_reconstructs_initial_data() {
        let p = params(1.0, 1.0, 0.2);
        let e = c(0.3, 0.0);
        let basis = central_basis(e, &p).unwrap();
        let (u0, v0) = basis_from_coefficients(e, 0.0, &p, &basis).unwrap();
        assert!((u0.0.to_c64() - 1.0).norm() < 1e-10, "u1(0)={}", u0.0.to_c64());
        assert!(u0.1.ln_norm() < (1e-10_f64).ln(), "u2(0) not zero");
        assert!(v0.0.ln_norm() < (1e-10_f64).ln(), "v1(0) not zero");
        assert!((v0.1.to_c64() - 1.0).norm() < 1e-10, "v2(0)={}", v0.1.to_c64());
    }

    #[test]
    fn march_and_coefficient_routes_agree_at_moderate_field() {
        // Two algebraically independent constructions of u, v at ±R.
        let p = params(3.0, 1.0, 0.2);
        for &(er, ei) in &[(0.35, 0.0), (-0.6, 0.05), (1.4, -0.1)] {
            let e = c(er, ei);
            let basis = central_basis(e, &p).unwrap();
            for &x in &[p.r, -p.r, 0.4] {
                let (u_m, v_m) = basis_at(e, x, &p).unwrap();
                let (u_c, v_c) = basis_from_coefficients(e, x, &p, &basis).unwrap();
                for (m, cc) in [(&u_m.0, &u_c.0), (&u_m.1, &u_c.1), (&v_m.0, &v_c.0), (&v_m.1, &v_c.1)]
                {
                    let rel = m.sub(cc).ln_norm() - m.ln_norm().max(0.0);
                    assert!(rel < (5e-9_f64).ln(), "e={e} x={x}: rel={:.2e}", rel.exp());
                }
            }
        }
    }

    #[test]
    fn wronskian_one_across_regions() {
        let p = params(1.0, 1.0, 0.2);
        for &(er, ei) in &[(0.3, 0.0), (-0.8, 0.1), (1.7, 0.0)] {
            let e = c(er, ei);
            for &x in &[-0.5, 0.5] {
                let (u, v) = basis_at(e, x, &p).unwrap();
                let w = cross(&u, &v).to_c64();
                assert!((w - 1.0).norm() < 1e-9, "W={w} at x={x}, e={e}");
            }
        }
        // The jump matrices are unimodular, so the jumped images keep W = 1.
        let p = params(2.0, 1.0, 0.3);
        let e = c(0.4, 0.0);
        let bc = boundary_constants(e, &p).unwrap();
        let w_right = cross(&(bc.gu_m, bc.gu_p), &(bc.gv_m, bc.gv_p)).to_c64();
        assert!((w_right - 1.0).norm() < 1e-9, "G-side W={w_right}");
        let w_left = cross(&(bc.hu_p, bc.hu_m), &(bc.hv_p, bc.hv_m)).to_c64();
        assert!((w_left - 1.0).norm() < 1e-9, "H-side W={w_left}");
    }

    #[test]
    fn basis_matches_zero_field_limit_even_at_tiny_f() {
        // At F = 1e−4 (Im a = 5000) the marched basis at ±R must match the
        // closed-form trig basis of the field-free problem to O(F·R²).
        let e = c(0.3, 0.0);
        let p = params(1.0, 1.0, 1e-4);
        let p0 = params(1.0, 1.0, 0.0);
        let (u_r, v_r) = basis_at(e, p.r, &p).unwrap();
        let trig = zerofield::trig_basis(e, p0.r, &p0);
        assert!((u_r.0.to_c64() - trig.u.0).norm() < 1e-3, "u1(R)");
        assert!((u_r.1.to_c64() - trig.u.1).norm() < 1e-3, "u2(R)");
        assert!((v_r.0.to_c64() - trig.v.0).norm() < 1e-3, "v1(R)");
        assert!((v_r.1.to_c64() - trig.v.1).norm() < 1e-3, "v2(R)");
        let (u_l, _) = basis_at(e, -p.r, &p).unwrap();
        let trig_l = zerofield::trig_basis(e, -p0.r, &p0);
        assert!((u_l.0.to_c64() - trig_l.u.0).norm() < 1e-3, "u1(-R)");
        assert!((u_l.1.to_c64() - trig_l.u.1).norm() < 1e-3, "u2(-R)");
    }

    #[test]
    fn no_jump_when_g_is_zero() {
        let p = params(0.0, 1.0, 0.25);
        let e = c(0.2, 0.0);
        let (u_r, _) = basis_at(e, p.r, &p).unwrap();
        let bc = boundary_constants(e, &p).unwrap();
        assert!((bc.gu_m.to_c64() - u_r.0.to_c64()).norm() < 1e-12);
        assert!((bc.gu_p.to_c64() - u_r.1.to_c64()).norm() < 1e-12);
    }

    #[test]
    fn density_positive_on_grid() {
        let p = params(3.0, 1.0, 0.2);
        for k in 0..80 {
            let e = -4.0 + 8.0 * k as f64 / 79.0;
            let s = stark_density(e, &p).unwrap();
            assert!(s.rho >= -1e-12, "rho={} at e={e}", s.rho);
        }
    }

    #[test]
    fn epsilon_prescription_agrees_with_boundary_value() {
        let p = params(3.0, 1.0, 0.2);
        for &e in &[-0.55, 0.8, 2.3] {
            let direct = stark_density(e, &p).unwrap().rho;
            let shifted = stark_density_at(c(e, 1e-8), &p).unwrap();
            assert!(
                (direct - shifted).abs() <= 1e-5 * direct.abs().max(1.0),
                "e={e}: {direct} vs {shifted}"
            );
        }
    }

    #[test]
    fn m_plus_stable_against_epsilon_shift() {
        // Recessive selection is stable: E + 1e−8 i moves m⁺ by < 1e−5.
        let p = params(3.0, 1.0, 0.2);
        for &e in &[-0.5, 0.9, 2.1] {
            let m0 = m_functions(c(e, 0.0), &p).unwrap().m_plus;
            let m1 = m_functions(c(e, 1e-8), &p).unwrap().m_plus;
            assert!((m0 - m1).norm() < 1e-5 * m0.norm().max(1.0), "e={e}");
        }
    }

    #[test]
    fn herglotz_pairing_off_axis() {
        let p = params(2.0, 1.0, 0.4);
        for k in 0..25 {
            let e = c(-3.0 + 6.0 * k as f64 / 24.0, 1e-6);
            let m = m_functions(e, &p).unwrap();
            assert!(m.m_plus.im <= 1e-8, "Im m+ = {}", m.m_plus.im);
            assert!(m.m_minus.im >= -1e-8, "Im m- = {}", m.m_minus.im);
        }
    }

    #[test]
    fn pole_denominator_is_analytic() {
        // Complex differentiability at a frozen normalization offset:
        // finite-difference derivatives taken along two directions agree.
        // A bookkeeping error in the scaled pipeline (lost phase, wrong
        // conjugation) would break this.
        let p = params(3.0, 1.0, 0.2);
        let e = c(0.3, -0.05);
        let (_, offset) = pole_denominator_parts(e, &p).unwrap();
        let h = 1e-5;
        let d = |e: Complex64| pole_denominator_offset(e, &p, offset).unwrap();
        let dx = (d(e + c(h, 0.0)) - d(e - c(h, 0.0))) / (2.0 * h);
        let dy = (d(e + c(0.0, h)) - d(e - c(0.0, h))) / (2.0 * h * Complex64::i());
        assert!(
            (dx - dy).norm() < 1e-4 * dx.norm().max(1e-6),
            "dx={dx} dy={dy}"
        );
    }

    #[test]
    fn m_plus_converges_to_zero_field_limit() {
        // Cross-module: as F → 0, m⁺ approaches the closed-form m⁺ of the
        // field-free double well, both in the continuum and in the gap.
        for &e in &[1.5, 0.3] {
            let p0 = params(1.0, 1.0, 0.0);
            let m0 = zerofield::double_delta_m_plus(c(e, 0.0), &p0).unwrap();
            let mut prev_rel = f64::INFINITY;
            for &f in &[1e-2, 1e-3] {
                let p = params(1.0, 1.0, f);
                let m = m_functions(c(e, 0.0), &p).unwrap().m_plus;
                let rel = (m - m0).norm() / m0.norm().max(1.0);
                assert!(rel < prev_rel, "e={e} f={f}: rel={rel} prev={prev_rel}");
                prev_rel = rel;
            }
            assert!(prev_rel < 0.05, "e={e}: rel={prev_rel}");
        }
    }
}
