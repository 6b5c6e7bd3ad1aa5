//! Free particle and field-free double well.
//!
//! Everything here is closed-form trigonometry: the basis u, v with
//! u(0) = (1,0), v(0) = (0,1) and unit Wronskian, the jump at x = R, the
//! Weyl-Titchmarsh m⁺ picked so the diverging exponential cancels as
//! x → ∞, and the trace spectral density. Bound states in the mass gap
//! solve
//!
//!   −(1 − g²/4c²)·p̃ + (g/c)[E ± mc² e^{−2p̃R/c}] = 0,  p̃ = √(m²c⁴ − E²),
//!
//! '+' for the ground state, '−' for the excited one.

use crate::model::{jump_matrix_right, ModelParams};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// One sample of the trace spectral density.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralSample {
    pub e: f64,
    pub rho: f64,
    /// |E| < mc².
    pub is_gap: bool,
    /// |E| = mc² exactly: the free density has an integrable singularity.
    pub edge_singular: bool,
}

/// Bound states in the mass gap; when both exist, ground < excited.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct BoundStateSet {
    pub ground: Option<f64>,
    pub excited: Option<f64>,
}

impl BoundStateSet {
    pub fn count(&self) -> usize {
        self.ground.is_some() as usize + self.excited.is_some() as usize
    }
}

/// The solution pair (u, v) at one point, each a spinor (ψ₁, ψ₂).
#[derive(Debug, Clone, Copy)]
pub struct TrigBasis {
    pub u: (Complex64, Complex64),
    pub v: (Complex64, Complex64),
}

impl TrigBasis {
    pub fn wronskian(&self) -> Complex64 {
        self.u.0 * self.v.1 - self.u.1 * self.v.0
    }
}

/// Momentum p = √(E² − m²c⁴) on the sheet reached from Im E > 0, with
/// Im p ≥ 0 inside the gap. On the real axis this is +|p| for E ≥ mc²,
/// −|p| for E ≤ −mc² and +i·p̃ in between.
pub fn sheet_momentum(e: Complex64, params: &ModelParams) -> Complex64 {
    let gap = params.mass_gap_edge();
    let m2c4 = gap * gap;
    if e.im == 0.0 {
        let er = e.re;
        if er >= gap {
            Complex64::new((er * er - m2c4).sqrt(), 0.0)
        } else if er <= -gap {
            Complex64::new(-(er * er - m2c4).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (m2c4 - er * er).sqrt())
        }
    } else if e.im > 0.0 {
        let p = (e * e - m2c4).sqrt();
        if p.im < 0.0 {
            -p
        } else {
            p
        }
    } else {
        sheet_momentum(e.conj(), params).conj()
    }
}

/// Free spectral density ρ = (1/π)|E|/√(E² − m²c⁴) outside the gap, 0
/// inside; the edges themselves are flagged singular samples.
pub fn free_density(e: f64, params: &ModelParams) -> SpectralSample {
    let gap = params.mass_gap_edge();
    if e.abs() == gap {
        return SpectralSample {
            e,
            rho: f64::INFINITY,
            is_gap: false,
            edge_singular: true,
        };
    }
    if e.abs() < gap {
        return SpectralSample {
            e,
            rho: 0.0,
            is_gap: true,
            edge_singular: false,
        };
    }
    let p = (e * e - gap * gap).sqrt();
    SpectralSample {
        e,
        rho: e.abs() / (std::f64::consts::PI * p),
        is_gap: false,
        edge_singular: false,
    }
}

/// Free m⁺(E) = −i p/(E − mc²) with p on the physical sheet. With the
/// real-axis convention of [`sheet_momentum`] the single formula
/// reproduces the piecewise signs of the two energy ranges.
pub fn free_m_plus(e: Complex64, params: &ModelParams) -> Complex64 {
    let p = sheet_momentum(e, params);
    let gap = params.mass_gap_edge();
    -Complex64::i() * p / (e - gap)
}

/// sin(p·s)/p, stable as p → 0.
fn sin_ratio(p: Complex64, s: f64) -> Complex64 {
    let w = p * s;
    if w.norm() < 1e-8 {
        s * (Complex64::new(1.0, 0.0) - w * w / 6.0)
    } else {
        (w).sin() / p
    }
}

/// Basis solutions of the free equation at x, normalized at the origin:
/// u = (cos(px/c), p sin(px/c)/(E−mc²)), v = (−(E−mc²) sin(px/c)/p, cos(px/c)).
pub fn trig_basis(e: Complex64, x: f64, params: &ModelParams) -> TrigBasis {
    let p = sheet_momentum(e, params);
    let gap = params.mass_gap_edge();
    let xc = x / params.c;
    let cosx = (p * xc).cos();
    let sr = sin_ratio(p, xc); // sin(p x/c)/p
    let em = e - gap;
    TrigBasis {
        u: (cosx, p * p * sr / em),
        v: (-em * sr, cosx),
    }
}

/// Integration constants of u^>, v^> (the region x > R) from the jump at R.
#[derive(Debug, Clone, Copy)]
pub struct OuterCoefficients {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

pub fn outer_coefficients(e: Complex64, params: &ModelParams) -> OuterCoefficients {
    let basis_r = trig_basis(e, params.r, params);
    let lam = jump_matrix_right(params);
    let (gu_m, gu_p) = lam.apply_c(basis_r.u);
    let (gv_m, gv_p) = lam.apply_c(basis_r.v);

    let p = sheet_momentum(e, params);
    let gap = params.mass_gap_edge();
    let em = e - gap;
    let rc = params.r / params.c;
    let sinr = (p * rc).sin();
    let cosr = (p * rc).cos();
    // (E − mc²)/p·G⁺ terms, written p-safe: (E−mc²)·G⁺·(sin or cos)/p.
    let em_over_p_sin = em * sin_ratio(p, rc); // (E−mc²) sin(pR/c)/p
    let em_over_p_cos = em * cosr / p;

    OuterCoefficients {
        a1: gu_m * sinr - em_over_p_cos * gu_p,
        a2: em_over_p_sin * gu_p + gu_m * cosr,
        b1: gv_m * sinr - em_over_p_cos * gv_p,
        b2: em_over_p_sin * gv_p + gv_m * cosr,
    }
}

/// The recessive-selection brackets: (ia₁ + a₂) and (ib₁ + b₂) factor as
/// e^{ipR/c}·[G⁻ − i(E−mc²)G⁺/p]. The prefactor cancels in m⁺, and the
/// brackets stay O(1) where the raw combinations cancel like e^{p̃R/c}.
fn m_plus_brackets(e: Complex64, params: &ModelParams) -> (Complex64, Complex64) {
    let basis_r = trig_basis(e, params.r, params);
    let lam = jump_matrix_right(params);
    let (gu_m, gu_p) = lam.apply_c(basis_r.u);
    let (gv_m, gv_p) = lam.apply_c(basis_r.v);
    let p = sheet_momentum(e, params);
    let em = e - params.mass_gap_edge();
    let i = Complex64::i();
    (gu_m - i * em / p * gu_p, gv_m - i * em / p * gv_p)
}

/// m⁺ of the double well: the combination −(ia₁ + a₂)/(ib₁ + b₂), which
/// with the sheet convention of [`sheet_momentum`] covers both energy
/// ranges of the piecewise closed form.
pub fn double_delta_m_plus(e: Complex64, params: &ModelParams) -> Result<Complex64> {
    let (num, den) = m_plus_brackets(e, params);
    let m = -num / den;
    if !m.re.is_finite() || !m.im.is_finite() || den.norm() <= 1e-14 * num.norm() {
        return Err(Error::PoleAtEnergy { e });
    }
    Ok(m)
}

/// Piecewise solution u⁺, v⁺ at any x ≥ 0 (central for x < R, jumped
/// beyond); used by the Wronskian checks.
pub fn outer_basis(e: Complex64, x: f64, params: &ModelParams) -> TrigBasis {
    if x <= params.r {
        return trig_basis(e, x, params);
    }
    let oc = outer_coefficients(e, params);
    let p = sheet_momentum(e, params);
    let gap = params.mass_gap_edge();
    let em = e - gap;
    let xc = x / params.c;
    let sinx = (p * xc).sin();
    let cosx = (p * xc).cos();
    let psr = p * p * sin_ratio(p, xc) / em; // p sin(px/c)/(E−mc²)
    let pcr = p * cosx / em;
    TrigBasis {
        u: (oc.a1 * sinx + oc.a2 * cosx, -oc.a1 * pcr + oc.a2 * psr),
        v: (oc.b1 * sinx + oc.b2 * cosx, -oc.b1 * pcr + oc.b2 * psr),
    }
}

/// Trace spectral density of the double well from the even-potential
/// reduction ρ = (1/2π)·Im[−m⁺ + 1/m⁺] at the real-axis boundary value.
pub fn double_delta_density(e: f64, params: &ModelParams) -> Result<SpectralSample> {
    let gap = params.mass_gap_edge();
    if e.abs() == gap {
        return Ok(SpectralSample {
            e,
            rho: f64::INFINITY,
            is_gap: false,
            edge_singular: true,
        });
    }
    let m = double_delta_m_plus(Complex64::new(e, 0.0), params)?;
    let rho = (1.0 / (2.0 * std::f64::consts::PI)) * (-m + 1.0 / m).im;
    Ok(SpectralSample {
        e,
        rho,
        is_gap: e.abs() < gap,
        edge_singular: false,
    })
}

/// The transcendental bound-state function
/// f(E) = −(1−g²/4c²)·p̃ + (g/c)[E ± mc²·e^{−2p̃R/c}]. `plus` selects the
/// ground branch.
pub fn pole_equation(e: f64, params: &ModelParams, plus: bool) -> f64 {
    let gap = params.mass_gap_edge();
    let pt = (gap * gap - e * e).max(0.0).sqrt();
    let a = 1.0 - params.g * params.g / (4.0 * params.c * params.c);
    let gc = params.g / params.c;
    let damp = (-2.0 * pt * params.r / params.c).exp();
    let pm = if plus { 1.0 } else { -1.0 };
    -a * pt + gc * (e + pm * gap * damp)
}

fn pole_equation_deriv(e: f64, params: &ModelParams, plus: bool) -> f64 {
    let gap = params.mass_gap_edge();
    let pt = (gap * gap - e * e).max(1e-300).sqrt();
    let a = 1.0 - params.g * params.g / (4.0 * params.c * params.c);
    let gc = params.g / params.c;
    let damp = (-2.0 * pt * params.r / params.c).exp();
    let pm = if plus { 1.0 } else { -1.0 };
    a * e / pt + gc * (1.0 + pm * gap * damp * 2.0 * params.r * e / (params.c * pt))
}

fn find_branch_root(params: &ModelParams, plus: bool) -> Option<f64> {
    let gap = params.mass_gap_edge();
    // Parametrize E = mc²·sinθ: the edge roots at E = ±mc² are exact zeros
    // of f, and near-critical bound states emerge from the edges at
    // distances far below any uniform-in-E grid. A θ grid resolves them.
    let n = 4001usize;
    // E = ±mc² are exact zeros of f; a 1e−7 margin in θ keeps the scan
    // endpoints representably off the edges (1 − cos(1e−7) ≈ 5e−15) while
    // still resolving roots that emerge from them near the critical g.
    let margin = 1e-7;
    let th = |k: usize| -> f64 {
        let t = k as f64 / (n - 1) as f64;
        (-std::f64::consts::FRAC_PI_2 + margin)
            + t * (std::f64::consts::PI - 2.0 * margin)
    };
    let fe = |theta: f64| pole_equation(gap * theta.sin(), params, plus);

    let mut bracket = None;
    let mut prev_t = th(0);
    let mut prev_f = fe(prev_t);
    for k in 1..n {
        let t = th(k);
        let f = fe(t);
        if f == 0.0 && k < n - 1 {
            bracket = Some((t, t));
            break;
        }
        if prev_f * f < 0.0 {
            bracket = Some((prev_t, t));
            break;
        }
        prev_t = t;
        prev_f = f;
    }
    let (mut lo, mut hi) = bracket?;
    if lo == hi {
        return Some(gap * lo.sin());
    }
    // Bisection in θ.
    let flo = fe(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = fe(mid);
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    // Newton polish in E.
    let mut e = gap * (0.5 * (lo + hi)).sin();
    for _ in 0..60 {
        let f = pole_equation(e, params, plus);
        if f.abs() < 1e-13 {
            break;
        }
        let df = pole_equation_deriv(e, params, plus);
        if df == 0.0 || !df.is_finite() {
            break;
        }
        let next = e - f / df;
        if next.abs() >= gap {
            break;
        }
        e = next;
    }
    Some(e)
}

/// Bound states of the double well at F = 0.
pub fn bound_states(params: &ModelParams) -> BoundStateSet {
    if params.g <= 0.0 {
        return BoundStateSet::default();
    }
    BoundStateSet {
        ground: find_branch_root(params, true),
        excited: find_branch_root(params, false),
    }
}

/// Critical strengths: the excited state appears at the first value, the
/// ground state leaves through the lower continuum at the second.
pub fn critical_g(params: &ModelParams) -> (f64, f64) {
    let m = params.m;
    let c = params.c;
    let r = params.r;
    let root = 2.0 * c * (4.0 * m * m * c * c * r * r + 1.0).sqrt();
    (-4.0 * m * c * c * r + root, 4.0 * m * c * c * r + root)
}

/// How close the density is to a pole at E: min of the normalized m⁺
/// numerator and denominator magnitudes (a bound state makes one vanish).
pub fn density_pole_residual(e: f64, params: &ModelParams) -> f64 {
    let (num, den) = m_plus_brackets(Complex64::new(e, 0.0), params);
    let scale = num.norm().max(den.norm()).max(1e-300);
    num.norm().min(den.norm()) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(g: f64, r: f64) -> ModelParams {
        ModelParams::natural(g, r, 0.0).unwrap()
    }

    #[test]
    fn free_density_examples() {
        let params = p(0.0, 1.0);
        let s = free_density(2.0, &params);
        assert!((s.rho - 2.0 / (PI * 3.0_f64.sqrt())).abs() < 1e-15);
        assert_eq!(free_density(0.5, &params).rho, 0.0);
        assert!(free_density(0.5, &params).is_gap);
        assert_eq!(free_density(-2.0, &params).rho, s.rho);
        assert!(free_density(1.0, &params).edge_singular);
    }

    #[test]
    fn free_m_plus_values() {
        let params = p(0.0, 1.0);
        // E = 2: m⁺ = −i√3.
        let m = free_m_plus(Complex64::new(2.0, 0.0), &params);
        assert!((m - Complex64::new(0.0, -(3.0_f64.sqrt()))).norm() < 1e-14);
        // Density reconstruction at E = 2 equals the closed form.
        let rho = (-m + 1.0 / m).im / (2.0 * PI);
        assert!((rho - free_density(2.0, &params).rho).abs() < 1e-13);
        // Gap: purely real m⁺ and zero density.
        let m = free_m_plus(Complex64::new(0.5, 0.0), &params);
        assert!(m.im.abs() < 1e-15);
        // E = −2: +i|p|/(E−mc²) = −i/√3 ... even density.
        let m = free_m_plus(Complex64::new(-2.0, 0.0), &params);
        let rho = (-m + 1.0 / m).im / (2.0 * PI);
        assert!((rho - free_density(2.0, &params).rho).abs() < 1e-13);
    }

    #[test]
    fn basis_wronskian_is_one() {
        for &(g, r, e) in &[(1.0, 1.0, 2.0), (3.0, 0.5, -1.7), (0.3, 2.0, 0.4)] {
            let params = p(g, r);
            for &x in &[0.5 * r, r * 0.999999, r * 1.000001, 2.0 * r] {
                let b = outer_basis(Complex64::new(e, 0.0), x, &params);
                assert!(
                    (b.wronskian() - 1.0).norm() < 1e-12,
                    "g={g} r={r} e={e} x={x}: {:?}",
                    b.wronskian()
                );
            }
        }
    }

    #[test]
    fn no_wells_reduces_to_free() {
        let params = p(0.0, 1.0);
        for &e in &[2.0, -2.0, 1.5, -1.5] {
            let m = double_delta_m_plus(Complex64::new(e, 0.0), &params).unwrap();
            let mf = free_m_plus(Complex64::new(e, 0.0), &params);
            assert!((m - mf).norm() < 1e-12, "e={e}: {m} vs {mf}");
        }
    }

    #[test]
    fn tiny_g_density_matches_free() {
        let params = p(1e-8, 1.0);
        for k in 0..60 {
            let e = -4.0 + 8.0 * k as f64 / 59.0;
            if (e.abs() - 1.0).abs() < 0.02 {
                continue;
            }
            let d = double_delta_density(e, &params).unwrap();
            let f = free_density(e, &params);
            assert!((d.rho - f.rho).abs() < 1e-6, "e={e}");
        }
    }

    #[test]
    fn density_positive_and_oscillation_grows_with_r() {
        let count_maxima = |r: f64| -> usize {
            let params = p(2.0, r);
            let n = 1200;
            let mut rho = Vec::with_capacity(n);
            for k in 0..n {
                let e = 1.0 + 1e-4 + (5.0 - 1.0) * k as f64 / (n - 1) as f64;
                let d = double_delta_density(e, &params).unwrap();
                assert!(d.rho >= -1e-12, "rho<0 at e={e} r={r}");
                rho.push(d.rho);
            }
            (1..n - 1)
                .filter(|&i| rho[i] > rho[i - 1] && rho[i] > rho[i + 1])
                .count()
        };
        let few = count_maxima(0.1);
        let many = count_maxima(2.5);
        assert!(
            many > few,
            "expected amplified oscillation: {many} vs {few}"
        );
    }

    #[test]
    fn single_well_limit() {
        // R = 50 decouples the wells; both states sit at the single-well
        // energy (1 − g²/4)/(1 + g²/4) = 0.6 for g = 1.
        let params = p(1.0, 50.0);
        let bs = bound_states(&params);
        let e0 = bs.ground.expect("ground");
        let e1 = bs.excited.expect("excited");
        assert!((e0 - 0.6).abs() < 1e-10, "ground {e0}");
        assert!((e1 - 0.6).abs() < 1e-10, "excited {e1}");
        assert!(e0 <= e1);
    }

    #[test]
    fn regime_counts() {
        assert_eq!(bound_states(&p(0.2, 1.0)).count(), 1);
        assert!(bound_states(&p(0.2, 1.0)).ground.is_some());
        assert_eq!(bound_states(&p(3.0, 1.0)).count(), 2);
        assert_eq!(bound_states(&p(10.0, 1.0)).count(), 1);
        assert!(bound_states(&p(10.0, 1.0)).excited.is_some());
    }

    #[test]
    fn critical_g_values() {
        let params = p(1.0, 1.0);
        let (ga, gd) = critical_g(&params);
        assert!((ga - (-4.0 + 2.0 * 5.0_f64.sqrt())).abs() < 1e-12);
        assert!((gd - (4.0 + 2.0 * 5.0_f64.sqrt())).abs() < 1e-12);
        // Counts flip across the critical values.
        let just_below = ModelParams::natural(ga - 1e-3, 1.0, 0.0).unwrap();
        let just_above = ModelParams::natural(ga + 1e-3, 1.0, 0.0).unwrap();
        assert_eq!(bound_states(&just_below).count(), 1);
        assert_eq!(bound_states(&just_above).count(), 2);
        // Difference identity.
        assert!((gd - ga - 8.0).abs() < 1e-12);
    }

    #[test]
    fn critical_g_at_non_unit_c() {
        // The count transition must match the closed form for c ≠ 1 too.
        let base = ModelParams::new(0.8, 1.7, 1.0, 0.6, 0.0).unwrap();
        let (ga, gd) = critical_g(&base);
        for (gc, below_count, above_count) in [(ga, 1, 2), (gd, 2, 1)] {
            let lo = ModelParams { g: gc - 1e-5, ..base };
            let hi = ModelParams { g: gc + 1e-5, ..base };
            assert_eq!(bound_states(&lo).count(), below_count, "below {gc}");
            assert_eq!(bound_states(&hi).count(), above_count, "above {gc}");
        }
    }

    #[test]
    fn bound_states_are_density_poles() {
        let params = p(3.0, 1.0);
        let bs = bound_states(&params);
        for e in [bs.ground.unwrap(), bs.excited.unwrap()] {
            assert!(pole_equation(e, &params, true).abs() < 1e-12
                || pole_equation(e, &params, false).abs() < 1e-12);
            let res = density_pole_residual(e, &params);
            assert!(res < 1e-10, "residual {res} at e={e}");
        }
    }

    #[test]
    fn herglotz_sign_upper_half_plane() {
        // The paper's m⁺ has Im m⁺ ≤ 0 for Im E > 0 (−m⁺ is Herglotz);
        // the density formula Im[−m⁺ + 1/m⁺] is then nonnegative.
        let params = p(1.5, 1.0);
        for k in 0..40 {
            let e = Complex64::new(-4.0 + 8.2 * k as f64 / 39.0, 1e-6);
            let m = double_delta_m_plus(e, &params).unwrap();
            assert!(m.im <= 1e-9, "Im m⁺ = {} at {e}", m.im);
        }
    }
}
