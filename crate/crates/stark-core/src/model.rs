//! Physical parameters and the point-interaction jump matrices.
//!
//! A well of strength g at a point is equivalent to a boundary condition
//! relating the spinor on the two sides. The self-adjoint,
//! charge-conjugation invariant choice is the unimodular matrix
//!
//! ```text
//!   Λ = 1/(1+g²/4c²) · [ 1-g²/4c²   -g/c     ]
//!                      [ g/c         1-g²/4c² ]
//! ```
//!
//! mapping ψ(x₀⁻) to ψ(x₀⁺); its inverse maps back. The regularization
//! constant behind it solves a cubic with unique real root 1/2.

use crate::{Error, Result};
use num_complex::Complex64;

/// Model parameters in units with ħ = 1. The paper's plots use m = c = 1,
/// but m and c are kept explicit throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Fermion mass, > 0.
    pub m: f64,
    /// Speed of light, > 0.
    pub c: f64,
    /// Well strength, ≥ 0.
    pub g: f64,
    /// Half interatomic distance, > 0: the wells sit at ±R.
    pub r: f64,
    /// Electric field strength, ≥ 0.
    pub f: f64,
}

impl ModelParams {
    pub fn new(m: f64, c: f64, g: f64, r: f64, f: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidParams(format!("m must be > 0, got {m}")));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParams(format!("c must be > 0, got {c}")));
        }
        if !(g >= 0.0) || !g.is_finite() {
            return Err(Error::InvalidParams(format!("g must be >= 0, got {g}")));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParams(format!("R must be > 0, got {r}")));
        }
        if !(f >= 0.0) || !f.is_finite() {
            return Err(Error::InvalidParams(format!("F must be >= 0, got {f}")));
        }
        Ok(Self { m, c, g, r, f })
    }

    /// Natural units m = c = 1 with the given well strength, half distance
    /// and field.
    pub fn natural(g: f64, r: f64, f: f64) -> Result<Self> {
        Self::new(1.0, 1.0, g, r, f)
    }

    /// Rest energy mc².
    pub fn mass_gap_edge(&self) -> f64 {
        self.m * self.c * self.c
    }
}

/// The 2×2 real jump matrix Λ of a single point well, together with the
/// phase ω (fixed to 1). Entries are laid out as
/// (δ γ; β α): ψ₁ ↦ ω(δψ₁ + γψ₂), ψ₂ ↦ ω(βψ₁ + αψ₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpMatrix {
    pub delta: f64,
    pub gamma: f64,
    pub beta: f64,
    pub alpha: f64,
    /// |ω| = 1; always exactly 1 here.
    pub omega: f64,
}

impl JumpMatrix {
    /// Determinant αδ − γβ; equals 1 for a self-adjoint interaction.
    pub fn det(&self) -> f64 {
        self.alpha * self.delta - self.gamma * self.beta
    }

    /// Apply to a real spinor value (ψ₁, ψ₂).
    pub fn apply(&self, psi: (f64, f64)) -> (f64, f64) {
        (
            self.omega * (self.delta * psi.0 + self.gamma * psi.1),
            self.omega * (self.beta * psi.0 + self.alpha * psi.1),
        )
    }

    /// Apply to a complex spinor value.
    pub fn apply_c(&self, psi: (Complex64, Complex64)) -> (Complex64, Complex64) {
        (
            self.omega * (self.delta * psi.0 + self.gamma * psi.1),
            self.omega * (self.beta * psi.0 + self.alpha * psi.1),
        )
    }

    pub fn identity() -> Self {
        JumpMatrix {
            delta: 1.0,
            gamma: 0.0,
            beta: 0.0,
            alpha: 1.0,
            omega: 1.0,
        }
    }
}

/// Jump across a well in the direction of increasing x: maps ψ(x₀⁻) to
/// ψ(x₀⁺), where x₀ is either well position.
pub fn jump_matrix_right(params: &ModelParams) -> JumpMatrix {
    let t = params.g * params.g / (4.0 * params.c * params.c);
    let norm = 1.0 / (1.0 + t);
    let gc = params.g / params.c;
    JumpMatrix {
        delta: (1.0 - t) * norm,
        gamma: -gc * norm,
        beta: gc * norm,
        alpha: (1.0 - t) * norm,
        omega: 1.0,
    }
}

/// Inverse jump: maps ψ(x₀⁺) to ψ(x₀⁻). Off-diagonal signs flip relative
/// to [`jump_matrix_right`]; the closed forms are exact inverses.
pub fn jump_matrix_left(params: &ModelParams) -> JumpMatrix {
    let t = params.g * params.g / (4.0 * params.c * params.c);
    let norm = 1.0 / (1.0 + t);
    let gc = params.g / params.c;
    JumpMatrix {
        delta: (1.0 - t) * norm,
        gamma: gc * norm,
        beta: -gc * norm,
        alpha: (1.0 - t) * norm,
        omega: 1.0,
    }
}

/// Charge conjugation acts as ψ ↦ σₓψ* and flips the sign of g. The
/// interaction is invariant iff Λ(−g) = σₓ Λ(g)* σₓ entrywise; returns
/// true when that holds to 1e−14.
pub fn charge_conjugation_check(params: &ModelParams) -> bool {
    let lam = jump_matrix_right(params);
    let flipped = ModelParams {
        g: -params.g,
        ..*params
    };
    // ModelParams requires g >= 0; build Λ(−g) from the closed form directly.
    let lam_neg = {
        let t = flipped.g * flipped.g / (4.0 * flipped.c * flipped.c);
        let norm = 1.0 / (1.0 + t);
        let gc = flipped.g / flipped.c;
        JumpMatrix {
            delta: (1.0 - t) * norm,
            gamma: -gc * norm,
            beta: gc * norm,
            alpha: (1.0 - t) * norm,
            omega: 1.0,
        }
    };
    conjugated_matches(&lam, &lam_neg)
}

/// Entrywise test of Λ' = σₓ Λ* σₓ to 1e−14. σₓ conjugation swaps the
/// diagonal and swaps the off-diagonal entries; Λ is real so * is a no-op.
pub fn conjugated_matches(lam: &JumpMatrix, lam_neg: &JumpMatrix) -> bool {
    const TOL: f64 = 1e-14;
    (lam_neg.delta - lam.alpha).abs() <= TOL
        && (lam_neg.gamma - lam.beta).abs() <= TOL
        && (lam_neg.beta - lam.gamma).abs() <= TOL
        && (lam_neg.alpha - lam.delta).abs() <= TOL
}

/// Roots of the cubic fixing the regularization constant a.
#[derive(Debug, Clone, Copy)]
pub struct CubicRoots {
    /// The unique real root; always 1/2.
    pub real: f64,
    /// The conjugate pair ±i·c/g.
    pub complex_pair: (Complex64, Complex64),
}

/// Solves a³ − a²/2 + (c²/g²)a − c²/(2g²) = 0, the self-adjointness
/// constraint αδ − γβ = 1 written out for the one-parameter jump family.
/// It factors as (a − 1/2)(a² + c²/g²); the unique real root a = 1/2 is
/// found numerically here (Newton from a bracketing scan on [0, 1]) and
/// must come out 1/2 to 1e−12 regardless of g and c.
pub fn colombeau_constant(params: &ModelParams) -> Result<CubicRoots> {
    if params.g <= 0.0 {
        return Err(Error::InvalidParams("g must be > 0 for the cubic".into()));
    }
    let q = params.c * params.c / (params.g * params.g);
    let f = |a: f64| a * a * a - 0.5 * a * a + q * a - 0.5 * q;
    let df = |a: f64| 3.0 * a * a - a + q;

    // Bracket on [0, 1]: f(0) = −q/2 < 0, f(1) = 1/2 + q/2 > 0.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return Err(Error::AccuracyLoss(
            "cubic not bracketed on [0,1]; implementation bug".into(),
        ));
    }
    let mut a = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fa = f(a);
        if fa.abs() < 1e-16 * (1.0 + q) {
            break;
        }
        if fa < 0.0 {
            lo = a;
        } else {
            hi = a;
        }
        let step = fa / df(a);
        let newton = a - step;
        a = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    let root = Complex64::new(0.0, params.c / params.g);
    Ok(CubicRoots {
        real: a,
        complex_pair: (root, -root),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn no_well_means_no_jump() {
        let p = ModelParams::natural(0.0, 1.0, 0.0).unwrap();
        let lam = jump_matrix_right(&p);
        assert_eq!(lam, JumpMatrix::identity());
        assert_eq!(jump_matrix_left(&p), JumpMatrix::identity());
    }

    #[test]
    fn critical_strength_rotation() {
        // g = 2c makes 1 - g²/4c² vanish: the jump is a pure rotation.
        let p = ModelParams::new(1.0, 1.0, 2.0, 1.0, 0.0).unwrap();
        let lam = jump_matrix_right(&p);
        assert!(close(lam.delta, 0.0, 1e-15));
        assert!(close(lam.gamma, -1.0, 1e-15));
        assert!(close(lam.beta, 1.0, 1e-15));
        assert!(close(lam.alpha, 0.0, 1e-15));
        let inv = jump_matrix_left(&p);
        assert!(close(inv.gamma, 1.0, 1e-15));
        assert!(close(inv.beta, -1.0, 1e-15));
    }

    #[test]
    fn left_inverts_right() {
        for &g in &[0.5, 2.0, 10.0] {
            let p = ModelParams::natural(g, 1.0, 0.0).unwrap();
            let r = jump_matrix_right(&p);
            let l = jump_matrix_left(&p);
            // l · r applied to basis vectors must give the identity columns.
            let e1 = l.apply(r.apply((1.0, 0.0)));
            let e2 = l.apply(r.apply((0.0, 1.0)));
            assert!(close(e1.0, 1.0, 1e-14) && close(e1.1, 0.0, 1e-14));
            assert!(close(e2.0, 0.0, 1e-14) && close(e2.1, 1.0, 1e-14));
        }
    }

    #[test]
    fn determinant_is_one() {
        for i in 0..64 {
            let g = i as f64 * 1.5625; // 0 ..= 98.4
            let p = ModelParams::new(1.0, 1.0, g, 1.0, 0.0).unwrap();
            assert!(close(jump_matrix_right(&p).det(), 1.0, 1e-14), "g={g}");
        }
        // Non-unit c as well.
        let p = ModelParams::new(0.7, 2.3, 5.1, 1.0, 0.0).unwrap();
        assert!(close(jump_matrix_right(&p).det(), 1.0, 1e-14));
    }

    #[test]
    fn small_g_limit_is_continuous() {
        for &g in &[1e-3, 1e-6, 1e-9] {
            let p = ModelParams::natural(g, 1.0, 0.0).unwrap();
            let lam = jump_matrix_right(&p);
            assert!(close(lam.delta, 1.0, 2.0 * g));
            assert!(close(lam.gamma, -g, g * g));
        }
    }

    #[test]
    fn charge_conjugation_holds() {
        for &g in &[0.0, 0.3, 3.0, 25.0] {
            let p = ModelParams::new(1.0, 1.0, g, 1.0, 0.0).unwrap();
            assert!(charge_conjugation_check(&p), "g={g}");
        }
        let p = ModelParams::new(2.0, 0.5, 3.0, 1.0, 0.0).unwrap();
        assert!(charge_conjugation_check(&p));
    }

    #[test]
    fn perturbed_matrix_breaks_conjugation() {
        let p = ModelParams::natural(3.0, 1.0, 0.0).unwrap();
        let lam = jump_matrix_right(&p);
        let mut bad = lam;
        bad.beta *= 1.01;
        // Λ(−g) against the perturbed matrix must fail.
        let lam_neg = JumpMatrix {
            gamma: -lam.gamma,
            beta: -lam.beta,
            ..lam
        };
        assert!(!conjugated_matches(&bad, &lam_neg));
    }

    #[test]
    fn cubic_real_root_is_half() {
        for &(g, c) in &[(1.0, 1.0), (10.0, 1.0), (0.2, 3.0), (40.0, 0.3)] {
            let p = ModelParams::new(1.0, c, g, 1.0, 0.0).unwrap();
            let roots = colombeau_constant(&p).unwrap();
            assert!(close(roots.real, 0.5, 1e-12), "g={g} c={c}");
            let expect = c / g;
            assert!(close(roots.complex_pair.0.im, expect, 1e-10 * expect.max(1.0)));
            assert!(close(roots.complex_pair.1.im, -expect, 1e-10 * expect.max(1.0)));
            // The pair really solves the cubic.
            let q = c * c / (g * g);
            let z = roots.complex_pair.0;
            let res = z * z * z - 0.5 * z * z + q * z - 0.5 * q;
            assert!(res.norm() < 1e-10 * (1.0 + q));
        }
    }

    #[test]
    fn cubic_requires_positive_g() {
        let p = ModelParams::natural(0.0, 1.0, 0.0).unwrap();
        assert!(colombeau_constant(&p).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, -0.1, 1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, -2.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, f64::NAN).is_err());
    }
}
