use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::pcf::{pcf_quad, weber_argument, weber_order};
use stark_core::pcf::oracle::reference_u;
use stark_core::starkfield::central_basis;

fn main() {
    let e = Complex64::new(0.3, 0.0);
    for &f in &[0.05, 0.01, 1e-3] {
        let p = ModelParams::natural(1.0, 1.0, f).unwrap();
        let a = weber_order(&p);
        let y0 = weber_argument(&p, e, 0.0);
        let yr = weber_argument(&p, e, p.r);
        println!("F={f}: a={a:.3}, y0={y0:.4}, yR={yr:.4}");
        let q0 = pcf_quad(&p, e, 0.0).unwrap();
        println!("  U1(y0):  ln={:+.6} ph={:+.4}", q0.u1.log_modulus, q0.u1.phase);
        println!("  U2(y0):  ln={:+.6} ph={:+.4}", q0.u2.log_modulus, q0.u2.phase);
        println!("  T1(y0):  ln={:+.6} ph={:+.4}", q0.u1_tilde.log_modulus, q0.u1_tilde.phase);
        println!("  T2(y0):  ln={:+.6} ph={:+.4}", q0.u2_tilde.log_modulus, q0.u2_tilde.phase);
        // reference values for U1, U2 at y0
        let (r1, _) = reference_u(a, y0).unwrap();
        let w = -Complex64::i() * y0;
        let (r2, _) = reference_u(-a, w).unwrap();
        println!("  ref U1:  ln={:+.6} ph={:+.4}", r1.ln_norm(), r1.arg());
        println!("  ref U2:  ln={:+.6} ph={:+.4}", r2.ln_norm(), r2.arg());
        let basis = central_basis(e, &p).unwrap();
        println!("  c1 ln={:+.4}  c2 ln={:+.4}  c1' ln={:+.4}  c2' ln={:+.4}",
            basis.c1.ln_norm(), basis.c2.ln_norm(), basis.c1p.ln_norm(), basis.c2p.ln_norm());
    }
}
