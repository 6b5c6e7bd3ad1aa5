use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::zerofield::{bound_states, outer_coefficients, pole_equation};

fn main() {
    let p = ModelParams::natural(3.0, 1.0, 0.0).unwrap();
    println!("bound: {:?}", bound_states(&p));
    for k in 0..21 {
        let e = -0.64 + 0.0013 * k as f64;
        let oc = outer_coefficients(Complex64::new(e, 0.0), &p);
        let den = (Complex64::i() * oc.b1 + oc.b2).norm();
        let num = (Complex64::i() * oc.a1 + oc.a2).norm();
        let scale = oc.a1.norm().max(oc.a2.norm()).max(oc.b1.norm()).max(oc.b2.norm());
        println!(
            "E={e:+.4}: den/scale={:.3e} num/scale={:.3e} f+={:+.3e} f-={:+.3e}",
            den / scale,
            num / scale,
            pole_equation(e, &p, true),
            pole_equation(e, &p, false)
        );
    }
}
