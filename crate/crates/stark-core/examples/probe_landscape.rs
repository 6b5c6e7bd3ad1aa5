use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::starkfield::pole_denominator;

fn main() {
    let p = ModelParams::natural(1.0, 1.0, 1e-4).unwrap();
    // Scan |D| along real E near the F=0 ground state 0.4830976710
    for k in 0..41 {
        let e = 0.48300 + k as f64 * 5e-6;
        match pole_denominator(Complex64::new(e, 0.0), &p) {
            Ok(d) => println!("E={e:.6}  |D|={:.6e}  arg={:+.4}", d.norm(), d.arg()),
            Err(err) => println!("E={e:.6}  ERR {err}"),
        }
    }
    // And noise floor: repeated evals at perturbed E
    let e0 = 0.483097;
    let d0 = pole_denominator(Complex64::new(e0, 0.0), &p).unwrap();
    let d1 = pole_denominator(Complex64::new(e0 + 1e-12, 0.0), &p).unwrap();
    let d2 = pole_denominator(Complex64::new(e0, -1e-12), &p).unwrap();
    println!("noise: d0={d0:.8e} |d1-d0|={:.2e} |d2-d0|={:.2e}", (d1-d0).norm(), (d2-d0).norm());
}
