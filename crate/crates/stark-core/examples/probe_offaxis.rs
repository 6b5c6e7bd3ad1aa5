use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::starkfield::pole_denominator;

fn main() {
    let p = ModelParams::natural(1.0, 1.0, 1e-4).unwrap();
    let e0 = 0.4830976710;
    for &im in &[0.0, -1e-6, -1e-5, -1e-4, -3e-4, -6e-4] {
        let e = Complex64::new(e0, im);
        match pole_denominator(e, &p) {
            Ok(d) => {
                let d2 = pole_denominator(e + Complex64::new(1e-12, 0.0), &p).unwrap();
                println!("Im={im:+.1e}: D={d:+.6e} noise={:.2e}", (d2 - d).norm());
            }
            Err(err) => println!("Im={im:+.1e}: ERR {err}"),
        }
    }
}
