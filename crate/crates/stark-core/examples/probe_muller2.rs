use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::poles::{muller, SearchStrip};
use stark_core::starkfield::pole_denominator;

fn main() {
    let p = ModelParams::natural(1.0, 1.0, 1e-4).unwrap();
    let guess = Complex64::new(0.4830976710, -6e-4);
    let strip = SearchStrip::default();
    let f = |z: Complex64| pole_denominator(z, &p);
    match muller(&f, guess, &strip) {
        Ok((root, res, it)) => println!("root {root} res {res:.2e} it {it}"),
        Err(e) => println!("FAIL {e}"),
    }
}
