use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::starkfield::pole_denominator;

fn main() {
    let p = ModelParams::natural(1.0, 1.0, 1e-4).unwrap();
    let guess = Complex64::new(0.4830976710, -6e-4);
    // hand-rolled Muller trace
    let f = |z: Complex64| pole_denominator(z, &p).unwrap();
    let spread = 1e-4;
    let mut x0 = guess * (1.0 - 1e-4) - Complex64::new(0.0, spread);
    let mut x1 = guess * (1.0 + 1e-4) + Complex64::new(0.0, spread);
    let mut x2 = guess;
    let mut f0 = f(x0);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for it in 0..18 {
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let dd = (d2 - d1) / (h2 + h1);
        let b = d2 + h2 * dd;
        let disc = (b * b - 4.0 * f2 * dd).sqrt();
        let den = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
        let step = -2.0 * f2 / den;
        let x3 = x2 + step;
        let f3 = f(x3);
        println!("it {it}: x3 = {:+.8}{:+.3e}i |f|={:.3e} step={:.2e}", x3.re, x3.im, f3.norm(), step.norm());
        x0 = x1; f0 = f1; x1 = x2; f1 = f2; x2 = x3; f2 = f3;
    }
}
