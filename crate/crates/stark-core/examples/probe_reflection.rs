use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::starkfield::pole_denominator;

fn main() {
    let p = ModelParams::natural(3.0, 1.0, 0.2).unwrap();
    for &(er, ei) in &[(0.3, 0.1), (0.8, 0.1), (-0.4, 0.25), (0.3, 0.02)] {
        let e = Complex64::new(er, ei);
        let d = pole_denominator(e, &p).unwrap();
        let dc = pole_denominator(e.conj(), &p).unwrap();
        let ratio = dc / d.conj();
        println!(
            "E=({er},{ei}): |D|={:.6e} |Dc|={:.6e} ratio={:.6} arg(ratio)={:.6}",
            d.norm(),
            dc.norm(),
            ratio.norm(),
            ratio.arg()
        );
    }
}
