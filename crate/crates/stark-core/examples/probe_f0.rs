use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::starkfield::{basis_at, central_basis};
use stark_core::zerofield;

fn main() {
    let e = Complex64::new(0.3, 0.0);
    for &f in &[0.05, 0.01, 1e-3, 1e-4] {
        let p = ModelParams::natural(1.0, 1.0, f).unwrap();
        let p0 = ModelParams::natural(1.0, 1.0, 0.0).unwrap();
        match central_basis(e, &p) {
            Ok(basis) => match basis_at(e, p.r, &p, &basis) {
                Ok((u_r, v_r)) => {
                    let trig = zerofield::trig_basis(e, p0.r, &p0);
                    println!(
                        "F={f:>7}: u1 {:+.8}  trig {:+.8}  |d|={:.2e} ; u2 {:+.8} vs {:+.8} ; v1 {:+.6} vs {:+.6} ; v2 {:+.6} vs {:+.6}",
                        u_r.0.to_c64(), trig.u.0, (u_r.0.to_c64()-trig.u.0).norm(),
                        u_r.1.to_c64(), trig.u.1,
                        v_r.0.to_c64(), trig.v.0,
                        v_r.1.to_c64(), trig.v.1,
                    );
                }
                Err(err) => println!("F={f}: basis_at failed: {err}"),
            },
            Err(err) => println!("F={f}: central_basis failed: {err}"),
        }
    }
}
