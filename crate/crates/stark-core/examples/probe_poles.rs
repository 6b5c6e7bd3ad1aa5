use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::poles::{continue_in_r, find_pole, seed_poles, ContinuationConfig, SearchStrip};
use stark_core::starkfield::stark_density;
use stark_core::zerofield::bound_states;
use std::time::Instant;

fn main() {
    // 1. Small field: pole near the F=0 ground state.
    let p0 = ModelParams::natural(1.0, 1.0, 0.0).unwrap();
    let bs = bound_states(&p0);
    println!("F=0 bound states: {:?}", bs);
    let strip = SearchStrip::default();
    for &f in &[1e-2, 1e-3, 1e-4] {
        let p = ModelParams::natural(1.0, 1.0, f).unwrap();
        let t = Instant::now();
        let push = -(1e-3_f64).min(f / 10.0);
        let guess = Complex64::new(bs.ground.unwrap(), push);
        match find_pole(guess, &p, &strip) {
            Ok(rec) => println!(
                "F={f:7}: E = {:+.10} {:+.3e} i  res={:.2e} it={} ({:?})",
                rec.e_re, rec.e_im, rec.residual, rec.iterations, t.elapsed()
            ),
            Err(e) => println!("F={f}: FAILED {e}"),
        }
    }

    // 2. Density peaks at F=0.2 g=3.
    let p = ModelParams::natural(3.0, 1.0, 0.2).unwrap();
    let t = Instant::now();
    let mut peaks = Vec::new();
    let n = 600;
    let mut prev2 = 0.0;
    let mut prev = 0.0;
    for k in 0..n {
        let e = -1.0 + 1.2 * k as f64 / (n - 1) as f64;
        let rho = stark_density(e, &p).unwrap().rho;
        if prev > prev2 && prev > rho && prev > 0.5 {
            peaks.push((e - 1.2 / (n as f64 - 1.0), prev));
        }
        prev2 = prev;
        prev = rho;
    }
    println!("gap peaks (E, rho): {peaks:?} ({:?})", t.elapsed());
    let bs3 = bound_states(&ModelParams::natural(3.0, 1.0, 0.0).unwrap());
    println!("F=0 bound states g=3: {:?}", bs3);

    // 3. Seed scan + short continuation at g=3, F=0.2.
    let t = Instant::now();
    let p_r05 = ModelParams { r: 0.5, ..p };
    let strip7 = SearchStrip { re_min: -6.0, re_max: 3.0, im_min: -1.6, im_max: 0.0 };
    let seeds = seed_poles(&p_r05, &strip7, 140, 50);
    println!("seeds at R=0.5 ({} found, {:?}):", seeds.len(), t.elapsed());
    for s in &seeds {
        println!("   {:+.6} {:+.6} i (res {:.1e})", s.e_re, s.e_im, s.residual);
    }
    let t = Instant::now();
    let cfg = ContinuationConfig { strip: strip7, ..Default::default() };
    let seeds_c: Vec<Complex64> = seeds.iter().map(|s| s.e()).collect();
    let traces = continue_in_r(&seeds_c, &p, (0.5, 1.2), 0.01, &cfg);
    println!("continuation to R=1.2 in {:?}:", t.elapsed());
    for tr in &traces {
        let last = tr.records.last().unwrap();
        println!(
            "  branch {}: {} records, last E = {:+.5}{:+.5}i, aborted={:?}",
            tr.branch_id, tr.records.len(), last.e_re, last.e_im, tr.aborted_at
        );
    }
}
