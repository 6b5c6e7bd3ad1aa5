use num_complex::Complex64;
use stark_core::model::ModelParams;
use stark_core::poles::{classify_events, continue_in_r, seed_poles, ContinuationConfig, EventKind, SearchStrip};
use stark_core::zerofield::bound_states;
use std::time::Instant;

fn run(g: f64) {
    let t = Instant::now();
    let p = ModelParams::natural(g, 0.5, 0.2).unwrap();
    let strip = SearchStrip { re_min: -8.0, re_max: 4.0, im_min: -2.0, im_max: 0.0 };
    let mut seeds: Vec<Complex64> = seed_poles(&p, &strip, 160, 56).iter().map(|s| s.e()).collect();
    // ensure the bound-state branches are present
    let bs = bound_states(&ModelParams::natural(g, 0.5, 0.0).unwrap());
    for e0 in [bs.ground, bs.excited].into_iter().flatten() {
        let c = Complex64::new(e0, -1e-3);
        let conv = stark_core::poles::find_pole(c, &p, &strip).map(|r| r.e()).unwrap_or(c);
        if !seeds.iter().any(|s| (s - conv).norm() < 1e-6) {
            seeds.push(conv);
        }
    }
    println!("g={g}: {} seeds ({:?})", seeds.len(), t.elapsed());
    // identify the ground branch: seed closest to the F=0 ground energy
    let ground_idx = seeds
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (a.re - bs.ground.unwrap()).abs().total_cmp(&(b.re - bs.ground.unwrap()).abs())
        })
        .unwrap()
        .0;
    let cfg = ContinuationConfig {
        strip,
        rescan: Some(stark_core::poles::RescanConfig {
            every: 0.25,
            strip: stark_core::poles::SearchStrip { re_min: -2.2, re_max: 0.2, im_min: -0.4, im_max: -1e-4 },
            n_re: 72,
            n_im: 26,
        }),
        ..Default::default()
    };
    let t = Instant::now();
    let mut traces = continue_in_r(&seeds, &p, (0.5, 5.0), 0.01, &cfg);
    println!("continued {} branches in {:?}", traces.len(), t.elapsed());
    classify_events(&mut traces, &cfg);
    // dump all traces for offline analysis
    {
        use std::io::Write;
        let mut f = std::fs::File::create(format!("/tmp/traces_g{g}.csv")).unwrap();
        for tr in &traces {
            for rec in &tr.records {
                writeln!(f, "{},{},{},{}", tr.branch_id, rec.r, rec.e_re, rec.e_im).unwrap();
            }
        }
    }
    let gt = &traces[ground_idx];
    println!(
        "ground branch: {} records, aborted={:?}, events:",
        gt.records.len(),
        gt.aborted_at
    );
    for ev in &gt.events {
        println!("  R={:.3} {:?} partner {}", ev.r, ev.kind, ev.partner);
    }
    let avoided: Vec<_> = gt.events.iter().filter(|e| e.kind == EventKind::AvoidedCrossing).collect();
    println!("avoided crossings on ground branch: {}", avoided.len());
    if let Some(first) = avoided.first() {
        let rec = gt.records.iter().find(|r| (r.r - first.r).abs() < 1e-9).unwrap();
        println!("first avoided crossing at R={:.3}, Re E = {:.4}", first.r, rec.e_re);
    }
    // monotonicity of Re E on the ground branch
    let mono = gt.records.windows(2).all(|w| w[1].e_re <= w[0].e_re + 1e-9);
    println!("ground Re monotone decreasing: {mono}");
    // a few sample points of the trace
    for rec in gt.records.iter().step_by(50) {
        println!("  R={:.2} E={:+.5}{:+.3e}i", rec.r, rec.e_re, rec.e_im);
    }
    let last = gt.records.last().unwrap();
    println!("ground last: R={:.2} E={:+.4}{:+.4}i", last.r, last.e_re, last.e_im);
}

fn main() {
    run(3.0);
}
