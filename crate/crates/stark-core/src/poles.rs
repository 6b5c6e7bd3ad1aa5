//! Resonance poles: complex zeros of the spectral-density denominator,
//! continued in the interatomic distance and classified into crossings
//! and avoided crossings.
//!
//! Muller's method does the local solves (D is a black-box complex
//! function of scaled products; finite-difference derivatives of it are
//! noisy, so a derivative-free method fits). Continuation marches R in
//! fixed steps, seeding each solve by linear extrapolation of the two
//! previous roots. Classification is pairwise over branches: an avoided
//! crossing is a close approach below `d_avoid` with the imaginary parts
//! exchanging slopes; a plain crossing swaps the real-part ordering while
//! the imaginary parts stay separated.

use crate::model::ModelParams;
use crate::starkfield::pole_denominator;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Search strip in the complex energy plane.
#[derive(Debug, Clone, Copy)]
pub struct SearchStrip {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Default for SearchStrip {
    fn default() -> Self {
        SearchStrip {
            re_min: -10.0,
            re_max: 10.0,
            im_min: -5.0,
            im_max: 0.0,
        }
    }
}

impl SearchStrip {
    pub fn contains(&self, e: Complex64) -> bool {
        e.re >= self.re_min && e.re <= self.re_max && e.im >= self.im_min && e.im <= self.im_max
    }

    /// Iterates may overshoot the strip slightly (narrow resonances sit
    /// right on Im E = 0); only reject clear escapes.
    fn tolerates(&self, e: Complex64) -> bool {
        let mre = 1e-3 * (self.re_max - self.re_min).max(1.0);
        let mim = 1e-3 * (self.im_max - self.im_min).max(1.0);
        e.re >= self.re_min - mre
            && e.re <= self.re_max + mre
            && e.im >= self.im_min - mim
            && e.im <= self.im_max + mim
    }
}

/// One accepted root.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PoleRecord {
    pub r: f64,
    pub e_re: f64,
    pub e_im: f64,
    pub residual: f64,
    pub iterations: u32,
}

impl PoleRecord {
    pub fn e(&self) -> Complex64 {
        Complex64::new(self.e_re, self.e_im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventKind {
    Crossing,
    AvoidedCrossing,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceEvent {
    pub r: f64,
    pub kind: EventKind,
    pub partner: usize,
}

/// One branch continued in R.
#[derive(Debug, Clone, Serialize)]
pub struct PoleTrace {
    pub branch_id: usize,
    pub records: Vec<PoleRecord>,
    pub events: Vec<TraceEvent>,
    /// Set when the march stopped early (non-convergence), with the R
    /// where it happened.
    pub aborted_at: Option<f64>,
    /// R values where this branch collided with another (same root).
    pub collisions: Vec<(f64, usize)>,
}

const MULLER_MAX_ITER: u32 = 100;
const MULLER_DE_TOL: f64 = 1e-12;
const MULLER_RESIDUAL_TOL: f64 = 1e-10;
/// Long marches at small F leave an evaluation noise floor above 1e−10;
/// a root is still accepted when the iterate has stopped moving and the
/// residual is at least this small.
const MULLER_RESIDUAL_CAP: f64 = 1e-6;

/// Muller iteration on f from three seeds around `guess`. Converges when
/// |ΔE| < 1e−12 and |f| < 1e−10, or when two consecutive steps are below
/// 1e−12 with |f| under the noise cap.
pub fn muller<F>(f: &F, guess: Complex64, strip: &SearchStrip) -> Result<(Complex64, f64, u32)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let spread = 1e-4 * guess.norm().max(1.0);
    let mut x0 = guess * (1.0 - 1e-4) - Complex64::new(0.0, spread);
    let mut x1 = guess * (1.0 + 1e-4) + Complex64::new(0.0, spread);
    let mut x2 = guess;
    let mut f0 = f(x0)?;
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = (x2, f2.norm());
    let mut prev_iterates: Vec<Complex64> = Vec::with_capacity(4);
    let mut last_restart_best = f64::INFINITY;

    for it in 1..=MULLER_MAX_ITER {
        // Restart from the best point with a tightened spread if a whole
        // block of iterations brought no real progress (plateau wander).
        if it % 25 == 0 {
            if best.1 > 0.5 * last_restart_best {
                let s = spread * 1e-2;
                x0 = best.0 + Complex64::new(-s, -0.3 * s);
                x1 = best.0 + Complex64::new(s, 0.3 * s);
                x2 = best.0;
                f0 = f(x0)?;
                f1 = f(x1)?;
                f2 = f(x2)?;
            }
            last_restart_best = best.1;
        }
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        if h1.norm() == 0.0 || h2.norm() == 0.0 {
            break;
        }
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let dd = (d2 - d1) / (h2 + h1);
        let b = d2 + h2 * dd;
        let disc = (b * b - 4.0 * f2 * dd).sqrt();
        let den = if (b + disc).norm() >= (b - disc).norm() {
            b + disc
        } else {
            b - disc
        };
        if den.norm() == 0.0 {
            break;
        }
        let step = -2.0 * f2 / den;
        let x3 = x2 + step;
        if !x3.re.is_finite() || !x3.im.is_finite() {
            break;
        }
        if !strip.tolerates(x3) {
            return Err(Error::OutOfStrip { e: x3 });
        }
        let f3 = f(x3)?;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f3;
        if f2.norm() < best.1 {
            best = (x2, f2.norm());
        }
        if step.norm() < MULLER_DE_TOL && f2.norm() < MULLER_RESIDUAL_TOL {
            return Ok((x2, f2.norm(), it));
        }
        // Noise-floor acceptance: the iterate cloud has collapsed far
        // below any usable resolution but the residual floor (march noise
        // at small F) sits above 1e−10.
        prev_iterates.push(x2);
        if prev_iterates.len() > 3 {
            prev_iterates.remove(0);
        }
        if prev_iterates.len() == 3 && f2.norm() < MULLER_RESIDUAL_CAP {
            let diam = prev_iterates
                .iter()
                .flat_map(|a| prev_iterates.iter().map(move |b| (a - b).norm()))
                .fold(0.0_f64, f64::max);
            if diam < 1e-10 {
                return Ok((x2, f2.norm(), it));
            }
        }
    }
    Err(Error::NoConvergence {
        best: best.0,
        residual: best.1,
        iterations: MULLER_MAX_ITER,
    })
}

/// Locate the denominator zero nearest to `e_guess`.
pub fn find_pole(
    e_guess: Complex64,
    params: &ModelParams,
    strip: &SearchStrip,
) -> Result<PoleRecord> {
    let f = |e: Complex64| pole_denominator(e, params);
    let (e, residual, iterations) = muller(&f, e_guess, strip)?;
    Ok(PoleRecord {
        r: params.r,
        e_re: e.re,
        e_im: e.im,
        residual,
        iterations,
    })
}

/// Scan the strip on a coarse grid for local minima of |D| and polish each
/// with Muller; deduplicated seeds for the continuation.
pub fn seed_poles(
    params: &ModelParams,
    strip: &SearchStrip,
    n_re: usize,
    n_im: usize,
) -> Vec<PoleRecord> {
    let mut mags = vec![f64::INFINITY; n_re * n_im];
    let at = |i: usize, j: usize| -> Complex64 {
        Complex64::new(
            strip.re_min + (strip.re_max - strip.re_min) * i as f64 / (n_re - 1) as f64,
            strip.im_min + (strip.im_max - strip.im_min) * j as f64 / (n_im - 1) as f64,
        )
    };
    for j in 0..n_im {
        for i in 0..n_re {
            if let Ok(d) = pole_denominator(at(i, j), params) {
                mags[j * n_re + i] = d.norm();
            }
        }
    }
    let mut found: Vec<PoleRecord> = Vec::new();
    for j in 1..n_im - 1 {
        for i in 1..n_re - 1 {
            let c = mags[j * n_re + i];
            if !c.is_finite() {
                continue;
            }
            let neigh = [
                mags[(j - 1) * n_re + i],
                mags[(j + 1) * n_re + i],
                mags[j * n_re + i - 1],
                mags[j * n_re + i + 1],
                mags[(j - 1) * n_re + i - 1],
                mags[(j - 1) * n_re + i + 1],
                mags[(j + 1) * n_re + i - 1],
                mags[(j + 1) * n_re + i + 1],
            ];
            if neigh.iter().all(|&n| c <= n) {
                if let Ok(rec) = find_pole(at(i, j), params, strip) {
                    if rec.e_im <= 1e-12
                        && !found
                            .iter()
                            .any(|r| (r.e() - rec.e()).norm() < 1e-6)
                    {
                        found.push(rec);
                    }
                }
            }
        }
    }
    found.sort_by(|a, b| a.e_re.total_cmp(&b.e_re));
    found
}

/// Continuation settings; `d_avoid` and the slope-exchange window feed the
/// classifier.
#[derive(Debug, Clone, Copy)]
pub struct ContinuationConfig {
    pub strip: SearchStrip,
    pub d_avoid: f64,
    pub window: usize,
    /// A step-to-step jump larger than this aborts the branch rather than
    /// silently hopping to a different root.
    pub jump_threshold: f64,
    /// Worker threads for the branch loop; defaults to machine
    /// parallelism.
    pub workers: Option<usize>,
    /// Rescan the pool periodically and adopt roots no live branch is
    /// tracking: the Ramsauer-Townsend resonances multiply as R grows, so
    /// branches can be born far from R₀.
    pub rescan: Option<RescanConfig>,
}

#[derive(Debug, Clone, Copy)]
pub struct RescanConfig {
    pub every: f64,
    pub strip: SearchStrip,
    pub n_re: usize,
    pub n_im: usize,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig {
            strip: SearchStrip::default(),
            d_avoid: 0.05,
            window: 5,
            jump_threshold: 0.25,
            workers: None,
            rescan: None,
        }
    }
}

/// March every seed from r0 to r1 in steps of `step`, re-solving at each R
/// with a linearly extrapolated guess. With `cfg.rescan` set, the strip is
/// re-scanned at intervals and unclaimed roots start new branches there.
pub fn continue_in_r(
    seeds: &[Complex64],
    params: &ModelParams,
    r_range: (f64, f64),
    step: f64,
    cfg: &ContinuationConfig,
) -> Vec<PoleTrace> {
    assert!(step > 0.0, "step must be positive");
    let (r0, r1) = r_range;
    let n_steps = ((r1 - r0) / step).round() as usize;

    let run_branch = |branch_id: usize, start_k: usize, seed: Complex64| -> PoleTrace {
        let mut trace = PoleTrace {
            branch_id,
            records: Vec::with_capacity(n_steps + 1 - start_k),
            events: Vec::new(),
            aborted_at: None,
            collisions: Vec::new(),
        };
        let mut guess = seed;
        for k in start_k..=n_steps {
            let r = r0 + k as f64 * step;
            let p = ModelParams { r, ..*params };
            match find_pole(guess, &p, &cfg.strip) {
                Ok(rec) => {
                    if let Some(last) = trace.records.last() {
                        if (rec.e() - last.e()).norm() > cfg.jump_threshold {
                            trace.aborted_at = Some(r);
                            break;
                        }
                    }
                    trace.records.push(rec);
                    // Extrapolate for the next step.
                    let n = trace.records.len();
                    guess = if n >= 2 {
                        2.0 * trace.records[n - 1].e() - trace.records[n - 2].e()
                    } else {
                        rec.e()
                    };
                }
                Err(_) => {
                    trace.aborted_at = Some(r);
                    break;
                }
            }
        }
        trace
    };

    // Branches are independent; split each batch across threads.
    let run_batch = |batch: &[(usize, usize, Complex64)]| -> Vec<PoleTrace> {
        let n_workers = cfg
            .workers
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|n| n.get())
                    .unwrap_or(1)
            })
            .max(1)
            .min(batch.len().max(1));
        let mut out: Vec<Option<PoleTrace>> = vec![None; batch.len()];
        std::thread::scope(|scope| {
            let chunks: Vec<Vec<usize>> = (0..n_workers)
                .map(|w| (w..batch.len()).step_by(n_workers).collect())
                .collect();
            let mut handles = Vec::new();
            for chunk in chunks {
                let run = &run_branch;
                handles.push(scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|i| {
                            let (id, start_k, seed) = batch[i];
                            (i, run(id, start_k, seed))
                        })
                        .collect::<Vec<_>>()
                }));
            }
            for h in handles {
                for (i, t) in h.join().expect("branch worker panicked") {
                    out[i] = Some(t);
                }
            }
        });
        out.into_iter().map(|t| t.unwrap()).collect()
    };

    let batch: Vec<(usize, usize, Complex64)> = seeds
        .iter()
        .enumerate()
        .map(|(i, &s)| (i, 0, s))
        .collect();
    let mut traces = run_batch(&batch);

    if let Some(rescan) = cfg.rescan {
        let stride = (rescan.every / step).round().max(1.0) as usize;
        let mut next_id = traces.len();
        for k in (stride..n_steps).step_by(stride) {
            let r = r0 + k as f64 * step;
            let p = ModelParams { r, ..*params };
            let found = seed_poles(&p, &rescan.strip, rescan.n_re, rescan.n_im);
            let mut newcomers = Vec::new();
            for rec in found {
                let claimed = traces.iter().any(|t| {
                    t.records
                        .iter()
                        .any(|q| (q.r - r).abs() < 0.5 * step && (q.e() - rec.e()).norm() < 1e-3)
                });
                if !claimed {
                    newcomers.push((next_id, k, rec.e()));
                    next_id += 1;
                }
            }
            if !newcomers.is_empty() {
                traces.extend(run_batch(&newcomers));
            }
        }
    }

    // Collision bookkeeping: identical roots at the same R.
    let snapshot: Vec<Vec<(f64, Complex64)>> = traces
        .iter()
        .map(|t| t.records.iter().map(|r| (r.r, r.e())).collect())
        .collect();
    for i in 0..snapshot.len() {
        for j in i + 1..snapshot.len() {
            for (ri, ei) in &snapshot[i] {
                if let Some((rj, _)) = snapshot[j]
                    .iter()
                    .find(|(rj, ej)| (rj - ri).abs() < 0.5 * step && (ej - ei).norm() < 1e-9)
                {
                    traces[i].collisions.push((*ri, j));
                    traces[j].collisions.push((*rj, i));
                }
            }
        }
    }
    traces
}

/// Pairwise event classification. Events land on both traces involved.
pub fn classify_events(traces: &mut [PoleTrace], cfg: &ContinuationConfig) {
    let n = traces.len();
    for i in 0..n {
        for j in i + 1..n {
            let events = classify_pair(&traces[i], &traces[j], cfg);
            for (r, kind) in events {
                traces[i].events.push(TraceEvent {
                    r,
                    kind,
                    partner: traces[j].branch_id,
                });
                traces[j].events.push(TraceEvent {
                    r,
                    kind,
                    partner: traces[i].branch_id,
                });
            }
        }
    }
    for t in traces.iter_mut() {
        t.events.sort_by(|a, b| a.r.total_cmp(&b.r));
    }
}

fn slope_sign_change(im: &[f64], k: usize, window: usize) -> bool {
    let lo = k.saturating_sub(window);
    let hi = (k + window).min(im.len() - 1);
    if hi - lo < 2 {
        return false;
    }
    let mut prev: Option<f64> = None;
    for t in lo..hi {
        let s = im[t + 1] - im[t];
        if let Some(p) = prev {
            if p * s < 0.0 {
                return true;
            }
        }
        if s != 0.0 {
            prev = Some(s);
        }
    }
    false
}

fn classify_pair(a: &PoleTrace, b: &PoleTrace, cfg: &ContinuationConfig) -> Vec<(f64, EventKind)> {
    // Align by R (branches share the grid; one may be shorter).
    let mut common: Vec<(f64, Complex64, Complex64)> = Vec::new();
    let mut jb = 0usize;
    for ra in &a.records {
        while jb < b.records.len() && b.records[jb].r < ra.r - 1e-9 {
            jb += 1;
        }
        if jb >= b.records.len() {
            break;
        }
        if (b.records[jb].r - ra.r).abs() < 1e-9 {
            common.push((ra.r, ra.e(), b.records[jb].e()));
        }
    }
    if common.len() < 3 {
        return Vec::new();
    }
    let dist: Vec<f64> = common.iter().map(|(_, ea, eb)| (ea - eb).norm()).collect();
    // Two branches tracking the same root (a flagged collision) are one
    // resonance, not an event-generating pair.
    let mut sorted = dist.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted[sorted.len() / 2] < 1e-6 {
        return Vec::new();
    }
    let im_a: Vec<f64> = common.iter().map(|(_, ea, _)| ea.im).collect();
    let im_b: Vec<f64> = common.iter().map(|(_, _, eb)| eb.im).collect();

    let mut events = Vec::new();
    // Avoided crossings: a close-approach minimum below d_avoid where the
    // imaginary parts rapidly trade places — either both branches' Im
    // slopes reverse inside the window, or the Im separation changes sign
    // (the branches exchange their positions in the complex plane).
    for k in 1..common.len() - 1 {
        if dist[k] <= dist[k - 1] && dist[k] <= dist[k + 1] && dist[k] < cfg.d_avoid {
            let slopes = slope_sign_change(&im_a, k, cfg.window)
                && slope_sign_change(&im_b, k, cfg.window);
            let lo = k.saturating_sub(cfg.window);
            let hi = (k + cfg.window).min(common.len() - 1);
            let sep_lo = im_a[lo] - im_b[lo];
            let sep_hi = im_a[hi] - im_b[hi];
            // The exchange must be resolvable, not solver noise.
            let sep_flip =
                sep_lo * sep_hi < 0.0 && sep_lo.abs().max(sep_hi.abs()) > 1e-5;
            if slopes || sep_flip {
                events.push((common[k].0, EventKind::AvoidedCrossing, k));
            }
        }
    }
    // Crossings: Re ordering swaps (possibly through an exact tie) while
    // Im stays separated.
    let mut prev_sign: Option<f64> = None;
    for k in 0..common.len() {
        let d = common[k].1.re - common[k].2.re;
        if d == 0.0 {
            continue;
        }
        let s = d.signum();
        if let Some(ps) = prev_sign {
            if s != ps {
                let im_gap = (im_a[k] - im_b[k]).abs();
                if im_gap > cfg.d_avoid {
                    events.push((common[k].0, EventKind::Crossing, k));
                }
            }
        }
        prev_sign = Some(s);
    }
    // Overlapping windows of both kinds are ambiguous, never silently
    // resolved one way.
    let mut out: Vec<(f64, EventKind)> = Vec::new();
    'outer: for (idx, &(r, kind, k)) in events.iter().enumerate() {
        for (jdx, &(_, other_kind, ko)) in events.iter().enumerate() {
            if idx != jdx
                && other_kind != kind
                && (k as isize - ko as isize).unsigned_abs() <= cfg.window
            {
                out.push((r, EventKind::Ambiguous));
                continue 'outer;
            }
        }
        out.push((r, kind));
    }
    out.dedup_by(|x, y| (x.0 - y.0).abs() < 1e-12 && x.1 == y.1);
    out
}
