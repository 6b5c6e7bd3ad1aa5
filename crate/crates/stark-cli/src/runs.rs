//! The computations behind each subcommand.

use crate::config::RunConfig;
use crate::output::{DensityOutput, PolesOutput};
use anyhow::Context;
use num_complex::Complex64;
use rayon::prelude::*;
use stark_core::poles::{classify_events, continue_in_r, seed_poles, ContinuationConfig, SearchStrip};
use stark_core::zerofield::{bound_states, double_delta_density, free_density, SpectralSample};
use stark_core::{starkfield, ModelParams};

fn split_edges(
    grid: &[f64],
    samples: Vec<anyhow::Result<SpectralSample>>,
) -> anyhow::Result<DensityOutput> {
    let mut out = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for s in samples {
        let s = s?;
        if s.edge_singular {
            skipped.push(s.e);
        } else {
            out.push(s);
        }
    }
    Ok(DensityOutput {
        samples: out,
        skipped_edges: skipped,
        bound_states: None,
    })
}

pub fn run_free_density(cfg: &RunConfig) -> anyhow::Result<DensityOutput> {
    let params = cfg.params()?;
    let grid = cfg.energy_grid();
    let samples: Vec<_> = grid
        .par_iter()
        .map(|&e| Ok(free_density(e, &params)))
        .collect();
    split_edges(&grid, samples)
}

pub fn run_zero_field(cfg: &RunConfig) -> anyhow::Result<DensityOutput> {
    let params = cfg.params()?;
    let grid = cfg.energy_grid();
    let samples: Vec<_> = grid
        .par_iter()
        .map(|&e| {
            double_delta_density(e, &params).with_context(|| format!("density at E={e}"))
        })
        .collect();
    let mut out = split_edges(&grid, samples)?;
    out.bound_states = Some(bound_states(&params));
    Ok(out)
}

pub fn run_stark_density(cfg: &RunConfig) -> anyhow::Result<DensityOutput> {
    let params = cfg.params()?;
    if params.f <= 0.0 {
        anyhow::bail!("stark-density needs F > 0");
    }
    let grid = cfg.energy_grid();
    let samples: Vec<_> = grid
        .par_iter()
        .map(|&e| {
            starkfield::stark_density(e, &params).with_context(|| format!("density at E={e}"))
        })
        .collect();
    split_edges(&grid, samples)
}

/// Initial seeds for the continuation: the zero-field bound states pushed
/// slightly off the axis, pooled with a |D| local-minimum scan of the
/// strip so the Ramsauer-Townsend branches participate in the event
/// classification.
pub fn pole_seeds(cfg: &RunConfig, params_at_rmin: &ModelParams) -> Vec<Complex64> {
    let scan_strip = SearchStrip {
        re_min: cfg.emin.max(-10.0),
        re_max: cfg.emax.min(10.0),
        im_min: -2.0,
        im_max: -1e-4,
    };
    let n_re = (((cfg.emax - cfg.emin) * 12.0) as usize).clamp(60, 240);
    let mut seeds: Vec<Complex64> = seed_poles(params_at_rmin, &scan_strip, n_re, 48)
        .iter()
        .map(|r| r.e())
        .collect();
    // Make sure the branches emanating from the zero-field bound states
    // are in the pool: converge each first, then deduplicate against the
    // scan (the strip scan usually finds them already).
    let push = -(1e-3_f64).min(params_at_rmin.f / 10.0);
    let bs = bound_states(&ModelParams {
        f: 0.0,
        ..*params_at_rmin
    });
    let full_strip = SearchStrip::default();
    for e0 in [bs.ground, bs.excited].into_iter().flatten() {
        let guess = Complex64::new(e0, push);
        let converged = stark_core::poles::find_pole(guess, params_at_rmin, &full_strip)
            .map(|r| r.e())
            .unwrap_or(guess);
        if !seeds.iter().any(|s| (s - converged).norm() < 1e-6) {
            seeds.push(converged);
        }
    }
    seeds
}

pub fn run_poles(cfg: &RunConfig) -> anyhow::Result<PolesOutput> {
    let params = ModelParams::new(cfg.m, cfg.c, cfg.g, cfg.rmin, cfg.f)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    if params.f <= 0.0 {
        anyhow::bail!("poles needs F > 0");
    }
    let seeds = pole_seeds(cfg, &params);
    if seeds.is_empty() {
        anyhow::bail!("no pole seeds found in the scan strip");
    }
    let ccfg = ContinuationConfig {
        d_avoid: cfg.d_avoid,
        workers: Some(cfg.threads),
        ..Default::default()
    };
    let mut traces = continue_in_r(&seeds, &params, (cfg.rmin, cfg.rmax), cfg.rstep, &ccfg);
    classify_events(&mut traces, &ccfg);
    if traces.iter().all(|t| t.records.is_empty()) {
        anyhow::bail!("every branch failed to converge");
    }
    Ok(PolesOutput { traces })
}
