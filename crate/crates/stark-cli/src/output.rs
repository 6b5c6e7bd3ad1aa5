//! Deterministic CSV and JSON emitters.
//!
//! CSV: comma-separated data, `#`-prefixed header and comment lines, LF
//! endings, C-locale decimal points, every number printed with 17
//! significant digits so values round-trip bit-exactly. No timestamps —
//! identical configurations produce byte-identical files.

use crate::config::{OutputFormat, RunConfig};
use serde::Serialize;
use serde_json::json;
use stark_core::poles::PoleTrace;
use stark_core::zerofield::{BoundStateSet, SpectralSample};
use std::io::Write;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits: round-trip safe for f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct DensityOutput {
    pub samples: Vec<SpectralSample>,
    /// Grid points skipped because they landed on a gap edge.
    pub skipped_edges: Vec<f64>,
    pub bound_states: Option<BoundStateSet>,
}

pub fn write_density(
    out: &mut dyn Write,
    cfg: &RunConfig,
    data: &DensityOutput,
) -> anyhow::Result<()> {
    match cfg.format {
        OutputFormat::Csv => write_density_csv(out, cfg, data),
        OutputFormat::Json => write_density_json(out, cfg, data),
    }
}

fn header(out: &mut dyn Write, cfg: &RunConfig) -> anyhow::Result<()> {
    writeln!(out, "# stark-spectral v{VERSION}")?;
    for line in cfg.echo_lines() {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

fn write_density_csv(
    out: &mut dyn Write,
    cfg: &RunConfig,
    data: &DensityOutput,
) -> anyhow::Result<()> {
    header(out, cfg)?;
    writeln!(out, "# columns: E,rho,is_gap")?;
    for s in &data.samples {
        writeln!(
            out,
            "{},{},{}",
            fmt17(s.e),
            fmt17(s.rho),
            u8::from(s.is_gap)
        )?;
    }
    for e in &data.skipped_edges {
        writeln!(out, "# skipped gap edge at E={}", fmt17(*e))?;
    }
    if let Some(bs) = &data.bound_states {
        writeln!(out, "# bound_states")?;
        writeln!(out, "# columns: branch,E")?;
        if let Some(e) = bs.ground {
            writeln!(out, "ground,{}", fmt17(e))?;
        }
        if let Some(e) = bs.excited {
            writeln!(out, "excited,{}", fmt17(e))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonSample {
    e: f64,
    rho: f64,
    is_gap: bool,
}

fn write_density_json(
    out: &mut dyn Write,
    cfg: &RunConfig,
    data: &DensityOutput,
) -> anyhow::Result<()> {
    let samples: Vec<JsonSample> = data
        .samples
        .iter()
        .map(|s| JsonSample {
            e: s.e,
            rho: s.rho,
            is_gap: s.is_gap,
        })
        .collect();
    let mut doc = json!({
        "version": VERSION,
        "config": cfg,
        "samples": samples,
        "skipped_edges": data.skipped_edges,
    });
    if let Some(bs) = &data.bound_states {
        doc["bound_states"] = serde_json::to_value(bs)?;
    }
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

pub struct PolesOutput {
    pub traces: Vec<PoleTrace>,
}

pub fn write_poles(out: &mut dyn Write, cfg: &RunConfig, data: &PolesOutput) -> anyhow::Result<()> {
    match cfg.format {
        OutputFormat::Csv => write_poles_csv(out, cfg, data),
        OutputFormat::Json => {
            let doc = json!({
                "version": VERSION,
                "config": cfg,
                "branches": data.traces,
            });
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
            Ok(())
        }
    }
}

fn write_poles_csv(out: &mut dyn Write, cfg: &RunConfig, data: &PolesOutput) -> anyhow::Result<()> {
    header(out, cfg)?;
    writeln!(out, "# columns: branch,R,re_E,im_E,residual")?;
    for tr in &data.traces {
        for rec in &tr.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                tr.branch_id,
                fmt17(rec.r),
                fmt17(rec.e_re),
                fmt17(rec.e_im),
                fmt17(rec.residual)
            )?;
        }
        if let Some(r) = tr.aborted_at {
            writeln!(out, "# branch {} aborted at R={}", tr.branch_id, fmt17(r))?;
        }
    }
    writeln!(out, "# events")?;
    writeln!(out, "# columns: branch,R,kind,partner")?;
    for tr in &data.traces {
        for ev in &tr.events {
            let kind = match ev.kind {
                stark_core::poles::EventKind::Crossing => "crossing",
                stark_core::poles::EventKind::AvoidedCrossing => "avoided-crossing",
                stark_core::poles::EventKind::Ambiguous => "ambiguous",
            };
            writeln!(
                out,
                "{},{},{},{}",
                tr.branch_id,
                fmt17(ev.r),
                kind,
                ev.partner
            )?;
        }
    }
    Ok(())
}
