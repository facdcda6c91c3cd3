//! Kernel benchmark sweep.

use std::io;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use unifpu::kernels::{evaluate, ElemFormat, Kernel, KernelConfig, KernelSpec, Mode, DATA_BASE};

use crate::program::cost_model;
use crate::Global;

#[derive(Debug, Serialize)]
struct Row {
    kernel: String,
    size: u32,
    fmt: String,
    mode: String,
    status: &'static str,
    reason: Option<String>,
    cycles: Option<u64>,
    instret: Option<u64>,
    flops: Option<u64>,
    mflops: Option<f64>,
    max_rel_err: Option<f64>,
    mean_rel_err: Option<f64>,
    footprint_bytes: u32,
    seed: u64,
}

fn config(g: &Global) -> Result<KernelConfig> {
    let mut cfg = KernelConfig {
        freq_mhz: g.freq_mhz,
        ..KernelConfig::default()
    };
    if !(g.freq_mhz > 0.0 && g.freq_mhz.is_finite()) {
        bail!("--freq-mhz must be positive, got {}", g.freq_mhz);
    }
    if g.cost.is_some() {
        cfg.cost = cost_model(g)?;
    }
    if let Some(mem) = g.mem_bytes {
        let Some(budget) = mem.checked_sub(DATA_BASE as usize) else {
            bail!("--mem-bytes {mem} leaves no room above the data base {DATA_BASE:#x}");
        };
        cfg.operand_budget = u32::try_from(budget).context("--mem-bytes too large")?;
    }
    Ok(cfg)
}

/// Runs the full cross product. Convert mode has no meaning for fp32, so
/// those combinations, and ones whose operands exceed the budget, are
/// reported as skipped rows. Out-of-range sizes are rejected up front.
pub fn bench(g: &Global, name: &str, sizes: &[u32], fmts: &[ElemFormat], modes: &[Mode]) -> Result<bool> {
    let cfg = config(g)?;
    let mut specs = Vec::new();
    for &size in sizes {
        let kernel = Kernel::sized(name, size).with_context(|| format!("unknown kernel {name}"))?;
        for &fmt in fmts {
            for &mode in modes {
                let spec = KernelSpec::new(kernel, fmt, mode, g.seed);
                let applicable = !(mode == Mode::Convert && !fmt.is_posit());
                if applicable {
                    spec.validate()?;
                } else {
                    KernelSpec::new(kernel, fmt, Mode::Unified, g.seed).validate()?;
                }
                specs.push((size, spec, applicable));
            }
        }
    }

    let mut rows = Vec::with_capacity(specs.len());
    let mut ok = true;
    for (size, spec, applicable) in specs {
        let mut row = Row {
            kernel: name.into(),
            size,
            fmt: spec.fmt.to_string(),
            mode: spec.mode.to_string(),
            status: "skipped",
            reason: None,
            cycles: None,
            instret: None,
            flops: None,
            mflops: None,
            max_rel_err: None,
            mean_rel_err: None,
            footprint_bytes: spec.footprint_bytes(),
            seed: spec.seed,
        };
        if !applicable {
            row.reason = Some("convert mode needs a posit format".into());
        } else {
            match evaluate(&spec, &cfg) {
                Ok(e) => {
                    let r = e.report;
                    row.status = "ok";
                    row.cycles = Some(r.cycles);
                    row.instret = Some(r.instret);
                    row.flops = Some(r.flops);
                    row.mflops = Some(r.mflops);
                    row.max_rel_err = Some(r.max_rel_err);
                    row.mean_rel_err = Some(r.mean_rel_err);
                }
                Err(e) if e.is_infeasible() => row.reason = Some(e.to_string()),
                Err(e) => {
                    ok = false;
                    row.status = "error";
                    row.reason = Some(e.to_string());
                }
            }
        }
        rows.push(row);
    }

    if g.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        let mut w = csv::Writer::from_writer(io::stdout().lock());
        for r in &rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(ok)
}
