//! Number-format commands: decode, encode, convert, sweep, exhaustive.

use std::io;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;
use unifpu::fp32::{ExceptionFlags, Fp32Bits, RoundingMode};
use unifpu::kernels::ElemFormat;
use unifpu::posit::verify::exhaustive_verify;
use unifpu::posit::{
    decimal_accuracy_sweep, encode_posit, exact_value, fp32_to_posit, posit_fields,
    posit_to_fp32, posit_to_posit, AccuracyFormat, PositFormat, Precision,
};
use unifpu::unpacked::UnpackedReal;

use crate::Global;

pub fn parse_prec(s: &str) -> Result<u32, String> {
    match s {
        "8" => Ok(8),
        "16" => Ok(16),
        _ => Err(format!("precision must be 8 or 16, got {s}")),
    }
}

/// Accepts `0x`-prefixed hex or plain decimal.
pub fn parse_hex(s: &str) -> Result<u32, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u32::from_str_radix(&h.replace('_', ""), 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad number {s:?}: {e}"))
}

fn format_of(prec: u32, es: u8) -> Result<PositFormat> {
    Ok(PositFormat::new(Precision::from_bits(prec)?, es)?)
}

fn hex(bits: u32, fmt: ElemFormat) -> String {
    format!("{bits:#0w$x}", w = 2 + 2 * fmt.bytes() as usize)
}

fn flag_names(f: ExceptionFlags) -> String {
    format!("{f:?}")
}

pub fn decode(g: &Global, prec: u32, es: u8, pattern: u32) -> Result<bool> {
    let fmt = format_of(prec, es)?;
    let p = fmt.value(pattern)?;
    let ef = ElemFormat::Posit(fmt);
    let exact = exact_value(p);
    let fields = posit_fields(p);
    if g.json {
        let f = fields.map(|f| {
            json!({
                "sign": f.sign, "regime_len": f.regime_len, "k": f.k,
                "exponent": f.exponent, "exponent_len": f.exponent_len,
                "fraction": f.fraction, "fraction_len": f.fraction_len,
            })
        });
        let out = json!({
            "format": fmt.to_string(),
            "bits": hex(pattern, ef),
            "nar": p.is_nar(),
            "fields": f,
            "exact": exact.map(|d| d.to_string()),
            "value": exact.map(|d| d.to_f64()),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(true);
    }
    println!("format    {fmt}");
    println!("bits      {} ({:0w$b})", hex(pattern, ef), pattern, w = prec as usize);
    match (fields, exact) {
        (_, None) => println!("value     NaR"),
        (None, Some(_)) => println!("value     0"),
        (Some(f), Some(d)) => {
            println!("sign      {}", f.sign as u8);
            println!("regime    k={} ({} bits)", f.k, f.regime_len);
            println!("exponent  {} ({} of {es} bits present)", f.exponent, f.exponent_len);
            println!(
                "fraction  {:#x} ({} bits)",
                f.fraction, f.fraction_len
            );
            println!("exact     {d}");
            println!("value     {}", d.to_f64());
        }
    }
    Ok(true)
}

pub fn encode(g: &Global, prec: u32, es: u8, value: f64) -> Result<bool> {
    let fmt = format_of(prec, es)?;
    let p = encode_posit(&UnpackedReal::from_f64(value), fmt.prec, fmt.es);
    let bits = hex(p.bits(), ElemFormat::Posit(fmt));
    let back = exact_value(p).map(|d| d.to_f64());
    if g.json {
        let out = json!({ "format": fmt.to_string(), "input": value, "bits": bits, "value": back });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{bits}");
    }
    Ok(true)
}

pub fn convert(g: &Global, from: ElemFormat, to: ElemFormat, pattern: u32) -> Result<bool> {
    if from.bytes() < 4 && pattern >> (8 * from.bytes()) != 0 {
        bail!("{pattern:#x} does not fit in {from}");
    }
    let (bits, flags) = match (from, to) {
        (ElemFormat::Fp32, ElemFormat::Fp32) => (pattern, ExceptionFlags::empty()),
        (ElemFormat::Posit(f), ElemFormat::Fp32) => {
            let (x, fl) = posit_to_fp32(f.value(pattern)?, RoundingMode::Rne);
            (x.0, fl)
        }
        (ElemFormat::Fp32, ElemFormat::Posit(t)) => {
            let (p, fl) = fp32_to_posit(Fp32Bits(pattern), t.prec, t.es);
            (p.bits(), fl)
        }
        (ElemFormat::Posit(f), ElemFormat::Posit(t)) => (
            posit_to_posit(f.value(pattern)?, t.prec, t.es).bits(),
            ExceptionFlags::empty(),
        ),
    };
    if g.json {
        let out = json!({
            "from": from.to_string(), "to": to.to_string(),
            "input": hex(pattern, from), "bits": hex(bits, to),
            "value": to.decode(bits), "flags": flag_names(flags),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else if flags.is_empty() {
        println!("{}", hex(bits, to));
    } else {
        println!("{} {}", hex(bits, to), flag_names(flags));
    }
    Ok(true)
}

pub fn sweep(g: &Global, fmts: &[AccuracyFormat], min: f64, max: f64, samples: usize) -> Result<bool> {
    let mut rows = Vec::new();
    for &f in fmts {
        rows.extend(decimal_accuracy_sweep(f, min, max, samples)?);
    }
    if g.json {
        #[derive(Serialize)]
        struct Row {
            format: String,
            x: f64,
            nearest: f64,
            accuracy: Option<f64>,
            exact: bool,
        }
        let out: Vec<Row> = rows
            .iter()
            .map(|r| Row {
                format: r.format.to_string(),
                x: r.x,
                nearest: r.nearest,
                accuracy: r.accuracy.is_finite().then_some(r.accuracy),
                exact: r.is_exact(),
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(true);
    }
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["format", "x", "nearest", "accuracy"])?;
    for r in &rows {
        w.write_record([
            r.format.to_string(),
            format!("{:e}", r.x),
            format!("{:e}", r.nearest),
            format!("{}", r.accuracy),
        ])?;
    }
    w.flush().context("writing CSV")?;
    Ok(true)
}

pub fn exhaustive(g: &Global, prec: u32, es: &[u8]) -> Result<bool> {
    let list: Vec<u8> = if !es.is_empty() {
        es.to_vec()
    } else if prec == 8 {
        (0..=7).collect()
    } else {
        vec![0, 1, 2]
    };
    let mut ok = true;
    let mut results = Vec::new();
    for e in list {
        let fmt = format_of(prec, e)?;
        match exhaustive_verify(fmt) {
            Ok(s) => {
                if !g.json {
                    let extra = if s.p2f_exact_checked { ", fp32 exact" } else { "" };
                    println!("{fmt}: ok ({} patterns{extra})", s.patterns);
                }
                results.push(json!({ "format": fmt.to_string(), "ok": true, "patterns": s.patterns, "p2f_exact_checked": s.p2f_exact_checked }));
            }
            Err(err) => {
                ok = false;
                if !g.json {
                    println!("{fmt}: FAIL {err}");
                }
                results.push(json!({ "format": fmt.to_string(), "ok": false, "error": err.to_string() }));
            }
        }
    }
    if g.json {
        println!("{}", serde_json::to_string_pretty(&results)?);
    }
    Ok(ok)
}
