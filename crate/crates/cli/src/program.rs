//! Program commands: asm, disasm, run.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use unifpu::fpu::Pcsr;
use unifpu::isa::{assemble, disassemble};
use unifpu::sim::{load_words, CostModel, DataSegment, HaltReason, DEFAULT_MEM_BYTES};

use crate::numeric::parse_hex;
use crate::Global;

pub struct RunArgs {
    pub input: PathBuf,
    pub trace: bool,
    pub max_cycles: u64,
    pub base: u32,
    pub data: Vec<String>,
    pub pcsr: Option<u32>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Hex tokens separated by whitespace; `#` and `//` start comments.
fn hex_tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().flat_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let line = line.split("//").next().unwrap_or("");
        line.split_whitespace().map(move |t| (i + 1, t))
    })
}

fn parse_hex_words(text: &str, path: &Path) -> Result<Vec<u32>> {
    hex_tokens(text)
        .map(|(line, t)| {
            let t = t.trim_start_matches("0x").trim_start_matches("0X");
            u32::from_str_radix(t, 16)
                .with_context(|| format!("{}:{line}: bad hex word {t:?}", path.display()))
        })
        .collect()
}

fn parse_hex_bytes(text: &str, path: &Path) -> Result<Vec<u8>> {
    hex_tokens(text)
        .map(|(line, t)| {
            let t = t.trim_start_matches("0x").trim_start_matches("0X");
            u8::from_str_radix(t, 16)
                .with_context(|| format!("{}:{line}: bad hex byte {t:?}", path.display()))
        })
        .collect()
}

fn is_source(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("s" | "S" | "asm"))
}

fn load_text(path: &Path) -> Result<Vec<u32>> {
    let text = read(path)?;
    if is_source(path) {
        let prog = assemble(&text).with_context(|| format!("assembling {}", path.display()))?;
        Ok(prog.words)
    } else {
        parse_hex_words(&text, path)
    }
}

fn data_segment(spec: &str) -> Result<DataSegment> {
    let Some((addr, file)) = spec.split_once(':') else {
        bail!("data segment {spec:?} must be ADDR:FILE");
    };
    let addr = parse_hex(addr).map_err(anyhow::Error::msg)?;
    let path = Path::new(file);
    let bytes = if path.extension().and_then(|e| e.to_str()) == Some("hex") {
        parse_hex_bytes(&read(path)?, path)?
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(DataSegment { addr, bytes })
}

pub fn cost_model(g: &Global) -> Result<CostModel> {
    match &g.cost {
        None => Ok(CostModel::default()),
        Some(p) => serde_json::from_str(&read(p)?)
            .with_context(|| format!("parsing cost model {}", p.display())),
    }
}

pub fn asm(input: &Path, output: Option<&Path>) -> Result<bool> {
    let prog = assemble(&read(input)?).with_context(|| format!("assembling {}", input.display()))?;
    let mut text = String::with_capacity(prog.words.len() * 9);
    for w in &prog.words {
        text.push_str(&format!("{w:08x}\n"));
    }
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(true)
}

pub fn disasm(input: &Path, addresses: bool) -> Result<bool> {
    let words = parse_hex_words(&read(input)?, input)?;
    let mut out = BufWriter::new(io::stdout().lock());
    for (i, w) in words.iter().enumerate() {
        if addresses {
            writeln!(out, "{:08x}:  {}", 4 * i, disassemble(*w))?;
        } else {
            writeln!(out, "{}", disassemble(*w))?;
        }
    }
    out.flush()?;
    Ok(true)
}

/// Prints the final state; succeeds only on an `ecall`/`ebreak` halt.
pub fn run(g: &Global, a: &RunArgs) -> Result<bool> {
    let words = load_text(&a.input)?;
    let data = a.data.iter().map(|s| data_segment(s)).collect::<Result<Vec<_>>>()?;
    let mem = g.mem_bytes.unwrap_or(DEFAULT_MEM_BYTES);
    let mut s = load_words(&words, a.base, &data, mem)?;
    s.cost = cost_model(g)?;
    if let Some(p) = a.pcsr {
        s.csrs.pcsr = p & Pcsr::MASK;
    }
    let outcome = if a.trace {
        let mut err = BufWriter::new(io::stderr().lock());
        let o = s.run_traced(a.max_cycles, |r| {
            let _ = writeln!(err, "{r}");
        });
        err.flush()?;
        o
    } else {
        s.run(a.max_cycles)
    };
    println!("{}", serde_json::to_string_pretty(&s.dump())?);
    match outcome.halt {
        h if h.is_clean() => Ok(true),
        HaltReason::Trap(t) => {
            eprintln!("trap: {t}");
            Ok(false)
        }
        HaltReason::CycleBudget => {
            eprintln!("cycle budget of {} exhausted", a.max_cycles);
            Ok(false)
        }
    }
}
