//! GEMM, GEMV and softmax benchmark kernels: program generation, execution
//! on the simulator, and cycle / throughput / accuracy / footprint metrics.

mod codegen;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpu::{FpuLatency, Pcsr};
use crate::isa::{assemble, AsmError};
use crate::posit::{decode_posit, encode_posit, PositError, PositFormat, PositValue};
use crate::sim::{load_words, CostModel, DataSegment, HaltReason};
use crate::unpacked::UnpackedReal;

/// Start of the data image; the program text lives below it.
pub const DATA_BASE: u32 = 0x2000;
/// Kernel descriptor at `DATA_BASE`: `{m, n, k, pcsr}` as four words.
pub const HEADER_BYTES: u32 = 16;
/// Default bytes of data memory above `DATA_BASE`.
pub const DEFAULT_OPERAND_BUDGET: u32 = 3 * 1024;
pub const DEFAULT_FREQ_MHZ: f64 = 50.0;
/// Cycles charged per custom conversion instruction in kernel runs.
pub const KERNEL_POSIT_CONV_LATENCY: u32 = 5;

const SOFTMAX_CONST_BYTES: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElemFormat {
    Fp32,
    Posit(PositFormat),
}

impl ElemFormat {
    pub fn bytes(self) -> u32 {
        match self {
            ElemFormat::Fp32 => 4,
            ElemFormat::Posit(f) => f.nbits() / 8,
        }
    }

    pub fn is_posit(self) -> bool {
        matches!(self, ElemFormat::Posit(_))
    }

    fn load_mnemonic(self) -> &'static str {
        match self.bytes() {
            4 => "lw",
            2 => "lhu",
            _ => "lbu",
        }
    }

    fn store_mnemonic(self) -> &'static str {
        match self.bytes() {
            4 => "sw",
            2 => "sh",
            _ => "sb",
        }
    }

    fn prec_token(self) -> String {
        format!("p{}", self.bytes() * 8)
    }

    fn es(self) -> u8 {
        match self {
            ElemFormat::Fp32 => 0,
            ElemFormat::Posit(f) => f.es,
        }
    }

    /// pcsr value that makes every slot use this format.
    pub fn pcsr(self) -> u32 {
        match self {
            ElemFormat::Fp32 => 0,
            ElemFormat::Posit(f) => Pcsr::uniform(f).pack(),
        }
    }

    /// Nearest stored pattern for `x`.
    pub fn encode(self, x: f64) -> u32 {
        match self {
            ElemFormat::Fp32 => (x as f32).to_bits(),
            ElemFormat::Posit(f) => encode_posit(&UnpackedReal::from_f64(x), f.prec, f.es).bits(),
        }
    }

    pub fn decode(self, bits: u32) -> f64 {
        match self {
            ElemFormat::Fp32 => f32::from_bits(bits) as f64,
            ElemFormat::Posit(f) => decode_posit(PositValue::from_low_bits(bits, f)).to_f64(),
        }
    }
}

impl fmt::Display for ElemFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemFormat::Fp32 => f.write_str("fp32"),
            ElemFormat::Posit(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for ElemFormat {
    type Err = PositError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fp32" => Ok(ElemFormat::Fp32),
            other => other.parse().map(ElemFormat::Posit),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// One pcsr write, then plain RV32F compute on the packed format.
    Unified,
    /// pcsr stays 0; every operand is converted with the custom `fcvt`s.
    Convert,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Unified => "unified",
            Mode::Convert => "convert",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unified" => Ok(Mode::Unified),
            "convert" => Ok(Mode::Convert),
            other => Err(format!("unknown mode `{other}` (expected unified or convert)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kernel {
    Gemm { m: u32, n: u32, k: u32 },
    Gemv { m: u32, n: u32 },
    Softmax { len: u32 },
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::Gemm { .. } => "gemm",
            Kernel::Gemv { .. } => "gemv",
            Kernel::Softmax { .. } => "softmax",
        }
    }

    /// The square (or length-`size`) instance of the named kernel.
    pub fn sized(name: &str, size: u32) -> Option<Kernel> {
        Some(match name {
            "gemm" => Kernel::Gemm {
                m: size,
                n: size,
                k: size,
            },
            "gemv" => Kernel::Gemv { m: size, n: size },
            "softmax" => Kernel::Softmax { len: size },
            _ => return None,
        })
    }

    /// Number of operand elements held in memory (inputs plus outputs).
    pub fn elements(self) -> u32 {
        match self {
            Kernel::Gemm { m, n, k } => m * k + k * n + m * n,
            Kernel::Gemv { m, n } => m * n + n + m,
            Kernel::Softmax { len } => 2 * len,
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Kernel::Gemm { m, n, k } => write!(f, "gemm {m}x{n}x{k}"),
            Kernel::Gemv { m, n } => write!(f, "gemv {m}x{n}"),
            Kernel::Softmax { len } => write!(f, "softmax {len}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kernel: Kernel,
    pub fmt: ElemFormat,
    pub mode: Mode,
    pub seed: u64,
}

impl KernelSpec {
    pub fn new(kernel: Kernel, fmt: ElemFormat, mode: Mode, seed: u64) -> Self {
        KernelSpec {
            kernel,
            fmt,
            mode,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        let bad = |m: String| Err(KernelError::InvalidSpec(m));
        if self.mode == Mode::Convert && !self.fmt.is_posit() {
            return bad("convert mode requires a posit format".into());
        }
        let in_range = |v: u32, lo: u32, hi: u32| (lo..=hi).contains(&v);
        match self.kernel {
            Kernel::Gemm { m, n, k } if ![m, n, k].iter().all(|&d| in_range(d, 4, 32)) => {
                bad(format!("GEMM dimensions must be within 4..=32, got {m}x{n}x{k}"))
            }
            Kernel::Gemv { m, n } if !in_range(m, 4, 32) || !in_range(n, 4, 32) => {
                bad(format!("GEMV dimensions must be within 4..=32, got {m}x{n}"))
            }
            Kernel::Softmax { len } if !in_range(len, 8, 128) => {
                bad(format!("softmax length must be within 8..=128, got {len}"))
            }
            _ => Ok(()),
        }
    }

    /// Bytes of operand storage: element count times element width.
    pub fn footprint_bytes(&self) -> u32 {
        self.kernel.elements() * self.fmt.bytes()
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.kernel, self.fmt, self.mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    /// Data memory above `DATA_BASE`, including the descriptor.
    pub operand_budget: u32,
    pub freq_mhz: f64,
    pub cost: CostModel,
    pub max_cycles: u64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            operand_budget: DEFAULT_OPERAND_BUDGET,
            freq_mhz: DEFAULT_FREQ_MHZ,
            cost: CostModel {
                fpu: FpuLatency {
                    posit_conv: KERNEL_POSIT_CONV_LATENCY,
                    ..FpuLatency::default()
                },
                ..CostModel::default()
            },
            max_cycles: 1 << 32,
        }
    }
}

impl KernelConfig {
    pub fn mem_bytes(&self) -> usize {
        (DATA_BASE + self.operand_budget) as usize
    }
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("invalid kernel spec: {0}")]
    InvalidSpec(String),
    #[error("data image needs {need} bytes but the operand budget is {budget}")]
    DoesNotFit { need: u32, budget: u32 },
    #[error("program text of {0} bytes overlaps the data region")]
    TextTooLarge(u32),
    #[error("generated assembly failed to assemble: {0}")]
    Asm(#[from] AsmError),
    #[error("kernel did not finish cleanly: {0:?}")]
    Halted(HaltReason),
}

impl KernelError {
    /// True for the resource errors that mark a spec as infeasible.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, KernelError::DoesNotFit { .. } | KernelError::TextTooLarge(_))
    }
}

/// Addresses of the operand arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub data: u32,
    pub inputs: Vec<u32>,
    pub output: u32,
    /// One past the last data byte.
    pub end: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedKernel {
    pub spec: KernelSpec,
    pub asm: String,
    pub words: Vec<u32>,
    pub data: Vec<DataSegment>,
    pub layout: Layout,
    /// Input values exactly as stored, decoded.
    pub inputs: Vec<Vec<f64>>,
}

fn layout(spec: &KernelSpec) -> Layout {
    let esz = spec.fmt.bytes();
    let mut at = DATA_BASE + HEADER_BYTES;
    let counts: Vec<u32> = match spec.kernel {
        Kernel::Gemm { m, n, k } => vec![m * k, k * n, m * n],
        Kernel::Gemv { m, n } => vec![m * n, n, m],
        Kernel::Softmax { len } => {
            at += SOFTMAX_CONST_BYTES;
            vec![len, len]
        }
    };
    let mut addrs = Vec::new();
    for c in &counts {
        addrs.push(at);
        at += c * esz;
    }
    let output = addrs.pop().expect("at least one array");
    Layout {
        data: DATA_BASE,
        inputs: addrs,
        output,
        end: at,
    }
}

/// Builds the program and data image for `spec`.
pub fn generate(spec: &KernelSpec, cfg: &KernelConfig) -> Result<GeneratedKernel, KernelError> {
    spec.validate()?;
    let lay = layout(spec);
    let need = lay.end - DATA_BASE;
    if need > cfg.operand_budget {
        return Err(KernelError::DoesNotFit {
            need,
            budget: cfg.operand_budget,
        });
    }
    let fmt = spec.fmt;
    let (dims, asm) = match spec.kernel {
        Kernel::Gemm { m, n, k } => ([m, n, k], codegen::gemm(&lay, k, n, fmt, spec.mode)),
        Kernel::Gemv { m, n } => ([m, n, 1], codegen::gemv(&lay, n, fmt, spec.mode)),
        Kernel::Softmax { len } => ([len, 1, 1], codegen::softmax(&lay, fmt, spec.mode)),
    };
    let words = assemble(&asm)?.words;
    let text_bytes = 4 * words.len() as u32;
    if text_bytes > DATA_BASE {
        return Err(KernelError::TextTooLarge(text_bytes));
    }

    let mut image = vec![0u8; need as usize];
    let put = |image: &mut [u8], addr: u32, len: u32, v: u32| {
        let off = (addr - DATA_BASE) as usize;
        image[off..off + len as usize].copy_from_slice(&v.to_le_bytes()[..len as usize]);
    };
    let pcsr = if spec.mode == Mode::Unified { fmt.pcsr() } else { 0 };
    for (i, v) in dims.iter().chain([pcsr].iter()).enumerate() {
        put(&mut image, DATA_BASE + 4 * i as u32, 4, *v);
    }
    if let Kernel::Softmax { .. } = spec.kernel {
        let cfmt = if spec.mode == Mode::Unified { fmt } else { ElemFormat::Fp32 };
        for (i, c) in codegen::SOFTMAX_CONSTS.iter().enumerate() {
            put(&mut image, DATA_BASE + HEADER_BYTES + 4 * i as u32, cfmt.bytes(), cfmt.encode(*c));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let esz = fmt.bytes();
    let mut inputs = Vec::new();
    for (idx, &addr) in lay.inputs.iter().enumerate() {
        let next = lay.inputs.get(idx + 1).copied().unwrap_or(lay.output);
        let count = (next - addr) / esz;
        let mut vals = Vec::with_capacity(count as usize);
        for e in 0..count {
            let bits = fmt.encode(rng.gen_range(-1.0..=1.0));
            put(&mut image, addr + e * esz, esz, bits);
            vals.push(fmt.decode(bits));
        }
        inputs.push(vals);
    }

    Ok(GeneratedKernel {
        spec: *spec,
        asm,
        words,
        data: vec![DataSegment {
            addr: DATA_BASE,
            bytes: image,
        }],
        layout: lay,
        inputs,
    })
}

/// Softmax program text for `len` elements.
pub fn softmax_program(len: u32, fmt: ElemFormat, mode: Mode) -> Result<String, KernelError> {
    let spec = KernelSpec::new(Kernel::Softmax { len }, fmt, mode, 0);
    spec.validate()?;
    Ok(codegen::softmax(&layout(&spec), fmt, mode))
}

/// float64 reference output computed from the decoded inputs.
pub fn reference(kernel: Kernel, inputs: &[Vec<f64>]) -> Vec<f64> {
    match kernel {
        Kernel::Gemm { m, n, k } => {
            let (a, b) = (&inputs[0], &inputs[1]);
            let (m, n, k) = (m as usize, n as usize, k as usize);
            let mut c = vec![0.0; m * n];
            for i in 0..m {
                for j in 0..n {
                    c[i * n + j] = (0..k).map(|kk| a[i * k + kk] * b[kk * n + j]).sum();
                }
            }
            c
        }
        Kernel::Gemv { m, n } => {
            let (a, x) = (&inputs[0], &inputs[1]);
            let n = n as usize;
            (0..m as usize)
                .map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum())
                .collect()
        }
        Kernel::Softmax { .. } => {
            let x = &inputs[0];
            let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let e: Vec<f64> = x.iter().map(|v| (v - max).exp()).collect();
            let s: f64 = e.iter().sum();
            e.iter().map(|v| v / s).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub kernel: String,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub len: Option<u32>,
    pub fmt: String,
    pub mode: String,
    pub seed: u64,
    pub cycles: u64,
    pub instret: u64,
    pub flops: u64,
    pub freq_mhz: f64,
    pub mflops: f64,
    pub max_rel_err: f64,
    pub mean_rel_err: f64,
    pub footprint_bytes: u32,
}

/// Result of one run: the report plus the decoded outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub report: KernelReport,
    pub outputs: Vec<f64>,
    pub reference: Vec<f64>,
}

/// Generates, runs and measures `spec`.
pub fn evaluate(spec: &KernelSpec, cfg: &KernelConfig) -> Result<Evaluation, KernelError> {
    let g = generate(spec, cfg)?;
    let mut state = load_words(&g.words, 0, &g.data, cfg.mem_bytes()).map_err(|_| KernelError::DoesNotFit {
        need: g.layout.end - DATA_BASE,
        budget: cfg.operand_budget,
    })?;
    state.cost = cfg.cost;
    let out = state.run(cfg.max_cycles);
    if !out.halt.is_clean() {
        return Err(KernelError::Halted(out.halt));
    }

    let esz = spec.fmt.bytes();
    let count = (g.layout.end - g.layout.output) / esz;
    let outputs: Vec<f64> = (0..count)
        .map(|i| {
            let bits = state.read(g.layout.output + i * esz, esz).expect("in bounds");
            spec.fmt.decode(bits)
        })
        .collect();
    let reference = reference(spec.kernel, &g.inputs);
    let (max_rel_err, mean_rel_err) = rel_errors(&outputs, &reference);

    let (m, n, k, len) = match spec.kernel {
        Kernel::Gemm { m, n, k } => (Some(m), Some(n), Some(k), None),
        Kernel::Gemv { m, n } => (Some(m), Some(n), None, None),
        Kernel::Softmax { len } => (None, None, None, Some(len)),
    };
    let report = KernelReport {
        kernel: spec.kernel.name().into(),
        m,
        n,
        k,
        len,
        fmt: spec.fmt.to_string(),
        mode: spec.mode.to_string(),
        seed: spec.seed,
        cycles: state.cycles,
        instret: state.instret,
        flops: state.flops,
        freq_mhz: cfg.freq_mhz,
        mflops: state.flops as f64 * cfg.freq_mhz / state.cycles as f64,
        max_rel_err,
        mean_rel_err,
        footprint_bytes: spec.footprint_bytes(),
    };
    Ok(Evaluation {
        report,
        outputs,
        reference,
    })
}

/// Max and mean of |got − want| / |want| over entries with a nonzero
/// reference.
pub fn rel_errors(got: &[f64], want: &[f64]) -> (f64, f64) {
    let errs: Vec<f64> = got
        .iter()
        .zip(want)
        .filter(|(_, w)| **w != 0.0)
        .map(|(g, w)| ((g - w) / w).abs())
        .collect();
    if errs.is_empty() {
        return (0.0, 0.0);
    }
    let max = errs.iter().copied().fold(0.0, f64::max);
    (max, errs.iter().sum::<f64>() / errs.len() as f64)
}
