//! The unified posit/binary32 execution unit.
//!
//! Source operands whose `pcsr` slot selects posit are decoded to binary32
//! before the operation; a posit result slot encodes the binary32 result on
//! the way out. With every `pfmt` bit clear the unit is exactly the soft
//! binary32 core.

use serde::{Deserialize, Serialize};

use crate::fp32::{
    self, CmpKind, ExceptionFlags, FmaVariant, Fp32Bits, RoundingMode,
};
use crate::posit::{self, PositFormat, PositValue, Precision};

pub const RESULT_SLOT: usize = 3;

/// Format configuration of one operand slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotConfig {
    pub posit: bool,
    pub prec: Precision,
    pub es: u8,
}

impl SlotConfig {
    pub const FP32: SlotConfig = SlotConfig {
        posit: false,
        prec: Precision::P8,
        es: 0,
    };

    pub fn posit(fmt: PositFormat) -> Self {
        SlotConfig {
            posit: true,
            prec: fmt.prec,
            es: fmt.es,
        }
    }

    pub fn format(self) -> PositFormat {
        PositFormat {
            prec: self.prec,
            es: self.es,
        }
    }
}

/// The posit control register: slots 0..2 are sources a, b, c; slot 3 is
/// the result.
///
/// Packed layout: `[19:8]` pes (slot i at bits `8+3i..`), `[7:4]` pprec
/// (1 = 16-bit), `[3:0]` pfmt (1 = posit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pcsr {
    pub slots: [SlotConfig; 4],
}

impl Default for Pcsr {
    fn default() -> Self {
        Pcsr {
            slots: [SlotConfig::FP32; 4],
        }
    }
}

impl Pcsr {
    pub const MASK: u32 = 0x000F_FFFF;

    /// Every slot in the same posit format.
    pub fn uniform(fmt: PositFormat) -> Self {
        Pcsr {
            slots: [SlotConfig::posit(fmt); 4],
        }
    }

    pub fn pack(&self) -> u32 {
        let mut w = 0;
        for (i, s) in self.slots.iter().enumerate() {
            w |= (s.posit as u32) << i;
            w |= ((s.prec == Precision::P16) as u32) << (4 + i);
            w |= (s.es as u32 & 7) << (8 + 3 * i);
        }
        w
    }

    /// Bits above 19 are ignored.
    pub fn unpack(word: u32) -> Self {
        let mut slots = [SlotConfig::FP32; 4];
        for (i, s) in slots.iter_mut().enumerate() {
            s.posit = (word >> i) & 1 == 1;
            s.prec = if (word >> (4 + i)) & 1 == 1 {
                Precision::P16
            } else {
                Precision::P8
            };
            s.es = ((word >> (8 + 3 * i)) & 7) as u8;
        }
        Pcsr { slots }
    }

    pub fn all_fp32(&self) -> bool {
        self.slots.iter().all(|s| !s.posit)
    }
}

/// Explicit-format conversions issued by the custom `fcvt` instructions.
/// These ignore `pfmt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositConversion {
    FpToPosit { dst: PositFormat },
    PositToFp { src: PositFormat },
    PositToPosit { src: PositFormat, dst: PositFormat },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SgnjKind {
    Sgnj,
    Sgnjn,
    Sgnjx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FpuOp {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Fma(FmaVariant),
    Cmp(CmpKind),
    Min,
    Max,
    Classify,
    Sgnj(SgnjKind),
    /// `fmv.x.w`: raw register word to integer.
    MvXW,
    /// `fmv.w.x`: raw integer to register word.
    MvWX,
    /// `fcvt.w[u].s`
    CvtToInt { signed: bool },
    /// `fcvt.s.w[u]`
    CvtFromInt { signed: bool },
    PositCvt(PositConversion),
}

impl FpuOp {
    pub fn arity(self) -> usize {
        match self {
            FpuOp::Fma(_) => 3,
            FpuOp::Add
            | FpuOp::Sub
            | FpuOp::Mul
            | FpuOp::Div
            | FpuOp::Cmp(_)
            | FpuOp::Min
            | FpuOp::Max
            | FpuOp::Sgnj(_) => 2,
            _ => 1,
        }
    }

    pub fn class(self) -> LatencyClass {
        match self {
            FpuOp::Add | FpuOp::Sub | FpuOp::Mul | FpuOp::Fma(_) => LatencyClass::AddMul,
            FpuOp::Div | FpuOp::Sqrt => LatencyClass::DivSqrt,
            FpuOp::Cmp(_)
            | FpuOp::Min
            | FpuOp::Max
            | FpuOp::Classify
            | FpuOp::Sgnj(_)
            | FpuOp::MvXW
            | FpuOp::MvWX => LatencyClass::Comp,
            FpuOp::CvtToInt { .. } | FpuOp::CvtFromInt { .. } => LatencyClass::Conv,
            FpuOp::PositCvt(_) => LatencyClass::PositConv,
        }
    }

    /// Floating-point operations counted for throughput (fused ops count 2).
    pub fn flops(self) -> u64 {
        match self {
            FpuOp::Fma(_) => 2,
            FpuOp::Add | FpuOp::Sub | FpuOp::Mul | FpuOp::Div | FpuOp::Sqrt => 1,
            _ => 0,
        }
    }

    /// Whether the result is an integer written to `rd` in the x file.
    pub fn int_result(self) -> bool {
        matches!(
            self,
            FpuOp::Cmp(_) | FpuOp::Classify | FpuOp::MvXW | FpuOp::CvtToInt { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatencyClass {
    AddMul,
    DivSqrt,
    Comp,
    Conv,
    PositConv,
}

/// Cycles charged per FPU operation class: one issue cycle plus one per
/// pipeline register level, and a fixed iteration count for div/sqrt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpuLatency {
    pub addmul: u32,
    pub divsqrt: u32,
    pub comp: u32,
    pub conv: u32,
    pub posit_conv: u32,
}

impl Default for FpuLatency {
    fn default() -> Self {
        FpuLatency {
            addmul: 3,
            divsqrt: 1 + 12,
            comp: 1,
            conv: 2,
            posit_conv: 2,
        }
    }
}

impl FpuLatency {
    pub fn of(&self, class: LatencyClass) -> u32 {
        match class {
            LatencyClass::AddMul => self.addmul,
            LatencyClass::DivSqrt => self.divsqrt,
            LatencyClass::Comp => self.comp,
            LatencyClass::Conv => self.conv,
            LatencyClass::PositConv => self.posit_conv,
        }
    }
}

/// Latency of `op` under the default cost model.
pub fn latency(op: FpuOp) -> u32 {
    FpuLatency::default().of(op.class())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpuRequest {
    pub op: FpuOp,
    pub operands: [u32; 3],
    pub pcsr: Pcsr,
    pub rm: RoundingMode,
}

impl FpuRequest {
    /// Panics if the operand count does not match the op's arity.
    pub fn new(op: FpuOp, operands: &[u32], pcsr: Pcsr, rm: RoundingMode) -> Self {
        assert_eq!(
            operands.len(),
            op.arity(),
            "{op:?} takes {} operands",
            op.arity()
        );
        let mut ops = [0; 3];
        ops[..operands.len()].copy_from_slice(operands);
        FpuRequest {
            op,
            operands: ops,
            pcsr,
            rm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpuResponse {
    pub result: u32,
    pub flags: ExceptionFlags,
    pub latency: u32,
}

/// Executes with the default latency table.
pub fn execute(req: &FpuRequest) -> FpuResponse {
    execute_with(req, &FpuLatency::default())
}

pub fn execute_with(req: &FpuRequest, lat: &FpuLatency) -> FpuResponse {
    let (result, flags) = compute(req);
    FpuResponse {
        result,
        flags,
        latency: lat.of(req.op.class()),
    }
}

fn compute(req: &FpuRequest) -> (u32, ExceptionFlags) {
    let rm = req.rm;
    let pcsr = &req.pcsr;
    let mut flags = ExceptionFlags::empty();
    let mut src = |i: usize| -> Fp32Bits {
        let slot = pcsr.slots[i];
        let w = req.operands[i];
        if slot.posit {
            let (f, fl) = posit::posit_to_fp32(PositValue::from_low_bits(w, slot.format()), rm);
            flags |= fl;
            f
        } else {
            Fp32Bits(w)
        }
    };

    let fp_result: (Fp32Bits, ExceptionFlags) = match req.op {
        FpuOp::Add => {
            let (a, b) = (src(0), src(1));
            fp32::fp_add(a, b, rm)
        }
        FpuOp::Sub => {
            let (a, b) = (src(0), src(1));
            fp32::fp_sub(a, b, rm)
        }
        FpuOp::Mul => {
            let (a, b) = (src(0), src(1));
            fp32::fp_mul(a, b, rm)
        }
        FpuOp::Div => {
            let (a, b) = (src(0), src(1));
            fp32::fp_div(a, b, rm)
        }
        FpuOp::Sqrt => fp32::fp_sqrt(src(0), rm),
        FpuOp::Fma(v) => {
            let (a, b, c) = (src(0), src(1), src(2));
            fp32::fp_fma(a, b, c, rm, v)
        }
        FpuOp::Min => {
            let (a, b) = (src(0), src(1));
            fp32::fp_min(a, b)
        }
        FpuOp::Max => {
            let (a, b) = (src(0), src(1));
            fp32::fp_max(a, b)
        }
        FpuOp::CvtFromInt { signed } => fp32::int_to_fp(req.operands[0], rm, signed),

        // Integer results bypass the result encoder.
        FpuOp::Cmp(kind) => {
            let (a, b) = (src(0), src(1));
            let (r, fl) = fp32::fp_cmp(a, b, kind);
            return (r as u32, flags | fl);
        }
        FpuOp::Classify => {
            let a = src(0);
            return (fp32::fp_classify(a), flags);
        }
        FpuOp::CvtToInt { signed } => {
            let a = src(0);
            let (r, fl) = fp32::fp_to_int(a, rm, signed);
            return (r, flags | fl);
        }

        // Raw bit operations never touch the codecs.
        FpuOp::Sgnj(kind) => {
            let (a, b) = (req.operands[0], req.operands[1]);
            let sign = match kind {
                SgnjKind::Sgnj => b,
                SgnjKind::Sgnjn => !b,
                SgnjKind::Sgnjx => a ^ b,
            } & 0x8000_0000;
            return ((a & 0x7FFF_FFFF) | sign, flags);
        }
        FpuOp::MvXW | FpuOp::MvWX => return (req.operands[0], flags),

        FpuOp::PositCvt(conv) => return posit_conversion(conv, req.operands[0], rm),
    };

    let (f, fl) = fp_result;
    flags |= fl;
    let out = pcsr.slots[RESULT_SLOT];
    if out.posit {
        let (p, fl) = posit::fp32_to_posit(f, out.prec, out.es);
        (p.bits(), flags | fl)
    } else {
        (f.0, flags)
    }
}

fn posit_conversion(conv: PositConversion, word: u32, rm: RoundingMode) -> (u32, ExceptionFlags) {
    match conv {
        PositConversion::FpToPosit { dst } => {
            let (p, fl) = posit::fp32_to_posit(Fp32Bits(word), dst.prec, dst.es);
            (p.bits(), fl)
        }
        PositConversion::PositToFp { src } => {
            let (f, fl) = posit::posit_to_fp32(PositValue::from_low_bits(word, src), rm);
            (f.0, fl)
        }
        PositConversion::PositToPosit { src, dst } => {
            let p = PositValue::from_low_bits(word, src);
            let (q, exact) =
                posit::encode_with_exactness(&posit::decode_posit(p), dst);
            let fl = if exact {
                ExceptionFlags::empty()
            } else {
                ExceptionFlags::NX
            };
            (q.bits(), fl)
        }
    }
}
