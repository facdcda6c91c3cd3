//! Assembly generators for the benchmark kernels.
//!
//! Every element is moved between memory and the f-registers with integer
//! loads/stores plus `fmv`, so FP32 and posit programs differ only in the
//! load/store width. Convert mode wraps each loaded operand in
//! `fcvt.s.pN` and each stored result in `fcvt.pN.s`.

use std::fmt::Write as _;

use super::{ElemFormat, Layout, Mode, HEADER_BYTES};

struct Asm {
    text: String,
    fmt: ElemFormat,
    mode: Mode,
}

impl Asm {
    fn new(fmt: ElemFormat, mode: Mode) -> Self {
        Asm {
            text: String::new(),
            fmt,
            mode,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        let s = s.as_ref();
        if s.ends_with(':') {
            let _ = writeln!(self.text, "{s}");
        } else {
            let _ = writeln!(self.text, "    {s}");
        }
    }

    fn convert(&self) -> bool {
        self.mode == Mode::Convert
    }

    /// Header load and the single pcsr write for unified posit runs.
    fn prologue(&mut self, data: u32) {
        self.line(format!("li a0, {data:#x}"));
        self.line("lw s6, 0(a0)");
        if self.mode == Mode::Unified && self.fmt.is_posit() {
            self.line("lw t0, 12(a0)");
            self.line("csrw pcsr, t0");
        }
    }

    /// Loads element `off(base)` into `freg` through `tmp`.
    fn load_elem(&mut self, tmp: &str, off: i64, base: &str, freg: &str) {
        self.line(format!("{} {tmp}, {off}({base})", self.fmt.load_mnemonic()));
        self.line(format!("fmv.w.x {freg}, {tmp}"));
    }

    fn widen(&mut self, freg: &str) {
        if self.convert() {
            self.line(format!("fcvt.s.{} {freg}, {freg}, {}", self.fmt.prec_token(), self.fmt.es()));
        }
    }

    /// Stores `freg` to `0(base)`, converting first in convert mode.
    fn store_elem(&mut self, freg: &str, scratch: &str, tmp: &str, base: &str) {
        let src = if self.convert() {
            self.line(format!("fcvt.{}.s {scratch}, {freg}, {}", self.fmt.prec_token(), self.fmt.es()));
            scratch
        } else {
            freg
        };
        self.line(format!("fmv.x.w {tmp}, {src}"));
        self.line(format!("{} {tmp}, 0({base})", self.fmt.store_mnemonic()));
    }
}

/// C = A·B with A m×k, B k×n, all row-major; the k loop is unrolled.
pub(super) fn gemm(layout: &Layout, k: u32, n: u32, fmt: ElemFormat, mode: Mode) -> String {
    let esz = fmt.bytes() as i64;
    let mut a = Asm::new(fmt, mode);
    a.prologue(layout.data);
    a.line("lw s5, 4(a0)");
    a.line(format!("li s0, {:#x}", layout.inputs[0]));
    a.line(format!("li s2, {:#x}", layout.output));
    a.line("row:");
    a.line(format!("li s1, {:#x}", layout.inputs[1]));
    a.line("mv s4, s5");
    a.line("col:");
    a.line("fmv.w.x f0, x0");
    a.line("mv t4, s1");
    let stride = n as i64 * esz;
    let mut b_base = 0i64;
    for kk in 0..k as i64 {
        let b_off = kk * stride;
        while b_off - b_base > 2047 {
            let step = (b_off - b_base).min(2032);
            a.line(format!("addi t4, t4, {step}"));
            b_base += step;
        }
        a.load_elem("t1", kk * esz, "s0", "f1");
        a.load_elem("t2", b_off - b_base, "t4", "f2");
        a.widen("f1");
        a.widen("f2");
        a.line("fmadd.s f0, f1, f2, f0");
    }
    a.store_elem("f0", "f3", "t3", "s2");
    a.line(format!("addi s2, s2, {esz}"));
    a.line(format!("addi s1, s1, {esz}"));
    a.line("addi s4, s4, -1");
    a.line("bnez s4, col");
    a.line(format!("addi s0, s0, {}", k as i64 * esz));
    a.line("addi s6, s6, -1");
    a.line("bnez s6, row");
    a.line("ecall");
    a.text
}

/// y = A·x with A m×n row-major; the n loop is unrolled.
pub(super) fn gemv(layout: &Layout, n: u32, fmt: ElemFormat, mode: Mode) -> String {
    let esz = fmt.bytes() as i64;
    let mut a = Asm::new(fmt, mode);
    a.prologue(layout.data);
    a.line(format!("li s0, {:#x}", layout.inputs[0]));
    a.line(format!("li s1, {:#x}", layout.inputs[1]));
    a.line(format!("li s2, {:#x}", layout.output));
    a.line("row:");
    a.line("fmv.w.x f0, x0");
    for j in 0..n as i64 {
        a.load_elem("t1", j * esz, "s0", "f1");
        a.load_elem("t2", j * esz, "s1", "f2");
        a.widen("f1");
        a.widen("f2");
        a.line("fmadd.s f0, f1, f2, f0");
    }
    a.store_elem("f0", "f3", "t3", "s2");
    a.line(format!("addi s2, s2, {esz}"));
    a.line(format!("addi s0, s0, {}", n as i64 * esz));
    a.line("addi s6, s6, -1");
    a.line("bnez s6, row");
    a.line("ecall");
    a.text
}

/// Constants used by softmax, in table order.
pub(super) const SOFTMAX_CONSTS: [f64; 6] = [
    std::f64::consts::LOG2_E,
    std::f64::consts::LN_2,
    0.5,
    1.0 / 24.0,
    1.0 / 6.0,
    1.0,
];

/// Numerically stable softmax: max pass, exp by range reduction
/// (t = n·ln2 + r) with a degree-4 Horner polynomial in r and a halving
/// loop for 2^n (n ≤ 0), accumulate, then divide.
pub(super) fn softmax(layout: &Layout, fmt: ElemFormat, mode: Mode) -> String {
    let esz = fmt.bytes() as i64;
    let mut a = Asm::new(fmt, mode);
    a.prologue(layout.data);

    // Constants are stored in the compute format, one per word.
    let const_load = if mode == Mode::Unified { fmt.load_mnemonic() } else { "lw" };
    for (i, reg) in ["f10", "f11", "f12", "f13", "f14", "f16"].iter().enumerate() {
        a.line(format!("{const_load} t0, {}(a0)", HEADER_BYTES as usize + 4 * i));
        a.line(format!("fmv.w.x {reg}, t0"));
    }
    // c2 = 1/2 shares the register holding 0.5.
    a.line("fmv.s f15, f12");

    a.line(format!("li s0, {:#x}", layout.inputs[0]));
    a.load_elem("t1", 0, "s0", "f0");
    a.widen("f0");
    a.line("addi s1, s6, -1");
    a.line(format!("addi s0, s0, {esz}"));
    a.line("beqz s1, max_done");
    a.line("max_loop:");
    a.load_elem("t1", 0, "s0", "f1");
    a.widen("f1");
    a.line("fmax.s f0, f0, f1");
    a.line(format!("addi s0, s0, {esz}"));
    a.line("addi s1, s1, -1");
    a.line("bnez s1, max_loop");
    a.line("max_done:");

    a.line("fmv.w.x f20, x0");
    a.line(format!("li s0, {:#x}", layout.inputs[0]));
    a.line(format!("li s2, {:#x}", layout.output));
    a.line("mv s1, s6");
    a.line("exp_loop:");
    a.load_elem("t1", 0, "s0", "f1");
    a.widen("f1");
    a.line("fsub.s f1, f1, f0");
    a.line("fmul.s f2, f1, f10");
    a.line("fcvt.w.s t2, f2, rne");
    a.line("fcvt.s.w f3, t2");
    a.line("fnmsub.s f4, f3, f11, f1");
    a.line("fmadd.s f5, f13, f4, f14");
    a.line("fmadd.s f5, f5, f4, f15");
    a.line("fmadd.s f5, f5, f4, f16");
    a.line("fmadd.s f5, f5, f4, f16");
    a.line("bgez t2, scaled");
    a.line("scale:");
    a.line("fmul.s f5, f5, f12");
    a.line("addi t2, t2, 1");
    a.line("bnez t2, scale");
    a.line("scaled:");
    a.line("fadd.s f20, f20, f5");
    a.store_elem("f5", "f6", "t3", "s2");
    a.line(format!("addi s0, s0, {esz}"));
    a.line(format!("addi s2, s2, {esz}"));
    a.line("addi s1, s1, -1");
    a.line("bnez s1, exp_loop");

    a.line(format!("li s2, {:#x}", layout.output));
    a.line("mv s1, s6");
    a.line("norm_loop:");
    a.load_elem("t1", 0, "s2", "f1");
    a.widen("f1");
    a.line("fdiv.s f1, f1, f20");
    a.store_elem("f1", "f6", "t3", "s2");
    a.line(format!("addi s2, s2, {esz}"));
    a.line("addi s1, s1, -1");
    a.line("bnez s1, norm_loop");
    a.line("ecall");
    a.text
}
